//! Max-min coherent information against an adversarial (possibly mixed) environment.

use rayon::prelude::*;

use super::{clean, to_ball, CapacityResult, Diagnostics, EnvState, OptimizerOptions};
use crate::channels::BipartiteUnitary;
use crate::error::Result;
use crate::linalg::{
    eigvals_unchecked, matrix_entropy, partial_trace, spectrum_entropy, ComplexMatrix,
    DensityMatrix, Keep, C64, ZERO,
};
use crate::optimize::{nelder_mead, NelderMeadOptions};

/// Points per axis of the Cartesian grid over the input Bloch ball.
pub const JAMMER_OUTER_GRID: usize = 9;
/// Points per axis of the Cartesian grid over the jammer's Bloch ball.
pub const JAMMER_INNER_GRID: usize = 17;

fn ball_grid(n: usize) -> Vec<[f64; 3]> {
    let coord = |i: usize| -1.0 + 2.0 * i as f64 / (n - 1) as f64;
    let mut pts = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let p = [coord(i), coord(j), coord(k)];
                if p.iter().map(|x| x * x).sum::<f64>() <= 1.0 + 1e-12 {
                    pts.push(p);
                }
            }
        }
    }
    pts
}

/// For a fixed input ρ, the R⊗B output is linear in η: ρ_RB(η) = Σ η_{ee'} Y_{ee'}.
struct FixedInput {
    blocks: Vec<ComplexMatrix>,
    dim_e: usize,
    dim_rb: usize,
    dim_b: usize,
}

impl FixedInput {
    fn new(v: &BipartiteUnitary, rho: &DensityMatrix) -> Self {
        let (da, de, db, df) = (v.dim_a(), v.dim_e(), v.dim_b(), v.dim_f());
        // Purification Σ_k √p_k |k⟩_R |u_k⟩_A.
        let parts = rho.spectral_decomposition(0.0);
        let m = v.matrix();
        let outputs: Vec<Vec<C64>> = (0..de)
            .map(|e| {
                let mut phi = vec![ZERO; da * db * df];
                for (k, (p, u)) in parts.iter().enumerate() {
                    let w = p.sqrt();
                    for row in 0..db * df {
                        let s: C64 = (0..da)
                            .map(|a| m[(row, a * de + e)] * u.amplitudes()[a])
                            .sum();
                        phi[k * db * df + row] += s * w;
                    }
                }
                phi
            })
            .collect();
        let dim_rb = da * db;
        let mut blocks = Vec::with_capacity(de * de);
        for e in 0..de {
            for f in 0..de {
                let outer = ComplexMatrix::outer(&outputs[e], &outputs[f]);
                blocks.push(partial_trace(&outer, (dim_rb, df), Keep::First).expect("split"));
            }
        }
        Self {
            blocks,
            dim_e: de,
            dim_rb,
            dim_b: db,
        }
    }

    fn coherent_info(&self, eta: &ComplexMatrix) -> f64 {
        let mut rb = ComplexMatrix::zeros(self.dim_rb, self.dim_rb);
        for e in 0..self.dim_e {
            for f in 0..self.dim_e {
                let w = eta[(e, f)];
                if w != ZERO {
                    rb = &rb + &self.blocks[e * self.dim_e + f].scale(w);
                }
            }
        }
        let dr = self.dim_rb / self.dim_b;
        let b = partial_trace(&rb, (dr, self.dim_b), Keep::Second).expect("split");
        spectrum_entropy(&eigvals_unchecked(&b)) - matrix_entropy(&rb)
    }
}

struct InnerMin {
    value: f64,
    eta: [f64; 3],
    evaluations: usize,
}

fn inner_min(fixed: &FixedInput, grid: &[[f64; 3]], opts: &OptimizerOptions) -> InnerMin {
    let eval = |r: [f64; 3]| fixed.coherent_info(DensityMatrix::from_bloch_unchecked(r).matrix());
    let mut best = (f64::INFINITY, [0.0; 3]);
    for &p in grid {
        let v = eval(p);
        if v < best.0 - 1e-12 {
            best = (v, p);
        }
    }
    let m = nelder_mead(
        |x| eval(to_ball(x)),
        &best.1,
        &NelderMeadOptions {
            step: 1.0 / (JAMMER_INNER_GRID - 1) as f64,
            ..opts.nm(0.0)
        },
    );
    let (value, eta) = if m.value < best.0 {
        (m.value, to_ball(&m.x))
    } else {
        best
    };
    InnerMin {
        value,
        eta,
        evaluations: grid.len() + m.evaluations,
    }
}

/// Estimate of max over ρ of min over mixed η of I_c(ρ; N_η) for qubit gates.
///
/// Both searches are Cartesian grids over the Bloch ball followed by Nelder–Mead refinement;
/// the result is an estimate, not a certified saddle point.
pub fn jammer_value_single(
    v: &BipartiteUnitary,
    opts: &OptimizerOptions,
) -> Result<CapacityResult> {
    opts.validate()?;
    v.require_qubits()?;
    let outer = ball_grid(JAMMER_OUTER_GRID);
    let inner = ball_grid(JAMMER_INNER_GRID);
    let objective = |r: [f64; 3]| {
        let rho = DensityMatrix::from_bloch_unchecked(r);
        inner_min(&FixedInput::new(v, &rho), &inner, opts)
    };

    let scores: Vec<InnerMin> = outer.par_iter().map(|&r| objective(r)).collect();
    let mut evaluations: usize = scores.iter().map(|s| s.evaluations).sum();
    let best = scores.iter().enumerate().fold(0, |b, (k, s)| {
        if s.value > scores[b].value + 1e-12 {
            k
        } else {
            b
        }
    });

    let refine = nelder_mead(
        |x| -objective(to_ball(x)).value,
        &outer[best],
        &NelderMeadOptions {
            step: 1.0 / (JAMMER_OUTER_GRID - 1) as f64,
            ftol: opts.tol,
            xtol: opts.tol.sqrt().max(1e-4),
            max_iters: opts.max_iters.min(200),
        },
    );
    evaluations += refine.evaluations;
    let (input, at) = if -refine.value > scores[best].value {
        let r = to_ball(&refine.x);
        (r, objective(r))
    } else {
        (outer[best], objective(outer[best]))
    };
    Ok(CapacityResult {
        value: clean(at.value),
        argmax_input: DensityMatrix::from_bloch_unchecked(input),
        argmax_env: Some(EnvState::Mixed(DensityMatrix::from_bloch_unchecked(at.eta))),
        diagnostics: Diagnostics {
            iterations: refine.iterations,
            evaluations,
            restarts: 1,
            restart_spread: 0.0,
            raw_value: at.value,
            converged: refine.converged,
            outer_grid: outer.len(),
            inner_grid: inner.len(),
        },
    })
}
