//! Coherent-information objectives and their optimizers.

mod curves;
mod helper;
mod jammer;
mod two_copy;

pub use curves::{a1_spec, a2_spec, a3_spec, b1_spec, b2_spec, A3Curve};
pub use helper::{
    eh_coherent_info, swap_gamma_eh_closed_form, swap_gamma_eh_max, swap_gamma_eh_value, LOGIT_SPAN,
};
pub use jammer::{jammer_value_single, JAMMER_INNER_GRID, JAMMER_OUTER_GRID};
pub use two_copy::{
    a1_closed_form, find_zero_crossing, two_copy_coherent_info, two_copy_output_states, TwoCopySpec,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channels::{effective_channel_pure, BipartiteUnitary, KrausChannel};
use crate::degradability::{
    bloch_grid, channel_index, classify_index, ChannelClass, SYMMETRIC_TOL,
};
use crate::error::{mismatch, Error, Result};
use crate::linalg::random::random_ball_point;
use crate::linalg::{matrix_entropy, ComplexMatrix, DensityMatrix, PureState};
use crate::optimize::{nelder_mead, NelderMeadOptions};

/// Reported values with magnitude at or below this are printed as exact zeros.
pub const NOISE_FLOOR: f64 = 1e-12;
/// Capacities at or below this many bits count as zero.
pub const ZERO_CAPACITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOptions {
    pub restarts: usize,
    pub grid: usize,
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            restarts: 8,
            grid: 64,
            tol: 1e-8,
            max_iters: 500,
            seed: 20_240_917,
        }
    }
}

impl OptimizerOptions {
    pub fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::OutOfRange {
                name: "tol",
                value: self.tol,
                range: "(0, inf)",
            });
        }
        if self.restarts == 0 || self.grid == 0 || self.max_iters == 0 {
            return Err(Error::OutOfRange {
                name: "restarts/grid/max_iters",
                value: 0.0,
                range: "[1, inf)",
            });
        }
        Ok(())
    }

    pub(crate) fn nm(&self, step: f64) -> NelderMeadOptions {
        NelderMeadOptions {
            ftol: self.tol * 1e-2,
            xtol: self.tol.sqrt(),
            max_iters: self.max_iters,
            step,
        }
    }
}

/// Environment state attaining an optimum.
#[derive(Debug, Clone, PartialEq)]
pub enum EnvState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    pub iterations: usize,
    pub evaluations: usize,
    pub restarts: usize,
    /// Largest minus smallest value reached across restarts.
    pub restart_spread: f64,
    /// Optimum before clamping at zero.
    pub raw_value: f64,
    pub converged: bool,
    /// Grid points scanned in the outer (environment or input) search.
    pub outer_grid: usize,
    /// Grid points scanned per inner search.
    pub inner_grid: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    pub value: f64,
    pub argmax_input: DensityMatrix,
    pub argmax_env: Option<EnvState>,
    pub diagnostics: Diagnostics,
}

pub(crate) fn clean(x: f64) -> f64 {
    if x.abs() <= NOISE_FLOOR {
        0.0
    } else {
        x
    }
}

/// Maps R³ onto the closed unit ball, radially clamping points outside it.
pub(crate) fn to_ball(x: &[f64]) -> [f64; 3] {
    let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let s = if n > 1.0 { 1.0 / n } else { 1.0 };
    [x[0] * s, x[1] * s, x[2] * s]
}

/// S(N(ρ)) − S(Ñ(ρ)) in bits.
pub fn coherent_info(c: &KrausChannel, rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != c.dim_in() {
        return Err(mismatch(c.dim_in(), rho.dim()));
    }
    Ok(coherent_info_matrix(c, rho.matrix()))
}

pub(crate) fn coherent_info_matrix(c: &KrausChannel, rho: &ComplexMatrix) -> f64 {
    matrix_entropy(&c.apply_matrix(rho)) - matrix_entropy(&c.complement_matrix(rho))
}

struct InnerMax {
    value: f64,
    bloch: [f64; 3],
    iterations: usize,
    evaluations: usize,
    converged: bool,
}

fn maximize_from(c: &KrausChannel, start: [f64; 3], opts: &OptimizerOptions) -> InnerMax {
    let m = nelder_mead(
        |x| -coherent_info_matrix(c, DensityMatrix::from_bloch_unchecked(to_ball(x)).matrix()),
        &start,
        &opts.nm(0.3),
    );
    InnerMax {
        value: -m.value,
        bloch: to_ball(&m.x),
        iterations: m.iterations,
        evaluations: m.evaluations,
        converged: m.converged,
    }
}

/// Maximum of the coherent information of a qubit-input channel over the Bloch ball.
///
/// The first restart starts from the maximally mixed state, the rest from seeded random points.
pub fn max_coherent_info(c: &KrausChannel, opts: &OptimizerOptions) -> Result<CapacityResult> {
    opts.validate()?;
    if c.dim_in() != 2 {
        return Err(mismatch("qubit input", c.dim_in()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts: Vec<[f64; 3]> = (0..opts.restarts)
        .map(|k| {
            if k == 0 {
                [0.0; 3]
            } else {
                random_ball_point(&mut rng)
            }
        })
        .collect();
    let runs: Vec<InnerMax> = starts
        .par_iter()
        .map(|&s| maximize_from(c, s, opts))
        .collect();
    let best = runs.iter().enumerate().fold(0, |b, (k, r)| {
        if r.value > runs[b].value + 1e-12 {
            k
        } else {
            b
        }
    });
    let lo = runs.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    let hi = runs[best].value;
    Ok(CapacityResult {
        value: clean(hi),
        argmax_input: DensityMatrix::from_bloch_unchecked(runs[best].bloch),
        argmax_env: None,
        diagnostics: Diagnostics {
            iterations: runs.iter().map(|r| r.iterations).sum(),
            evaluations: runs.iter().map(|r| r.evaluations).sum(),
            restarts: runs.len(),
            restart_spread: hi - lo,
            raw_value: hi,
            converged: runs.iter().all(|r| r.converged),
            outer_grid: 0,
            inner_grid: 0,
        },
    })
}

// Single-start inner value used while scanning environments; anti-degradable and symmetric
// channels score zero without optimization.
fn env_score(v: &BipartiteUnitary, theta: f64, phi: f64, opts: &OptimizerOptions) -> (f64, usize) {
    let eta = PureState::from_bloch_angles(theta, phi);
    let c = effective_channel_pure(v, &eta).expect("qubit environment");
    match channel_index(&c).map(|i| classify_index(i, SYMMETRIC_TOL)) {
        Ok(ChannelClass::Degradable) => {
            let r = maximize_from(&c, [0.0; 3], opts);
            (r.value, r.evaluations)
        }
        _ => (0.0, 0),
    }
}

/// Single-copy capacity with a separable helper: max over pure η of max over ρ of I_c.
pub fn q_h_tensor(v: &BipartiteUnitary, opts: &OptimizerOptions) -> Result<CapacityResult> {
    opts.validate()?;
    v.require_qubits()?;
    let grid = bloch_grid(opts.grid);
    let scores: Vec<(f64, usize)> = grid
        .par_iter()
        .map(|&(t, p)| env_score(v, t, p, opts))
        .collect();
    let mut evaluations: usize = scores.iter().map(|s| s.1).sum();
    let best = scores
        .iter()
        .enumerate()
        .fold(0, |b, (k, s)| if s.0 > scores[b].0 + 1e-12 { k } else { b });
    let (theta0, phi0) = grid[best];

    let refine = nelder_mead(
        |x| -env_score(v, x[0], x[1], opts).0,
        &[theta0, phi0],
        &NelderMeadOptions {
            step: std::f64::consts::PI / opts.grid.max(2) as f64,
            ..opts.nm(0.0)
        },
    );
    evaluations += refine.evaluations;
    let (theta, phi) = if -refine.value >= scores[best].0 {
        (refine.x[0], refine.x[1])
    } else {
        (theta0, phi0)
    };
    let eta = PureState::from_bloch_angles(theta, phi);
    let channel = effective_channel_pure(v, &eta)?;
    let class = classify_index(channel_index(&channel)?, SYMMETRIC_TOL);
    let (raw, input, inner) = if class == ChannelClass::Degradable {
        let r = max_coherent_info(&channel, opts)?;
        (r.value, r.argmax_input, Some(r.diagnostics))
    } else {
        (0.0, DensityMatrix::maximally_mixed(2), None)
    };
    let inner = inner.unwrap_or_default();
    Ok(CapacityResult {
        value: clean(raw.max(0.0)),
        argmax_input: input,
        argmax_env: Some(EnvState::Pure(eta)),
        diagnostics: Diagnostics {
            iterations: refine.iterations + inner.iterations,
            evaluations: evaluations + inner.evaluations,
            restarts: inner.restarts,
            restart_spread: inner.restart_spread,
            raw_value: raw,
            converged: refine.converged && (inner.restarts == 0 || inner.converged),
            outer_grid: grid.len(),
            inner_grid: 0,
        },
    })
}
