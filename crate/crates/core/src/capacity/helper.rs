//! Helper entangled with the receiver: the channel A → B⊗H and the SWAP^γ closed forms.

use std::f64::consts::PI;

use super::{clean, coherent_info, CapacityResult, Diagnostics, EnvState, OptimizerOptions};
use crate::channels::{entangled_env_channel, BipartiteUnitary};
use crate::error::{Error, Result};
use crate::linalg::{spectrum_entropy, ComplexMatrix, DensityMatrix, PureState, C64, ONE};
use crate::optimize::{nelder_mead, NelderMeadOptions};

/// The μ axis of [`swap_gamma_eh_max`] is uniform in logit(μ) over [−LOGIT_SPAN, LOGIT_SPAN].
pub const LOGIT_SPAN: f64 = 36.0;

/// I_c(ρ; N_κ) with the helper dimension read off κ.
pub fn eh_coherent_info(
    v: &BipartiteUnitary,
    kappa: &PureState,
    rho: &DensityMatrix,
) -> Result<f64> {
    if !kappa.dim().is_multiple_of(v.dim_e()) {
        return Err(crate::error::mismatch(
            format!("a multiple of dimE = {}", v.dim_e()),
            kappa.dim(),
        ));
    }
    let c = entangled_env_channel(v, kappa, kappa.dim() / v.dim_e())?;
    coherent_info(&c, rho)
}

fn check_unit(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value: x,
            range: "[0, 1]",
        })
    }
}

struct Entries {
    d00: f64,
    d11: f64,
    d22: f64,
    d33: f64,
    coh: C64,
    f0: f64,
    f1: f64,
}

fn entries(gamma: f64, lambda: f64, mu: f64) -> Entries {
    let e = C64::from_polar(1.0, PI * gamma);
    let c2 = ((ONE + e) * 0.5).norm_sqr();
    let s2 = ((ONE - e) * 0.5).norm_sqr();
    let (l, m) = (lambda, mu);
    let coh = (C64::new(0.5, 0.0) - e.conj() * (m / 2.0) - e * ((1.0 - m) / 2.0))
        * (l * (1.0 - l)).sqrt();
    Entries {
        d00: l * (m + (1.0 - m) * s2),
        d11: l * (1.0 - m) * c2,
        d22: m * (1.0 - l) * c2,
        d33: (1.0 - l) * ((1.0 - m) + m * s2),
        coh,
        f0: l * m + l * (1.0 - m) * c2 + m * (1.0 - l) * s2,
        f1: (1.0 - l) * (1.0 - m) + l * (1.0 - m) * s2 + m * (1.0 - l) * c2,
    }
}

/// Receiver state on H⊗B and environment state on F for SWAP^γ with
/// κ = √λ|00⟩ + √(1−λ)|11⟩ and ρ = diag(μ, 1−μ).
pub fn swap_gamma_eh_closed_form(
    gamma: f64,
    lambda: f64,
    mu: f64,
) -> Result<(DensityMatrix, DensityMatrix)> {
    check_unit("lambda", lambda)?;
    check_unit("mu", mu)?;
    let e = entries(gamma, lambda, mu);
    let r = |x: f64| C64::new(x, 0.0);
    let mut hb = ComplexMatrix::diag(&[r(e.d00), r(e.d11), r(e.d22), r(e.d33)]);
    hb[(0, 3)] = e.coh;
    hb[(3, 0)] = e.coh.conj();
    let f = ComplexMatrix::diag(&[r(e.f0), r(e.f1)]);
    Ok((DensityMatrix::new(hb)?, DensityMatrix::new(f)?))
}

/// S(HB) − S(F) from the closed form, without building matrices.
pub fn swap_gamma_eh_value(gamma: f64, lambda: f64, mu: f64) -> f64 {
    let e = entries(gamma, lambda, mu);
    let mean = 0.5 * (e.d00 + e.d33);
    let rad = (0.5 * (e.d00 - e.d33)).hypot(e.coh.norm());
    spectrum_entropy(&[mean + rad, mean - rad, e.d11, e.d22]) - spectrum_entropy(&[e.f0, e.f1])
}

fn logistic(u: f64) -> f64 {
    1.0 / (1.0 + (-u).exp())
}

/// Single-copy value for SWAP^γ with a helper entangled with the receiver, maximized over
/// Schmidt weight λ and diagonal input weight μ; clamped at zero.
pub fn swap_gamma_eh_max(gamma: f64, opts: &OptimizerOptions) -> Result<CapacityResult> {
    opts.validate()?;
    check_unit("gamma", gamma)?;
    let n = opts.grid.max(2);
    let axis = |i: usize| i as f64 / (n - 1) as f64;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..n {
        let lambda = axis(i);
        for j in 0..n {
            let s = 2.0 * axis(j) - 1.0;
            let v = swap_gamma_eh_value(gamma, lambda, logistic(LOGIT_SPAN * s));
            if v > best.0 + 1e-15 {
                best = (v, lambda, s);
            }
        }
    }
    let mu_of = |s: f64| logistic(LOGIT_SPAN * s);
    let objective = |x: &[f64]| -swap_gamma_eh_value(gamma, x[0].clamp(0.0, 1.0), mu_of(x[1]));
    let refine = nelder_mead(
        objective,
        &[best.1, best.2],
        &NelderMeadOptions {
            ftol: opts.tol * 1e-4,
            xtol: opts.tol.sqrt() * 1e-2,
            max_iters: opts.max_iters,
            step: 1.0 / (n - 1) as f64,
        },
    );
    let (raw, lambda, mu) = if -refine.value > best.0 {
        (
            -refine.value,
            refine.x[0].clamp(0.0, 1.0),
            mu_of(refine.x[1]),
        )
    } else {
        (best.0, best.1, mu_of(best.2))
    };
    Ok(CapacityResult {
        value: clean(raw.max(0.0)),
        argmax_input: DensityMatrix::diagonal(&[mu, 1.0 - mu])?,
        argmax_env: Some(EnvState::Pure(PureState::two_qubit_schmidt(lambda)?)),
        diagnostics: Diagnostics {
            iterations: refine.iterations,
            evaluations: n * n + refine.evaluations,
            restarts: 1,
            restart_spread: 0.0,
            raw_value: raw,
            converged: refine.converged,
            outer_grid: n * n,
            inner_grid: 0,
        },
    })
}
