//! Degradable / anti-degradable classification of channels induced by two-qubit gates.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::channels::{effective_channel_pure, kraus_normal_form, BipartiteUnitary, KrausChannel};
use crate::error::{mismatch, Error, Result};
use crate::linalg::{eigvals_unchecked, partial_trace, ComplexMatrix, Keep, PureState, C64};

/// Default tolerance under which the index counts as zero.
pub const SYMMETRIC_TOL: f64 = 1e-9;
const CHOI_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelClass {
    Degradable,
    AntiDegradable,
    Symmetric,
}

impl ChannelClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ChannelClass::Degradable => "degradable",
            ChannelClass::AntiDegradable => "antidegradable",
            ChannelClass::Symmetric => "symmetric",
        }
    }
}

/// Classification together with the raw determinant it was read from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegradabilityClass {
    pub class: ChannelClass,
    pub index: f64,
}

/// det(2K₀†K₀ − I) for the leading normal-form Kraus operator of a qubit channel.
/// A single Kraus operator (unitary channel) gives +1.
pub fn channel_index(c: &KrausChannel) -> Result<f64> {
    if c.dim_in() != 2 || c.dim_out() != 2 {
        return Err(mismatch(
            "qubit channel",
            format!("{}->{}", c.dim_in(), c.dim_out()),
        ));
    }
    let nf = kraus_normal_form(c);
    if nf.len() <= 1 {
        return Ok(1.0);
    }
    let k0 = &nf.kraus()[0];
    let m = &(&k0.adjoint() * k0).scale(C64::new(2.0, 0.0)) - &ComplexMatrix::identity(2);
    Ok(m.determinant()?.re)
}

/// Index of the channel induced by `v` with environment state `eta`.
pub fn degradability_index(v: &BipartiteUnitary, eta: &PureState) -> Result<f64> {
    v.require_qubits()?;
    channel_index(&effective_channel_pure(v, eta)?)
}

pub fn classify_index(index: f64, tol: f64) -> ChannelClass {
    if index.abs() <= tol {
        ChannelClass::Symmetric
    } else if index > 0.0 {
        ChannelClass::Degradable
    } else {
        ChannelClass::AntiDegradable
    }
}

pub fn classify_env(v: &BipartiteUnitary, eta: &PureState, tol: f64) -> Result<DegradabilityClass> {
    let index = degradability_index(v, eta)?;
    Ok(DegradabilityClass {
        class: classify_index(index, tol),
        index,
    })
}

/// λ_max of the Choi state against λ_max of its output marginal.
pub fn is_antidegradable_choi(c: &KrausChannel) -> Result<bool> {
    if c.dim_in() != 2 || c.dim_out() != 2 {
        return Err(mismatch(
            "qubit channel",
            format!("{}->{}", c.dim_in(), c.dim_out()),
        ));
    }
    let rank = kraus_normal_form(c).len();
    if rank > 2 {
        return Err(Error::Inapplicable(format!(
            "channel needs an environment of dimension {rank}"
        )));
    }
    let choi = c.choi_state();
    let top = |m: &ComplexMatrix| *eigvals_unchecked(m).last().expect("nonempty");
    let rho_b = partial_trace(choi.matrix(), (2, 2), Keep::Second)?;
    Ok(top(choi.matrix()) <= top(&rho_b) + CHOI_TOL)
}

/// (θ, φ) pairs with θ_i = πi/(n−1), i < n, and φ_j = 2πj/n, j < n.
pub fn bloch_grid(n: usize) -> Vec<(f64, f64)> {
    let n = n.max(1);
    let theta = |i: usize| {
        if n == 1 {
            0.0
        } else {
            PI * i as f64 / (n - 1) as f64
        }
    };
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (theta(i), 2.0 * PI * j as f64 / n as f64)))
        .collect()
}

/// True when no environment state on the Bloch grid yields a degradable channel.
pub fn is_universally_antidegradable(v: &BipartiteUnitary, grid: usize) -> Result<bool> {
    v.require_qubits()?;
    let points = bloch_grid(grid);
    points
        .par_iter()
        .try_fold(
            || true,
            |acc, &(theta, phi)| {
                if !acc {
                    return Ok(false);
                }
                let eta = PureState::from_bloch_angles(theta, phi);
                let class = classify_env(v, &eta, SYMMETRIC_TOL)?.class;
                Ok(class != ChannelClass::Degradable)
            },
        )
        .try_reduce(|| true, |a, b| Ok(a && b))
}
