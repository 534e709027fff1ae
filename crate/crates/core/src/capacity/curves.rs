//! Gate pairs of the super-activation examples, parametrized by t ∈ [0, 1].

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use super::two_copy::TwoCopySpec;
use crate::canonical::{canonical_unitary, sqrt_swap, swap, swap_pow, CanonicalParams};
use crate::error::Result;

fn u(x: f64, y: f64, z: f64) -> crate::channels::BipartiteUnitary {
    canonical_unitary(&CanonicalParams::new(x, y, z))
}

/// W = U(π/2, π/2, tπ/2), V = SWAP^γ.
pub fn a1_spec(gamma: f64, t: f64) -> Result<TwoCopySpec> {
    TwoCopySpec::bell_inputs(u(FRAC_PI_2, FRAC_PI_2, t * FRAC_PI_2), swap_pow(gamma))
}

/// W = SWAP, V = U(π/4 + tπ/4, π/4, π/4).
pub fn a2_spec(t: f64) -> Result<TwoCopySpec> {
    TwoCopySpec::bell_inputs(swap(), u(FRAC_PI_4 * (1.0 + t), FRAC_PI_4, FRAC_PI_4))
}

/// Edges of the anti-degradable tetrahedron paired with V = √SWAP.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum A3Curve {
    /// √SWAP to DCNOT.
    SqrtSwapDcnot,
    /// √SWAP to SWAP.
    SqrtSwapSwap,
    /// U(π/2, π/4, π/4) to SWAP.
    MidSwap,
    /// U(π/2, π/4, π/4) to DCNOT.
    MidDcnot,
    /// √SWAP to U(π/2, π/4, π/4).
    SqrtSwapMid,
    /// W = U(π/2, π/2, tπ/2).
    SwapDcnotEdge,
}

impl A3Curve {
    pub const ALL: [A3Curve; 6] = [
        A3Curve::SqrtSwapDcnot,
        A3Curve::SqrtSwapSwap,
        A3Curve::MidSwap,
        A3Curve::MidDcnot,
        A3Curve::SqrtSwapMid,
        A3Curve::SwapDcnotEdge,
    ];

    /// Curve label; the letter after the underscore names the plotted curve.
    pub fn label(&self) -> &'static str {
        match self {
            A3Curve::SqrtSwapDcnot => "3a_p",
            A3Curve::SqrtSwapSwap => "3b_p",
            A3Curve::MidSwap => "3c_q",
            A3Curve::MidDcnot => "3d_q",
            A3Curve::SqrtSwapMid => "3e_r",
            A3Curve::SwapDcnotEdge => "s",
        }
    }

    pub fn w_params(&self, t: f64) -> CanonicalParams {
        let lo = FRAC_PI_4 * (1.0 - t);
        let hi = FRAC_PI_4 * (1.0 + t);
        let (x, y, z) = match self {
            A3Curve::SqrtSwapDcnot => (hi, hi, lo),
            A3Curve::SqrtSwapSwap => (hi, hi, hi),
            A3Curve::MidSwap => (FRAC_PI_2, hi, hi),
            A3Curve::MidDcnot => (FRAC_PI_2, hi, lo),
            A3Curve::SqrtSwapMid => (hi, FRAC_PI_4, FRAC_PI_4),
            A3Curve::SwapDcnotEdge => (FRAC_PI_2, FRAC_PI_2, t * FRAC_PI_2),
        };
        CanonicalParams::new(x, y, z)
    }
}

/// V = √SWAP with W moving along one edge.
pub fn a3_spec(curve: A3Curve, t: f64) -> Result<TwoCopySpec> {
    TwoCopySpec::bell_inputs(canonical_unitary(&curve.w_params(t)), sqrt_swap())
}

/// W = V = U(π/4 + tπ/4, π/4 + tπ/4, π/4 − tπ/4).
pub fn b1_spec(t: f64) -> Result<TwoCopySpec> {
    let g = u(
        FRAC_PI_4 * (1.0 + t),
        FRAC_PI_4 * (1.0 + t),
        FRAC_PI_4 * (1.0 - t),
    );
    TwoCopySpec::bell_inputs(g.clone(), g)
}

/// W = V = U(π/2, π/4 + tπ/4, π/4 − tπ/4) with the θ-family of inputs.
pub fn b2_spec(t: f64, theta: f64) -> Result<TwoCopySpec> {
    let g = u(FRAC_PI_2, FRAC_PI_4 * (1.0 + t), FRAC_PI_4 * (1.0 - t));
    TwoCopySpec::b2_family(g.clone(), g, theta)
}
