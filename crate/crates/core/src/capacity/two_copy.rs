//! Two gates used in parallel with a helper that entangles their environments.
//!
//! Wires are ordered A′, E′, A, E, R; the global unitary is W ⊗ V ⊗ I_R, so outputs come out
//! as B′, F′, B, F, R.

use std::f64::consts::PI;

use crate::channels::BipartiteUnitary;
use crate::error::{mismatch, Result};
use crate::linalg::{
    reduce_pure, spectrum_entropy, tensor, ComplexMatrix, DensityMatrix, PureState, C64,
};
use crate::optimize::bisection;

#[derive(Debug, Clone, PartialEq)]
pub struct TwoCopySpec {
    pub w: BipartiteUnitary,
    pub v: BipartiteUnitary,
    pub aprime_state: PureState,
    /// Helper state on E′⊗E.
    pub env_state: PureState,
    /// Input on A⊗R.
    pub input_state: PureState,
}

impl TwoCopySpec {
    pub fn new(
        w: BipartiteUnitary,
        v: BipartiteUnitary,
        aprime_state: PureState,
        env_state: PureState,
        input_state: PureState,
    ) -> Result<Self> {
        w.require_qubits()?;
        v.require_qubits()?;
        for (dim, want) in [
            (aprime_state.dim(), 2),
            (env_state.dim(), 4),
            (input_state.dim(), 4),
        ] {
            if dim != want {
                return Err(mismatch(want, dim));
            }
        }
        Ok(Self {
            w,
            v,
            aprime_state,
            env_state,
            input_state,
        })
    }

    /// |0⟩ on A′, a Bell pair on E′E and a Bell pair on AR.
    pub fn bell_inputs(w: BipartiteUnitary, v: BipartiteUnitary) -> Result<Self> {
        Self::new(
            w,
            v,
            PureState::basis(2, 0)?,
            PureState::bell(),
            PureState::bell(),
        )
    }

    /// |1⟩ on A′, a Bell pair on E′E and √θ|00⟩ + √(1−θ)|11⟩ on AR.
    pub fn b2_family(w: BipartiteUnitary, v: BipartiteUnitary, theta: f64) -> Result<Self> {
        Self::new(
            w,
            v,
            PureState::basis(2, 1)?,
            PureState::bell(),
            PureState::two_qubit_schmidt(theta)?,
        )
    }

    fn global_output(&self) -> Vec<C64> {
        let (ap, env, inp) = (
            self.aprime_state.amplitudes(),
            self.env_state.amplitudes(),
            self.input_state.amplitudes(),
        );
        let mut psi = vec![C64::new(0.0, 0.0); 32];
        for (idx, amp) in psi.iter_mut().enumerate() {
            let bit = |k: usize| (idx >> (4 - k)) & 1;
            let (a1, e1, a, e, r) = (bit(0), bit(1), bit(2), bit(3), bit(4));
            *amp = ap[a1] * env[e1 * 2 + e] * inp[a * 2 + r];
        }
        let g = tensor(
            self.w.matrix(),
            &tensor(self.v.matrix(), &ComplexMatrix::identity(2)),
        );
        g.apply(&psi).expect("32-dimensional state")
    }
}

/// (ρ^{B′B}, ρ^{F′F}).
pub fn two_copy_output_states(spec: &TwoCopySpec) -> (DensityMatrix, DensityMatrix) {
    let out = spec.global_output();
    let dims = [2; 5];
    let bb = reduce_pure(&out, &dims, &[0, 2]).expect("valid split");
    let ff = reduce_pure(&out, &dims, &[1, 3]).expect("valid split");
    (
        DensityMatrix::new_unchecked(bb),
        DensityMatrix::new_unchecked(ff),
    )
}

/// S(B′B) − S(F′F).
pub fn two_copy_coherent_info(spec: &TwoCopySpec) -> f64 {
    let (bb, ff) = two_copy_output_states(spec);
    bb.entropy() - ff.entropy()
}

/// Closed-form value of the SWAP^γ activation curve: spectrum {(5−3c)/8, (1+c)/8 ×3} with
/// c = cos πγ, minus one bit for the environment.
pub fn a1_closed_form(gamma: f64) -> f64 {
    let c = (PI * gamma).cos();
    let big = (5.0 - 3.0 * c) / 8.0;
    let small = (1.0 + c) / 8.0;
    spectrum_entropy(&[big, small, small, small]) - 1.0
}

/// Root of a curve on [lo, hi] by bisection; the endpoints must differ in sign.
pub fn find_zero_crossing(f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    bisection(f, lo, hi, tol)
}
