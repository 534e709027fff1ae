//! Canonical form of two-qubit gates: magic basis, synthesis from (αx, αy, αz), parameter
//! extraction and the universally (anti-)degradable regions.

use std::f64::consts::{E, FRAC_1_PI, FRAC_1_SQRT_2, FRAC_PI_2, PI, SQRT_2};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::channels::BipartiteUnitary;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, PureState, C64, ONE, ZERO};

const REGION_TOL: f64 = 1e-12;
const PHASE_MATCH_TOL: f64 = 1e-8;

/// Local-equivalence invariant (αx, αy, αz) of a two-qubit gate, in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalParams {
    pub alpha_x: f64,
    pub alpha_y: f64,
    pub alpha_z: f64,
}

impl CanonicalParams {
    /// Any real triple; use [`CanonicalParams::in_tetrahedron`] to check π/2 ≥ αx ≥ αy ≥ αz ≥ 0.
    pub fn new(alpha_x: f64, alpha_y: f64, alpha_z: f64) -> Self {
        Self {
            alpha_x,
            alpha_y,
            alpha_z,
        }
    }

    /// Triple known to lie in the fundamental tetrahedron.
    pub fn canonical(alpha_x: f64, alpha_y: f64, alpha_z: f64) -> Result<Self> {
        let p = Self::new(alpha_x, alpha_y, alpha_z);
        if !p.in_tetrahedron(1e-12) {
            return Err(Error::OutOfRange {
                name: "canonical parameters",
                value: alpha_x,
                range: "pi/2 >= ax >= ay >= az >= 0",
            });
        }
        Ok(p)
    }

    /// Angles given in units of π.
    pub fn from_units_of_pi(x: f64, y: f64, z: f64) -> Self {
        Self::new(x * PI, y * PI, z * PI)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.alpha_x, self.alpha_y, self.alpha_z]
    }

    pub fn in_units_of_pi(&self) -> [f64; 3] {
        self.as_array().map(|a| a / PI)
    }

    pub fn in_tetrahedron(&self, tol: f64) -> bool {
        FRAC_PI_2 + tol >= self.alpha_x
            && self.alpha_x + tol >= self.alpha_y
            && self.alpha_y + tol >= self.alpha_z
            && self.alpha_z >= -tol
    }

    /// Eigenphases λ₁..λ₄ of the spectral form.
    pub fn lambdas(&self) -> [f64; 4] {
        let (x, y, z) = (self.alpha_x, self.alpha_y, self.alpha_z);
        [
            (x - y + z) / 2.0,
            (-x + y + z) / 2.0,
            (-x - y - z) / 2.0,
            (x + y - z) / 2.0,
        ]
    }

    /// Largest per-angle difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// |Φ₁⟩..|Φ₄⟩.
pub fn magic_basis() -> Vec<PureState> {
    let h = FRAC_1_SQRT_2;
    let r = C64::new(h, 0.0);
    let m = C64::new(0.0, -h);
    [
        [r, ZERO, ZERO, r],
        [m, ZERO, ZERO, -m],
        [ZERO, r, -r, ZERO],
        [ZERO, m, m, ZERO],
    ]
    .into_iter()
    .map(|a| PureState::new(a.to_vec()).expect("unit norm"))
    .collect()
}

/// Change of basis with the magic states as columns.
pub fn magic_matrix() -> ComplexMatrix {
    let basis = magic_basis();
    ComplexMatrix::from_fn(4, 4, |i, k| basis[k].amplitudes()[i])
}

/// Σ_k e^{−iλ_k}|Φ_k⟩⟨Φ_k|.
pub fn canonical_unitary(p: &CanonicalParams) -> BipartiteUnitary {
    let q = magic_matrix();
    let phases: Vec<C64> = p
        .lambdas()
        .iter()
        .map(|&l| C64::from_polar(1.0, -l))
        .collect();
    let u = &(&q * &ComplexMatrix::diag(&phases)) * &q.adjoint();
    BipartiteUnitary::qubits(u).expect("spectral form is unitary")
}

/// SWAP^γ = (1+e^{iπγ})/2 · I + (1−e^{iπγ})/2 · SWAP.
pub fn swap_pow(gamma: f64) -> BipartiteUnitary {
    let e = C64::from_polar(1.0, PI * gamma);
    let c = (ONE + e) * 0.5;
    let s = (ONE - e) * 0.5;
    let id = ComplexMatrix::identity(4).scale(c);
    let sw = swap().matrix().scale(s);
    BipartiteUnitary::qubits(&id + &sw).expect("SWAP powers are unitary")
}

pub fn identity_gate() -> BipartiteUnitary {
    BipartiteUnitary::qubits(ComplexMatrix::identity(4)).expect("unitary")
}

pub fn swap() -> BipartiteUnitary {
    let m = ComplexMatrix::from_real(
        4,
        4,
        &[
            1., 0., 0., 0., //
            0., 0., 1., 0., //
            0., 1., 0., 0., //
            0., 0., 0., 1.,
        ],
    )
    .expect("4x4");
    BipartiteUnitary::qubits(m).expect("unitary")
}

/// CNOT with the system qubit A as control.
pub fn cnot() -> BipartiteUnitary {
    let m = ComplexMatrix::from_real(
        4,
        4,
        &[
            1., 0., 0., 0., //
            0., 1., 0., 0., //
            0., 0., 0., 1., //
            0., 0., 1., 0.,
        ],
    )
    .expect("4x4");
    BipartiteUnitary::qubits(m).expect("unitary")
}

/// CNOT with the environment qubit as control.
fn cnot_reversed() -> ComplexMatrix {
    ComplexMatrix::from_real(
        4,
        4,
        &[
            1., 0., 0., 0., //
            0., 0., 0., 1., //
            0., 0., 1., 0., //
            0., 1., 0., 0.,
        ],
    )
    .expect("4x4")
}

/// Double CNOT: control A then control E.
pub fn dcnot() -> BipartiteUnitary {
    let m = &cnot_reversed() * cnot().matrix();
    BipartiteUnitary::qubits(m).expect("unitary")
}

pub fn sqrt_swap() -> BipartiteUnitary {
    swap_pow(0.5)
}

/// Reduces raw angles into the fundamental tetrahedron using π-shifts, reflections
/// α ↦ π − α and sorting.
pub fn fold_to_fundamental(raw: [f64; 3]) -> CanonicalParams {
    let mut a = raw.map(|x| {
        let r = x.rem_euclid(PI);
        let r = if r > FRAC_PI_2 { PI - r } else { r };
        r.clamp(0.0, FRAC_PI_2)
    });
    a.sort_by(|x, y| y.total_cmp(x));
    CanonicalParams::new(a[0], a[1], a[2])
}

// Simultaneously diagonalizes the commuting real symmetric parts of S = X + iY.
fn diagonalize_symmetric_unitary(s: &ComplexMatrix) -> Result<Vec<C64>> {
    let x = DMatrix::from_fn(4, 4, |i, j| 0.5 * (s[(i, j)].re + s[(j, i)].re));
    let y = DMatrix::from_fn(4, 4, |i, j| 0.5 * (s[(i, j)].im + s[(j, i)].im));
    let mut worst = f64::INFINITY;
    // Generic mixing weights; a degenerate combination for one is almost surely not for all.
    for c in [0.577_215_664_901_532_9, SQRT_2, -FRAC_1_PI, E] {
        let o = SymmetricEigen::new(&x + &y * c).eigenvectors;
        let o = ComplexMatrix::from_fn(4, 4, |i, j| C64::new(o[(i, j)], 0.0));
        let d = &(&o.transpose() * s) * &o;
        let off = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| d[(i, j)].norm())
            .fold(0.0, f64::max);
        if off <= PHASE_MATCH_TOL {
            return Ok((0..4).map(|k| d[(k, k)]).collect());
        }
        worst = worst.min(off);
    }
    Err(Error::Degenerate(format!(
        "eigenphases of U^T U could not be matched (residual {worst:.3e})"
    )))
}

/// Canonical parameters of a two-qubit gate from the spectrum of UᵀU in the magic basis.
///
/// The result is invariant under local unitaries on either side and under global phase.
pub fn decompose_params(u: &BipartiteUnitary) -> Result<CanonicalParams> {
    u.require_qubits()?;
    let det = u.matrix().determinant()?;
    let norm = C64::from_polar(1.0, -det.arg() / 4.0);
    let q = magic_matrix();
    let m = &(&q.adjoint() * &u.matrix().scale(norm)) * &q;
    let s = &m.transpose() * &m;
    let diag = diagonalize_symmetric_unitary(&s)?;

    let mut lambdas: Vec<f64> = diag.iter().map(|d| -d.arg() / 2.0).collect();
    let total: f64 = lambdas.iter().sum();
    let n = (total / PI).round();
    if (total - n * PI).abs() > PHASE_MATCH_TOL {
        return Err(Error::Degenerate(format!(
            "half-phases sum to {total}, not a multiple of pi"
        )));
    }
    lambdas.sort_by(f64::total_cmp);
    let n = n as i64;
    if n > 0 {
        for l in lambdas.iter_mut().rev().take(n as usize) {
            *l -= PI;
        }
    } else if n < 0 {
        for l in lambdas.iter_mut().take((-n) as usize) {
            *l += PI;
        }
    }
    let [l1, l2, _, l4] = [lambdas[0], lambdas[1], lambdas[2], lambdas[3]];
    Ok(fold_to_fundamental([l1 + l4, l2 + l4, l1 + l2]))
}

/// αx+αy, αy+αz, αz+αx ≥ π/2.
pub fn in_region_a(p: &CanonicalParams) -> bool {
    let [x, y, z] = p.as_array();
    let bound = FRAC_PI_2 - REGION_TOL;
    x + y >= bound && y + z >= bound && z + x >= bound
}

/// Membership of SWAP·U(p) in the anti-degradable region.
pub fn in_region_d(p: &CanonicalParams) -> bool {
    let swapped = canonical_unitary(p).swap_outputs();
    match decompose_params(&swapped) {
        Ok(q) => in_region_a(&q),
        // SWAP·U(α) is U(α + π/2) up to phase.
        Err(_) => in_region_a(&fold_to_fundamental(p.as_array().map(|a| a + FRAC_PI_2))),
    }
}
