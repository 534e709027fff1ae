use std::f64::consts::FRAC_1_SQRT_2;

use super::eigen::{eigvals_unchecked, herm_eigh, spectrum_entropy};
use super::matrix::{pauli_x, pauli_y, pauli_z, tensor, tensor_vec, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{mismatch, Error, Result};

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const NEGATIVITY_TOL: f64 = -1e-9;
const NORM_TOL: f64 = 1e-10;

/// Which factor of a bipartite split survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty amplitude vector".into()));
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm {norm} is not 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n.is_nan() || n <= 1e-300 || !n.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / n).collect(),
        })
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(mismatch(format!("index < {dim}"), index));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { amplitudes: amps })
    }

    /// cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩.
    pub fn from_bloch_angles(theta: f64, phi: f64) -> Self {
        Self {
            amplitudes: vec![
                C64::new((theta / 2.0).cos(), 0.0),
                C64::from_polar((theta / 2.0).sin(), phi),
            ],
        }
    }

    pub fn plus() -> Self {
        Self {
            amplitudes: vec![C64::new(FRAC_1_SQRT_2, 0.0); 2],
        }
    }

    /// (|00⟩ + |11⟩)/√2.
    pub fn bell() -> Self {
        Self::two_qubit_schmidt(0.5).expect("0.5 is in range")
    }

    /// √λ|00⟩ + √(1−λ)|11⟩.
    pub fn two_qubit_schmidt(lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::OutOfRange {
                name: "lambda",
                value: lambda,
                range: "[0, 1]",
            });
        }
        Ok(Self {
            amplitudes: vec![
                C64::new(lambda.sqrt(), 0.0),
                ZERO,
                ZERO,
                C64::new((1.0 - lambda).sqrt(), 0.0),
            ],
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            amplitudes: tensor_vec(&self.amplitudes, &other.amplitudes),
        }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Bloch vector of a qubit state.
    pub fn bloch_vector(&self) -> Option<[f64; 3]> {
        self.density().bloch_vector()
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(mismatch(
                "square matrix",
                format!("{}x{}", matrix.rows(), matrix.cols()),
            ));
        }
        let deviation = matrix.hermiticity_error();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = eigvals_unchecked(&matrix)[0];
        if min < NEGATIVITY_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// Skips validation; callers guarantee the matrix came from a valid physical map.
    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            matrix: psi.projector(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)),
        }
    }

    /// Diagonal state from a probability vector.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        if probs.iter().any(|&p| p < NEGATIVITY_TOL || !p.is_finite()) {
            return Err(Error::InvalidState("negative probability".into()));
        }
        let entries: Vec<C64> = probs.iter().map(|&p| C64::new(p, 0.0)).collect();
        Self::new(ComplexMatrix::diag(&entries))
    }

    /// ½(I + r·σ) for a Bloch vector with |r| ≤ 1.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if len > 1.0 + 1e-12 {
            return Err(Error::OutOfRange {
                name: "|r|",
                value: len,
                range: "[0, 1]",
            });
        }
        Ok(Self::from_bloch_unchecked(r))
    }

    pub(crate) fn from_bloch_unchecked(r: [f64; 3]) -> Self {
        let h = 0.5;
        Self {
            matrix: ComplexMatrix::new(
                2,
                2,
                vec![
                    C64::new(h * (1.0 + r[2]), 0.0),
                    C64::new(h * r[0], -h * r[1]),
                    C64::new(h * r[0], h * r[1]),
                    C64::new(h * (1.0 - r[2]), 0.0),
                ],
            )
            .expect("2x2"),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigvals_unchecked(&self.matrix)
    }

    /// Spectral decomposition as (weight, eigenvector) pairs, skipping weights ≤ `floor`.
    pub fn spectral_decomposition(&self, floor: f64) -> Vec<(f64, PureState)> {
        let (vals, vecs) = herm_eigh(&self.matrix).expect("density matrices are Hermitian");
        let n = self.dim();
        vals.iter()
            .enumerate()
            .rev()
            .filter(|(_, &p)| p > floor)
            .map(|(k, &p)| {
                let v: Vec<C64> = (0..n).map(|i| vecs[(i, k)]).collect();
                (
                    p,
                    PureState::normalized(v).expect("eigenvectors are nonzero"),
                )
            })
            .collect()
    }

    pub fn entropy(&self) -> f64 {
        entropy(self)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: tensor(&self.matrix, &other.matrix),
        }
    }

    /// Tr(ρ σ_k) for a qubit; `None` for other dimensions.
    pub fn bloch_vector(&self) -> Option<[f64; 3]> {
        if self.dim() != 2 {
            return None;
        }
        let comp = |p: ComplexMatrix| (&self.matrix * &p).trace().re;
        Some([comp(pauli_x()), comp(pauli_y()), comp(pauli_z())])
    }
}

/// Von Neumann entropy in bits.
pub fn entropy(rho: &DensityMatrix) -> f64 {
    spectrum_entropy(&rho.eigenvalues()).min((rho.dim() as f64).log2())
}

/// Reduces a matrix on a d1⊗d2 space to one factor.
pub fn partial_trace(m: &ComplexMatrix, dims: (usize, usize), keep: Keep) -> Result<ComplexMatrix> {
    let (d1, d2) = dims;
    if !m.is_square() || m.rows() != d1 * d2 || d1 == 0 || d2 == 0 {
        return Err(Error::SubsystemSplit {
            side: m.rows(),
            d1,
            d2,
        });
    }
    Ok(match keep {
        Keep::First => ComplexMatrix::from_fn(d1, d1, |i, k| {
            (0..d2).map(|j| m[(i * d2 + j, k * d2 + j)]).sum()
        }),
        Keep::Second => ComplexMatrix::from_fn(d2, d2, |j, l| {
            (0..d1).map(|i| m[(i * d2 + j, i * d2 + l)]).sum()
        }),
    })
}

/// Reduced density matrix of a pure multipartite state on the subsystems listed in `keep`
/// (ascending order).
pub fn reduce_pure(amplitudes: &[C64], dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if amplitudes.len() != total {
        return Err(mismatch(total, amplitudes.len()));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
        return Err(mismatch("ascending subsystem indices", format!("{keep:?}")));
    }
    let dk: usize = keep.iter().map(|&k| dims[k]).product();
    let dt = total / dk;
    // Row = kept multi-index, column = traced multi-index.
    let mut psi = vec![ZERO; total];
    let mut digits = vec![0usize; dims.len()];
    for (idx, &a) in amplitudes.iter().enumerate() {
        let mut rest = idx;
        for s in (0..dims.len()).rev() {
            digits[s] = rest % dims[s];
            rest /= dims[s];
        }
        let (mut row, mut col) = (0, 0);
        for s in 0..dims.len() {
            if keep.contains(&s) {
                row = row * dims[s] + digits[s];
            } else {
                col = col * dims[s] + digits[s];
            }
        }
        psi[row * dt + col] = a;
    }
    Ok(ComplexMatrix::from_fn(dk, dk, |i, j| {
        (0..dt)
            .map(|t| psi[i * dt + t] * psi[j * dt + t].conj())
            .sum()
    }))
}
