use nalgebra::SymmetricEigen;

use super::matrix::ComplexMatrix;
use crate::error::{mismatch, Error, Result};

/// Eigenvalues below this are treated as exact zeros in entropies.
pub const ENTROPY_CLIP: f64 = 1e-12;

const HERMITIAN_TOL: f64 = 1e-9;

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    if !h.is_square() {
        return Err(mismatch(
            "square matrix",
            format!("{}x{}", h.rows(), h.cols()),
        ));
    }
    let deviation = h.hermiticity_error();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

// Rotation-angle form for 2x2; avoids cancellation in tr² − 4det near degeneracy.
fn eigvals_2x2(h: &ComplexMatrix) -> [f64; 2] {
    let a = h[(0, 0)].re;
    let d = h[(1, 1)].re;
    let b = 0.5 * (h[(0, 1)] + h[(1, 0)].conj());
    let mean = 0.5 * (a + d);
    let r = (0.5 * (a - d)).hypot(b.norm());
    [mean - r, mean + r]
}

/// Real eigenvalues of a Hermitian matrix in ascending order.
pub fn herm_eigvals(h: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(h)?;
    Ok(eigvals_unchecked(h))
}

pub(crate) fn eigvals_unchecked(h: &ComplexMatrix) -> Vec<f64> {
    match h.rows() {
        1 => vec![h[(0, 0)].re],
        2 => eigvals_2x2(h).to_vec(),
        _ => {
            let mut vals: Vec<f64> = SymmetricEigen::new(h.to_nalgebra())
                .eigenvalues
                .iter()
                .copied()
                .collect();
            vals.sort_by(f64::total_cmp);
            vals
        }
    }
}

/// Eigenvalues (ascending) and the matching orthonormal eigenvectors as columns.
pub fn herm_eigh(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    check_hermitian(h)?;
    let eig = SymmetricEigen::new(h.to_nalgebra());
    let n = h.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((vals, vecs))
}

/// Shannon entropy in bits of a spectrum. Entries within the clip threshold of 0 or 1
/// contribute nothing, so numerically pure states report exactly zero.
pub fn spectrum_entropy(eigs: &[f64]) -> f64 {
    eigs.iter()
        .filter(|&&l| l > ENTROPY_CLIP && l < 1.0 - ENTROPY_CLIP)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Von Neumann entropy in bits of a Hermitian matrix without state validation.
pub(crate) fn matrix_entropy(h: &ComplexMatrix) -> f64 {
    spectrum_entropy(&eigvals_unchecked(h))
}

/// H₂(x) in bits.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange {
            name: "x",
            value: x,
            range: "[0, 1]",
        });
    }
    Ok(spectrum_entropy(&[x, 1.0 - x]))
}
