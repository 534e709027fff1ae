//! Dense complex linear algebra on small matrices.

mod eigen;
mod matrix;
pub mod random;
mod states;

pub use eigen::{binary_entropy, herm_eigh, herm_eigvals, spectrum_entropy, ENTROPY_CLIP};
pub(crate) use eigen::{eigvals_unchecked, matrix_entropy};
pub use matrix::{
    pauli_x, pauli_y, pauli_z, permutation_matrix, tensor, tensor_vec, ComplexMatrix, C64, I, ONE,
    ZERO,
};
pub use states::{entropy, partial_trace, reduce_pure, DensityMatrix, Keep, PureState};
