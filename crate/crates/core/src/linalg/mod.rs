//! Dense complex linear algebra for small matrices.

mod eigen;
mod lu;
mod matrix;
mod random;
mod svd;

use serde::{Deserialize, Serialize};

pub use eigen::{general_eigenvalues, hermitian_eigenvalues, spectral_order};
pub use lu::{determinant, inverse, lu_solve, Lu, PIVOT_TOLERANCE};
pub use matrix::{Complex, ComplexMatrix, MatrixJson};
pub use random::{
    derive_seed, gram_schmidt, mix64, project_to_ball, random_matrix, with_singular_values,
    GenerationMode, RandomSpec, SplitMix64,
};
pub use svd::{polar_abs, psd_sqrt, singular_values, spectral_norm};

/// Sorted singular values and eigenvalues of one matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub singular_values: Vec<f64>,
    pub eigenvalues: Vec<Complex>,
}

impl SpectralData {
    pub fn of(a: &ComplexMatrix) -> crate::Result<Self> {
        Ok(Self {
            singular_values: singular_values(a),
            eigenvalues: general_eigenvalues(a)?,
        })
    }
}
