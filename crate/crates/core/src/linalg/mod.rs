//! Dense complex linear algebra on small square matrices.

mod eig;
mod expm;
mod ldu;
mod lu;
mod matrix;
mod svd;

use thiserror::Error;

pub use eig::{eig, eigenvalues, schur, Eigen, Schur};
pub use expm::mat_exp;
pub use ldu::{gauss_ldu, gauss_ldu_with, Ldu, DEFAULT_TOL_MINOR};
pub use lu::solve_vector;
pub use matrix::{c64, CMatrix};
pub use svd::{kernel_basis, lstsq, rank, singular_values, svd, Svd};

pub(crate) use matrix::{ONE, ZERO};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is numerically singular")]
    Singular,
    #[error("leading principal minor {0} vanishes")]
    SingularMinor(usize),
    #[error("iteration did not converge after {iterations} steps")]
    NoConvergence { iterations: usize },
    #[error("matrix has non-finite entries")]
    NonFinite,
}
