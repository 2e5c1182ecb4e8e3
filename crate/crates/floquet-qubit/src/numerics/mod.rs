//! Dense complex linear algebra on small matrices.
//!
//! Everything in the crate runs through [`ComplexMatrix`] values of dimension
//! 2 or 4: Kronecker products, the matrix exponential, a general complex
//! eigendecomposition (Liouvillians are non-normal, so there is no Hermitian
//! shortcut), the principal-branch eigenvalue logarithm, and distances between
//! eigenvalue sets. Storage is dense and row-major; the problem sizes never
//! justify anything else.

mod eig;
mod expm;
pub(crate) mod mat4;
mod matrix;

pub use eig::{
    eig, eigenvalue_set_distance, hermitian_eigenvalues, principal_log_eigenvalues,
    singular_values, two_norm_condition, EigenDecomposition,
};
pub use expm::expm;
pub use matrix::{kron, ComplexMatrix};

use thiserror::Error;

/// Errors from the linear-algebra kernel.
#[derive(Debug, Clone, Error)]
pub enum NumericsError {
    /// An input violated a precondition (non-finite entries, dimension
    /// mismatch, empty data).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The QR iteration ran out of its iteration budget. `residuals` holds
    /// the subdiagonal magnitudes that refused to deflate.
    #[error("eigensolver did not converge after {iterations} iterations")]
    ConvergenceFailure {
        iterations: usize,
        residuals: Vec<f64>,
    },
    /// A map eigenvalue of magnitude `{0}` cannot be pushed through the
    /// logarithm. Finite-time CPTP propagators are never singular, so this
    /// signals a broken integration upstream.
    #[error("singular map: eigenvalue magnitude {0:e} too small for logarithm")]
    SingularMap(f64),
    /// A linear solve hit an (numerically) singular pivot.
    #[error("singular matrix: pivot magnitude {0:e}")]
    SingularMatrix(f64),
}
