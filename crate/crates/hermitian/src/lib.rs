//! Dense Hermitian operators on small tensor-product spaces.
//!
//! Everything here is dense double precision: the spaces this workspace
//! deals with stay well under a hundred dimensions, so clarity wins over
//! sparsity. A [`HermOp`] pairs a complex matrix with its [`TensorSpace`]
//! so subsystem operations (partial trace, partial transpose, subsystem
//! swaps) can do their own index bookkeeping instead of leaving stride
//! arithmetic to every caller.
//!
//! Complex Hermitian data enters real symmetric algorithms through
//! [`RealEmbedding`]: H = A + iB maps to [[A, -B], [B, A]], which is
//! symmetric exactly when H is Hermitian and positive semidefinite exactly
//! when H is (each eigenvalue shows up twice).

mod embed;
mod op;
mod pauli;
mod space;

pub use embed::RealEmbedding;
pub use op::HermOp;
pub use pauli::pauli_basis;
pub use space::TensorSpace;

use thiserror::Error;

/// Largest entrywise deviation from `X == X†` accepted when constructing a
/// [`HermOp`] from raw matrix data. Inputs inside the tolerance are snapped
/// to their Hermitian part so later arithmetic cannot drift.
pub const HERMITICITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HermError {
    #[error("tensor space needs at least one subsystem")]
    EmptySpace,
    #[error("subsystem dimensions must be positive")]
    ZeroDimension,
    #[error("matrix is {rows}x{cols} but the space has total dimension {dim}")]
    ShapeMismatch { rows: usize, cols: usize, dim: usize },
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("subsystem index {index} out of range for {count} subsystems")]
    BadSubsystem { index: usize, count: usize },
    #[error("keep list must be non-empty, strictly increasing and in range")]
    BadKeepList,
    #[error("real embedding must be 2n x 2n for a space of total dimension n")]
    BadEmbeddingShape,
    #[error("isometry is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    BadIsometryShape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("operator basis needs a space of total dimension 4, got {dim}")]
    BasisDimension { dim: usize },
}
