//! Small dense semidefinite-programming solver.
//!
//! Problems come in conic standard form over a block-diagonal positive
//! semidefinite variable:
//!
//! ```text
//!   minimize    Σ_b ⟨C_b, X_b⟩
//!   subject to  Σ_b ⟨A_{i,b}, X_b⟩ = rhs_i,   i = 0..m
//!               X_b ⪰ 0 for every block b
//! ```
//!
//! All blocks are real symmetric; complex Hermitian data is expected to be
//! embedded by the caller (the embedding preserves semidefiniteness, so the
//! optimum is unchanged up to the documented factor-2 inner-product scale).
//!
//! The engine is an infeasible-start primal-dual path follower with the HKM
//! scaling direction and a Mehrotra predictor-corrector step. It is
//! deterministic — identical problems and options produce bit-identical
//! iterate sequences — and it reports honest statuses: a stalled run comes
//! back as [`SdpStatus::NumericalLimit`] rather than a pretend optimum, and
//! improving-ray certificates held for several consecutive iterations flag
//! primal or dual infeasibility.
//!
//! The target problem class is small and dense: a few blocks of dimension
//! up to roughly a hundred and up to a few hundred equalities. Nothing here
//! exploits sparsity beyond skipping absent blocks.

mod preprocess;
mod problem;
pub mod sdpa;
mod solver;
pub mod testing;

pub use preprocess::{preprocess, PreprocessOutcome, PreprocessReport};
pub use problem::{Constraint, Functional, SdpProblem};
pub use solver::{solve, IterRecord, SdpSolution, SdpStatus, SolveOptions};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SdpError {
    #[error("block dimensions must be positive")]
    ZeroBlockDim,
    #[error("problem needs at least one block")]
    NoBlocks,
    #[error("functional references block {index} but there are {count} blocks")]
    BadBlockIndex { index: usize, count: usize },
    #[error("functional repeats block {index}")]
    DuplicateBlockTerm { index: usize },
    #[error("coefficient for block {index} is {rows}x{cols}, block dimension is {dim}")]
    CoefficientShape {
        index: usize,
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("coefficient matrix is not symmetric (max deviation {deviation:.3e})")]
    NotSymmetric { deviation: f64 },
    #[error("rhs must be finite")]
    NonFiniteRhs,
    #[error("malformed SDPA sparse data: {0}")]
    SdpaParse(String),
}
