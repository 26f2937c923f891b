//! Upper bounds on the secret key rate of a decoy-state BB84 link.
//!
//! The core question per photon number n: what fraction of the observed
//! joint state could an eavesdropper replace with a key-useless state
//! (separable, or admitting a symmetric extension) while reproducing every
//! observable? That fraction λ is the optimum of a semidefinite program
//! built from the measured outcome table; the key of the n-photon fraction
//! is then at most (1−λ) times the raw mutual information.
//!
//! [`rate_upper_bound`] assembles the per-photon-number bounds into a bound
//! in bits per pulse for a phase-randomized weak coherent source, dropping
//! photon numbers whose signals can be unambiguously identified and
//! reissued at the observed loss.

mod build;
mod info;
mod rate;
mod rows;
mod spaces;
mod usd;

pub use build::{
    announced_extendible_problem, announced_extendible_weight, announced_separable_problem,
    announced_separable_weight, extendible_problem, extendible_weight, separable_problem,
    separable_weight, BoundOutcome, ExtensionEncoding, ExtensionSide,
};
pub use info::mutual_information;
pub use rate::{
    channel_rows, click_isometry, rate_upper_bound, Mode, RateBound, RateOptions, TermReport,
};
pub use rows::DataRows;
pub use spaces::{antisym_isometry, hermitian_basis, sym_isometry, sym_isometry_k};
pub use usd::{usd_allowed, usd_eta_threshold, usd_max_allowed, usd_success_probability};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("data rows need a bipartite space, got {0} subsystems")]
    NotBipartite(usize),
    #[error("row operator lives on a different space than the data")]
    RowSpaceMismatch,
    #[error("outcome table is {rows}x{cols} but the POVMs have {alice} and {bob} elements")]
    TableShape {
        rows: usize,
        cols: usize,
        alice: usize,
        bob: usize,
    },
    #[error("receiver POVM is empty")]
    EmptyPovm,
    #[error("click probability must lie in (0,1], got {0}")]
    BadYield(f64),
    #[error("click isometry is {rows}x{cols}, expected {bob_dim} rows and a nonempty column set of at most {bob_dim}")]
    BadClickIsometry {
        rows: usize,
        cols: usize,
        bob_dim: usize,
    },
    #[error("data row couples the click and no-click sectors; announced decompositions need sector-diagonal rows")]
    RowCouplesSectors,
    #[error("an extension needs at least two copies in total, got {0}")]
    TooFewCopies(usize),
    #[error("only the symmetric-subspace encoding handles {0} copies; the sector encodings are two-copy constructions")]
    EncodingNeedsPair(usize),
    #[error("probability table sums to {0}, expected 1")]
    NotNormalized(f64),
    #[error("unknown mode label {0:?}")]
    UnknownMode(String),
    #[error(transparent)]
    Herm(#[from] hermitian_core::HermError),
    #[error(transparent)]
    Sdp(#[from] sdp_core::SdpError),
    #[error(transparent)]
    Model(#[from] protocol_model::ModelError),
}
