//! Physical model of a decoy-state BB84 link.
//!
//! The sender is described in the entanglement-based picture: for each
//! photon number `n` she holds a four-outcome register entangled with the
//! `n`-photon polarization state she sent. The receiver is modeled after
//! squashing: a qubit plus a vacuum flag, measured by the five-outcome
//! passive-basis-choice POVM.
//!
//! [`ChannelModel`] carries the detector floor and misalignment, and
//! produces per-photon-number yields, error rates, the resulting joint
//! outcome table, and an explicit density matrix ([`simulated_state`])
//! reproducing that table, which downstream code uses both as test input
//! and as a feasibility witness.

mod channel;
mod poisson;
mod povm;
mod source;
mod statistics;

pub use channel::{
    db_from_transmittance, distance_for_total_db, total_db_for_distance, transmittance_from_db,
    ChannelModel,
};
pub use poisson::Poisson;
pub use povm::{alice_povm, bob_click_projector, bob_povm, ALICE_DIM, BOB_DIM};
pub use source::{fock_state, reduced_alice, source_state, Outcome};
pub use statistics::{outcome_distribution, simulated_state};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("background yield must lie in [0,1], got {0}")]
    BadBackgroundYield(f64),
    #[error("misalignment error must lie in [0,0.5], got {0}")]
    BadMisalignment(f64),
    #[error("transmittance must lie in [0,1], got {0}")]
    BadTransmittance(f64),
    #[error("mean photon number must be positive and finite, got {0}")]
    BadMeanPhotonNumber(f64),
}
