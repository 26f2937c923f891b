use hermitian_core::{HermOp, TensorSpace};
use nalgebra::DMatrix;

use crate::channel::ChannelModel;
use crate::povm::{bob_click_projector, ALICE_DIM, BOB_DIM};
use crate::source::{reduced_alice, Outcome};

/// Joint outcome probabilities for an `n`-photon signal: rows are the
/// sender's choice (ordered like [`Outcome::ALL`]), columns the receiver's
/// outcome (same order, then no-click). Each row sums to 1/4.
pub fn outcome_distribution(channel: &ChannelModel, eta: f64, n: usize) -> DMatrix<f64> {
    let y = channel.yield_n(eta, n);
    let e = channel.error_n(eta, n);
    let mut table = DMatrix::zeros(4, 5);
    for k in Outcome::ALL {
        for j in Outcome::ALL {
            table[(k.index(), j.index())] = if !k.same_basis(j) {
                y / 16.0
            } else if k == j {
                (1.0 - e) * y / 8.0
            } else {
                e * y / 8.0
            };
        }
        table[(k.index(), 4)] = (1.0 - y) / 4.0;
    }
    table
}

/// An explicit joint state on the sender register and the squashed receiver
/// that reproduces [`outcome_distribution`] exactly and has the correct
/// sender marginal. It models the lossy link as: with probability `Yₙ` the
/// ideal qubit arrives through a depolarizer of strength `2eₙ`, otherwise
/// the receiver sees vacuum.
pub fn simulated_state(channel: &ChannelModel, eta: f64, n: usize) -> HermOp {
    let space = joint_space();
    let y = channel.yield_n(eta, n);
    let marginal = reduced_alice(n);
    let vac_part = marginal.kron(&vacuum_projector());

    if n == 0 {
        // nothing is transmitted: clicks are background, fully random
        let click = marginal.kron(&qubit_mix());
        return click.scaled(y).add(&vac_part.scaled(1.0 - y));
    }

    let click = depolarized_click_state(n, 2.0 * channel.error_n(eta, n));
    debug_assert_eq!(click.space(), &space);
    click.scaled(y).add(&vac_part.scaled(1.0 - y))
}

fn joint_space() -> TensorSpace {
    TensorSpace::new(vec![ALICE_DIM, BOB_DIM]).expect("static dims")
}

fn vacuum_projector() -> HermOp {
    let mut mat = DMatrix::zeros(BOB_DIM, BOB_DIM);
    mat[(2, 2)] = 1.0;
    HermOp::from_real(TensorSpace::single(BOB_DIM).unwrap(), mat).expect("diagonal")
}

fn qubit_mix() -> HermOp {
    bob_click_projector().scaled(0.5)
}

/// Correlation coefficients between register coherences and the arriving
/// qubit's coherences. Chosen as the (entrywise) ratio of the sender
/// marginal's Gram entries to the ideal-qubit overlaps, which makes the
/// sender marginal come out right; positive semidefiniteness holds for
/// every n (it degenerates to rank one at n = 1 and touches the boundary
/// at n = 2).
fn coherence_gram(n: usize) -> DMatrix<f64> {
    assert!(n >= 1);
    if n == 1 {
        return DMatrix::from_element(4, 4, 1.0);
    }
    let c = 0.5f64.powf((n as f64 - 1.0) / 2.0);
    let s = if n % 2 == 1 { c } else { -c };
    DMatrix::from_row_slice(
        4,
        4,
        &[
            1.0, 0.0, c, c, //
            0.0, 1.0, c, s, //
            c, c, 1.0, 0.0, //
            c, s, 0.0, 1.0,
        ],
    )
}

/// The click-sector state before misalignment noise: register basis state
/// `k` paired with the ideal qubit for `k`, coherences weighted by
/// [`coherence_gram`]. Reproduces the error-free click statistics.
fn click_state(n: usize) -> HermOp {
    let gram = coherence_gram(n);
    let qubits: Vec<_> = Outcome::ALL.iter().map(|k| k.qubit()).collect();
    let dim = ALICE_DIM * BOB_DIM;
    let mut mat = DMatrix::zeros(dim, dim);
    for k in Outcome::ALL {
        for kp in Outcome::ALL {
            let w = 0.25 * gram[(kp.index(), k.index())];
            for i in 0..BOB_DIM {
                for j in 0..BOB_DIM {
                    mat[(k.index() * BOB_DIM + i, kp.index() * BOB_DIM + j)] +=
                        w * (qubits[k.index()][i] * qubits[kp.index()][j].conj()).re;
                }
            }
        }
    }
    HermOp::from_real(joint_space(), mat).expect("gram is symmetric")
}

fn depolarized_click_state(n: usize, p: f64) -> HermOp {
    let sigma = click_state(n);
    let alice_marginal = sigma.partial_trace(&[0]).expect("subsystem 0");
    let mixed = alice_marginal.kron(&qubit_mix());
    sigma.scaled(1.0 - p).add(&mixed.scaled(p))
}
