use hermitian_core::{HermOp, TensorSpace};
use nalgebra::DVector;
use num_complex::Complex64;

use crate::source::Outcome;

/// Dimension of the sender's outcome register.
pub const ALICE_DIM: usize = 4;
/// Dimension of the squashed receiver: a polarization qubit plus a vacuum
/// flag for no-click events.
pub const BOB_DIM: usize = 3;

/// The receiver's five-outcome measurement: each basis is chosen with
/// probability 1/2 (hence the 1/2 weights on the qubit projectors), and the
/// vacuum flag is read out directly. Elements are ordered like
/// [`Outcome::ALL`] with the no-click element last; they sum to the
/// identity.
pub fn bob_povm() -> Vec<HermOp> {
    let space = TensorSpace::single(BOB_DIM).expect("static dims");
    let mut povm: Vec<HermOp> = Outcome::ALL
        .iter()
        .map(|k| {
            HermOp::projector(space.clone(), &k.qubit())
                .expect("unit vectors")
                .scaled(0.5)
        })
        .collect();
    let mut vac = DVector::from_element(BOB_DIM, Complex64::new(0.0, 0.0));
    vac[BOB_DIM - 1] = Complex64::new(1.0, 0.0);
    povm.push(HermOp::projector(space, &vac).expect("unit vector"));
    povm
}

/// Projector onto the receiver's click sector (the qubit part).
pub fn bob_click_projector() -> HermOp {
    let space = TensorSpace::single(BOB_DIM).expect("static dims");
    let mut mat = nalgebra::DMatrix::zeros(BOB_DIM, BOB_DIM);
    mat[(0, 0)] = 1.0;
    mat[(1, 1)] = 1.0;
    HermOp::from_real(space, mat).expect("diagonal")
}

/// The sender reads her register in its computational basis.
pub fn alice_povm() -> Vec<HermOp> {
    let space = TensorSpace::single(ALICE_DIM).expect("static dims");
    Outcome::ALL
        .iter()
        .map(|k| {
            let mut v = DVector::from_element(ALICE_DIM, Complex64::new(0.0, 0.0));
            v[k.index()] = Complex64::new(1.0, 0.0);
            HermOp::projector(space.clone(), &v).expect("unit vector")
        })
        .collect()
}
