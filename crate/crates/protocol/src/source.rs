use hermitian_core::{HermOp, TensorSpace};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::povm::{ALICE_DIM, BOB_DIM};

/// The four BB84 signal choices, doubling as the sender's register basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Zero,
    One,
    Plus,
    Minus,
}

impl Outcome {
    pub const ALL: [Outcome; 4] = [Outcome::Zero, Outcome::One, Outcome::Plus, Outcome::Minus];

    pub fn index(self) -> usize {
        match self {
            Outcome::Zero => 0,
            Outcome::One => 1,
            Outcome::Plus => 2,
            Outcome::Minus => 3,
        }
    }

    /// True when `self` and `other` belong to the same measurement basis.
    pub fn same_basis(self, other: Outcome) -> bool {
        (self.index() < 2) == (other.index() < 2)
    }

    /// The ideal qubit carrying this signal, embedded in the receiver's
    /// qubit-plus-vacuum space (last coordinate is the vacuum flag).
    pub fn qubit(self) -> DVector<Complex64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let amps: [f64; 2] = match self {
            Outcome::Zero => [1.0, 0.0],
            Outcome::One => [0.0, 1.0],
            Outcome::Plus => [h, h],
            Outcome::Minus => [h, -h],
        };
        DVector::from_iterator(
            BOB_DIM,
            [amps[0], amps[1], 0.0].iter().map(|&x| Complex64::new(x, 0.0)),
        )
    }
}

/// The `n`-photon polarization state encoding `k`, in the symmetric
/// subspace of `n` qubits: basis vector `j` holds `j` photons in the `1`
/// mode. Dimension `n + 1`; for `n = 0` every signal is the same vacuum.
pub fn fock_state(n: usize, k: Outcome) -> DVector<Complex64> {
    let dim = n + 1;
    let mut v = DVector::from_element(dim, Complex64::new(0.0, 0.0));
    match k {
        Outcome::Zero => v[0] = Complex64::new(1.0, 0.0),
        Outcome::One => v[n] = Complex64::new(1.0, 0.0),
        Outcome::Plus | Outcome::Minus => {
            let sign: f64 = if k == Outcome::Plus { 1.0 } else { -1.0 };
            let norm = 0.5f64.powf(n as f64 / 2.0);
            let mut binom = 1.0f64; // C(n, j), updated incrementally
            for j in 0..dim {
                v[j] = Complex64::new(norm * binom.sqrt() * sign.powi(j as i32), 0.0);
                if j < n {
                    binom = binom * (n - j) as f64 / (j + 1) as f64;
                }
            }
        }
    }
    v
}

/// The entanglement-based description of the source for photon number `n`:
/// an equal superposition of the four signal choices, the register holding
/// which one was sent. Lives on `[4, n+1]`.
pub fn source_state(n: usize) -> HermOp {
    let space = TensorSpace::new(vec![ALICE_DIM, n + 1]).expect("static dims");
    let dim = ALICE_DIM * (n + 1);
    let mut v = DVector::from_element(dim, Complex64::new(0.0, 0.0));
    for k in Outcome::ALL {
        let fock = fock_state(n, k);
        for j in 0..=n {
            v[k.index() * (n + 1) + j] = 0.5 * fock[j];
        }
    }
    HermOp::projector(space, &v).expect("normalized by construction")
}

/// The sender-side marginal of [`source_state`] in closed form. Its Gram
/// structure is what the tomography constraints pin downstream.
pub fn reduced_alice(n: usize) -> HermOp {
    let space = TensorSpace::single(ALICE_DIM).expect("static dims");
    if n == 0 {
        let mat = DMatrix::from_element(4, 4, 0.25);
        return HermOp::from_real(space, mat).expect("symmetric");
    }
    let a = 0.5f64.powf(n as f64 / 2.0);
    let b = if n % 2 == 0 { a } else { -a };
    let mat = DMatrix::from_row_slice(
        4,
        4,
        &[
            1.0, 0.0, a, a, //
            0.0, 1.0, a, b, //
            a, a, 1.0, 0.0, //
            a, b, 0.0, 1.0,
        ],
    )
    .scale(0.25);
    HermOp::from_real(space, mat).expect("symmetric")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn overlap(u: &DVector<Complex64>, v: &DVector<Complex64>) -> Complex64 {
        u.dotc(v)
    }

    #[test]
    fn fock_overlaps_follow_the_binomial_pattern() {
        for n in 1..=8 {
            let z = fock_state(n, Outcome::Zero);
            let o = fock_state(n, Outcome::One);
            let p = fock_state(n, Outcome::Plus);
            let m = fock_state(n, Outcome::Minus);
            let r = 0.5f64.powf(n as f64 / 2.0);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_abs_diff_eq!(overlap(&z, &p).re, r, epsilon = 1e-14);
            assert_abs_diff_eq!(overlap(&z, &m).re, r, epsilon = 1e-14);
            assert_abs_diff_eq!(overlap(&o, &p).re, r, epsilon = 1e-14);
            assert_abs_diff_eq!(overlap(&o, &m).re, sign * r, epsilon = 1e-14);
            assert_abs_diff_eq!(overlap(&p, &m).norm(), 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(overlap(&z, &o).norm(), 0.0, epsilon = 1e-14);
            for s in [&z, &o, &p, &m] {
                assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn closed_form_marginal_matches_partial_trace() {
        for n in 0..=6 {
            let full = source_state(n);
            let traced = full.partial_trace(&[0]).unwrap();
            let closed = reduced_alice(n);
            let diff = traced.sub(&closed).max_abs_entry();
            assert!(diff < 1e-13, "n={n}: {diff}");
            assert_abs_diff_eq!(closed.trace(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn two_photon_marginal_is_rank_deficient() {
        // |2_+⟩ + |2_−⟩ = |2_0⟩ + |2_1⟩ collapses one direction
        let eigs = reduced_alice(2).eigenvalues();
        assert!(eigs[0].abs() < 1e-14, "{eigs:?}");
        assert!(eigs[1] > 0.01);
    }

    #[test]
    fn marginals_are_positive() {
        for n in 1..=8 {
            assert!(reduced_alice(n).min_eigenvalue() > -1e-14);
        }
    }
}
