use hermitian_core::{pauli_basis, HermOp, RealEmbedding, TensorSpace};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn hermitian_from_seed(dims: Vec<usize>, entries: Vec<(f64, f64)>) -> HermOp {
    let space = TensorSpace::new(dims).unwrap();
    let n = space.total_dim();
    let raw = DMatrix::from_fn(n, n, |i, j| {
        let (re, im) = entries[(i * n + j) % entries.len()];
        Complex64::new(re, im)
    });
    let herm = (&raw + &raw.adjoint()).scale(0.5);
    HermOp::new(space, herm).unwrap()
}

fn arb_entries(len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
}

proptest! {
    #[test]
    fn partial_trace_preserves_trace(entries in arb_entries(36), keep_first in any::<bool>()) {
        let op = hermitian_from_seed(vec![3, 2], entries);
        let keep: &[usize] = if keep_first { &[0] } else { &[1] };
        let reduced = op.partial_trace(keep).unwrap();
        prop_assert!((reduced.trace() - op.trace()).abs() < 1e-10);
    }

    #[test]
    fn partial_transpose_is_involutive_and_trace_preserving(entries in arb_entries(144)) {
        let op = hermitian_from_seed(vec![4, 3], entries);
        let pt = op.partial_transpose(1).unwrap();
        prop_assert!((pt.trace() - op.trace()).abs() < 1e-12);
        let back = pt.partial_transpose(1).unwrap();
        // pure entry permutation: exact equality, no arithmetic drift
        prop_assert_eq!(back.matrix(), op.matrix());
    }

    #[test]
    fn kron_is_associative(a in arb_entries(4), b in arb_entries(4), c in arb_entries(9)) {
        let x = hermitian_from_seed(vec![2], a);
        let y = hermitian_from_seed(vec![2], b);
        let z = hermitian_from_seed(vec![3], c);
        let left = x.kron(&y).kron(&z);
        let right = x.kron(&y.kron(&z));
        prop_assert_eq!(left.space().dims(), right.space().dims());
        prop_assert!(left.sub(&right).frobenius_norm() < 1e-12);
    }

    #[test]
    fn embedding_preserves_definiteness(entries in arb_entries(16), shift in -2.0f64..2.0) {
        // A + shift·I sweeps through indefinite and definite samples.
        let base = hermitian_from_seed(vec![4], entries);
        let op = base.add(&HermOp::identity(base.space().clone()).scaled(shift));
        let min_c = op.min_eigenvalue();
        let emb = op.real_embed().into_matrix();
        let mut eigs: Vec<f64> = nalgebra::SymmetricEigen::new(emb)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        prop_assert!((eigs[0] - min_c).abs() < 1e-10);
    }

    #[test]
    fn embedding_roundtrip_is_exact(entries in arb_entries(25)) {
        let op = hermitian_from_seed(vec![5], entries);
        let back = RealEmbedding::extract(op.real_embed().matrix(), op.space()).unwrap();
        prop_assert_eq!(back.matrix(), op.matrix());
    }

    #[test]
    fn pauli_coefficients_reconstruct_the_operator(entries in arb_entries(16)) {
        let op = hermitian_from_seed(vec![4], entries);
        let basis = pauli_basis(op.space()).unwrap();
        let mut rebuilt = HermOp::zeros(op.space().clone());
        for b in &basis {
            rebuilt = rebuilt.add(&b.scaled(op.inner(b) / 4.0));
        }
        prop_assert!(rebuilt.sub(&op).frobenius_norm() < 1e-10);
    }
}
