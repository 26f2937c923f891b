use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{HermError, HermOp, TensorSpace};

/// Tomographically complete operator basis on a 4-dimensional space: the 16
/// two-qubit Pauli products `σ_a ⊗ σ_b`, ordered row-major over
/// `a, b ∈ {I, X, Y, Z}` so the identity comes first.
///
/// The returned operators satisfy `Tr(C_i C_j) = 4 δ_ij` and
/// `Tr(C_i) = 4 δ_{i0}`, and they span every Hermitian operator on the
/// space. The space may be declared as `[4]` or `[2, 2]`; the operators are
/// built on its flat 4-dimensional index either way.
pub fn pauli_basis(space: &TensorSpace) -> Result<Vec<HermOp>, HermError> {
    let dim = space.total_dim();
    if dim != 4 {
        return Err(HermError::BasisDimension { dim });
    }
    let c = Complex64::new;
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let sigma: [[[Complex64; 2]; 2]; 4] = [
        [[one, zero], [zero, one]],
        [[zero, one], [one, zero]],
        [[zero, c(0.0, -1.0)], [c(0.0, 1.0), zero]],
        [[one, zero], [zero, -one]],
    ];
    let mut out = Vec::with_capacity(16);
    for a in 0..4 {
        for b in 0..4 {
            let mut mat = DMatrix::<Complex64>::zeros(4, 4);
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        for l in 0..2 {
                            mat[(2 * i + k, 2 * j + l)] = sigma[a][i][j] * sigma[b][k][l];
                        }
                    }
                }
            }
            out.push(HermOp::new(space.clone(), mat)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn basis_is_trace_orthogonal() {
        let space = TensorSpace::single(4).unwrap();
        let basis = pauli_basis(&space).unwrap();
        assert_eq!(basis.len(), 16);
        for (i, ci) in basis.iter().enumerate() {
            let expected_trace = if i == 0 { 4.0 } else { 0.0 };
            assert_relative_eq!(ci.trace(), expected_trace, epsilon = 1e-12);
            for (j, cj) in basis.iter().enumerate() {
                let expected = if i == j { 4.0 } else { 0.0 };
                assert_relative_eq!(ci.inner(cj), expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn basis_spans_hermitian_operators() {
        let space = TensorSpace::new(vec![2, 2]).unwrap();
        let basis = pauli_basis(&space).unwrap();
        let c = Complex64::new;
        let target = HermOp::new(
            space,
            DMatrix::from_fn(4, 4, |i, j| {
                if i == j {
                    c(i as f64, 0.0)
                } else if i < j {
                    c(0.1 * (i + j) as f64, 0.02 * (j as f64 - i as f64))
                } else {
                    c(0.1 * (i + j) as f64, -0.02 * (i as f64 - j as f64))
                }
            }),
        )
        .unwrap();
        let mut rebuilt = HermOp::zeros(target.space().clone());
        for b in &basis {
            let coeff = target.inner(b) / 4.0;
            rebuilt = rebuilt.add(&b.scaled(coeff));
        }
        assert_relative_eq!(
            rebuilt.sub(&target).frobenius_norm(),
            0.0,
            epsilon = 1e-12
        );
    }
}
