use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{HermError, HermOp, TensorSpace};

/// Real symmetric image of a complex Hermitian operator:
/// `H = A + iB  ↦  [[A, -B], [B, A]]`.
///
/// The embedding doubles every eigenvalue's multiplicity, so positive
/// semidefiniteness carries over in both directions and Frobenius inner
/// products double: `⟨embed(X), embed(Y)⟩ = 2 Tr(X Y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealEmbedding {
    mat: DMatrix<f64>,
}

impl RealEmbedding {
    pub fn of(op: &HermOp) -> Self {
        let n = op.space().total_dim();
        let src = op.matrix();
        let mut mat = DMatrix::<f64>::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let z = src[(i, j)];
                mat[(i, j)] = z.re;
                mat[(n + i, n + j)] = z.re;
                mat[(i, n + j)] = -z.im;
                mat[(n + i, j)] = z.im;
            }
        }
        Self { mat }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.mat
    }

    /// Recover a Hermitian operator from a `2n x 2n` symmetric matrix.
    ///
    /// The input is averaged over the embedding symmetry `M ↦ J M Jᵀ`
    /// (J the block rotation), so any symmetric matrix — in particular a
    /// positive semidefinite one produced by a real solver — maps to a
    /// well-defined Hermitian operator; PSD inputs map to PSD outputs.
    /// For exact embeddings this inverts [`RealEmbedding::of`] exactly.
    pub fn extract(mat: &DMatrix<f64>, space: &TensorSpace) -> Result<HermOp, HermError> {
        let n = space.total_dim();
        if mat.nrows() != 2 * n || mat.ncols() != 2 * n {
            return Err(HermError::BadEmbeddingShape);
        }
        let mut out = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let re = 0.5 * (mat[(i, j)] + mat[(n + i, n + j)]);
                let im = 0.5 * (mat[(n + i, j)] - mat[(i, n + j)]);
                out[(i, j)] = Complex64::new(re, im);
            }
        }
        HermOp::new(space.clone(), out)
    }
}
