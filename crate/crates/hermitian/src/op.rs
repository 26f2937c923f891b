use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::{HermError, RealEmbedding, TensorSpace, HERMITICITY_TOL};

/// A Hermitian operator tied to a tensor-product space.
///
/// The stored matrix is exactly Hermitian: constructors validate input
/// against [`HERMITICITY_TOL`] and keep only the Hermitian part, and every
/// operation preserves that invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct HermOp {
    space: TensorSpace,
    mat: DMatrix<Complex64>,
}

impl HermOp {
    pub fn new(space: TensorSpace, mat: DMatrix<Complex64>) -> Result<Self, HermError> {
        let n = space.total_dim();
        if mat.nrows() != n || mat.ncols() != n {
            return Err(HermError::ShapeMismatch {
                rows: mat.nrows(),
                cols: mat.ncols(),
                dim: n,
            });
        }
        let mut deviation = 0.0f64;
        for i in 0..n {
            for j in i..n {
                deviation = deviation.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
            }
        }
        if deviation > HERMITICITY_TOL {
            return Err(HermError::NotHermitian { deviation });
        }
        let herm = (&mat + &mat.adjoint()).scale(0.5);
        Ok(Self::raw(space, herm))
    }

    /// Internal constructor for matrices already known to be Hermitian.
    pub(crate) fn raw(space: TensorSpace, mat: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(mat.nrows(), space.total_dim());
        Self { space, mat }
    }

    pub fn zeros(space: TensorSpace) -> Self {
        let n = space.total_dim();
        Self::raw(space, DMatrix::zeros(n, n))
    }

    pub fn identity(space: TensorSpace) -> Self {
        let n = space.total_dim();
        Self::raw(space, DMatrix::identity(n, n))
    }

    /// Real-entry convenience constructor; the matrix must be symmetric.
    pub fn from_real(space: TensorSpace, mat: DMatrix<f64>) -> Result<Self, HermError> {
        let complex = mat.map(|v| Complex64::new(v, 0.0));
        Self::new(space, complex)
    }

    /// Outer product `v v†` (unnormalized projector when `v` is a unit vector).
    pub fn projector(space: TensorSpace, v: &DVector<Complex64>) -> Result<Self, HermError> {
        let n = space.total_dim();
        if v.len() != n {
            return Err(HermError::ShapeMismatch {
                rows: v.len(),
                cols: 1,
                dim: n,
            });
        }
        let mat = v * v.adjoint();
        Ok(Self::raw(space, mat))
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.mat
    }

    /// Trace, which is real for a Hermitian operator.
    pub fn trace(&self) -> f64 {
        let mut t = 0.0;
        for i in 0..self.mat.nrows() {
            t += self.mat[(i, i)].re;
        }
        t
    }

    /// Hilbert-Schmidt inner product `Tr(A B)`, real for Hermitian pairs.
    pub fn inner(&self, rhs: &HermOp) -> f64 {
        debug_assert_eq!(self.space, rhs.space);
        let mut acc = 0.0;
        for i in 0..self.mat.nrows() {
            for j in 0..self.mat.ncols() {
                // Tr(AB) = Σ_ij A_ij B_ji = Σ_ij A_ij conj(B_ij)
                let a = self.mat[(i, j)];
                let b = rhs.mat[(i, j)];
                acc += a.re * b.re + a.im * b.im;
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: f64) -> HermOp {
        Self::raw(self.space.clone(), self.mat.scale(factor))
    }

    pub fn add(&self, rhs: &HermOp) -> HermOp {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        Self::raw(self.space.clone(), &self.mat + &rhs.mat)
    }

    pub fn sub(&self, rhs: &HermOp) -> HermOp {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        Self::raw(self.space.clone(), &self.mat - &rhs.mat)
    }

    /// Kronecker product; the result lives on the composed space.
    pub fn kron(&self, rhs: &HermOp) -> HermOp {
        let space = self.space.compose(&rhs.space);
        let mat = self.mat.kronecker(&rhs.mat);
        Self::raw(space, mat)
    }

    /// Trace out every subsystem not listed in `keep`. The keep list must be
    /// strictly increasing; the result keeps those subsystems in order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<HermOp, HermError> {
        let m = self.space.subsystems();
        let valid = !keep.is_empty()
            && keep.iter().all(|&s| s < m)
            && keep.windows(2).all(|w| w[0] < w[1]);
        if !valid {
            return Err(HermError::BadKeepList);
        }
        let kept_dims: Vec<usize> = keep.iter().map(|&s| self.space.dims()[s]).collect();
        let out_space = TensorSpace::new(kept_dims)?;
        let traced: Vec<usize> = (0..m).filter(|s| !keep.contains(s)).collect();

        let n = self.space.total_dim();
        let mut out = DMatrix::<Complex64>::zeros(out_space.total_dim(), out_space.total_dim());
        for i in 0..n {
            let di = self.space.digits(i);
            for j in 0..n {
                let dj = self.space.digits(j);
                if traced.iter().any(|&s| di[s] != dj[s]) {
                    continue;
                }
                let ro: Vec<usize> = keep.iter().map(|&s| di[s]).collect();
                let co: Vec<usize> = keep.iter().map(|&s| dj[s]).collect();
                out[(out_space.index_of(&ro), out_space.index_of(&co))] += self.mat[(i, j)];
            }
        }
        Ok(Self::raw(out_space, out))
    }

    /// Transpose the indices of one subsystem. This only permutes entries,
    /// so applying it twice returns the original operator exactly.
    pub fn partial_transpose(&self, subsystem: usize) -> Result<HermOp, HermError> {
        let m = self.space.subsystems();
        if subsystem >= m {
            return Err(HermError::BadSubsystem {
                index: subsystem,
                count: m,
            });
        }
        let n = self.space.total_dim();
        let mut out = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..n {
            let di = self.space.digits(i);
            for j in 0..n {
                let dj = self.space.digits(j);
                let mut ri = di.clone();
                let mut rj = dj.clone();
                ri[subsystem] = dj[subsystem];
                rj[subsystem] = di[subsystem];
                out[(self.space.index_of(&ri), self.space.index_of(&rj))] = self.mat[(i, j)];
            }
        }
        Ok(Self::raw(self.space.clone(), out))
    }

    /// Conjugate by the permutation that exchanges two subsystems:
    /// `P X P†` with `P` the swap. The result lives on the space with the
    /// two dimensions exchanged.
    pub fn swap_subsystems(&self, a: usize, b: usize) -> Result<HermOp, HermError> {
        let m = self.space.subsystems();
        if a >= m {
            return Err(HermError::BadSubsystem { index: a, count: m });
        }
        if b >= m {
            return Err(HermError::BadSubsystem { index: b, count: m });
        }
        let mut out_dims = self.space.dims().to_vec();
        out_dims.swap(a, b);
        let out_space = TensorSpace::new(out_dims)?;
        let n = self.space.total_dim();
        let mut out = DMatrix::<Complex64>::zeros(n, n);
        let permute = |digits: &[usize]| {
            let mut d = digits.to_vec();
            d.swap(a, b);
            out_space.index_of(&d)
        };
        for i in 0..n {
            let pi = permute(&self.space.digits(i));
            for j in 0..n {
                let pj = permute(&self.space.digits(j));
                out[(pi, pj)] = self.mat[(i, j)];
            }
        }
        Ok(Self::raw(out_space, out))
    }

    /// Compression `V† X V` onto the range described by an isometry
    /// `V: out_space → self.space` (columns orthonormal).
    pub fn compress(
        &self,
        isometry: &DMatrix<Complex64>,
        out_space: TensorSpace,
    ) -> Result<HermOp, HermError> {
        let n = self.space.total_dim();
        let k = out_space.total_dim();
        if isometry.nrows() != n || isometry.ncols() != k {
            return Err(HermError::BadIsometryShape {
                rows: isometry.nrows(),
                cols: isometry.ncols(),
                expected_rows: n,
                expected_cols: k,
            });
        }
        let mat = isometry.adjoint() * &self.mat * isometry;
        // exact in theory; snap the rounding noise back to Hermitian
        let herm = (&mat + &mat.adjoint()).scale(0.5);
        Ok(Self::raw(out_space, herm))
    }

    /// Expansion `V X V†` along an isometry `V: self.space → out_space`.
    pub fn expand(
        &self,
        isometry: &DMatrix<Complex64>,
        out_space: TensorSpace,
    ) -> Result<HermOp, HermError> {
        let n = self.space.total_dim();
        let k = out_space.total_dim();
        if isometry.nrows() != k || isometry.ncols() != n {
            return Err(HermError::BadIsometryShape {
                rows: isometry.nrows(),
                cols: isometry.ncols(),
                expected_rows: k,
                expected_cols: n,
            });
        }
        let mat = isometry * &self.mat * isometry.adjoint();
        let herm = (&mat + &mat.adjoint()).scale(0.5);
        Ok(Self::raw(out_space, herm))
    }

    pub fn real_embed(&self) -> RealEmbedding {
        RealEmbedding::of(self)
    }

    /// Eigenvalues in ascending order (real, since the operator is Hermitian).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = SymmetricEigen::new(self.mat.clone());
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
        vals
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell_projector() -> HermOp {
        // |Φ+⟩ = (|00⟩ + |11⟩)/√2 on [2, 2]
        let space = TensorSpace::new(vec![2, 2]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = DVector::from_vec(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]);
        HermOp::projector(space, &v).unwrap()
    }

    #[test]
    fn construction_rejects_non_hermitian() {
        let space = TensorSpace::single(2).unwrap();
        let mat = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.5, 0.0), c(0.2, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            HermOp::new(space, mat),
            Err(HermError::NotHermitian { .. })
        ));
    }

    #[test]
    fn partial_trace_of_product_recovers_factor() {
        let sa = TensorSpace::single(3).unwrap();
        let sb = TensorSpace::single(2).unwrap();
        let a = HermOp::new(
            sa,
            DMatrix::from_row_slice(
                3,
                3,
                &[
                    c(1.0, 0.0),
                    c(0.0, 0.5),
                    c(0.0, 0.0),
                    c(0.0, -0.5),
                    c(2.0, 0.0),
                    c(0.3, 0.0),
                    c(0.0, 0.0),
                    c(0.3, 0.0),
                    c(-1.0, 0.0),
                ],
            ),
        )
        .unwrap();
        let b = HermOp::new(
            sb,
            DMatrix::from_row_slice(2, 2, &[c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]),
        )
        .unwrap();
        let ab = a.kron(&b);
        assert_eq!(ab.space().dims(), &[3, 2]);

        let back = ab.partial_trace(&[0]).unwrap();
        let expected = a.scaled(b.trace());
        assert_relative_eq!(
            (back.sub(&expected)).frobenius_norm(),
            0.0,
            epsilon = 1e-12
        );

        let other = ab.partial_trace(&[1]).unwrap();
        let expected_b = b.scaled(a.trace());
        assert_relative_eq!(
            (other.sub(&expected_b)).frobenius_norm(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn partial_transpose_is_an_exact_involution() {
        let bell = bell_projector();
        let pt = bell.partial_transpose(1).unwrap();
        let back = pt.partial_transpose(1).unwrap();
        assert_eq!(back.matrix(), bell.matrix());
    }

    #[test]
    fn bell_state_partial_transpose_has_minus_half_eigenvalue() {
        let pt = bell_projector().partial_transpose(1).unwrap();
        assert_relative_eq!(pt.min_eigenvalue(), -0.5, epsilon = 1e-12);
        // trace is preserved by the partial transpose
        assert_relative_eq!(pt.trace(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn swap_exchanges_kron_factors() {
        let sa = TensorSpace::single(2).unwrap();
        let a = HermOp::new(
            sa.clone(),
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.5, 0.0)]),
        )
        .unwrap();
        let b = HermOp::new(
            sa,
            DMatrix::from_row_slice(2, 2, &[c(0.2, 0.0), c(0.4, 0.0), c(0.4, 0.0), c(0.9, 0.0)]),
        )
        .unwrap();
        let ab = a.kron(&b);
        let ba = b.kron(&a);
        let swapped = ab.swap_subsystems(0, 1).unwrap();
        assert_relative_eq!(swapped.sub(&ba).frobenius_norm(), 0.0, epsilon = 1e-14);
        let twice = swapped.swap_subsystems(0, 1).unwrap();
        assert_eq!(twice.matrix(), ab.matrix());
    }

    #[test]
    fn swap_handles_unequal_dimensions() {
        let a = HermOp::new(
            TensorSpace::single(2).unwrap(),
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.5, 0.0)]),
        )
        .unwrap();
        let b = HermOp::projector(
            TensorSpace::single(3).unwrap(),
            &nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]),
        )
        .unwrap();
        let ab = a.kron(&b);
        let swapped = ab.swap_subsystems(0, 1).unwrap();
        assert_eq!(swapped.space().dims(), &[3, 2]);
        assert_relative_eq!(
            swapped.sub(&b.kron(&a)).frobenius_norm(),
            0.0,
            epsilon = 1e-14
        );
        let back = swapped.swap_subsystems(0, 1).unwrap();
        assert_eq!(back.matrix(), ab.matrix());
    }

    #[test]
    fn inner_product_matches_trace_of_product() {
        let bell = bell_projector();
        let id = HermOp::identity(bell.space().clone());
        assert_relative_eq!(bell.inner(&id), 1.0, epsilon = 1e-12);
        assert_relative_eq!(bell.inner(&bell), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn compress_with_subspace_isometry() {
        // embed a qubit into the first two levels of a qutrit and back
        let q3 = TensorSpace::single(3).unwrap();
        let q2 = TensorSpace::single(2).unwrap();
        let mut v = DMatrix::<Complex64>::zeros(3, 2);
        v[(0, 0)] = c(1.0, 0.0);
        v[(1, 1)] = c(1.0, 0.0);
        let op = HermOp::new(
            q3,
            DMatrix::from_row_slice(
                3,
                3,
                &[
                    c(1.0, 0.0),
                    c(0.0, 0.3),
                    c(0.0, 0.0),
                    c(0.0, -0.3),
                    c(2.0, 0.0),
                    c(0.0, 0.0),
                    c(0.0, 0.0),
                    c(0.0, 0.0),
                    c(5.0, 0.0),
                ],
            ),
        )
        .unwrap();
        let small = op.compress(&v, q2).unwrap();
        assert_relative_eq!(small.trace(), 3.0, epsilon = 1e-12);
        assert_eq!(small.matrix()[(0, 1)], c(0.0, 0.3));
    }
}
