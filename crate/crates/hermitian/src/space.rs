use crate::HermError;

/// An ordered list of subsystem dimensions. Index layout is row-major: the
/// first subsystem is the most significant digit of a composite index, which
/// matches the Kronecker-product convention `A ⊗ B` with `A` first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorSpace {
    dims: Vec<usize>,
}

impl TensorSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self, HermError> {
        if dims.is_empty() {
            return Err(HermError::EmptySpace);
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(HermError::ZeroDimension);
        }
        Ok(Self { dims })
    }

    /// Single-subsystem space of the given dimension.
    pub fn single(dim: usize) -> Result<Self, HermError> {
        Self::new(vec![dim])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Space whose subsystem list is `self` followed by `other`.
    pub fn compose(&self, other: &TensorSpace) -> TensorSpace {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        TensorSpace { dims }
    }

    /// Decompose a flat index into per-subsystem digits.
    pub(crate) fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in self.dims.iter().enumerate().rev() {
            out[slot] = index % d;
            index /= d;
        }
        out
    }

    /// Recompose per-subsystem digits into a flat index.
    pub(crate) fn index_of(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.dims.len());
        let mut index = 0;
        for (&digit, &d) in digits.iter().zip(&self.dims) {
            debug_assert!(digit < d);
            index = index * d + digit;
        }
        index
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_roundtrip_matches_kron_layout() {
        let space = TensorSpace::new(vec![4, 3, 2]).unwrap();
        assert_eq!(space.total_dim(), 24);
        for i in 0..24 {
            let d = space.digits(i);
            assert_eq!(space.index_of(&d), i);
        }
        // first subsystem is the most significant digit
        assert_eq!(space.digits(23), vec![3, 2, 1]);
        assert_eq!(space.index_of(&[1, 0, 0]), 6);
    }

    #[test]
    fn rejects_degenerate_spaces() {
        assert_eq!(TensorSpace::new(vec![]), Err(HermError::EmptySpace));
        assert_eq!(TensorSpace::new(vec![3, 0]), Err(HermError::ZeroDimension));
    }
}
