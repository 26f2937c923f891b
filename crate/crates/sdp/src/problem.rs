use nalgebra::DMatrix;

use crate::SdpError;

/// Largest entrywise asymmetry accepted in coefficient matrices; anything
/// inside is snapped to the symmetric part.
const SYMMETRY_TOL: f64 = 1e-12;

/// A linear functional `X ↦ Σ ⟨A_b, X_b⟩` over the block variable, stored
/// sparsely as (block index, symmetric coefficient) pairs sorted by block.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional {
    terms: Vec<(usize, DMatrix<f64>)>,
}

impl Functional {
    pub fn new(mut terms: Vec<(usize, DMatrix<f64>)>) -> Result<Self, SdpError> {
        terms.sort_by_key(|(b, _)| *b);
        for w in terms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(SdpError::DuplicateBlockTerm { index: w[0].0 });
            }
        }
        let mut cleaned = Vec::with_capacity(terms.len());
        for (block, mat) in terms {
            if mat.nrows() != mat.ncols() {
                return Err(SdpError::CoefficientShape {
                    index: block,
                    rows: mat.nrows(),
                    cols: mat.ncols(),
                    dim: mat.nrows(),
                });
            }
            let deviation = (&mat - mat.transpose()).abs().max();
            if deviation > SYMMETRY_TOL {
                return Err(SdpError::NotSymmetric { deviation });
            }
            let sym = (&mat + mat.transpose()).scale(0.5);
            cleaned.push((block, sym));
        }
        Ok(Self { terms: cleaned })
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[(usize, DMatrix<f64>)] {
        &self.terms
    }

    /// Evaluate against per-block values: `Σ ⟨A_b, X_b⟩`.
    pub fn apply(&self, blocks: &[DMatrix<f64>]) -> f64 {
        self.terms
            .iter()
            .map(|(b, a)| frob_inner(a, &blocks[*b]))
            .sum()
    }

    /// Frobenius norm over the whole stacked coefficient vector.
    pub fn norm(&self) -> f64 {
        self.terms
            .iter()
            .map(|(_, a)| a.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(b, a)| (*b, a.scale(factor)))
                .collect(),
        }
    }
}

pub(crate) fn frob_inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// One affine equality `⟨functional, X⟩ = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub functional: Functional,
    pub rhs: f64,
}

/// A semidefinite program in conic standard form (see the crate docs).
#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    block_dims: Vec<usize>,
    objective: Functional,
    constraints: Vec<Constraint>,
}

impl SdpProblem {
    pub fn new(
        block_dims: Vec<usize>,
        objective: Functional,
        constraints: Vec<Constraint>,
    ) -> Result<Self, SdpError> {
        if block_dims.is_empty() {
            return Err(SdpError::NoBlocks);
        }
        if block_dims.contains(&0) {
            return Err(SdpError::ZeroBlockDim);
        }
        validate_functional(&objective, &block_dims)?;
        for c in &constraints {
            validate_functional(&c.functional, &block_dims)?;
            if !c.rhs.is_finite() {
                return Err(SdpError::NonFiniteRhs);
            }
        }
        Ok(Self {
            block_dims,
            objective,
            constraints,
        })
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn objective(&self) -> &Functional {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Total dimension across blocks (the barrier degree of the cone).
    pub fn total_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }
}

fn validate_functional(f: &Functional, dims: &[usize]) -> Result<(), SdpError> {
    for (block, mat) in f.terms() {
        let Some(&dim) = dims.get(*block) else {
            return Err(SdpError::BadBlockIndex {
                index: *block,
                count: dims.len(),
            });
        };
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(SdpError::CoefficientShape {
                index: *block,
                rows: mat.nrows(),
                cols: mat.ncols(),
                dim,
            });
        }
    }
    Ok(())
}
