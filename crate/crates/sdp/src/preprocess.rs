use nalgebra::DVector;

use crate::{Constraint, SdpProblem};

/// Relative pivot threshold: a row whose residual after projection onto the
/// retained rows falls below `PIVOT_TOL · ‖row‖` is declared dependent.
const PIVOT_TOL: f64 = 1e-10;

/// A dependent row whose right-hand side disagrees with the implied value by
/// more than this is an inconsistency (the equalities have no solution).
const CONSISTENCY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum PreprocessOutcome {
    /// Cleaned problem with only independent equalities retained.
    Reduced(SdpProblem),
    /// Equalities are contradictory; `row` indexes the first offending
    /// constraint in the original ordering.
    Inconsistent { row: usize, mismatch: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreprocessReport {
    /// Original indices of retained constraints, in order.
    pub kept: Vec<usize>,
    /// Original indices of removed (linearly dependent, consistent) rows.
    pub removed: Vec<usize>,
}

/// Remove linearly dependent equality constraints.
///
/// Rows are scanned in their original order and the first occurrence of each
/// independent direction wins, so the reduction is deterministic. Dependence
/// is decided by modified Gram-Schmidt (with one re-orthogonalization pass)
/// on the stacked coefficient vectors. A dependent row must also have the
/// right-hand side implied by the rows it depends on; otherwise the system
/// is inconsistent and the caller should report primal infeasibility.
pub fn preprocess(problem: &SdpProblem) -> (PreprocessOutcome, PreprocessReport) {
    let dims = problem.block_dims();
    let flat_len: usize = dims.iter().map(|d| d * d).sum();
    let offsets: Vec<usize> = dims
        .iter()
        .scan(0usize, |acc, d| {
            let at = *acc;
            *acc += d * d;
            Some(at)
        })
        .collect();

    let flatten = |c: &Constraint| -> DVector<f64> {
        let mut v = DVector::zeros(flat_len);
        for (block, mat) in c.functional.terms() {
            let at = offsets[*block];
            for (k, val) in mat.iter().enumerate() {
                v[at + k] = *val;
            }
        }
        v
    };

    let mut basis: Vec<DVector<f64>> = Vec::new(); // orthonormal
    let mut basis_rhs: Vec<f64> = Vec::new(); // rhs carried through the same elimination
    let mut kept = Vec::new();
    let mut removed = Vec::new();
    let mut retained_constraints = Vec::new();

    for (row, c) in problem.constraints().iter().enumerate() {
        let mut v = flatten(c);
        let norm0 = v.norm().max(c.rhs.abs());
        let mut rhs = c.rhs;
        for _pass in 0..2 {
            for (q, qr) in basis.iter().zip(&basis_rhs) {
                let coeff = q.dot(&v);
                v -= q * coeff;
                rhs -= qr * coeff;
            }
        }
        let res = v.norm();
        if res > PIVOT_TOL * norm0.max(1e-300) {
            basis_rhs.push(rhs / res);
            basis.push(v / res);
            kept.push(row);
            retained_constraints.push(c.clone());
        } else if rhs.abs() > CONSISTENCY_TOL {
            return (
                PreprocessOutcome::Inconsistent {
                    row,
                    mismatch: rhs.abs(),
                },
                PreprocessReport { kept, removed },
            );
        } else {
            removed.push(row);
        }
    }

    let reduced = SdpProblem::new(
        dims.to_vec(),
        problem.objective().clone(),
        retained_constraints,
    )
    .expect("reduction of a valid problem stays valid");
    (
        PreprocessOutcome::Reduced(reduced),
        PreprocessReport { kept, removed },
    )
}
