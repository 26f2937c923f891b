//! Mutual information of the joint outcome table.

use nalgebra::DMatrix;

use crate::EngineError;

/// Mutual information I(A;B) in bits of a joint distribution given as a
/// probability table (rows: A, columns: B). The table must sum to 1 within
/// 1e-6; it is renormalized before the entropy sums so that harmless
/// floating-point drift does not bias the result. Cells that are zero (or
/// negative by rounding) contribute nothing.
pub fn mutual_information(table: &DMatrix<f64>) -> Result<f64, EngineError> {
    let total: f64 = table.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(EngineError::NotNormalized(total));
    }
    let mut row_sum = vec![0.0; table.nrows()];
    let mut col_sum = vec![0.0; table.ncols()];
    for i in 0..table.nrows() {
        for j in 0..table.ncols() {
            let p = table[(i, j)] / total;
            if p > 0.0 {
                row_sum[i] += p;
                col_sum[j] += p;
            }
        }
    }
    let mut info = 0.0;
    for i in 0..table.nrows() {
        for j in 0..table.ncols() {
            let p = table[(i, j)] / total;
            if p > 0.0 {
                info += p * (p / (row_sum[i] * col_sum[j])).log2();
            }
        }
    }
    // rounding can leave a tiny negative on product distributions
    Ok(info.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn independent_table_has_zero_information() {
        let table = DMatrix::from_element(2, 2, 0.25);
        assert_eq!(mutual_information(&table).unwrap(), 0.0);
    }

    #[test]
    fn perfectly_correlated_bits_give_one_bit() {
        let table = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]);
        assert_abs_diff_eq!(mutual_information(&table).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn unnormalized_tables_are_rejected() {
        let table = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, 0.0]);
        assert!(matches!(
            mutual_information(&table),
            Err(EngineError::NotNormalized(t)) if (t - 1.5).abs() < 1e-12
        ));
    }

    #[test]
    fn tiny_drift_is_renormalized_away() {
        let eps = 1e-8;
        let table = DMatrix::from_row_slice(2, 2, &[0.5 + eps, 0.0, 0.0, 0.5]);
        assert_abs_diff_eq!(mutual_information(&table).unwrap(), 1.0, epsilon = 1e-7);
    }
}
