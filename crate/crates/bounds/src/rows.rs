use hermitian_core::{HermOp, TensorSpace};
use nalgebra::DMatrix;

use crate::spaces::hermitian_basis;
use crate::EngineError;

/// Linear data known about the joint state: a list of (operator, value)
/// pairs `Tr(G σ) = g`. This is what every weight computation consumes; the
/// builders decide how the decomposition of σ is encoded. When built from
/// observations the POVMs are kept so the weight computations can also
/// report the outcome distribution of the remainder they leave behind.
#[derive(Debug, Clone)]
pub struct DataRows {
    space: TensorSpace,
    rows: Vec<(HermOp, f64)>,
    alice_povm: Vec<HermOp>,
    bob_povm: Vec<HermOp>,
}

impl DataRows {
    pub fn new(space: TensorSpace, rows: Vec<(HermOp, f64)>) -> Result<Self, EngineError> {
        if space.subsystems() != 2 {
            return Err(EngineError::NotBipartite(space.subsystems()));
        }
        for (op, _) in &rows {
            if op.space() != &space {
                return Err(EngineError::RowSpaceMismatch);
            }
        }
        Ok(Self {
            space,
            rows,
            alice_povm: Vec::new(),
            bob_povm: Vec::new(),
        })
    }

    /// Everything the two parties observe: the joint outcome probabilities
    /// for their POVMs, the sender's full marginal, and unit trace.
    pub fn from_observations(
        alice_povm: &[HermOp],
        bob_povm: &[HermOp],
        table: &DMatrix<f64>,
        marginal: &HermOp,
    ) -> Result<Self, EngineError> {
        if table.nrows() != alice_povm.len() || table.ncols() != bob_povm.len() {
            return Err(EngineError::TableShape {
                rows: table.nrows(),
                cols: table.ncols(),
                alice: alice_povm.len(),
                bob: bob_povm.len(),
            });
        }
        let alice_space = marginal.space().clone();
        let bob_space = bob_povm
            .first()
            .ok_or(EngineError::EmptyPovm)?
            .space()
            .clone();
        let space = alice_space.compose(&bob_space);

        let mut rows = Vec::new();
        for (k, a) in alice_povm.iter().enumerate() {
            for (j, b) in bob_povm.iter().enumerate() {
                rows.push((a.kron(b), table[(k, j)]));
            }
        }
        let bob_id = HermOp::identity(bob_space);
        for h in hermitian_basis(&alice_space) {
            rows.push((h.kron(&bob_id), h.inner(marginal)));
        }
        rows.push((
            HermOp::identity(space.clone()),
            1.0,
        ));
        let mut data = Self::new(space, rows)?;
        data.alice_povm = alice_povm.to_vec();
        data.bob_povm = bob_povm.to_vec();
        Ok(data)
    }

    /// Pin the state entrywise (a complete Hermitian basis of rows). Used
    /// when the joint state is known exactly rather than through
    /// measurements.
    pub fn pin_state(sigma: &HermOp) -> Result<Self, EngineError> {
        let rows = hermitian_basis(sigma.space())
            .into_iter()
            .map(|h| {
                let v = h.inner(sigma);
                (h, v)
            })
            .collect();
        Self::new(sigma.space().clone(), rows)
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn rows(&self) -> &[(HermOp, f64)] {
        &self.rows
    }

    /// POVMs behind the observation rows; empty when the rows were not
    /// built from measurements (then no remainder distribution is
    /// reported).
    pub fn alice_povm(&self) -> &[HermOp] {
        &self.alice_povm
    }

    pub fn bob_povm(&self) -> &[HermOp] {
        &self.bob_povm
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use protocol_model::{
        alice_povm, bob_povm, outcome_distribution, reduced_alice, simulated_state, ChannelModel,
    };

    #[test]
    fn observation_rows_hold_on_the_simulated_state() {
        let ch = ChannelModel::new(1e-5, 0.02).unwrap();
        for n in 1..=3 {
            let table = outcome_distribution(&ch, 0.3, n);
            let data =
                DataRows::from_observations(&alice_povm(), &bob_povm(), &table, &reduced_alice(n))
                    .unwrap();
            assert_eq!(data.rows().len(), 20 + 16 + 1);
            let sigma = simulated_state(&ch, 0.3, n);
            for (op, val) in data.rows() {
                assert!((op.inner(&sigma) - val).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn pinned_rows_determine_the_state() {
        let ch = ChannelModel::new(1e-5, 0.02).unwrap();
        let sigma = simulated_state(&ch, 0.7, 2);
        let data = DataRows::pin_state(&sigma).unwrap();
        assert_eq!(data.rows().len(), 144);
        for (op, val) in data.rows() {
            assert!((op.inner(&sigma) - val).abs() < 1e-13);
        }
    }

    #[test]
    fn shape_mismatches_are_rejected() {
        let ch = ChannelModel::new(1e-5, 0.02).unwrap();
        let table = outcome_distribution(&ch, 0.3, 1);
        let bad = table.clone().remove_column(4);
        assert!(DataRows::from_observations(
            &alice_povm(),
            &bob_povm(),
            &bad,
            &reduced_alice(1)
        )
        .is_err());
    }
}
