//! Deterministic generators for solver validation.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::problem::{frob_inner, Constraint, Functional, SdpProblem};

/// A randomly generated problem together with the strictly feasible
/// primal/dual pair it was built around.
///
/// `b` is chosen as A(X₀) and `C` as S₀ + A*(y₀), so both sides are strictly
/// feasible by construction and strong duality holds. The optimal value is
/// not known in closed form, but it is bracketed by b·y₀ and ⟨C,X₀⟩.
pub struct SeededInstance {
    pub problem: SdpProblem,
    pub x0: Vec<DMatrix<f64>>,
    pub s0: Vec<DMatrix<f64>>,
    pub y0: Vec<f64>,
}

/// Build a strictly feasible random instance. The same `(dims, m, seed)`
/// triple always yields bitwise-identical data.
pub fn seeded_instance(dims: &[usize], m: usize, seed: u64) -> SeededInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims = dims.to_vec();

    let mut rand_sym = |d: usize| -> DMatrix<f64> {
        let raw = DMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
        (&raw + raw.transpose()).scale(0.5)
    };
    let rand_pd = |rng: &mut ChaCha8Rng, d: usize| -> DMatrix<f64> {
        let r = DMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
        &r * r.transpose() + DMatrix::identity(d, d).scale(0.1)
    };

    let mut constraints_mats: Vec<Vec<(usize, DMatrix<f64>)>> = Vec::with_capacity(m);
    for _ in 0..m {
        let terms: Vec<(usize, DMatrix<f64>)> = dims
            .iter()
            .enumerate()
            .map(|(blk, &d)| (blk, rand_sym(d)))
            .collect();
        constraints_mats.push(terms);
    }

    let x0: Vec<DMatrix<f64>> = dims.iter().map(|&d| rand_pd(&mut rng, d)).collect();
    let s0: Vec<DMatrix<f64>> = dims.iter().map(|&d| rand_pd(&mut rng, d)).collect();
    let y0: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();

    let mut c_blocks = s0.clone();
    for (i, terms) in constraints_mats.iter().enumerate() {
        for (blk, a) in terms {
            c_blocks[*blk] += a.scale(y0[i]);
        }
    }

    let mut constraints = Vec::with_capacity(m);
    for terms in constraints_mats {
        let rhs: f64 = terms.iter().map(|(blk, a)| frob_inner(a, &x0[*blk])).sum();
        constraints.push(Constraint {
            functional: Functional::new(terms).expect("generated terms are valid"),
            rhs,
        });
    }
    let objective = Functional::new(c_blocks.iter().cloned().enumerate().collect::<Vec<_>>())
        .expect("generated objective is valid");
    let problem = SdpProblem::new(dims, objective, constraints).expect("generated problem is valid");

    SeededInstance { problem, x0, s0, y0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let a = seeded_instance(&[3, 2], 4, 7);
        let b = seeded_instance(&[3, 2], 4, 7);
        for (ca, cb) in a.problem.constraints().iter().zip(b.problem.constraints()) {
            assert_eq!(ca.rhs, cb.rhs);
            assert_eq!(ca.functional.terms(), cb.functional.terms());
        }
        assert_eq!(a.problem.objective().terms(), b.problem.objective().terms());
    }

    #[test]
    fn bracketing_holds() {
        // weak duality: b·y0 ≤ optimum ≤ ⟨C,X0⟩
        let inst = seeded_instance(&[4], 3, 42);
        let pobj: f64 = inst
            .problem
            .objective()
            .terms()
            .iter()
            .map(|(blk, c)| frob_inner(c, &inst.x0[*blk]))
            .sum();
        let dobj: f64 = inst
            .problem
            .constraints()
            .iter()
            .zip(&inst.y0)
            .map(|(c, y)| c.rhs * y)
            .sum();
        assert!(dobj <= pobj + 1e-12);
    }
}
