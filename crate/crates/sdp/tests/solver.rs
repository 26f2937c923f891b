use approx::assert_abs_diff_eq;
use nalgebra::{DMatrix, SymmetricEigen};
use sdp_core::testing::seeded_instance;
use sdp_core::{solve, Constraint, Functional, SdpProblem, SdpStatus, SolveOptions};

fn one_block(dim: usize, c: DMatrix<f64>, rows: Vec<(DMatrix<f64>, f64)>) -> SdpProblem {
    let objective = Functional::new(vec![(0, c)]).unwrap();
    let constraints = rows
        .into_iter()
        .map(|(a, rhs)| Constraint {
            functional: Functional::new(vec![(0, a)]).unwrap(),
            rhs,
        })
        .collect();
    SdpProblem::new(vec![dim], objective, constraints).unwrap()
}

#[test]
fn pinned_corner_entry() {
    // min Tr X  s.t.  X_00 = 1, X ⪰ 0  →  1
    let mut e00 = DMatrix::zeros(2, 2);
    e00[(0, 0)] = 1.0;
    let problem = one_block(2, DMatrix::identity(2, 2), vec![(e00, 1.0)]);
    let sol = solve(&problem, &SolveOptions::default());
    assert_eq!(sol.status, SdpStatus::Optimal);
    assert_abs_diff_eq!(sol.objective, 1.0, epsilon = 1e-6);
    assert_abs_diff_eq!(sol.primal_blocks[0][(0, 0)], 1.0, epsilon = 1e-6);
    assert!(sol.primal_blocks[0][(1, 1)].abs() < 1e-5);
}

#[test]
fn linear_program_as_diagonal_blocks() {
    // min x + 2y  s.t.  x + y = 1, x,y ≥ 0  →  1 at (1, 0)
    let objective = Functional::new(vec![
        (0, DMatrix::from_element(1, 1, 1.0)),
        (1, DMatrix::from_element(1, 1, 2.0)),
    ])
    .unwrap();
    let row = Functional::new(vec![
        (0, DMatrix::from_element(1, 1, 1.0)),
        (1, DMatrix::from_element(1, 1, 1.0)),
    ])
    .unwrap();
    let problem = SdpProblem::new(
        vec![1, 1],
        objective,
        vec![Constraint { functional: row, rhs: 1.0 }],
    )
    .unwrap();
    let sol = solve(&problem, &SolveOptions::default());
    assert_eq!(sol.status, SdpStatus::Optimal);
    assert_abs_diff_eq!(sol.objective, 1.0, epsilon = 1e-6);
    assert_abs_diff_eq!(sol.primal_blocks[0][(0, 0)], 1.0, epsilon = 1e-5);
    assert_abs_diff_eq!(sol.primal_blocks[1][(0, 0)], 0.0, epsilon = 1e-5);
}

#[test]
fn unit_trace_minimum_is_smallest_eigenvalue() {
    let c = {
        let raw = DMatrix::from_fn(5, 5, |i, j| ((i * 7 + j * 3) % 11) as f64 / 11.0 - 0.4);
        (&raw + raw.transpose()).scale(0.5)
    };
    let lambda_min = SymmetricEigen::new(c.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let problem = one_block(5, c, vec![(DMatrix::identity(5, 5), 1.0)]);
    let sol = solve(&problem, &SolveOptions::default());
    assert_eq!(sol.status, SdpStatus::Optimal);
    assert_abs_diff_eq!(sol.objective, lambda_min, epsilon = 1e-6);
    // the multiplier of Tr X = 1 is the optimal value itself
    assert_abs_diff_eq!(sol.dual[0], lambda_min, epsilon = 1e-5);
}

#[test]
fn negative_trace_is_primal_infeasible() {
    let problem = one_block(3, DMatrix::identity(3, 3), vec![(DMatrix::identity(3, 3), -1.0)]);
    let sol = solve(&problem, &SolveOptions::default());
    assert_eq!(sol.status, SdpStatus::PrimalInfeasible);
}

#[test]
fn contradictory_rows_short_circuit() {
    let problem = one_block(
        3,
        DMatrix::identity(3, 3),
        vec![
            (DMatrix::identity(3, 3), 1.0),
            (DMatrix::identity(3, 3), 2.0),
        ],
    );
    let sol = solve(&problem, &SolveOptions::default());
    assert_eq!(sol.status, SdpStatus::PrimalInfeasible);
    assert_eq!(sol.iterations, 0);
}

#[test]
fn unbounded_objective_is_dual_infeasible() {
    let c = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let problem = one_block(2, c, vec![]);
    let sol = solve(&problem, &SolveOptions::default());
    assert_eq!(sol.status, SdpStatus::DualInfeasible);
}

#[test]
fn unconstrained_psd_objective_reaches_zero() {
    let problem = one_block(3, DMatrix::identity(3, 3), vec![]);
    let sol = solve(&problem, &SolveOptions::default());
    assert_eq!(sol.status, SdpStatus::Optimal);
    assert_abs_diff_eq!(sol.objective, 0.0, epsilon = 1e-5);
}

#[test]
fn seeded_instances_solve_to_tolerance() {
    for seed in [1u64, 2, 3] {
        let inst = seeded_instance(&[4, 3], 6, seed);
        let opts = SolveOptions::default();
        let sol = solve(&inst.problem, &opts);
        assert_eq!(sol.status, SdpStatus::Optimal, "seed {seed}");
        assert!(sol.gap <= opts.gap_tol * 1.01, "seed {seed}: gap {}", sol.gap);
        assert!(sol.primal_residual <= opts.feas_tol * 1.01);
        assert!(sol.dual_residual <= opts.feas_tol * 1.01);

        // the optimum is bracketed by the planted feasible pair
        let pobj_at_x0: f64 = inst
            .problem
            .objective()
            .terms()
            .iter()
            .map(|(blk, c)| (c.transpose() * &inst.x0[*blk]).trace())
            .sum();
        let dobj_at_y0: f64 = inst
            .problem
            .constraints()
            .iter()
            .zip(&inst.y0)
            .map(|(c, y)| c.rhs * y)
            .sum();
        assert!(sol.objective <= pobj_at_x0 + 1e-6, "seed {seed}");
        assert!(sol.objective >= dobj_at_y0 - 1e-6, "seed {seed}");
    }
}

#[test]
fn duplicate_row_multiplier_lands_on_kept_index() {
    let problem = one_block(
        2,
        DMatrix::identity(2, 2),
        vec![
            (DMatrix::identity(2, 2), 1.0),
            (DMatrix::identity(2, 2).scale(2.0), 2.0),
        ],
    );
    let sol = solve(&problem, &SolveOptions::default());
    assert_eq!(sol.status, SdpStatus::Optimal);
    assert_abs_diff_eq!(sol.objective, 1.0, epsilon = 1e-6);
    // second row was removed as dependent: its multiplier is reported as 0
    assert_eq!(sol.dual[1], 0.0);
    assert_abs_diff_eq!(sol.dual[0], 1.0, epsilon = 1e-5);
}

#[test]
fn runs_are_bitwise_deterministic() {
    let inst = seeded_instance(&[5, 2], 8, 99);
    let a = solve(&inst.problem, &SolveOptions::default());
    let b = solve(&inst.problem, &SolveOptions::default());
    assert_eq!(a.objective.to_bits(), b.objective.to_bits());
    assert_eq!(a.iterations, b.iterations);
    assert_eq!(a.trace.len(), b.trace.len());
    for (ra, rb) in a.trace.iter().zip(&b.trace) {
        assert_eq!(ra.mu.to_bits(), rb.mu.to_bits());
        assert_eq!(ra.primal_residual.to_bits(), rb.primal_residual.to_bits());
    }
}

#[test]
fn objective_scaling_scales_the_optimum() {
    let inst = seeded_instance(&[4], 4, 5);
    let base = solve(&inst.problem, &SolveOptions::default());
    assert_eq!(base.status, SdpStatus::Optimal);

    let scaled_obj = Functional::new(
        inst.problem
            .objective()
            .terms()
            .iter()
            .map(|(blk, m)| (*blk, m.scale(10.0)))
            .collect(),
    )
    .unwrap();
    let scaled = SdpProblem::new(
        inst.problem.block_dims().to_vec(),
        scaled_obj,
        inst.problem.constraints().to_vec(),
    )
    .unwrap();
    let sol = solve(&scaled, &SolveOptions::default());
    assert_eq!(sol.status, SdpStatus::Optimal);
    let rel = (sol.objective - 10.0 * base.objective).abs() / (1.0 + sol.objective.abs());
    assert!(rel < 1e-5, "scaled {} vs base {}", sol.objective, base.objective);
}

#[test]
fn trace_mu_decreases() {
    let inst = seeded_instance(&[4, 3], 5, 11);
    let sol = solve(&inst.problem, &SolveOptions::default());
    assert_eq!(sol.status, SdpStatus::Optimal);
    assert!(sol.trace.len() >= 2);
    let first = sol.trace.first().unwrap().mu;
    let last = sol.trace.last().unwrap().mu;
    assert!(last < first * 1e-4, "mu went {first} → {last}");
}
