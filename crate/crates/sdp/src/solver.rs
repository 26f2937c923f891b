use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use crate::preprocess::{preprocess, PreprocessOutcome};
use crate::problem::frob_inner;
use crate::SdpProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    /// Feasibility and gap tolerances met.
    Optimal,
    /// Equalities are contradictory, or an improving dual ray was certified
    /// over several consecutive iterations.
    PrimalInfeasible,
    /// An improving primal ray was certified (the objective is unbounded
    /// below over the feasible cone).
    DualInfeasible,
    /// The iteration stalled, hit its limit, or lost positive definiteness
    /// before reaching the tolerances. The returned iterate is the last one
    /// and must not be trusted as an optimum.
    NumericalLimit,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Tolerance on the normalized duality gap |p−d| / (1+|p|+|d|).
    pub gap_tol: f64,
    /// Tolerance on the scaled primal and dual residual norms.
    pub feas_tol: f64,
    pub max_iters: usize,
    /// Fraction-to-boundary factor applied to the final step lengths.
    pub step_fraction: f64,
    /// Keep a per-iteration record in the solution (cheap; on by default).
    pub record_trace: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            gap_tol: 1e-7,
            feas_tol: 1e-7,
            max_iters: 200,
            step_fraction: 0.98,
            record_trace: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterRecord {
    pub mu: f64,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub step_primal: f64,
    pub step_dual: f64,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SdpStatus,
    /// Last primal iterate, one symmetric matrix per block.
    pub primal_blocks: Vec<DMatrix<f64>>,
    /// Equality multipliers indexed like the *original* constraint list;
    /// rows removed by preprocessing carry 0.
    pub dual: Vec<f64>,
    pub objective: f64,
    pub dual_objective: f64,
    /// Normalized duality gap at the final iterate.
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub trace: Vec<IterRecord>,
}

/// Solve a problem in conic standard form.
///
/// Linearly dependent equalities are removed up front; contradictory ones
/// short-circuit to [`SdpStatus::PrimalInfeasible`] without touching the
/// iteration.
pub fn solve(problem: &SdpProblem, opts: &SolveOptions) -> SdpSolution {
    let m_original = problem.constraints().len();
    let (outcome, report) = preprocess(problem);
    let reduced = match outcome {
        PreprocessOutcome::Reduced(r) => r,
        PreprocessOutcome::Inconsistent { .. } => {
            return SdpSolution {
                status: SdpStatus::PrimalInfeasible,
                primal_blocks: problem
                    .block_dims()
                    .iter()
                    .map(|&d| DMatrix::zeros(d, d))
                    .collect(),
                dual: vec![0.0; m_original],
                objective: 0.0,
                dual_objective: 0.0,
                gap: f64::INFINITY,
                primal_residual: f64::INFINITY,
                dual_residual: f64::INFINITY,
                iterations: 0,
                trace: Vec::new(),
            };
        }
    };

    let mut inner = Engine::new(&reduced, opts);
    let (status, iterations, trace) = inner.run();

    // map multipliers back to the original rows, undoing row normalization:
    // internal rows are A_i/‖A_i‖, so original multipliers shrink by ‖A_i‖
    let mut dual = vec![0.0; m_original];
    for (pos, &orig) in report.kept.iter().enumerate() {
        dual[orig] = inner.y[pos] * inner.row_scale[pos];
    }

    let stats = inner.stats();
    SdpSolution {
        status,
        primal_blocks: inner.x,
        dual,
        objective: stats.pobj,
        dual_objective: stats.dobj,
        gap: stats.gap,
        primal_residual: stats.rp_norm,
        dual_residual: stats.rd_norm,
        iterations,
        trace,
    }
}

struct Stats {
    pobj: f64,
    dobj: f64,
    gap: f64,
    rp_norm: f64,
    rd_norm: f64,
    mu: f64,
}

struct Engine<'a> {
    opts: &'a SolveOptions,
    dims: Vec<usize>,
    n_total: usize,
    c: Vec<DMatrix<f64>>,
    /// Per-constraint coefficients, sparse over blocks, rows normalized to
    /// unit Frobenius norm for a better-conditioned Schur complement.
    rows: Vec<Vec<(usize, DMatrix<f64>)>>,
    b: DVector<f64>,
    row_scale: Vec<f64>,
    bnorm: f64,
    cnorm: f64,
    x: Vec<DMatrix<f64>>,
    s: Vec<DMatrix<f64>>,
    y: DVector<f64>,
    pinf_streak: usize,
    dinf_streak: usize,
    stall_streak: usize,
}

impl<'a> Engine<'a> {
    fn new(problem: &SdpProblem, opts: &'a SolveOptions) -> Self {
        let dims = problem.block_dims().to_vec();
        let n_total: usize = dims.iter().sum();
        let mut c: Vec<DMatrix<f64>> = dims.iter().map(|&d| DMatrix::zeros(d, d)).collect();
        for (block, mat) in problem.objective().terms() {
            c[*block] = mat.clone();
        }

        let m = problem.constraints().len();
        let mut rows = Vec::with_capacity(m);
        let mut b = DVector::zeros(m);
        let mut row_scale = Vec::with_capacity(m);
        for (i, cons) in problem.constraints().iter().enumerate() {
            let scale = cons.functional.norm();
            debug_assert!(scale > 0.0, "preprocess keeps no zero rows");
            let inv = 1.0 / scale;
            rows.push(
                cons.functional
                    .terms()
                    .iter()
                    .map(|(blk, mat)| (*blk, mat.scale(inv)))
                    .collect::<Vec<_>>(),
            );
            b[i] = cons.rhs * inv;
            row_scale.push(inv);
        }

        let bmax = if m == 0 { 0.0 } else { b.amax() };
        let cnorm = c.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt();
        let nf = n_total as f64;
        let xi_p = 10.0f64.max(nf.sqrt()).max(nf * bmax);
        let xi_d = 10.0f64.max(nf.sqrt()).max(cnorm);

        let x = dims
            .iter()
            .map(|&d| DMatrix::identity(d, d).scale(xi_p))
            .collect();
        let s = dims
            .iter()
            .map(|&d| DMatrix::identity(d, d).scale(xi_d))
            .collect();
        let bnorm = b.norm();

        Self {
            opts,
            dims,
            n_total,
            c,
            rows,
            b,
            row_scale,
            bnorm,
            cnorm,
            x,
            s,
            y: DVector::zeros(m),
            pinf_streak: 0,
            dinf_streak: 0,
            stall_streak: 0,
        }
    }

    fn m(&self) -> usize {
        self.rows.len()
    }

    fn apply_rows(&self, blocks: &[DMatrix<f64>]) -> DVector<f64> {
        let mut out = DVector::zeros(self.m());
        for (i, row) in self.rows.iter().enumerate() {
            out[i] = row
                .iter()
                .map(|(blk, a)| frob_inner(a, &blocks[*blk]))
                .sum();
        }
        out
    }

    fn adjoint(&self, y: &DVector<f64>) -> Vec<DMatrix<f64>> {
        let mut out: Vec<DMatrix<f64>> =
            self.dims.iter().map(|&d| DMatrix::zeros(d, d)).collect();
        for (i, row) in self.rows.iter().enumerate() {
            let yi = y[i];
            if yi == 0.0 {
                continue;
            }
            for (blk, a) in row {
                out[*blk] += a.scale(yi);
            }
        }
        out
    }

    fn dual_slack_residual(&self) -> Vec<DMatrix<f64>> {
        // Rd = C − S − A*(y), per block
        let mut rd = self.adjoint(&self.y);
        for blk in 0..self.dims.len() {
            rd[blk] = &self.c[blk] - &self.s[blk] - &rd[blk];
        }
        rd
    }

    fn stats(&self) -> Stats {
        let pobj: f64 = self
            .c
            .iter()
            .zip(&self.x)
            .map(|(c, x)| frob_inner(c, x))
            .sum();
        let dobj = self.b.dot(&self.y);
        let rp = &self.b - self.apply_rows(&self.x);
        let rp_norm = rp.norm() / (1.0 + self.bnorm);
        let rd = self.dual_slack_residual();
        let rd_norm =
            rd.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt() / (1.0 + self.cnorm);
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        let mu = self
            .x
            .iter()
            .zip(&self.s)
            .map(|(x, s)| frob_inner(x, s))
            .sum::<f64>()
            / self.n_total as f64;
        Stats {
            pobj,
            dobj,
            gap,
            rp_norm,
            rd_norm,
            mu,
        }
    }

    fn run(&mut self) -> (SdpStatus, usize, Vec<IterRecord>) {
        let mut trace = Vec::new();
        let mut last_steps = (0.0, 0.0);
        for iter in 0..=self.opts.max_iters {
            let stats = self.stats();
            if self.opts.record_trace {
                trace.push(IterRecord {
                    mu: stats.mu,
                    primal_objective: stats.pobj,
                    dual_objective: stats.dobj,
                    primal_residual: stats.rp_norm,
                    dual_residual: stats.rd_norm,
                    step_primal: last_steps.0,
                    step_dual: last_steps.1,
                });
            }
            if stats.rp_norm <= self.opts.feas_tol
                && stats.rd_norm <= self.opts.feas_tol
                && stats.gap <= self.opts.gap_tol
            {
                return (SdpStatus::Optimal, iter, trace);
            }
            if self.certify_primal_infeasible(&stats) {
                return (SdpStatus::PrimalInfeasible, iter, trace);
            }
            if self.certify_dual_infeasible(&stats) {
                return (SdpStatus::DualInfeasible, iter, trace);
            }
            if iter == self.opts.max_iters {
                break;
            }

            match self.step(stats.mu) {
                Some((ap, ad)) => {
                    last_steps = (ap, ad);
                    if ap < 1e-4 && ad < 1e-4 {
                        self.stall_streak += 1;
                        if self.stall_streak >= 3 {
                            return (SdpStatus::NumericalLimit, iter + 1, trace);
                        }
                    } else {
                        self.stall_streak = 0;
                    }
                }
                None => return (SdpStatus::NumericalLimit, iter, trace),
            }
        }
        (SdpStatus::NumericalLimit, self.opts.max_iters, trace)
    }

    /// One predictor-corrector iteration. Returns the step lengths taken,
    /// or None when the linear algebra breaks down.
    fn step(&mut self, mu: f64) -> Option<(f64, f64)> {
        let nblocks = self.dims.len();
        let m = self.m();

        let mut sinv = Vec::with_capacity(nblocks);
        for blk in 0..nblocks {
            let chol = Cholesky::new(self.s[blk].clone())?;
            sinv.push(chol.inverse());
        }

        // W_i = sym(S⁻¹ A_i X), the HKM Schur complement kernels
        let mut w: Vec<Vec<(usize, DMatrix<f64>)>> = Vec::with_capacity(m);
        for row in &self.rows {
            let mut wi = Vec::with_capacity(row.len());
            for (blk, a) in row {
                let raw = &sinv[*blk] * a * &self.x[*blk];
                wi.push((*blk, symmetrize(&raw)));
            }
            w.push(wi);
        }

        let mut mmat = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let mut acc = 0.0;
                let mut it_a = w[i].iter();
                let mut it_b = self.rows[j].iter();
                let (mut na, mut nb) = (it_a.next(), it_b.next());
                while let (Some((ba, wa)), Some((bb, ab))) = (na, nb) {
                    match ba.cmp(bb) {
                        std::cmp::Ordering::Less => na = it_a.next(),
                        std::cmp::Ordering::Greater => nb = it_b.next(),
                        std::cmp::Ordering::Equal => {
                            acc += frob_inner(wa, ab);
                            na = it_a.next();
                            nb = it_b.next();
                        }
                    }
                }
                mmat[(i, j)] = acc;
                mmat[(j, i)] = acc;
            }
        }

        let chol_m = if m > 0 {
            match Cholesky::new(mmat.clone()) {
                Some(c) => Some(c),
                None => {
                    // one deterministic ridge retry before giving up
                    let ridge = 1e-12 * (1.0 + mmat.diagonal().amax());
                    let mut fixed = mmat.clone();
                    for k in 0..m {
                        fixed[(k, k)] += ridge;
                    }
                    Some(Cholesky::new(fixed)?)
                }
            }
        } else {
            None
        };
        let solve_m = |rhs: &DVector<f64>| -> DVector<f64> {
            match &chol_m {
                Some(ch) => {
                    let mut dy = ch.solve(rhs);
                    // one iterative-refinement pass buys a couple of digits
                    let resid = rhs - &mmat * &dy;
                    dy += ch.solve(&resid);
                    dy
                }
                None => DVector::zeros(0),
            }
        };

        let rd = self.dual_slack_residual();
        let qrd: DVector<f64> = DVector::from_iterator(
            m,
            w.iter().map(|wi| {
                wi.iter()
                    .map(|(blk, wm)| frob_inner(wm, &rd[*blk]))
                    .sum::<f64>()
            }),
        );

        // predictor (affine scaling) direction
        let rhs_a = &self.b + &qrd;
        let dy_a = solve_m(&rhs_a);
        let ds_a = self.slack_direction(&rd, &dy_a);
        let dx_a: Vec<DMatrix<f64>> = (0..nblocks)
            .map(|blk| {
                let g = &self.x[blk] * &ds_a[blk] * &sinv[blk];
                -&self.x[blk] - symmetrize(&g)
            })
            .collect();

        let ap_aff = max_step_blocks(&self.x, &dx_a).min(1.0);
        let ad_aff = max_step_blocks(&self.s, &ds_a).min(1.0);
        let mut mu_aff = 0.0;
        for blk in 0..nblocks {
            let xa = &self.x[blk] + dx_a[blk].scale(ap_aff);
            let sa = &self.s[blk] + ds_a[blk].scale(ad_aff);
            mu_aff += frob_inner(&xa, &sa);
        }
        mu_aff /= self.n_total as f64;
        let sigma = (mu_aff / mu).powi(3).clamp(0.0, 1.0);
        let tau = sigma * mu;

        // corrector direction with Mehrotra's second-order term
        let kterm: Vec<DMatrix<f64>> = (0..nblocks)
            .map(|blk| {
                let g = &dx_a[blk] * &ds_a[blk] * &sinv[blk];
                symmetrize(&g)
            })
            .collect();
        // rhs_i = b_i + ⟨W_i,Rd⟩ − τ·Tr(A_i S⁻¹) + ⟨A_i,K⟩
        let mut rhs = &self.b + &qrd;
        for i in 0..m {
            let a3: f64 = self.rows[i]
                .iter()
                .map(|(blk, a)| frob_inner(a, &kterm[*blk]))
                .sum();
            rhs[i] += a3 - tau * self.trace_against_sinv(i, &sinv);
        }
        let dy = solve_m(&rhs);
        let ds = self.slack_direction(&rd, &dy);
        let dx: Vec<DMatrix<f64>> = (0..nblocks)
            .map(|blk| {
                let g = &self.x[blk] * &ds[blk] * &sinv[blk];
                sinv[blk].scale(tau) - &self.x[blk] - &kterm[blk] - symmetrize(&g)
            })
            .collect();

        let ap = (self.opts.step_fraction * max_step_blocks(&self.x, &dx)).min(1.0);
        let ad = (self.opts.step_fraction * max_step_blocks(&self.s, &ds)).min(1.0);
        if !(ap.is_finite() && ad.is_finite()) || ap <= 0.0 || ad <= 0.0 {
            return None;
        }

        for blk in 0..nblocks {
            self.x[blk] += dx[blk].scale(ap);
            self.x[blk] = symmetrize(&self.x[blk].clone());
            self.s[blk] += ds[blk].scale(ad);
            self.s[blk] = symmetrize(&self.s[blk].clone());
        }
        self.y += dy.scale(ad);
        Some((ap, ad))
    }

    fn trace_against_sinv(&self, i: usize, sinv: &[DMatrix<f64>]) -> f64 {
        self.rows[i]
            .iter()
            .map(|(blk, a)| frob_inner(a, &sinv[*blk]))
            .sum()
    }

    fn slack_direction(&self, rd: &[DMatrix<f64>], dy: &DVector<f64>) -> Vec<DMatrix<f64>> {
        let mut ds: Vec<DMatrix<f64>> = rd.to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let yi = dy[i];
            if yi == 0.0 {
                continue;
            }
            for (blk, a) in row {
                ds[*blk] -= a.scale(yi);
            }
        }
        ds
    }

    /// Improving dual ray: y with bᵀy > 0 and −A*(y) ⪰ −ε certifies that no
    /// primal feasible point exists. Demanded for 5 consecutive iterations,
    /// and only while the primal residual is clearly unconverged.
    fn certify_primal_infeasible(&mut self, stats: &Stats) -> bool {
        let tol = self.opts.feas_tol;
        if stats.rp_norm > 10.0 * tol && stats.dobj > 0.0 {
            let aty = self.adjoint(&self.y);
            let mut worst = f64::INFINITY;
            let mut znorm2 = 0.0;
            for blk in 0..self.dims.len() {
                let z = aty[blk].scale(-1.0 / stats.dobj);
                znorm2 += z.norm_squared();
                worst = worst.min(min_eigenvalue(&z));
            }
            if worst >= -tol * znorm2.sqrt().max(1.0) {
                self.pinf_streak += 1;
            } else {
                self.pinf_streak = 0;
            }
        } else {
            self.pinf_streak = 0;
        }
        self.pinf_streak >= 5
    }

    /// Improving primal ray: X ⪰ 0 with A(X) ≈ 0 and ⟨C,X⟩ < 0 certifies an
    /// unbounded objective (dual infeasibility).
    fn certify_dual_infeasible(&mut self, stats: &Stats) -> bool {
        let tol = self.opts.feas_tol;
        if stats.rd_norm > 10.0 * tol && stats.pobj < 0.0 {
            let scale = -stats.pobj;
            let ax = self.apply_rows(&self.x);
            let xnorm = self
                .x
                .iter()
                .map(|m| m.norm_squared())
                .sum::<f64>()
                .sqrt();
            if ax.norm() / scale <= tol * (xnorm / scale).max(1.0) {
                self.dinf_streak += 1;
            } else {
                self.dinf_streak = 0;
            }
        } else {
            self.dinf_streak = 0;
        }
        self.dinf_streak >= 5
    }
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()).scale(0.5)
}

fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Largest t with X + t·D ⪰ 0 over all blocks, assuming X ≻ 0.
fn max_step_blocks(x: &[DMatrix<f64>], d: &[DMatrix<f64>]) -> f64 {
    let mut step = f64::INFINITY;
    for (xb, db) in x.iter().zip(d) {
        step = step.min(max_step(xb, db));
    }
    step
}

fn max_step(x: &DMatrix<f64>, d: &DMatrix<f64>) -> f64 {
    let lmin = match Cholesky::new(x.clone()) {
        Some(chol) => {
            let l = chol.l();
            let t1 = l
                .solve_lower_triangular(d)
                .expect("triangular factor is invertible");
            let t2 = l
                .solve_lower_triangular(&t1.transpose())
                .expect("triangular factor is invertible");
            min_eigenvalue(&symmetrize(&t2))
        }
        None => {
            // X is numerically singular; floor its spectrum and scale there
            let eig = SymmetricEigen::new(x.clone());
            let lmax = eig
                .eigenvalues
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            let floor = (lmax.abs() * 1e-14).max(1e-300);
            let mut p = eig.eigenvectors.clone();
            for (k, mut col) in p.column_iter_mut().enumerate() {
                let lam = eig.eigenvalues[k].max(floor);
                col /= lam.sqrt();
            }
            min_eigenvalue(&symmetrize(&(p.transpose() * d * &p)))
        }
    };
    if lmin >= -1e-13 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}
