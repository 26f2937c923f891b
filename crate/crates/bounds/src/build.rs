use hermitian_core::{HermOp, RealEmbedding, TensorSpace};
use nalgebra::DMatrix;
use num_complex::Complex64;
use sdp_core::{solve, Constraint, Functional, SdpProblem, SdpSolution, SdpStatus, SolveOptions};

use crate::rows::DataRows;
use crate::spaces::{
    antisym_isometry, columns, hermitian_basis, identity_mat, kron_mat, sym_isometry_k,
};
use crate::EngineError;

/// Which party's subsystem is doubled in the extension test. Extending the
/// receiver bounds direct reconciliation; extending the sender bounds
/// reverse reconciliation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionSide {
    Sender,
    Receiver,
}

/// How the permutation-invariant extension is encoded in the SDP.
///
/// `SymmetricOnly` supports the extension on the symmetric subspace of the
/// repeated factor; it is the compact encoding, works for any copy count,
/// and is the default. `TwoSector` decomposes a two-copy extension into its
/// symmetric and antisymmetric blocks, which makes swap invariance
/// structural without restricting to one sector. `Unreduced` carries the
/// full two-copy extension with explicit invariance equalities; it is much
/// larger and exists to validate the reduced encodings against. The last
/// two apply only when `copies == 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExtensionEncoding {
    #[default]
    SymmetricOnly,
    TwoSector,
    Unreduced,
}

/// Result of one weight computation: the largest weight of the benign part
/// (separable or extendible) consistent with the data rows, plus the
/// outcome distribution of what that weight leaves behind.
#[derive(Debug, Clone)]
pub struct BoundOutcome {
    pub lambda: f64,
    /// Joint outcome table of the normalized remainder (the state left
    /// after subtracting the benign part). This is the distribution the
    /// key-rate information factor is computed on. None when the data rows
    /// carry no POVMs or the remainder's weight is below numerical floor.
    pub residual_table: Option<DMatrix<f64>>,
    pub status: SdpStatus,
    pub iterations: usize,
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

/// Remainder weights below this are pure solver noise; no distribution is
/// reported for them (the term they would feed is zero anyway).
const RESIDUAL_TRACE_FLOOR: f64 = 1e-9;

impl BoundOutcome {
    fn from_solution(sol: SdpSolution) -> Self {
        Self {
            lambda: -sol.objective,
            residual_table: None,
            status: sol.status,
            iterations: sol.iterations,
            gap: sol.gap,
            primal_residual: sol.primal_residual,
            dual_residual: sol.dual_residual,
        }
    }

    /// Whether `lambda` can be trusted to within roughly `slack`: either
    /// the solver converged, or it stalled with gap and residuals already
    /// below `slack`. Weight problems whose optimum sits on the boundary
    /// of the cone (λ saturating at 1, or data pinning a block to zero)
    /// have no strictly feasible interior and routinely stop a hair short
    /// of full tolerance.
    pub fn usable(&self, slack: f64) -> bool {
        match self.status {
            SdpStatus::Optimal => true,
            SdpStatus::NumericalLimit => {
                self.gap <= slack
                    && self.primal_residual <= slack
                    && self.dual_residual <= slack
            }
            _ => false,
        }
    }
}

/// 0.5 × real embedding: makes ⟨term, block⟩ equal Tr(op · X) for the
/// complex Hermitian X the block encodes, so right-hand sides stay actual
/// probabilities.
fn term(op: &HermOp) -> DMatrix<f64> {
    op.real_embed().into_matrix().scale(0.5)
}

/// Functional picking out −Tr(X) of a complex block of dimension `d`.
fn neg_trace(block: usize, d: usize) -> (usize, DMatrix<f64>) {
    (block, DMatrix::identity(2 * d, 2 * d).scale(-0.5))
}

/// Measure the (unnormalized) remainder block with the given POVMs and
/// normalize: q_kj = Tr((A_k ⊗ B_j) D) / Tr(D).
fn residual_table(
    block: &DMatrix<f64>,
    space: &TensorSpace,
    alice: &[HermOp],
    bob: &[HermOp],
) -> Result<Option<DMatrix<f64>>, EngineError> {
    if alice.is_empty() || bob.is_empty() {
        return Ok(None);
    }
    let d = RealEmbedding::extract(block, space)?;
    let tr = d.trace();
    if tr <= RESIDUAL_TRACE_FLOOR {
        return Ok(None);
    }
    let mut table = DMatrix::zeros(alice.len(), bob.len());
    for (k, a) in alice.iter().enumerate() {
        for (j, b) in bob.iter().enumerate() {
            table[(k, j)] = a.kron(b).inner(&d) / tr;
        }
    }
    Ok(Some(table))
}

/// Largest weight λ such that σ = λσ_sep + (1−λ)δ with σ consistent with
/// the data rows. Separability is relaxed to a positive partial transpose,
/// which is exact on 2⊗2 and an upper bound everywhere else (fine for an
/// upper bound on the key rate). Blocks: the non-separable remainder D, the
/// separable part P, and its partial transpose Q, linked entrywise.
pub fn separable_weight(data: &DataRows, opts: &SolveOptions) -> Result<BoundOutcome, EngineError> {
    let problem = separable_problem(data)?;
    let sol = solve(&problem, opts);
    let residual = residual_table(
        &sol.primal_blocks[0],
        data.space(),
        data.alice_povm(),
        data.bob_povm(),
    )?;
    let mut outcome = BoundOutcome::from_solution(sol);
    outcome.residual_table = residual;
    Ok(outcome)
}

/// The program behind [`separable_weight`], for dumping or external solving.
pub fn separable_problem(data: &DataRows) -> Result<SdpProblem, EngineError> {
    let d = data.space().total_dim();
    let dr = 2 * d;
    let dims = vec![dr, dr, dr];
    let objective = Functional::new(vec![neg_trace(1, d)])?;

    let mut constraints = Vec::new();
    for (op, val) in data.rows() {
        let t = term(op);
        constraints.push(Constraint {
            functional: Functional::new(vec![(0, t.clone()), (1, t)])?,
            rhs: *val,
        });
    }
    for h in hermitian_basis(data.space()) {
        let on_p = term(&h.partial_transpose(1)?).scale(-1.0);
        let on_q = term(&h);
        constraints.push(Constraint {
            functional: Functional::new(vec![(1, on_p), (2, on_q)])?,
            rhs: 0.0,
        });
    }

    Ok(SdpProblem::new(dims, objective, constraints)?)
}

/// Geometry of repeating one subsystem of a bipartite space so that it
/// appears `copies` times in total.
struct Extender {
    side: ExtensionSide,
    copies: usize,
    ext_space: TensorSpace,
    u_sym: DMatrix<Complex64>,
    sym_space: TensorSpace,
    /// Antisymmetric sector of a two-copy extension; only the encodings
    /// that keep both swap eigenspaces need it.
    pair: Option<PairSector>,
}

struct PairSector {
    u_anti: DMatrix<Complex64>,
    anti_space: TensorSpace,
}

fn binomial(n: usize, k: usize) -> usize {
    let mut num = 1usize;
    let mut den = 1usize;
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

impl Extender {
    fn new(
        space: &TensorSpace,
        side: ExtensionSide,
        copies: usize,
        encoding: ExtensionEncoding,
    ) -> Result<Self, EngineError> {
        if copies < 2 {
            return Err(EngineError::TooFewCopies(copies));
        }
        if copies != 2 && encoding != ExtensionEncoding::SymmetricOnly {
            return Err(EngineError::EncodingNeedsPair(copies));
        }
        let dims = space.dims();
        if dims.len() != 2 {
            return Err(EngineError::NotBipartite(dims.len()));
        }
        let (da, db) = (dims[0], dims[1]);
        let (ext_dims, u_sym, sym_space) = match side {
            ExtensionSide::Receiver => {
                let mut ext = vec![da];
                ext.extend(std::iter::repeat(db).take(copies));
                (
                    ext,
                    kron_mat(&identity_mat(da), &sym_isometry_k(db, copies)),
                    TensorSpace::new(vec![da, binomial(db + copies - 1, copies)])?,
                )
            }
            ExtensionSide::Sender => {
                let mut ext = vec![da; copies];
                ext.push(db);
                (
                    ext,
                    kron_mat(&sym_isometry_k(da, copies), &identity_mat(db)),
                    TensorSpace::new(vec![binomial(da + copies - 1, copies), db])?,
                )
            }
        };
        let pair = if encoding == ExtensionEncoding::SymmetricOnly {
            None
        } else {
            Some(match side {
                ExtensionSide::Receiver => PairSector {
                    u_anti: kron_mat(&identity_mat(da), &antisym_isometry(db)),
                    anti_space: TensorSpace::new(vec![da, db * (db - 1) / 2])?,
                },
                ExtensionSide::Sender => PairSector {
                    u_anti: kron_mat(&antisym_isometry(da), &identity_mat(db)),
                    anti_space: TensorSpace::new(vec![da * (da - 1) / 2, db])?,
                },
            })
        };
        Ok(Self {
            side,
            copies,
            ext_space: TensorSpace::new(ext_dims)?,
            u_sym,
            sym_space,
            pair,
        })
    }

    /// Dimension of the antisymmetric block, zero when absent.
    fn anti_dim(&self) -> usize {
        self.pair
            .as_ref()
            .map_or(0, |p| p.anti_space.total_dim())
    }

    /// Act with `op` on the original pair inside the extended space (the
    /// added copies are untouched).
    fn lift(&self, op: &HermOp) -> Result<HermOp, EngineError> {
        let dims = op.space().dims();
        let extra = self.copies - 1;
        Ok(match self.side {
            ExtensionSide::Receiver => {
                let id = HermOp::identity(TensorSpace::single(dims[1])?);
                let mut out = op.clone();
                for _ in 0..extra {
                    out = out.kron(&id);
                }
                out
            }
            ExtensionSide::Sender => {
                let id = HermOp::identity(TensorSpace::single(dims[0])?);
                let mut out = op.clone();
                for _ in 0..extra {
                    out = out.kron(&id);
                }
                // ordering is now (A, B, A', A''…); walk B to the end
                for site in 1..=extra {
                    out = out.swap_subsystems(site, site + 1)?;
                }
                out
            }
        })
    }

    fn sym_term(&self, op: &HermOp) -> Result<DMatrix<f64>, EngineError> {
        let lifted = self.lift(op)?;
        Ok(term(&lifted.compress(&self.u_sym, self.sym_space.clone())?))
    }

    fn anti_term(&self, op: &HermOp) -> Result<DMatrix<f64>, EngineError> {
        let p = self.pair.as_ref().expect("encoding kept the pair sector");
        let lifted = self.lift(op)?;
        Ok(term(&lifted.compress(&p.u_anti, p.anti_space.clone())?))
    }

    /// Equalities forcing the cross blocks between the symmetric and
    /// antisymmetric sectors to vanish, i.e. swap invariance of the full
    /// extension. Only needed by the unreduced encoding.
    fn invariance_rows(&self) -> Result<Vec<HermOp>, EngineError> {
        let p = self.pair.as_ref().expect("encoding kept the pair sector");
        let us = columns(&self.u_sym);
        let ua = columns(&p.u_anti);
        let mut rows = Vec::with_capacity(2 * us.len() * ua.len());
        for u in &us {
            for v in &ua {
                let uv = u * v.adjoint();
                let re = &uv + uv.adjoint();
                let im = (&uv - uv.adjoint()).map(|z| Complex64::new(0.0, 1.0) * z);
                rows.push(HermOp::new(self.ext_space.clone(), re)?);
                rows.push(HermOp::new(self.ext_space.clone(), im)?);
            }
        }
        Ok(rows)
    }
}

/// Largest weight λ such that σ = λ·E + (1−λ)δ with E admitting a
/// permutation-invariant extension of the chosen side to `copies` total
/// copies, and σ consistent with the data rows. The extension never
/// appears whole (except in the unreduced encoding): every constraint on
/// E = Tr'(ρ) is pushed through the lift.
pub fn extendible_weight(
    data: &DataRows,
    side: ExtensionSide,
    copies: usize,
    encoding: ExtensionEncoding,
    opts: &SolveOptions,
) -> Result<BoundOutcome, EngineError> {
    let problem = extendible_problem(data, side, copies, encoding)?;
    let sol = solve(&problem, opts);
    let residual = residual_table(
        &sol.primal_blocks[0],
        data.space(),
        data.alice_povm(),
        data.bob_povm(),
    )?;
    let mut outcome = BoundOutcome::from_solution(sol);
    outcome.residual_table = residual;
    Ok(outcome)
}

/// The program behind [`extendible_weight`].
pub fn extendible_problem(
    data: &DataRows,
    side: ExtensionSide,
    copies: usize,
    encoding: ExtensionEncoding,
) -> Result<SdpProblem, EngineError> {
    let ext = Extender::new(data.space(), side, copies, encoding)?;
    let d = data.space().total_dim();
    let dr = 2 * d;
    let ds = ext.sym_space.total_dim();
    let da = ext.anti_dim();
    let dext = ext.ext_space.total_dim();

    let (dims, objective): (Vec<usize>, Functional) = match encoding {
        ExtensionEncoding::TwoSector => (
            vec![dr, 2 * ds, 2 * da],
            Functional::new(vec![neg_trace(1, ds), neg_trace(2, da)])?,
        ),
        ExtensionEncoding::SymmetricOnly => (
            vec![dr, 2 * ds],
            Functional::new(vec![neg_trace(1, ds)])?,
        ),
        ExtensionEncoding::Unreduced => (
            vec![dr, 2 * dext],
            Functional::new(vec![neg_trace(1, dext)])?,
        ),
    };

    let mut constraints = Vec::new();
    for (op, val) in data.rows() {
        let t = term(op);
        let functional = match encoding {
            ExtensionEncoding::TwoSector => Functional::new(vec![
                (0, t),
                (1, ext.sym_term(op)?),
                (2, ext.anti_term(op)?),
            ])?,
            ExtensionEncoding::SymmetricOnly => {
                Functional::new(vec![(0, t), (1, ext.sym_term(op)?)])?
            }
            ExtensionEncoding::Unreduced => {
                Functional::new(vec![(0, t), (1, term(&ext.lift(op)?))])?
            }
        };
        constraints.push(Constraint {
            functional,
            rhs: *val,
        });
    }
    if encoding == ExtensionEncoding::Unreduced {
        for h in ext.invariance_rows()? {
            constraints.push(Constraint {
                functional: Functional::new(vec![(1, term(&h))])?,
                rhs: 0.0,
            });
        }
    }

    Ok(SdpProblem::new(dims, objective, constraints)?)
}

/// Geometry shared by the click-sector programs. The receiver's space
/// splits into the click subspace (the range of the click isometry) and
/// its no-click complement; a data row must act block-diagonally on that
/// split, and is carried into the programs as its two sector components.
struct ClickSector {
    reduced_space: TensorSpace,
    vac_space: TensorSpace,
    w_click: DMatrix<Complex64>,
    w_vac: DMatrix<Complex64>,
}

/// One data row split into sectors. `click` acts on Alice ⊗ click-subspace,
/// `vac` on Alice ⊗ no-click-subspace; `vac` is None when the row is
/// supported on the click sector alone.
struct SectorRow {
    click: HermOp,
    vac: Option<HermOp>,
    rhs: f64,
}

impl ClickSector {
    fn new(data: &DataRows, click_isometry: &DMatrix<Complex64>, yield_n: f64) -> Result<Self, EngineError> {
        if !(yield_n > 0.0 && yield_n <= 1.0) {
            return Err(EngineError::BadYield(yield_n));
        }
        let dims_sigma = data.space().dims();
        let (dp, db) = (dims_sigma[0], dims_sigma[1]);
        let q = click_isometry.ncols();
        if click_isometry.nrows() != db || q == 0 || q >= db {
            return Err(EngineError::BadClickIsometry {
                rows: click_isometry.nrows(),
                cols: q,
                bob_dim: db,
            });
        }
        // orthonormal basis of the no-click complement
        let projector = identity_mat(db) - click_isometry * click_isometry.adjoint();
        let eig = projector.symmetric_eigen();
        let mut vac = DMatrix::from_element(db, db - q, Complex64::new(0.0, 0.0));
        let mut c = 0;
        for i in 0..db {
            if eig.eigenvalues[i] > 0.5 {
                vac.set_column(c, &eig.eigenvectors.column(i));
                c += 1;
            }
        }
        if c != db - q {
            return Err(EngineError::BadClickIsometry {
                rows: click_isometry.nrows(),
                cols: q,
                bob_dim: db,
            });
        }
        Ok(Self {
            reduced_space: TensorSpace::new(vec![dp, q])?,
            vac_space: TensorSpace::new(vec![dp, db - q])?,
            w_click: kron_mat(&identity_mat(dp), click_isometry),
            w_vac: kron_mat(&identity_mat(dp), &vac),
        })
    }

    /// Split every data row into its sector components. The no-click
    /// sector of the state is unentangled with the sender (it reports the
    /// same outcome regardless), so a state consistent with block-diagonal
    /// rows exists exactly when its two sector blocks do; rows with
    /// cross-sector support would pin coherences the split cannot carry
    /// and are rejected.
    fn split_rows(&self, data: &DataRows) -> Result<Vec<SectorRow>, EngineError> {
        let mut rows = Vec::with_capacity(data.rows().len());
        for (op, val) in data.rows() {
            let click = op.compress(&self.w_click, self.reduced_space.clone())?;
            let vac = op.compress(&self.w_vac, self.vac_space.clone())?;
            let rebuilt = click
                .expand(&self.w_click, op.space().clone())?
                .add(&vac.expand(&self.w_vac, op.space().clone())?);
            if (op.matrix() - rebuilt.matrix()).norm() > 1e-9 {
                return Err(EngineError::RowCouplesSectors);
            }
            let vac = if vac.matrix().norm() > 1e-12 {
                Some(vac)
            } else {
                None
            };
            rows.push(SectorRow {
                click,
                vac,
                rhs: *val,
            });
        }
        Ok(rows)
    }

    fn remainder(
        &self,
        data: &DataRows,
        click_isometry: &DMatrix<Complex64>,
        block: &DMatrix<f64>,
    ) -> Result<Option<DMatrix<f64>>, EngineError> {
        if data.alice_povm().is_empty() {
            return Ok(None);
        }
        let click_space = TensorSpace::single(click_isometry.ncols())?;
        let bob_clicked = data
            .bob_povm()
            .iter()
            .map(|b| b.compress(click_isometry, click_space.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        residual_table(block, &self.reduced_space, data.alice_povm(), &bob_clicked)
    }
}

/// Extendible weight of the click sector when no-click events are publicly
/// announced: the largest λ such that the state conditioned on a click,
/// which the data rows determine only up to the click probability
/// `yield_n`, decomposes as λ·E + (1−λ)δ with E extendible on the chosen
/// side.
///
/// The program never carries the unconditional state. Its variables are
/// the conditioned remainder D and extension on the click subspace plus a
/// no-click block V; a data row supported on the click sector alone
/// divides through by `yield_n`, so every coefficient and right-hand side
/// stays of order one even when clicks are rare. That scaling is what
/// keeps λ resolvable at deep loss.
pub fn announced_extendible_weight(
    data: &DataRows,
    click_isometry: &DMatrix<Complex64>,
    yield_n: f64,
    side: ExtensionSide,
    copies: usize,
    encoding: ExtensionEncoding,
    opts: &SolveOptions,
) -> Result<BoundOutcome, EngineError> {
    let problem =
        announced_extendible_problem(data, click_isometry, yield_n, side, copies, encoding)?;
    let sol = solve(&problem, opts);
    let sector = ClickSector::new(data, click_isometry, yield_n)?;
    let residual = sector.remainder(data, click_isometry, &sol.primal_blocks[0])?;
    let mut outcome = BoundOutcome::from_solution(sol);
    outcome.residual_table = residual;
    Ok(outcome)
}

/// The program behind [`announced_extendible_weight`].
pub fn announced_extendible_problem(
    data: &DataRows,
    click_isometry: &DMatrix<Complex64>,
    yield_n: f64,
    side: ExtensionSide,
    copies: usize,
    encoding: ExtensionEncoding,
) -> Result<SdpProblem, EngineError> {
    let sector = ClickSector::new(data, click_isometry, yield_n)?;
    let ext = Extender::new(&sector.reduced_space, side, copies, encoding)?;

    let dq = sector.reduced_space.total_dim();
    let dv = sector.vac_space.total_dim();
    let ds = ext.sym_space.total_dim();
    let da = ext.anti_dim();
    let dext = ext.ext_space.total_dim();

    // blocks: D, the extension sector(s), V
    let (dims, objective, vac_block): (Vec<usize>, Functional, usize) = match encoding {
        ExtensionEncoding::TwoSector => (
            vec![2 * dq, 2 * ds, 2 * da, 2 * dv],
            Functional::new(vec![neg_trace(1, ds), neg_trace(2, da)])?,
            3,
        ),
        ExtensionEncoding::SymmetricOnly => (
            vec![2 * dq, 2 * ds, 2 * dv],
            Functional::new(vec![neg_trace(1, ds)])?,
            2,
        ),
        ExtensionEncoding::Unreduced => (
            vec![2 * dq, 2 * dext, 2 * dv],
            Functional::new(vec![neg_trace(1, dext)])?,
            2,
        ),
    };

    let mut constraints = Vec::new();
    for row in sector.split_rows(data)? {
        let scale = if row.vac.is_none() { 1.0 / yield_n } else { 1.0 };
        let on_click = term(&row.click).scale(scale * yield_n);
        let mut terms = match encoding {
            ExtensionEncoding::TwoSector => vec![
                (0, on_click),
                (1, ext.sym_term(&row.click)?.scale(scale * yield_n)),
                (2, ext.anti_term(&row.click)?.scale(scale * yield_n)),
            ],
            ExtensionEncoding::SymmetricOnly => vec![
                (0, on_click),
                (1, ext.sym_term(&row.click)?.scale(scale * yield_n)),
            ],
            ExtensionEncoding::Unreduced => vec![
                (0, on_click),
                (1, term(&ext.lift(&row.click)?).scale(scale * yield_n)),
            ],
        };
        if let Some(vac) = &row.vac {
            terms.push((vac_block, term(vac)));
        }
        constraints.push(Constraint {
            functional: Functional::new(terms)?,
            rhs: row.rhs * scale,
        });
    }
    if encoding == ExtensionEncoding::Unreduced {
        for h in ext.invariance_rows()? {
            constraints.push(Constraint {
                functional: Functional::new(vec![(1, term(&h))])?,
                rhs: 0.0,
            });
        }
    }

    Ok(SdpProblem::new(dims, objective, constraints)?)
}

/// Separable weight of the click sector, the two-way analogue of
/// [`announced_extendible_weight`]: the conditioned state is decomposed
/// as λ·σ_sep + (1−λ)δ with σ_sep relaxed to a positive partial
/// transpose. Blocks: the remainder D, the separable part P, its partial
/// transpose Q, and the no-click block V.
pub fn announced_separable_weight(
    data: &DataRows,
    click_isometry: &DMatrix<Complex64>,
    yield_n: f64,
    opts: &SolveOptions,
) -> Result<BoundOutcome, EngineError> {
    let problem = announced_separable_problem(data, click_isometry, yield_n)?;
    let sol = solve(&problem, opts);
    let sector = ClickSector::new(data, click_isometry, yield_n)?;
    let residual = sector.remainder(data, click_isometry, &sol.primal_blocks[0])?;
    let mut outcome = BoundOutcome::from_solution(sol);
    outcome.residual_table = residual;
    Ok(outcome)
}

/// The program behind [`announced_separable_weight`].
pub fn announced_separable_problem(
    data: &DataRows,
    click_isometry: &DMatrix<Complex64>,
    yield_n: f64,
) -> Result<SdpProblem, EngineError> {
    let sector = ClickSector::new(data, click_isometry, yield_n)?;
    let reduced_space = &sector.reduced_space;

    let dq = reduced_space.total_dim();
    let dv = sector.vac_space.total_dim();

    // blocks: D, P, Q = P^Γ, V
    let dims = vec![2 * dq, 2 * dq, 2 * dq, 2 * dv];
    let objective = Functional::new(vec![neg_trace(1, dq)])?;

    let mut constraints = Vec::new();
    for row in sector.split_rows(data)? {
        let scale = if row.vac.is_none() { 1.0 / yield_n } else { 1.0 };
        let on_click = term(&row.click).scale(scale * yield_n);
        let mut terms = vec![(0, on_click.clone()), (1, on_click)];
        if let Some(vac) = &row.vac {
            terms.push((3, term(vac)));
        }
        constraints.push(Constraint {
            functional: Functional::new(terms)?,
            rhs: row.rhs * scale,
        });
    }
    for h in hermitian_basis(reduced_space) {
        let on_p = term(&h.partial_transpose(1)?).scale(-1.0);
        let on_q = term(&h);
        constraints.push(Constraint {
            functional: Functional::new(vec![(1, on_p), (2, on_q)])?,
            rhs: 0.0,
        });
    }

    Ok(SdpProblem::new(dims, objective, constraints)?)
}
