//! Running the scan: one rate bound per (mode, loss, μ) task, in parallel,
//! plus the optional cutoff bisection.

use std::collections::BTreeMap;

use anyhow::{Context, Result};
use bounds_engine::{rate_upper_bound, Mode, RateBound, RateOptions};
use protocol_model::{distance_for_total_db, transmittance_from_db, ChannelModel};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ScanConfig;

/// Loss interval (in dB) to which the cutoff bisection narrows the zero
/// crossing.
pub const CUTOFF_RESOLUTION_DB: f64 = 0.05;

/// How far past the end of the grid the cutoff search is willing to walk.
const CUTOFF_SEARCH_EXTENSION_DB: f64 = 40.0;

/// A bound below one bit per 10^9 pulses counts as dead for cutoff
/// purposes: the reported cutoff is where the curve sinks under this floor
/// rather than the exact zero of the last surviving term.
pub const CUTOFF_RATE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct TermCells {
    pub n: usize,
    pub weight: f64,
    pub lambda: f64,
    pub mutual_info: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub total_db: f64,
    pub distance_km: f64,
    pub mode: String,
    pub mu0: f64,
    pub k_upper_bits_per_pulse: f64,
    pub n_max_used: usize,
    pub terms: Vec<TermCells>,
    pub numerical_limit: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub rows: Vec<SweepRow>,
    /// Mode label → loss in dB where the bound reaches zero, when
    /// requested and found inside the search range.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoffs: Option<BTreeMap<String, f64>>,
    /// Some solve anywhere (grid rows or cutoff bisection) degraded to the
    /// solver's numerical limit.
    pub numerical_limit: bool,
}

fn rate_options(cfg: &ScanConfig, mu: f64) -> RateOptions {
    let mut opts = RateOptions {
        mu,
        ..RateOptions::default()
    };
    opts.solve.gap_tol = cfg.gap_tol;
    opts
}

/// Best bound over the μ candidates at one (mode, loss) point.
fn evaluate_point(
    cfg: &ScanConfig,
    channel: &ChannelModel,
    mode: Mode,
    total_db: f64,
) -> Result<SweepRow> {
    let eta = transmittance_from_db(total_db);
    let mut best: Option<(f64, RateBound)> = None;
    for mu in cfg.mu.candidates() {
        let bound = rate_upper_bound(mode, channel, eta, &rate_options(cfg, mu))
            .with_context(|| format!("{} at {total_db} dB, mu0={mu}", mode.label()))?;
        let better = match &best {
            None => true,
            Some((_, b)) => bound.total_bits_per_pulse > b.total_bits_per_pulse,
        };
        if better {
            best = Some((mu, bound));
        }
    }
    let (mu0, bound) = best.expect("at least one mu candidate");
    Ok(SweepRow {
        total_db,
        distance_km: distance_for_total_db(total_db, cfg.alpha_db_per_km, cfg.detector_efficiency),
        mode: mode.label().to_string(),
        mu0,
        k_upper_bits_per_pulse: bound.total_bits_per_pulse,
        n_max_used: bound.terms.last().map_or(0, |t| t.n),
        terms: bound
            .terms
            .iter()
            .map(|t| TermCells {
                n: t.n,
                weight: t.weight,
                lambda: t.lambda,
                mutual_info: t.mutual_info,
            })
            .collect(),
        numerical_limit: bound.hit_numerical_limit,
        warnings: bound.warnings,
    })
}

/// Run the whole scan described by `cfg`. Rows come out ordered by mode,
/// then loss, regardless of scheduling.
pub fn run_scan(cfg: &ScanConfig) -> Result<ScanReport> {
    let channel = ChannelModel::new(cfg.y0, cfg.edet).map_err(anyhow::Error::from)?;
    let modes: Vec<Mode> = cfg
        .modes
        .iter()
        .map(|l| Mode::from_label(l).map_err(anyhow::Error::from))
        .collect::<Result<_>>()?;

    let tasks: Vec<(Mode, f64)> = modes
        .iter()
        .flat_map(|&m| cfg.loss.points().into_iter().map(move |db| (m, db)))
        .collect();
    let rows: Vec<SweepRow> = tasks
        .par_iter()
        .map(|&(mode, db)| evaluate_point(cfg, &channel, mode, db))
        .collect::<Result<_>>()?;

    let mut numerical_limit = rows.iter().any(|r| r.numerical_limit);
    let cutoffs = if cfg.find_cutoff {
        let found: Vec<(String, Option<f64>, bool)> = modes
            .par_iter()
            .map(|&mode| {
                let mode_rows: Vec<&SweepRow> =
                    rows.iter().filter(|r| r.mode == mode.label()).collect();
                find_cutoff(cfg, &channel, mode, &mode_rows)
                    .map(|(c, limited)| (mode.label().to_string(), c, limited))
            })
            .collect::<Result<_>>()?;
        let mut map = BTreeMap::new();
        for (label, cutoff, limited) in found {
            numerical_limit |= limited;
            if let Some(db) = cutoff {
                map.insert(label, db);
            }
        }
        Some(map)
    } else {
        None
    };

    Ok(ScanReport {
        config: cfg.clone(),
        rows,
        cutoffs,
        numerical_limit,
    })
}

/// Locate the loss where the bound for `mode` first drops below
/// [`CUTOFF_RATE_FLOOR`], to [`CUTOFF_RESOLUTION_DB`]. Uses the
/// already-computed grid rows for the initial bracket, walking past the
/// end of the grid if the bound is still alive there. Returns the cutoff
/// (midpoint of the final bracket) and whether any bisection solve was
/// numerically limited.
fn find_cutoff(
    cfg: &ScanConfig,
    channel: &ChannelModel,
    mode: Mode,
    grid_rows: &[&SweepRow],
) -> Result<(Option<f64>, bool)> {
    let mut limited = false;
    let mut rate_at = |db: f64| -> Result<f64> {
        let row = evaluate_point(cfg, channel, mode, db)?;
        limited |= row.numerical_limit;
        Ok(row.k_upper_bits_per_pulse)
    };

    // bracket from the grid: last positive point, first zero after it
    let mut lo = None;
    let mut hi = None;
    for row in grid_rows {
        if row.k_upper_bits_per_pulse > CUTOFF_RATE_FLOOR {
            lo = Some(row.total_db);
            hi = None;
        } else if lo.is_some() && hi.is_none() {
            hi = Some(row.total_db);
        }
    }
    let Some(mut lo) = lo else {
        // never positive on the grid: no cutoff to report
        return Ok((None, limited));
    };
    let mut hi = match hi {
        Some(h) => h,
        None => {
            // still positive at the end of the grid: walk outward
            let step = 5.0;
            let mut probe = lo + step;
            let limit = lo + CUTOFF_SEARCH_EXTENSION_DB;
            loop {
                if probe > limit {
                    return Ok((None, limited));
                }
                if rate_at(probe)? > CUTOFF_RATE_FLOOR {
                    lo = probe;
                    probe += step;
                } else {
                    break probe;
                }
            }
        }
    };

    while hi - lo > CUTOFF_RESOLUTION_DB {
        let mid = 0.5 * (lo + hi);
        if rate_at(mid)? > CUTOFF_RATE_FLOOR {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((Some(0.5 * (lo + hi)), limited))
}
