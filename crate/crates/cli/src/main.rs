use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::Parser;

use decoy_scan::config::{LossGrid, OutputFormat, Overrides};
use decoy_scan::{exit_status, render_csv, render_json, resolve, run_scan, OutputFormat as Fmt};

/// Upper bounds on the secret key rate of a decoy-state BB84 link, swept
/// over channel loss.
#[derive(Debug, Parser)]
#[command(
    name = "decoy-scan",
    version,
    after_help = "Solves run in parallel; set RAYON_NUM_THREADS to limit the worker pool.\n\
                  Exit status: 0 ok, 1 error, 2 when --strict and a solve degraded."
)]
struct Cli {
    /// Flat key=value config file (same keys as the long flags); flags win.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Bound variant: two-way, one-way-dr, one-way-rr, one-way-dr-announced.
    /// Repeatable; default is all four.
    #[arg(long = "mode", value_name = "MODE")]
    modes: Vec<String>,
    /// Total loss grid in dB: START:STOP:STEP, or a single value.
    #[arg(long, value_name = "SPEC")]
    loss: Option<String>,
    /// Background click probability per pulse.
    #[arg(long, value_name = "PROB")]
    y0: Option<f64>,
    /// Misalignment error probability of a detected photon.
    #[arg(long, value_name = "PROB")]
    edet: Option<f64>,
    /// Fiber attenuation in dB/km (used for the distance column).
    #[arg(long, value_name = "DB_PER_KM")]
    alpha: Option<f64>,
    /// Detector efficiency, folded into the loss budget for the distance
    /// column.
    #[arg(long = "det-eff", value_name = "EFF")]
    det_eff: Option<f64>,
    /// Mean photon number of the source.
    #[arg(long, value_name = "MU", conflicts_with = "optimize_mu0")]
    mu0: Option<f64>,
    /// Pick the best mean photon number per point from a 0.05..1.00 grid.
    #[arg(long = "optimize-mu0")]
    optimize_mu0: bool,
    /// Solver duality-gap tolerance.
    #[arg(long = "gap-tol", value_name = "TOL")]
    gap_tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long, value_name = "FMT")]
    format: Option<String>,
    /// Bisect each mode's zero-rate loss to 0.05 dB (reported in JSON
    /// output and on stderr).
    #[arg(long = "find-cutoff")]
    find_cutoff: bool,
    /// Exit with status 2 if any solve degraded to its numerical limit.
    #[arg(long)]
    strict: bool,
}

impl Cli {
    fn into_overrides(self) -> Result<(Option<PathBuf>, Overrides)> {
        let loss = self.loss.as_deref().map(LossGrid::parse).transpose()?;
        let format = self.format.as_deref().map(OutputFormat::parse).transpose()?;
        Ok((
            self.config,
            Overrides {
                modes: (!self.modes.is_empty()).then_some(self.modes),
                loss,
                y0: self.y0,
                edet: self.edet,
                alpha: self.alpha,
                det_eff: self.det_eff,
                mu0: self.mu0,
                optimize_mu0: self.optimize_mu0.then_some(true),
                gap_tol: self.gap_tol,
                format,
                find_cutoff: self.find_cutoff.then_some(true),
                strict: self.strict.then_some(true),
                out: self.out,
            },
        ))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let (config_path, flags) = cli.into_overrides()?;
    let file_layer = config_path.as_deref().map(Overrides::from_file).transpose()?;
    let (cfg, out_path) = resolve(file_layer, flags)?;

    let report = run_scan(&cfg)?;

    if let Some(cutoffs) = &report.cutoffs {
        for (mode, db) in cutoffs {
            eprintln!("cutoff {mode}: {db:.2} dB");
        }
    }

    let text = match cfg.format {
        Fmt::Csv => render_csv(&report),
        Fmt::Json => render_json(&report)?,
    };
    match &out_path {
        Some(path) => fs::write(path, &text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }

    Ok(exit_status(cfg.strict, report.numerical_limit))
}
