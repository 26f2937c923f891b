//! Scan configuration: defaults, a flat key=value config file, and
//! command-line overrides, merged in that order.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use bounds_engine::Mode;
use serde::Serialize;

/// Loss grid in total dB, inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossGrid {
    pub start_db: f64,
    pub stop_db: f64,
    pub step_db: f64,
}

impl LossGrid {
    /// Parse "START:STOP:STEP" or a single value.
    pub fn parse(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let grid = match parts.as_slice() {
            [single] => {
                let v: f64 = single
                    .trim()
                    .parse()
                    .with_context(|| format!("bad loss value {single:?}"))?;
                Self {
                    start_db: v,
                    stop_db: v,
                    step_db: 1.0,
                }
            }
            [start, stop, step] => Self {
                start_db: start
                    .trim()
                    .parse()
                    .with_context(|| format!("bad loss start {start:?}"))?,
                stop_db: stop
                    .trim()
                    .parse()
                    .with_context(|| format!("bad loss stop {stop:?}"))?,
                step_db: step
                    .trim()
                    .parse()
                    .with_context(|| format!("bad loss step {step:?}"))?,
            },
            _ => bail!("loss grid must be START:STOP:STEP or a single value, got {spec:?}"),
        };
        grid.validate()?;
        Ok(grid)
    }

    fn validate(&self) -> Result<()> {
        if !(self.start_db.is_finite() && self.stop_db.is_finite() && self.step_db.is_finite()) {
            bail!("loss grid values must be finite");
        }
        if self.start_db < 0.0 {
            bail!("loss cannot be negative, got start {}", self.start_db);
        }
        if self.stop_db < self.start_db {
            bail!(
                "loss stop {} is below start {}",
                self.stop_db,
                self.start_db
            );
        }
        if self.step_db <= 0.0 {
            bail!("loss step must be positive, got {}", self.step_db);
        }
        Ok(())
    }

    /// The grid points, start + k·step while they fit (small fuzz keeps the
    /// endpoint when the step does not divide the range exactly).
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop_db - self.start_db) / self.step_db + 1e-9).floor() as usize;
        (0..=count)
            .map(|k| self.start_db + k as f64 * self.step_db)
            .collect()
    }
}

/// Source mean photon number: fixed, or picked per point by a grid search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum MuChoice {
    Fixed(f64),
    Optimize,
}

impl MuChoice {
    /// Candidate values to try at one sweep point.
    pub fn candidates(&self) -> Vec<f64> {
        match *self {
            MuChoice::Fixed(mu) => vec![mu],
            MuChoice::Optimize => (1..=20).map(|i| i as f64 * 0.05).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => bail!("format must be csv or json, got {other:?}"),
        }
    }
}

/// Fully resolved scan parameters; echoed verbatim into JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct ScanConfig {
    pub modes: Vec<String>,
    pub loss: LossGrid,
    pub y0: f64,
    pub edet: f64,
    pub alpha_db_per_km: f64,
    pub detector_efficiency: f64,
    pub mu: MuChoice,
    pub gap_tol: f64,
    pub find_cutoff: bool,
    pub strict: bool,
    pub format: OutputFormat,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            modes: Mode::ALL.iter().map(|m| m.label().to_string()).collect(),
            loss: LossGrid {
                start_db: 0.0,
                stop_db: 60.0,
                step_db: 10.0,
            },
            y0: 1.7e-6,
            edet: 0.033,
            alpha_db_per_km: 0.21,
            detector_efficiency: 0.045,
            mu: MuChoice::Fixed(0.5),
            gap_tol: 1e-7,
            find_cutoff: false,
            strict: false,
            format: OutputFormat::Csv,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.modes.is_empty() {
            bail!("at least one mode is required");
        }
        for label in &self.modes {
            Mode::from_label(label).map_err(|e| anyhow!("{e}"))?;
        }
        if !(self.detector_efficiency > 0.0 && self.detector_efficiency <= 1.0) {
            bail!(
                "det-eff must lie in (0,1], got {}",
                self.detector_efficiency
            );
        }
        if !(self.alpha_db_per_km > 0.0) {
            bail!("alpha must be positive, got {}", self.alpha_db_per_km);
        }
        if !(self.gap_tol > 0.0 && self.gap_tol < 1.0) {
            bail!("gap-tol must lie in (0,1), got {}", self.gap_tol);
        }
        if let MuChoice::Fixed(mu) = self.mu {
            if !(mu > 0.0 && mu.is_finite()) {
                bail!("mu0 must be positive, got {mu}");
            }
        }
        // y0/edet ranges are enforced by the channel model at run time
        Ok(())
    }
}

/// One layer of settings (config file or command line); `None` means "keep
/// the value from the layer below".
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub modes: Option<Vec<String>>,
    pub loss: Option<LossGrid>,
    pub y0: Option<f64>,
    pub edet: Option<f64>,
    pub alpha: Option<f64>,
    pub det_eff: Option<f64>,
    pub mu0: Option<f64>,
    pub optimize_mu0: Option<bool>,
    pub gap_tol: Option<f64>,
    pub format: Option<OutputFormat>,
    pub find_cutoff: Option<bool>,
    pub strict: Option<bool>,
    pub out: Option<PathBuf>,
}

impl Overrides {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    /// Flat key=value lines; `#` starts a comment, blank lines are ignored.
    /// Keys match the long command-line flags.
    pub fn parse(text: &str) -> Result<Self> {
        let mut o = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key=value, got {raw:?}", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let parse_f64 = || -> Result<f64> {
                value
                    .parse()
                    .with_context(|| format!("line {}: bad number {value:?}", lineno + 1))
            };
            let parse_bool = || -> Result<bool> {
                value
                    .parse()
                    .with_context(|| format!("line {}: bad boolean {value:?}", lineno + 1))
            };
            match key {
                "mode" => {
                    o.modes = Some(value.split(',').map(|m| m.trim().to_string()).collect())
                }
                "loss" => o.loss = Some(LossGrid::parse(value)?),
                "y0" => o.y0 = Some(parse_f64()?),
                "edet" => o.edet = Some(parse_f64()?),
                "alpha" => o.alpha = Some(parse_f64()?),
                "det-eff" => o.det_eff = Some(parse_f64()?),
                "mu0" => o.mu0 = Some(parse_f64()?),
                "optimize-mu0" => o.optimize_mu0 = Some(parse_bool()?),
                "gap-tol" => o.gap_tol = Some(parse_f64()?),
                "format" => o.format = Some(OutputFormat::parse(value)?),
                "find-cutoff" => o.find_cutoff = Some(parse_bool()?),
                "strict" => o.strict = Some(parse_bool()?),
                "out" => o.out = Some(PathBuf::from(value)),
                other => bail!("line {}: unknown key {other:?}", lineno + 1),
            }
        }
        Ok(o)
    }

    /// Apply this layer on top of `cfg`. Returns the output path if this
    /// layer sets one.
    pub fn apply(self, cfg: &mut ScanConfig) -> Result<Option<PathBuf>> {
        if let Some(modes) = self.modes {
            cfg.modes = modes;
        }
        if let Some(loss) = self.loss {
            cfg.loss = loss;
        }
        if let Some(v) = self.y0 {
            cfg.y0 = v;
        }
        if let Some(v) = self.edet {
            cfg.edet = v;
        }
        if let Some(v) = self.alpha {
            cfg.alpha_db_per_km = v;
        }
        if let Some(v) = self.det_eff {
            cfg.detector_efficiency = v;
        }
        match (self.mu0, self.optimize_mu0) {
            (Some(_), Some(true)) => bail!("mu0 and optimize-mu0 are mutually exclusive"),
            (Some(mu), _) => cfg.mu = MuChoice::Fixed(mu),
            (None, Some(true)) => cfg.mu = MuChoice::Optimize,
            (None, Some(false)) | (None, None) => {}
        }
        if let Some(v) = self.gap_tol {
            cfg.gap_tol = v;
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
        if let Some(v) = self.find_cutoff {
            cfg.find_cutoff = v;
        }
        if let Some(v) = self.strict {
            cfg.strict = v;
        }
        Ok(self.out)
    }
}

/// Defaults, then the config file, then command-line flags.
pub fn resolve(
    file: Option<Overrides>,
    flags: Overrides,
) -> Result<(ScanConfig, Option<PathBuf>)> {
    let mut cfg = ScanConfig::default();
    let mut out = None;
    if let Some(layer) = file {
        out = layer.apply(&mut cfg)?.or(out);
    }
    out = flags.apply(&mut cfg)?.or(out);
    cfg.validate()?;
    Ok((cfg, out))
}
