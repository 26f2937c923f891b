//! Support library for the `decoy-scan` binary: configuration layering,
//! the sweep runner, and output rendering. Kept as a library so the logic
//! stays testable without spawning the binary.

pub mod config;
pub mod output;
pub mod sweep;

pub use config::{resolve, LossGrid, MuChoice, OutputFormat, Overrides, ScanConfig};
pub use output::{render_csv, render_json};
pub use sweep::{run_scan, ScanReport, SweepRow, TermCells, CUTOFF_RESOLUTION_DB};

/// Process exit status: 0 on success, 1 on usage or runtime errors, 2 when
/// `--strict` is set and some solve degraded to its numerical limit.
pub fn exit_status(strict: bool, numerical_limit: bool) -> u8 {
    if strict && numerical_limit {
        2
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::exit_status;

    #[test]
    fn strict_mode_gates_the_degraded_exit() {
        assert_eq!(exit_status(false, false), 0);
        assert_eq!(exit_status(false, true), 0);
        assert_eq!(exit_status(true, false), 0);
        assert_eq!(exit_status(true, true), 2);
    }
}
