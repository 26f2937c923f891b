//! Rendering a scan report as CSV or JSON. Both forms are byte-stable for
//! a given report: floats print with 12 significant digits in CSV and
//! shortest-roundtrip form in JSON.

use anyhow::Result;

use crate::sweep::ScanReport;

fn sig(x: f64) -> String {
    format!("{x:.11e}")
}

/// CSV with one row per (mode, loss) point. Per-photon-number columns are
/// flattened: `r_k` (Poisson weight), `lambda_k`, `I_k` (bits) up to the
/// largest photon number any row used; rows that stopped earlier leave the
/// extra cells empty.
pub fn render_csv(report: &ScanReport) -> String {
    let max_terms = report.rows.iter().map(|r| r.terms.len()).max().unwrap_or(0);
    let mut out = String::new();
    out.push_str("total_db,distance_km,mode,mu0,k_upper_bits_per_pulse,n_max_used");
    for prefix in ["r", "lambda", "I"] {
        for n in 0..max_terms {
            out.push_str(&format!(",{prefix}_{n}"));
        }
    }
    out.push('\n');

    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}",
            sig(row.total_db),
            sig(row.distance_km),
            row.mode,
            sig(row.mu0),
            sig(row.k_upper_bits_per_pulse),
            row.n_max_used
        ));
        for pick in [0, 1, 2] {
            for n in 0..max_terms {
                out.push(',');
                if let Some(t) = row.terms.get(n) {
                    debug_assert_eq!(t.n, n);
                    let v = match pick {
                        0 => t.weight,
                        1 => t.lambda,
                        _ => t.mutual_info,
                    };
                    out.push_str(&sig(v));
                }
            }
        }
        out.push('\n');
    }
    out
}

pub fn render_json(report: &ScanReport) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ScanConfig;
    use crate::sweep::{SweepRow, TermCells};

    fn tiny_report() -> ScanReport {
        ScanReport {
            config: ScanConfig::default(),
            rows: vec![SweepRow {
                total_db: 30.0,
                distance_km: 78.72,
                mode: "two-way".into(),
                mu0: 0.5,
                k_upper_bits_per_pulse: 1.25e-4,
                n_max_used: 2,
                terms: vec![
                    TermCells {
                        n: 0,
                        weight: 0.6065,
                        lambda: 1.0,
                        mutual_info: 0.0,
                    },
                    TermCells {
                        n: 1,
                        weight: 0.3033,
                        lambda: 0.25,
                        mutual_info: 5.5e-4,
                    },
                ],
                numerical_limit: false,
                warnings: vec![],
            }],
            cutoffs: None,
            numerical_limit: false,
        }
    }

    #[test]
    fn csv_header_matches_the_widest_row() {
        let csv = render_csv(&tiny_report());
        let header = csv.lines().next().unwrap();
        assert_eq!(
            header,
            "total_db,distance_km,mode,mu0,k_upper_bits_per_pulse,n_max_used,r_0,r_1,lambda_0,lambda_1,I_0,I_1"
        );
        let row = csv.lines().nth(1).unwrap();
        assert_eq!(row.split(',').count(), header.split(',').count());
        assert!(row.contains("two-way"));
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig(0.5), "5.00000000000e-1");
        assert_eq!(sig(1.0 / 3.0), "3.33333333333e-1");
    }

    #[test]
    fn json_round_trips_the_key_fields() {
        let text = render_json(&tiny_report()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["rows"][0]["mode"], "two-way");
        assert_eq!(v["rows"][0]["terms"][1]["n"], 1);
        assert_eq!(v["config"]["y0"], 1.7e-6);
        assert!(v["cutoffs"].is_null());
    }
}
