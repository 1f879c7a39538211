//! Deterministic CSV/JSON writers.
//!
//! Report CSV schema (v1), one row per report:
//!
//! ```text
//! policy,margin,p_dbm,offered,blocked,blocking_ratio
//! qawa,0.1200,-10.00,40,0,0.000000
//! ```
//!
//! JSON is the full list of reports, including per-link details.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planner::PlanReport;
use crate::spectrum::{PlacementSweep, WdmGrid};

pub const REPORT_CSV_HEADER: &str = "policy,margin,p_dbm,offered,blocked,blocking_ratio";
pub const PLACEMENT_CSV_HEADER: &str = "q_slot,freq_thz,aggregate_spurs_w,is_argmin";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

pub fn emit_results(reports: &[PlanReport], format: Format) -> Result<String> {
    if reports.is_empty() {
        return Err(Error::invalid("no reports to emit"));
    }
    match format {
        Format::Csv => {
            let mut out = String::from(REPORT_CSV_HEADER);
            out.push('\n');
            for r in reports {
                writeln!(
                    out,
                    "{},{:.4},{:.2},{},{},{:.6}",
                    r.policy, r.margin, r.p_dbm, r.offered_lightpaths, r.blocked_lightpaths, r.blocking_ratio
                )
                .unwrap();
            }
            Ok(out)
        }
        Format::Json => to_json(reports),
    }
}

pub fn parse_json_reports(text: &str) -> Result<Vec<PlanReport>> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        source_name: "reports.json".into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn emit_placement(sweep: &PlacementSweep, grid: &WdmGrid, format: Format) -> Result<String> {
    match format {
        Format::Csv => {
            let mut out = String::from(PLACEMENT_CSV_HEADER);
            out.push('\n');
            for &(slot, p) in &sweep.entries {
                writeln!(
                    out,
                    "{slot},{:.4},{p:.6e},{}",
                    grid.slot_freq_thz(slot),
                    u8::from(slot == sweep.argmin)
                )
                .unwrap();
            }
            Ok(out)
        }
        Format::Json => to_json(sweep),
    }
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s =
        serde_json::to_string_pretty(value).map_err(|e| Error::NumericFailure(format!("JSON encoding failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn write_output(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(blocked: u64, offered: u64) -> PlanReport {
        PlanReport {
            policy: "qawa".into(),
            margin: 0.12,
            p_dbm: -10.0,
            q_slot: 21,
            offered_lightpaths: offered,
            blocked_lightpaths: blocked,
            blocking_ratio: crate::planner::blocking_ratio(blocked, offered),
            qkd_feasible: true,
            request_digest: "00".into(),
            per_link: vec![crate::planner::LinkReport {
                link: "A-B".into(),
                length_km: 1.5,
                utilization: 0.1,
                qkd_allocated_bps: 1e6,
                skr_capacity_bps: 2e6,
                residual_headroom_w: Some(1.234_567_890_123e-12),
            }],
        }
    }

    #[test]
    fn one_row_csv() {
        let csv = emit_results(&[report(0, 40)], Format::Csv).unwrap();
        assert_eq!(csv, format!("{REPORT_CSV_HEADER}\nqawa,0.1200,-10.00,40,0,0.000000\n"));
    }

    #[test]
    fn ratio_format_is_fixed() {
        let csv = emit_results(&[report(1, 3)], Format::Csv).unwrap();
        assert!(csv.ends_with(",3,1,0.333333\n"), "{csv}");
    }

    #[test]
    fn json_round_trip() {
        let reports = vec![report(0, 40), report(7, 90)];
        let text = emit_results(&reports, Format::Json).unwrap();
        assert_eq!(parse_json_reports(&text).unwrap(), reports);
    }

    #[test]
    fn empty_reports_rejected() {
        assert!(emit_results(&[], Format::Csv).is_err());
    }

    #[test]
    fn write_error_names_path() {
        let err = write_output("x", Some(Path::new("/nonexistent/dir/out.csv"))).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/out.csv"));
    }
}
