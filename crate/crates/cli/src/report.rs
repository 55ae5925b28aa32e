use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

/// One checked quantity. Fields serialize in declaration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub suite: String,
    pub case: String,
    pub grid_n: usize,
    pub metric: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ReportRecord {
    /// `pass = value ≤ tolerance`.
    pub fn bounded(
        suite: &str,
        case: impl Into<String>,
        grid_n: usize,
        metric: &str,
        value: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            suite: suite.into(),
            case: case.into(),
            grid_n,
            metric: metric.into(),
            value,
            tolerance,
            pass: value <= tolerance,
            error: None,
        }
    }

    /// A case that could not be evaluated.
    pub fn failed(
        suite: &str,
        case: impl Into<String>,
        grid_n: usize,
        metric: &str,
        tolerance: f64,
        error: impl ToString,
    ) -> Self {
        Self {
            suite: suite.into(),
            case: case.into(),
            grid_n,
            metric: metric.into(),
            value: f64::NAN,
            tolerance,
            pass: false,
            error: Some(error.to_string()),
        }
    }
}

pub fn render(records: &[ReportRecord]) -> String {
    records.iter().map(|r| serde_json::to_string(r).expect("record serializes") + "\n").collect()
}

/// Writes the JSON-lines report, replacing any existing file.
pub fn emit_report(records: &[ReportRecord], path: &Path) -> io::Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, render(records))
}

pub fn print_report(records: &[ReportRecord]) -> io::Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(render(records).as_bytes())?;
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_order_is_stable() {
        let r = ReportRecord::bounded("bracket", "circle", 256, "max_abs", 1e-4, 1e-3);
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"suite":"bracket","case":"circle","grid_n":256,"metric":"max_abs","value":0.0001,"tolerance":0.001,"pass":true}"#
        );
    }

    #[test]
    fn pass_iff_within_tolerance() {
        assert!(ReportRecord::bounded("s", "c", 8, "m", 1.0, 1.0).pass);
        assert!(!ReportRecord::bounded("s", "c", 8, "m", 1.1, 1.0).pass);
        assert!(!ReportRecord::bounded("s", "c", 8, "m", f64::NAN, 1.0).pass);
    }

    #[test]
    fn failed_record_serializes_null_value() {
        let r = ReportRecord::failed("arc", "great_circle", 64, "leaf_invariant", 1e-5, "unsupported");
        let line = serde_json::to_string(&r).unwrap();
        assert!(line.contains(r#""value":null"#));
        assert!(line.ends_with(r#""pass":false,"error":"unsupported"}"#));
    }

    #[test]
    fn empty_report_is_empty_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.jsonl");
        emit_report(&[], &path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "");
    }
}
