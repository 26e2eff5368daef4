//! Analysis reports and their text and JSON renderings.

use std::fmt::Write as _;

use corrkit_core::rep::{CovarianceReport, Defect};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const TOOL: &str = "corrkit";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The envelope every subcommand emits.
#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport<R> {
    pub tool: &'static str,
    pub version: &'static str,
    pub analysis: &'static str,
    /// SHA-256 over the input files, each prefixed by its length.
    pub input_digest: String,
    pub tolerance: f64,
    pub passed: bool,
    pub results: R,
}

impl<R: Serialize + TextReport> AnalysisReport<R> {
    pub fn new(analysis: &'static str, inputs: &[&[u8]], tolerance: f64, passed: bool, results: R) -> Self {
        Self {
            tool: TOOL,
            version: VERSION,
            analysis,
            input_digest: digest(inputs),
            tolerance,
            passed,
            results,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if !self.results.bare() {
            let _ = writeln!(s, "{} {} {}", self.tool, self.version, self.analysis);
            let _ = writeln!(s, "input sha256: {}", self.input_digest);
            let _ = writeln!(s, "tolerance: {:e}", self.tolerance);
        }
        self.results.write_text(&mut s);
        if !self.results.bare() {
            let _ = writeln!(s, "verdict: {}", if self.passed { "pass" } else { "FAIL" });
        }
        s
    }
}

/// Human-oriented rendering of a results section.
pub trait TextReport {
    fn write_text(&self, out: &mut String);

    /// Emit only the results, without the header and verdict lines.
    fn bare(&self) -> bool {
        false
    }
}

pub fn digest(inputs: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for bytes in inputs {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    format!("{:x}", h.finalize())
}

/// Fixed-width scientific notation for defect values.
pub fn sci(v: f64) -> String {
    format!("{v:.3e}")
}

pub fn list<T: std::fmt::Display>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

/// One row of a defect table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefectRow {
    pub label: String,
    pub value: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Coordinates on which the defect operator acts nontrivially.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<usize>>,
}

impl From<&Defect> for DefectRow {
    fn from(d: &Defect) -> Self {
        Self {
            label: d.label.clone(),
            value: d.value,
            passed: d.passed,
            witness: d.witness.clone(),
            support: None,
        }
    }
}

/// Axiom checks and per-generator covariance defects.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefectTable {
    pub checks: Vec<DefectRow>,
    pub generators: Vec<DefectRow>,
}

impl From<&CovarianceReport> for DefectTable {
    fn from(r: &CovarianceReport) -> Self {
        Self {
            checks: r.checks.iter().map(DefectRow::from).collect(),
            generators: r.generators.iter().map(DefectRow::from).collect(),
        }
    }
}

impl DefectTable {
    pub fn passed(&self) -> bool {
        self.checks.iter().chain(&self.generators).all(|d| d.passed)
    }

    /// All rows, checks first.
    pub fn rows(&self) -> impl Iterator<Item = &DefectRow> {
        self.checks.iter().chain(&self.generators)
    }

    pub fn write_text(&self, out: &mut String) {
        let width = self.rows().map(|d| d.label.len()).max().unwrap_or(0);
        for d in self.rows() {
            let _ = write!(
                out,
                "  {:<width$}  {}  {}",
                d.label,
                sci(d.value),
                if d.passed { "ok" } else { "FAIL" }
            );
            if let Some(w) = d.witness.as_ref().filter(|_| !d.passed) {
                let _ = write!(out, "  at {w}");
            }
            if let Some(s) = &d.support {
                let _ = write!(out, "  support {}", list(s));
            }
            out.push('\n');
        }
    }
}
