use serde::{Deserialize, Serialize};

use crate::linalg::fmt_num;

/// Optimum of an additional model checked against the same oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub model: String,
    pub optimum: Option<f64>,
    pub integer_feasible: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    /// Seed of the instance generator, for random instances.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Provenance of the primary model.
    pub model: String,
    pub oracle_optimum: Option<f64>,
    pub misdp_optimum: Option<f64>,
    pub integer_feasible: u64,
    pub oracle_feasible: u64,
    /// Whether the feasible counts agree; only set where a bijection between
    /// model points and source solutions is expected.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bijection: Option<bool>,
    pub max_residual: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cross: Vec<CrossCheck>,
    pub matches: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Only recorded on request, so default output is byte-stable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.matches && self.bijection != Some(false) && self.error.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub reports: Vec<VerificationReport>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(VerificationReport::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerificationReport> {
        self.reports.iter().filter(|r| !r.passed())
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        self.reports.iter().map(|r| serde_json::to_string(r).expect("reports serialize") + "\n").collect()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or("-".into(), |v| fmt_num((v * 1e9).round() / 1e9))
}

pub fn render_table(s: &SuiteOutcome) -> String {
    let mut rows: Vec<[String; 7]> = vec![[
        "id".into(),
        "oracle".into(),
        "misdp".into(),
        "feasible".into(),
        "oracle#".into(),
        "bijection".into(),
        "status".into(),
    ]];
    for r in &s.reports {
        let status = match (&r.error, r.passed()) {
            (Some(e), _) => format!("error: {e}"),
            (None, true) => "ok".into(),
            (None, false) => "MISMATCH".into(),
        };
        rows.push([
            r.id.clone(),
            opt(r.oracle_optimum),
            opt(r.misdp_optimum),
            r.integer_feasible.to_string(),
            r.oracle_feasible.to_string(),
            r.bijection.map_or("-".into(), |b| b.to_string()),
            status,
        ]);
    }
    let widths: Vec<usize> = (0..7).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in &rows {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    let failed = s.failures().count();
    out.push_str(&format!("{}: {} instances, {} failed\n", s.suite, s.reports.len(), failed));
    out
}
