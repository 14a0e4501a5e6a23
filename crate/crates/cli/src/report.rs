//! Deterministic machine-readable reports. Rationals are always
//! "numerator/denominator" strings — no floats anywhere in any artifact —
//! and every report embeds the truncation orders used, so a PASS is a
//! statement "verified through order D", never an unqualified claim.

use msplab_core::acceptance::{CheckOutcome, CheckStatus};
use msplab_core::rat::{rat_to_string, Rat};
use msplab_core::series::QSeries;
use serde::Serialize;

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub k: Option<u32>,
    pub n: Option<usize>,
    pub order: Option<usize>,
    pub checks: Vec<CheckOutcome>,
    pub payload_ref: Option<String>,
}

pub fn render_json(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("serializable report")
}

pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    for c in &report.checks {
        let status = match c.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
        };
        out.push_str(&format!(
            "[{status}] {} — {} ({})\n",
            c.check_id, c.title, c.order
        ));
        if let Some(f) = &c.first_failure {
            out.push_str(&format!("       first failure: {f}\n"));
        }
        for d in &c.detail {
            out.push_str(&format!("       {d}\n"));
        }
    }
    if let Some(p) = &report.payload_ref {
        out.push_str(&format!("payload: {p}\n"));
    }
    out
}

/// CSV table for a list of invariants indexed from 1.
pub fn invariants_csv(values: &[Rat]) -> String {
    let mut out = String::from("d,numerator,denominator\n");
    for (i, v) in values.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", i + 1, v.numer(), v.denom()));
    }
    out
}

pub fn series_payload(name: &str, s: &QSeries) -> (String, Vec<String>) {
    (
        name.to_string(),
        (0..=s.order()).map(|d| rat_to_string(s.coeff(d))).collect(),
    )
}
