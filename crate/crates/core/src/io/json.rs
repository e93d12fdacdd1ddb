//! Structured result export. Every command emits the same shape:
//!
//! ```json
//! {
//!   "verdict": "...",
//!   "reason": "...",            // only on unknown verdicts
//!   "witnesses": [ { "term": "...", "constraint": "...", "status": "exact" } ],
//!   "codifference": [ ... ],    // only for set differences
//!   "diagnostics": [ "..." ]
//! }
//! ```
//!
//! Terms and constraints are rendered with the canonical printer, so JSON
//! consumers can feed them back into the pattern parser.

use serde::Serialize;

use crate::cterm::ConstrainedTerm;
use crate::diff::DiffStatus;
use crate::io::printer;
use crate::qr::QrReport;

#[derive(Debug, Clone, Serialize)]
pub struct PatternEntry {
    pub term: String,
    pub constraint: String,
    pub status: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub witnesses: Vec<PatternEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codifference: Option<Vec<PatternEntry>>,
    pub diagnostics: Vec<String>,
}

fn status_str(status: DiffStatus) -> &'static str {
    match status {
        DiffStatus::Exact => "exact",
        DiffStatus::Inconclusive => "inconclusive",
    }
}

fn entry(ct: &ConstrainedTerm, status: DiffStatus) -> PatternEntry {
    let (term, constraint) = printer::cterm_parts(ct);
    PatternEntry { term, constraint, status: status_str(status).to_string() }
}

fn entries(cts: &[ConstrainedTerm], status: DiffStatus) -> Vec<PatternEntry> {
    cts.iter().map(|ct| entry(ct, status)).collect()
}

/// Export a quasi-reducibility report.
pub fn check_report(report: &QrReport) -> Report {
    Report {
        verdict: report.verdict.to_string(),
        reason: report.reason.clone(),
        witnesses: report
            .witnesses
            .iter()
            .map(|w| entry(&w.pattern, w.status))
            .collect(),
        codifference: None,
        diagnostics: report.diagnostics.clone(),
    }
}

/// Export a complement: the verdict states whether the rules cover every
/// ground pattern (`complete` on an empty, exactly-computed complement).
pub fn complement_report(
    patterns: &[ConstrainedTerm],
    status: DiffStatus,
    diagnostics: Vec<String>,
) -> Report {
    let verdict = match (patterns.is_empty(), status) {
        (true, DiffStatus::Exact) => "complete",
        (false, DiffStatus::Exact) => "incomplete",
        (_, DiffStatus::Inconclusive) => "unknown",
    };
    Report {
        verdict: verdict.to_string(),
        reason: (status == DiffStatus::Inconclusive)
            .then(|| "some constraints could not be decided".to_string()),
        witnesses: entries(patterns, status),
        codifference: None,
        diagnostics,
    }
}

/// Export a set difference: `witnesses` holds the leftovers of the first
/// set, `codifference` those of the second.
pub fn diff_report(
    p: &[ConstrainedTerm],
    q: &[ConstrainedTerm],
    status: DiffStatus,
    diagnostics: Vec<String>,
) -> Report {
    Report {
        verdict: status_str(status).to_string(),
        reason: None,
        witnesses: entries(p, status),
        codifference: Some(entries(q, status)),
        diagnostics,
    }
}

/// Serialize a report as pretty-printed JSON with a trailing newline.
pub fn to_string(report: &Report) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("reports serialize");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cterm::EquivMode;
    use crate::io::parser::parse_lctrs;
    use crate::qr::quasi_reducible;
    use crate::solver::BuiltinSolver;

    const SYSTEM: &str = "\
SORTS list ;
SIGNATURE
  nil : list ;
  cons : int * list => list ;
  f : list * int => int ;
RULES
  f(nil, y) -> 0 [ y <= 0 ] ;
";

    #[test]
    fn check_reports_round_trip_through_serde() {
        let lctrs = parse_lctrs(SYSTEM).unwrap();
        let mut solver = BuiltinSolver::new();
        let report = quasi_reducible(&lctrs, &mut solver, EquivMode::Syntactic).unwrap();
        let json = to_string(&check_report(&report));
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["verdict"], "not quasi-reducible");
        let witnesses = value["witnesses"].as_array().unwrap();
        assert!(!witnesses.is_empty());
        for w in witnesses {
            assert!(w["term"].as_str().unwrap().starts_with("f("));
            assert_eq!(w["status"], "exact");
            // The printed parts parse back as a constrained pattern.
            let text = format!(
                "{} [{}]",
                w["term"].as_str().unwrap(),
                w["constraint"].as_str().unwrap()
            );
            crate::io::parser::parse_constrained_pattern(&text, &lctrs.sig).unwrap();
        }
        assert!(value.get("reason").is_none());
        assert!(value["diagnostics"].as_array().unwrap().is_empty());
    }

    #[test]
    fn verdict_strings_are_stable() {
        let complete = complement_report(&[], DiffStatus::Exact, Vec::new());
        assert_eq!(complete.verdict, "complete");
        let unknown = complement_report(&[], DiffStatus::Inconclusive, Vec::new());
        assert_eq!(unknown.verdict, "unknown");
        assert!(unknown.reason.is_some());
        let lctrs = parse_lctrs(SYSTEM).unwrap();
        let pats = crate::io::parser::parse_patterns("f(nil, y) [y > 0] ;", &lctrs.sig).unwrap();
        let diff = diff_report(&pats, &[], DiffStatus::Exact, Vec::new());
        assert_eq!(diff.verdict, "exact");
        let json = to_string(&diff);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["codifference"].as_array().unwrap().len(), 0);
        assert_eq!(value["witnesses"][0]["constraint"], "y > 0");
    }
}
