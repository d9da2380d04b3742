//! Verification reports: one record per executed check, renderable as a
//! human table or as JSON with the fixed schema
//! `{check, anchor, defect, tol, pass}` per record.

use serde_json::json;

use crate::checks::CheckKind;

#[derive(Debug, Clone)]
pub struct CheckRecord {
    pub check: String,
    pub anchor: String,
    pub defect: f64,
    /// Effective bound after scenario tol scaling.
    pub tol: f64,
    pub kind: CheckKind,
    pub pass: bool,
    pub window: usize,
    pub runtime_ms: f64,
    /// Populated when the check could not be evaluated at all.
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub seed: u64,
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn pass_count(&self) -> usize {
        self.records.iter().filter(|r| r.pass).count()
    }

    pub fn fail_count(&self) -> usize {
        self.records.len() - self.pass_count()
    }

    pub fn all_passed(&self) -> bool {
        self.fail_count() == 0
    }

    pub fn record(&self, id: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.check == id)
    }

    /// Human-readable table, deterministic except for the runtime column.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let width = self
            .records
            .iter()
            .map(|r| r.check.len())
            .max()
            .unwrap_or(8)
            .max(8);
        out.push_str(&format!(
            "{:<width$}  {:>12}  {:>9}  {:>4}  {:>6}  result\n",
            "check",
            "defect",
            "bound",
            "dir",
            "window",
            width = width
        ));
        for r in &self.records {
            let dir = match r.kind {
                CheckKind::UpperBound => "<=",
                CheckKind::LowerBound => ">=",
            };
            let result = if r.pass { "pass" } else { "FAIL" };
            out.push_str(&format!(
                "{:<width$}  {:>12.4e}  {:>9.1e}  {:>4}  {:>6}  {}\n",
                r.check,
                r.defect,
                r.tol,
                dir,
                r.window,
                result,
                width = width
            ));
            if let Some(err) = &r.error {
                out.push_str(&format!("{:<width$}  error: {}\n", "", err, width = width));
            }
        }
        out.push_str(&format!(
            "summary: {} passed, {} failed (seed {})\n",
            self.pass_count(),
            self.fail_count(),
            self.seed
        ));
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "checks": self
                .records
                .iter()
                .map(|r| {
                    json!({
                        "check": r.check,
                        "anchor": r.anchor,
                        "defect": r.defect,
                        "tol": r.tol,
                        "direction": match r.kind {
                            CheckKind::UpperBound => "upper",
                            CheckKind::LowerBound => "lower",
                        },
                        "pass": r.pass,
                        "window": r.window,
                        "runtime_ms": r.runtime_ms,
                        "error": r.error,
                    })
                })
                .collect::<Vec<_>>(),
            "summary": {
                "pass": self.pass_count(),
                "fail": self.fail_count(),
                "seed": self.seed,
            },
        })
    }
}
