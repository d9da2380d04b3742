//! Scenario-driven verification harness for the model-space operator
//! toolkit: seeded generation of commuting gamma-symmetric inner pairs, a
//! catalogue of operator-identity checks with pinned tolerances, parameter
//! sweeps and machine-readable reports.

pub mod checks;
pub mod context;
pub mod demo;
pub mod report;
pub mod scenario;
pub mod sweep;

use std::time::Instant;

use checks::{CheckDef, CATALOGUE};
use context::CheckContext;
use report::{CheckRecord, Report};
use scenario::{CheckSelection, ConfigError, Scenario};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("scenario could not be materialized: {0}")]
    Build(#[from] mvtto_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// The catalogue entries a scenario selects, in catalogue order.
pub fn selected_checks(scenario: &Scenario) -> Result<Vec<&'static CheckDef>, ConfigError> {
    if let CheckSelection::Named(names) = &scenario.checks {
        for n in names {
            let known = CATALOGUE
                .iter()
                .any(|c| c.id == n || c.id.starts_with(&format!("{n}.")));
            if !known {
                return Err(ConfigError::BadValue {
                    key: "checks".into(),
                    reason: format!("unknown check or prefix `{n}`"),
                });
            }
        }
    }
    Ok(CATALOGUE
        .iter()
        .filter(|c| scenario.checks.matches(c.id))
        .collect())
}

/// Runs every selected check of the scenario and assembles the report.
///
/// Deterministic per scenario (including the seed): the generated inputs and
/// every defect value depend only on the scenario, never on check order or
/// timing.
pub fn run_scenario(scenario: &Scenario) -> Result<Report, HarnessError> {
    scenario.validate()?;
    let selected = selected_checks(scenario)?;
    let ctx = CheckContext::build(scenario, |demand| {
        selected.iter().map(|c| (c.demand)(demand)).max().unwrap_or(0)
    })?;
    let mut records = Vec::with_capacity(selected.len());
    for def in selected {
        let start = Instant::now();
        let outcome = (def.run)(&ctx);
        let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
        let (defect, error) = match outcome {
            Ok(d) => (d, None),
            Err(e) => (f64::INFINITY, Some(e.to_string())),
        };
        let pass = error.is_none() && def.passes(defect, scenario.tol);
        records.push(CheckRecord {
            check: def.id.to_string(),
            anchor: def.anchor.to_string(),
            defect,
            tol: def.effective_tol(scenario.tol),
            kind: def.kind,
            pass,
            window: ctx.window.radius(),
            runtime_ms,
            error,
        });
    }
    Ok(Report {
        seed: scenario.seed,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use scenario::WindowChoice;

    #[test]
    fn selection_rejects_unknown_names() {
        let mut s = Scenario {
            checks: CheckSelection::Named(vec!["decomp".into(), "nonsense".into()]),
            ..Scenario::default()
        };
        assert!(selected_checks(&s).is_err());
        s.checks = CheckSelection::Named(vec!["decomp".into()]);
        let picked = selected_checks(&s).unwrap();
        assert!(picked.iter().all(|c| c.id.starts_with("decomp.")));
        assert!(picked.len() >= 5);
    }

    #[test]
    fn decomposition_subset_runs_clean() {
        let mut s = Scenario {
            seed: 3,
            dim: 2,
            ..Scenario::default()
        };
        s.checks = CheckSelection::Named(vec!["decomp".into(), "inner".into()]);
        let report = run_scenario(&s).unwrap();
        assert!(report.all_passed(), "{}", report.render_text());
        assert!(report.record("decomp.direct_sum").is_some());
    }

    #[test]
    fn zero_tolerance_fails_everything() {
        let s = Scenario {
            tol: 0.0,
            checks: CheckSelection::Named(vec!["decomp".into(), "eq412".into(), "inner".into()]),
            ..Scenario::default()
        };
        let report = run_scenario(&s).unwrap();
        assert_eq!(report.pass_count(), 0);
        assert!(report.fail_count() > 0);
    }

    #[test]
    fn window_too_small_for_frames_is_a_build_error() {
        let s = Scenario {
            window: WindowChoice::Fixed(6),
            checks: CheckSelection::Named(vec!["defect.lhs_eq_rhs".into()]),
            ..Scenario::default()
        };
        assert!(matches!(run_scenario(&s), Err(HarnessError::Build(_))));
    }

    #[test]
    fn window_too_small_for_a_check_shows_up_as_failure() {
        // frames fit at radius 10 but the deep compositions do not
        let s = Scenario {
            window: WindowChoice::Fixed(10),
            checks: CheckSelection::Named(vec!["defect.lhs_eq_rhs".into()]),
            ..Scenario::default()
        };
        let report = run_scenario(&s).unwrap();
        assert!(!report.all_passed());
        assert!(report.records[0].error.is_some());
    }
}
