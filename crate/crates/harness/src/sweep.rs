//! Defect sweeps over one scenario parameter, written as CSV.
//!
//! Columns are stable: `param` first, then one defect column per selected
//! check in catalogue order. Values use `.` decimals and scientific notation,
//! independent of any locale.

use crate::scenario::Scenario;
use crate::{run_scenario, selected_checks, HarnessError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    SymbolScale,
    FactorZeroRadius,
    Degree,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::SymbolScale => "symbol-scale",
            SweepParam::FactorZeroRadius => "factor-zero-radius",
            SweepParam::Degree => "degree",
        }
    }
}

impl std::str::FromStr for SweepParam {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "symbol-scale" => Ok(SweepParam::SymbolScale),
            "factor-zero-radius" => Ok(SweepParam::FactorZeroRadius),
            "degree" => Ok(SweepParam::Degree),
            other => Err(format!("unknown sweep parameter `{other}`")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepTable {
    pub param: String,
    pub check_ids: Vec<String>,
    /// One row per grid point: the parameter value and the defect per check.
    pub rows: Vec<(f64, Vec<f64>)>,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("param");
        for id in &self.check_ids {
            out.push(',');
            out.push_str(id);
        }
        out.push('\n');
        for (value, defects) in &self.rows {
            out.push_str(&format!("{value}"));
            for d in defects {
                out.push_str(&format!(",{d:.12e}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Applies one grid value to a scenario copy.
fn apply(base: &Scenario, param: SweepParam, value: f64) -> Scenario {
    let mut s = base.clone();
    match param {
        SweepParam::SymbolScale => s.symbol_scale = value,
        SweepParam::FactorZeroRadius => s.zero_radius = value,
        SweepParam::Degree => {
            let d = value.max(0.0).round() as usize;
            s.degrees = (d, d);
        }
    }
    s
}

pub fn run_sweep(
    base: &Scenario,
    param: SweepParam,
    grid: &[f64],
) -> Result<SweepTable, HarnessError> {
    let check_ids: Vec<String> = selected_checks(base)?
        .iter()
        .map(|c| c.id.to_string())
        .collect();
    let mut rows = Vec::with_capacity(grid.len());
    for &value in grid {
        let scenario = apply(base, param, value);
        let report = run_scenario(&scenario)?;
        let defects = check_ids
            .iter()
            .map(|id| report.record(id).map(|r| r.defect).unwrap_or(f64::NAN))
            .collect();
        rows.push((value, defects));
    }
    Ok(SweepTable {
        param: param.name().to_string(),
        check_ids,
        rows,
    })
}
