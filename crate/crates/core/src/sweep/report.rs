//! Analytic-versus-oracle comparison summaries.

use serde::Serialize;

use super::run::{Engine, SweepOutput};
use crate::error::{Error, Result};

/// Points with `|analytic|` below this fraction of the extremum are not
/// used for the sign comparison.
pub const SIGN_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessComparison {
    pub witness: String,
    pub max_abs_deviation: f64,
    pub extremum_z: f64,
    pub extremum_gamma_z: f64,
    /// Analytic value of largest magnitude.
    pub extremum_value: f64,
    pub oracle_at_extremum: f64,
    pub deviation_at_extremum: f64,
    /// `100 * deviation_at_extremum / |extremum_value|`.
    pub relative_at_extremum_pct: f64,
    pub sign_agreement: bool,
    pub sign_checked_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRatio {
    pub witness: String,
    pub max_deviation: f64,
    pub max_deviation_halved: f64,
    /// Full-coupling over halved-coupling maximum deviation; 4 for a clean
    /// second-order residual.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub witnesses: Vec<WitnessComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scaling: Option<Vec<ScalingRatio>>,
}

impl ComparisonReport {
    pub fn get(&self, witness: &str) -> Option<&WitnessComparison> {
        self.witnesses.iter().find(|w| w.witness == witness)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn paired(out: &SweepOutput) -> Vec<(String, usize, usize)> {
    let mut pairs = Vec::new();
    for (i, c) in out.columns.iter().enumerate() {
        if c.engine != Engine::Analytic {
            continue;
        }
        if let Some(j) = out
            .columns
            .iter()
            .position(|o| o.engine == Engine::Oracle && o.witness == c.witness)
        {
            pairs.push((c.witness.clone(), i, j));
        }
    }
    pairs
}

/// Per-witness deviation statistics for every column that has both engines.
pub fn compare_report(out: &SweepOutput) -> Result<ComparisonReport> {
    let pairs = paired(out);
    if pairs.is_empty() {
        let names: Vec<_> = out.columns.iter().map(|c| c.witness.clone()).collect();
        return Err(Error::MissingEngine(if names.is_empty() {
            "sweep".into()
        } else {
            names.join(", ")
        }));
    }
    if out.rows.is_empty() {
        return Err(Error::MissingEngine("sweep without rows".into()));
    }
    let mut witnesses = Vec::with_capacity(pairs.len());
    for (name, ia, io) in pairs {
        let mut max_dev: f64 = 0.0;
        let mut ext = 0;
        for (r, row) in out.rows.iter().enumerate() {
            max_dev = max_dev.max((row.values[ia] - row.values[io]).abs());
            if row.values[ia].abs() > out.rows[ext].values[ia].abs() {
                ext = r;
            }
        }
        let er = &out.rows[ext];
        let (ev, eo) = (er.values[ia], er.values[io]);
        let dev = (ev - eo).abs();
        let rel = if ev != 0.0 {
            100.0 * dev / ev.abs()
        } else if dev == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        let mut checked = 0;
        let mut agree = true;
        for row in &out.rows {
            let (a, o) = (row.values[ia], row.values[io]);
            if a.abs() > SIGN_THRESHOLD * ev.abs() {
                checked += 1;
                agree &= a.signum() == o.signum();
            }
        }
        witnesses.push(WitnessComparison {
            witness: name,
            max_abs_deviation: max_dev,
            extremum_z: er.z,
            extremum_gamma_z: er.gamma_z,
            extremum_value: ev,
            oracle_at_extremum: eo,
            deviation_at_extremum: dev,
            relative_at_extremum_pct: rel,
            sign_agreement: agree,
            sign_checked_points: checked,
        });
    }
    Ok(ComparisonReport {
        witnesses,
        scaling: None,
    })
}

/// Report for `full` with the deviation ratio against a sweep at half the
/// nonlinear coupling.
pub fn compare_scaling(full: &SweepOutput, halved: &SweepOutput) -> Result<ComparisonReport> {
    let mut report = compare_report(full)?;
    let half = compare_report(halved)?;
    let mut ratios = Vec::new();
    for w in &report.witnesses {
        let h = half
            .get(&w.witness)
            .ok_or_else(|| Error::MissingEngine(format!("{} in the halved sweep", w.witness)))?;
        ratios.push(ScalingRatio {
            witness: w.witness.clone(),
            max_deviation: w.max_abs_deviation,
            max_deviation_halved: h.max_abs_deviation,
            ratio: w.max_abs_deviation / h.max_abs_deviation,
        });
    }
    report.scaling = Some(ratios);
    Ok(report)
}
