//! Evaluation of the selected witnesses over the sweep grid.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{SweepConfig, WitnessSelector};
use crate::analytic;
use crate::coeffs::{evolution_coefficients, CouplerParams, EvolutionCoefficients};
use crate::error::{Error, Result};
use crate::fock::{coherent_product_state, default_steps, Integrator, OperatorWord, StateVector};
use crate::moments::{self, MomentTable};
use crate::witness::{CoherentInput, WitnessValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FailurePolicy {
    /// Abort on the first failing grid point.
    FailFast,
    /// Drop failing points from the rows and list them in the output.
    #[default]
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SweepOptions {
    pub policy: FailurePolicy,
    /// Worker threads; `None` or `Some(1)` evaluates on the calling thread.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Analytic,
    Oracle,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Analytic => "analytic",
            Engine::Oracle => "oracle",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub witness: String,
    pub engine: Engine,
}

impl Column {
    pub fn name(&self) -> String {
        format!("{}_{}", self.witness, self.engine)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub z: f64,
    pub gamma_z: f64,
    /// One value per [`Column`], in column order.
    pub values: Vec<f64>,
    pub norm_drift: Option<f64>,
    pub truncation_deficit: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedPoint {
    pub index: usize,
    pub z: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub columns: Vec<Column>,
    pub rows: Vec<SweepRow>,
    pub skipped: Vec<SkippedPoint>,
    pub oracle: bool,
}

impl SweepOutput {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name() == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r.values[i]).collect())
    }
}

impl WitnessSelector {
    pub fn words(&self) -> Vec<OperatorWord> {
        match *self {
            WitnessSelector::AmpSq(m) => moments::amp_sq_words(m),
            WitnessSelector::Hoa(m, n) => moments::hoa_words(m, n),
            WitnessSelector::Hz(p, m, n) => moments::hz_words(p, m, n),
            WitnessSelector::Duan(p) => moments::duan_words(p),
            WitnessSelector::Tripartite => moments::tripartite_words(),
        }
    }

    pub fn from_moments(&self, t: &MomentTable) -> Result<Vec<WitnessValue>> {
        Ok(match *self {
            WitnessSelector::AmpSq(m) => {
                let (a1, a2) = moments::amp_sq_from_moments(t, m)?;
                vec![a1, a2]
            }
            WitnessSelector::Hoa(m, n) => vec![moments::hoa_from_moments(t, m, n)?],
            WitnessSelector::Hz(p, m, n) => {
                let (e, ep) = moments::hz_from_moments(t, p, m, n)?;
                vec![e, ep]
            }
            WitnessSelector::Duan(p) => vec![moments::duan_from_moments(t, p)?],
            WitnessSelector::Tripartite => moments::tripartite_from_moments(t)?,
        })
    }

    /// Closed-form values, or `None` where no closed form exists.
    pub fn analytic(
        &self,
        co: &EvolutionCoefficients,
        input: &CoherentInput,
    ) -> Result<Option<Vec<WitnessValue>>> {
        if !self.has_analytic() {
            return Ok(None);
        }
        Ok(Some(match *self {
            WitnessSelector::AmpSq(m) => {
                let (a1, a2) = analytic::amp_squared_squeezing(co, input, m);
                vec![a1, a2]
            }
            WitnessSelector::Hoa(m, n) => vec![analytic::hoa(co, input, m, n)?],
            WitnessSelector::Hz(_, m, n) => {
                let (e, ep) = analytic::hz_pair(co, input, m, n)?;
                vec![e, ep]
            }
            WitnessSelector::Duan(p) => vec![analytic::duan_pair(co, input, p)],
            WitnessSelector::Tripartite => analytic::tripartite(co, input),
        }))
    }

    /// Column stems, in evaluation order.
    pub fn labels(&self) -> Vec<String> {
        let words = self.words();
        let vacuum = MomentTable::coherent(&CoherentInput::real(0.0, 0.0, 0.0), &words);
        self.from_moments(&vacuum)
            .expect("selector words cover its reduction")
            .iter()
            .map(WitnessValue::label)
            .collect()
    }
}

pub fn columns(config: &SweepConfig) -> Vec<Column> {
    let oracle = config.oracle_enabled();
    let mut cols = Vec::new();
    for w in &config.witnesses {
        for label in w.labels() {
            if w.has_analytic() {
                cols.push(Column {
                    witness: label.clone(),
                    engine: Engine::Analytic,
                });
            }
            if oracle {
                cols.push(Column {
                    witness: label,
                    engine: Engine::Oracle,
                });
            }
        }
    }
    cols
}

struct OraclePlan {
    initial: StateVector,
    integrator: Integrator,
    words: Vec<OperatorWord>,
    max_len: usize,
    steps: Option<usize>,
    z_max: f64,
}

impl OraclePlan {
    fn steps_for(&self, params: &CouplerParams, z: f64) -> usize {
        match self.steps {
            Some(s) if self.z_max > 0.0 => ((s as f64) * z / self.z_max).ceil().max(1.0) as usize,
            _ => default_steps(params, z),
        }
    }
}

fn evaluate_point(config: &SweepConfig, plan: Option<&OraclePlan>, z: f64) -> Result<SweepRow> {
    let co = evolution_coefficients(&config.params, z)?;
    let mut analytic_vals = Vec::with_capacity(config.witnesses.len());
    for w in &config.witnesses {
        analytic_vals.push(w.analytic(&co, &config.input)?);
    }

    let mut oracle_vals = None;
    let mut norm_drift = None;
    let mut truncation_deficit = None;
    if let Some(plan) = plan {
        let steps = plan.steps_for(&config.params, z);
        let evo = plan
            .integrator
            .clone()
            .steps(steps)
            .evolve(&plan.initial, 0.0, z)?;
        let table = MomentTable::from_state(&evo.state, &plan.words, plan.max_len)?;
        let mut vals = Vec::with_capacity(config.witnesses.len());
        for w in &config.witnesses {
            vals.push(w.from_moments(&table)?);
        }
        oracle_vals = Some(vals);
        norm_drift = Some(evo.norm_drift);
        truncation_deficit = Some(evo.state.truncation_deficit());
    }

    let mut values = Vec::new();
    for (i, an) in analytic_vals.iter().enumerate() {
        let n = match (an, &oracle_vals) {
            (Some(an), _) => an.len(),
            (None, Some(or)) => or[i].len(),
            (None, None) => 0,
        };
        for j in 0..n {
            if let Some(an) = an {
                values.push(an[j].value);
            }
            if let Some(or) = &oracle_vals {
                values.push(or[i][j].value);
            }
        }
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidParams(format!("non-finite witness value {bad}")));
    }
    Ok(SweepRow {
        z,
        gamma_z: config.params.gamma_nl.norm() * z,
        values,
        norm_drift,
        truncation_deficit,
    })
}

/// Evaluates every selected witness on every grid point, in grid order.
///
/// Each oracle point is integrated independently from `z = 0`, so the output
/// does not depend on scheduling.
pub fn run_sweep(config: &SweepConfig, opts: SweepOptions) -> Result<SweepOutput> {
    let zs = config.z_values();
    let plan = match config.oracle.filter(|o| o.enabled) {
        Some(o) => {
            let mut words: Vec<OperatorWord> = config.witnesses.iter().flat_map(|w| w.words()).collect();
            words.sort();
            words.dedup();
            let mut integrator = Integrator::new(config.params);
            integrator = if o.convergence_check {
                integrator.convergence_check(true)
            } else {
                integrator.without_error_estimate()
            };
            Some(OraclePlan {
                initial: coherent_product_state(&config.input, o.cutoffs)?,
                integrator,
                words,
                max_len: config.max_word_len().max(2 * config.max_order as usize),
                steps: o.steps,
                z_max: zs.iter().cloned().fold(0.0, f64::max),
            })
        }
        None => None,
    };

    let point = |(index, &z): (usize, &f64)| {
        evaluate_point(config, plan.as_ref(), z).map_err(|e| Error::AtPoint {
            index,
            z,
            source: Box::new(e),
        })
    };
    let results: Vec<Result<SweepRow>> = match opts.threads {
        Some(n) if n > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
            pool.install(|| zs.par_iter().enumerate().map(point).collect())
        }
        _ => zs.iter().enumerate().map(point).collect(),
    };

    let mut rows = Vec::with_capacity(zs.len());
    let mut skipped = Vec::new();
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(e) if opts.policy == FailurePolicy::Skip && e.is_numeric() => {
                if let Error::AtPoint { index, z, source } = e {
                    skipped.push(SkippedPoint {
                        index,
                        z,
                        reason: source.to_string(),
                    });
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SweepOutput {
        columns: columns(config),
        rows,
        skipped,
        oracle: plan.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::parse_config;

    #[test]
    fn analytic_profile_rows() {
        let cfg = parse_config("profile=fig2\nwitness=asq:a\nwitness=hoa:a:2\nwitness=tri\n").unwrap();
        let out = run_sweep(&cfg, SweepOptions::default()).unwrap();
        assert_eq!(out.rows.len(), 200);
        assert_eq!(out.columns.len(), 2 + 1 + 7);
        assert_eq!(out.columns[0].name(), "asq_a_y1_analytic");
        let y1 = out.column("asq_a_y1_analytic").unwrap();
        let y2 = out.column("asq_a_y2_analytic").unwrap();
        assert!(y1.iter().zip(&y2).all(|(a, b)| a + b == 0.0));
        assert!(out.rows[0].values.iter().all(|&v| v == 0.0));
        assert!(out.rows.windows(2).all(|w| w[0].z < w[1].z));
    }

    #[test]
    fn oracle_columns_pair_up() {
        let cfg = parse_config(
            "profile=fig3\npoints=3\naxis_max=0.01\nwitness=hoa:a:2\nwitness=hz:b1b2:1,1\noracle=true\ncutoffs=6,6,4\n",
        )
        .unwrap();
        let out = run_sweep(&cfg, SweepOptions::default()).unwrap();
        let names: Vec<_> = out.columns.iter().map(Column::name).collect();
        assert_eq!(
            names,
            [
                "hoa_a_2_analytic",
                "hoa_a_2_oracle",
                "hz_b1b2_1_1_e_oracle",
                "hz_b1b2_1_1_ep_oracle"
            ]
        );
        assert!(out.rows.iter().all(|r| r.norm_drift.unwrap() < 1e-8));
    }

    #[test]
    fn tight_cutoffs_skip_or_fail() {
        let text = "profile=fig2\npoints=2\nwitness=hoa:a:2\noracle=true\ncutoffs=4,4,4\n";
        let cfg = parse_config(text).unwrap();
        let err = run_sweep(
            &cfg,
            SweepOptions {
                policy: FailurePolicy::FailFast,
                threads: None,
            },
        )
        .unwrap_err();
        assert!(err.is_numeric());
        // the initial state is the same for every point, so everything is skipped
        let out = run_sweep(&cfg, SweepOptions::default());
        assert!(out.is_err());
    }

    #[test]
    fn parallel_matches_sequential() {
        let cfg = parse_config(
            "profile=fig3\npoints=6\nwitness=hoa:a:3\nwitness=duan:ab1\noracle=true\ncutoffs=6,6,3\n",
        )
        .unwrap();
        let seq = run_sweep(&cfg, SweepOptions::default()).unwrap();
        let par = run_sweep(
            &cfg,
            SweepOptions {
                threads: Some(3),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(seq, par);
    }
}
