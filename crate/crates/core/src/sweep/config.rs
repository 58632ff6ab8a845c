//! Line-oriented `key=value` sweep configuration.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;

use crate::coeffs::CouplerParams;
use crate::error::{Error, Result};
use crate::fock::FockCutoffs;
use crate::witness::{CoherentInput, Mode, ModePair};

pub const DEFAULT_AXIS_MAX: f64 = 0.1;
pub const DEFAULT_POINTS: usize = 200;
/// Default ceiling on `m + n` for HZ selectors and on `n` for HOA.
pub const DEFAULT_MAX_ORDER: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Rescaled length `|Γ| z`.
    GammaZ,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub kind: Axis,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl AxisSpec {
    /// Evenly spaced propagation lengths `z`.
    pub fn z_values(&self, gamma_abs: f64) -> Vec<f64> {
        let scale = match self.kind {
            Axis::GammaZ => 1.0 / gamma_abs,
            Axis::Z => 1.0,
        };
        let n = self.points;
        (0..n)
            .map(|i| {
                let t = if i + 1 == n {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / (n - 1) as f64
                };
                t * scale
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessSelector {
    AmpSq(Mode),
    Hoa(Mode, u32),
    Hz(ModePair, u32, u32),
    Duan(ModePair),
    Tripartite,
}

impl WitnessSelector {
    /// Whether the closed-form engine covers this selector.
    pub fn has_analytic(&self) -> bool {
        !matches!(self, WitnessSelector::Hz(pair, ..) if *pair != ModePair::AB1)
    }

    /// Longest operator word needed by the moment engine.
    pub fn word_len(&self) -> usize {
        match *self {
            WitnessSelector::AmpSq(_) => 4,
            WitnessSelector::Hoa(_, n) => 2 * n as usize,
            WitnessSelector::Hz(_, m, n) => 2 * (m + n) as usize,
            WitnessSelector::Duan(_) => 2,
            WitnessSelector::Tripartite => 6,
        }
    }
}

impl FromStr for WitnessSelector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.trim().split(':').map(str::trim).collect();
        let mode = |t: &str| Mode::parse(t).ok_or_else(|| format!("unknown mode '{t}'"));
        let pair = |t: &str| ModePair::parse(t).ok_or_else(|| format!("unknown mode pair '{t}'"));
        let order = |t: &str| {
            t.parse::<u32>()
                .map_err(|_| format!("order '{t}' is not a non-negative integer"))
        };
        match parts.as_slice() {
            ["asq", m] => Ok(WitnessSelector::AmpSq(mode(m)?)),
            ["hoa", m, n] => {
                let n = order(n)?;
                if n < 2 {
                    return Err(format!("antibunching order {n} must be at least 2"));
                }
                Ok(WitnessSelector::Hoa(mode(m)?, n))
            }
            ["hz", p, orders] => {
                let (m, n) = orders
                    .split_once(',')
                    .ok_or_else(|| format!("hz orders '{orders}' must look like m,n"))?;
                let (m, n) = (order(m.trim())?, order(n.trim())?);
                if m < 1 || n < 1 {
                    return Err("hz orders must be at least 1".into());
                }
                Ok(WitnessSelector::Hz(pair(p)?, m, n))
            }
            ["duan", p] => Ok(WitnessSelector::Duan(pair(p)?)),
            ["tri"] => Ok(WitnessSelector::Tripartite),
            _ => Err(format!("unrecognised witness selector '{s}'")),
        }
    }
}

impl fmt::Display for WitnessSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessSelector::AmpSq(m) => write!(f, "asq:{m}"),
            WitnessSelector::Hoa(m, n) => write!(f, "hoa:{m}:{n}"),
            WitnessSelector::Hz(p, m, n) => write!(f, "hz:{}:{m},{n}", p.label()),
            WitnessSelector::Duan(p) => write!(f, "duan:{}", p.label()),
            WitnessSelector::Tripartite => f.write_str("tri"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSpec {
    pub enabled: bool,
    pub cutoffs: FockCutoffs,
    /// RK4 steps for the longest point; shorter points use proportionally fewer.
    pub steps: Option<usize>,
    pub convergence_check: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub params: CouplerParams,
    pub input: CoherentInput,
    pub axis: AxisSpec,
    pub witnesses: Vec<WitnessSelector>,
    pub oracle: Option<OracleSpec>,
    pub max_order: u32,
    pub out: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

impl SweepConfig {
    pub fn oracle_enabled(&self) -> bool {
        self.oracle.is_some_and(|o| o.enabled)
    }

    pub fn z_values(&self) -> Vec<f64> {
        self.axis.z_values(self.params.gamma_nl.norm())
    }

    /// Longest moment word any selected witness needs.
    pub fn max_word_len(&self) -> usize {
        self.witnesses.iter().map(|w| w.word_len()).max().unwrap_or(0)
    }
}

struct Profile {
    k: f64,
    gamma_nl: f64,
    delta_k: f64,
    amplitudes: [f64; 3],
}

fn profile(name: &str) -> Option<Profile> {
    let amplitudes = match name {
        "fig2" => [5.0, 2.0, 1.0],
        "fig3" => [0.5, 0.2, 0.1],
        _ => return None,
    };
    Some(Profile {
        k: 0.1,
        gamma_nl: 0.001,
        delta_k: 1e-4,
        amplitudes,
    })
}

/// Parses `(re,im)` or a bare real number.
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let t = s.trim();
    let bad = || format!("'{s}' is not a complex number of the form (re,im)");
    if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let (re, im) = inner.split_once(',').ok_or_else(bad)?;
        let re: f64 = re.trim().parse().map_err(|_| bad())?;
        let im: f64 = im.trim().parse().map_err(|_| bad())?;
        Ok(Complex64::new(re, im))
    } else {
        t.parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| bad())
    }
}

fn parse_bool(s: &str) -> std::result::Result<bool, String> {
    match s.trim() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(format!("'{other}' is not a boolean")),
    }
}

fn parse_cutoffs(s: &str) -> std::result::Result<FockCutoffs, String> {
    let parts: Vec<_> = s.split(',').map(|p| p.trim().parse::<usize>()).collect();
    match parts.as_slice() {
        [Ok(a), Ok(b), Ok(c)] => FockCutoffs::new(*a, *b, *c).map_err(|e| e.to_string()),
        _ => Err(format!(
            "cutoffs '{s}' must be three non-negative integers like 8,6,4"
        )),
    }
}

#[derive(Default)]
struct Raw {
    k: Option<(usize, Complex64)>,
    gamma_nl: Option<(usize, Complex64)>,
    delta_k: Option<(usize, f64)>,
    alpha: Option<Complex64>,
    beta: Option<Complex64>,
    gamma_amp: Option<Complex64>,
    axis: Option<Axis>,
    axis_min: Option<f64>,
    axis_max: Option<f64>,
    points: Option<(usize, usize)>,
    witnesses: Vec<(usize, WitnessSelector)>,
    oracle: Option<bool>,
    cutoffs: Option<FockCutoffs>,
    steps: Option<usize>,
    convergence_check: Option<bool>,
    max_order: Option<u32>,
    out: Option<PathBuf>,
    plot: Option<PathBuf>,
    report: Option<PathBuf>,
}

/// Parses with extra `key=value` lines applied after the file's own lines.
pub fn parse_config_with(text: &str, overrides: &[(&str, &str)]) -> Result<SweepConfig> {
    let mut full = text.to_string();
    if !full.is_empty() && !full.ends_with('\n') {
        full.push('\n');
    }
    for (k, v) in overrides {
        full.push_str(&format!("{k}={v}\n"));
    }
    parse_config(&full)
}

/// Parses and validates a sweep configuration.
///
/// A `profile=fig2` or `profile=fig3` line fills the published parameter sets;
/// explicit keys override it regardless of order. Oracle cutoffs default to
/// `8,6,4`.
pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let mut raw = Raw::default();
    let mut profile_name: Option<(usize, String)> = None;
    let mut last_line = 0;

    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        last_line = ln;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::config(ln, format!("expected key=value, found '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        let err = |reason: String| Error::config(ln, format!("{key}: {reason}"));
        let real = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| err(format!("'{v}' is not a finite number")))
        };
        match key {
            "profile" => {
                if profile(value).is_none() {
                    return Err(err(format!("unknown profile '{value}' (expected fig2 or fig3)")));
                }
                profile_name = Some((ln, value.to_string()));
            }
            "k" => raw.k = Some((ln, parse_complex(value).map_err(err)?)),
            "gamma_nl" => raw.gamma_nl = Some((ln, parse_complex(value).map_err(err)?)),
            "delta_k" => raw.delta_k = Some((ln, real(value)?)),
            "alpha" => raw.alpha = Some(parse_complex(value).map_err(err)?),
            "beta" => raw.beta = Some(parse_complex(value).map_err(err)?),
            "gamma_amp" => raw.gamma_amp = Some(parse_complex(value).map_err(err)?),
            "axis" => {
                raw.axis = Some(match value {
                    "gamma_z" => Axis::GammaZ,
                    "z" => Axis::Z,
                    _ => return Err(err(format!("'{value}' is not gamma_z or z"))),
                })
            }
            "axis_min" => raw.axis_min = Some(real(value)?),
            "axis_max" => raw.axis_max = Some(real(value)?),
            "points" => {
                let p = value
                    .parse::<usize>()
                    .map_err(|_| err(format!("'{value}' is not a count")))?;
                raw.points = Some((ln, p));
            }
            "witness" => raw
                .witnesses
                .push((ln, value.parse::<WitnessSelector>().map_err(err)?)),
            "oracle" => raw.oracle = Some(parse_bool(value).map_err(err)?),
            "cutoffs" => raw.cutoffs = Some(parse_cutoffs(value).map_err(err)?),
            "steps" => {
                let s = value
                    .parse::<usize>()
                    .ok()
                    .filter(|&s| s > 0)
                    .ok_or_else(|| err(format!("'{value}' is not a positive step count")))?;
                raw.steps = Some(s);
            }
            "convergence_check" => raw.convergence_check = Some(parse_bool(value).map_err(err)?),
            "max_order" => {
                raw.max_order = Some(
                    value
                        .parse::<u32>()
                        .ok()
                        .filter(|&m| m >= 2)
                        .ok_or_else(|| err(format!("'{value}' is not an order of at least 2")))?,
                )
            }
            "out" => raw.out = Some(PathBuf::from(value)),
            "plot" => raw.plot = Some(PathBuf::from(value)),
            "report" => raw.report = Some(PathBuf::from(value)),
            _ => return Err(Error::config(ln, format!("unknown key '{key}'"))),
        }
    }

    let prof = profile_name.as_ref().and_then(|(_, n)| profile(n));
    let end = last_line + 1;
    let missing = |key: &str| Error::config(end, format!("missing required key '{key}'"));

    let (k_line, k) = match (raw.k, &prof) {
        (Some(v), _) => v,
        (None, Some(p)) => (end, Complex64::new(p.k, 0.0)),
        (None, None) => return Err(missing("k")),
    };
    let (g_line, gamma_nl) = match (raw.gamma_nl, &prof) {
        (Some(v), _) => v,
        (None, Some(p)) => (end, Complex64::new(p.gamma_nl, 0.0)),
        (None, None) => return Err(missing("gamma_nl")),
    };
    let (dk_line, delta_k) = match (raw.delta_k, &prof) {
        (Some(v), _) => v,
        (None, Some(p)) => (end, p.delta_k),
        (None, None) => return Err(missing("delta_k")),
    };
    let amp = |v: Option<Complex64>, i: usize, key: &str| -> Result<Complex64> {
        match (v, &prof) {
            (Some(v), _) => Ok(v),
            (None, Some(p)) => Ok(Complex64::new(p.amplitudes[i], 0.0)),
            (None, None) => Err(missing(key)),
        }
    };
    let input = CoherentInput::new(
        amp(raw.alpha, 0, "alpha")?,
        amp(raw.beta, 1, "beta")?,
        amp(raw.gamma_amp, 2, "gamma_amp")?,
    );

    let params = CouplerParams::new(k, gamma_nl, delta_k).map_err(|e| {
        let line = if k.norm() == 0.0 {
            k_line
        } else {
            g_line.max(dk_line)
        };
        Error::config(line, e.to_string())
    })?;
    params
        .check_guard_bands()
        .map_err(|e| Error::config(dk_line, format!("delta_k: {e}")))?;

    let kind = raw.axis.unwrap_or(Axis::GammaZ);
    let (points_line, points) = raw.points.unwrap_or((end, DEFAULT_POINTS));
    let axis = AxisSpec {
        kind,
        min: raw.axis_min.unwrap_or(0.0),
        max: raw.axis_max.unwrap_or(DEFAULT_AXIS_MAX),
        points,
    };
    if axis.points < 2 {
        return Err(Error::config(
            points_line,
            "points: at least 2 grid points are required",
        ));
    }
    if axis.min.is_nan() || axis.max.is_nan() || axis.min >= axis.max {
        return Err(Error::config(end, "axis_min must be smaller than axis_max"));
    }
    if axis.min < 0.0 {
        return Err(Error::config(
            end,
            "axis_min: propagation length cannot be negative",
        ));
    }
    if kind == Axis::GammaZ && gamma_nl.norm() == 0.0 {
        return Err(Error::config(
            g_line,
            "gamma_nl: axis=gamma_z needs a non-zero nonlinear coupling",
        ));
    }

    if raw.witnesses.is_empty() {
        return Err(Error::config(end, "no witness selected (add witness=... lines)"));
    }
    let max_order = raw.max_order.unwrap_or(DEFAULT_MAX_ORDER);
    let oracle_on = raw.oracle.unwrap_or(false);
    let mut witnesses = Vec::new();
    for (ln, w) in raw.witnesses {
        let too_high = match w {
            WitnessSelector::Hoa(_, n) => n > max_order,
            WitnessSelector::Hz(_, m, n) => m + n > max_order,
            _ => false,
        };
        if too_high {
            return Err(Error::config(
                ln,
                format!("witness: {w} exceeds max_order={max_order}"),
            ));
        }
        if !w.has_analytic() && !oracle_on {
            return Err(Error::config(
                ln,
                format!("witness: {w} has no closed form; enable oracle=true"),
            ));
        }
        if !witnesses.contains(&w) {
            witnesses.push(w);
        }
    }

    let oracle = if raw.oracle.is_some() || raw.cutoffs.is_some() || raw.steps.is_some() {
        let cutoffs = match raw.cutoffs {
            Some(c) => c,
            None => FockCutoffs::new(8, 6, 4)?,
        };
        Some(OracleSpec {
            enabled: oracle_on,
            cutoffs,
            steps: raw.steps,
            convergence_check: raw.convergence_check.unwrap_or(false),
        })
    } else {
        None
    };

    Ok(SweepConfig {
        params,
        input,
        axis,
        witnesses,
        oracle,
        max_order,
        out: raw.out,
        plot: raw.plot,
        report: raw.report,
    })
}
