//! Fixed-step RK4 integration of `i dψ/dz = -G(z) ψ`.
//!
//! The sign is fixed by the linear-coupler limit: with `Γ = 0` the mode
//! amplitudes follow `a(z) = cos(|k|z) a - i (k*/|k|) sin(|k|z) b1`.

use num_complex::Complex64;

use super::generator::Generator;
use super::state::StateVector;
use crate::coeffs::CouplerParams;
use crate::error::{Error, Result};

/// Largest step of the fast `|k| z` oscillation per RK4 step.
pub const DEFAULT_PHASE_PER_STEP: f64 = 1e-2;

/// Largest amplitude change tolerated when the step count is doubled.
pub const STEP_TOLERANCE: f64 = 1e-6;

/// Step count for a span of propagation length so that `|k| Δz <= 1e-2`.
pub fn default_steps(params: &CouplerParams, span: f64) -> usize {
    let mut rate = params.k.norm();
    if rate == 0.0 {
        rate = params.gamma_nl.norm().max(params.delta_k.abs());
    }
    if rate == 0.0 || span <= 0.0 {
        return 1;
    }
    ((rate * span / DEFAULT_PHASE_PER_STEP).ceil() as usize).max(1)
}

/// Result of one integration call.
#[derive(Debug, Clone)]
pub struct Evolution {
    /// Renormalized final state.
    pub state: StateVector,
    /// `|‖ψ‖ - 1|` before the final renormalization.
    pub norm_drift: f64,
    /// Largest amplitude difference against a run with twice the steps.
    pub step_error: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Integrator {
    params: CouplerParams,
    steps: Option<usize>,
    estimate_error: bool,
    convergence_check: bool,
}

impl Integrator {
    pub fn new(params: CouplerParams) -> Self {
        Self {
            params,
            steps: None,
            estimate_error: true,
            convergence_check: false,
        }
    }

    /// Fixed step count; by default it follows [`default_steps`].
    pub fn steps(mut self, steps: usize) -> Self {
        self.steps = Some(steps.max(1));
        self
    }

    /// Fail with [`Error::StepTooCoarse`] when doubling the steps moves any
    /// amplitude by more than [`STEP_TOLERANCE`].
    pub fn convergence_check(mut self, on: bool) -> Self {
        self.convergence_check = on;
        if on {
            self.estimate_error = true;
        }
        self
    }

    /// Skip the step-doubling estimate (a third of the cost).
    pub fn without_error_estimate(mut self) -> Self {
        self.estimate_error = false;
        self.convergence_check = false;
        self
    }

    pub fn evolve(&self, state: &StateVector, z_start: f64, z_end: f64) -> Result<Evolution> {
        if !z_start.is_finite() || !z_end.is_finite() || z_end < z_start {
            return Err(Error::InvalidParams(format!(
                "integration span [{z_start}, {z_end}] is not a forward interval"
            )));
        }
        if z_end == z_start {
            return Ok(Evolution {
                state: state.clone(),
                norm_drift: 0.0,
                step_error: self.estimate_error.then_some(0.0),
            });
        }
        let steps = self
            .steps
            .unwrap_or_else(|| default_steps(&self.params, z_end - z_start));
        let gen = Generator::new(self.params, state.cutoffs());

        let mut coarse = state.clone();
        propagate(&gen, coarse.amplitudes_mut(), z_start, z_end, steps);

        let step_error = if self.estimate_error {
            let mut fine = state.clone();
            propagate(&gen, fine.amplitudes_mut(), z_start, z_end, 2 * steps);
            let diff = coarse
                .amplitudes()
                .iter()
                .zip(fine.amplitudes())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            Some(diff)
        } else {
            None
        };
        if self.convergence_check {
            if let Some(max_change) = step_error.filter(|&e| e > STEP_TOLERANCE) {
                return Err(Error::StepTooCoarse { max_change });
            }
        }

        let norm = coarse.renormalize();
        Ok(Evolution {
            state: coarse,
            norm_drift: (norm - 1.0).abs(),
            step_error,
        })
    }
}

/// Integrates from `z = 0` to `z_final` with `steps` RK4 steps and reports the
/// step-doubling error estimate without enforcing it.
pub fn evolve(state: &StateVector, params: &CouplerParams, z_final: f64, steps: usize) -> Result<Evolution> {
    Integrator::new(*params).steps(steps).evolve(state, 0.0, z_final)
}

/// Bare RK4 on raw amplitudes, without renormalization.
pub fn propagate(gen: &Generator, psi: &mut [Complex64], z_start: f64, z_end: f64, steps: usize) {
    let n = psi.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut k1 = vec![zero; n];
    let mut k2 = vec![zero; n];
    let mut k3 = vec![zero; n];
    let mut k4 = vec![zero; n];
    let mut tmp = vec![zero; n];
    let steps = steps.max(1);
    let h = (z_end - z_start) / steps as f64;
    let i = Complex64::new(0.0, 1.0);

    for s in 0..steps {
        let z = z_start + s as f64 * h;
        gen.apply_into(z, i, psi, &mut k1);
        axpy(&mut tmp, psi, 0.5 * h, &k1);
        gen.apply_into(z + 0.5 * h, i, &tmp, &mut k2);
        axpy(&mut tmp, psi, 0.5 * h, &k2);
        gen.apply_into(z + 0.5 * h, i, &tmp, &mut k3);
        axpy(&mut tmp, psi, h, &k3);
        gen.apply_into(z + h, i, &tmp, &mut k4);
        let w = h / 6.0;
        for j in 0..n {
            psi[j] += w * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j]);
        }
    }
}

#[inline]
fn axpy(out: &mut [Complex64], x: &[Complex64], a: f64, y: &[Complex64]) {
    for ((o, xv), yv) in out.iter_mut().zip(x).zip(y) {
        *o = xv + a * yv;
    }
}
