//! First-order (in the nonlinear coupling) solution of the spatial Heisenberg
//! equations for the coupler modes `a`, `b1`, `b2`:
//!
//! ```text
//! a(z)  = f1 a + f2 b1 + f3 b1† b2 + f4 a† b2
//! b1(z) = g1 a + g2 b1 + g3 b1† b2 + g4 a† b2
//! b2(z) = h1 b2 + h2 b1² + h3 b1 a + h4 a²
//! ```
//!
//! with all operators on the right evaluated at `z = 0`.

use num_complex::Complex64;

use crate::error::{Error, GuardBand, Result};

/// Relative width of the excluded bands around `delta_k = 0` and
/// `|delta_k| = 2|k|`.
pub const GUARD_EPS: f64 = 1e-9;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Physical constants of the coupler, in units of inverse length (hbar = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplerParams {
    /// Linear (evanescent) coupling between `a` and `b1`.
    pub k: Complex64,
    /// Second-harmonic coupling `b1 b1 <-> b2`.
    pub gamma_nl: Complex64,
    /// Phase mismatch between fundamental and second harmonic.
    pub delta_k: f64,
}

impl CouplerParams {
    pub fn new(k: Complex64, gamma_nl: Complex64, delta_k: f64) -> Result<Self> {
        let finite = |c: Complex64| c.re.is_finite() && c.im.is_finite();
        if !finite(k) || !finite(gamma_nl) || !delta_k.is_finite() {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        if k.norm() == 0.0 {
            return Err(Error::InvalidParams("linear coupling k must be non-zero".into()));
        }
        Ok(Self { k, gamma_nl, delta_k })
    }

    /// Real-valued couplings, as used throughout the published figures.
    pub fn real(k: f64, gamma_nl: f64, delta_k: f64) -> Result<Self> {
        Self::new(Complex64::new(k, 0.0), Complex64::new(gamma_nl, 0.0), delta_k)
    }

    /// `|gamma_nl| < |k|`. Outside this regime the first-order coefficients are
    /// still evaluated but should not be trusted.
    pub fn is_perturbative(&self) -> bool {
        self.gamma_nl.norm() < self.k.norm()
    }

    pub fn with_gamma_nl(self, gamma_nl: Complex64) -> Self {
        Self { gamma_nl, ..self }
    }

    /// Rejects mismatch values where the closed-form denominators `delta_k`
    /// or `4|k|^2 - delta_k^2` are numerically unusable.
    pub fn check_guard_bands(&self) -> Result<()> {
        let k_abs = self.k.norm();
        if k_abs == 0.0 || !k_abs.is_finite() {
            return Err(Error::InvalidParams("linear coupling k must be non-zero".into()));
        }
        let band = GUARD_EPS * k_abs;
        let dk = self.delta_k.abs();
        let hit = if dk <= band {
            Some(GuardBand::ZeroMismatch)
        } else if (dk - 2.0 * k_abs).abs() <= band {
            Some(GuardBand::DoubleCoupling)
        } else {
            None
        };
        match hit {
            Some(band) => Err(Error::GuardBand {
                delta_k: self.delta_k,
                k_abs,
                band,
            }),
            None => Ok(()),
        }
    }
}

/// `G± = 1 ± exp(-i delta_k z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MismatchFactors {
    pub g_plus: Complex64,
    pub g_minus: Complex64,
    pub z: f64,
}

/// `1 - exp(-i theta)` without cancellation for small `theta`.
pub fn one_minus_exp_neg_i(theta: f64) -> Complex64 {
    let half = 0.5 * theta;
    let s = half.sin();
    Complex64::new(2.0 * s * s, theta.sin())
}

pub fn mismatch_factors(params: &CouplerParams, z: f64) -> MismatchFactors {
    let g_minus = one_minus_exp_neg_i(params.delta_k * z);
    MismatchFactors {
        g_plus: Complex64::new(2.0, 0.0) - g_minus,
        g_minus,
        z,
    }
}

/// The twelve evolution coefficients at propagation length `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionCoefficients {
    pub f1: Complex64,
    pub f2: Complex64,
    pub f3: Complex64,
    pub f4: Complex64,
    pub g1: Complex64,
    pub g2: Complex64,
    pub g3: Complex64,
    pub g4: Complex64,
    pub h1: Complex64,
    pub h2: Complex64,
    pub h3: Complex64,
    pub h4: Complex64,
    pub z: f64,
}

impl EvolutionCoefficients {
    /// Coefficients of the identity map (no propagation).
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            f1: one,
            f2: zero,
            f3: zero,
            f4: zero,
            g1: zero,
            g2: one,
            g3: zero,
            g4: zero,
            h1: one,
            h2: zero,
            h3: zero,
            h4: zero,
            z: 0.0,
        }
    }

    /// Coherent amplitude carried by mode `a` through the linear part: `f1 α + f2 β`.
    pub fn a_linear(&self, alpha: Complex64, beta: Complex64) -> Complex64 {
        self.f1 * alpha + self.f2 * beta
    }

    /// `g1 α + g2 β`.
    pub fn b1_linear(&self, alpha: Complex64, beta: Complex64) -> Complex64 {
        self.g1 * alpha + self.g2 * beta
    }

    /// Largest violation of unitarity of the linear block `[[f1, f2], [g1, g2]]`.
    pub fn unitarity_defect(&self) -> f64 {
        let row_a = self.f1.norm_sqr() + self.f2.norm_sqr() - 1.0;
        let row_b = self.g1.norm_sqr() + self.g2.norm_sqr() - 1.0;
        let cross = self.f1 * self.g1.conj() + self.f2 * self.g2.conj();
        row_a.abs().max(row_b.abs()).max(cross.norm())
    }

    /// The first-order coefficients in a fixed order, for tabulation.
    pub fn nonlinear(&self) -> [Complex64; 7] {
        [self.f3, self.f4, self.g3, self.g4, self.h2, self.h3, self.h4]
    }
}

pub fn evolution_coefficients(params: &CouplerParams, z: f64) -> Result<EvolutionCoefficients> {
    params.check_guard_bands()?;
    if !z.is_finite() || z < 0.0 {
        return Err(Error::InvalidParams(format!(
            "propagation length z = {z} must be >= 0"
        )));
    }
    let k = params.k;
    let kc = k.conj();
    let gam = params.gamma_nl;
    let gc = gam.conj();
    let ak = k.norm();
    let ak2 = ak * ak;
    let dk = params.delta_k;
    let denom = 4.0 * ak2 - dk * dk;
    let one = Complex64::new(1.0, 0.0);

    let MismatchFactors { g_plus, g_minus, .. } = mismatch_factors(params, z);

    let (s1, c1) = (ak * z).sin_cos();
    let f1 = Complex64::new(c1, 0.0);
    let f2 = -I * kc / ak * s1;
    let g1 = -f2.conj();
    let g2 = f1;

    let f3 = 2.0 * kc * gc / denom * (g_minus * f1 + f2 / kc * (dk - 2.0 * ak2 / dk * g_minus));
    let f4 = 4.0 * kc * kc * gc / (dk * denom) * g_minus * f1 + 2.0 * kc * gc / denom * g_plus * f2;
    let g3 =
        2.0 * gc * k / denom * g_plus * f2 - 2.0 * gc * (2.0 * ak2 - dk * dk) * f1 / (dk * denom) * g_minus;
    let g4 = 4.0 * gc * ak2 / (dk * denom) * f2
        - 2.0 * gc * (2.0 * ak2 - dk * dk) / (dk * denom) * (g_plus - one) * f2
        + 2.0 * kc * gc / denom * g_minus * f1;

    let (s2, c2) = (2.0 * ak * z).sin_cos();
    let gpc1 = g_plus.conj() - one;
    let gmc = g_minus.conj();
    // Shared bracket of h2 and h4.
    let osc = 2.0 * ak * gpc1 * s2 - I * dk * (one - gpc1 * c2);
    let h2 = gam * gmc / (2.0 * dk) - I * gam / (2.0 * denom) * osc;
    let h3 = -gam * ak / (kc * denom) * (I * dk * gpc1 * s2 + 2.0 * ak * (one - gpc1 * c2));
    let kc2 = kc * kc;
    let h4 = -gam * ak2 * gmc / (2.0 * kc2 * dk) - I * gam * ak2 / (2.0 * kc2 * denom) * osc;

    Ok(EvolutionCoefficients {
        f1,
        f2,
        f3,
        f4,
        g1,
        g2,
        g3,
        g4,
        h1: one,
        h2,
        h3,
        h4,
        z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reference_params() -> CouplerParams {
        CouplerParams::real(0.1, 0.001, 1e-4).unwrap()
    }

    #[test]
    fn mismatch_trivial_points() {
        let p = CouplerParams::real(0.1, 0.001, 0.0).unwrap();
        let m = mismatch_factors(&p, 37.0);
        assert_eq!(m.g_plus, c(2.0, 0.0));
        assert_eq!(m.g_minus, c(0.0, 0.0));

        let p = CouplerParams::real(0.1, 0.001, 1.0).unwrap();
        let m = mismatch_factors(&p, std::f64::consts::PI);
        assert!((m.g_minus - c(2.0, 0.0)).norm() < 1e-15);
        assert!(m.g_plus.norm() < 1e-15);
    }

    /// Taylor series of 1 - cos and sin, summed smallest term first.
    fn series_one_minus_exp(theta: f64) -> Complex64 {
        let mut re_terms = Vec::new();
        let mut im_terms = Vec::new();
        let mut term = 1.0;
        for n in 1..40 {
            term *= theta / n as f64;
            match n % 4 {
                1 => im_terms.push(term),
                2 => re_terms.push(term),
                3 => im_terms.push(-term),
                _ => re_terms.push(-term),
            }
        }
        let re: f64 = re_terms.iter().rev().sum();
        let im: f64 = im_terms.iter().rev().sum();
        c(re, im)
    }

    #[test]
    fn mismatch_small_phase_matches_series() {
        let m = mismatch_factors(&reference_params(), 100.0);
        let reference = series_one_minus_exp(0.01);
        assert!((m.g_minus.re - reference.re).abs() <= 1e-16 * reference.re.abs() * 4.0);
        assert!((m.g_minus.im - reference.im).abs() <= 1e-16 * reference.im.abs() * 4.0);
        assert!((m.g_minus.re - 4.99995833e-5).abs() < 1e-12);
        assert!((m.g_minus.im - 9.99983333e-3).abs() < 1e-11);

        // the naive form loses most digits of the real part here
        for theta in [1e-3, 1e-5, 1e-7] {
            let stable = one_minus_exp_neg_i(theta);
            let reference = series_one_minus_exp(theta);
            assert!((stable.re / reference.re - 1.0).abs() < 1e-14, "theta={theta}");
        }
    }

    #[test]
    fn mismatch_sum_and_bounds() {
        let p = CouplerParams::real(0.1, 0.001, 0.37).unwrap();
        for i in 0..200 {
            let m = mismatch_factors(&p, i as f64 * 0.731);
            let sum = m.g_plus + m.g_minus;
            assert!((sum - c(2.0, 0.0)).norm() <= 4.0 * f64::EPSILON);
            assert!(m.g_plus.norm() <= 2.0 + 1e-15 && m.g_minus.norm() <= 2.0 + 1e-15);
        }
    }

    #[test]
    fn zero_length_is_identity() {
        let co = evolution_coefficients(&reference_params(), 0.0).unwrap();
        let id = EvolutionCoefficients::identity();
        for (got, want) in [
            (co.f1, id.f1),
            (co.f2, id.f2),
            (co.g1, id.g1),
            (co.g2, id.g2),
            (co.h1, id.h1),
        ] {
            assert!((got - want).norm() < 1e-15);
        }
        for v in co.nonlinear() {
            assert!(v.norm() < 1e-15, "{v}");
        }
    }

    #[test]
    fn linear_coupler_limit() {
        let p = CouplerParams::real(0.1, 0.0, 1e-4).unwrap();
        let co = evolution_coefficients(&p, 5.0).unwrap();
        assert!((co.f1 - c(0.5f64.cos(), 0.0)).norm() < 1e-15);
        assert!((co.f2 - c(0.0, -0.5f64.sin())).norm() < 1e-15);
        assert!((co.g1 - c(0.0, -0.5f64.sin())).norm() < 1e-15);
        assert_eq!(co.g2, co.f1);
        for v in co.nonlinear() {
            assert_eq!(v.norm(), 0.0);
        }
    }

    #[test]
    fn structural_identities() {
        let p = CouplerParams::new(c(0.08, -0.06), c(0.0007, 0.0004), 3e-3).unwrap();
        for i in 0..=120 {
            let co = evolution_coefficients(&p, i as f64 * 1.7).unwrap();
            assert!(co.unitarity_defect() < 1e-12);
            assert!((co.f1.norm_sqr() + co.f2.norm_sqr() - 1.0).abs() < 1e-12);
            assert_eq!(co.f2, -co.g1.conj());
            assert_eq!(co.f1, co.g2);
            assert_eq!(co.h1, c(1.0, 0.0));
        }
    }

    #[test]
    fn nonlinear_coefficients_are_linear_in_gamma() {
        let p = CouplerParams::new(c(0.1, 0.02), c(0.001, -0.0003), 1e-4).unwrap();
        let q = p.with_gamma_nl(p.gamma_nl * 2.0);
        for z in [0.5, 10.0, 55.0, 100.0] {
            let a = evolution_coefficients(&p, z).unwrap();
            let b = evolution_coefficients(&q, z).unwrap();
            for (x, y) in a.nonlinear().iter().zip(b.nonlinear()) {
                assert!((y - 2.0 * x).norm() <= 1e-12 * x.norm().max(1e-300));
            }
            assert_eq!(a.f1, b.f1);
            assert_eq!(a.f2, b.f2);
        }
    }

    #[test]
    fn guard_bands_rejected() {
        let k = 0.1;
        for dk in [0.0, 1e-12, -1e-12, 0.2, -0.2, 0.2 + 1e-12] {
            let p = CouplerParams::real(k, 0.001, dk).unwrap();
            match evolution_coefficients(&p, 1.0) {
                Err(Error::GuardBand { .. }) => {}
                other => panic!("dk={dk}: {other:?}"),
            }
        }
        let p = CouplerParams::real(k, 0.001, 2e-9 * k + 0.2).unwrap();
        assert!(evolution_coefficients(&p, 1.0).is_ok());
    }

    #[test]
    fn continuity_towards_guard_bands() {
        let k = 0.1;
        let z = 10.0;
        for (centre, sign) in [(0.0, 1.0), (0.0, -1.0), (2.0 * k, 1.0), (2.0 * k, -1.0)] {
            let values: Vec<_> = (2..=7)
                .map(|e| {
                    let dk = centre + sign * k * 10f64.powi(-e);
                    let p = CouplerParams::real(k, 0.001, dk).unwrap();
                    evolution_coefficients(&p, z).unwrap().nonlinear()
                })
                .collect();
            for w in values.windows(2).skip(3) {
                for (x, y) in w[0].iter().zip(w[1].iter()) {
                    assert!((x - y).norm() < 1e-6, "centre={centre} sign={sign}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(CouplerParams::real(0.0, 0.001, 1e-4).is_err());
        assert!(CouplerParams::real(f64::NAN, 0.001, 1e-4).is_err());
        assert!(evolution_coefficients(&reference_params(), -1.0).is_err());
        assert!(reference_params().is_perturbative());
        assert!(!CouplerParams::real(0.1, 0.2, 1e-4).unwrap().is_perturbative());
    }
}
