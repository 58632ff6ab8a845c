//! Closed-form witnesses for a coherent product input `|α⟩|β⟩|γ⟩`, accurate to
//! first order in the nonlinear coupling.
//!
//! Every nonvanishing expression here carries exactly one factor of `γ` or
//! `γ*`: with a vacuum second-harmonic input all witnesses are zero at this
//! order.

use num_complex::Complex64;

use crate::coeffs::EvolutionCoefficients;
use crate::error::{Error, Result};
use crate::witness::{Bipartition, CoherentInput, Mode, ModePair, WitnessKind, WitnessValue};

/// The four coefficients of one of the `a`/`b1` expansions.
struct Row {
    c1: Complex64,
    c2: Complex64,
    c3: Complex64,
    c4: Complex64,
}

fn row(co: &EvolutionCoefficients, mode: Mode) -> Option<Row> {
    match mode {
        Mode::A => Some(Row {
            c1: co.f1,
            c2: co.f2,
            c3: co.f3,
            c4: co.f4,
        }),
        Mode::B1 => Some(Row {
            c1: co.g1,
            c2: co.g2,
            c3: co.g3,
            c4: co.g4,
        }),
        Mode::B2 => None,
    }
}

fn linear_number(r: &Row, input: &CoherentInput) -> f64 {
    let (a, b, g) = (input.alpha, input.beta, input.gamma_amp);
    let (ac, bc) = (a.conj(), b.conj());
    let cross = r.c1.conj() * r.c2 * ac * b
        + r.c1.conj() * r.c3 * ac * bc * g
        + r.c1.conj() * r.c4 * ac * ac * g
        + r.c2.conj() * r.c3 * bc * bc * g
        + r.c2.conj() * r.c4 * bc * ac * g;
    r.c1.norm_sqr() * a.norm_sqr() + r.c2.norm_sqr() * b.norm_sqr() + 2.0 * cross.re
}

/// `(⟨N_a⟩, ⟨N_b1⟩, ⟨N_b2⟩)` at the length the coefficients were evaluated for.
pub fn mean_photon_numbers(co: &EvolutionCoefficients, input: &CoherentInput) -> (f64, f64, f64) {
    let n_a = linear_number(&row(co, Mode::A).unwrap(), input);
    let n_b1 = linear_number(&row(co, Mode::B1).unwrap(), input);
    let (a, b, g) = (input.alpha, input.beta, input.gamma_amp);
    let gc = g.conj();
    let n_b2 = g.norm_sqr() + 2.0 * (co.h2 * gc * b * b + co.h3 * gc * b * a + co.h4 * gc * a * a).re;
    (n_a, n_b1, n_b2)
}

/// Amplitude-squared squeezing `(A1, A2)` of one mode; `A1 = -A2`.
///
/// The cross term of the squared linear amplitude enters with weight
/// `2 f1 f2 αβ`, i.e. the bracket is `(f1 α + f2 β)^2 γ`.
pub fn amp_squared_squeezing(
    co: &EvolutionCoefficients,
    input: &CoherentInput,
    mode: Mode,
) -> (WitnessValue, WitnessValue) {
    let x = match row(co, mode) {
        Some(r) => {
            let lin = r.c1 * input.alpha + r.c2 * input.beta;
            2.0 * ((r.c1 * r.c4 + r.c2 * r.c3) * lin * lin * input.gamma_amp).re
        }
        None => 0.0,
    };
    (
        WitnessValue::new(WitnessKind::AmpSqSqueezingY1, vec![mode], vec![], x),
        WitnessValue::new(WitnessKind::AmpSqSqueezingY2, vec![mode], vec![], -x),
    )
}

/// Higher-order antibunching `D(n) = ⟨x†ⁿxⁿ⟩ - ⟨x†x⟩ⁿ` with `n` the moment order.
pub fn hoa(co: &EvolutionCoefficients, input: &CoherentInput, mode: Mode, n: u32) -> Result<WitnessValue> {
    if n < 2 {
        return Err(Error::InvalidOrder { order: n, min: 2 });
    }
    let value = match row(co, mode) {
        Some(r) => {
            let lin = r.c1 * input.alpha + r.c2 * input.beta;
            let binom = f64::from(n) * f64::from(n - 1) / 2.0;
            let bracket = lin * lin * (r.c2 * r.c3 + r.c1 * r.c4).conj() * input.gamma_amp.conj();
            binom * lin.norm_sqr().powi(n as i32 - 2) * 2.0 * bracket.re
        }
        None => 0.0,
    };
    Ok(WitnessValue::new(WitnessKind::Hoa, vec![mode], vec![n], value))
}

/// Lowest-order HZ-I value `⟨N_a N_b1⟩ - |⟨a b1†⟩|²` for the pair `(a, b1)`.
pub fn hz1_ab1(co: &EvolutionCoefficients, input: &CoherentInput) -> f64 {
    // the imaginary part cancels identically
    hz1_ab1_sum(co, input).re
}

fn hz1_ab1_sum(co: &EvolutionCoefficients, input: &CoherentInput) -> Complex64 {
    let (f1, f2, f3, f4) = (co.f1, co.f2, co.f3, co.f4);
    let (g1, g2, g3, g4) = (co.g1, co.g2, co.g3, co.g4);
    let (a, b, g) = (input.alpha, input.beta, input.gamma_amp);
    let (ac, bc, gc) = (a.conj(), b.conj(), g.conj());
    (g1.norm_sqr() * f4.conj() * f1 + f3.conj() * f1 * g2.conj() * g1) * a * a * gc
        + (f1.norm_sqr() * g1.conj() * g4 + f1.conj() * f2 * g1.conj() * g3) * ac * ac * g
        + (g2.norm_sqr() * f3.conj() * f2 + f4.conj() * f2 * g1.conj() * g2) * b * b * gc
        + (f2.norm_sqr() * g2.conj() * g3 + f2.conj() * f1 * g2.conj() * g4) * bc * bc * g
        + (g1.norm_sqr() - g2.norm_sqr())
            * ((f4.conj() * f2 - f3.conj() * f1) * a * b * gc
                - (g2.conj() * g4 - g1.conj() * g3) * ac * bc * g)
}

/// Higher-order HZ pair `(E^{m,n}, E'^{m,n})` for modes `(a, b1)`, with
/// `E'^{m,n} = -E^{m,n}` at this order.
pub fn hz_pair(
    co: &EvolutionCoefficients,
    input: &CoherentInput,
    m: u32,
    n: u32,
) -> Result<(WitnessValue, WitnessValue)> {
    for order in [m, n] {
        if order < 1 {
            return Err(Error::InvalidOrder { order, min: 1 });
        }
    }
    let xa = co.a_linear(input.alpha, input.beta).norm_sqr();
    let xb = co.b1_linear(input.alpha, input.beta).norm_sqr();
    let scale = f64::from(m) * f64::from(n) * xa.powi(m as i32 - 1) * xb.powi(n as i32 - 1);
    let e = scale * hz1_ab1(co, input);
    let modes = vec![Mode::A, Mode::B1];
    Ok((
        WitnessValue::new(WitnessKind::HzI, modes.clone(), vec![m, n], e),
        WitnessValue::new(WitnessKind::HzII, modes, vec![m, n], -e),
    ))
}

/// Duan's two-mode criterion. Zero for every pair at first order.
pub fn duan_pair(_co: &EvolutionCoefficients, _input: &CoherentInput, pair: ModePair) -> WitnessValue {
    let (x, y) = pair.modes();
    WitnessValue::new(WitnessKind::Duan, vec![x, y], vec![], 0.0)
}

/// Three-mode witnesses at `m = n = l = 1` for all three bipartitions, plus
/// the full-separability test, in a fixed order.
pub fn tripartite(co: &EvolutionCoefficients, input: &CoherentInput) -> Vec<WitnessValue> {
    let e = input.gamma_amp.norm_sqr() * hz1_ab1(co, input);
    let mut out = Vec::with_capacity(7);
    for split in Bipartition::ALL {
        let v = match split {
            Bipartition::AB1vsB2 => 0.0,
            Bipartition::AvsB1B2 | Bipartition::B1vsAB2 => e,
        };
        out.push(WitnessValue::tripartite(WitnessKind::TriE, Some(split), v));
        out.push(WitnessValue::tripartite(WitnessKind::TriEPrime, Some(split), -v));
    }
    out.push(WitnessValue::tripartite(WitnessKind::FullSepTest, None, -e));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{evolution_coefficients, CouplerParams};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn setup(z: f64) -> (EvolutionCoefficients, CoherentInput) {
        let p = CouplerParams::new(c(0.1, 0.03), c(0.001, -0.0004), 1e-4).unwrap();
        let input = CoherentInput::new(c(0.7, 0.2), c(-0.3, 0.4), c(0.25, -0.1));
        (evolution_coefficients(&p, z).unwrap(), input)
    }

    #[test]
    fn identity_evolution() {
        let co = EvolutionCoefficients::identity();
        let input = CoherentInput::real(5.0, 2.0, 1.0);
        let (na, nb, nc) = mean_photon_numbers(&co, &input);
        assert_eq!((na, nb, nc), (25.0, 4.0, 1.0));
        assert_eq!(hz1_ab1(&co, &input), 0.0);
        for w in tripartite(&co, &input) {
            assert_eq!(w.value, 0.0);
        }
    }

    #[test]
    fn beam_splitter_numbers() {
        let p = CouplerParams::real(0.1, 0.0, 1e-4).unwrap();
        let z = 13.0;
        let co = evolution_coefficients(&p, z).unwrap();
        let input = CoherentInput::real(0.5, 0.2, 0.3);
        let (na, nb, nc) = mean_photon_numbers(&co, &input);
        let (s, cs) = (0.1 * z).sin_cos();
        let xa = c(cs * 0.5, -s * 0.2);
        let xb = c(cs * 0.2, -s * 0.5);
        assert!((na - xa.norm_sqr()).abs() < 1e-15);
        assert!((nb - xb.norm_sqr()).abs() < 1e-15);
        assert!((nc - 0.09).abs() < 1e-15);
    }

    #[test]
    fn b2_has_no_first_order_signal() {
        let (co, input) = setup(40.0);
        let (a1, a2) = amp_squared_squeezing(&co, &input, Mode::B2);
        assert_eq!((a1.value, a2.value), (0.0, 0.0));
        for n in 2..6 {
            assert_eq!(hoa(&co, &input, Mode::B2, n).unwrap().value, 0.0);
        }
    }

    #[test]
    fn spontaneous_input_gives_zero() {
        let (co, mut input) = setup(40.0);
        input.gamma_amp = c(0.0, 0.0);
        for mode in Mode::ALL {
            let (a1, a2) = amp_squared_squeezing(&co, &input, mode);
            assert_eq!(a1.value, 0.0);
            assert_eq!(a2.value, 0.0);
            assert_eq!(hoa(&co, &input, mode, 3).unwrap().value, 0.0);
        }
        let (e, ep) = hz_pair(&co, &input, 2, 1).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(ep.value, 0.0);
        assert!(tripartite(&co, &input).iter().all(|w| w.value == 0.0));
    }

    #[test]
    fn sign_pairings() {
        for z in [3.0, 17.0, 64.0] {
            let (co, input) = setup(z);
            for mode in [Mode::A, Mode::B1] {
                let (a1, a2) = amp_squared_squeezing(&co, &input, mode);
                assert_eq!(a1.value + a2.value, 0.0);
                assert_ne!(a1.value, 0.0);
            }
            let (e, ep) = hz_pair(&co, &input, 1, 2).unwrap();
            assert_eq!(e.value + ep.value, 0.0);
            let tri = tripartite(&co, &input);
            assert_eq!(tri[2].value + tri[3].value, 0.0);
            assert_eq!(tri[6].value, -tri[2].value);
        }
    }

    #[test]
    fn hoa_order_ratio() {
        let (co, input) = setup(22.0);
        let d2 = hoa(&co, &input, Mode::A, 2).unwrap().value;
        let d3 = hoa(&co, &input, Mode::A, 3).unwrap().value;
        let x = co.a_linear(input.alpha, input.beta).norm_sqr();
        assert!(d2 != 0.0);
        assert!((d3 / d2 - 3.0 * x).abs() < 1e-12 * (3.0 * x));
    }

    #[test]
    fn invalid_orders() {
        let (co, input) = setup(1.0);
        assert!(matches!(
            hoa(&co, &input, Mode::A, 1),
            Err(Error::InvalidOrder { .. })
        ));
        assert!(matches!(
            hz_pair(&co, &input, 0, 1),
            Err(Error::InvalidOrder { .. })
        ));
        assert!(matches!(
            hz_pair(&co, &input, 1, 0),
            Err(Error::InvalidOrder { .. })
        ));
    }

    #[test]
    fn hz_imaginary_part_cancels() {
        for z in [5.0, 31.0, 90.0] {
            let (co, input) = setup(z);
            let e = hz1_ab1_sum(&co, &input);
            assert!(e.im.abs() < 1e-11 * e.re.abs(), "{e}");
        }
    }

    #[test]
    fn duan_is_zero() {
        let (co, input) = setup(12.0);
        for pair in ModePair::ALL {
            let w = duan_pair(&co, &input, pair);
            assert_eq!(w.value, 0.0);
            assert!(!w.nonclassical());
        }
    }
}
