use num_complex::Complex64;
use proptest::prelude::*;

use coupler::analytic;
use coupler::fock::{FockCutoffs, StateVector, MAX_WORD_LEN};
use coupler::moments::{self, MomentTable};
use coupler::sweep::WitnessSelector;
use coupler::{evolution_coefficients, CoherentInput, CouplerParams, EvolutionCoefficients, Mode, ModePair};

fn cplx(r: f64, th: f64) -> Complex64 {
    Complex64::from_polar(r, th)
}

fn amp() -> impl Strategy<Value = Complex64> {
    (0.0..2.0f64, -3.2..3.2f64).prop_map(|(r, t)| cplx(r, t))
}

fn input() -> impl Strategy<Value = CoherentInput> {
    (amp(), amp(), amp()).prop_map(|(a, b, g)| CoherentInput::new(a, b, g))
}

fn coefficients() -> impl Strategy<Value = EvolutionCoefficients> {
    (
        0.05..0.5f64,
        -3.2..3.2f64,
        1e-4..1e-2f64,
        -3.2..3.2f64,
        1e-3..0.09f64,
        0.0..200.0f64,
    )
        .prop_map(|(k, kp, g, gp, dk, z)| {
            let p = CouplerParams::new(cplx(k, kp), cplx(g, gp), dk).unwrap();
            evolution_coefficients(&p, z).unwrap()
        })
}

/// Every closed-form value, flattened.
fn all_analytic(co: &EvolutionCoefficients, input: &CoherentInput) -> Vec<f64> {
    let mut v = Vec::new();
    for m in Mode::ALL {
        let (a1, a2) = analytic::amp_squared_squeezing(co, input, m);
        v.extend([a1.value, a2.value]);
        for n in 2..=4 {
            v.push(analytic::hoa(co, input, m, n).unwrap().value);
        }
    }
    for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
        let (e, ep) = analytic::hz_pair(co, input, m, n).unwrap();
        v.extend([e.value, ep.value]);
    }
    v.extend(analytic::tripartite(co, input).iter().map(|w| w.value));
    v
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + 1e-300
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn paired_witnesses_are_mirrors(co in coefficients(), inp in input()) {
        for m in Mode::ALL {
            let (a1, a2) = analytic::amp_squared_squeezing(&co, &inp, m);
            prop_assert_eq!(a1.value, -a2.value);
        }
        for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let (e, ep) = analytic::hz_pair(&co, &inp, m, n).unwrap();
            prop_assert_eq!(e.value, -ep.value);
        }
        let tri = analytic::tripartite(&co, &inp);
        for pair in tri.chunks(2).take(3) {
            prop_assert_eq!(pair[0].value, -pair[1].value);
        }
    }

    #[test]
    fn harmonic_amplitude_scaling(co in coefficients(), inp in input(), s in 0.1..3.0f64) {
        let scaled = CoherentInput::new(inp.alpha, inp.beta, inp.gamma_amp * s);
        let (base, big) = (all_analytic(&co, &inp), all_analytic(&co, &scaled));
        let n_tri = 7;
        let split = base.len() - n_tri;
        for (x, y) in base[..split].iter().zip(&big[..split]) {
            prop_assert!(close(*y, s * x, 1e-9), "{} vs {}", y, s * x);
        }
        for (x, y) in base[split..].iter().zip(&big[split..]) {
            prop_assert!(close(*y, s.powi(3) * x, 1e-9), "{} vs {}", y, s.powi(3) * x);
        }
    }

    /// The generator is invariant under a -> a e^{iφ}, b1 -> b1 e^{iφ}, b2 -> b2 e^{2iφ}.
    #[test]
    fn phase_covariance(co in coefficients(), inp in input(), phi in -3.2..3.2f64) {
        let u = cplx(1.0, phi);
        let rotated = CoherentInput::new(inp.alpha * u, inp.beta * u, inp.gamma_amp * u * u);
        let mut base = Vec::new();
        let mut rot = Vec::new();
        for (src, out) in [(&inp, &mut base), (&rotated, &mut rot)] {
            let (na, nb, nc) = analytic::mean_photon_numbers(&co, src);
            out.extend([na, nb, nc]);
            for m in Mode::ALL {
                for n in 2..=4 {
                    out.push(analytic::hoa(&co, src, m, n).unwrap().value);
                }
            }
            for (m, n) in [(1, 1), (2, 2)] {
                out.push(analytic::hz_pair(&co, src, m, n).unwrap().0.value);
            }
            out.extend(analytic::tripartite(&co, src).iter().map(|w| w.value));
        }
        let scale = base.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        for (x, y) in base.iter().zip(&rot) {
            prop_assert!((x - y).abs() <= 1e-9 * scale + 1e-300, "{} vs {}", x, y);
        }
    }

    #[test]
    fn coherent_tables_are_classical(inp in input()) {
        let mut sel = vec![WitnessSelector::Tripartite];
        for m in Mode::ALL {
            sel.push(WitnessSelector::AmpSq(m));
            sel.push(WitnessSelector::Hoa(m, 3));
        }
        for p in ModePair::ALL {
            sel.push(WitnessSelector::Duan(p));
            sel.push(WitnessSelector::Hz(p, 2, 1));
        }
        let words: Vec<_> = sel.iter().flat_map(|s| s.words()).collect();
        let t = MomentTable::coherent(&inp, &words);
        let scale = (1.0 + inp.alpha.norm_sqr() + inp.beta.norm_sqr() + inp.gamma_amp.norm_sqr()).powi(4);
        for s in &sel {
            for w in s.from_moments(&t).unwrap() {
                prop_assert!(w.value.abs() <= 1e-12 * scale, "{}: {}", w.label(), w.value);
            }
        }
    }

    #[test]
    fn state_tables_are_hermitian(seed in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 64)) {
        let cut = FockCutoffs::new(3, 3, 3).unwrap();
        let amps = seed.iter().map(|&(r, i)| Complex64::new(r, i)).collect();
        let state = StateVector::from_amplitudes(cut, amps).unwrap();
        let mut words = moments::tripartite_words();
        for p in ModePair::ALL {
            words.extend(moments::duan_words(p));
            words.extend(moments::hz_words(p, 1, 1));
        }
        let adjoints: Vec<_> = words.iter().map(|w| w.adjoint()).collect();
        words.extend(adjoints);
        let mut t = MomentTable::new(moments::Provenance::Oracle);
        for w in &words {
            t.insert(*w, coupler::fock::moment_with_limit(&state, w, MAX_WORD_LEN).unwrap());
        }
        prop_assert!(t.is_consistent(), "defect {}", t.consistency_defect());
    }
}
