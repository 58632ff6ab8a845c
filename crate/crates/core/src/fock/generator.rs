//! Matrix-free action of the spatial generator
//!
//! ```text
//! G(z) = -k a b1† - k* a† b1 - Γ e^{iΔk z} b1² b2† - Γ* e^{-iΔk z} b1†² b2
//! ```
//!
//! on the truncated space. Components pushed past a cutoff are dropped, so
//! the operator actually applied is `P G P`, which stays Hermitian.

use num_complex::Complex64;

use super::state::{FockCutoffs, StateVector};
use crate::coeffs::CouplerParams;

/// Precomputed square roots and strides for repeated generator application.
#[derive(Debug, Clone)]
pub struct Generator {
    cutoffs: FockCutoffs,
    params: CouplerParams,
    sqrt: Vec<f64>,
    stride_a: usize,
    stride_b: usize,
}

impl Generator {
    pub fn new(params: CouplerParams, cutoffs: FockCutoffs) -> Self {
        let top = cutoffs.n_a_max.max(cutoffs.n_b1_max).max(cutoffs.n_b2_max) + 5;
        let sqrt = (0..=top).map(|n| (n as f64).sqrt()).collect();
        Self {
            cutoffs,
            params,
            sqrt,
            stride_a: (cutoffs.n_b1_max + 1) * (cutoffs.n_b2_max + 1),
            stride_b: cutoffs.n_b2_max + 1,
        }
    }

    pub fn cutoffs(&self) -> FockCutoffs {
        self.cutoffs
    }

    /// `out = scale * G(z) psi`, gathering each output amplitude from at most
    /// four source amplitudes.
    pub fn apply_into(&self, z: f64, scale: Complex64, psi: &[Complex64], out: &mut [Complex64]) {
        let c = &self.cutoffs;
        debug_assert_eq!(psi.len(), c.dim());
        debug_assert_eq!(out.len(), c.dim());
        let (sa, sb) = (self.stride_a, self.stride_b);
        let sq = &self.sqrt;
        let phase = Complex64::from_polar(1.0, self.params.delta_k * z);
        let lin = -self.params.k * scale;
        let lin_c = -self.params.k.conj() * scale;
        let nl = -self.params.gamma_nl * phase * scale;
        let nl_c = -(self.params.gamma_nl * phase).conj() * scale;
        let (amax, bmax, cmax) = (c.n_a_max, c.n_b1_max, c.n_b2_max);

        for na in 0..=amax {
            for nb in 0..=bmax {
                let base = na * sa + nb * sb;
                for nc in 0..=cmax {
                    let i = base + nc;
                    let mut acc = Complex64::new(0.0, 0.0);
                    // -k a b1†: from (na+1, nb-1, nc)
                    if na < amax && nb > 0 {
                        acc += lin * (sq[na + 1] * sq[nb]) * psi[i + sa - sb];
                    }
                    // -k* a† b1: from (na-1, nb+1, nc)
                    if na > 0 && nb < bmax {
                        acc += lin_c * (sq[na] * sq[nb + 1]) * psi[i - sa + sb];
                    }
                    // -Γ e^{iΔkz} b1² b2†: from (na, nb+2, nc-1)
                    if nc > 0 && nb + 2 <= bmax {
                        acc += nl * (sq[nb + 2] * sq[nb + 1] * sq[nc]) * psi[i + 2 * sb - 1];
                    }
                    // -Γ* e^{-iΔkz} b1†² b2: from (na, nb-2, nc+1)
                    if nc < cmax && nb >= 2 {
                        acc += nl_c * (sq[nb] * sq[nb - 1] * sq[nc + 1]) * psi[i - 2 * sb + 1];
                    }
                    out[i] = acc;
                }
            }
        }
    }

    /// Squared norm of the part of `G(z) psi` that falls outside the cutoffs.
    pub fn leakage(&self, z: f64, psi: &[Complex64]) -> f64 {
        let c = &self.cutoffs;
        let sq = &self.sqrt;
        let phase = Complex64::from_polar(1.0, self.params.delta_k * z);
        let k = self.params.k;
        let g = self.params.gamma_nl * phase;
        let (amax, bmax, cmax) = (c.n_a_max as i64, c.n_b1_max as i64, c.n_b2_max as i64);
        let at = |a: i64, b: i64, cc: i64| -> Complex64 {
            if a < 0 || b < 0 || cc < 0 || a > amax || b > bmax || cc > cmax {
                Complex64::new(0.0, 0.0)
            } else {
                psi[c.index(a as usize, b as usize, cc as usize)]
            }
        };
        let s = |n: i64| sq[n as usize];
        let mut total = 0.0;
        // outside targets form a shell one level (two for b1) beyond the box
        for na in 0..=amax + 1 {
            for nb in 0..=bmax + 2 {
                for nc in 0..=cmax + 1 {
                    if na <= amax && nb <= bmax && nc <= cmax {
                        continue;
                    }
                    let mut acc = Complex64::new(0.0, 0.0);
                    if nb > 0 {
                        acc -= k * s(na + 1) * s(nb) * at(na + 1, nb - 1, nc);
                    }
                    if na > 0 {
                        acc -= k.conj() * s(na) * s(nb + 1) * at(na - 1, nb + 1, nc);
                    }
                    if nc > 0 {
                        acc -= g * s(nb + 2) * s(nb + 1) * s(nc) * at(na, nb + 2, nc - 1);
                    }
                    if nb >= 2 {
                        acc -= g.conj() * s(nb) * s(nb - 1) * s(nc + 1) * at(na, nb - 2, nc + 1);
                    }
                    total += acc.norm_sqr();
                }
            }
        }
        total
    }
}

/// `G(z) psi` together with the squared norm dropped at the cutoffs.
#[derive(Debug, Clone)]
pub struct GeneratorImage {
    /// Unnormalized image.
    pub image: StateVector,
    pub dropped_mass: f64,
}

pub fn generator_action(state: &StateVector, params: &CouplerParams, z: f64) -> GeneratorImage {
    let cutoffs = state.cutoffs();
    let gen = Generator::new(*params, cutoffs);
    let mut out = vec![Complex64::new(0.0, 0.0); cutoffs.dim()];
    gen.apply_into(z, Complex64::new(1.0, 0.0), state.amplitudes(), &mut out);
    GeneratorImage {
        image: StateVector::raw(cutoffs, out, 0.0),
        dropped_mass: gen.leakage(z, state.amplitudes()),
    }
}
