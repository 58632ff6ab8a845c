use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::witness::{CoherentInput, Mode};

/// Default upper bound on the truncated Hilbert-space dimension.
pub const DEFAULT_MAX_DIM: usize = 2_000_000;

/// Largest truncation deficit accepted when building a coherent state.
pub const MAX_TRUNCATION_DEFICIT: f64 = 1e-6;

/// Maximum photon number kept per mode (inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockCutoffs {
    pub n_a_max: usize,
    pub n_b1_max: usize,
    pub n_b2_max: usize,
}

impl FockCutoffs {
    pub fn new(n_a_max: usize, n_b1_max: usize, n_b2_max: usize) -> Result<Self> {
        Self::with_ceiling(n_a_max, n_b1_max, n_b2_max, DEFAULT_MAX_DIM)
    }

    pub fn with_ceiling(n_a_max: usize, n_b1_max: usize, n_b2_max: usize, max_dim: usize) -> Result<Self> {
        let c = Self {
            n_a_max,
            n_b1_max,
            n_b2_max,
        };
        let dim = (n_a_max + 1)
            .checked_mul(n_b1_max + 1)
            .and_then(|d| d.checked_mul(n_b2_max + 1));
        match dim {
            Some(d) if d <= max_dim => Ok(c),
            _ => Err(Error::InvalidCutoffs(format!(
                "dimension of ({n_a_max},{n_b1_max},{n_b2_max}) exceeds {max_dim}"
            ))),
        }
    }

    pub fn max(&self, mode: Mode) -> usize {
        match mode {
            Mode::A => self.n_a_max,
            Mode::B1 => self.n_b1_max,
            Mode::B2 => self.n_b2_max,
        }
    }

    /// Levels per mode, `max + 1`.
    pub fn levels(&self) -> [usize; 3] {
        [self.n_a_max + 1, self.n_b1_max + 1, self.n_b2_max + 1]
    }

    pub fn dim(&self) -> usize {
        self.levels().iter().product()
    }

    /// Row-major index with `n_b2` fastest.
    #[inline]
    pub fn index(&self, n_a: usize, n_b1: usize, n_b2: usize) -> usize {
        (n_a * (self.n_b1_max + 1) + n_b1) * (self.n_b2_max + 1) + n_b2
    }

    /// Element-wise grow by `extra` photons per mode.
    pub fn grown(&self, extra: usize) -> Result<Self> {
        Self::new(self.n_a_max + extra, self.n_b1_max + extra, self.n_b2_max + extra)
    }

    /// Iterates `(n_a, n_b1, n_b2)` in storage order.
    pub fn basis(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let [la, lb, lc] = self.levels();
        (0..la).flat_map(move |a| (0..lb).flat_map(move |b| (0..lc).map(move |c| (a, b, c))))
    }
}

/// Dense amplitudes of a three-mode truncated Fock state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    cutoffs: FockCutoffs,
    amplitudes: Vec<Complex64>,
    truncation_deficit: f64,
}

impl StateVector {
    pub fn vacuum(cutoffs: FockCutoffs) -> Self {
        Self::basis_state(cutoffs, 0, 0, 0)
    }

    /// `|n_a, n_b1, n_b2⟩`. Panics if the occupation exceeds the cutoffs.
    pub fn basis_state(cutoffs: FockCutoffs, n_a: usize, n_b1: usize, n_b2: usize) -> Self {
        assert!(n_a <= cutoffs.n_a_max && n_b1 <= cutoffs.n_b1_max && n_b2 <= cutoffs.n_b2_max);
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); cutoffs.dim()];
        amplitudes[cutoffs.index(n_a, n_b1, n_b2)] = Complex64::new(1.0, 0.0);
        Self {
            cutoffs,
            amplitudes,
            truncation_deficit: 0.0,
        }
    }

    /// Normalizes the given amplitudes; zero vectors are rejected.
    pub fn from_amplitudes(cutoffs: FockCutoffs, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != cutoffs.dim() {
            return Err(Error::InvalidCutoffs(format!(
                "{} amplitudes for dimension {}",
                amplitudes.len(),
                cutoffs.dim()
            )));
        }
        let mut s = Self {
            cutoffs,
            amplitudes,
            truncation_deficit: 0.0,
        };
        let norm = s.norm();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::InvalidParams("state has zero or non-finite norm".into()));
        }
        s.scale(1.0 / norm);
        Ok(s)
    }

    /// Unnormalized wrapper, used for generator images.
    pub(crate) fn raw(cutoffs: FockCutoffs, amplitudes: Vec<Complex64>, truncation_deficit: f64) -> Self {
        debug_assert_eq!(amplitudes.len(), cutoffs.dim());
        Self {
            cutoffs,
            amplitudes,
            truncation_deficit,
        }
    }

    pub fn cutoffs(&self) -> FockCutoffs {
        self.cutoffs
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn amplitude(&self, n_a: usize, n_b1: usize, n_b2: usize) -> Complex64 {
        self.amplitudes[self.cutoffs.index(n_a, n_b1, n_b2)]
    }

    /// Probability mass of the ideal state that lies outside the cutoffs.
    pub fn truncation_deficit(&self) -> f64 {
        self.truncation_deficit
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn scale(&mut self, s: f64) {
        self.amplitudes.iter_mut().for_each(|c| *c *= s);
    }

    /// Renormalizes and returns the norm before rescaling.
    pub(crate) fn renormalize(&mut self) -> f64 {
        let n = self.norm();
        if n > 0.0 {
            self.scale(1.0 / n);
        }
        n
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        assert_eq!(self.cutoffs, other.cutoffs);
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(x, y)| x.conj() * y)
            .sum()
    }

    /// `|⟨self|other⟩|^2` for normalized states.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Reduced photon-number distribution of one mode.
    pub fn marginal(&self, mode: Mode) -> Vec<f64> {
        let mut p = vec![0.0; self.cutoffs.max(mode) + 1];
        for ((a, b, c), amp) in self.cutoffs.basis().zip(&self.amplitudes) {
            let n = match mode {
                Mode::A => a,
                Mode::B1 => b,
                Mode::B2 => c,
            };
            p[n] += amp.norm_sqr();
        }
        p
    }

    /// Copies this state into larger cutoffs, zero-padding the new levels.
    pub fn embed(&self, target: FockCutoffs) -> Result<StateVector> {
        let c = self.cutoffs;
        if target.n_a_max < c.n_a_max || target.n_b1_max < c.n_b1_max || target.n_b2_max < c.n_b2_max {
            return Err(Error::InvalidCutoffs(
                "embedding target is smaller than the source".into(),
            ));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); target.dim()];
        for ((a, b, cc), amp) in c.basis().zip(&self.amplitudes) {
            amplitudes[target.index(a, b, cc)] = *amp;
        }
        Ok(StateVector::raw(target, amplitudes, self.truncation_deficit))
    }
}

/// Truncated single-mode coherent amplitudes and the exact tail mass beyond
/// `n_max`, computed by summing the tail directly.
fn coherent_mode(alpha: Complex64, n_max: usize) -> (Vec<Complex64>, f64) {
    let mean = alpha.norm_sqr();
    let prefactor = (-0.5 * mean).exp();
    let mut amps = Vec::with_capacity(n_max + 1);
    let mut term = Complex64::new(prefactor, 0.0);
    for n in 0..=n_max {
        if n > 0 {
            term = term * alpha / (n as f64).sqrt();
        }
        amps.push(term);
    }
    // Poisson tail: p_{n+1} = p_n * mean / (n+1)
    let mut p = term.norm_sqr();
    let mut tail = 0.0;
    let mut n = n_max;
    loop {
        n += 1;
        p *= mean / n as f64;
        tail += p;
        if p <= tail * 1e-17 || p == 0.0 || n > n_max + 10_000 {
            break;
        }
    }
    (amps, tail)
}

/// Product of three coherent states, truncated and renormalized.
pub fn coherent_product_state(input: &CoherentInput, cutoffs: FockCutoffs) -> Result<StateVector> {
    if !input.is_finite() {
        return Err(Error::InvalidParams("non-finite coherent amplitude".into()));
    }
    let (ma, ta) = coherent_mode(input.alpha, cutoffs.n_a_max);
    let (mb, tb) = coherent_mode(input.beta, cutoffs.n_b1_max);
    let (mc, tc) = coherent_mode(input.gamma_amp, cutoffs.n_b2_max);
    // 1 - (1-ta)(1-tb)(1-tc) without cancellation
    let deficit = -((-ta).ln_1p() + (-tb).ln_1p() + (-tc).ln_1p()).exp_m1();
    if deficit > MAX_TRUNCATION_DEFICIT {
        return Err(Error::CutoffTooTight {
            deficit,
            limit: MAX_TRUNCATION_DEFICIT,
        });
    }
    let mut amplitudes = Vec::with_capacity(cutoffs.dim());
    for a in &ma {
        for b in &mb {
            let ab = a * b;
            amplitudes.extend(mc.iter().map(|c| ab * c));
        }
    }
    let mut state = StateVector::raw(cutoffs, amplitudes, deficit.max(0.0));
    state.renormalize();
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_input() {
        let cut = FockCutoffs::new(3, 2, 2).unwrap();
        let s = coherent_product_state(&CoherentInput::real(0.0, 0.0, 0.0), cut).unwrap();
        assert_eq!(s.amplitude(0, 0, 0), Complex64::new(1.0, 0.0));
        assert_eq!(s.amplitudes().iter().filter(|c| c.norm() > 0.0).count(), 1);
        assert_eq!(s.truncation_deficit(), 0.0);
    }

    #[test]
    fn figure_three_amplitudes_fit() {
        let cut = FockCutoffs::new(8, 6, 4).unwrap();
        let s = coherent_product_state(&CoherentInput::real(0.5, 0.2, 0.1), cut).unwrap();
        // product of Poisson tails, summed independently
        let tail = |mean: f64, n_max: u32| -> f64 {
            let mut p = (-mean).exp();
            let mut head = 0.0;
            for n in 0..=n_max {
                if n > 0 {
                    p *= mean / n as f64;
                }
                head += p;
            }
            1.0 - head
        };
        let expect = 1.0 - (1.0 - tail(0.25, 8)) * (1.0 - tail(0.04, 6)) * (1.0 - tail(0.01, 4));
        assert!(s.truncation_deficit() < 1e-10);
        assert!((s.truncation_deficit() - expect).abs() < 1e-15);
        assert!((s.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tight_cutoffs_rejected() {
        let cut = FockCutoffs::new(3, 3, 3).unwrap();
        match coherent_product_state(&CoherentInput::real(2.0, 0.0, 0.0), cut) {
            Err(Error::CutoffTooTight { deficit, .. }) => assert!(deficit > 0.1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn indexing_is_row_major() {
        let cut = FockCutoffs::new(2, 3, 4).unwrap();
        let idx: Vec<_> = cut.basis().map(|(a, b, c)| cut.index(a, b, c)).collect();
        assert_eq!(idx, (0..cut.dim()).collect::<Vec<_>>());
        assert_eq!(cut.index(0, 0, 1), 1);
        assert_eq!(cut.index(0, 1, 0), 5);
        assert_eq!(cut.index(1, 0, 0), 20);
    }

    #[test]
    fn dimension_ceiling() {
        assert!(FockCutoffs::new(200, 200, 200).is_err());
        assert!(FockCutoffs::with_ceiling(9, 9, 9, 999).is_err());
        assert!(FockCutoffs::with_ceiling(9, 9, 9, 1000).is_ok());
    }

    #[test]
    fn marginal_of_coherent_state_is_poissonian() {
        let cut = FockCutoffs::new(20, 2, 2).unwrap();
        let s = coherent_product_state(&CoherentInput::real(1.2, 0.0, 0.0), cut).unwrap();
        let p = s.marginal(Mode::A);
        let mut q = (-1.44f64).exp();
        for (n, pn) in p.iter().enumerate().take(10) {
            if n > 0 {
                q *= 1.44 / n as f64;
            }
            assert!((pn - q).abs() < 1e-14);
        }
    }
}
