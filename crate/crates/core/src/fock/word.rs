//! Normally ordered operator words and their expectation values.

use std::fmt;

use num_complex::Complex64;

use super::state::StateVector;
use crate::error::{Error, Result};
use crate::witness::Mode;

/// Longest word evaluated by default: `a†^m a^m b†^n b^n` with `m + n <= 4`.
pub const MAX_WORD_LEN: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub mode: Mode,
    pub dagger: bool,
}

impl Letter {
    pub fn create(mode: Mode) -> Self {
        Self { mode, dagger: true }
    }

    pub fn annihilate(mode: Mode) -> Self {
        Self { mode, dagger: false }
    }
}

/// A normally ordered monomial `∏ x†^{c_x} ∏ x^{d_x}` over the three modes.
///
/// Letters of different modes commute, so the canonical form only keeps the
/// creation and annihilation counts per mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OperatorWord {
    create: [u8; 3],
    annihilate: [u8; 3],
}

impl OperatorWord {
    pub const IDENTITY: OperatorWord = OperatorWord {
        create: [0; 3],
        annihilate: [0; 3],
    };

    /// Builds a word from letters, rejecting any mode whose creation
    /// operators are not all to the left of its annihilation operators.
    pub fn from_letters(letters: &[Letter]) -> Result<Self> {
        let mut w = Self::IDENTITY;
        let mut seen_annihilator = [false; 3];
        for l in letters {
            let i = l.mode.index();
            if l.dagger {
                if seen_annihilator[i] {
                    return Err(Error::NotNormallyOrdered(display_letters(letters)));
                }
                w.create[i] = w.create[i].saturating_add(1);
            } else {
                seen_annihilator[i] = true;
                w.annihilate[i] = w.annihilate[i].saturating_add(1);
            }
        }
        Ok(w)
    }

    /// Multiplies by `x†^n` on the left (creation side).
    pub fn create(mut self, mode: Mode, n: u32) -> Self {
        let i = mode.index();
        self.create[i] = self.create[i].saturating_add(n.min(255) as u8);
        self
    }

    /// Multiplies by `x^n` on the right (annihilation side).
    pub fn annihilate(mut self, mode: Mode, n: u32) -> Self {
        let i = mode.index();
        self.annihilate[i] = self.annihilate[i].saturating_add(n.min(255) as u8);
        self
    }

    /// `x†^n x^n`.
    pub fn number_power(mode: Mode, n: u32) -> Self {
        Self::IDENTITY.create(mode, n).annihilate(mode, n)
    }

    pub fn creation_counts(&self) -> [u32; 3] {
        self.create.map(u32::from)
    }

    pub fn annihilation_counts(&self) -> [u32; 3] {
        self.annihilate.map(u32::from)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            create: self.annihilate,
            annihilate: self.create,
        }
    }

    pub fn len(&self) -> usize {
        self.create
            .iter()
            .chain(&self.annihilate)
            .map(|&c| c as usize)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Equal creation and annihilation content: a non-negative observable.
    pub fn is_diagonal(&self) -> bool {
        self.create == self.annihilate
    }

    /// Letters in canonical order: all creators (a, b1, b2), then all annihilators.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.len());
        for m in Mode::ALL {
            out.extend(std::iter::repeat_n(
                Letter::create(m),
                self.create[m.index()] as usize,
            ));
        }
        for m in Mode::ALL {
            out.extend(std::iter::repeat_n(
                Letter::annihilate(m),
                self.annihilate[m.index()] as usize,
            ));
        }
        out
    }
}

fn display_letters(letters: &[Letter]) -> String {
    if letters.is_empty() {
        return "1".into();
    }
    letters
        .iter()
        .map(|l| format!("{}{}", l.mode, if l.dagger { "†" } else { "" }))
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (counts, dag) in [(&self.create, "†"), (&self.annihilate, "")] {
            for m in Mode::ALL {
                match counts[m.index()] {
                    0 => {}
                    1 => parts.push(format!("{m}{dag}")),
                    n => parts.push(format!("{m}{dag}^{n}")),
                }
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            write!(f, "⟨{}⟩", parts.join(" "))
        }
    }
}

/// `∏ x^{p_x} ψ` on the same truncated space.
fn lower(state: &StateVector, powers: [u8; 3]) -> Vec<Complex64> {
    let cut = state.cutoffs();
    let [pa, pb, pc] = powers.map(usize::from);
    let levels = cut.levels();
    // sqrt(n!/(n-p)!) for the source occupation n of each mode
    let falling = |p: usize, len: usize| -> Vec<f64> {
        (0..len)
            .map(|m| ((m + 1)..=(m + p)).map(|v| v as f64).product::<f64>().sqrt())
            .collect()
    };
    let fa = falling(pa, levels[0]);
    let fb = falling(pb, levels[1]);
    let fc = falling(pc, levels[2]);
    let amps = state.amplitudes();
    let mut out = vec![Complex64::new(0.0, 0.0); cut.dim()];
    for na in 0..levels[0].saturating_sub(pa) {
        for nb in 0..levels[1].saturating_sub(pb) {
            let w_ab = fa[na] * fb[nb];
            for nc in 0..levels[2].saturating_sub(pc) {
                let src = cut.index(na + pa, nb + pb, nc + pc);
                out[cut.index(na, nb, nc)] = w_ab * fc[nc] * amps[src];
            }
        }
    }
    out
}

/// `⟨ψ| word |ψ⟩`, with a word-length limit of [`MAX_WORD_LEN`].
pub fn moment(state: &StateVector, word: &OperatorWord) -> Result<Complex64> {
    moment_with_limit(state, word, MAX_WORD_LEN)
}

/// `⟨ψ| C A |ψ⟩ = ⟨C† ψ, A ψ⟩`; only annihilation strings are ever applied.
pub fn moment_with_limit(state: &StateVector, word: &OperatorWord, max_len: usize) -> Result<Complex64> {
    if word.len() > max_len {
        return Err(Error::WordTooLong {
            word: word.to_string(),
            reason: format!("length {} exceeds {max_len}", word.len()),
        });
    }
    let cut = state.cutoffs();
    for m in Mode::ALL {
        let i = m.index();
        let need = word.create[i].max(word.annihilate[i]) as usize;
        if need > cut.max(m) {
            return Err(Error::WordTooLong {
                word: word.to_string(),
                reason: format!("needs {need} photons in mode {m}, cutoff is {}", cut.max(m)),
            });
        }
    }
    if word.is_empty() {
        return Ok(Complex64::new(state.norm().powi(2), 0.0));
    }
    let right = lower(state, word.annihilate);
    let left = if word.create == word.annihilate {
        None
    } else {
        Some(lower(state, word.create))
    };
    let left = left.as_deref().unwrap_or(&right);
    Ok(left.iter().zip(&right).map(|(l, r)| l.conj() * r).sum())
}
