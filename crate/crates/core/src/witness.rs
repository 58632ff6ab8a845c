//! Witness identifiers and values shared by the analytic and moment engines.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

/// A field mode of the coupler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Mode {
    A,
    B1,
    B2,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::A, Mode::B1, Mode::B2];

    pub fn index(self) -> usize {
        match self {
            Mode::A => 0,
            Mode::B1 => 1,
            Mode::B2 => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Mode::A => "a",
            Mode::B1 => "b1",
            Mode::B2 => "b2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "a" => Some(Mode::A),
            "b1" => Some(Mode::B1),
            "b2" => Some(Mode::B2),
            _ => None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// An ordered pair of distinct modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ModePair {
    AB1,
    AB2,
    B1B2,
}

impl ModePair {
    pub const ALL: [ModePair; 3] = [ModePair::AB1, ModePair::AB2, ModePair::B1B2];

    pub fn modes(self) -> (Mode, Mode) {
        match self {
            ModePair::AB1 => (Mode::A, Mode::B1),
            ModePair::AB2 => (Mode::A, Mode::B2),
            ModePair::B1B2 => (Mode::B1, Mode::B2),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ModePair::AB1 => "ab1",
            ModePair::AB2 => "ab2",
            ModePair::B1B2 => "b1b2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ab1" => Some(ModePair::AB1),
            "ab2" => Some(ModePair::AB2),
            "b1b2" => Some(ModePair::B1B2),
            _ => None,
        }
    }
}

/// A bipartition of the three modes into a compound pair and a single mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Bipartition {
    /// `ab1 | b2`
    AB1vsB2,
    /// `a | b1 b2`
    AvsB1B2,
    /// `b1 | a b2`
    B1vsAB2,
}

impl Bipartition {
    pub const ALL: [Bipartition; 3] = [Bipartition::AB1vsB2, Bipartition::AvsB1B2, Bipartition::B1vsAB2];

    /// The mode standing alone on one side of the cut.
    pub fn single(self) -> Mode {
        match self {
            Bipartition::AB1vsB2 => Mode::B2,
            Bipartition::AvsB1B2 => Mode::A,
            Bipartition::B1vsAB2 => Mode::B1,
        }
    }

    /// The two modes forming the compound side.
    pub fn compound(self) -> (Mode, Mode) {
        match self {
            Bipartition::AB1vsB2 => (Mode::A, Mode::B1),
            Bipartition::AvsB1B2 => (Mode::B1, Mode::B2),
            Bipartition::B1vsAB2 => (Mode::A, Mode::B2),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Bipartition::AB1vsB2 => "ab1|b2",
            Bipartition::AvsB1B2 => "a|b1b2",
            Bipartition::B1vsAB2 => "b1|ab2",
        }
    }

    fn ident(self) -> &'static str {
        match self {
            Bipartition::AB1vsB2 => "ab1_b2",
            Bipartition::AvsB1B2 => "a_b1b2",
            Bipartition::B1vsAB2 => "b1_ab2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum WitnessKind {
    AmpSqSqueezingY1,
    AmpSqSqueezingY2,
    Hoa,
    HzI,
    HzII,
    Duan,
    TriE,
    TriEPrime,
    FullSepTest,
}

/// One evaluated witness. Negative values signal nonclassicality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessValue {
    pub kind: WitnessKind,
    pub modes: Vec<Mode>,
    pub order: Vec<u32>,
    pub split: Option<Bipartition>,
    pub value: f64,
}

impl WitnessValue {
    pub fn new(kind: WitnessKind, modes: Vec<Mode>, order: Vec<u32>, value: f64) -> Self {
        debug_assert!(order.iter().all(|&o| o >= 1));
        Self {
            kind,
            modes,
            order,
            split: None,
            value,
        }
    }

    pub fn tripartite(kind: WitnessKind, split: Option<Bipartition>, value: f64) -> Self {
        let order = if kind == WitnessKind::FullSepTest {
            vec![]
        } else {
            vec![1, 1, 1]
        };
        Self {
            kind,
            modes: Mode::ALL.to_vec(),
            order,
            split,
            value,
        }
    }

    pub fn nonclassical(&self) -> bool {
        self.value < 0.0
    }

    /// Stable identifier, used for CSV column names.
    pub fn label(&self) -> String {
        let modes: String = self.modes.iter().map(|m| m.label()).collect();
        let order = self
            .order
            .iter()
            .map(|o| o.to_string())
            .collect::<Vec<_>>()
            .join("_");
        match self.kind {
            WitnessKind::AmpSqSqueezingY1 => format!("asq_{modes}_y1"),
            WitnessKind::AmpSqSqueezingY2 => format!("asq_{modes}_y2"),
            WitnessKind::Hoa => format!("hoa_{modes}_{order}"),
            WitnessKind::HzI => format!("hz_{modes}_{order}_e"),
            WitnessKind::HzII => format!("hz_{modes}_{order}_ep"),
            WitnessKind::Duan => format!("duan_{modes}"),
            WitnessKind::TriE => format!("tri_{}_e", self.split.map_or("", |s| s.ident())),
            WitnessKind::TriEPrime => format!("tri_{}_ep", self.split.map_or("", |s| s.ident())),
            WitnessKind::FullSepTest => "fullsep".to_string(),
        }
    }
}

/// Amplitudes of the three-mode coherent input state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentInput {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma_amp: Complex64,
}

impl CoherentInput {
    pub fn new(alpha: Complex64, beta: Complex64, gamma_amp: Complex64) -> Self {
        Self {
            alpha,
            beta,
            gamma_amp,
        }
    }

    pub fn real(alpha: f64, beta: f64, gamma_amp: f64) -> Self {
        Self::new(
            Complex64::new(alpha, 0.0),
            Complex64::new(beta, 0.0),
            Complex64::new(gamma_amp, 0.0),
        )
    }

    pub fn amplitude(&self, mode: Mode) -> Complex64 {
        match mode {
            Mode::A => self.alpha,
            Mode::B1 => self.beta,
            Mode::B2 => self.gamma_amp,
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.alpha, self.beta, self.gamma_amp]
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// Verdict of the three-mode analysis. The criteria are sufficient only, so
/// failing them never implies separability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TripartiteVerdict {
    /// Not bi-separable in any form and not fully separable.
    FullyEntangled,
    Inconclusive,
    /// The full-separability bound assumes a pure state.
    NotApplicable,
}
