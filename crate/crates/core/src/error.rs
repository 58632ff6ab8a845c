use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Which denominator of the first-order coefficients is near zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuardBand {
    /// `delta_k` close to zero.
    ZeroMismatch,
    /// `|delta_k|` close to `2|k|`, where `4|k|^2 - delta_k^2` vanishes.
    DoubleCoupling,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid coupler parameters: {0}")]
    InvalidParams(String),

    #[error("delta_k = {delta_k:e} lies inside the {band:?} guard band (|k| = {k_abs:e})")]
    GuardBand {
        delta_k: f64,
        k_abs: f64,
        band: GuardBand,
    },

    #[error("invalid order {order}: must be at least {min}")]
    InvalidOrder { order: u32, min: u32 },

    #[error("invalid Fock cutoffs: {0}")]
    InvalidCutoffs(String),

    #[error("truncation deficit {deficit:e} exceeds {limit:e}; raise the cutoffs")]
    CutoffTooTight { deficit: f64, limit: f64 },

    #[error("integration not converged: doubling steps moved an amplitude by {max_change:e}")]
    StepTooCoarse { max_change: f64 },

    #[error("operator word {word} cannot be evaluated: {reason}")]
    WordTooLong { word: String, reason: String },

    #[error("operator word {0} is not normally ordered")]
    NotNormallyOrdered(String),

    #[error("moment table has no entry for {0}")]
    MissingMoment(String),

    #[error("comparison needs both analytic and oracle columns for {0}")]
    MissingEngine(String),

    #[error("config line {line}: {reason}")]
    Config { line: usize, reason: String },

    #[error("sweep point {index} (z = {z}): {source}")]
    AtPoint {
        index: usize,
        z: f64,
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(line: usize, reason: impl Into<String>) -> Self {
        Error::Config {
            line,
            reason: reason.into(),
        }
    }

    /// True for the numeric failures a sweep may skip instead of aborting.
    pub fn is_numeric(&self) -> bool {
        if let Error::AtPoint { source, .. } = self {
            return source.is_numeric();
        }
        matches!(
            self,
            Error::GuardBand { .. }
                | Error::CutoffTooTight { .. }
                | Error::StepTooCoarse { .. }
                | Error::WordTooLong { .. }
        )
    }
}
