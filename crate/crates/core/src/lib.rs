//! Nonclassicality witnesses for a codirectional asymmetric nonlinear coupler.
//!
//! A linear waveguide (mode `a`) is evanescently coupled to a second-harmonic
//! generating waveguide (fundamental `b1`, harmonic `b2`). The crate provides
//! closed-form first-order evolution coefficients and witness values, an
//! exact truncated Fock-space reference, moment-based witness reductions and
//! a parameter sweep driver.

pub mod analytic;
pub mod coeffs;
pub mod error;
pub mod fock;
pub mod moments;
pub mod sweep;
pub mod witness;

pub use coeffs::{evolution_coefficients, CouplerParams, EvolutionCoefficients};
pub use error::{Error, GuardBand, Result};
pub use witness::{Bipartition, CoherentInput, Mode, ModePair, TripartiteVerdict, WitnessKind, WitnessValue};
