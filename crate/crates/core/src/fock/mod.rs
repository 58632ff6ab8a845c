//! Exact reference dynamics on a truncated three-mode Fock space.

mod evolve;
mod generator;
mod state;
mod word;

pub use evolve::{
    default_steps, evolve, propagate, Evolution, Integrator, DEFAULT_PHASE_PER_STEP, STEP_TOLERANCE,
};
pub use generator::{generator_action, Generator, GeneratorImage};
pub use state::{coherent_product_state, FockCutoffs, StateVector, DEFAULT_MAX_DIM, MAX_TRUNCATION_DEFICIT};
pub use word::{moment, moment_with_limit, Letter, OperatorWord, MAX_WORD_LEN};
