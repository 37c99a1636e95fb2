use thiserror::Error;

use crate::report::ValidationReport;
use crate::symbol::Sym;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet error: {0}")]
    Alphabet(String),
    #[error("input symbol {0:?} is not in the input alphabet")]
    InputSymbol(Sym),
    #[error("witness index {index} out of range at step {step} ({available} branches)")]
    WitnessIndex { step: usize, index: usize, available: usize },
    #[error("deterministic mode on a nondeterministic machine (step {step} has {branches} branches)")]
    NotDeterministic { step: usize, branches: usize },
    #[error("machine is not well formed:\n{0}")]
    Invalid(ValidationReport),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("witness does not accept: {0}")]
    WitnessRejected(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
}
