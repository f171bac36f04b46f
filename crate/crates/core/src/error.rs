use thiserror::Error;

/// Failure to parse the text syntax for chords, elements or generators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?}: {reason}")]
pub struct ParseError {
    pub input: String,
    pub reason: String,
}

impl ParseError {
    pub fn new(input: &str, reason: &str) -> Self {
        ParseError { input: input.to_string(), reason: reason.to_string() }
    }
}

/// Errors raised by the move operations on module operation records.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("target of the first operation does not match the source of the second")]
    GeneratorMismatch,
    #[error("move (1) needs non-empty chord sequences on both sides")]
    EmptySequence,
    #[error("product at the junction vanishes")]
    ZeroJunction,
    #[error("position {0} is out of range")]
    Position(usize),
    #[error("consecutive chords at the position multiply to a non-zero element")]
    NonzeroJunction,
    #[error("chord at the position has length {0}, expected 4")]
    NotFullOrbit(u32),
}

/// Errors shared by the computations that consume operation closures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComputeError {
    #[error("closure bounds do not cover the query: {0}")]
    InsufficientClosure(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
