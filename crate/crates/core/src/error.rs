use thiserror::Error;

/// Errors raised by circuit construction, simulation and the DLP pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("qubit {qubit} out of range for width {width}")]
    QubitOutOfRange { qubit: usize, width: usize },
    #[error("oracle `{0}` is not registered")]
    OracleNotRegistered(String),
    #[error("circuit contains measurement gates; use run_branches or coherent_run")]
    MeasurementPresent,
    #[error("input has {got} bits, circuit expects {expected}")]
    InputLength { expected: usize, got: usize },
    #[error("classical bit {0} read before it was written")]
    UndefinedClassicalBit(usize),
    #[error("gate cannot be inverted: {0}")]
    NotInvertible(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("exhaustive bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("not a safe prime: {0}")]
    NotSafePrime(u64),
    #[error("{g} is not a generator modulo {q}")]
    NotGenerator { g: u64, q: u64 },
    #[error("element {x} is not a unit modulo {q}")]
    NotUnit { x: u64, q: u64 },
    #[error("algorithm invariant violated: {0}")]
    Invariant(String),
    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
