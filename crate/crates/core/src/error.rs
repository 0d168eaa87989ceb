use thiserror::Error;

/// Errors raised by the landscape toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown Pauli character {0:?}")]
    UnknownPauliChar(char),
    #[error("empty Pauli label")]
    EmptyLabel,
    #[error("qubit count mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },
    #[error("gate acts twice on qubit {0}")]
    RepeatedQubit(usize),
    #[error("rotation axis must not be the identity")]
    IdentityAxis,
    #[error("observable is the identity; its loss is constant")]
    IdentityObservable,
    #[error("correlated parameters: index {0} used more than once")]
    CorrelatedParameter(usize),
    #[error("parameter index {0} never used")]
    MissingParameter(usize),
    #[error("parameter index {index} out of range for {num_params} parameters")]
    ParameterOutOfRange { index: usize, num_params: usize },
    #[error("point has {got} coordinates, circuit has {expected} parameters")]
    PointLength { got: usize, expected: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what} is degenerate for n = {n}")]
    Degenerate { what: &'static str, n: u32 },
    #[error("grid of {points} points exceeds the guard of {guard}")]
    GridTooLarge { points: u128, guard: u128 },
    #[error("{0} qubits exceed the simulator cap of {1}")]
    TooManyQubits(usize, usize),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("observable weights violate sum of squares <= 1 (got {0})")]
    ObservableNorm(String),
    #[error("duplicate Pauli term {0}")]
    DuplicateTerm(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_size(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::SizeMismatch { left, right })
    }
}
