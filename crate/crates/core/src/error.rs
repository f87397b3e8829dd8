use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("capacity exceeded: {requested} qubits requested, at most {max} supported")]
    Capacity { requested: usize, max: usize },

    #[error("qubit {qubit} out of range for a {n}-qubit register")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("duplicate target qubit {0}")]
    DuplicateTarget(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("probabilities sum to {0}, expected 1")]
    ProbabilitySum(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("gate `{gate}` is {}, beyond what a {rounds}-round protocol supports", level_text(*.level))]
    NotRealizable {
        gate: String,
        level: Option<usize>,
        rounds: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

fn level_text(level: Option<usize>) -> String {
    match level {
        Some(k) => format!("at hierarchy level {k}"),
        None => "outside the searched hierarchy levels".to_string(),
    }
}
