use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("graph has no edges after removing self-loops and duplicates")]
    NoEdges,
    #[error("line {line}: expected at least two node labels, found {tokens}")]
    MalformedLine { line: usize, tokens: usize },
    #[error("edge ({u}, {v}) references a node outside 0..{n}")]
    EdgeOutOfRange { u: usize, v: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("vertex index {index} out of range for {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("spin value {0} is not -1 or +1")]
    InvalidSpin(i8),
    #[error("subproblem subset is empty")]
    EmptySubset,
    #[error("vertex {0} appears more than once in the subset")]
    DuplicateVertex(usize),
    #[error("exact solver supports at most {max} variables, got {k}")]
    TooManyVariables { k: usize, max: usize },
    #[error("subproblem needs {k} qubits but the statevector cap is {max} (raise --max-qubits)")]
    TooManyQubits { k: usize, max: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
