use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid distance ({d_z},{d_x}): {reason}")]
    InvalidDistance { d_z: usize, d_x: usize, reason: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown architecture preset `{name}` (available: {available})")]
    UnknownPreset { name: String, available: String },

    #[error("invalid architecture graph: {0}")]
    InvalidGraph(String),

    #[error("node {0} is not part of the architecture graph")]
    UnknownNode(usize),

    #[error("circuit needs {needed} qubits but the architecture has {available}")]
    CircuitTooLarge { needed: usize, available: usize },

    #[error("layout does not cover circuit qubit {0}")]
    IncompleteLayout(usize),

    #[error("record has {got} slots, code expects {expected}")]
    RecordMismatch { got: usize, expected: usize },

    #[error("no perfect matching exists")]
    InfeasibleMatching,

    #[error("no records to aggregate")]
    EmptyInput,

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
