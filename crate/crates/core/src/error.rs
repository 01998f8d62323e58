use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("register of {0} qubits is outside 1..={max}", max = crate::MAX_QUBITS)]
    QubitCount(usize),
    #[error("amplitude vector of length {0} is not a power of two")]
    AmplitudeLength(usize),
    #[error("basis index {index} out of range for {n_qubits} qubits")]
    BasisIndex { index: usize, n_qubits: usize },
    #[error("qubit {qubit} out of range for {n_qubits} qubits")]
    QubitIndex { qubit: usize, n_qubits: usize },
    #[error("control and target are both qubit {0}")]
    SameQubit(usize),
    #[error("qubit {0} listed more than once")]
    DuplicateQubit(usize),
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("operator is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("expected a two-qubit state, got {0} qubits")]
    NotTwoQubit(usize),
    #[error("expectation value has imaginary residue {0:e}")]
    NonHermitian(f64),
    #[error("state is not real up to a global phase (imaginary residue {0:e})")]
    RebitViolation(f64),
    #[error("expected {expected}-bit outcomes, found {found}")]
    OutcomeArity { expected: usize, found: usize },
    #[error("invalid outcome label {0:?}")]
    OutcomeLabel(String),
    #[error("counts sum to {sum} but record declares {shots} shots")]
    ShotMismatch { sum: u64, shots: u64 },
    #[error("shot count must be positive")]
    NoShots,
    #[error("expected {expected} counts, got {found}")]
    ModeMismatch { expected: String, found: String },
    #[error("circuit op references qubit {qubit} of a {width}-qubit register")]
    CircuitQubit { qubit: usize, width: usize },
}
