use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("qubit {0} listed more than once")]
    DuplicateQubit(usize),

    #[error("gate of arity {expected} applied to {found} target(s)")]
    ArityMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("matrix is not unitary (max |U†U - I| = {0:e})")]
    NotUnitary(f64),

    #[error("Kraus set violates completeness (max |ΣK†K - I| = {0:e})")]
    NotCptp(f64),

    #[error("measurement basis is not orthonormal (max deviation {0:e})")]
    NonOrthonormalBasis(f64),

    #[error("zero-probability outcome at {stage} (p = {probability:e})")]
    ZeroProbability { stage: String, probability: f64 },

    #[error("partial trace needs at least one kept qubit")]
    EmptyKeep,

    #[error("{name} = {value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("state is not GHZ-class (weight {0:e} outside |0…0⟩ and |1…1⟩)")]
    NotGhzClass(f64),

    #[error("qubit label `{0}` appears twice")]
    DuplicateLabel(String),

    #[error("unknown qubit label `{0}`")]
    UnknownLabel(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("qasm line {line}: {message}")]
    Qasm { line: usize, message: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
