use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("qubit index {0} listed more than once")]
    DuplicateQubit(usize),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("fidelity has non-negligible imaginary part {0:e}")]
    ComplexFidelity(f64),

    #[error("invalid network spec: {0}")]
    InvalidSpec(String),

    #[error("layer {layer}, perceptron {perceptron} does not exist")]
    InvalidIndex { layer: usize, perceptron: usize },

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("invalid hyperparameter: {0}")]
    InvalidHyperParams(String),

    #[error("shape not supported by the unrolled oracle: {0}")]
    UnsupportedShape(String),

    #[error("cannot replace {requested} pairs in a set of {available}")]
    TooManyReplacements { requested: usize, available: usize },
}

impl Error {
    /// True for violations of a numerical invariant (as opposed to bad
    /// input or configuration).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian(_)
                | Error::NotUnitary(_)
                | Error::NotNormalized(_)
                | Error::ComplexFidelity(_)
        )
    }
}
