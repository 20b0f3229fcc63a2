use thiserror::Error;

/// Errors raised by the simulator and the analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("entry count {found} does not match shape {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, found: usize },

    #[error("qubit index {index} out of range for {qubits} qubits")]
    QubitOutOfRange { index: usize, qubits: usize },

    #[error("qubit subset must be strictly increasing: {0:?}")]
    UnsortedSubset(Vec<usize>),

    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),

    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),

    #[error("eigensolver did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("trace drifted to {0} (beyond renormalization window)")]
    TraceDrift(f64),

    #[error("noise rate {0} outside [0, 1]")]
    InvalidRate(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("layer {layer}: partition violation: {detail}")]
    Partition { layer: usize, detail: String },

    #[error("layer {layer}: gate `{gate}` has fan-in {fan_in} above declared k = {k}")]
    FanIn { layer: usize, gate: String, fan_in: usize, k: usize },

    #[error("layer {layer}: width mismatch: {detail}")]
    WidthMismatch { layer: usize, detail: String },
}

impl Error {
    /// True for failures caused by configured size limits rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::CapExceeded(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
