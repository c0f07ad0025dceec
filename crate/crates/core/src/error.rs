//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("qubit {0} appears more than once in a single operation")]
    DuplicateQubit(usize),

    #[error("swap blocks have different widths ({left} vs {right})")]
    BlockWidthMismatch { left: usize, right: usize },

    #[error("{requested} qubits exceeds the configured capacity of {max}")]
    Capacity { requested: usize, max: usize },

    #[error("amplitude buffer has length {actual}, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("states act on different registers ({left} vs {right} qubits)")]
    SizeMismatch { left: usize, right: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid Dicke parameters: k={k}, m={m} (need 1 <= k <= m)")]
    InvalidDicke { m: usize, k: usize },

    #[error("orbital {0} occupied twice")]
    DuplicateOrbital(usize),

    #[error("orbital {orbital} does not fit in {bits} internal qubits")]
    OrbitalOutOfRange { orbital: usize, bits: usize },

    #[error("side convention violated: {0}")]
    SideConvention(String),

    #[error("input is not antisymmetric (residual {residual:.3e})")]
    NotAntisymmetric { residual: f64 },

    #[error("input state has norm {norm}, expected 1")]
    NotNormalized { norm: f64 },

    #[error("integer overflow while counting permutations")]
    Overflow,

    #[error("invalid options: {0}")]
    InvalidOptions(String),

    #[error("input is not a single Slater determinant")]
    NotDeterminant,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
