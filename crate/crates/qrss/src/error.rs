//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by field arithmetic, codecs, state simulation, the
/// sharing schemes, and the security audit.
#[derive(Debug, Error)]
pub enum Error {
    /// The requested modulus is not a prime number.
    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    /// The requested modulus exceeds the supported range.
    #[error("modulus {0} exceeds the supported bound 2^31")]
    ModulusTooLarge(u64),

    /// Multiplicative inverse of zero was requested.
    #[error("division by zero in F_{0}")]
    DivisionByZero(u64),

    /// Values from different field contexts were combined.
    #[error("field context mismatch: F_{0} vs F_{1}")]
    ContextMismatch(u64, u64),

    /// Evaluation points must be pairwise distinct.
    #[error("evaluation points must be pairwise distinct")]
    DuplicatePoints,

    /// Exponent range for a power matrix ran backwards.
    #[error("invalid exponent range: {lo}..={hi}")]
    InvalidExponentRange { lo: u64, hi: u64 },

    /// Matrix has no inverse over the field.
    #[error("matrix is singular over F_{0}")]
    SingularMatrix(u64),

    /// Operand shapes do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A basis digit lies outside `[0, q)`.
    #[error("basis digit {digit} out of range for local dimension {q}")]
    DigitOutOfRange { digit: u64, q: u64 },

    /// Superposition summed to the zero vector.
    #[error("state is the zero vector")]
    ZeroState,

    /// Dense density operator would exceed the dimension cap.
    #[error("density operator dimension {dim} exceeds cap {cap}")]
    DensityTooLarge { dim: u64, cap: u64 },

    /// The classical transform of an index map is not invertible, so the
    /// induced basis map is not unitary.
    #[error("index map matrix is not invertible; induced transform is not unitary")]
    NotUnitary,

    /// Qudit positions are empty, repeated, or out of range.
    #[error("invalid qudit positions: {0}")]
    InvalidPositions(String),

    /// Scheme parameters violate an invariant.
    #[error("invalid scheme parameters: {0}")]
    InvalidParams(String),

    /// Decoded state failed to factor into secret and residual.
    #[error("decode integrity failure: {0}")]
    DecodeIntegrity(String),

    /// An audit case violates the hypothesis of the security condition.
    #[error("audit case outside hypothesis: {0}")]
    OutOfHypothesis(String),

    /// An index set is malformed for the given parameters.
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    /// A text file or flag value could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
