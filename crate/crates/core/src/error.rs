use thiserror::Error;

/// Errors produced by construction and evaluation routines.
///
/// All mathematical results are exact; errors only ever signal invalid
/// arguments, never numerical failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Level outside the supported range `1..=MAX_LEVEL`.
    #[error("level m={0} outside supported range 1..={max}", max = crate::exact::MAX_LEVEL)]
    LevelOutOfRange(u32),
    /// Shift bit length does not match the requested level.
    #[error("shift has {got} bits, expected m={expected}")]
    ShiftLength { expected: u32, got: usize },
    /// A value that must lie on the dyadic grid Q(2^m) does not.
    #[error("{0} is not an m-bit value at level {1}")]
    NotMBit(String, u32),
    /// Argument outside its documented domain.
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    /// Digit access on the dyadic value one (numerator 2^m); its digit
    /// expansion at level m is undefined.
    #[error("digit access on the unit dyadic value")]
    DigitOfOne,
    /// Point sets that must have equal cardinality do not.
    #[error("point sets have mismatched sizes {0} and {1}")]
    SizeMismatch(u64, u64),
    /// An operation that requires a nonempty point set received an empty one.
    #[error("empty point set")]
    EmptySet,
}

pub type Result<T> = std::result::Result<T, Error>;
