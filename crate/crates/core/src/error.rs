use thiserror::Error;

/// Errors reported by the dynamic structures and the transforms built on them.
///
/// Out-of-range indices are programming errors and panic instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value would become negative ({value} + {delta})")]
    Underflow { value: u64, delta: i64 },

    #[error("value overflows 64 bits ({value} + {delta})")]
    Overflow { value: u64, delta: i64 },

    #[error("block is full ({capacity} elements), split it first")]
    CapacityExceeded { capacity: usize },

    #[error("bit at position {0} is set; only zeros can be deleted")]
    DeleteOne(usize),

    #[error("bit at position {0} is already set")]
    AlreadySet(usize),

    #[error("symbol {0} has no code in this alphabet")]
    UnknownSymbol(u32),

    #[error("not found")]
    NotFound,

    #[error("empty input")]
    EmptyInput,

    #[error("malformed input: {0}")]
    Format(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
