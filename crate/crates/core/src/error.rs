//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// RLE variants only apply to sorted columns.
    #[error("requires sorted column")]
    RequiresSortedColumn,

    /// Predicate operand type does not match the column kind.
    #[error("type mismatch: column is {column_kind}, operand is {operand_kind}")]
    TypeMismatch {
        column_kind: &'static str,
        operand_kind: &'static str,
    },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("bit length mismatch: {left} vs {right}")]
    BitLengthMismatch { left: u64, right: u64 },

    #[error("row count mismatch: {left} vs {right}")]
    RowCountMismatch { left: usize, right: usize },

    #[error("cannot build a Huffman code for an empty column")]
    EmptyColumn,

    #[error("corrupt bitstream: {0}")]
    CorruptStream(String),

    #[error("malformed file: {0}")]
    MalformedFile(String),

    #[error("unknown codec tag {0}")]
    UnknownCodecTag(u8),

    #[error("invalid generator arguments: {0}")]
    InvalidArguments(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
