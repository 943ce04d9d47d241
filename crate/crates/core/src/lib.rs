//! In-memory compressed column store.
//!
//! Codecs that answer queries directly on compressed data (dictionary,
//! run-length, WAH bitmap), Huffman as the decode-only counterexample, an
//! analytic space model, and an advisor that picks a scheme from column
//! statistics.

pub mod advisor;
pub mod bitmap;
pub mod bitpack;
pub mod column;
pub mod dict;
pub mod encoded;
pub mod error;
pub mod generate;
pub mod huffman;
pub mod instrument;
pub mod io;
pub mod query;
pub mod rle;
pub mod wah;

pub use column::{Column, ColumnKind, ColumnStats, ColumnValues, Value};
pub use encoded::{EncodedColumn, Scheme};
pub use error::{Error, Result};
pub use query::{brute_force_query, CmpOp, Operand, Predicate, QueryResult};
