//! Uncompressed column model and statistics.
//!
//! A [`Column`] is an immutable typed sequence (strings or 32-bit integers)
//! carrying the statistics every codec and the advisor consume: row count,
//! domain (sorted distinct values) and sortedness.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single column value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Value {
    Int(i32),
    Str(String),
}

impl Value {
    pub fn kind(&self) -> ColumnKind {
        match self {
            Value::Int(_) => ColumnKind::Int32,
            Value::Str(_) => ColumnKind::String,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Value::Int(_) => "int32",
            Value::Str(_) => "string",
        }
    }
}

impl From<i32> for Value {
    fn from(v: i32) -> Self {
        Value::Int(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_owned())
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Str(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColumnKind {
    Int32,
    String,
}

impl ColumnKind {
    pub fn name(self) -> &'static str {
        match self {
            ColumnKind::Int32 => "int32",
            ColumnKind::String => "string",
        }
    }
}

/// Typed value storage. Kept as homogeneous vectors rather than `Vec<Value>`
/// so scans compare raw `i32`s / `&str`s.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColumnValues {
    Int32(Vec<i32>),
    String(Vec<String>),
}

impl ColumnValues {
    pub fn len(&self) -> usize {
        match self {
            ColumnValues::Int32(v) => v.len(),
            ColumnValues::String(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> Option<Value> {
        match self {
            ColumnValues::Int32(v) => v.get(i).map(|&x| Value::Int(x)),
            ColumnValues::String(v) => v.get(i).map(|x| Value::Str(x.clone())),
        }
    }

    pub fn kind(&self) -> ColumnKind {
        match self {
            ColumnValues::Int32(_) => ColumnKind::Int32,
            ColumnValues::String(_) => ColumnKind::String,
        }
    }

    fn is_sorted(&self) -> bool {
        match self {
            ColumnValues::Int32(v) => v.windows(2).all(|w| w[0] <= w[1]),
            ColumnValues::String(v) => v.windows(2).all(|w| w[0] <= w[1]),
        }
    }

    fn distinct_sorted(&self) -> ColumnValues {
        match self {
            ColumnValues::Int32(v) => {
                let mut d = v.clone();
                d.sort_unstable();
                d.dedup();
                ColumnValues::Int32(d)
            }
            ColumnValues::String(v) => {
                let mut d = v.clone();
                d.sort();
                d.dedup();
                ColumnValues::String(d)
            }
        }
    }
}

/// An uncompressed column with precomputed statistics.
///
/// Immutable after construction; all derived fields (domain, sortedness) are
/// computed once in [`Column::new`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    name: String,
    values: ColumnValues,
    domain: ColumnValues,
    is_sorted: bool,
}

impl Column {
    pub fn new(name: impl Into<String>, values: ColumnValues) -> Self {
        let domain = values.distinct_sorted();
        let is_sorted = values.is_sorted();
        Column {
            name: name.into(),
            values,
            domain,
            is_sorted,
        }
    }

    pub fn from_ints(name: impl Into<String>, values: Vec<i32>) -> Self {
        Self::new(name, ColumnValues::Int32(values))
    }

    pub fn from_strings(name: impl Into<String>, values: Vec<String>) -> Self {
        Self::new(name, ColumnValues::String(values))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ColumnKind {
        self.values.kind()
    }

    pub fn values(&self) -> &ColumnValues {
        &self.values
    }

    /// Typed access for integer columns.
    pub fn ints(&self) -> Option<&[i32]> {
        match &self.values {
            ColumnValues::Int32(v) => Some(v),
            ColumnValues::String(_) => None,
        }
    }

    pub fn strings(&self) -> Option<&[String]> {
        match &self.values {
            ColumnValues::String(v) => Some(v),
            ColumnValues::Int32(_) => None,
        }
    }

    pub fn row_count(&self) -> usize {
        self.values.len()
    }

    /// Distinct values present in the column, ascending.
    pub fn domain(&self) -> &ColumnValues {
        &self.domain
    }

    pub fn domain_size(&self) -> usize {
        self.domain.len()
    }

    pub fn is_sorted(&self) -> bool {
        self.is_sorted
    }

    pub fn stats(&self) -> ColumnStats {
        ColumnStats {
            kind: self.kind(),
            row_count: self.row_count(),
            domain_size: self.domain_size(),
            is_sorted: self.is_sorted,
        }
    }

    pub fn ints_or_err(&self) -> Result<&[i32]> {
        self.ints().ok_or(Error::TypeMismatch {
            column_kind: self.kind().name(),
            operand_kind: "int32",
        })
    }

    pub fn strings_or_err(&self) -> Result<&[String]> {
        self.strings().ok_or(Error::TypeMismatch {
            column_kind: self.kind().name(),
            operand_kind: "string",
        })
    }
}

/// The inputs to the scheme advisor and the analytic space model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnStats {
    pub kind: ColumnKind,
    pub row_count: usize,
    pub domain_size: usize,
    pub is_sorted: bool,
}
