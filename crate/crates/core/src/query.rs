//! Predicate rewriting and query execution directly on compressed columns.
//!
//! Each codec gets the cheapest route its layout supports: RLE answers
//! equality from one located run, bitmaps popcount WAH words, dictionary
//! codes are scanned as packed integers. Only Huffman falls back to full
//! decode plus scan, and that fallback goes through the decode counter so
//! tests can prove the other routes never materialize values.

use serde::{Deserialize, Serialize};

use crate::column::{Column, Value};
use crate::dict::Dictionary;
use crate::encoded::EncodedColumn;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CmpOp {
    Eq,
    Leq,
}

/// Predicate operand, in value space or rewritten code space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Operand {
    Str(String),
    Int(i32),
    /// Code-space operand; `dict_len` records the dictionary generation the
    /// rewrite was made against.
    Code { code: u32, dict_len: usize },
    /// Sentinel for a rewritten predicate that can match nothing.
    Empty,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Predicate {
    pub column: String,
    pub op: CmpOp,
    pub operand: Operand,
}

impl Predicate {
    pub fn eq(column: impl Into<String>, operand: impl Into<Value>) -> Self {
        Predicate {
            column: column.into(),
            op: CmpOp::Eq,
            operand: match operand.into() {
                Value::Int(v) => Operand::Int(v),
                Value::Str(v) => Operand::Str(v),
            },
        }
    }

    pub fn leq(column: impl Into<String>, operand: impl Into<Value>) -> Self {
        Predicate {
            op: CmpOp::Leq,
            ..Predicate::eq(column, operand)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum QueryResult {
    Count(u64),
    RowIds(Vec<u32>),
    Projected(Vec<Value>),
}

impl QueryResult {
    pub fn count(&self) -> u64 {
        match self {
            QueryResult::Count(n) => *n,
            QueryResult::RowIds(r) => r.len() as u64,
            QueryResult::Projected(v) => v.len() as u64,
        }
    }
}

/// Rewrite a value-space string predicate into code space.
///
/// An absent EQ operand becomes the `Empty` sentinel (the query is well
/// formed and matches nothing); an absent LEQ operand floors to the greatest
/// dictionary entry below it.
pub fn rewrite(pred: &Predicate, dict: &Dictionary) -> Result<Predicate> {
    let s = match &pred.operand {
        Operand::Str(s) => s,
        other => {
            return Err(Error::TypeMismatch {
                column_kind: "string",
                operand_kind: match other {
                    Operand::Int(_) => "int32",
                    _ => "code",
                },
            })
        }
    };
    let operand = match pred.op {
        CmpOp::Eq => match dict.code_of(s) {
            Some(code) => Operand::Code {
                code,
                dict_len: dict.len(),
            },
            None => Operand::Empty,
        },
        CmpOp::Leq => match dict.floor_code(s) {
            Some(code) => Operand::Code {
                code,
                dict_len: dict.len(),
            },
            None => Operand::Empty,
        },
    };
    Ok(Predicate {
        column: pred.column.clone(),
        op: pred.op,
        operand,
    })
}

/// Ground truth: full scan of the uncompressed values.
pub fn brute_force_query(
    col: &Column,
    pred: &Predicate,
    project: Option<&Column>,
) -> Result<QueryResult> {
    if let Some(p) = project {
        if p.row_count() != col.row_count() {
            return Err(Error::RowCountMismatch {
                left: col.row_count(),
                right: p.row_count(),
            });
        }
    }
    let rows: Vec<u32> = match (&pred.operand, col.values()) {
        (Operand::Int(t), crate::column::ColumnValues::Int32(v)) => v
            .iter()
            .enumerate()
            .filter(|(_, &x)| match pred.op {
                CmpOp::Eq => x == *t,
                CmpOp::Leq => x <= *t,
            })
            .map(|(i, _)| i as u32)
            .collect(),
        (Operand::Str(t), crate::column::ColumnValues::String(v)) => v
            .iter()
            .enumerate()
            .filter(|(_, x)| match pred.op {
                CmpOp::Eq => *x == t,
                CmpOp::Leq => x.as_str() <= t.as_str(),
            })
            .map(|(i, _)| i as u32)
            .collect(),
        (Operand::Empty, _) => Vec::new(),
        (Operand::Int(_), _) => {
            return Err(Error::TypeMismatch {
                column_kind: col.kind().name(),
                operand_kind: "int32",
            })
        }
        (Operand::Str(_), _) => {
            return Err(Error::TypeMismatch {
                column_kind: col.kind().name(),
                operand_kind: "string",
            })
        }
        (Operand::Code { .. }, _) => {
            return Err(Error::TypeMismatch {
                column_kind: col.kind().name(),
                operand_kind: "code",
            })
        }
    };
    Ok(match project {
        Some(p) => QueryResult::Projected(
            rows.iter()
                .map(|&r| p.values().get(r as usize).unwrap())
                .collect(),
        ),
        None => QueryResult::RowIds(rows),
    })
}

/// COUNT(*) WHERE A = t, routed per codec without decompression (except
/// Huffman, which has no other route).
pub fn count_eq(enc: &EncodedColumn, t: &Value) -> Result<u64> {
    match (enc, t) {
        (EncodedColumn::WordDict(c), Value::Str(s)) => Ok(match c.dict().code_of(s) {
            Some(code) => c.codes().iter().filter(|&&x| x == code).count() as u64,
            None => 0,
        }),
        (EncodedColumn::BitDict(c), Value::Int(v)) => Ok(match c.code_of(*v) {
            Some(code) => c.packed().iter().filter(|&x| x == code).count() as u64,
            None => 0,
        }),
        (EncodedColumn::Rle(c), Value::Int(v)) => {
            Ok(c.locate(*v).map(|r| r.length as u64).unwrap_or(0))
        }
        (EncodedColumn::Bitmap(c), Value::Int(v)) => Ok(c
            .bitmap_ref(*v)
            .map(|b| b.count_ones())
            .unwrap_or(0)),
        (EncodedColumn::Huffman(c), t) => {
            let col = c.decode()?;
            Ok(brute_force_query(&col, &Predicate::eq("", t.clone()), None)?.count())
        }
        (enc, t) => Err(Error::TypeMismatch {
            column_kind: enc.kind().name(),
            operand_kind: t.kind_name(),
        }),
    }
}

/// COUNT(*) WHERE A <= k.
pub fn count_leq(enc: &EncodedColumn, t: &Value) -> Result<u64> {
    match (enc, t) {
        (EncodedColumn::WordDict(c), Value::Str(s)) => Ok(match c.dict().floor_code(s) {
            Some(code) => c.codes().iter().filter(|&&x| x <= code).count() as u64,
            None => 0,
        }),
        (EncodedColumn::BitDict(c), Value::Int(v)) => Ok(match c.floor_code(*v) {
            Some(code) => c.packed().iter().filter(|&x| x <= code).count() as u64,
            None => 0,
        }),
        (EncodedColumn::Rle(c), Value::Int(v)) => Ok(c.rows_leq(*v) as u64),
        (EncodedColumn::Bitmap(c), Value::Int(v)) => Ok(c.or_leq(*v)?.count_ones()),
        (EncodedColumn::Huffman(c), t) => {
            let col = c.decode()?;
            Ok(brute_force_query(&col, &Predicate::leq("", t.clone()), None)?.count())
        }
        (enc, t) => Err(Error::TypeMismatch {
            column_kind: enc.kind().name(),
            operand_kind: t.kind_name(),
        }),
    }
}

/// Matching row ids, ascending.
pub fn row_ids_eq(enc: &EncodedColumn, t: &Value) -> Result<Vec<u32>> {
    match (enc, t) {
        (EncodedColumn::WordDict(c), Value::Str(s)) => Ok(match c.dict().code_of(s) {
            Some(code) => collect_rows(c.codes().iter().map(|&x| x == code)),
            None => Vec::new(),
        }),
        (EncodedColumn::BitDict(c), Value::Int(v)) => Ok(match c.code_of(*v) {
            Some(code) => collect_rows(c.packed().iter().map(|x| x == code)),
            None => Vec::new(),
        }),
        (EncodedColumn::Rle(c), Value::Int(v)) => Ok(c
            .locate(*v)
            .map(|r| (r.start..r.end()).collect())
            .unwrap_or_default()),
        (EncodedColumn::Bitmap(c), Value::Int(v)) => Ok(c
            .bitmap_ref(*v)
            .map(|b| b.positions().iter().map(|&p| p as u32).collect())
            .unwrap_or_default()),
        (EncodedColumn::Huffman(c), t) => {
            let col = c.decode()?;
            match brute_force_query(&col, &Predicate::eq("", t.clone()), None)? {
                QueryResult::RowIds(r) => Ok(r),
                _ => unreachable!(),
            }
        }
        (enc, t) => Err(Error::TypeMismatch {
            column_kind: enc.kind().name(),
            operand_kind: t.kind_name(),
        }),
    }
}

fn collect_rows(matches: impl Iterator<Item = bool>) -> Vec<u32> {
    matches
        .enumerate()
        .filter(|&(_, m)| m)
        .map(|(i, _)| i as u32)
        .collect()
}

fn gather(colb: &Column, rows: impl IntoIterator<Item = u32>) -> Vec<Value> {
    rows.into_iter()
        .map(|r| colb.values().get(r as usize).unwrap())
        .collect()
}

fn check_row_counts(enc: &EncodedColumn, colb: &Column) -> Result<()> {
    if enc.row_count() != colb.row_count() {
        return Err(Error::RowCountMismatch {
            left: enc.row_count(),
            right: colb.row_count(),
        });
    }
    Ok(())
}

/// SELECT B WHERE A = t, in row order. The RLE route reads B's run slice
/// [s, s+l) straight from the located run.
pub fn project_eq(enc: &EncodedColumn, colb: &Column, t: &Value) -> Result<Vec<Value>> {
    check_row_counts(enc, colb)?;
    match (enc, t) {
        (EncodedColumn::Rle(c), Value::Int(v)) => Ok(c
            .locate(*v)
            .map(|r| gather(colb, r.start..r.end()))
            .unwrap_or_default()),
        _ => Ok(gather(colb, row_ids_eq(enc, t)?)),
    }
}

/// SELECT B WHERE A <= k. The bitmap route ORs the per-value bitmaps up to
/// k and walks the set positions; the RLE route is the prefix [0, rows_leq).
pub fn select_leq(enc: &EncodedColumn, colb: &Column, t: &Value) -> Result<Vec<Value>> {
    check_row_counts(enc, colb)?;
    match (enc, t) {
        (EncodedColumn::Bitmap(c), Value::Int(v)) => {
            let rows = c.or_leq(*v)?.positions();
            Ok(gather(colb, rows.iter().map(|&p| p as u32)))
        }
        (EncodedColumn::Rle(c), Value::Int(v)) => Ok(gather(colb, 0..c.rows_leq(*v))),
        (EncodedColumn::WordDict(c), Value::Str(s)) => Ok(match c.dict().floor_code(s) {
            Some(code) => gather(colb, collect_rows(c.codes().iter().map(|&x| x <= code))),
            None => Vec::new(),
        }),
        (EncodedColumn::BitDict(c), Value::Int(v)) => Ok(match c.floor_code(*v) {
            Some(code) => gather(colb, collect_rows(c.packed().iter().map(|x| x <= code))),
            None => Vec::new(),
        }),
        (EncodedColumn::Huffman(c), t) => {
            let col = c.decode()?;
            match brute_force_query(&col, &Predicate::leq("", t.clone()), Some(colb))? {
                QueryResult::Projected(v) => Ok(v),
                _ => unreachable!(),
            }
        }
        (enc, t) => Err(Error::TypeMismatch {
            column_kind: enc.kind().name(),
            operand_kind: t.kind_name(),
        }),
    }
}

/// Evaluate a value-space predicate against any encoded column, with an
/// optional projection column. Word-DICT predicates are rewritten into code
/// space internally via the column's own dictionary.
pub fn execute(
    enc: &EncodedColumn,
    pred: &Predicate,
    project: Option<&Column>,
) -> Result<QueryResult> {
    let value = match &pred.operand {
        Operand::Int(v) => Value::Int(*v),
        Operand::Str(s) => Value::Str(s.clone()),
        Operand::Empty => {
            return Ok(match project {
                Some(_) => QueryResult::Projected(Vec::new()),
                None => QueryResult::Count(0),
            })
        }
        Operand::Code { .. } => {
            return Err(Error::TypeMismatch {
                column_kind: enc.kind().name(),
                operand_kind: "code",
            })
        }
    };
    match (project, pred.op) {
        (None, CmpOp::Eq) => Ok(QueryResult::Count(count_eq(enc, &value)?)),
        (None, CmpOp::Leq) => Ok(QueryResult::Count(count_leq(enc, &value)?)),
        (Some(b), CmpOp::Eq) => Ok(QueryResult::Projected(project_eq(enc, b, &value)?)),
        (Some(b), CmpOp::Leq) => Ok(QueryResult::Projected(select_leq(enc, b, &value)?)),
    }
}
