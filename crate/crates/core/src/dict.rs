//! Dictionary encodings.
//!
//! word-DICT maps each distinct string to a 32-bit code via a global
//! dictionary; codes are dense, 1-based and assigned in ascending
//! lexicographic order, so code order mirrors string order and range
//! predicates survive rewriting.
//!
//! bit-DICT re-codes integers into the minimal fixed width
//! `max(1, ceil(log2 D))`. For a dense domain `0..D` the code is the value
//! itself and no mapping table is needed; otherwise the sorted domain array
//! is the code map.

use serde::{Deserialize, Serialize};

use crate::bitpack::{width_for_domain, BitPackedVector};
use crate::column::{Column, ColumnStats, ColumnValues};
use crate::error::Result;

/// Order-preserving global dictionary for one string column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dictionary {
    /// Distinct strings in ascending lexicographic order; entry i has code i+1.
    entries: Vec<String>,
}

impl Dictionary {
    pub fn from_sorted_entries(entries: Vec<String>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0] < w[1]));
        Dictionary { entries }
    }

    pub fn entries(&self) -> &[String] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// 1-based code of a string, if present.
    pub fn code_of(&self, value: &str) -> Option<u32> {
        self.entries
            .binary_search_by(|e| e.as_str().cmp(value))
            .ok()
            .map(|i| i as u32 + 1)
    }

    /// Code of the greatest entry <= `value`; `None` if all entries exceed it.
    pub fn floor_code(&self, value: &str) -> Option<u32> {
        match self.entries.binary_search_by(|e| e.as_str().cmp(value)) {
            Ok(i) => Some(i as u32 + 1),
            Err(0) => None,
            Err(i) => Some(i as u32),
        }
    }

    pub fn value_of(&self, code: u32) -> Option<&str> {
        if code == 0 {
            return None;
        }
        self.entries.get(code as usize - 1).map(|s| s.as_str())
    }
}

/// String column encoded as 32-bit dictionary codes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordDictColumn {
    dict: Dictionary,
    codes: Vec<u32>,
}

impl WordDictColumn {
    pub fn encode(col: &Column) -> Result<Self> {
        let values = col.strings_or_err()?;
        let entries = match col.domain() {
            ColumnValues::String(d) => d.clone(),
            // strings_or_err above rules this out
            ColumnValues::Int32(_) => unreachable!(),
        };
        let dict = Dictionary::from_sorted_entries(entries);
        let codes = values
            .iter()
            .map(|v| dict.code_of(v).expect("domain covers all values"))
            .collect();
        Ok(WordDictColumn { dict, codes })
    }

    pub fn dict(&self) -> &Dictionary {
        &self.dict
    }

    pub fn codes(&self) -> &[u32] {
        &self.codes
    }

    pub fn row_count(&self) -> usize {
        self.codes.len()
    }

    pub fn decode(&self) -> Column {
        crate::instrument::record_decoded(self.codes.len() as u64);
        let values = self
            .codes
            .iter()
            .map(|&c| self.dict.value_of(c).expect("code in dict").to_owned())
            .collect();
        Column::from_strings("decoded", values)
    }

    pub fn from_parts(dict: Dictionary, codes: Vec<u32>) -> Self {
        WordDictColumn { dict, codes }
    }
}

/// Integer column bit-packed at minimal width over its sorted domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitDictColumn {
    packed: BitPackedVector,
    /// Ascending original integers; packed code c maps to domain[c].
    domain: Vec<i32>,
}

impl BitDictColumn {
    pub fn encode(col: &Column) -> Result<Self> {
        let values = col.ints_or_err()?;
        let domain = match col.domain() {
            ColumnValues::Int32(d) => d.clone(),
            ColumnValues::String(_) => unreachable!(),
        };
        let width = width_for_domain(domain.len());
        let codes: Vec<u64> = values
            .iter()
            .map(|v| domain.binary_search(v).expect("domain covers all values") as u64)
            .collect();
        Ok(BitDictColumn {
            packed: BitPackedVector::pack(&codes, width),
            domain,
        })
    }

    pub fn bit_width(&self) -> u32 {
        self.packed.bit_width()
    }

    pub fn packed(&self) -> &BitPackedVector {
        &self.packed
    }

    pub fn domain(&self) -> &[i32] {
        &self.domain
    }

    /// True when codes equal values and no stored map would be needed.
    pub fn is_dense_domain(&self) -> bool {
        self.domain.iter().enumerate().all(|(i, &v)| v == i as i32)
    }

    pub fn row_count(&self) -> usize {
        self.packed.len()
    }

    /// 0-based code of a value, if it occurs.
    pub fn code_of(&self, value: i32) -> Option<u64> {
        self.domain.binary_search(&value).ok().map(|i| i as u64)
    }

    /// Code of the greatest domain value <= `value`.
    pub fn floor_code(&self, value: i32) -> Option<u64> {
        match self.domain.binary_search(&value) {
            Ok(i) => Some(i as u64),
            Err(0) => None,
            Err(i) => Some(i as u64 - 1),
        }
    }

    pub fn decode(&self) -> Column {
        crate::instrument::record_decoded(self.packed.len() as u64);
        let values = self
            .packed
            .iter()
            .map(|c| self.domain[c as usize])
            .collect();
        Column::from_ints("decoded", values)
    }

    pub fn from_parts(packed: BitPackedVector, domain: Vec<i32>) -> Self {
        BitDictColumn { packed, domain }
    }
}

/// Per-entry overhead in the word-DICT dictionary: a 4-byte length prefix.
pub const WORD_DICT_ENTRY_OVERHEAD: u64 = 4;

/// Analytic word-DICT size: 4 bytes per row plus the dictionary table
/// (entry bytes + a 4-byte length prefix per entry).
pub fn word_dict_space_bytes(stats: &ColumnStats, dict_entry_bytes: u64) -> u64 {
    if stats.row_count == 0 {
        return 0;
    }
    4 * stats.row_count as u64
        + dict_entry_bytes
        + WORD_DICT_ENTRY_OVERHEAD * stats.domain_size as u64
}

/// Analytic bit-DICT size: packed payload plus the 4-byte-per-entry domain list.
pub fn bit_dict_space_bytes(stats: &ColumnStats) -> u64 {
    if stats.row_count == 0 {
        return 0;
    }
    let width = width_for_domain(stats.domain_size) as u64;
    (width * stats.row_count as u64).div_ceil(8) + 4 * stats.domain_size as u64
}
