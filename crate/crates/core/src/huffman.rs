//! Canonical Huffman coding.
//!
//! The negative control among the codecs: a HuffmanColumn answers no query
//! without a full sequential decode. Codes are canonical, so the table
//! serializes as (value, length) pairs and the bitstream layout is
//! deterministic. Bits are packed most-significant-bit-first.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::column::{Column, ColumnValues, Value};
use crate::error::{Error, Result};
use crate::instrument;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HuffmanColumn {
    /// Ascending distinct values; symbol i is domain entry i.
    domain: ColumnValues,
    /// Codeword length per symbol.
    lengths: Vec<u32>,
    /// Canonical codeword per symbol, derived from `lengths`.
    codes: Vec<u32>,
    bitstream: Vec<u8>,
    bit_len: u64,
    row_count: usize,
}

/// Codeword lengths from symbol frequencies.
///
/// Ties merge by (frequency, smallest symbol, creation order): leaves carry
/// their symbol index, internal nodes get indices past the leaves in creation
/// order, so the heap order is total and the output deterministic.
fn code_lengths(freqs: &[u64]) -> Vec<u32> {
    let n = freqs.len();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        // 1-bit code rather than 0 bits, so the stream length stays defined
        return vec![1];
    }
    // parent pointers over leaves then internal nodes
    let mut parent = vec![usize::MAX; 2 * n - 1];
    let mut heap: BinaryHeap<Reverse<(u64, usize)>> = (0..n)
        .map(|i| Reverse((freqs[i], i)))
        .collect();
    let mut next = n;
    while heap.len() > 1 {
        let Reverse((fa, a)) = heap.pop().unwrap();
        let Reverse((fb, b)) = heap.pop().unwrap();
        parent[a] = next;
        parent[b] = next;
        heap.push(Reverse((fa + fb, next)));
        next += 1;
    }
    (0..n)
        .map(|i| {
            let mut depth = 0;
            let mut node = i;
            while parent[node] != usize::MAX {
                depth += 1;
                node = parent[node];
            }
            depth
        })
        .collect()
}

/// Canonical codes: symbols sorted by (length, symbol index) get
/// consecutive codewords.
fn canonical_codes(lengths: &[u32]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by_key(|&i| (lengths[i], i));
    let mut codes = vec![0u32; lengths.len()];
    let mut code = 0u32;
    let mut prev_len = 0u32;
    for &i in &order {
        code <<= lengths[i] - prev_len;
        codes[i] = code;
        prev_len = lengths[i];
        code += 1;
    }
    codes
}

struct BitWriter {
    bytes: Vec<u8>,
    bit_len: u64,
}

impl BitWriter {
    fn new() -> Self {
        BitWriter {
            bytes: Vec::new(),
            bit_len: 0,
        }
    }

    fn write(&mut self, code: u32, len: u32) {
        for i in (0..len).rev() {
            let bit = (code >> i) & 1;
            if self.bit_len % 8 == 0 {
                self.bytes.push(0);
            }
            if bit != 0 {
                *self.bytes.last_mut().unwrap() |= 0x80 >> (self.bit_len % 8);
            }
            self.bit_len += 1;
        }
    }
}

impl HuffmanColumn {
    pub fn encode(col: &Column) -> Result<Self> {
        if col.row_count() == 0 {
            return Err(Error::EmptyColumn);
        }
        let domain = col.domain().clone();
        let symbol_of = |v: &Value| -> usize {
            match (&domain, v) {
                (ColumnValues::Int32(d), Value::Int(x)) => d.binary_search(x).unwrap(),
                (ColumnValues::String(d), Value::Str(x)) => {
                    d.binary_search_by(|e| e.as_str().cmp(x)).unwrap()
                }
                _ => unreachable!("domain kind matches column kind"),
            }
        };
        let mut freqs = vec![0u64; domain.len()];
        for i in 0..col.row_count() {
            freqs[symbol_of(&col.values().get(i).unwrap())] += 1;
        }
        let lengths = code_lengths(&freqs);
        let codes = canonical_codes(&lengths);
        let mut w = BitWriter::new();
        for i in 0..col.row_count() {
            let s = symbol_of(&col.values().get(i).unwrap());
            w.write(codes[s], lengths[s]);
        }
        Ok(HuffmanColumn {
            domain,
            lengths,
            codes,
            bitstream: w.bytes,
            bit_len: w.bit_len,
            row_count: col.row_count(),
        })
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }

    pub fn domain(&self) -> &ColumnValues {
        &self.domain
    }

    pub fn lengths(&self) -> &[u32] {
        &self.lengths
    }

    pub fn codes(&self) -> &[u32] {
        &self.codes
    }

    pub fn bitstream(&self) -> &[u8] {
        &self.bitstream
    }

    pub fn bit_len(&self) -> u64 {
        self.bit_len
    }

    /// Total encoded bits divided by rows.
    pub fn average_code_length(&self) -> f64 {
        self.bit_len as f64 / self.row_count as f64
    }

    /// Full sequential decode. There is deliberately no random-access entry
    /// point; this is the only route from a HuffmanColumn back to values.
    pub fn decode(&self) -> Result<Column> {
        let max_len = self.lengths.iter().copied().max().unwrap_or(0);
        // canonical decoding tables per length
        let mut order: Vec<usize> = (0..self.lengths.len()).collect();
        order.sort_by_key(|&i| (self.lengths[i], i));
        let mut first_code = vec![0u32; max_len as usize + 1];
        let mut first_sym = vec![0usize; max_len as usize + 1];
        let mut count = vec![0usize; max_len as usize + 1];
        let mut seen = 0usize;
        for len in 1..=max_len {
            let start = seen;
            while seen < order.len() && self.lengths[order[seen]] == len {
                seen += 1;
            }
            count[len as usize] = seen - start;
            first_sym[len as usize] = start;
            if seen > start {
                first_code[len as usize] = self.codes[order[start]];
            }
        }

        let read_bit = |pos: u64| -> bool {
            (self.bitstream[(pos / 8) as usize] >> (7 - pos % 8)) & 1 != 0
        };

        let mut symbols = Vec::with_capacity(self.row_count);
        let mut pos = 0u64;
        while symbols.len() < self.row_count {
            let mut code = 0u32;
            let mut len = 0u32;
            loop {
                if pos >= self.bit_len {
                    return Err(Error::CorruptStream(format!(
                        "bitstream exhausted after {} of {} rows",
                        symbols.len(),
                        self.row_count
                    )));
                }
                code = (code << 1) | u32::from(read_bit(pos));
                pos += 1;
                len += 1;
                if len > max_len {
                    return Err(Error::CorruptStream(
                        "prefix walk fell off the code table".into(),
                    ));
                }
                let l = len as usize;
                if count[l] > 0 && (code.wrapping_sub(first_code[l]) as usize) < count[l] {
                    symbols.push(order[first_sym[l] + (code - first_code[l]) as usize]);
                    break;
                }
            }
        }
        instrument::record_decoded(self.row_count as u64);

        let values = match &self.domain {
            ColumnValues::Int32(d) => {
                ColumnValues::Int32(symbols.into_iter().map(|s| d[s]).collect())
            }
            ColumnValues::String(d) => {
                ColumnValues::String(symbols.into_iter().map(|s| d[s].clone()).collect())
            }
        };
        Ok(Column::new("decoded", values))
    }

    /// Serialized payload size: bitstream bytes plus the (value, length) table.
    pub fn payload_bytes(&self) -> u64 {
        let table: u64 = match &self.domain {
            ColumnValues::Int32(d) => 5 * d.len() as u64,
            ColumnValues::String(d) => d.iter().map(|s| 4 + s.len() as u64 + 1).sum(),
        };
        table + self.bitstream.len() as u64
    }

    /// Corrupt-stream simulation support for tests and tools.
    pub fn truncated(&self, keep_bits: u64) -> HuffmanColumn {
        let mut t = self.clone();
        t.bit_len = keep_bits.min(self.bit_len);
        t.bitstream.truncate((t.bit_len as usize).div_ceil(8));
        t
    }

    pub fn from_parts(
        domain: ColumnValues,
        lengths: Vec<u32>,
        bitstream: Vec<u8>,
        bit_len: u64,
        row_count: usize,
    ) -> Self {
        let codes = canonical_codes(&lengths);
        HuffmanColumn {
            domain,
            lengths,
            codes,
            bitstream,
            bit_len,
            row_count,
        }
    }
}

/// Empirical entropy in bits per value.
pub fn empirical_entropy(col: &Column) -> f64 {
    let n = col.row_count() as f64;
    let mut counts = std::collections::HashMap::new();
    for i in 0..col.row_count() {
        *counts.entry(col.values().get(i).unwrap()).or_insert(0u64) += 1;
    }
    counts
        .values()
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}
