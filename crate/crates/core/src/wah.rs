//! Word-aligned hybrid compressed bit-vectors.
//!
//! 32-bit words over 31-bit groups. A word with MSB 0 is a literal carrying
//! one group in its low 31 bits (logical bit j of the group at word bit j).
//! A word with MSB 1 is a fill: bit 30 is the fill value, the low 30 bits
//! count how many consecutive identical groups it covers (>= 1).
//!
//! Encoding is canonical: every all-zero or all-one group becomes (part of)
//! a fill, including a homogeneous padded tail group, and adjacent fills of
//! the same value are merged. OR/AND stream over the compressed words and
//! emit canonical output, so equal logical content means equal words.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const GROUP_BITS: u64 = 31;
const LITERAL_MASK: u32 = 0x7FFF_FFFF;
const FILL_FLAG: u32 = 0x8000_0000;
const FILL_VALUE_FLAG: u32 = 0x4000_0000;
const FILL_COUNT_MASK: u32 = 0x3FFF_FFFF;
const MAX_FILL_COUNT: u64 = FILL_COUNT_MASK as u64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WahBitmap {
    words: Vec<u32>,
    bit_length: u64,
}

fn is_fill(word: u32) -> bool {
    word & FILL_FLAG != 0
}

fn fill_bit(word: u32) -> bool {
    word & FILL_VALUE_FLAG != 0
}

fn fill_count(word: u32) -> u64 {
    (word & FILL_COUNT_MASK) as u64
}

fn fill_word(bit: bool, count: u64) -> u32 {
    debug_assert!((1..=MAX_FILL_COUNT).contains(&count));
    FILL_FLAG | if bit { FILL_VALUE_FLAG } else { 0 } | count as u32
}

/// Appends 31-bit groups, producing canonical words.
struct WahBuilder {
    words: Vec<u32>,
    bit_length: u64,
}

impl WahBuilder {
    fn new() -> Self {
        WahBuilder {
            words: Vec::new(),
            bit_length: 0,
        }
    }

    fn push_fill(&mut self, bit: bool, mut groups: u64) {
        if groups == 0 {
            return;
        }
        if let Some(last) = self.words.last_mut() {
            if is_fill(*last) && fill_bit(*last) == bit {
                let room = MAX_FILL_COUNT - fill_count(*last);
                let take = room.min(groups);
                *last += take as u32;
                groups -= take;
            }
        }
        while groups > 0 {
            let take = groups.min(MAX_FILL_COUNT);
            self.words.push(fill_word(bit, take));
            groups -= take;
        }
    }

    /// Append one group of `bits` logical bits (31 for full groups, fewer for
    /// the tail). Slack bits of `payload` must be zero.
    fn push_group(&mut self, payload: u32, bits: u64) {
        debug_assert!(bits >= 1 && bits <= GROUP_BITS);
        debug_assert_eq!(payload & !LITERAL_MASK, 0);
        if payload == 0 {
            self.push_fill(false, 1);
        } else if payload == LITERAL_MASK {
            self.push_fill(true, 1);
        } else {
            self.words.push(payload);
        }
        self.bit_length += bits;
    }

    fn finish(self) -> WahBitmap {
        WahBitmap {
            words: self.words,
            bit_length: self.bit_length,
        }
    }
}

/// Streaming reader over WAH words: yields the current run (a fill spanning
/// `remaining` groups, or a single literal group) without decompressing.
struct Cursor<'a> {
    words: &'a [u32],
    idx: usize,
    /// Groups left in the current fill; 0 means the current word is a literal
    /// or the cursor is exhausted.
    remaining_fill: u64,
}

impl<'a> Cursor<'a> {
    fn new(words: &'a [u32]) -> Self {
        let mut c = Cursor {
            words,
            idx: 0,
            remaining_fill: 0,
        };
        c.refill();
        c
    }

    fn refill(&mut self) {
        if let Some(&w) = self.words.get(self.idx) {
            if is_fill(w) {
                self.remaining_fill = fill_count(w);
            }
        }
    }

    fn done(&self) -> bool {
        self.idx >= self.words.len()
    }

    fn current_is_fill(&self) -> bool {
        self.remaining_fill > 0
    }

    fn current_literal(&self) -> u32 {
        let w = self.words[self.idx];
        if is_fill(w) {
            if fill_bit(w) {
                LITERAL_MASK
            } else {
                0
            }
        } else {
            w
        }
    }

    /// Consume `groups` groups from the current fill, or one literal group.
    fn advance(&mut self, groups: u64) {
        if self.remaining_fill > 0 {
            self.remaining_fill -= groups;
            if self.remaining_fill > 0 {
                return;
            }
        } else {
            debug_assert_eq!(groups, 1);
        }
        self.idx += 1;
        self.refill();
    }

    fn fill_remaining(&self) -> u64 {
        if self.remaining_fill > 0 {
            self.remaining_fill
        } else {
            1
        }
    }
}

impl WahBitmap {
    /// Compress a plain bit-vector.
    pub fn encode(bits: &[bool]) -> WahBitmap {
        let mut b = WahBuilder::new();
        let mut i = 0usize;
        while i < bits.len() {
            let n = (bits.len() - i).min(GROUP_BITS as usize);
            let mut payload = 0u32;
            for (j, &bit) in bits[i..i + n].iter().enumerate() {
                if bit {
                    payload |= 1 << j;
                }
            }
            b.push_group(payload, n as u64);
            i += n;
        }
        b.finish()
    }

    /// Compress from ascending set-bit positions; skips zero gaps in O(1)
    /// per gap.
    pub fn from_positions(positions: &[u64], bit_length: u64) -> WahBitmap {
        let mut b = WahBuilder::new();
        let full_groups = bit_length / GROUP_BITS;
        let tail_bits = bit_length % GROUP_BITS;
        let mut p = 0usize;
        let mut g = 0u64;
        while g < full_groups || (g == full_groups && tail_bits > 0) {
            let group_start = g * GROUP_BITS;
            let bits = if g < full_groups { GROUP_BITS } else { tail_bits };
            // bulk-skip empty full groups before the next set bit
            if g < full_groups {
                let next = positions.get(p).copied().unwrap_or(bit_length);
                let next_group = (next / GROUP_BITS).min(full_groups);
                if next_group > g {
                    b.push_fill(false, next_group - g);
                    b.bit_length += (next_group - g) * GROUP_BITS;
                    g = next_group;
                    continue;
                }
            }
            let mut payload = 0u32;
            while p < positions.len() && positions[p] < group_start + bits {
                debug_assert!(positions[p] >= group_start, "positions must ascend");
                payload |= 1 << (positions[p] - group_start);
                p += 1;
            }
            b.push_group(payload, bits);
            g += 1;
        }
        debug_assert_eq!(p, positions.len(), "position beyond bit_length");
        let mut out = b.finish();
        out.bit_length = bit_length;
        out
    }

    pub fn empty(bit_length: u64) -> WahBitmap {
        WahBitmap::from_positions(&[], bit_length)
    }

    pub fn words(&self) -> &[u32] {
        &self.words
    }

    pub fn bit_length(&self) -> u64 {
        self.bit_length
    }

    /// Serialized payload size of this bitmap's words.
    pub fn payload_bytes(&self) -> u64 {
        4 * self.words.len() as u64
    }

    /// Decompress to a plain bit-vector.
    pub fn decode(&self) -> Vec<bool> {
        let mut bits = Vec::with_capacity(self.bit_length as usize);
        for &w in &self.words {
            if is_fill(w) {
                let n = (fill_count(w) * GROUP_BITS).min(self.bit_length - bits.len() as u64);
                bits.extend(std::iter::repeat(fill_bit(w)).take(n as usize));
            } else {
                let n = GROUP_BITS.min(self.bit_length - bits.len() as u64);
                bits.extend((0..n).map(|j| w & (1 << j) != 0));
            }
        }
        debug_assert_eq!(bits.len() as u64, self.bit_length);
        bits
    }

    /// Number of set bits, computed on the compressed words.
    pub fn count_ones(&self) -> u64 {
        self.words
            .iter()
            .map(|&w| {
                if is_fill(w) {
                    if fill_bit(w) {
                        fill_count(w) * GROUP_BITS
                    } else {
                        0
                    }
                } else {
                    w.count_ones() as u64
                }
            })
            .sum()
    }

    /// Ascending set-bit positions; 0-fills are skipped in O(1) per word.
    pub fn positions(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut offset = 0u64;
        for &w in &self.words {
            if is_fill(w) {
                let span = fill_count(w) * GROUP_BITS;
                if fill_bit(w) {
                    out.extend(offset..offset + span);
                }
                offset += span;
            } else {
                let mut payload = w;
                while payload != 0 {
                    let j = payload.trailing_zeros() as u64;
                    out.push(offset + j);
                    payload &= payload - 1;
                }
                offset += GROUP_BITS;
            }
        }
        out
    }

    fn binary_op(&self, other: &WahBitmap, op: impl Fn(u32, u32) -> u32) -> Result<WahBitmap> {
        if self.bit_length != other.bit_length {
            return Err(Error::BitLengthMismatch {
                left: self.bit_length,
                right: other.bit_length,
            });
        }
        let mut a = Cursor::new(&self.words);
        let mut b = Cursor::new(&other.words);
        let mut out = WahBuilder::new();
        while !a.done() && !b.done() {
            if a.current_is_fill() && b.current_is_fill() {
                let take = a.fill_remaining().min(b.fill_remaining());
                let payload = op(a.current_literal(), b.current_literal()) & LITERAL_MASK;
                if payload == 0 {
                    out.push_fill(false, take);
                } else {
                    debug_assert_eq!(payload, LITERAL_MASK);
                    out.push_fill(true, take);
                }
                out.bit_length += take * GROUP_BITS;
                a.advance(take);
                b.advance(take);
            } else {
                let payload = op(a.current_literal(), b.current_literal()) & LITERAL_MASK;
                out.push_group(payload, GROUP_BITS);
                a.advance(1);
                b.advance(1);
            }
        }
        debug_assert!(a.done() && b.done());
        let mut result = out.finish();
        result.bit_length = self.bit_length;
        Ok(result)
    }

    /// Streamed OR over compressed words; no decompression.
    pub fn or(&self, other: &WahBitmap) -> Result<WahBitmap> {
        self.binary_op(other, |x, y| x | y)
    }

    /// Streamed AND over compressed words; no decompression.
    pub fn and(&self, other: &WahBitmap) -> Result<WahBitmap> {
        self.binary_op(other, |x, y| x & y)
    }

    /// Canonical-form check: no adjacent same-value fills and no homogeneous
    /// literal words.
    pub fn is_canonical(&self) -> bool {
        for (i, &w) in self.words.iter().enumerate() {
            if is_fill(w) {
                if fill_count(w) == 0 {
                    return false;
                }
                if fill_count(w) < MAX_FILL_COUNT {
                    if let Some(&next) = self.words.get(i + 1) {
                        if is_fill(next) && fill_bit(next) == fill_bit(w) {
                            return false;
                        }
                    }
                }
            } else if w == 0 || w == LITERAL_MASK {
                return false;
            }
        }
        true
    }

    pub fn from_parts(words: Vec<u32>, bit_length: u64) -> WahBitmap {
        WahBitmap { words, bit_length }
    }
}
