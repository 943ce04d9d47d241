//! Fixed-width bit packing into 64-bit storage words.
//!
//! Codes are packed little-endian within words: code 0 occupies the
//! lowest-order bits of word 0, and a code may straddle a word boundary.
//! Random access is O(1) shift-mask arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimal width able to distinguish `domain_size` values, floored at 1 bit.
pub fn width_for_domain(domain_size: usize) -> u32 {
    if domain_size <= 2 {
        1
    } else {
        // ceil(log2 D)
        u64::BITS - (domain_size as u64 - 1).leading_zeros()
    }
}

/// A sequence of `count` codes, each `bit_width` bits wide.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitPackedVector {
    bit_width: u32,
    count: usize,
    words: Vec<u64>,
}

impl BitPackedVector {
    /// Pack `codes` at the given width. Every code must fit in `bit_width` bits.
    pub fn pack(codes: &[u64], bit_width: u32) -> Self {
        assert!(
            (1..=32).contains(&bit_width),
            "bit width must be in 1..=32, got {bit_width}"
        );
        let total_bits = bit_width as usize * codes.len();
        let mut words = vec![0u64; total_bits.div_ceil(64)];
        for (i, &code) in codes.iter().enumerate() {
            debug_assert!(bit_width == 64 || code < (1u64 << bit_width), "code too wide");
            let bit = i * bit_width as usize;
            let word = bit / 64;
            let offset = (bit % 64) as u32;
            words[word] |= code << offset;
            let spill = offset + bit_width;
            if spill > 64 {
                words[word + 1] |= code >> (64 - offset);
            }
        }
        BitPackedVector {
            bit_width,
            count: codes.len(),
            words,
        }
    }

    pub fn bit_width(&self) -> u32 {
        self.bit_width
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The i-th code. O(1) word arithmetic, no scan.
    pub fn get(&self, i: usize) -> Result<u64> {
        if i >= self.count {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.count,
            });
        }
        Ok(self.get_unchecked(i))
    }

    #[inline]
    pub fn get_unchecked(&self, i: usize) -> u64 {
        let bit = i * self.bit_width as usize;
        let word = bit / 64;
        let offset = (bit % 64) as u32;
        let mask = if self.bit_width == 64 {
            u64::MAX
        } else {
            (1u64 << self.bit_width) - 1
        };
        let mut code = self.words[word] >> offset;
        let spill = offset + self.bit_width;
        if spill > 64 {
            code |= self.words[word + 1] << (64 - offset);
        }
        code & mask
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.count).map(|i| self.get_unchecked(i))
    }

    /// Exact payload size: ⌈bit_width × count / 8⌉ bytes.
    pub fn payload_bytes(&self) -> u64 {
        (self.bit_width as u64 * self.count as u64).div_ceil(8)
    }

    /// The payload as bytes, truncated to [`payload_bytes`](Self::payload_bytes)
    /// (little-endian word order).
    pub fn payload_le_bytes(&self) -> Vec<u8> {
        let mut out: Vec<u8> = self.words.iter().flat_map(|w| w.to_le_bytes()).collect();
        out.truncate(self.payload_bytes() as usize);
        out
    }

    /// Rebuild from a truncated little-endian byte payload.
    pub fn from_le_bytes(bytes: &[u8], bit_width: u32, count: usize) -> Result<Self> {
        let expected = (bit_width as usize * count).div_ceil(8);
        if bytes.len() != expected {
            return Err(Error::MalformedFile(format!(
                "bit-packed payload: expected {expected} bytes, got {}",
                bytes.len()
            )));
        }
        let n_words = (bit_width as usize * count).div_ceil(64);
        let mut words = vec![0u64; n_words];
        for (i, &b) in bytes.iter().enumerate() {
            words[i / 8] |= (b as u64) << ((i % 8) * 8);
        }
        Ok(BitPackedVector {
            bit_width,
            count,
            words,
        })
    }
}
