//! Per-value bitmap index over an integer column.
//!
//! Each distinct value gets one WAH-compressed bit-vector marking its row
//! positions. The bitmaps partition the row-id space: every row is set in
//! exactly one of them.

use serde::{Deserialize, Serialize};

use crate::column::Column;
use crate::error::Result;
use crate::wah::WahBitmap;

/// Domain-size bound past which a bitmap index stops being a sensible choice.
pub const BITMAP_DOMAIN_THRESHOLD: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitmapIndex {
    /// Ascending distinct values, parallel to `bitmaps`.
    domain: Vec<i32>,
    bitmaps: Vec<WahBitmap>,
    row_count: u64,
    /// Set when the domain exceeded [`BITMAP_DOMAIN_THRESHOLD`] at build time.
    domain_warning: bool,
}

impl BitmapIndex {
    /// Build the index. Sortedness is not required. A domain larger than the
    /// threshold is flagged, not rejected; benchmarks exceed it deliberately.
    pub fn build(col: &Column) -> Result<Self> {
        let values = col.ints_or_err()?;
        let domain: Vec<i32> = match col.domain() {
            crate::column::ColumnValues::Int32(d) => d.clone(),
            crate::column::ColumnValues::String(_) => unreachable!(),
        };
        let mut positions: Vec<Vec<u64>> = vec![Vec::new(); domain.len()];
        for (row, v) in values.iter().enumerate() {
            let slot = domain.binary_search(v).expect("domain covers all values");
            positions[slot].push(row as u64);
        }
        let row_count = values.len() as u64;
        let bitmaps = positions
            .iter()
            .map(|p| WahBitmap::from_positions(p, row_count))
            .collect();
        let domain_warning = domain.len() > BITMAP_DOMAIN_THRESHOLD;
        Ok(BitmapIndex {
            domain,
            bitmaps,
            row_count,
            domain_warning,
        })
    }

    pub fn row_count(&self) -> u64 {
        self.row_count
    }

    pub fn domain(&self) -> &[i32] {
        &self.domain
    }

    pub fn domain_warning(&self) -> bool {
        self.domain_warning
    }

    /// Bitmap for a value; absent values get an all-zeros view.
    pub fn bitmap(&self, value: i32) -> WahBitmap {
        match self.domain.binary_search(&value) {
            Ok(i) => self.bitmaps[i].clone(),
            Err(_) => WahBitmap::empty(self.row_count),
        }
    }

    pub fn bitmap_ref(&self, value: i32) -> Option<&WahBitmap> {
        self.domain
            .binary_search(&value)
            .ok()
            .map(|i| &self.bitmaps[i])
    }

    /// OR of the bitmaps for all domain values <= k, streamed on compressed
    /// words.
    pub fn or_leq(&self, k: i32) -> Result<WahBitmap> {
        let end = match self.domain.binary_search(&k) {
            Ok(i) => i + 1,
            Err(i) => i,
        };
        let mut acc = WahBitmap::empty(self.row_count);
        for b in &self.bitmaps[..end] {
            acc = acc.or(b)?;
        }
        Ok(acc)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &WahBitmap)> {
        self.domain.iter().copied().zip(self.bitmaps.iter())
    }

    /// Measured size: 4 bytes per WAH word across all bitmaps. Per-bitmap
    /// headers (value, bit length, word count) are accounted separately by
    /// the serializer.
    pub fn payload_bytes(&self) -> u64 {
        self.bitmaps.iter().map(|b| b.payload_bytes()).sum()
    }

    pub fn decode(&self) -> Column {
        crate::instrument::record_decoded(self.row_count);
        let mut values = vec![0i32; self.row_count as usize];
        for (v, b) in self.iter() {
            for pos in b.positions() {
                values[pos as usize] = v;
            }
        }
        Column::from_ints("decoded", values)
    }

    pub fn from_parts(domain: Vec<i32>, bitmaps: Vec<WahBitmap>, row_count: u64) -> Self {
        let domain_warning = domain.len() > BITMAP_DOMAIN_THRESHOLD;
        BitmapIndex {
            domain,
            bitmaps,
            row_count,
            domain_warning,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tiny_example() {
        let col = Column::from_ints("a", vec![1, 2, 3, 1]);
        let idx = BitmapIndex::build(&col).unwrap();
        assert_eq!(idx.bitmap(1).decode(), vec![true, false, false, true]);
        assert_eq!(idx.bitmap(2).decode(), vec![false, true, false, false]);
        assert_eq!(idx.bitmap(3).decode(), vec![false, false, true, false]);
        assert_eq!(idx.bitmap(9).decode(), vec![false; 4]);
        assert!(!idx.domain_warning());
    }

    #[test]
    fn leq_or_route() {
        let col = Column::from_ints("a", vec![1, 2, 3, 1]);
        let idx = BitmapIndex::build(&col).unwrap();
        let b = idx.or_leq(2).unwrap();
        assert_eq!(b.decode(), vec![true, true, false, true]);
        assert_eq!(b.positions(), vec![0, 1, 3]);
        assert_eq!(idx.or_leq(0).unwrap().count_ones(), 0);
    }

    #[test]
    fn partition_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let values: Vec<i32> = (0..10_000).map(|_| rng.gen_range(0..10)).collect();
        let col = Column::from_ints("a", values.clone());
        let idx = BitmapIndex::build(&col).unwrap();

        // per-row naive oracle
        for (v, b) in idx.iter() {
            let naive: Vec<u64> = values
                .iter()
                .enumerate()
                .filter(|(_, &x)| x == v)
                .map(|(i, _)| i as u64)
                .collect();
            assert_eq!(b.positions(), naive);
        }

        // OR of all = all ones, pairwise AND = empty
        let mut acc = WahBitmap::empty(idx.row_count());
        for (_, b) in idx.iter() {
            acc = acc.or(b).unwrap();
        }
        assert_eq!(acc.count_ones(), idx.row_count());
        let b0 = idx.bitmap(0);
        let b1 = idx.bitmap(1);
        assert_eq!(b0.and(&b1).unwrap().count_ones(), 0);
    }

    #[test]
    fn constant_column_single_fill() {
        let col = Column::from_ints("a", vec![7; 31_000]);
        let idx = BitmapIndex::build(&col).unwrap();
        let b = idx.bitmap(7);
        assert_eq!(b.words().len(), 1);
        assert_eq!(idx.payload_bytes(), 4);
    }

    #[test]
    fn warning_over_threshold() {
        let col = Column::from_ints("a", (0..60).collect());
        let idx = BitmapIndex::build(&col).unwrap();
        assert!(idx.domain_warning());
    }

    #[test]
    fn empty_column_empty_payload() {
        let col = Column::from_ints("a", vec![]);
        let idx = BitmapIndex::build(&col).unwrap();
        assert_eq!(idx.payload_bytes(), 0);
        assert_eq!(idx.row_count(), 0);
    }
}
