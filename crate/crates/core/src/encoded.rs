//! The tagged union over all codec representations.

use serde::{Deserialize, Serialize};

use crate::bitmap::BitmapIndex;
use crate::column::{Column, ColumnKind};
use crate::dict::{BitDictColumn, WordDictColumn};
use crate::error::Result;
use crate::huffman::HuffmanColumn;
use crate::rle::{rle_encode, RleColumn, RleVariant};

/// Every compression scheme the artifact knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    WordDict,
    BitDict,
    VlRle,
    VslRle,
    VsRle,
    VsbRle,
    Bitmap,
    Huffman,
}

impl Scheme {
    pub const ALL: [Scheme; 8] = [
        Scheme::WordDict,
        Scheme::BitDict,
        Scheme::VlRle,
        Scheme::VslRle,
        Scheme::VsRle,
        Scheme::VsbRle,
        Scheme::Bitmap,
        Scheme::Huffman,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::WordDict => "word-dict",
            Scheme::BitDict => "bit-dict",
            Scheme::VlRle => "vl",
            Scheme::VslRle => "vsl",
            Scheme::VsRle => "vs",
            Scheme::VsbRle => "vsb",
            Scheme::Bitmap => "bitmap",
            Scheme::Huffman => "huffman",
        }
    }

    pub fn parse(s: &str) -> Option<Scheme> {
        match s {
            "word-dict" => Some(Scheme::WordDict),
            "bit-dict" => Some(Scheme::BitDict),
            "vl" => Some(Scheme::VlRle),
            "vsl" => Some(Scheme::VslRle),
            "vs" => Some(Scheme::VsRle),
            "vsb" => Some(Scheme::VsbRle),
            "bitmap" => Some(Scheme::Bitmap),
            "huffman" => Some(Scheme::Huffman),
            _ => None,
        }
    }

    pub fn rle_variant(self) -> Option<RleVariant> {
        match self {
            Scheme::VlRle => Some(RleVariant::Vl),
            Scheme::VslRle => Some(RleVariant::Vsl),
            Scheme::VsRle => Some(RleVariant::Vs),
            Scheme::VsbRle => Some(RleVariant::Vsb),
            _ => None,
        }
    }

    /// Whether the scheme accepts a column of this shape at all.
    pub fn admits(self, kind: ColumnKind, is_sorted: bool, row_count: usize) -> bool {
        match self {
            Scheme::WordDict => kind == ColumnKind::String,
            Scheme::BitDict | Scheme::Bitmap => kind == ColumnKind::Int32,
            Scheme::VlRle | Scheme::VslRle | Scheme::VsRle | Scheme::VsbRle => {
                kind == ColumnKind::Int32 && is_sorted
            }
            Scheme::Huffman => row_count >= 1,
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// An encoded column under any scheme, self-describing enough to answer
/// queries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EncodedColumn {
    WordDict(WordDictColumn),
    BitDict(BitDictColumn),
    Rle(RleColumn),
    Bitmap(BitmapIndex),
    Huffman(HuffmanColumn),
}

impl EncodedColumn {
    pub fn encode(col: &Column, scheme: Scheme) -> Result<EncodedColumn> {
        Ok(match scheme {
            Scheme::WordDict => EncodedColumn::WordDict(WordDictColumn::encode(col)?),
            Scheme::BitDict => EncodedColumn::BitDict(BitDictColumn::encode(col)?),
            Scheme::VlRle => EncodedColumn::Rle(rle_encode(col, RleVariant::Vl)?),
            Scheme::VslRle => EncodedColumn::Rle(rle_encode(col, RleVariant::Vsl)?),
            Scheme::VsRle => EncodedColumn::Rle(rle_encode(col, RleVariant::Vs)?),
            Scheme::VsbRle => EncodedColumn::Rle(rle_encode(col, RleVariant::Vsb)?),
            Scheme::Bitmap => EncodedColumn::Bitmap(BitmapIndex::build(col)?),
            Scheme::Huffman => EncodedColumn::Huffman(HuffmanColumn::encode(col)?),
        })
    }

    pub fn scheme(&self) -> Scheme {
        match self {
            EncodedColumn::WordDict(_) => Scheme::WordDict,
            EncodedColumn::BitDict(_) => Scheme::BitDict,
            EncodedColumn::Rle(r) => match r.variant() {
                RleVariant::Vl => Scheme::VlRle,
                RleVariant::Vsl => Scheme::VslRle,
                RleVariant::Vs => Scheme::VsRle,
                RleVariant::Vsb => Scheme::VsbRle,
            },
            EncodedColumn::Bitmap(_) => Scheme::Bitmap,
            EncodedColumn::Huffman(_) => Scheme::Huffman,
        }
    }

    pub fn row_count(&self) -> usize {
        match self {
            EncodedColumn::WordDict(c) => c.row_count(),
            EncodedColumn::BitDict(c) => c.row_count(),
            EncodedColumn::Rle(c) => c.row_count() as usize,
            EncodedColumn::Bitmap(c) => c.row_count() as usize,
            EncodedColumn::Huffman(c) => c.row_count(),
        }
    }

    pub fn kind(&self) -> ColumnKind {
        match self {
            EncodedColumn::WordDict(_) => ColumnKind::String,
            EncodedColumn::BitDict(_) | EncodedColumn::Rle(_) | EncodedColumn::Bitmap(_) => {
                ColumnKind::Int32
            }
            EncodedColumn::Huffman(h) => h.domain().kind(),
        }
    }

    /// Materialize the uncompressed column (instrumented).
    pub fn decode(&self) -> Result<Column> {
        Ok(match self {
            EncodedColumn::WordDict(c) => c.decode(),
            EncodedColumn::BitDict(c) => c.decode(),
            EncodedColumn::Rle(c) => c.decode(),
            EncodedColumn::Bitmap(c) => c.decode(),
            EncodedColumn::Huffman(c) => c.decode()?,
        })
    }

    /// Measured payload size of the encoded data, matching the analytic
    /// models where one exists: word-DICT 4n + dict, bit-DICT packed + 4D,
    /// RLE 8R / 12R / 8R / 4R + ⌈Rb/8⌉, bitmap 4 bytes per WAH word.
    pub fn payload_bytes(&self) -> u64 {
        match self {
            EncodedColumn::WordDict(c) => {
                4 * c.row_count() as u64
                    + c.dict()
                        .entries()
                        .iter()
                        .map(|e| 4 + e.len() as u64)
                        .sum::<u64>()
            }
            EncodedColumn::BitDict(c) => {
                c.packed().payload_bytes() + 4 * c.domain().len() as u64
            }
            EncodedColumn::Rle(c) => match c {
                RleColumn::Vl(_) => 8 * c.run_count() as u64,
                RleColumn::Vsl(_) => 12 * c.run_count() as u64,
                RleColumn::Vs(_) => 8 * c.run_count() as u64,
                RleColumn::Vsb(v) => 4 * v.starts().len() as u64 + v.values().payload_bytes(),
            },
            EncodedColumn::Bitmap(c) => c.payload_bytes(),
            EncodedColumn::Huffman(c) => c.payload_bytes(),
        }
    }
}
