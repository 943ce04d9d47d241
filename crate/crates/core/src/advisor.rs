//! Scheme selection and the analytic space model behind it.
//!
//! The decision tree: string columns get word-aligned dictionary encoding
//! first to become integer-typed; then sorted columns take vsb-RLE, unsorted
//! small-domain columns (D < 50) take the compressed bitmap, and unsorted
//! big-domain columns take bit-DICT. Huffman is never recommended.

use serde::{Deserialize, Serialize};

use crate::column::{ColumnKind, ColumnStats};
use crate::dict::bit_dict_space_bytes;
use crate::encoded::Scheme;
use crate::rle::{rle_space_bytes, RleVariant};

/// "Small domain" bound for the bitmap branch (strict less-than).
pub const BITMAP_DOMAIN_BOUND: usize = 50;
/// Domain size past which the word-DICT dictionary table stops being
/// comfortably memory-resident (strict less-than).
pub const WORD_DICT_DOMAIN_BOUND: usize = 50_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub primary: Scheme,
    /// Applied before the primary scheme (word-DICT for string columns).
    pub preprocessing: Option<Scheme>,
    /// Names the decision-tree branch taken.
    pub rationale: String,
    /// Warnings that do not change the branch.
    pub flags: Vec<String>,
    pub predicted_space: SpacePrediction,
}

/// Analytic byte counts per candidate scheme. `None` where the model needs
/// an input that was not supplied (dictionary bytes) or where size is
/// data-dependent (bitmap).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpacePrediction {
    pub raw: u64,
    pub vl: Option<u64>,
    pub vsl: Option<u64>,
    pub vs: Option<u64>,
    pub vsb: Option<u64>,
    pub bit_dict: Option<u64>,
}

/// Per-scheme analytic sizes. RLE entries need a run count; for sorted
/// columns it defaults to D (runs and distinct values are in bijection in a
/// sorted column).
pub fn predict_space(stats: &ColumnStats, run_count: Option<u64>) -> SpacePrediction {
    let raw = 4 * stats.row_count as u64;
    let int_like = stats.kind == ColumnKind::Int32;
    let runs = run_count.or(if stats.is_sorted {
        Some(stats.domain_size as u64)
    } else {
        None
    });
    let rle = |variant: RleVariant| {
        runs.filter(|_| stats.is_sorted).map(|r| {
            rle_space_bytes(variant, r, stats.domain_size as u64, stats.row_count as u64)
        })
    };
    SpacePrediction {
        raw,
        vl: rle(RleVariant::Vl),
        vsl: rle(RleVariant::Vsl),
        vs: rle(RleVariant::Vs),
        vsb: rle(RleVariant::Vsb),
        bit_dict: int_like.then(|| bit_dict_space_bytes(stats)),
    }
}

/// Pure function of the statistics; every (kind, sorted, D) combination maps
/// to exactly one branch.
pub fn advise(stats: &ColumnStats) -> Recommendation {
    let mut flags = Vec::new();
    let preprocessing = match stats.kind {
        ColumnKind::String => {
            if stats.domain_size >= WORD_DICT_DOMAIN_BOUND {
                flags.push(format!(
                    "domain size {} exceeds the word-DICT dictionary bound {}",
                    stats.domain_size, WORD_DICT_DOMAIN_BOUND
                ));
            }
            Some(Scheme::WordDict)
        }
        ColumnKind::Int32 => None,
    };

    let (primary, branch) = if stats.is_sorted {
        (Scheme::VsbRle, "sorted column")
    } else if stats.domain_size < BITMAP_DOMAIN_BOUND {
        (
            Scheme::Bitmap,
            "unsorted column with small domain (D < 50)",
        )
    } else {
        (
            Scheme::BitDict,
            "unsorted column with big domain (D >= 50)",
        )
    };

    let rationale = match preprocessing {
        Some(_) => format!(
            "string column: apply word-aligned dictionary encoding first, then {}: {}",
            primary.name(),
            branch
        ),
        None => format!("integer column, {branch}: {}", primary.name()),
    };

    Recommendation {
        primary,
        preprocessing,
        rationale,
        flags,
        predicted_space: predict_space(stats, None),
    }
}
