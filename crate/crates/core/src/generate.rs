//! Deterministic synthetic column generation.
//!
//! Values are drawn from a dense candidate domain of `domain_size` entries
//! (integers `0..domain_size`, or strings `"v00000000".."v..."` whose
//! lexicographic order matches the index order). Skewed draws may leave some
//! candidates unused; the built column reports its actual domain.

use rand::distributions::{Distribution as _, Uniform};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::Zipf;
use serde::{Deserialize, Serialize};

use crate::column::{Column, ColumnKind, ColumnValues};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Distribution {
    Uniform,
    /// Zipf with exponent `s` (the paper's experiments use skewed data but
    /// give no exponent; 1.0 is the conventional default).
    Zipf(f64),
}

impl Distribution {
    pub const DEFAULT_ZIPF_EXPONENT: f64 = 1.0;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateSpec {
    pub kind: ColumnKind,
    pub row_count: usize,
    pub domain_size: usize,
    pub distribution: Distribution,
    pub sorted: bool,
    pub seed: u64,
}

/// Render the i-th candidate domain value as a string whose lexicographic
/// order equals the index order.
pub fn string_domain_value(index: usize) -> String {
    format!("v{index:08}")
}

/// Generate a column. Pure in its arguments: a fixed seed yields a
/// byte-identical column.
pub fn generate(spec: &GenerateSpec) -> Result<Column> {
    if spec.row_count > 0 && spec.domain_size == 0 {
        return Err(Error::InvalidArguments(
            "domain_size must be >= 1 when row_count >= 1".into(),
        ));
    }
    if spec.domain_size > u32::MAX as usize {
        return Err(Error::InvalidArguments("domain_size exceeds u32 range".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut indices: Vec<usize> = Vec::with_capacity(spec.row_count);
    match spec.distribution {
        Distribution::Uniform => {
            let dist = Uniform::new(0, spec.domain_size.max(1));
            indices.extend((0..spec.row_count).map(|_| dist.sample(&mut rng)));
        }
        Distribution::Zipf(s) => {
            let dist = Zipf::new(spec.domain_size as u64, s)
                .map_err(|e| Error::InvalidArguments(format!("zipf: {e}")))?;
            // Zipf ranks are 1-based; rank 1 is the most frequent value.
            indices.extend((0..spec.row_count).map(|_| dist.sample(&mut rng) as usize - 1));
        }
    }
    if spec.sorted {
        indices.sort_unstable();
    }

    let values = match spec.kind {
        ColumnKind::Int32 => ColumnValues::Int32(indices.into_iter().map(|i| i as i32).collect()),
        ColumnKind::String => {
            ColumnValues::String(indices.into_iter().map(string_domain_value).collect())
        }
    };
    Ok(Column::new("generated", values))
}
