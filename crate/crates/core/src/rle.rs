//! Run-length encodings for sorted integer columns.
//!
//! Four layouts over the same run structure:
//! - vl:  (value, length) pairs
//! - vsl: (value, start, length) triples
//! - vs:  (value, start) pairs; lengths implied by the next start
//! - vsb: vs with the value array bit-packed at minimal width
//!
//! Run extents are half-open `[start, start + length)` with 0-based row ids.
//! Starts and lengths are 32-bit, so columns are capped at 2^32 rows.

use serde::{Deserialize, Serialize};

use crate::bitpack::{width_for_domain, BitPackedVector};
use crate::column::{Column, ColumnValues};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RleVariant {
    Vl,
    Vsl,
    Vs,
    Vsb,
}

impl RleVariant {
    pub const ALL: [RleVariant; 4] = [
        RleVariant::Vl,
        RleVariant::Vsl,
        RleVariant::Vs,
        RleVariant::Vsb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RleVariant::Vl => "vl-RLE",
            RleVariant::Vsl => "vsl-RLE",
            RleVariant::Vs => "vs-RLE",
            RleVariant::Vsb => "vsb-RLE",
        }
    }
}

/// A located run: the half-open row interval holding one value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSpan {
    pub start: u32,
    pub length: u32,
}

impl RunSpan {
    pub fn end(&self) -> u32 {
        self.start + self.length
    }
}

/// (value, length) runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VlRleColumn {
    runs: Vec<(i32, u32)>,
    row_count: u32,
}

/// (value, start, length) runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VslRleColumn {
    runs: Vec<(i32, u32, u32)>,
    row_count: u32,
}

/// (value, start) runs; the last run ends at row_count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VsRleColumn {
    runs: Vec<(i32, u32)>,
    row_count: u32,
}

/// vs runs with bit-packed values; starts stay 32-bit plain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VsbRleColumn {
    values: BitPackedVector,
    starts: Vec<u32>,
    domain: Vec<i32>,
    row_count: u32,
}

/// Any of the four layouts, behind one query surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RleColumn {
    Vl(VlRleColumn),
    Vsl(VslRleColumn),
    Vs(VsRleColumn),
    Vsb(VsbRleColumn),
}

/// Maximal equal-value segments of a sorted slice, as (value, start, length).
fn scan_runs(values: &[i32]) -> Vec<(i32, u32, u32)> {
    let mut runs = Vec::new();
    let mut i = 0usize;
    while i < values.len() {
        let v = values[i];
        let start = i;
        while i < values.len() && values[i] == v {
            i += 1;
        }
        runs.push((v, start as u32, (i - start) as u32));
    }
    runs
}

pub fn rle_encode(col: &Column, variant: RleVariant) -> Result<RleColumn> {
    let values = col.ints_or_err()?;
    if !col.is_sorted() {
        return Err(Error::RequiresSortedColumn);
    }
    if values.len() > u32::MAX as usize {
        return Err(Error::InvalidArguments("column exceeds 2^32 rows".into()));
    }
    let runs = scan_runs(values);
    let row_count = values.len() as u32;
    Ok(match variant {
        RleVariant::Vl => RleColumn::Vl(VlRleColumn {
            runs: runs.iter().map(|&(v, _, l)| (v, l)).collect(),
            row_count,
        }),
        RleVariant::Vsl => RleColumn::Vsl(VslRleColumn { runs, row_count }),
        RleVariant::Vs => RleColumn::Vs(VsRleColumn {
            runs: runs.iter().map(|&(v, s, _)| (v, s)).collect(),
            row_count,
        }),
        RleVariant::Vsb => {
            let domain: Vec<i32> = runs.iter().map(|&(v, _, _)| v).collect();
            // runs of a sorted column have strictly increasing values, so the
            // run values ARE the domain
            let width = width_for_domain(domain.len());
            let codes: Vec<u64> = (0..runs.len() as u64).collect();
            RleColumn::Vsb(VsbRleColumn {
                values: BitPackedVector::pack(&codes, width),
                starts: runs.iter().map(|&(_, s, _)| s).collect(),
                domain,
                row_count,
            })
        }
    })
}

impl RleColumn {
    pub fn variant(&self) -> RleVariant {
        match self {
            RleColumn::Vl(_) => RleVariant::Vl,
            RleColumn::Vsl(_) => RleVariant::Vsl,
            RleColumn::Vs(_) => RleVariant::Vs,
            RleColumn::Vsb(_) => RleVariant::Vsb,
        }
    }

    pub fn row_count(&self) -> u32 {
        match self {
            RleColumn::Vl(c) => c.row_count,
            RleColumn::Vsl(c) => c.row_count,
            RleColumn::Vs(c) => c.row_count,
            RleColumn::Vsb(c) => c.row_count,
        }
    }

    pub fn run_count(&self) -> usize {
        match self {
            RleColumn::Vl(c) => c.runs.len(),
            RleColumn::Vsl(c) => c.runs.len(),
            RleColumn::Vs(c) => c.runs.len(),
            RleColumn::Vsb(c) => c.starts.len(),
        }
    }

    /// The i-th run as (value, start, length), derived per layout.
    pub fn run(&self, i: usize) -> (i32, u32, u32) {
        match self {
            RleColumn::Vl(c) => {
                // vl stores no starts; prefix-sum on demand. Callers that need
                // positional access should use the other layouts.
                let start: u32 = c.runs[..i].iter().map(|&(_, l)| l).sum();
                (c.runs[i].0, start, c.runs[i].1)
            }
            RleColumn::Vsl(c) => c.runs[i],
            RleColumn::Vs(c) => {
                let (v, s) = c.runs[i];
                let end = c
                    .runs
                    .get(i + 1)
                    .map(|&(_, s2)| s2)
                    .unwrap_or(c.row_count);
                (v, s, end - s)
            }
            RleColumn::Vsb(c) => {
                let v = c.domain[c.values.get_unchecked(i) as usize];
                let s = c.starts[i];
                let end = c.starts.get(i + 1).copied().unwrap_or(c.row_count);
                (v, s, end - s)
            }
        }
    }

    /// The i-th run value without touching starts.
    fn run_value(&self, i: usize) -> i32 {
        match self {
            RleColumn::Vl(c) => c.runs[i].0,
            RleColumn::Vsl(c) => c.runs[i].0,
            RleColumn::Vs(c) => c.runs[i].0,
            RleColumn::Vsb(c) => c.domain[c.values.get_unchecked(i) as usize],
        }
    }

    /// Locate the run holding `t`, if any. Binary search over the sorted run
    /// values; O(log R) probes plus one O(1) bit-unpack per probe for vsb.
    pub fn locate(&self, t: i32) -> Option<RunSpan> {
        let n = self.run_count();
        if n == 0 {
            return None;
        }
        let mut lo = 0usize;
        let mut hi = n;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.run_value(mid) < t {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo < n && self.run_value(lo) == t {
            let (_, start, length) = self.run(lo);
            Some(RunSpan { start, length })
        } else {
            None
        }
    }

    /// Index of the first run whose value exceeds `t` (= number of runs <= t).
    pub fn runs_leq(&self, t: i32) -> usize {
        let n = self.run_count();
        let mut lo = 0usize;
        let mut hi = n;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.run_value(mid) <= t {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Row count of all runs with value <= t. O(log R) for start-bearing
    /// layouts; O(R) prefix sum for vl.
    pub fn rows_leq(&self, t: i32) -> u32 {
        let boundary = self.runs_leq(t);
        if boundary == 0 {
            return 0;
        }
        match self {
            RleColumn::Vl(c) => c.runs[..boundary].iter().map(|&(_, l)| l).sum(),
            _ => {
                let (_, s, l) = self.run(boundary - 1);
                s + l
            }
        }
    }

    pub fn decode(&self) -> Column {
        crate::instrument::record_decoded(self.row_count() as u64);
        let mut values = Vec::with_capacity(self.row_count() as usize);
        for i in 0..self.run_count() {
            let (v, _, l) = self.run(i);
            values.extend(std::iter::repeat(v).take(l as usize));
        }
        Column::new("decoded", ColumnValues::Int32(values))
    }

    /// Convert between layouts without consulting the original column.
    pub fn convert(&self, target: RleVariant) -> RleColumn {
        let runs: Vec<(i32, u32, u32)> = (0..self.run_count()).map(|i| self.run(i)).collect();
        let row_count = self.row_count();
        match target {
            RleVariant::Vl => RleColumn::Vl(VlRleColumn {
                runs: runs.iter().map(|&(v, _, l)| (v, l)).collect(),
                row_count,
            }),
            RleVariant::Vsl => RleColumn::Vsl(VslRleColumn { runs, row_count }),
            RleVariant::Vs => RleColumn::Vs(VsRleColumn {
                runs: runs.iter().map(|&(v, s, _)| (v, s)).collect(),
                row_count,
            }),
            RleVariant::Vsb => {
                let domain: Vec<i32> = runs.iter().map(|&(v, _, _)| v).collect();
                let width = width_for_domain(domain.len());
                let codes: Vec<u64> = (0..runs.len() as u64).collect();
                RleColumn::Vsb(VsbRleColumn {
                    values: BitPackedVector::pack(&codes, width),
                    starts: runs.iter().map(|&(_, s, _)| s).collect(),
                    domain,
                    row_count,
                })
            }
        }
    }

    pub fn vsb(&self) -> Option<&VsbRleColumn> {
        match self {
            RleColumn::Vsb(c) => Some(c),
            _ => None,
        }
    }
}

impl VsbRleColumn {
    pub fn values(&self) -> &BitPackedVector {
        &self.values
    }

    pub fn starts(&self) -> &[u32] {
        &self.starts
    }

    pub fn domain(&self) -> &[i32] {
        &self.domain
    }

    pub fn from_parts(
        values: BitPackedVector,
        starts: Vec<u32>,
        domain: Vec<i32>,
        row_count: u32,
    ) -> Self {
        VsbRleColumn {
            values,
            starts,
            domain,
            row_count,
        }
    }
}

impl VlRleColumn {
    pub fn runs(&self) -> &[(i32, u32)] {
        &self.runs
    }

    pub fn from_parts(runs: Vec<(i32, u32)>, row_count: u32) -> Self {
        VlRleColumn { runs, row_count }
    }
}

impl VslRleColumn {
    pub fn runs(&self) -> &[(i32, u32, u32)] {
        &self.runs
    }

    pub fn from_parts(runs: Vec<(i32, u32, u32)>, row_count: u32) -> Self {
        VslRleColumn { runs, row_count }
    }
}

impl VsRleColumn {
    pub fn runs(&self) -> &[(i32, u32)] {
        &self.runs
    }

    pub fn from_parts(runs: Vec<(i32, u32)>, row_count: u32) -> Self {
        VsRleColumn { runs, row_count }
    }
}

/// Analytic space model, exact for the serialized payload:
/// vl 8R, vsl 12R, vs 8R, vsb 4R + ⌈R·max(1,⌈log2 D⌉)/8⌉ bytes.
pub fn rle_space_bytes(
    variant: RleVariant,
    run_count: u64,
    domain_size: u64,
    _row_count: u64,
) -> u64 {
    if run_count == 0 {
        return 0;
    }
    match variant {
        RleVariant::Vl => 8 * run_count,
        RleVariant::Vsl => 12 * run_count,
        RleVariant::Vs => 8 * run_count,
        RleVariant::Vsb => {
            let width = width_for_domain(domain_size as usize) as u64;
            4 * run_count + (run_count * width).div_ceil(8)
        }
    }
}
