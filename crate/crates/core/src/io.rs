//! File formats: "COLC" uncompressed column files, "COLD" encoded column
//! containers, and one-column CSV ingestion.
//!
//! COLC: magic "COLC", version byte, kind byte (0 = int32, 1 = string),
//! row count as u64 LE, then values (i32 LE, or u32 LE length-prefixed
//! UTF-8). COLD: magic "COLD", version byte, codec tag byte, codec header,
//! payload. All integers little-endian.

use std::io::{Read, Write};
use std::path::Path;

use crate::bitmap::BitmapIndex;
use crate::bitpack::BitPackedVector;
use crate::column::{Column, ColumnValues};
use crate::dict::{BitDictColumn, Dictionary, WordDictColumn};
use crate::encoded::{EncodedColumn, Scheme};
use crate::error::{Error, Result};
use crate::huffman::HuffmanColumn;
use crate::rle::{RleColumn, VlRleColumn, VsRleColumn, VsbRleColumn, VslRleColumn};
use crate::wah::WahBitmap;

const COLC_MAGIC: &[u8; 4] = b"COLC";
const COLD_MAGIC: &[u8; 4] = b"COLD";
const FORMAT_VERSION: u8 = 1;

const TAG_WORD_DICT: u8 = 0;
const TAG_BIT_DICT: u8 = 1;
const TAG_VL: u8 = 2;
const TAG_VSL: u8 = 3;
const TAG_VS: u8 = 4;
const TAG_VSB: u8 = 5;
const TAG_BITMAP: u8 = 6;
const TAG_HUFFMAN: u8 = 7;

fn scheme_tag(scheme: Scheme) -> u8 {
    match scheme {
        Scheme::WordDict => TAG_WORD_DICT,
        Scheme::BitDict => TAG_BIT_DICT,
        Scheme::VlRle => TAG_VL,
        Scheme::VslRle => TAG_VSL,
        Scheme::VsRle => TAG_VS,
        Scheme::VsbRle => TAG_VSB,
        Scheme::Bitmap => TAG_BITMAP,
        Scheme::Huffman => TAG_HUFFMAN,
    }
}

struct Writer<W: Write> {
    inner: W,
}

impl<W: Write> Writer<W> {
    fn u8(&mut self, v: u8) -> Result<()> {
        Ok(self.inner.write_all(&[v])?)
    }
    fn u32(&mut self, v: u32) -> Result<()> {
        Ok(self.inner.write_all(&v.to_le_bytes())?)
    }
    fn i32(&mut self, v: i32) -> Result<()> {
        Ok(self.inner.write_all(&v.to_le_bytes())?)
    }
    fn u64(&mut self, v: u64) -> Result<()> {
        Ok(self.inner.write_all(&v.to_le_bytes())?)
    }
    fn bytes(&mut self, v: &[u8]) -> Result<()> {
        Ok(self.inner.write_all(v)?)
    }
    fn str(&mut self, s: &str) -> Result<()> {
        self.u32(s.len() as u32)?;
        self.bytes(s.as_bytes())
    }
}

struct Reader<R: Read> {
    inner: R,
}

impl<R: Read> Reader<R> {
    fn u8(&mut self) -> Result<u8> {
        let mut b = [0u8; 1];
        self.inner.read_exact(&mut b)?;
        Ok(b[0])
    }
    fn u32(&mut self) -> Result<u32> {
        let mut b = [0u8; 4];
        self.inner.read_exact(&mut b)?;
        Ok(u32::from_le_bytes(b))
    }
    fn i32(&mut self) -> Result<i32> {
        let mut b = [0u8; 4];
        self.inner.read_exact(&mut b)?;
        Ok(i32::from_le_bytes(b))
    }
    fn u64(&mut self) -> Result<u64> {
        let mut b = [0u8; 8];
        self.inner.read_exact(&mut b)?;
        Ok(u64::from_le_bytes(b))
    }
    fn bytes(&mut self, n: usize) -> Result<Vec<u8>> {
        let mut b = vec![0u8; n];
        self.inner.read_exact(&mut b)?;
        Ok(b)
    }
    fn str(&mut self) -> Result<String> {
        let n = self.u32()? as usize;
        String::from_utf8(self.bytes(n)?)
            .map_err(|e| Error::MalformedFile(format!("invalid UTF-8: {e}")))
    }
}

pub fn write_column<W: Write>(col: &Column, out: W) -> Result<()> {
    let mut w = Writer { inner: out };
    w.bytes(COLC_MAGIC)?;
    w.u8(FORMAT_VERSION)?;
    match col.values() {
        ColumnValues::Int32(values) => {
            w.u8(0)?;
            w.u64(values.len() as u64)?;
            for &v in values {
                w.i32(v)?;
            }
        }
        ColumnValues::String(values) => {
            w.u8(1)?;
            w.u64(values.len() as u64)?;
            for v in values {
                w.str(v)?;
            }
        }
    }
    Ok(())
}

pub fn read_column<R: Read>(name: &str, input: R) -> Result<Column> {
    let mut r = Reader { inner: input };
    let magic = r.bytes(4)?;
    if magic != COLC_MAGIC {
        return Err(Error::MalformedFile("bad COLC magic".into()));
    }
    let version = r.u8()?;
    if version != FORMAT_VERSION {
        return Err(Error::MalformedFile(format!("unknown version {version}")));
    }
    let kind = r.u8()?;
    let n = r.u64()? as usize;
    let values = match kind {
        0 => ColumnValues::Int32((0..n).map(|_| r.i32()).collect::<Result<_>>()?),
        1 => ColumnValues::String((0..n).map(|_| r.str()).collect::<Result<_>>()?),
        k => return Err(Error::MalformedFile(format!("unknown kind byte {k}"))),
    };
    Ok(Column::new(name, values))
}

pub fn write_column_file(col: &Column, path: &Path) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_column(col, std::io::BufWriter::new(f))
}

pub fn read_column_file(path: &Path) -> Result<Column> {
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let f = std::fs::File::open(path)?;
    read_column(&name, std::io::BufReader::new(f))
}

/// Read a one-column CSV: the header line is the column name. Values parse
/// as int32 when every row does; otherwise the column is string-typed.
pub fn read_csv_column<R: Read>(input: R) -> Result<Column> {
    let mut text = String::new();
    let mut r = input;
    r.read_to_string(&mut text)?;
    let mut lines = text.lines();
    let name = lines
        .next()
        .ok_or_else(|| Error::MalformedFile("empty CSV: missing header".into()))?
        .trim()
        .to_owned();
    let rows: Vec<&str> = lines.map(|l| l.trim()).collect();
    let ints: Option<Vec<i32>> = rows.iter().map(|s| s.parse().ok()).collect();
    let values = match ints {
        Some(v) => ColumnValues::Int32(v),
        None => ColumnValues::String(rows.into_iter().map(str::to_owned).collect()),
    };
    Ok(Column::new(name, values))
}

pub fn read_csv_column_file(path: &Path) -> Result<Column> {
    let f = std::fs::File::open(path)?;
    read_csv_column(std::io::BufReader::new(f))
}

/// Bytes the COLD container spends on magic, version, tag and the
/// codec-specific header, ahead of the payload counted by
/// [`EncodedColumn::payload_bytes`].
pub fn cold_header_bytes(enc: &EncodedColumn) -> u64 {
    let common = 4 + 1 + 1; // magic, version, tag
    common
        + match enc {
            // row_count + dict entry count
            EncodedColumn::WordDict(_) => 8 + 4,
            // row_count + domain len + bit width; the 4D domain list itself
            // belongs to the payload per the bit-DICT space model
            EncodedColumn::BitDict(_) => 8 + 4 + 1,
            EncodedColumn::Rle(r) => match r {
                // row_count + run count
                RleColumn::Vl(_) | RleColumn::Vsl(_) | RleColumn::Vs(_) => 8 + 4,
                // row_count + run count + bit width + domain entries
                RleColumn::Vsb(v) => 8 + 4 + 1 + 4 * v.domain().len() as u64,
            },
            // row_count + domain len + per-bitmap (value, bit length, word count)
            EncodedColumn::Bitmap(b) => 8 + 4 + 16 * b.domain().len() as u64,
            EncodedColumn::Huffman(h) => {
                let table: u64 = match h.domain() {
                    // payload_bytes already counts the (value, length) table
                    ColumnValues::Int32(_) | ColumnValues::String(_) => 0,
                };
                8 + 1 + 4 + 8 + table
            }
        }
}

pub fn write_encoded<W: Write>(enc: &EncodedColumn, out: W) -> Result<()> {
    let mut w = Writer { inner: out };
    w.bytes(COLD_MAGIC)?;
    w.u8(FORMAT_VERSION)?;
    w.u8(scheme_tag(enc.scheme()))?;
    match enc {
        EncodedColumn::WordDict(c) => {
            w.u64(c.row_count() as u64)?;
            w.u32(c.dict().len() as u32)?;
            for e in c.dict().entries() {
                w.str(e)?;
            }
            for &code in c.codes() {
                w.u32(code)?;
            }
        }
        EncodedColumn::BitDict(c) => {
            w.u64(c.row_count() as u64)?;
            w.u32(c.domain().len() as u32)?;
            for &v in c.domain() {
                w.i32(v)?;
            }
            w.u8(c.bit_width() as u8)?;
            w.bytes(&c.packed().payload_le_bytes())?;
        }
        EncodedColumn::Rle(r) => {
            w.u64(r.row_count() as u64)?;
            w.u32(r.run_count() as u32)?;
            match r {
                RleColumn::Vl(c) => {
                    for &(v, l) in c.runs() {
                        w.i32(v)?;
                        w.u32(l)?;
                    }
                }
                RleColumn::Vsl(c) => {
                    for &(v, s, l) in c.runs() {
                        w.i32(v)?;
                        w.u32(s)?;
                        w.u32(l)?;
                    }
                }
                RleColumn::Vs(c) => {
                    for &(v, s) in c.runs() {
                        w.i32(v)?;
                        w.u32(s)?;
                    }
                }
                RleColumn::Vsb(c) => {
                    w.u8(c.values().bit_width() as u8)?;
                    for &v in c.domain() {
                        w.i32(v)?;
                    }
                    for &s in c.starts() {
                        w.u32(s)?;
                    }
                    w.bytes(&c.values().payload_le_bytes())?;
                }
            }
        }
        EncodedColumn::Bitmap(b) => {
            w.u64(b.row_count())?;
            w.u32(b.domain().len() as u32)?;
            for (v, bm) in b.iter() {
                w.i32(v)?;
                w.u64(bm.bit_length())?;
                w.u32(bm.words().len() as u32)?;
                for &word in bm.words() {
                    w.u32(word)?;
                }
            }
        }
        EncodedColumn::Huffman(h) => {
            w.u64(h.row_count() as u64)?;
            match h.domain() {
                ColumnValues::Int32(_) => w.u8(0)?,
                ColumnValues::String(_) => w.u8(1)?,
            }
            w.u32(h.lengths().len() as u32)?;
            match h.domain() {
                ColumnValues::Int32(d) => {
                    for (v, &len) in d.iter().zip(h.lengths()) {
                        w.i32(*v)?;
                        w.u8(len as u8)?;
                    }
                }
                ColumnValues::String(d) => {
                    for (v, &len) in d.iter().zip(h.lengths()) {
                        w.str(v)?;
                        w.u8(len as u8)?;
                    }
                }
            }
            w.u64(h.bit_len())?;
            w.bytes(h.bitstream())?;
        }
    }
    Ok(())
}

pub fn read_encoded<R: Read>(input: R) -> Result<EncodedColumn> {
    let mut r = Reader { inner: input };
    let magic = r.bytes(4)?;
    if magic != COLD_MAGIC {
        return Err(Error::MalformedFile("bad COLD magic".into()));
    }
    let version = r.u8()?;
    if version != FORMAT_VERSION {
        return Err(Error::MalformedFile(format!("unknown version {version}")));
    }
    let tag = r.u8()?;
    Ok(match tag {
        TAG_WORD_DICT => {
            let rows = r.u64()? as usize;
            let dict_len = r.u32()? as usize;
            let entries = (0..dict_len).map(|_| r.str()).collect::<Result<Vec<_>>>()?;
            let codes = (0..rows).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
            EncodedColumn::WordDict(WordDictColumn::from_parts(
                Dictionary::from_sorted_entries(entries),
                codes,
            ))
        }
        TAG_BIT_DICT => {
            let rows = r.u64()? as usize;
            let domain_len = r.u32()? as usize;
            let domain = (0..domain_len).map(|_| r.i32()).collect::<Result<Vec<_>>>()?;
            let width = r.u8()? as u32;
            let payload = r.bytes((width as usize * rows).div_ceil(8))?;
            EncodedColumn::BitDict(BitDictColumn::from_parts(
                BitPackedVector::from_le_bytes(&payload, width, rows)?,
                domain,
            ))
        }
        TAG_VL => {
            let rows = r.u64()? as u32;
            let n = r.u32()? as usize;
            let runs = (0..n)
                .map(|_| Ok((r.i32()?, r.u32()?)))
                .collect::<Result<Vec<_>>>()?;
            EncodedColumn::Rle(RleColumn::Vl(VlRleColumn::from_parts(runs, rows)))
        }
        TAG_VSL => {
            let rows = r.u64()? as u32;
            let n = r.u32()? as usize;
            let runs = (0..n)
                .map(|_| Ok((r.i32()?, r.u32()?, r.u32()?)))
                .collect::<Result<Vec<_>>>()?;
            EncodedColumn::Rle(RleColumn::Vsl(VslRleColumn::from_parts(runs, rows)))
        }
        TAG_VS => {
            let rows = r.u64()? as u32;
            let n = r.u32()? as usize;
            let runs = (0..n)
                .map(|_| Ok((r.i32()?, r.u32()?)))
                .collect::<Result<Vec<_>>>()?;
            EncodedColumn::Rle(RleColumn::Vs(VsRleColumn::from_parts(runs, rows)))
        }
        TAG_VSB => {
            let rows = r.u64()? as u32;
            let n = r.u32()? as usize;
            let width = r.u8()? as u32;
            let domain = (0..n).map(|_| r.i32()).collect::<Result<Vec<_>>>()?;
            let starts = (0..n).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
            let payload = r.bytes((width as usize * n).div_ceil(8))?;
            EncodedColumn::Rle(RleColumn::Vsb(VsbRleColumn::from_parts(
                BitPackedVector::from_le_bytes(&payload, width, n)?,
                starts,
                domain,
                rows,
            )))
        }
        TAG_BITMAP => {
            let rows = r.u64()?;
            let n = r.u32()? as usize;
            let mut domain = Vec::with_capacity(n);
            let mut bitmaps = Vec::with_capacity(n);
            for _ in 0..n {
                domain.push(r.i32()?);
                let bit_length = r.u64()?;
                let word_count = r.u32()? as usize;
                let words = (0..word_count).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
                bitmaps.push(WahBitmap::from_parts(words, bit_length));
            }
            EncodedColumn::Bitmap(BitmapIndex::from_parts(domain, bitmaps, rows))
        }
        TAG_HUFFMAN => {
            let rows = r.u64()? as usize;
            let kind = r.u8()?;
            let n = r.u32()? as usize;
            let mut lengths = Vec::with_capacity(n);
            let domain = match kind {
                0 => {
                    let mut d = Vec::with_capacity(n);
                    for _ in 0..n {
                        d.push(r.i32()?);
                        lengths.push(r.u8()? as u32);
                    }
                    ColumnValues::Int32(d)
                }
                1 => {
                    let mut d = Vec::with_capacity(n);
                    for _ in 0..n {
                        d.push(r.str()?);
                        lengths.push(r.u8()? as u32);
                    }
                    ColumnValues::String(d)
                }
                k => return Err(Error::MalformedFile(format!("unknown kind byte {k}"))),
            };
            let bit_len = r.u64()?;
            let bitstream = r.bytes((bit_len as usize).div_ceil(8))?;
            EncodedColumn::Huffman(HuffmanColumn::from_parts(
                domain, lengths, bitstream, bit_len, rows,
            ))
        }
        t => return Err(Error::UnknownCodecTag(t)),
    })
}

pub fn write_encoded_file(enc: &EncodedColumn, path: &Path) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_encoded(enc, std::io::BufWriter::new(f))
}

pub fn read_encoded_file(path: &Path) -> Result<EncodedColumn> {
    let f = std::fs::File::open(path)?;
    read_encoded(std::io::BufReader::new(f))
}

/// Serialize to an in-memory buffer; handy for size measurement.
pub fn encoded_to_bytes(enc: &EncodedColumn) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_encoded(enc, &mut buf)?;
    Ok(buf)
}

pub fn column_to_bytes(col: &Column) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_column(col, &mut buf)?;
    Ok(buf)
}
