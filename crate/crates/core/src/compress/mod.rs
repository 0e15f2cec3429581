//! BWT and LZ77 computed in compressed working space, with their inverses.

pub mod format;

use crate::error::{Error, Result};
use crate::fm::{DynamicBwt, WtFmIndex};
use crate::string::{DynString, PrefixCode, RleString, WaveletString};

/// L-column representation used while building a BWT.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BwtMode {
    /// Run-length string with a fixed code over the text alphabet.
    Rle,
    /// Wavelet tree with a Huffman code for the text frequencies.
    Wavelet,
}

/// A BWT and the most bits its construction ever held.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BwtOutput {
    /// L column of `text$`; `None` is the terminator.
    pub bwt: Vec<Option<u8>>,
    pub peak_audit_bits: u64,
}

/// One LZ77 phrase: a copy of `length` bytes from `source`, then `next`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lz77Factor {
    pub source: Option<usize>,
    pub length: usize,
    pub next: u8,
}

impl Lz77Factor {
    pub fn literal(next: u8) -> Self {
        Self {
            source: None,
            length: 0,
            next,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lz77Output {
    pub factors: Vec<Lz77Factor>,
    pub peak_audit_bits: u64,
}

fn extend_all<L: DynString>(mut bwt: DynamicBwt<L>, text: &[u8]) -> Result<BwtOutput> {
    let mut peak = bwt.audit_bits();
    for &c in text.iter().rev() {
        bwt.extend_left(c)?;
        peak = peak.max(bwt.audit_bits());
    }
    Ok(BwtOutput {
        bwt: bwt.to_vec(),
        peak_audit_bits: peak,
    })
}

/// BWT of `text$` built by left extension, one byte at a time from the end.
pub fn build_bwt(text: &[u8], mode: BwtMode) -> Result<BwtOutput> {
    if text.is_empty() {
        return Err(Error::EmptyInput);
    }
    match mode {
        BwtMode::Rle => {
            let code = PrefixCode::fixed_for_bytes(text)?;
            extend_all(DynamicBwt::new(RleString::new(code)), text)
        }
        BwtMode::Wavelet => {
            let code = PrefixCode::huffman_for_bytes(text)?;
            extend_all(DynamicBwt::new(WaveletString::new(code)), text)
        }
    }
}

/// Recovers the text from the L column of `text$`.
pub fn invert_bwt(bwt: &[Option<u8>]) -> Result<Vec<u8>> {
    let terminators = bwt.iter().filter(|c| c.is_none()).count();
    if terminators != 1 {
        return Err(Error::Format(format!(
            "expected exactly one terminator, found {terminators}"
        )));
    }
    let mut first = [0usize; 257];
    let mut ranks = Vec::with_capacity(bwt.len());
    let mut seen = [0usize; 256];
    for &c in bwt.iter().flatten() {
        first[c as usize + 1] += 1;
    }
    first[0] = 1;
    for c in 1..257 {
        first[c] += first[c - 1];
    }
    for &c in bwt {
        match c {
            Some(c) => {
                ranks.push(seen[c as usize]);
                seen[c as usize] += 1;
            }
            None => ranks.push(0),
        }
    }

    let n = bwt.len() - 1;
    let mut out = Vec::with_capacity(n);
    let mut row = 0;
    for _ in 0..n {
        let c = bwt[row].ok_or_else(|| Error::Format("LF cycle is shorter than the input".into()))?;
        out.push(c);
        row = first[c as usize] + ranks[row];
    }
    if bwt[row].is_some() {
        return Err(Error::Format("LF cycle does not return to the terminator".into()));
    }
    out.reverse();
    Ok(out)
}

/// Sample rate of the index used by [`lz77_factorize`].
pub const LZ77_SAMPLE_RATE: usize = 8;

/// Greedy LZ77 factorization.
///
/// Each phrase copies the longest prefix of the remaining text that occurs
/// entirely inside the text already factored, from its leftmost occurrence,
/// and ends with one explicit byte. The search runs on an FM-index of the
/// reversed factored prefix, which grows by left extension.
pub fn lz77_factorize(text: &[u8]) -> Result<Lz77Output> {
    if text.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = text.len();
    let mut index = WtFmIndex::with_code(PrefixCode::huffman_for_bytes(text)?, LZ77_SAMPLE_RATE);
    let mut peak = index.audit_bits();
    let mut factors = Vec::new();
    let mut i = 0;
    while i < n {
        let mut rows = 0..index.bwt().len();
        let mut length = 0;
        while i + length + 1 < n {
            let next = index.bwt().backward_step(rows.clone(), text[i + length]);
            if next.is_empty() {
                break;
            }
            rows = next;
            length += 1;
        }
        let factor = if length == 0 {
            Lz77Factor::literal(text[i])
        } else {
            // An occurrence at p in the reversed prefix starts at i - p - length.
            let p = rows.map(|row| index.locate_row(row)).max().expect("non-empty interval");
            Lz77Factor {
                source: Some(i - p - length),
                length,
                next: text[i + length],
            }
        };
        for &c in &text[i..=i + length] {
            index.extend_left(c)?;
        }
        peak = peak.max(index.audit_bits());
        factors.push(factor);
        i += length + 1;
    }
    Ok(Lz77Output {
        factors,
        peak_audit_bits: peak,
    })
}

/// Expands a factor list back into text.
pub fn lz77_decode(factors: &[Lz77Factor]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for (k, f) in factors.iter().enumerate() {
        match f.source {
            None if f.length > 0 => {
                return Err(Error::Format(format!("factor {k} copies {} bytes without a source", f.length)));
            }
            None => {}
            Some(_) if f.length == 0 => {
                return Err(Error::Format(format!("factor {k} has a source but no length")));
            }
            Some(s) => {
                let end = s.checked_add(f.length).filter(|&e| e <= out.len()).ok_or_else(|| {
                    Error::Format(format!(
                        "factor {k} copies [{s}, {s}+{}) beyond the {} decoded bytes",
                        f.length,
                        out.len()
                    ))
                })?;
                out.extend_from_within(s..end);
            }
        }
        out.push(f.next);
    }
    Ok(out)
}
