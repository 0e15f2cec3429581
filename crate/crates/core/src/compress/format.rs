//! Byte formats for BWT and LZ77 files.
//!
//! A BWT file escapes `0x00`: the terminator is `00 00` and a literal zero
//! byte is `00 01`; every other byte stands for itself.
//!
//! An LZ77 file has one factor per line as `source,length,next`, where
//! `source` is `-` for a literal and `next` is the decimal byte value. Every
//! line ends with `\n`.

use std::fmt::Write as _;

use super::Lz77Factor;
use crate::error::{Error, Result};

pub fn encode_bwt(bwt: &[Option<u8>]) -> Vec<u8> {
    let mut out = Vec::with_capacity(bwt.len() + 2);
    for &c in bwt {
        match c {
            None => out.extend_from_slice(&[0, 0]),
            Some(0) => out.extend_from_slice(&[0, 1]),
            Some(c) => out.push(c),
        }
    }
    out
}

pub fn decode_bwt(bytes: &[u8]) -> Result<Vec<Option<u8>>> {
    let mut out = Vec::with_capacity(bytes.len());
    let mut it = bytes.iter().enumerate();
    while let Some((_, &b)) = it.next() {
        if b != 0 {
            out.push(Some(b));
            continue;
        }
        match it.next() {
            Some((_, 0)) => out.push(None),
            Some((_, 1)) => out.push(Some(0)),
            Some((at, &e)) => {
                return Err(Error::Format(format!("invalid escape 0x00 0x{e:02x} at byte {}", at - 1)));
            }
            None => return Err(Error::Format("dangling escape byte at end of input".into())),
        }
    }
    Ok(out)
}

pub fn encode_factors(factors: &[Lz77Factor]) -> String {
    let mut out = String::with_capacity(factors.len() * 8);
    for f in factors {
        match f.source {
            Some(s) => write!(out, "{s}"),
            None => write!(out, "-"),
        }
        .expect("writing to a String");
        writeln!(out, ",{},{}", f.length, f.next).expect("writing to a String");
    }
    out
}

/// Parses a factor file. Errors carry the 1-based line number.
pub fn decode_factors(text: &str) -> Result<Vec<Lz77Factor>> {
    let mut factors = Vec::new();
    let lines: Vec<&str> = text.split('\n').collect();
    let (last, body) = lines.split_last().expect("split yields at least one piece");
    if !last.is_empty() {
        return Err(Error::Parse {
            line: lines.len(),
            message: "missing trailing newline".into(),
        });
    }
    for (k, line) in body.iter().enumerate() {
        let bad = |message: String| Error::Parse { line: k + 1, message };
        let fields: Vec<&str> = line.split(',').collect();
        let [source, length, next] = fields[..] else {
            return Err(bad(format!("expected 3 comma-separated fields, found {}", fields.len())));
        };
        let source = match source {
            "-" => None,
            s => Some(s.parse::<usize>().map_err(|e| bad(format!("source {s:?}: {e}")))?),
        };
        let length = length
            .parse::<usize>()
            .map_err(|e| bad(format!("length {length:?}: {e}")))?;
        let next = next.parse::<u8>().map_err(|e| bad(format!("next {next:?}: {e}")))?;
        if source.is_none() != (length == 0) {
            return Err(bad("length must be 0 exactly when source is '-'".into()));
        }
        factors.push(Lz77Factor { source, length, next });
    }
    Ok(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn escapes() {
        let bwt = vec![Some(b'i'), None, Some(0), Some(1)];
        let bytes = encode_bwt(&bwt);
        assert_eq!(bytes, vec![b'i', 0, 0, 0, 1, 1]);
        assert_eq!(decode_bwt(&bytes).unwrap(), bwt);
        assert!(decode_bwt(&[5, 0]).is_err());
        assert!(decode_bwt(&[0, 7]).is_err());
    }

    #[test]
    fn factor_lines() {
        let f = vec![
            Lz77Factor::literal(b'a'),
            Lz77Factor { source: Some(0), length: 1, next: b'a' },
        ];
        let text = encode_factors(&f);
        assert_eq!(text, "-,0,97\n0,1,97\n");
        assert_eq!(decode_factors(&text).unwrap(), f);
        assert_eq!(decode_factors("").unwrap(), vec![]);
    }

    #[test]
    fn factor_errors_report_lines() {
        let line = |s: &str| match decode_factors(s) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line("-,0,97\n0,1\n"), 2);
        assert_eq!(line("-,0,97\n0,1,300\n"), 2);
        assert_eq!(line("x,0,1\n"), 1);
        assert_eq!(line("-,3,1\n"), 1);
        assert_eq!(line("-,0,97"), 1);
        assert_eq!(line("-,0,97\n\n"), 2);
    }

    proptest! {
        #[test]
        fn bwt_bytes_round_trip(bytes in proptest::collection::vec(any::<u8>(), 0..200), term in any::<prop::sample::Index>()) {
            let mut bwt: Vec<Option<u8>> = bytes.into_iter().map(Some).collect();
            bwt.insert(term.index(bwt.len() + 1), None);
            prop_assert_eq!(decode_bwt(&encode_bwt(&bwt)).unwrap(), bwt);
        }
    }
}
