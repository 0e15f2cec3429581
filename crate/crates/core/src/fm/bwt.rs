use std::mem;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::string::{DynString, PrefixCode, RleString, Symbol, WaveletString};

/// Prefix counts over the 256 byte values.
#[derive(Debug, Clone)]
struct Fenwick {
    tree: [u64; 257],
}

impl Fenwick {
    fn new() -> Self {
        Self { tree: [0; 257] }
    }

    fn add(&mut self, c: u8) {
        let mut i = c as usize + 1;
        while i <= 256 {
            self.tree[i] += 1;
            i += i & i.wrapping_neg();
        }
    }

    /// Occurrences of bytes smaller than `c`.
    fn less(&self, c: u8) -> u64 {
        let mut i = c as usize;
        let mut s = 0;
        while i > 0 {
            s += self.tree[i];
            i &= i - 1;
        }
        s
    }
}

/// Burrows-Wheeler transform of `T$` maintained under left extension.
///
/// The matrix has `n + 1` rows; row 0 is the suffix `$`. The terminator is
/// not stored in the L column: `L` holds the `n` text bytes, and the row
/// whose last symbol is `$` is tracked as [`terminator_row`](Self::terminator_row).
#[derive(Debug)]
pub struct DynamicBwt<L> {
    l: L,
    term_pos: usize,
    counts: Fenwick,
    present: [bool; 256],
}

/// BWT with a wavelet-tree L column.
pub type WaveletBwt = DynamicBwt<WaveletString>;
/// BWT with a run-length compressed L column.
pub type RleBwt = DynamicBwt<RleString>;

impl<L: DynString + Default> Default for DynamicBwt<L> {
    fn default() -> Self {
        Self::new(L::default())
    }
}

/// Fixed 8-bit code over every byte value.
pub fn byte_code() -> PrefixCode {
    let all: Vec<Symbol> = (0..256).collect();
    PrefixCode::fixed(&all).expect("non-empty alphabet")
}

impl<L: DynString> DynamicBwt<L> {
    /// The BWT of the empty text over an empty L column.
    pub fn new(l: L) -> Self {
        assert!(l.is_empty(), "L column must start empty");
        Self {
            l,
            term_pos: 0,
            counts: Fenwick::new(),
            present: [false; 256],
        }
    }

    /// Number of rows, `n + 1`.
    pub fn len(&self) -> usize {
        self.l.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn text_len(&self) -> usize {
        self.l.len()
    }

    /// Row whose L symbol is the terminator; its suffix is the whole text.
    pub fn terminator_row(&self) -> usize {
        self.term_pos
    }

    pub fn l_column(&self) -> &L {
        &self.l
    }

    /// Whether `c` may be appended to the text.
    pub fn admits(&self, c: u8) -> bool {
        self.l.admits(c as Symbol)
    }

    /// Whether `c` occurs in the text.
    pub fn contains(&self, c: u8) -> bool {
        self.present[c as usize]
    }

    /// First row whose suffix starts with `c`.
    pub fn c_array(&self, c: u8) -> usize {
        1 + self.counts.less(c) as usize
    }

    /// Stored index of row `i`, which must differ from the terminator row.
    #[inline]
    fn stored(&self, i: usize) -> usize {
        i - (i > self.term_pos) as usize
    }

    /// Last symbol of row `i`; `None` is the terminator.
    pub fn symbol(&self, i: usize) -> Option<u8> {
        assert!(i < self.len(), "row {i} out of range for {} rows", self.len());
        (i != self.term_pos).then(|| self.l.access(self.stored(i)) as u8)
    }

    /// Occurrences of `c` among the last symbols of rows `[0, i)`.
    pub fn rank(&self, i: usize, c: u8) -> usize {
        if !self.present[c as usize] {
            return 0;
        }
        let i = if i > self.term_pos { i - 1 } else { i };
        self.l.rank(i, c as Symbol).expect("present symbol has a code")
    }

    /// Row of the suffix one position to the left.
    pub fn lf(&self, i: usize) -> usize {
        match self.symbol(i) {
            None => 0,
            Some(c) => self.c_array(c) + self.rank(i, c),
        }
    }

    /// Narrows the rows prefixed by `P` to those prefixed by `cP`.
    pub fn backward_step(&self, rows: Range<usize>, c: u8) -> Range<usize> {
        if rows.is_empty() || !self.present[c as usize] {
            return 0..0;
        }
        let base = self.c_array(c);
        base + self.rank(rows.start, c)..base + self.rank(rows.end, c)
    }

    /// Rows whose suffixes start with `pattern`.
    pub fn interval(&self, pattern: &[u8]) -> Range<usize> {
        let mut rows = 0..self.len();
        for &c in pattern.iter().rev() {
            rows = self.backward_step(rows, c);
            if rows.is_empty() {
                return 0..0;
            }
        }
        rows
    }

    /// Turns the BWT of `T$` into the BWT of `cT$` and returns the new
    /// terminator row.
    pub fn extend_left(&mut self, c: u8) -> Result<usize> {
        if !self.admits(c) {
            return Err(Error::UnknownSymbol(c as Symbol));
        }
        self.l.insert(self.term_pos, c as Symbol)?;
        self.present[c as usize] = true;
        let row = self.c_array(c) + self.rank(self.term_pos, c);
        self.counts.add(c);
        self.term_pos = row;
        Ok(row)
    }

    /// Extends by every byte of `text`, last byte first.
    pub fn prepend(&mut self, text: &[u8]) -> Result<()> {
        for &c in text.iter().rev() {
            self.extend_left(c)?;
        }
        Ok(())
    }

    /// The L column, terminator as `None`.
    pub fn to_vec(&self) -> Vec<Option<u8>> {
        let mut out: Vec<Option<u8>> = self.l.to_vec().into_iter().map(|c| Some(c as u8)).collect();
        out.insert(self.term_pos, None);
        out
    }

    /// Recovers the text by walking LF from the `$` row.
    pub fn text(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.text_len());
        let mut i = 0;
        while let Some(c) = self.symbol(i) {
            out.push(c);
            i = self.lf(i);
        }
        out.reverse();
        out
    }

    pub fn audit_bits(&self) -> u64 {
        ((mem::size_of::<Self>() - mem::size_of::<L>()) * 8) as u64 + self.l.audit_bits()
    }
}

impl WaveletBwt {
    /// Empty BWT whose wavelet tree uses a fixed 8-bit code.
    pub fn wavelet() -> Self {
        Self::new(WaveletString::new(byte_code()))
    }
}

impl RleBwt {
    /// Empty BWT whose run heads use a fixed 8-bit code.
    pub fn rle() -> Self {
        Self::new(RleString::new(byte_code()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// L column of `text$` by sorting suffixes.
    fn naive_bwt(text: &[u8]) -> Vec<Option<u8>> {
        let mut sa: Vec<usize> = (0..=text.len()).collect();
        sa.sort_by(|&a, &b| text[a..].cmp(&text[b..]));
        sa.iter().map(|&p| if p == 0 { None } else { Some(text[p - 1]) }).collect()
    }

    /// LF from the explicitly sorted rotation matrix of `text$`.
    fn naive_lf(text: &[u8]) -> Vec<usize> {
        let mut t: Vec<u16> = text.iter().map(|&c| c as u16 + 1).collect();
        t.push(0);
        let n = t.len();
        let rot = |s: usize| -> Vec<u16> { (0..n).map(|k| t[(s + k) % n]).collect() };
        let mut starts: Vec<usize> = (0..n).collect();
        starts.sort_by_key(|&s| rot(s));
        let row_of = |s: usize| starts.iter().position(|&x| x == s).unwrap();
        starts.iter().map(|&s| row_of((s + n - 1) % n)).collect()
    }

    fn check<L: DynString>(bwt: &DynamicBwt<L>, text: &[u8]) {
        assert_eq!(bwt.to_vec(), naive_bwt(text));
        if text.len() <= 12 {
            let lf: Vec<usize> = (0..bwt.len()).map(|i| bwt.lf(i)).collect();
            assert_eq!(lf, naive_lf(text));
        }
        assert_eq!(bwt.text(), text);
    }

    #[test]
    fn single_character() {
        let mut b = WaveletBwt::wavelet();
        assert_eq!(b.lf(0), 0);
        b.extend_left(b'a').unwrap();
        assert_eq!(b.to_vec(), vec![Some(b'a'), None]);
        assert_eq!(b.text(), b"a");
    }

    #[test]
    fn mississippi_step_by_step() {
        let text = b"mississippi";
        let mut w = WaveletBwt::wavelet();
        let mut r = RleBwt::rle();
        for start in (0..text.len()).rev() {
            w.extend_left(text[start]).unwrap();
            r.extend_left(text[start]).unwrap();
            check(&w, &text[start..]);
            check(&r, &text[start..]);
        }
        let mut seen = vec![false; w.len()];
        let mut i = w.terminator_row();
        for _ in 0..w.len() {
            assert!(!seen[i]);
            seen[i] = true;
            i = w.lf(i);
        }
    }

    #[test]
    fn exhaustive_small_alphabet() {
        for len in 0..=7u32 {
            for code in 0..4usize.pow(len) {
                let text: Vec<u8> = (0..len).map(|k| b'a' + (code / 4usize.pow(k) % 4) as u8).collect();
                let mut b = RleBwt::rle();
                b.prepend(&text).unwrap();
                assert_eq!(b.to_vec(), naive_bwt(&text), "{:?}", String::from_utf8_lossy(&text));
            }
        }
    }

    #[test]
    fn binary_bytes_including_zero() {
        let text: Vec<u8> = (0..600u32).map(|i| (i * 7919 % 256) as u8).collect();
        let mut b = WaveletBwt::wavelet();
        b.prepend(&text).unwrap();
        check(&b, &text);
        let p = &text[100..110];
        let naive = text.windows(p.len()).filter(|w| w == &p).count();
        assert_eq!(naive, 2);
        assert_eq!(b.interval(p).len(), naive);
    }

    #[test]
    fn inadmissible_byte() {
        let mut b = WaveletBwt::new(WaveletString::new(PrefixCode::fixed(&[97, 98]).unwrap()));
        b.extend_left(b'a').unwrap();
        assert_eq!(b.extend_left(b'z'), Err(Error::UnknownSymbol(b'z' as Symbol)));
        assert_eq!(b.text(), b"a");
        assert!(b.interval(b"z").is_empty());
    }
}
