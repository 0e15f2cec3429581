use std::mem;
use std::ops::Range;

use super::bwt::{byte_code, DynamicBwt};
use crate::bitvector::{DynBitvector, GapBitvector, SuccinctBitvector};
use crate::error::Result;
use crate::spsi::{SpsiConfig, SpsiTree};
use crate::string::{DynString, PrefixCode, RleString, WaveletString};

/// FM-index over a [`DynamicBwt`] with suffix-array samples.
///
/// A row is marked when its suffix starts at a text position `j` with
/// `n - 1 - j` divisible by `k`. Counting from the right keeps stored samples
/// valid as the text grows to the left. The samples of marked rows are kept
/// in row order.
#[derive(Debug)]
pub struct FmIndex<L, B> {
    bwt: DynamicBwt<L>,
    marks: B,
    samples: SpsiTree,
    k: usize,
}

/// Wavelet-tree L column with plain marks.
pub type WtFmIndex = FmIndex<WaveletString, SuccinctBitvector>;
/// Run-length L column with gap-encoded marks.
pub type RleFmIndex = FmIndex<RleString, GapBitvector>;

impl<L: DynString, B: DynBitvector> FmIndex<L, B> {
    /// An index of the empty text over an empty L column, sampling every
    /// `k`-th position.
    pub fn new(l: L, k: usize) -> Self {
        assert!(k >= 1, "sample rate must be positive");
        let mut marks = B::default();
        marks.push(false);
        Self {
            bwt: DynamicBwt::new(l),
            marks,
            samples: SpsiTree::new(SpsiConfig::PACKED),
            k,
        }
    }

    pub fn bwt(&self) -> &DynamicBwt<L> {
        &self.bwt
    }

    pub fn marks(&self) -> &B {
        &self.marks
    }

    pub fn samples(&self) -> &SpsiTree {
        &self.samples
    }

    pub fn sample_rate(&self) -> usize {
        self.k
    }

    pub fn text_len(&self) -> usize {
        self.bwt.text_len()
    }

    /// Prepends `c` to the indexed text.
    pub fn extend_left(&mut self, c: u8) -> Result<()> {
        let rho = self.text_len();
        let row = self.bwt.extend_left(c)?;
        let marked = rho.is_multiple_of(self.k);
        self.marks.insert(row, marked);
        if marked {
            let at = self.marks.rank1(row);
            self.samples.insert(at, rho as u64);
        }
        Ok(())
    }

    /// Prepends every byte of `text`, keeping its order.
    pub fn prepend(&mut self, text: &[u8]) -> Result<()> {
        for &c in text.iter().rev() {
            self.extend_left(c)?;
        }
        Ok(())
    }

    pub fn interval(&self, pattern: &[u8]) -> Range<usize> {
        self.bwt.interval(pattern)
    }

    pub fn count(&self, pattern: &[u8]) -> usize {
        self.interval(pattern).len()
    }

    /// Text position of the suffix at `row`.
    pub fn locate_row(&self, mut row: usize) -> usize {
        let n = self.text_len();
        let mut steps = 0;
        loop {
            if row == self.bwt.terminator_row() {
                return steps;
            }
            let (marked, at) = self.marks.access_rank(row);
            if marked {
                return n - 1 - self.samples.at(at) as usize + steps;
            }
            row = self.bwt.lf(row);
            steps += 1;
        }
    }

    /// Sorted start positions of `pattern`.
    pub fn locate(&self, pattern: &[u8]) -> Vec<usize> {
        let mut out: Vec<usize> = self.interval(pattern).map(|row| self.locate_row(row)).collect();
        out.sort_unstable();
        out
    }

    pub fn audit_bits(&self) -> u64 {
        ((mem::size_of::<Self>() - mem::size_of::<DynamicBwt<L>>() - mem::size_of::<B>() - mem::size_of::<SpsiTree>())
            * 8) as u64
            + self.bwt.audit_bits()
            + self.marks.audit_bits()
            + self.samples.audit_bits()
    }
}

impl WtFmIndex {
    /// Wavelet-tree index over the full byte alphabet.
    pub fn wavelet(k: usize) -> Self {
        Self::new(WaveletString::new(byte_code()), k)
    }

    /// Wavelet-tree index whose code is given.
    pub fn with_code(code: PrefixCode, k: usize) -> Self {
        Self::new(WaveletString::new(code), k)
    }
}

impl RleFmIndex {
    /// Run-length index over the full byte alphabet.
    pub fn rle(k: usize) -> Self {
        Self::new(RleString::new(byte_code()), k)
    }
}
