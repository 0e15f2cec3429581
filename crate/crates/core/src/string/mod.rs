//! Dynamic strings with rank, select, access and insert.

mod code;
mod rle;
mod wavelet;

pub use code::{CodeMode, Codeword, PrefixCode};
pub use rle::RleString;
pub use wavelet::WaveletString;

use crate::error::Result;

/// A character. Byte strings use `0..=255`.
pub type Symbol = u32;

/// Operations shared by [`WaveletString`] and [`RleString`].
///
/// `rank(i, c)` counts `c` in `[0, i)`; `select(j, c)` is the position of the
/// `(j+1)`-th `c`.
pub trait DynString {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn access(&self, i: usize) -> Symbol;

    fn rank(&self, i: usize, c: Symbol) -> Result<usize>;

    fn select(&self, j: usize, c: Symbol) -> Result<usize>;

    fn insert(&mut self, i: usize, c: Symbol) -> Result<()>;

    fn push(&mut self, c: Symbol) -> Result<()> {
        self.insert(self.len(), c)
    }

    /// Whether `c` may be inserted.
    fn admits(&self, c: Symbol) -> bool;

    /// Bits allocated by the structure, including its own header.
    fn audit_bits(&self) -> u64;

    fn to_vec(&self) -> Vec<Symbol> {
        (0..self.len()).map(|i| self.access(i)).collect()
    }
}
