//! Dynamic bitvectors built on [`SpsiTree`](crate::SpsiTree).
//!
//! Two representations share the [`DynBitvector`] surface:
//!
//! - [`GapBitvector`] stores the distances between consecutive ones, so its
//!   size depends on the number of ones rather than the length.
//! - [`SuccinctBitvector`] stores the bits themselves in large popcount
//!   leaves and takes `n + o(n)` bits.

mod gap;
mod succinct;

pub use gap::GapBitvector;
pub use succinct::SuccinctBitvector;

/// Operations common to both bitvector representations.
///
/// `rank(i, b)` counts occurrences of `b` in positions `[0, i)`;
/// `select(j, b)` returns the position of the `(j+1)`-th `b`.
pub trait DynBitvector: Default {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn count_ones(&self) -> usize;

    fn count_zeros(&self) -> usize {
        self.len() - self.count_ones()
    }

    fn access(&self, i: usize) -> bool;

    fn rank1(&self, i: usize) -> usize;

    fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    fn rank(&self, i: usize, bit: bool) -> usize {
        if bit {
            self.rank1(i)
        } else {
            self.rank0(i)
        }
    }

    /// The bit at `i` and the number of equal bits before it.
    fn access_rank(&self, i: usize) -> (bool, usize) {
        let bit = self.access(i);
        (bit, self.rank(i, bit))
    }

    fn select1(&self, j: usize) -> Option<usize>;

    fn select0(&self, j: usize) -> Option<usize>;

    fn select(&self, j: usize, bit: bool) -> Option<usize> {
        if bit {
            self.select1(j)
        } else {
            self.select0(j)
        }
    }

    fn insert(&mut self, i: usize, bit: bool);

    fn push(&mut self, bit: bool) {
        self.insert(self.len(), bit);
    }

    /// Bits allocated by the structure, including its own header.
    fn audit_bits(&self) -> u64;

    fn to_bits(&self) -> Vec<bool> {
        (0..self.len()).map(|i| self.access(i)).collect()
    }

    fn from_bits(bits: &[bool]) -> Self {
        let mut bv = Self::default();
        for &b in bits {
            bv.push(b);
        }
        bv
    }
}

/// Renders a bitvector as a string of `0`/`1` characters.
pub fn bit_string<B: DynBitvector>(bv: &B) -> String {
    bv.to_bits().iter().map(|&b| if b { '1' } else { '0' }).collect()
}
