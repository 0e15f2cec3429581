use std::mem;

use super::DynBitvector;
use crate::spsi::{SpsiConfig, SpsiTree};

/// Plain dynamic bitvector: the bits themselves, packed one per element in
/// 8192-bit SPSI leaves. Rank is a prefix sum, select a search.
#[derive(Debug)]
pub struct SuccinctBitvector {
    bits: SpsiTree,
}

impl Default for SuccinctBitvector {
    fn default() -> Self {
        Self {
            bits: SpsiTree::new(SpsiConfig::SUCCINCT),
        }
    }
}

impl SuccinctBitvector {
    pub fn new() -> Self {
        Self::default()
    }

    /// The underlying partial-sum tree.
    pub fn tree(&self) -> &SpsiTree {
        &self.bits
    }
}

impl DynBitvector for SuccinctBitvector {
    #[inline]
    fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    fn count_ones(&self) -> usize {
        self.bits.total() as usize
    }

    fn access(&self, i: usize) -> bool {
        self.bits.at(i) == 1
    }

    fn rank1(&self, i: usize) -> usize {
        self.bits.sum(i) as usize
    }

    fn access_rank(&self, i: usize) -> (bool, usize) {
        let (v, ones) = self.bits.at_with_prefix(i);
        if v == 1 {
            (true, ones as usize)
        } else {
            (false, i - ones as usize)
        }
    }

    fn select1(&self, j: usize) -> Option<usize> {
        self.bits.search(j as u64)
    }

    fn select0(&self, j: usize) -> Option<usize> {
        self.bits.search_zero(j as u64).map(|h| h.index)
    }

    fn insert(&mut self, i: usize, bit: bool) {
        self.bits.insert(i, bit as u64);
    }

    fn audit_bits(&self) -> u64 {
        ((mem::size_of::<Self>() - mem::size_of::<SpsiTree>()) * 8) as u64 + self.bits.audit_bits()
    }
}
