use std::mem;

use super::DynBitvector;
use crate::error::{Error, Result};
use crate::spsi::{SpsiConfig, SpsiTree};

/// Gap-encoded dynamic bitvector.
///
/// The bit sequence `0^(s1-1) 1 0^(s2-1) 1 ... 0^(sm-1) 1 0^t` is stored as
/// the partial-sum sequence `s1..sm` (every `si >= 1`) plus the count `t` of
/// trailing zeros. Space grows with the number of ones.
#[derive(Debug)]
pub struct GapBitvector {
    gaps: SpsiTree,
    tail: u64,
}

impl Default for GapBitvector {
    fn default() -> Self {
        Self {
            gaps: SpsiTree::new(SpsiConfig::PACKED),
            tail: 0,
        }
    }
}

impl GapBitvector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Run lengths ending in a one.
    pub fn gaps(&self) -> &SpsiTree {
        &self.gaps
    }

    /// Zeros after the last one.
    pub fn tail_zeros(&self) -> u64 {
        self.tail
    }

    /// Removes the zero at position `i`.
    pub fn delete_zero(&mut self, i: usize) -> Result<()> {
        assert!(i < self.len(), "position {i} out of range for length {}", self.len());
        let i = i as u64;
        if i >= self.gaps.total() {
            self.tail -= 1;
            return Ok(());
        }
        let hit = self.gaps.search_hit(i).expect("position inside the gaps");
        if hit.before + hit.value - 1 == i {
            return Err(Error::DeleteOne(i as usize));
        }
        self.gaps.update(hit.index, -1).expect("gap keeps its one");
        Ok(())
    }

    /// Turns the zero at position `i` into a one, keeping the length.
    pub fn set(&mut self, i: usize) -> Result<()> {
        assert!(i < self.len(), "position {i} out of range for length {}", self.len());
        let i = i as u64;
        let covered = self.gaps.total();
        if i >= covered {
            let t = i - covered;
            self.gaps.push(t + 1);
            self.tail -= t + 1;
            return Ok(());
        }
        let hit = self.gaps.search_hit(i).expect("position inside the gaps");
        if hit.before + hit.value - 1 == i {
            return Err(Error::AlreadySet(i as usize));
        }
        let head = i - hit.before + 1;
        self.gaps.insert(hit.index, head);
        self.gaps
            .update(hit.index + 1, -(head as i64))
            .expect("split gap stays positive");
        Ok(())
    }
}

impl DynBitvector for GapBitvector {
    #[inline]
    fn len(&self) -> usize {
        (self.gaps.total() + self.tail) as usize
    }

    #[inline]
    fn count_ones(&self) -> usize {
        self.gaps.len()
    }

    fn access(&self, i: usize) -> bool {
        self.access_rank(i).0
    }

    fn rank1(&self, i: usize) -> usize {
        assert!(i <= self.len(), "prefix {i} out of range for length {}", self.len());
        match self.gaps.search(i as u64) {
            Some(k) => k,
            None => self.gaps.len(),
        }
    }

    fn access_rank(&self, i: usize) -> (bool, usize) {
        assert!(i < self.len(), "position {i} out of range for length {}", self.len());
        match self.gaps.search_hit(i as u64) {
            Some(hit) if hit.before + hit.value - 1 == i as u64 => (true, hit.index),
            Some(hit) => (false, i - hit.index),
            None => (false, i - self.gaps.len()),
        }
    }

    fn select1(&self, j: usize) -> Option<usize> {
        if j >= self.gaps.len() {
            return None;
        }
        let (v, before) = self.gaps.at_with_prefix(j);
        Some((before + v - 1) as usize)
    }

    fn select0(&self, j: usize) -> Option<usize> {
        let j = j as u64;
        let covered = self.gaps.total();
        let inner = covered - self.gaps.len() as u64;
        if j < inner {
            let hit = self
                .gaps
                .search_decremented(j)
                .expect("zero inside the gaps");
            let zeros_before = hit.before - hit.index as u64;
            Some((hit.before + j - zeros_before) as usize)
        } else if j - inner < self.tail {
            Some((covered + j - inner) as usize)
        } else {
            None
        }
    }

    fn insert(&mut self, i: usize, bit: bool) {
        assert!(i <= self.len(), "insert position {i} out of range for length {}", self.len());
        let i = i as u64;
        let covered = self.gaps.total();
        if i >= covered {
            if bit {
                let t = i - covered;
                self.gaps.push(t + 1);
                self.tail -= t;
            } else {
                self.tail += 1;
            }
            return;
        }
        let hit = self.gaps.search_hit(i).expect("position inside the gaps");
        if bit {
            let head = i - hit.before;
            self.gaps.insert(hit.index, head + 1);
            if head > 0 {
                self.gaps
                    .update(hit.index + 1, -(head as i64))
                    .expect("split gap stays positive");
            }
        } else {
            self.gaps.update(hit.index, 1).expect("gap length fits 64 bits");
        }
    }

    fn audit_bits(&self) -> u64 {
        ((mem::size_of::<Self>() - mem::size_of::<SpsiTree>()) * 8) as u64 + self.gaps.audit_bits()
    }

    fn to_bits(&self) -> Vec<bool> {
        let mut out = Vec::with_capacity(self.len());
        for g in self.gaps.iter() {
            out.extend(std::iter::repeat_n(false, g as usize - 1));
            out.push(true);
        }
        out.extend(std::iter::repeat_n(false, self.tail as usize));
        out
    }
}
