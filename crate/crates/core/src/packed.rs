//! Bit-packed leaf blocks.
//!
//! A [`PackedBlock`] stores a short sequence of non-negative integers, all
//! packed at the bit-size of the largest one. Elements may straddle word
//! boundaries. Every operation is linear in the block size; blocks of width 1
//! take word-parallel popcount paths instead of per-element loops.
//!
//! Payload words are re-allocated whenever the packed size outgrows them, with
//! a growth buffer of at most one eighth of the needed words. Bits past the
//! last element are always zero.

use crate::error::{Error, Result};

pub(crate) const WORD_BITS: usize = 64;

/// Number of bits needed to write `x` in binary; a zero still costs one bit.
#[inline]
pub fn bitsize(x: u64) -> u8 {
    if x == 0 {
        1
    } else {
        (64 - x.leading_zeros()) as u8
    }
}

#[inline]
fn mask(width: u8) -> u64 {
    if width == 64 {
        !0
    } else {
        (1u64 << width) - 1
    }
}

#[inline]
fn words_for(len: usize, width: u8) -> usize {
    (len * width as usize).div_ceil(WORD_BITS)
}

#[inline]
fn with_slack(need: usize) -> usize {
    need + need / 8
}

#[inline]
fn read(words: &[u64], width: u8, i: usize) -> u64 {
    let w = width as usize;
    let bit = i * w;
    let idx = bit / WORD_BITS;
    let off = bit % WORD_BITS;
    let mut v = words[idx] >> off;
    if off + w > WORD_BITS {
        v |= words[idx + 1] << (WORD_BITS - off);
    }
    v & mask(width)
}

#[inline]
fn write(words: &mut [u64], width: u8, i: usize, v: u64) {
    let w = width as usize;
    let m = mask(width);
    let bit = i * w;
    let idx = bit / WORD_BITS;
    let off = bit % WORD_BITS;
    words[idx] = (words[idx] & !(m << off)) | (v << off);
    if off + w > WORD_BITS {
        let hi = WORD_BITS - off;
        words[idx + 1] = (words[idx + 1] & !(m >> hi)) | (v >> hi);
    }
}

/// Moves bits `[from, end)` to `[from + k, end + k)`. The vacated range
/// `[from, from + k)` is left holding stale bits.
fn shift_up(words: &mut [u64], from: usize, end: usize, k: usize) {
    debug_assert!((1..=WORD_BITS).contains(&k));
    if from >= end {
        return;
    }
    let first = from / WORD_BITS;
    let last = (end + k - 1) / WORD_BITS;
    if k == WORD_BITS {
        for j in (first + 1..=last).rev() {
            words[j] = words[j - 1];
        }
        return;
    }
    for j in (first + 1..=last).rev() {
        words[j] = (words[j] << k) | (words[j - 1] >> (WORD_BITS - k));
    }
    let low = from % WORD_BITS;
    let keep = if low == 0 { 0 } else { (1u64 << low) - 1 };
    words[first] = (words[first] & keep) | ((words[first] << k) & !keep);
}

/// Position of the `r`-th (0-based) set bit of `w`.
#[inline]
pub(crate) fn select_in_word(w: u64, mut r: u32) -> u32 {
    let mut shift = 0;
    loop {
        let c = ((w >> shift) & 0xFF).count_ones();
        if r < c {
            break;
        }
        r -= c;
        shift += 8;
    }
    let mut byte = (w >> shift) & 0xFF;
    for _ in 0..r {
        byte &= byte - 1;
    }
    shift + byte.trailing_zeros()
}

/// A packed array of integers, the leaf of [`SpsiTree`](crate::SpsiTree).
#[derive(Clone, Debug)]
pub struct PackedBlock {
    words: Box<[u64]>,
    sum: u64,
    len: u32,
    width: u8,
}

impl Default for PackedBlock {
    fn default() -> Self {
        Self::new()
    }
}

impl PackedBlock {
    pub fn new() -> Self {
        Self {
            words: Box::new([]),
            sum: 0,
            len: 0,
            width: 1,
        }
    }

    /// Packs `values` at the width of their maximum, with no growth buffer.
    pub fn from_values(values: &[u64]) -> Self {
        let width = values.iter().map(|&v| bitsize(v)).max().unwrap_or(1);
        let mut words = vec![0u64; words_for(values.len(), width)].into_boxed_slice();
        for (i, &v) in values.iter().enumerate() {
            write(&mut words, width, i, v);
        }
        Self {
            words,
            sum: values.iter().fold(0u64, |acc, &v| {
                acc.checked_add(v).expect("block sum overflows 64 bits")
            }),
            len: values.len() as u32,
            width,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bits per element.
    #[inline]
    pub fn width(&self) -> u8 {
        self.width
    }

    /// Sum of all elements.
    #[inline]
    pub fn total(&self) -> u64 {
        self.sum
    }

    /// Bits of payload currently allocated, growth buffer included.
    #[inline]
    pub fn alloc_bits(&self) -> u64 {
        (self.words.len() * WORD_BITS) as u64
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        assert!(i < self.len(), "index {i} out of range for block of {}", self.len);
        read(&self.words, self.width, i)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len()).map(move |i| read(&self.words, self.width, i))
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    /// Sum of the first `i` elements.
    pub fn prefix_sum(&self, i: usize) -> u64 {
        assert!(i <= self.len(), "prefix {i} out of range for block of {}", self.len);
        if i == self.len() {
            return self.sum;
        }
        if self.width == 1 {
            let full = i / WORD_BITS;
            let mut acc: u64 = self.words[..full].iter().map(|w| w.count_ones() as u64).sum();
            let rem = i % WORD_BITS;
            if rem > 0 {
                acc += (self.words[full] & ((1u64 << rem) - 1)).count_ones() as u64;
            }
            acc
        } else {
            (0..i).map(|j| read(&self.words, self.width, j)).sum()
        }
    }

    /// Element `i` together with the sum of the elements before it.
    pub fn get_with_prefix(&self, i: usize) -> (u64, u64) {
        (self.get(i), self.prefix_sum(i))
    }

    /// Smallest `i` such that the first `i + 1` elements sum to more than
    /// `x`, with the sum of the elements before `i`. `None` when `x` is not
    /// below the block total.
    pub fn search(&self, x: u64) -> Option<(usize, u64)> {
        if x >= self.sum {
            return None;
        }
        if self.width == 1 {
            let mut rem = x;
            for (wi, &w) in self.words.iter().enumerate() {
                let c = w.count_ones() as u64;
                if rem < c {
                    let idx = wi * WORD_BITS + select_in_word(w, rem as u32) as usize;
                    return Some((idx, x));
                }
                rem -= c;
            }
            unreachable!("block sum out of sync with payload");
        }
        let mut acc = 0u64;
        for i in 0..self.len() {
            let v = read(&self.words, self.width, i);
            if acc + v > x {
                return Some((i, acc));
            }
            acc += v;
        }
        unreachable!("block sum out of sync with payload")
    }

    /// [`search`](Self::search) over the complemented 0/1 sequence: smallest
    /// `i` such that the first `i + 1` elements hold more than `x` zeros.
    /// Returns the index with the number of ones before it.
    pub fn search_zero(&self, x: u64) -> Option<(usize, u64)> {
        assert_eq!(self.width, 1, "search_zero needs a 0/1 block");
        let zeros = self.len as u64 - self.sum;
        if x >= zeros {
            return None;
        }
        let mut rem = x;
        let len = self.len();
        for (wi, &w) in self.words.iter().enumerate() {
            let valid = len - wi * WORD_BITS;
            let inv = if valid >= WORD_BITS {
                !w
            } else {
                !w & ((1u64 << valid) - 1)
            };
            let c = inv.count_ones() as u64;
            if rem < c {
                let idx = wi * WORD_BITS + select_in_word(inv, rem as u32) as usize;
                return Some((idx, idx as u64 - x));
            }
            rem -= c;
        }
        unreachable!("block sum out of sync with payload")
    }

    /// [`search`](Self::search) over the elements minus one (all elements
    /// must be positive). Returns the index with the plain sum before it.
    pub fn search_decremented(&self, x: u64) -> Option<(usize, u64)> {
        let mut acc = 0u64;
        let mut before = 0u64;
        for i in 0..self.len() {
            let v = read(&self.words, self.width, i);
            debug_assert!(v > 0, "search_decremented over a zero element");
            if acc + v - 1 > x {
                return Some((i, before));
            }
            acc += v - 1;
            before += v;
        }
        None
    }

    /// Adds `delta` to element `i`, re-packing the block when the bit-size of
    /// the maximum changes.
    pub fn update(&mut self, i: usize, delta: i64) -> Result<()> {
        let old = self.get(i);
        let new = apply_delta(old, delta)?;
        if new == old {
            return Ok(());
        }
        let sum = apply_delta(self.sum, delta).map_err(|_| Error::Overflow { value: self.sum, delta })?;
        let nw = bitsize(new);
        if nw > self.width {
            self.repack(nw, words_for(self.len(), nw));
        }
        write(&mut self.words, self.width, i, new);
        self.sum = sum;
        if nw < self.width && bitsize(old) == self.width {
            let max = self.iter().map(bitsize).max().unwrap_or(1);
            if max < self.width {
                self.repack(max, words_for(self.len(), max));
            }
        }
        Ok(())
    }

    /// Inserts `v` at position `i`. Fails without modifying the block when
    /// it already holds `capacity` elements.
    pub fn insert(&mut self, i: usize, v: u64, capacity: usize) -> Result<()> {
        let len = self.len();
        assert!(i <= len, "insert position {i} out of range for block of {len}");
        if len >= capacity {
            return Err(Error::CapacityExceeded { capacity });
        }
        let sum = self.sum.checked_add(v).ok_or(Error::Overflow {
            value: self.sum,
            delta: v as i64,
        })?;
        let width = self.width.max(bitsize(v));
        let need = words_for(len + 1, width);
        if width != self.width {
            self.repack(width, with_slack(need));
        } else if need > self.words.len() {
            let mut words = vec![0u64; with_slack(need)];
            words[..self.words.len()].copy_from_slice(&self.words);
            self.words = words.into_boxed_slice();
        }
        let w = width as usize;
        shift_up(&mut self.words, i * w, len * w, w);
        write(&mut self.words, width, i, v);
        self.len += 1;
        self.sum = sum;
        Ok(())
    }

    /// Splits into the first `ceil(len/2)` elements and the rest, each packed
    /// at its own width.
    pub fn split(self) -> (Self, Self) {
        assert!(self.len >= 2, "cannot split a block of {} elements", self.len);
        let mid = self.len().div_ceil(2);
        let values = self.to_vec();
        (Self::from_values(&values[..mid]), Self::from_values(&values[mid..]))
    }

    fn repack(&mut self, width: u8, alloc: usize) {
        let mut words = vec![0u64; alloc.max(words_for(self.len(), width))].into_boxed_slice();
        for i in 0..self.len() {
            write(&mut words, width, i, read(&self.words, self.width, i));
        }
        self.words = words;
        self.width = width;
    }

    /// Checks every structural invariant, returning a description of the
    /// first violation.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let values = self.to_vec();
        let max_width = values.iter().map(|&v| bitsize(v)).max().unwrap_or(1);
        if max_width != self.width {
            return Err(format!("width {} but maximum needs {}", self.width, max_width));
        }
        let sum: u64 = values.iter().sum();
        if sum != self.sum {
            return Err(format!("cached sum {} but elements sum to {}", self.sum, sum));
        }
        let need = words_for(self.len(), self.width);
        if self.words.len() < need || self.words.len() > with_slack(need) {
            return Err(format!("{} words allocated for {} needed", self.words.len(), need));
        }
        let used = self.len() * self.width as usize;
        for (wi, &w) in self.words.iter().enumerate() {
            let start = wi * WORD_BITS;
            let tail = if used <= start {
                w
            } else if used - start >= WORD_BITS {
                0
            } else {
                w >> (used - start)
            };
            if tail != 0 {
                return Err(format!("stray bits past element {} in word {wi}", self.len));
            }
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn apply_delta(value: u64, delta: i64) -> Result<u64> {
    if delta >= 0 {
        value
            .checked_add(delta as u64)
            .ok_or(Error::Overflow { value, delta })
    } else {
        value
            .checked_sub(delta.unsigned_abs())
            .ok_or(Error::Underflow { value, delta })
    }
}
