use std::mem;

use super::{DynString, PrefixCode, Symbol, WaveletString};
use crate::bitvector::{DynBitvector, GapBitvector};
use crate::error::{Error, Result};

/// Run-length compressed string.
///
/// `heads` holds one character per maximal run. `ends` has a one at the last
/// position of every run. For each character `c`, `runs[c]` concatenates the
/// lengths of the `c`-runs in order, each run of length `m` as `0^(m-1) 1`.
#[derive(Debug)]
pub struct RleString {
    heads: WaveletString,
    ends: GapBitvector,
    runs: Vec<Option<Box<GapBitvector>>>,
    /// Character of `runs[0]`.
    runs_base: Symbol,
    len: usize,
    /// Heap bits of the per-character bitvectors.
    runs_heap_bits: u64,
}

impl Default for RleString {
    fn default() -> Self {
        Self::new(PrefixCode::gamma())
    }
}

impl RleString {
    /// An empty string whose run heads use `code`.
    pub fn new(code: PrefixCode) -> Self {
        Self {
            heads: WaveletString::new(code),
            ends: GapBitvector::default(),
            runs: Vec::new(),
            runs_base: 0,
            len: 0,
            runs_heap_bits: 0,
        }
    }

    /// Number of maximal runs.
    pub fn runs(&self) -> usize {
        self.heads.len()
    }

    /// Run heads, one character per run.
    pub fn heads(&self) -> &WaveletString {
        &self.heads
    }

    /// Run ends over the whole string.
    pub fn ends(&self) -> &GapBitvector {
        &self.ends
    }

    /// Concatenated run lengths of character `c`.
    pub fn run_lengths(&self, c: Symbol) -> Option<&GapBitvector> {
        self.runs.get(c.checked_sub(self.runs_base)? as usize).and_then(|v| v.as_deref())
    }

    fn run_start(&self, p: usize) -> usize {
        if p == 0 {
            0
        } else {
            self.ends.select1(p - 1).expect("run exists") + 1
        }
    }

    /// Start of the `q`-th run within a per-character bitvector.
    fn local_start(v: &GapBitvector, q: usize) -> usize {
        if q == 0 {
            0
        } else {
            v.select1(q - 1).expect("run exists") + 1
        }
    }

    /// The run containing position `i` and its character.
    fn run_at(&self, i: usize) -> (usize, Symbol) {
        let p = self.ends.rank1(i);
        (p, self.heads.access(p))
    }

    /// Applies `edit` to the bitvector of `c`, creating it when absent.
    fn edit_runs(&mut self, c: Symbol, edit: impl FnOnce(&mut GapBitvector)) {
        if self.runs.is_empty() {
            self.runs_base = c;
        } else if c < self.runs_base {
            let grow = (self.runs_base - c) as usize;
            self.runs.splice(0..0, std::iter::repeat_with(|| None).take(grow));
            self.runs_base = c;
        }
        let slot = (c - self.runs_base) as usize;
        if slot >= self.runs.len() {
            self.runs.resize_with(slot + 1, || None);
        }
        let created = self.runs[slot].is_none();
        let v = self.runs[slot].get_or_insert_with(Box::default);
        let old = if created { 0 } else { v.audit_bits() };
        edit(v);
        self.runs_heap_bits = self.runs_heap_bits + v.audit_bits() - old;
    }

    /// Lengthens run `p` of character `c` by one.
    fn extend_run(&mut self, p: usize, pos: usize, c: Symbol) -> Result<()> {
        self.ends.insert(pos, false);
        let q = self.heads.rank(p, c)?;
        let start = Self::local_start(self.run_lengths(c).expect("run exists"), q);
        self.edit_runs(c, |v| v.insert(start, false));
        Ok(())
    }

    /// Recomputes the audit from the parts.
    pub fn recount_bits(&self) -> u64 {
        self.fixed_bits()
            + self
                .runs
                .iter()
                .flatten()
                .map(|v| v.audit_bits())
                .sum::<u64>()
    }

    fn fixed_bits(&self) -> u64 {
        let headers = mem::size_of::<Self>() - mem::size_of::<WaveletString>() - mem::size_of::<GapBitvector>()
            + self.runs.capacity() * mem::size_of::<Option<Box<GapBitvector>>>();
        (headers * 8) as u64 + self.heads.audit_bits() + self.ends.audit_bits()
    }

    /// Checks the cross-structure counts: `ends` and all `runs[c]` hold one
    /// bit per position and one set bit per run, and adjacent heads differ.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let r = self.runs();
        if self.ends.len() != self.len || self.ends.count_ones() != r {
            return Err(format!(
                "ends has {} bits and {} ones for {} positions in {r} runs",
                self.ends.len(),
                self.ends.count_ones(),
                self.len
            ));
        }
        let bits: usize = self.runs.iter().flatten().map(|v| v.len()).sum();
        let ones: usize = self.runs.iter().flatten().map(|v| v.count_ones()).sum();
        if bits != self.len || ones != r {
            return Err(format!("per-character runs hold {bits} bits and {ones} ones"));
        }
        let heads = self.heads.to_vec();
        if let Some(w) = heads.windows(2).position(|w| w[0] == w[1]) {
            return Err(format!("runs {w} and {} share a character", w + 1));
        }
        self.heads.validate()
    }
}

impl DynString for RleString {
    fn len(&self) -> usize {
        self.len
    }

    fn access(&self, i: usize) -> Symbol {
        assert!(i < self.len, "position {i} out of range for length {}", self.len);
        self.run_at(i).1
    }

    fn rank(&self, i: usize, c: Symbol) -> Result<usize> {
        assert!(i <= self.len, "prefix {i} out of range for length {}", self.len);
        let Some(v) = self.run_lengths(c) else {
            return Ok(0);
        };
        if i == 0 {
            return Ok(0);
        }
        let p = self.ends.rank1(i - 1);
        let through = self.heads.rank(p + 1, c)?;
        let before = self.heads.rank(p, c)?;
        if through == before {
            // Run p is not a c-run: count whole runs only.
            return Ok(Self::local_start(v, before));
        }
        Ok(Self::local_start(v, before) + i - self.run_start(p))
    }

    fn select(&self, j: usize, c: Symbol) -> Result<usize> {
        let v = self.run_lengths(c).ok_or(Error::NotFound)?;
        if j >= v.len() {
            return Err(Error::NotFound);
        }
        let q = v.rank1(j);
        let offset = j - Self::local_start(v, q);
        let p = self.heads.select(q, c)?;
        Ok(self.run_start(p) + offset)
    }

    fn insert(&mut self, i: usize, c: Symbol) -> Result<()> {
        assert!(i <= self.len, "insert position {i} out of range for length {}", self.len);
        if !self.heads.admits(c) {
            return Err(Error::UnknownSymbol(c));
        }
        let left = (i > 0).then(|| self.run_at(i - 1));
        let right = (i < self.len).then(|| self.run_at(i));
        match (left, right) {
            (Some((p, d)), _) if d == c => self.extend_run(p, i - 1, c)?,
            (_, Some((p, d))) if d == c => self.extend_run(p, i, c)?,
            (Some((p, d)), Some((q, _))) if p == q => {
                // Inside a run of another character: split it in three.
                let offset = i - self.run_start(p);
                let qd = self.heads.rank(p, d)?;
                self.heads.insert(p + 1, c)?;
                self.heads.insert(p + 2, d)?;
                self.ends.insert(i, true);
                self.ends.set(i - 1).expect("split point is inside the run");
                let ds = Self::local_start(self.run_lengths(d).expect("run exists"), qd);
                self.edit_runs(d, |v| v.set(ds + offset - 1).expect("split point is inside the run"));
                let qc = self.heads.rank(p + 1, c)?;
                let start = self.run_lengths(c).map_or(0, |v| Self::local_start(v, qc));
                self.edit_runs(c, |v| v.insert(start, true));
            }
            _ => {
                let p = right.map_or(self.runs(), |(q, _)| q);
                self.heads.insert(p, c)?;
                self.ends.insert(i, true);
                let qc = self.heads.rank(p, c)?;
                let start = self.run_lengths(c).map_or(0, |v| Self::local_start(v, qc));
                self.edit_runs(c, |v| v.insert(start, true));
            }
        }
        self.len += 1;
        Ok(())
    }

    fn admits(&self, c: Symbol) -> bool {
        self.heads.admits(c)
    }

    fn audit_bits(&self) -> u64 {
        self.fixed_bits() + self.runs_heap_bits
    }
}
