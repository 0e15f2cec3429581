//! Prefix codes that shape a wavelet tree.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::mem;

use super::Symbol;
use crate::error::{Error, Result};
use crate::packed::bitsize;

/// A codeword of at most 64 bits, most significant bit first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Codeword {
    pub bits: u64,
    pub len: u8,
}

impl Codeword {
    /// Bit `k` counted from the root of the code trie.
    #[inline]
    pub fn bit(&self, k: usize) -> bool {
        (self.bits >> (self.len as usize - 1 - k)) & 1 == 1
    }
}

impl std::fmt::Display for Codeword {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for k in 0..self.len as usize {
            f.write_str(if self.bit(k) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeMode {
    /// `ceil(log2 |alphabet|)` bits for every symbol.
    Fixed,
    /// Optimal for a frequency table known up front.
    Huffman,
    /// Elias-gamma of `symbol + 1`; the alphabet is open.
    Gamma,
}

/// Symbol-to-codeword table. Entry `k` holds the codeword of `base + k`.
#[derive(Debug, Clone)]
pub struct PrefixCode {
    mode: CodeMode,
    base: Symbol,
    table: Vec<Option<Codeword>>,
}

impl PrefixCode {
    /// Fixed-length code over `alphabet`, assigning codewords in symbol order.
    pub fn fixed(alphabet: &[Symbol]) -> Result<Self> {
        let mut symbols = alphabet.to_vec();
        symbols.sort_unstable();
        symbols.dedup();
        if symbols.is_empty() {
            return Err(Error::EmptyInput);
        }
        let len = if symbols.len() == 1 {
            0
        } else {
            bitsize(symbols.len() as u64 - 1)
        };
        let base = symbols[0];
        let mut table = vec![None; (*symbols.last().unwrap() - base) as usize + 1];
        for (rank, &s) in symbols.iter().enumerate() {
            table[(s - base) as usize] = Some(Codeword {
                bits: rank as u64,
                len,
            });
        }
        Ok(Self {
            mode: CodeMode::Fixed,
            base,
            table,
        })
    }

    /// Huffman code for `(symbol, frequency)` pairs. Ties merge the node with
    /// the smallest symbol first, then the earliest created.
    pub fn huffman(freqs: &[(Symbol, u64)]) -> Result<Self> {
        let mut freqs = freqs.to_vec();
        freqs.sort_unstable();
        freqs.dedup_by_key(|f| f.0);
        if freqs.is_empty() {
            return Err(Error::EmptyInput);
        }
        let base = freqs[0].0;
        let mut table = vec![None; (freqs.last().unwrap().0 - base) as usize + 1];
        if freqs.len() == 1 {
            table[0] = Some(Codeword { bits: 0, len: 0 });
            return Ok(Self {
                mode: CodeMode::Huffman,
                base,
                table,
            });
        }

        // children[k] for merged node k; leaves are numbered first.
        let leaves = freqs.len();
        let mut children: Vec<[usize; 2]> = Vec::with_capacity(leaves - 1);
        let mut heap = BinaryHeap::new();
        for (id, &(s, f)) in freqs.iter().enumerate() {
            heap.push(Reverse((f, s, id)));
        }
        while heap.len() > 1 {
            let Reverse((f0, s0, a)) = heap.pop().unwrap();
            let Reverse((f1, s1, b)) = heap.pop().unwrap();
            children.push([a, b]);
            heap.push(Reverse((f0 + f1, s0.min(s1), leaves + children.len() - 1)));
        }
        let Reverse((_, _, root)) = heap.pop().unwrap();

        let mut stack = vec![(root, 0u64, 0u8)];
        while let Some((id, bits, len)) = stack.pop() {
            if id < leaves {
                table[(freqs[id].0 - base) as usize] = Some(Codeword { bits, len });
                continue;
            }
            if len == 64 {
                return Err(Error::Format("Huffman code longer than 64 bits".into()));
            }
            let [l, r] = children[id - leaves];
            stack.push((l, bits << 1, len + 1));
            stack.push((r, (bits << 1) | 1, len + 1));
        }
        Ok(Self {
            mode: CodeMode::Huffman,
            base,
            table,
        })
    }

    /// Huffman code for the byte frequencies of `text`.
    pub fn huffman_for_bytes(text: &[u8]) -> Result<Self> {
        let mut counts = [0u64; 256];
        for &b in text {
            counts[b as usize] += 1;
        }
        let freqs: Vec<(Symbol, u64)> = (0..256)
            .filter(|&c| counts[c] > 0)
            .map(|c| (c as Symbol, counts[c]))
            .collect();
        Self::huffman(&freqs)
    }

    /// Fixed code over the distinct bytes of `text`.
    pub fn fixed_for_bytes(text: &[u8]) -> Result<Self> {
        let mut seen = [false; 256];
        for &b in text {
            seen[b as usize] = true;
        }
        let alphabet: Vec<Symbol> = (0..256).filter(|&c| seen[c]).map(|c| c as Symbol).collect();
        Self::fixed(&alphabet)
    }

    pub fn gamma() -> Self {
        Self {
            mode: CodeMode::Gamma,
            base: 0,
            table: Vec::new(),
        }
    }

    pub fn mode(&self) -> CodeMode {
        self.mode
    }

    #[inline]
    pub fn encode(&self, c: Symbol) -> Option<Codeword> {
        match self.mode {
            CodeMode::Gamma => {
                let v = c as u64 + 1;
                let n = bitsize(v);
                Some(Codeword {
                    bits: v,
                    len: 2 * n - 1,
                })
            }
            _ => self.table.get(c.checked_sub(self.base)? as usize).copied().flatten(),
        }
    }

    /// Symbols with a codeword; empty for the open gamma alphabet.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.table
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_some())
            .map(|(k, _)| self.base + k as Symbol)
    }

    pub fn audit_bits(&self) -> u64 {
        ((mem::size_of::<Self>() + self.table.capacity() * mem::size_of::<Option<Codeword>>()) * 8)
            as u64
    }
}
