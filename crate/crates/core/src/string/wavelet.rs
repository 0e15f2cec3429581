use std::mem;

use super::{DynString, PrefixCode, Symbol};
use crate::bitvector::{DynBitvector, SuccinctBitvector};
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;
/// Child references with this bit set point into `leaves`.
const LEAF: u32 = 1 << 31;

#[derive(Debug)]
struct Inner {
    bits: SuccinctBitvector,
    child: [u32; 2],
}

impl Inner {
    fn new() -> Self {
        Self {
            bits: SuccinctBitvector::default(),
            child: [NONE; 2],
        }
    }
}

/// Wavelet tree whose shape follows a [`PrefixCode`].
///
/// Inner nodes live in an arena and leaves in a separate symbol table. A
/// child reference is an arena index, a `LEAF`-tagged table index, or
/// `NONE`. Each inner node routes a position to its left child on a 0 bit
/// and to its right child on a 1 bit.
#[derive(Debug)]
pub struct WaveletString {
    nodes: Vec<Inner>,
    leaves: Vec<Symbol>,
    root: u32,
    code: PrefixCode,
    len: usize,
    /// Heap bits of all node bitvectors.
    bv_heap_bits: u64,
}

impl Default for WaveletString {
    fn default() -> Self {
        Self::new(PrefixCode::gamma())
    }
}

impl WaveletString {
    pub fn new(code: PrefixCode) -> Self {
        let mut w = Self {
            nodes: Vec::new(),
            leaves: Vec::new(),
            root: 0,
            code,
            len: 0,
            bv_heap_bits: 0,
        };
        match w.code.symbols().next() {
            Some(s) if w.code.encode(s).unwrap().len == 0 => {
                w.leaves.push(s);
                w.root = LEAF;
            }
            _ => w.nodes.push(Inner::new()),
        }
        let symbols: Vec<Symbol> = w.code.symbols().collect();
        for s in symbols {
            w.materialize(s);
        }
        w.nodes.shrink_to_fit();
        w.leaves.shrink_to_fit();
        w.bv_heap_bits = w.recount_bv_heap_bits();
        w
    }

    /// Builds a string over the bytes of `text` with a Huffman code for its
    /// byte frequencies.
    pub fn huffman_from_bytes(text: &[u8]) -> Result<Self> {
        let mut w = Self::new(PrefixCode::huffman_for_bytes(text)?);
        for &b in text {
            w.push(b as Symbol)?;
        }
        Ok(w)
    }

    pub fn code(&self) -> &PrefixCode {
        &self.code
    }

    /// Number of nodes in the code trie, leaves included.
    pub fn node_count(&self) -> usize {
        self.nodes.len() + self.leaves.len()
    }

    /// Creates any missing nodes along the codeword path of `c`.
    fn materialize(&mut self, c: Symbol) {
        let code = self.code.encode(c).expect("symbol has a code");
        let mut node = self.root as usize;
        for k in 0..code.len as usize {
            let b = code.bit(k) as usize;
            let next = self.nodes[node].child[b];
            if next != NONE {
                node = next as usize;
                continue;
            }
            let id = if k + 1 == code.len as usize {
                self.leaves.push(c);
                LEAF | (self.leaves.len() - 1) as u32
            } else {
                self.nodes.push(Inner::new());
                (self.nodes.len() - 1) as u32
            };
            self.nodes[node].child[b] = id;
            node = id as usize;
        }
    }

    fn recount_bv_heap_bits(&self) -> u64 {
        let header = (mem::size_of::<SuccinctBitvector>() * 8) as u64;
        self.nodes.iter().map(|n| n.bits.audit_bits() - header).sum()
    }

    /// Recomputes the audit by walking every node.
    pub fn recount_bits(&self) -> u64 {
        self.header_bits() + self.recount_bv_heap_bits()
    }

    fn header_bits(&self) -> u64 {
        ((mem::size_of::<Self>() - mem::size_of::<PrefixCode>()
            + self.nodes.capacity() * mem::size_of::<Inner>()
            + self.leaves.capacity() * mem::size_of::<Symbol>())
            * 8) as u64
            + self.code.audit_bits()
    }

    /// Checks that every child bitvector is as long as its parent's count of
    /// the matching bit.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let mut stack = vec![(self.root, self.len)];
        while let Some((node, len)) = stack.pop() {
            if node & LEAF != 0 {
                continue;
            }
            let Inner { bits, child } = &self.nodes[node as usize];
            if bits.len() != len {
                return Err(format!("node {node} holds {} bits, expected {len}", bits.len()));
            }
            for (b, &next) in child.iter().enumerate() {
                let count = bits.rank(len, b == 1);
                if next == NONE {
                    if count > 0 {
                        return Err(format!("node {node} routes {count} positions to a missing child"));
                    }
                } else {
                    stack.push((next, count));
                }
            }
        }
        Ok(())
    }
}

impl DynString for WaveletString {
    fn len(&self) -> usize {
        self.len
    }

    fn access(&self, mut i: usize) -> Symbol {
        assert!(i < self.len, "position {i} out of range for length {}", self.len);
        let mut node = self.root;
        while node & LEAF == 0 {
            let Inner { bits, child } = &self.nodes[node as usize];
            let (b, r) = bits.access_rank(i);
            i = r;
            node = child[b as usize];
        }
        self.leaves[(node & !LEAF) as usize]
    }

    fn rank(&self, mut i: usize, c: Symbol) -> Result<usize> {
        assert!(i <= self.len, "prefix {i} out of range for length {}", self.len);
        let code = self.code.encode(c).ok_or(Error::UnknownSymbol(c))?;
        let mut node = self.root;
        for k in 0..code.len as usize {
            let Inner { bits, child } = &self.nodes[node as usize];
            let b = code.bit(k);
            i = bits.rank(i, b);
            if child[b as usize] == NONE || i == 0 {
                return Ok(0);
            }
            node = child[b as usize];
        }
        Ok(i)
    }

    fn select(&self, mut j: usize, c: Symbol) -> Result<usize> {
        let code = self.code.encode(c).ok_or(Error::UnknownSymbol(c))?;
        let mut path = Vec::with_capacity(code.len as usize);
        let mut node = self.root;
        let mut count = self.len;
        for k in 0..code.len as usize {
            let Inner { bits, child } = &self.nodes[node as usize];
            let b = code.bit(k);
            count = bits.rank(count, b);
            if child[b as usize] == NONE {
                return Err(Error::NotFound);
            }
            path.push((node, b));
            node = child[b as usize];
        }
        if j >= count {
            return Err(Error::NotFound);
        }
        for &(node, b) in path.iter().rev() {
            j = self.nodes[node as usize].bits.select(j, b).expect("child length matches parent rank");
        }
        Ok(j)
    }

    fn insert(&mut self, mut i: usize, c: Symbol) -> Result<()> {
        assert!(i <= self.len, "insert position {i} out of range for length {}", self.len);
        let code = self.code.encode(c).ok_or(Error::UnknownSymbol(c))?;
        if self.code.mode() == super::CodeMode::Gamma {
            let before = self.node_count();
            self.materialize(c);
            if self.node_count() != before {
                self.bv_heap_bits = self.recount_bv_heap_bits();
            }
        }
        let mut node = self.root;
        for k in 0..code.len as usize {
            let Inner { bits, child } = &mut self.nodes[node as usize];
            let b = code.bit(k);
            let old = bits.audit_bits();
            bits.insert(i, b);
            self.bv_heap_bits = self.bv_heap_bits + bits.audit_bits() - old;
            i = bits.rank(i, b);
            node = child[b as usize];
        }
        self.len += 1;
        Ok(())
    }

    fn admits(&self, c: Symbol) -> bool {
        self.code.encode(c).is_some()
    }

    fn audit_bits(&self) -> u64 {
        self.header_bits() + self.bv_heap_bits
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bytes(s: &str) -> Vec<Symbol> {
        s.bytes().map(Symbol::from).collect()
    }

    fn build(code: PrefixCode, s: &str) -> WaveletString {
        let mut w = WaveletString::new(code);
        for c in bytes(s) {
            w.push(c).unwrap();
        }
        w
    }

    const EXAMPLE: &str = "bc#bbbbccccbaaaaaaaaaaa";

    #[test]
    fn example_string_queries() {
        let w = build(PrefixCode::fixed(&bytes("abc#")).unwrap(), EXAMPLE);
        assert_eq!(w.access(11), b'b' as Symbol);
        assert_eq!(w.rank(7, b'b' as Symbol).unwrap(), 5);
        assert_eq!(w.select(1, b'c' as Symbol).unwrap(), 7);
        assert_eq!(w.rank(0, b'a' as Symbol).unwrap(), 0);
        w.validate().unwrap();
    }

    #[test]
    fn single_symbol_alphabet() {
        let w = build(PrefixCode::fixed(&[b'x' as Symbol]).unwrap(), "xxxx");
        assert_eq!(w.node_count(), 1);
        assert_eq!(w.access(2), b'x' as Symbol);
        assert_eq!(w.rank(3, b'x' as Symbol).unwrap(), 3);
        assert_eq!(w.select(0, b'x' as Symbol).unwrap(), 0);
        assert_eq!(w.select(4, b'x' as Symbol), Err(Error::NotFound));
    }

    #[test]
    fn unknown_symbols_rejected() {
        let mut w = build(PrefixCode::fixed(&bytes("ab")).unwrap(), "abba");
        assert_eq!(w.insert(0, b'z' as Symbol), Err(Error::UnknownSymbol(b'z' as Symbol)));
        assert_eq!(w.rank(2, b'z' as Symbol), Err(Error::UnknownSymbol(b'z' as Symbol)));
        assert!(!w.admits(b'z' as Symbol));
        assert_eq!(w.len(), 4);
    }

    #[test]
    fn gamma_grows_lazily() {
        let mut w = WaveletString::default();
        assert_eq!(w.node_count(), 1);
        w.push(0).unwrap();
        assert_eq!(w.node_count(), 2);
        w.push(1000).unwrap();
        w.insert(1, 5).unwrap();
        assert_eq!(w.to_vec(), vec![0, 5, 1000]);
        assert_eq!(w.rank(3, 7).unwrap(), 0);
        assert_eq!(w.select(0, 7), Err(Error::NotFound));
        w.validate().unwrap();
    }

    #[test]
    fn running_audit_matches_recount() {
        let mut w = WaveletString::default();
        for i in 0..20_000u32 {
            w.insert((i as usize * 7) % (w.len() + 1), i % 37).unwrap();
            if i % 1000 == 0 {
                assert_eq!(w.audit_bits(), w.recount_bits());
            }
        }
        assert_eq!(w.audit_bits(), w.recount_bits());
        w.validate().unwrap();
    }
}
