//! Searchable partial sums with inserts.
//!
//! [`SpsiTree`] is a B-tree whose leaves are [`PackedBlock`]s. Every internal
//! node keeps, for each child, the number of elements and the sum of the
//! elements below it, so `sum`, `search`, `update` and `insert` are a single
//! root-to-leaf descent.
//!
//! Indexing is 0-based: `sum(i)` adds up the first `i` elements and
//! `search(x)` returns the smallest index `i` whose inclusive prefix sum
//! exceeds `x`.

use std::mem;

use crate::error::{Error, Result};
use crate::packed::{apply_delta, PackedBlock};

/// Shape parameters of an [`SpsiTree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpsiConfig {
    pub fanout: u32,
    pub max_leaf_size: u32,
}

impl SpsiConfig {
    /// Small leaves, for sequences of arbitrary integers.
    pub const PACKED: SpsiConfig = SpsiConfig {
        fanout: 16,
        max_leaf_size: 256,
    };

    /// Large leaves, for 0/1 sequences handled with popcount.
    pub const SUCCINCT: SpsiConfig = SpsiConfig {
        fanout: 16,
        max_leaf_size: 8192,
    };

    pub fn new(fanout: u32, max_leaf_size: u32) -> Self {
        assert!(fanout >= 2, "fanout must be at least 2");
        assert!(max_leaf_size >= 2, "leaves must hold at least 2 elements");
        Self {
            fanout,
            max_leaf_size,
        }
    }
}

impl Default for SpsiConfig {
    fn default() -> Self {
        Self::PACKED
    }
}

#[derive(Debug)]
enum Node {
    Leaf(PackedBlock),
    Inner(Vec<Child>),
}

#[derive(Debug)]
struct Child {
    size: u64,
    sum: u64,
    node: Box<Node>,
}

const NODE_BITS: i64 = (mem::size_of::<Node>() * 8) as i64;
const CHILD_BITS: i64 = (mem::size_of::<Child>() * 8) as i64;

/// Result of a search: the index found, the element stored there and the
/// sum of the elements before it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hit {
    pub index: usize,
    pub value: u64,
    pub before: u64,
}

#[derive(Clone, Copy)]
enum Measure {
    Value,
    Zeros,
    Decremented,
}

impl Measure {
    #[inline]
    fn of(self, size: u64, sum: u64) -> u64 {
        match self {
            Measure::Value => sum,
            Measure::Zeros => size - sum,
            Measure::Decremented => sum - size,
        }
    }
}

/// Dynamic sequence of non-negative integers with prefix sums, search,
/// point updates and insertion.
#[derive(Debug)]
pub struct SpsiTree {
    root: Node,
    len: u64,
    total: u64,
    heap_bits: u64,
    config: SpsiConfig,
}

impl Default for SpsiTree {
    fn default() -> Self {
        Self::new(SpsiConfig::PACKED)
    }
}

impl SpsiTree {
    pub fn new(config: SpsiConfig) -> Self {
        Self {
            root: Node::Leaf(PackedBlock::new()),
            len: 0,
            total: 0,
            heap_bits: 0,
            config,
        }
    }

    pub fn from_values(config: SpsiConfig, values: &[u64]) -> Self {
        let mut t = Self::new(config);
        for &v in values {
            t.push(v);
        }
        t
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Sum of all elements.
    #[inline]
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn config(&self) -> SpsiConfig {
        self.config
    }

    /// Number of levels; a lone leaf has height 1.
    pub fn height(&self) -> usize {
        let mut h = 1;
        let mut node = &self.root;
        while let Node::Inner(children) = node {
            node = &children[0].node;
            h += 1;
        }
        h
    }

    /// Sum of the first `i` elements.
    pub fn sum(&self, i: usize) -> u64 {
        assert!(i <= self.len(), "prefix {i} out of range for length {}", self.len);
        if i == self.len() {
            return self.total;
        }
        let mut i = i as u64;
        let mut acc = 0;
        let mut node = &self.root;
        loop {
            match node {
                Node::Inner(children) => {
                    let mut k = 0;
                    while i >= children[k].size {
                        i -= children[k].size;
                        acc += children[k].sum;
                        k += 1;
                    }
                    node = &children[k].node;
                }
                Node::Leaf(block) => return acc + block.prefix_sum(i as usize),
            }
        }
    }

    /// Element `i`.
    pub fn at(&self, i: usize) -> u64 {
        self.locate(i, |block, j| block.get(j)).0
    }

    /// Element `i` and the sum of the elements before it.
    pub fn at_with_prefix(&self, i: usize) -> (u64, u64) {
        let ((v, local), before) = self.locate(i, |block, j| block.get_with_prefix(j));
        (v, before + local)
    }

    fn locate<T>(&self, i: usize, f: impl FnOnce(&PackedBlock, usize) -> T) -> (T, u64) {
        assert!(i < self.len(), "index {i} out of range for length {}", self.len);
        let mut i = i as u64;
        let mut before = 0;
        let mut node = &self.root;
        loop {
            match node {
                Node::Inner(children) => {
                    let mut k = 0;
                    while i >= children[k].size {
                        i -= children[k].size;
                        before += children[k].sum;
                        k += 1;
                    }
                    node = &children[k].node;
                }
                Node::Leaf(block) => return (f(block, i as usize), before),
            }
        }
    }

    /// Smallest index `i` with `sum(i + 1) > x`; zero elements are skipped.
    pub fn search(&self, x: u64) -> Option<usize> {
        self.search_hit(x).map(|h| h.index)
    }

    /// [`search`](Self::search) that also reports `sum(index)`.
    pub fn search_hit(&self, x: u64) -> Option<Hit> {
        self.search_by(x, Measure::Value)
    }

    /// On a 0/1 sequence: smallest `i` whose first `i + 1` elements contain
    /// more than `x` zeros. The hit reports the number of ones before `i`.
    pub fn search_zero(&self, x: u64) -> Option<Hit> {
        self.search_by(x, Measure::Zeros)
    }

    /// On a sequence of positive integers: [`search`](Self::search) over the
    /// elements minus one. The hit reports the plain sum before the index.
    pub fn search_decremented(&self, x: u64) -> Option<Hit> {
        self.search_by(x, Measure::Decremented)
    }

    fn search_by(&self, x: u64, measure: Measure) -> Option<Hit> {
        if x >= measure.of(self.len, self.total) {
            return None;
        }
        let mut x = x;
        let mut index = 0u64;
        let mut before = 0u64;
        let mut node = &self.root;
        loop {
            match node {
                Node::Inner(children) => {
                    let mut k = 0;
                    loop {
                        let c = &children[k];
                        let m = measure.of(c.size, c.sum);
                        if x < m {
                            break;
                        }
                        x -= m;
                        index += c.size;
                        before += c.sum;
                        k += 1;
                    }
                    node = &children[k].node;
                }
                Node::Leaf(block) => {
                    let found = match measure {
                        Measure::Value => block.search(x),
                        Measure::Zeros => block.search_zero(x),
                        Measure::Decremented => block.search_decremented(x),
                    };
                    let (i, b) = found.expect("node counters out of sync with leaves");
                    return Some(Hit {
                        index: (index as usize) + i,
                        value: block.get(i),
                        before: before + b,
                    });
                }
            }
        }
    }

    /// Adds `delta` to element `i`. Fails, leaving the tree unchanged, if the
    /// element would become negative or overflow.
    pub fn update(&mut self, i: usize, delta: i64) -> Result<()> {
        assert!(i < self.len(), "index {i} out of range for length {}", self.len);
        if delta == 0 {
            return Ok(());
        }
        let total = apply_delta(self.total, delta).map_err(|_| Error::Overflow {
            value: self.total,
            delta,
        })?;
        let bits = update_rec(&mut self.root, i as u64, delta)?;
        self.total = total;
        self.heap_bits = (self.heap_bits as i64 + bits) as u64;
        Ok(())
    }

    /// Inserts `v` before element `i` (`i == len` appends).
    pub fn insert(&mut self, i: usize, v: u64) {
        assert!(i <= self.len(), "insert position {i} out of range for length {}", self.len);
        self.total = self.total.checked_add(v).expect("total overflows 64 bits");
        self.len += 1;
        let mut bits = 0i64;
        if let Some(right) = insert_rec(&mut self.root, i as u64, v, &self.config, &mut bits) {
            let old = mem::replace(
                &mut self.root,
                Node::Inner(Vec::with_capacity(self.config.fanout as usize + 1)),
            );
            let left = Child {
                size: self.len - right.size,
                sum: self.total - right.sum,
                node: Box::new(old),
            };
            if let Node::Inner(children) = &mut self.root {
                children.push(left);
                children.push(right);
            }
            bits += NODE_BITS + CHILD_BITS * (self.config.fanout as i64 + 1);
        }
        self.heap_bits = (self.heap_bits as i64 + bits) as u64;
    }

    pub fn push(&mut self, v: u64) {
        self.insert(self.len(), v);
    }

    /// Total bits allocated by the tree: leaf payloads (growth buffers
    /// included), node headers, per-child counter arrays and the handle.
    #[inline]
    pub fn audit_bits(&self) -> u64 {
        (mem::size_of::<Self>() * 8) as u64 + self.heap_bits
    }

    /// Recomputes [`audit_bits`](Self::audit_bits) by walking the tree.
    pub fn recount_bits(&self) -> u64 {
        fn walk(node: &Node) -> u64 {
            match node {
                Node::Leaf(b) => b.alloc_bits(),
                Node::Inner(children) => {
                    children.capacity() as u64 * CHILD_BITS as u64
                        + children
                            .iter()
                            .map(|c| NODE_BITS as u64 + walk(&c.node))
                            .sum::<u64>()
                }
            }
        }
        (mem::size_of::<Self>() * 8) as u64 + walk(&self.root)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let mut leaves = Vec::new();
        collect_leaves(&self.root, &mut leaves);
        leaves.into_iter().flat_map(|b| b.iter())
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    /// Checks counters, load bounds, depth and the bit audit.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let cfg = self.config;
        let mut leaf_depth = None;
        let (size, sum) = check_node(&self.root, true, 0, &cfg, &mut leaf_depth)?;
        if size != self.len || sum != self.total {
            return Err(format!(
                "tree reports ({}, {}) but holds ({size}, {sum})",
                self.len, self.total
            ));
        }
        if self.recount_bits() != self.audit_bits() {
            return Err(format!(
                "running audit {} but recount {}",
                self.audit_bits(),
                self.recount_bits()
            ));
        }
        Ok(())
    }
}

fn collect_leaves<'a>(node: &'a Node, out: &mut Vec<&'a PackedBlock>) {
    match node {
        Node::Leaf(b) => out.push(b),
        Node::Inner(children) => children.iter().for_each(|c| collect_leaves(&c.node, out)),
    }
}

fn check_node(
    node: &Node,
    is_root: bool,
    depth: usize,
    cfg: &SpsiConfig,
    leaf_depth: &mut Option<usize>,
) -> std::result::Result<(u64, u64), String> {
    match node {
        Node::Leaf(block) => {
            block.validate()?;
            let n = block.len();
            if n > cfg.max_leaf_size as usize || (!is_root && n < cfg.max_leaf_size as usize / 2) {
                return Err(format!("leaf holds {n} elements"));
            }
            match leaf_depth {
                Some(d) if *d != depth => return Err(format!("leaves at depths {d} and {depth}")),
                _ => *leaf_depth = Some(depth),
            }
            Ok((n as u64, block.total()))
        }
        Node::Inner(children) => {
            let f = cfg.fanout as usize;
            let min = if is_root { 2 } else { f.div_ceil(2) };
            if children.len() < min || children.len() > f {
                return Err(format!("inner node with {} children", children.len()));
            }
            let mut size = 0;
            let mut sum = 0;
            for c in children {
                let (s, t) = check_node(&c.node, false, depth + 1, cfg, leaf_depth)?;
                if (s, t) != (c.size, c.sum) {
                    return Err(format!(
                        "child counters ({}, {}) but subtree holds ({s}, {t})",
                        c.size, c.sum
                    ));
                }
                size += s;
                sum += t;
            }
            Ok((size, sum))
        }
    }
}

fn totals(children: &[Child]) -> (u64, u64) {
    children
        .iter()
        .fold((0, 0), |(n, s), c| (n + c.size, s + c.sum))
}

fn update_rec(node: &mut Node, i: u64, delta: i64) -> Result<i64> {
    match node {
        Node::Leaf(block) => {
            let before = block.alloc_bits() as i64;
            block.update(i as usize, delta)?;
            Ok(block.alloc_bits() as i64 - before)
        }
        Node::Inner(children) => {
            let mut i = i;
            let mut k = 0;
            while i >= children[k].size {
                i -= children[k].size;
                k += 1;
            }
            let bits = update_rec(&mut children[k].node, i, delta)?;
            let c = &mut children[k];
            c.sum = apply_delta(c.sum, delta).expect("subtree sum consistent with element");
            Ok(bits)
        }
    }
}

fn insert_rec(node: &mut Node, i: u64, v: u64, cfg: &SpsiConfig, bits: &mut i64) -> Option<Child> {
    let max_leaf = cfg.max_leaf_size as usize;
    match node {
        Node::Leaf(block) => {
            let before = block.alloc_bits() as i64;
            if block.len() < max_leaf {
                block.insert(i as usize, v, max_leaf).expect("leaf has room");
                *bits += block.alloc_bits() as i64 - before;
                return None;
            }
            let (mut left, mut right) = mem::take(block).split();
            let i = i as usize;
            if i <= left.len() {
                left.insert(i, v, max_leaf).expect("half leaf has room");
            } else {
                right.insert(i - left.len(), v, max_leaf).expect("half leaf has room");
            }
            *bits += left.alloc_bits() as i64 + right.alloc_bits() as i64 - before + NODE_BITS;
            *block = left;
            Some(Child {
                size: right.len() as u64,
                sum: right.total(),
                node: Box::new(Node::Leaf(right)),
            })
        }
        Node::Inner(children) => {
            let mut i = i;
            let mut k = 0;
            while k + 1 < children.len() && i > children[k].size {
                i -= children[k].size;
                k += 1;
            }
            let c = &mut children[k];
            c.size += 1;
            c.sum += v;
            let right = insert_rec(&mut c.node, i, v, cfg, bits)?;
            c.size -= right.size;
            c.sum -= right.sum;
            children.insert(k + 1, right);
            let fanout = cfg.fanout as usize;
            if children.len() <= fanout {
                return None;
            }
            let mid = children.len().div_ceil(2);
            let mut split = Vec::with_capacity(fanout + 1);
            split.extend(children.drain(mid..));
            *bits += NODE_BITS + CHILD_BITS * (fanout as i64 + 1);
            let (size, sum) = totals(&split);
            Some(Child {
                size,
                sum,
                node: Box::new(Node::Inner(split)),
            })
        }
    }
}
