//! Closed-form space bounds, in bits, that the audits are checked against.
//!
//! Hidden constants are fixed: `C = 8` for the `log n / log m` terms,
//! `D = 64` for the per-symbol topology term, and a factor of 1.5 absorbs
//! `(1 + o(1))`.

/// Constant on the `log M / log m` term.
pub const C: f64 = 8.0;
/// Bits charged per alphabet symbol and `log2 n`.
pub const D: f64 = 64.0;
/// Allowance for `(1 + o(1))` factors.
pub const SLACK: f64 = 1.5;

fn lg(x: f64) -> f64 {
    x.log2()
}

/// Partial sums over `m` values summing to `sum`, with `M = m + sum`.
pub fn spsi(m: u64, sum: u64) -> f64 {
    let m = m as f64;
    let big = m + sum as f64;
    2.0 * m * (lg(big / m) + lg(lg(m)) + C * lg(big) / lg(m))
}

/// `f(n, b) = b (log(n/b) + log log b + log n / log b)`; a gap-encoded
/// bitvector of length `n` with `b` ones should stay under `2 f(n, b)`.
pub fn gap(n: u64, b: u64) -> f64 {
    let (n, b) = (n as f64, b as f64);
    b * (lg(n / b) + lg(lg(b)) + lg(n) / lg(b))
}

/// Run-length string of length `n` with `runs` runs over `sigma` symbols.
pub fn rle_string(n: u64, runs: u64, sigma: u64) -> f64 {
    let (n, r, s) = (n as f64, runs as f64, sigma as f64);
    r * (4.0 * lg(n / r) + lg(s) + 4.0 * lg(lg(r)) + C * lg(n) / lg(r)) * SLACK + D * s * lg(n)
}

/// Huffman-shaped wavelet tree of length `n` with zero-order entropy `h0`.
pub fn huffman_wavelet(n: u64, h0: f64, sigma: u64) -> f64 {
    let n = n as f64;
    SLACK * n * (h0 + 1.0) + D * sigma as f64 * lg(n)
}

/// Run-length FM-index of a text of length `n` whose BWT has `runs` runs,
/// sampled every `k` positions with 64-bit samples.
pub fn rle_fm_index(n: u64, runs: u64, sigma: u64, k: u64) -> f64 {
    rle_string(n, runs, sigma) + ((n / k + 1) * 64) as f64
}

/// Zero-order entropy of a frequency table, in bits per symbol.
pub fn entropy(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * lg(p)
        })
        .sum()
}

/// Number of maximal equal-symbol runs.
pub fn runs<T: PartialEq>(s: &[T]) -> usize {
    if s.is_empty() {
        0
    } else {
        1 + s.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_evaluated() {
        // m = 16, sum = 240: M = 256, 2*16*(4 + 2 + 8*8/4).
        assert!((spsi(16, 240) - 704.0).abs() < 1e-9);
        // n = 2^16, b = 2^4: 16*(12 + 2 + 16/4).
        assert!((gap(1 << 16, 16) - 288.0).abs() < 1e-9);
        assert!((entropy(&[2, 1, 1]) - 1.5).abs() < 1e-12);
        assert_eq!(entropy(&[]), 0.0);
        assert_eq!(runs(b"bc#bbbbccccbaaaaaaaaaaa"), 7);
        assert_eq!(runs::<u8>(&[]), 0);
    }
}
