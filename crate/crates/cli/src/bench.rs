//! Benchmark harness.
//!
//! Every density point builds the structure from `n` random inserts, then
//! times `ops` repetitions of each operation at uniform random positions.
//! Randomness comes from ChaCha8 seeded with `--seed`, so every column except
//! `mean_ns` is reproducible.

use std::fs::OpenOptions;
use std::hint::black_box;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use dynstr::{
    DynBitvector, DynString, GapBitvector, PrefixCode, RleString, SpsiConfig, SpsiTree, SuccinctBitvector, Symbol,
    WaveletString,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const HEADER: &str = "structure,n,density,op,mean_ns,ops_measured,audit_bits,seed";

pub const STRUCTURES: [&str; 5] = ["gap_bv", "suc_bv", "spsi", "wt_str", "rle_str"];

#[derive(clap::Args)]
pub struct Args {
    /// One of gap_bv, suc_bv, spsi, wt_str, rle_str.
    #[arg(long)]
    structure: String,
    /// Elements inserted before timing.
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    /// Comma-separated densities, or `sweep` for 34 log-spaced points in
    /// [0.0001, 0.99]. Bitvectors: fraction of ones. spsi: fraction of
    /// nonzero values. Strings: alphabet size is ceil(density * 256).
    #[arg(long, default_value = "0.1")]
    density: String,
    /// Timed repetitions of each operation.
    #[arg(long, default_value_t = 10_000)]
    ops: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// CSV file to append to; standard output when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
}

struct Row {
    op: &'static str,
    mean_ns: f64,
    measured: usize,
}

/// Times `f` over every input and reports the mean.
fn time<T>(op: &'static str, inputs: &[T], mut f: impl FnMut(&T) -> u64) -> Row {
    let mut sink = 0u64;
    let start = Instant::now();
    for x in inputs {
        sink = sink.wrapping_add(f(x));
    }
    let ns = start.elapsed().as_nanos() as f64;
    black_box(sink);
    Row {
        op,
        mean_ns: if inputs.is_empty() { 0.0 } else { ns / inputs.len() as f64 },
        measured: inputs.len(),
    }
}

pub fn densities(arg: &str) -> Result<Vec<f64>, String> {
    if arg == "sweep" {
        let (lo, hi) = (0.0001f64, 0.99f64);
        return Ok((0..34).map(|k| lo * (hi / lo).powf(k as f64 / 33.0)).collect());
    }
    arg.split(',')
        .map(|s| {
            let d: f64 = s.trim().parse().map_err(|e| format!("density {s:?}: {e}"))?;
            if (0.0..=1.0).contains(&d) {
                Ok(d)
            } else {
                Err(format!("density {d} is outside [0, 1]"))
            }
        })
        .collect()
}

fn bitvector<B: DynBitvector>(n: usize, density: f64, ops: usize, rng: &mut ChaCha8Rng) -> (Vec<Row>, u64) {
    let mut b = B::default();
    for len in 0..n {
        b.insert(rng.gen_range(0..=len), rng.gen_bool(density));
    }
    let audit = b.audit_bits();
    let len = b.len();
    let positions: Vec<usize> = (0..if len > 0 { ops } else { 0 }).map(|_| rng.gen_range(0..len)).collect();
    let prefixes: Vec<usize> = (0..ops).map(|_| rng.gen_range(0..=len)).collect();
    let (ones, zeros) = (b.count_ones(), b.count_zeros());
    let sel1: Vec<usize> = (0..if ones > 0 { ops } else { 0 }).map(|_| rng.gen_range(0..ones)).collect();
    let sel0: Vec<usize> = (0..if zeros > 0 { ops } else { 0 }).map(|_| rng.gen_range(0..zeros)).collect();
    let inserts: Vec<(usize, bool)> = (0..ops).map(|k| (rng.gen_range(0..=len + k), rng.gen_bool(density))).collect();
    let rows = vec![
        time("access", &positions, |&i| b.access(i) as u64),
        time("rank0", &prefixes, |&i| b.rank0(i) as u64),
        time("rank1", &prefixes, |&i| b.rank1(i) as u64),
        time("select0", &sel0, |&j| b.select0(j).unwrap_or(0) as u64),
        time("select1", &sel1, |&j| b.select1(j).unwrap_or(0) as u64),
        time("insert", &inserts, |&(i, bit)| {
            b.insert(i, bit);
            0
        }),
    ];
    (rows, audit)
}

fn spsi(n: usize, density: f64, ops: usize, rng: &mut ChaCha8Rng) -> (Vec<Row>, u64) {
    let value = |rng: &mut ChaCha8Rng| if rng.gen_bool(density) { rng.gen_range(1..=1024) } else { 0 };
    let mut t = SpsiTree::new(SpsiConfig::PACKED);
    for len in 0..n {
        let v = value(rng);
        t.insert(rng.gen_range(0..=len), v);
    }
    let audit = t.audit_bits();
    let len = t.len();
    let positions: Vec<usize> = (0..if len > 0 { ops } else { 0 }).map(|_| rng.gen_range(0..len)).collect();
    let prefixes: Vec<usize> = (0..ops).map(|_| rng.gen_range(0..=len)).collect();
    let total = t.total();
    let targets: Vec<u64> = (0..if total > 0 { ops } else { 0 }).map(|_| rng.gen_range(0..total)).collect();
    let updates: Vec<usize> = positions.clone();
    let inserts: Vec<(usize, u64)> = (0..ops)
        .map(|k| {
            let v = value(rng);
            (rng.gen_range(0..=len + k), v)
        })
        .collect();
    let rows = vec![
        time("access", &positions, |&i| t.at(i)),
        time("sum", &prefixes, |&i| t.sum(i)),
        time("search", &targets, |&x| t.search(x).unwrap_or(0) as u64),
        time("update", &updates, |&i| {
            t.update(i, 1).expect("increment fits");
            0
        }),
        time("insert", &inserts, |&(i, v)| {
            t.insert(i, v);
            0
        }),
    ];
    (rows, audit)
}

fn string<S: DynString>(mut s: S, n: usize, sigma: u32, ops: usize, rng: &mut ChaCha8Rng) -> (Vec<Row>, u64) {
    for len in 0..n {
        s.insert(rng.gen_range(0..=len), rng.gen_range(0..sigma)).expect("symbol in alphabet");
    }
    let audit = s.audit_bits();
    let len = s.len();
    let counts: Vec<usize> = (0..sigma).map(|c| s.rank(len, c).expect("symbol in alphabet")).collect();
    let present: Vec<Symbol> = (0..sigma).filter(|&c| counts[c as usize] > 0).collect();
    let positions: Vec<usize> = (0..if len > 0 { ops } else { 0 }).map(|_| rng.gen_range(0..len)).collect();
    let ranks: Vec<(usize, Symbol)> = (0..ops).map(|_| (rng.gen_range(0..=len), rng.gen_range(0..sigma))).collect();
    let selects: Vec<(usize, Symbol)> = (0..if present.is_empty() { 0 } else { ops })
        .map(|_| {
            let c = present[rng.gen_range(0..present.len())];
            (rng.gen_range(0..counts[c as usize]), c)
        })
        .collect();
    let inserts: Vec<(usize, Symbol)> = (0..ops).map(|k| (rng.gen_range(0..=len + k), rng.gen_range(0..sigma))).collect();
    let rows = vec![
        time("access", &positions, |&i| s.access(i) as u64),
        time("rank", &ranks, |&(i, c)| s.rank(i, c).expect("symbol in alphabet") as u64),
        time("select", &selects, |&(j, c)| s.select(j, c).expect("occurrence exists") as u64),
        time("insert", &inserts, |&(i, c)| {
            s.insert(i, c).expect("symbol in alphabet");
            0
        }),
    ];
    (rows, audit)
}

/// Runs one structure at one density.
fn measure(structure: &str, n: usize, density: f64, ops: usize, seed: u64) -> (Vec<Row>, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = ((density * 256.0).ceil() as u32).max(1);
    let alphabet: Vec<Symbol> = (0..sigma).collect();
    match structure {
        "gap_bv" => bitvector::<GapBitvector>(n, density, ops, &mut rng),
        "suc_bv" => bitvector::<SuccinctBitvector>(n, density, ops, &mut rng),
        "spsi" => spsi(n, density, ops, &mut rng),
        "wt_str" => {
            let code = PrefixCode::fixed(&alphabet).expect("non-empty alphabet");
            string(WaveletString::new(code), n, sigma, ops, &mut rng)
        }
        "rle_str" => {
            let code = PrefixCode::fixed(&alphabet).expect("non-empty alphabet");
            string(RleString::new(code), n, sigma, ops, &mut rng)
        }
        other => unreachable!("unchecked structure {other}"),
    }
}

pub fn run(args: &Args) -> Result<(), (u8, String)> {
    if !STRUCTURES.contains(&args.structure.as_str()) {
        return Err((
            1,
            format!("unknown structure {:?}; expected one of {}", args.structure, STRUCTURES.join(", ")),
        ));
    }
    let densities = densities(&args.density).map_err(|e| (1, e))?;

    let mut out: Box<dyn Write> = match &args.csv {
        Some(path) => {
            let file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(|e| (1, format!("cannot open {}: {e}", path.display())))?;
            let fresh = file.metadata().map(|m| m.len() == 0).unwrap_or(true);
            let mut file: Box<dyn Write> = Box::new(file);
            if fresh {
                writeln!(file, "{HEADER}").map_err(|e| (1, e.to_string()))?;
            }
            file
        }
        None => {
            let mut stdout: Box<dyn Write> = Box::new(std::io::stdout());
            writeln!(stdout, "{HEADER}").map_err(|e| (1, e.to_string()))?;
            stdout
        }
    };

    for density in densities {
        let (rows, audit) = measure(&args.structure, args.n, density, args.ops, args.seed);
        for row in rows {
            writeln!(
                out,
                "{},{},{},{},{:.1},{},{},{}",
                args.structure, args.n, density, row.op, row.mean_ns, row.measured, audit, args.seed
            )
            .map_err(|e| (1, e.to_string()))?;
        }
        eprintln!("structure={} density={density} audit_bits={audit}", args.structure);
    }
    out.flush().map_err(|e| (1, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_has_34_log_spaced_points() {
        let d = densities("sweep").unwrap();
        assert_eq!(d.len(), 34);
        assert!((d[0] - 0.0001).abs() < 1e-12);
        assert!((d[33] - 0.99).abs() < 1e-12);
        let step = d[1] / d[0];
        assert!(d.windows(2).all(|w| (w[1] / w[0] - step).abs() < 1e-9));
    }

    #[test]
    fn density_lists() {
        assert_eq!(densities("0.1, 0.5").unwrap(), vec![0.1, 0.5]);
        assert!(densities("1.5").is_err());
        assert!(densities("x").is_err());
    }

    #[test]
    fn every_structure_reports_rows() {
        for s in STRUCTURES {
            let (rows, audit) = measure(s, 2000, 0.05, 50, 7);
            assert!(audit > 0);
            assert!(rows.iter().all(|r| r.measured == 50), "{s}");
        }
    }
}
