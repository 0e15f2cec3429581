use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn dynstr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynstr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn bwt_round_trip_and_mode_equivalence() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("in.txt");
    fs::write(&input, b"mississippi").unwrap();
    let rle = dir.path().join("rle.bwt");
    let wt = dir.path().join("wt.bwt");
    let back = dir.path().join("back.txt");

    let out = dynstr(&["bwt", p(&input), p(&rle), "--mode", "rle"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stderr(&out).contains("peak_audit_bits="));
    let out = dynstr(&["bwt", p(&input), p(&wt), "--mode", "wavelet"]);
    assert!(out.status.success());

    let bytes = fs::read(&rle).unwrap();
    assert_eq!(bytes, b"ipssm\0\0pissii");
    assert_eq!(bytes, fs::read(&wt).unwrap());

    let out = dynstr(&["unbwt", p(&rle), p(&back)]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(fs::read(&back).unwrap(), b"mississippi");
}

#[test]
fn binary_input_with_zero_bytes() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("in.bin");
    let data: Vec<u8> = (0..5000u32).map(|i| (i * i % 251) as u8).collect();
    fs::write(&input, &data).unwrap();
    let enc = dir.path().join("enc");
    let back = dir.path().join("back");
    assert!(dynstr(&["bwt", p(&input), p(&enc)]).status.success());
    assert!(dynstr(&["unbwt", p(&enc), p(&back)]).status.success());
    assert_eq!(fs::read(&back).unwrap(), data);
}

#[test]
fn missing_and_empty_inputs() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope");
    let output = dir.path().join("out");
    let out = dynstr(&["bwt", p(&missing), p(&output)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!output.exists());

    let empty = dir.path().join("empty");
    fs::write(&empty, b"").unwrap();
    assert_eq!(dynstr(&["bwt", p(&empty), p(&output)]).status.code(), Some(2));
    assert_eq!(dynstr(&["lz77", p(&empty), p(&output)]).status.code(), Some(2));
    assert!(!output.exists());
}

#[test]
fn lz77_round_trip() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("in");
    let mut data = Vec::new();
    for i in 0..300u32 {
        data.extend_from_slice(b"abracadabra ");
        data.push((i % 7) as u8);
    }
    fs::write(&input, &data).unwrap();
    let factors = dir.path().join("factors");
    let back = dir.path().join("back");
    let out = dynstr(&["lz77", p(&input), p(&factors)]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stderr(&out).contains("factors="));
    let text = fs::read_to_string(&factors).unwrap();
    assert!(text.starts_with("-,0,97\n-,0,98\n"));
    assert!(text.ends_with('\n'));
    assert!(dynstr(&["unlz77", p(&factors), p(&back)]).status.success());
    assert_eq!(fs::read(&back).unwrap(), data);
}

#[test]
fn corrupt_factor_files() {
    let dir = TempDir::new().unwrap();
    let output = dir.path().join("out");
    for (content, line) in [
        ("-,0,97\n0,1\n", "line 2"),
        ("-,0,97\n0,1,97\nzz,1,2\n", "line 3"),
        ("-,0,97\n5,1,97\n", "line 2"),
        ("-,0,97", "line 1"),
    ] {
        let input = dir.path().join("bad");
        fs::write(&input, content).unwrap();
        let out = dynstr(&["unlz77", p(&input), p(&output)]);
        assert_eq!(out.status.code(), Some(3), "{content:?}");
        assert!(stderr(&out).contains(line), "{content:?}: {}", stderr(&out));
    }
}

#[test]
fn corrupt_bwt_file() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("bad");
    fs::write(&input, b"abc").unwrap();
    let out = dynstr(&["unbwt", p(&input), p(&dir.path().join("out"))]);
    assert_eq!(out.status.code(), Some(3));
}

fn masked(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|l| {
            let mut f: Vec<&str> = l.split(',').collect();
            if f[4] != "mean_ns" {
                f[4] = "*";
            }
            f.join(",")
        })
        .collect()
}

#[test]
fn bench_csv_is_deterministic_and_appends() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = ["bench", "--structure", "gap_bv", "--n", "5000", "--density", "0.01,0.5", "--ops", "200", "--seed", "9"];
    for path in [&a, &b] {
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--csv", p(path)]);
        let out = dynstr(&full);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let (ca, cb) = (fs::read_to_string(&a).unwrap(), fs::read_to_string(&b).unwrap());
    assert_eq!(masked(&ca), masked(&cb));
    let lines: Vec<&str> = ca.lines().collect();
    assert_eq!(lines[0], "structure,n,density,op,mean_ns,ops_measured,audit_bits,seed");
    assert_eq!(lines.len(), 1 + 2 * 6);
    assert!(lines[1].starts_with("gap_bv,5000,0.01,access,"));

    let mut again: Vec<&str> = args.to_vec();
    again.extend(["--csv", p(&a)]);
    assert!(dynstr(&again).status.success());
    let appended = fs::read_to_string(&a).unwrap();
    assert_eq!(appended.lines().count(), 1 + 4 * 6);
    assert_eq!(appended.matches("structure,").count(), 1);
}

#[test]
fn bench_sweep_and_succinct_audit() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("s.csv");
    let n = 200_000;
    let out = dynstr(&[
        "bench", "--structure", "suc_bv", "--n", &n.to_string(), "--density", "sweep", "--ops", "20", "--csv", p(&csv),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = fs::read_to_string(&csv).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 34 * 6);
    let densities: std::collections::BTreeSet<&str> = rows.iter().map(|r| r[2]).collect();
    assert_eq!(densities.len(), 34);
    for r in &rows {
        let audit: f64 = r[6].parse().unwrap();
        assert!(audit <= 1.25 * n as f64, "density {}: audit {audit}", r[2]);
    }
}

#[test]
fn bench_other_structures() {
    for s in ["spsi", "wt_str", "rle_str"] {
        let out = dynstr(&["bench", "--structure", s, "--n", "3000", "--density", "0.05", "--ops", "100"]);
        assert!(out.status.success(), "{s}: {}", stderr(&out));
        let stdout = String::from_utf8(out.stdout).unwrap();
        assert!(stdout.lines().count() >= 5, "{s}");
    }
}

#[test]
fn bench_unknown_structure() {
    let out = dynstr(&["bench", "--structure", "btree"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unknown structure"));
}
