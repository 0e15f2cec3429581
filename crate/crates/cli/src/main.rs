//! `dynstr`: BWT and LZ77 in compressed working space, plus a benchmark
//! harness for the dynamic structures.

mod bench;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use dynstr::compress::format;
use dynstr::{build_bwt, invert_bwt, lz77_decode, lz77_factorize, BwtMode, Error};

#[derive(Parser)]
#[command(name = "dynstr", version, about = "Compressed-space BWT and LZ77 tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Burrows-Wheeler transform of a file.
    Bwt {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Rle)]
        mode: Mode,
    },
    /// Inverts a file written by `bwt`.
    Unbwt { input: PathBuf, output: PathBuf },
    /// LZ77 factorization of a file, one `source,length,next` line per factor.
    Lz77 { input: PathBuf, output: PathBuf },
    /// Decodes a file written by `lz77`.
    Unlz77 { input: PathBuf, output: PathBuf },
    /// Times operations on one structure and appends CSV rows.
    Bench(bench::Args),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Rle,
    Wavelet,
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::new(1, format!("cannot read {}: {e}", path.display())))
}

fn read_nonempty(path: &Path) -> Result<Vec<u8>, Failure> {
    let data = read(path)?;
    if data.is_empty() {
        return Err(Failure::new(2, format!("{} is empty", path.display())));
    }
    Ok(data)
}

fn write(path: &Path, data: &[u8]) -> Result<(), Failure> {
    fs::write(path, data).map_err(|e| Failure::new(1, format!("cannot write {}: {e}", path.display())))
}

fn malformed(e: Error) -> Failure {
    Failure::new(3, e.to_string())
}

fn metric(key: &str, value: impl std::fmt::Display) {
    eprintln!("{key}={value}");
}

fn bwt(input: &Path, output: &Path, mode: Mode) -> Result<(), Failure> {
    let text = read_nonempty(input)?;
    let start = Instant::now();
    let mode = match mode {
        Mode::Rle => BwtMode::Rle,
        Mode::Wavelet => BwtMode::Wavelet,
    };
    let out = build_bwt(&text, mode).map_err(|e| Failure::new(1, e.to_string()))?;
    let elapsed = start.elapsed();
    write(output, &format::encode_bwt(&out.bwt))?;
    metric("input_bytes", text.len());
    metric("runs", dynstr::bounds::runs(&out.bwt));
    metric("peak_audit_bits", out.peak_audit_bits);
    metric("wall_ms", elapsed.as_millis());
    Ok(())
}

fn unbwt(input: &Path, output: &Path) -> Result<(), Failure> {
    let bytes = read_nonempty(input)?;
    let start = Instant::now();
    let bwt = format::decode_bwt(&bytes).map_err(malformed)?;
    let text = invert_bwt(&bwt).map_err(malformed)?;
    let elapsed = start.elapsed();
    write(output, &text)?;
    metric("output_bytes", text.len());
    metric("wall_ms", elapsed.as_millis());
    Ok(())
}

fn lz77(input: &Path, output: &Path) -> Result<(), Failure> {
    let text = read_nonempty(input)?;
    let start = Instant::now();
    let out = lz77_factorize(&text).map_err(|e| Failure::new(1, e.to_string()))?;
    let elapsed = start.elapsed();
    write(output, format::encode_factors(&out.factors).as_bytes())?;
    metric("input_bytes", text.len());
    metric("factors", out.factors.len());
    metric("peak_audit_bits", out.peak_audit_bits);
    metric("wall_ms", elapsed.as_millis());
    Ok(())
}

fn unlz77(input: &Path, output: &Path) -> Result<(), Failure> {
    let bytes = read(input)?;
    let text = String::from_utf8(bytes).map_err(|e| Failure::new(3, format!("factor file is not UTF-8: {e}")))?;
    let factors = format::decode_factors(&text).map_err(malformed)?;
    let mut decoded = 0usize;
    for (k, f) in factors.iter().enumerate() {
        if let Some(s) = f.source {
            if s.saturating_add(f.length) > decoded {
                return Err(Failure::new(
                    3,
                    format!("line {}: source {s} with length {} reaches past byte {decoded}", k + 1, f.length),
                ));
            }
        }
        decoded += f.length + 1;
    }
    let start = Instant::now();
    let out = lz77_decode(&factors).map_err(malformed)?;
    let elapsed = start.elapsed();
    write(output, &out)?;
    metric("output_bytes", out.len());
    metric("wall_ms", elapsed.as_millis());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Bwt { input, output, mode } => bwt(&input, &output, mode),
        Command::Unbwt { input, output } => unbwt(&input, &output),
        Command::Lz77 { input, output } => lz77(&input, &output),
        Command::Unlz77 { input, output } => unlz77(&input, &output),
        Command::Bench(args) => bench::run(&args).map_err(|(code, message)| Failure::new(code, message)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("dynstr: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
