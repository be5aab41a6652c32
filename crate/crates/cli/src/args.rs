use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fockbench::verify::Suite;
use fockbench::C64;

use crate::family::Family;

#[derive(Debug, Parser)]
#[command(name = "fockbench", version, about = "Oscillator states in truncated Fock space")]
pub struct Cli {
    /// File of key=value lines supplying values for flags not given.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build one state and report its statistics.
    #[command(allow_negative_numbers = true)]
    State(StateArgs),
    /// Run a named verification suite.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
    /// Evaluate a family over a range of one parameter (CSV).
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Sample a state's position wavefunction on a grid.
    #[command(allow_negative_numbers = true)]
    Wavefunction(WaveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[command(flatten)]
    pub params: Params,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_suite)]
    pub suite: Suite,
    #[command(flatten)]
    pub params: Params,
    /// Replace every check's bound with this value.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Parameter to vary, e.g. r or alpha (real part).
    #[arg(long)]
    pub param: String,
    #[arg(long)]
    pub start: f64,
    #[arg(long)]
    pub stop: f64,
    #[arg(long)]
    pub steps: usize,
    #[command(flatten)]
    pub params: Params,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WaveArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[command(flatten)]
    pub params: Params,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub x_min: Option<f64>,
    #[arg(long)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
}

/// Family and suite parameters. Complex values accept `1.5`, `2i`, `1-0.5i`
/// or `re,im`.
#[derive(Debug, Clone, Default, Args)]
pub struct Params {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: Option<C64>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub zeta: Option<C64>,
    #[arg(long)]
    pub q: Option<i64>,
    /// Bargmann index.
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub xi: Option<C64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Option<C64>,
    /// Ladder step of the phase-squeezed family.
    #[arg(long)]
    pub m: Option<usize>,
    /// Evolution time for the coherent family.
    #[arg(long)]
    pub t: Option<f64>,
    /// Basis size; defaults to $FOCKBENCH_DIM, then 64.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Synthesized levels for the lambda families; defaults to the most the
    /// grid supports.
    #[arg(long)]
    pub levels: Option<usize>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite; one of {}", names.join(", "))
    })
}

pub fn parse_complex(s: &str) -> Result<C64, String> {
    let s = s.trim();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad number {t:?} in {s:?}"));
    if let Some((re, im)) = s.split_once(',') {
        return Ok(C64::new(num(re)?, num(im)?));
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(C64::new(num(s)?, 0.0));
    };
    // split at the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (num(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => num(t)?,
    };
    Ok(C64::new(re, im))
}
