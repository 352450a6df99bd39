//! `airyzeros`: Airy zeros from the resurgent series, by any engine.

mod output;
mod run;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use airy_resurgence::Method;

/// Usage errors.
pub const EXIT_USAGE: u8 = 1;
/// Numeric failures and table mismatches.
pub const EXIT_NUMERIC: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "airyzeros", version, about = "Zeros of Ai from the implicit resurgent series X(t)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute zeros k_l by one engine.
    Zeros(ZerosArgs),
    /// Dump exact series coefficients.
    Series(SeriesArgs),
    /// Recompute the published reference tables.
    Tables(TablesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, clap::Args)]
pub struct ZerosArgs {
    #[arg(long, value_parser = parse_method)]
    pub method: Method,
    /// Zero index or inclusive range `a..b`.
    #[arg(long = "l", value_name = "L", value_parser = parse_range)]
    pub l: (u32, u32),
    /// Factorial series parameter `p/q`, 0 < λ < 4/π (default 6/5).
    #[arg(long)]
    pub lambda: Option<String>,
    /// Factorial truncation (default 61).
    #[arg(long = "N", value_name = "N")]
    pub n: Option<usize>,
    /// Truncation orders `n0[,n1[,n2]]`; the optimal plan when omitted.
    #[arg(long, value_delimiter = ',')]
    pub plan: Option<Vec<usize>>,
    /// Working precision in bits.
    #[arg(long, env = "AIRYZEROS_PRECISION", default_value_t = 256)]
    pub precision: u32,
    /// Accuracy target of levels 1 and 2, relative to t.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Attach the oracle zero and the true error.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    #[value(name = "X")]
    X,
    Alien1,
    Alien2,
    Phi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesFormat {
    Text,
    Json,
}

#[derive(Debug, clap::Args)]
pub struct SeriesArgs {
    #[arg(long, value_enum)]
    pub what: SeriesKind,
    #[arg(long)]
    pub order: usize,
    #[arg(long, value_enum, default_value_t = SeriesFormat::Text)]
    pub format: SeriesFormat,
    /// Largest order accepted; exact coefficients grow quickly.
    #[arg(long, env = "AIRYZEROS_MAX_ORDER", default_value_t = 400)]
    pub max_order: usize,
}

#[derive(Debug, clap::Args)]
pub struct TablesArgs {
    /// Table id or range `a..b`; all eight when omitted.
    #[arg(long, value_parser = parse_range)]
    pub id: Option<(u32, u32)>,
    #[arg(long, env = "AIRYZEROS_PRECISION", default_value_t = 256)]
    pub precision: u32,
    /// Accuracy target of levels 1 and 2, relative to t.
    #[arg(long, default_value_t = 1e-32)]
    pub tol: f64,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// `a` or `a..b` with `1 ≤ a ≤ b`.
fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let num = |v: &str| v.trim().parse::<u32>().map_err(|_| format!("`{v}` is not a positive integer"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b)?),
        None => {
            let a = num(s)?;
            (a, a)
        }
    };
    if a == 0 || a > b {
        return Err(format!("`{s}` is not a range a..b with 1 <= a <= b"));
    }
    Ok((a, b))
}

/// Failure of a subcommand, mapped to an exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numeric(String),
    /// Complete report whose reproduced values disagree with the fixtures.
    Mismatch(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Zeros(a) => run::zeros(&a),
        Command::Series(a) => run::series(&a),
        Command::Tables(a) => run::tables(&a),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Mismatch(out)) => {
            print!("{out}");
            eprintln!("error: reproduced values disagree with the reference tables");
            ExitCode::from(EXIT_NUMERIC)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}
