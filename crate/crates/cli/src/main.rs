//! `wsb`: weighted-mediant Stern-Brocot rows from the command line.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 resource cap, 4 method
//! mismatch in `crossdiff --check`, 5 verification failure, 6 I/O failure.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wsb_core::Fraction;

#[derive(Parser, Debug)]
#[command(name = "wsb", version, about = "Weighted-mediant Stern-Brocot sequences and their cross-differences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Stream the fractions of row n.
    Row(RowArgs),
    /// Cross-differences of row n.
    Crossdiff(CrossdiffArgs),
    /// Unit-case cross-difference at a decimal index (any size).
    Query(QueryArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Write a figure as SVG or plain text.
    Render(RenderArgs),
    /// Counting tables, the mod-9 census, reduction statistics, OEIS prefixes.
    Census(CensusArgs),
    /// Apply the unit propagation rule to another start pair and report mismatches.
    Probe(ProbeArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SequenceArgs {
    /// Mediant weight.
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    /// Start pair as `a/b,c/d`.
    #[arg(long, default_value = "0/1,1/1", value_parser = parse_start)]
    pub start: (Fraction, Fraction),
    /// Keep mediants unreduced.
    #[arg(long)]
    pub no_reduce: bool,
}

#[derive(Args, Debug)]
pub struct RowArgs {
    #[arg(long)]
    pub n: u32,
    #[command(flatten)]
    pub seq: SequenceArgs,
    /// Largest row allowed; defaults to 20 for k = 3.
    #[arg(long)]
    pub cap: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
pub struct CrossdiffArgs {
    #[arg(long)]
    pub n: u32,
    #[command(flatten)]
    pub seq: SequenceArgs,
    #[arg(long, value_enum, default_value_t = Method::Fractions)]
    pub method: Method,
    /// Compute every applicable method and fail with exit 4 on disagreement.
    #[arg(long)]
    pub check: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
pub struct QueryArgs {
    /// Decimal index.
    #[arg(long)]
    pub index: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite to run; repeat for several. Defaults to all.
    #[arg(long = "suite")]
    pub suites: Vec<String>,
    /// Row bound; each suite has its own default.
    #[arg(long)]
    pub max_n: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[arg(long, value_enum)]
    pub what: Figure,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub max_n: Option<u32>,
    /// Draw only depth n for bitmap figures instead of depths 0..=n.
    #[arg(long)]
    pub single: bool,
    #[arg(long)]
    pub out: std::path::PathBuf,
    /// Output kind; inferred from the extension (`.svg`) when omitted.
    #[arg(long, value_enum)]
    pub format: Option<RenderFormat>,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[arg(long, value_enum)]
    pub what: CensusKind,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    #[arg(long, value_parser = parse_start)]
    pub start: (Fraction, Fraction),
    #[arg(long, default_value_t = 6)]
    pub max_n: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
    /// Compact base-3 exponents, one character per value.
    Log3,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Fractions,
    Rule,
    Oracle,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Log-3 step plot of the unit row C_n.
    Crossdiff,
    /// Log-3 step plot of the no-reduction row.
    Nored,
    /// Steeples of rows 1..=max_n separated by zeros.
    Steeples,
    /// Cantor iterations.
    Cantor,
    /// Positions of unit cross-differences.
    Ones,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Svg,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusKind {
    Counts,
    Observed,
    Mod9,
    Reduction,
    Oeis,
    OnesFraction,
}

fn parse_start(s: &str) -> Result<(Fraction, Fraction), String> {
    let (l, r) = s.split_once(',').ok_or_else(|| format!("expected a/b,c/d, got {s:?}"))?;
    let l: Fraction = l.parse().map_err(|e| format!("{e}"))?;
    let r: Fraction = r.parse().map_err(|e| format!("{e}"))?;
    Ok((l, r))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("wsb: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
