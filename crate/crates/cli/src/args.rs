use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bpcoll",
    version,
    about = "Bernstein polynomial collocation for elliptic problems on rectangles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem and export the solution on a probe grid.
    Solve(SolveArgs),
    /// Solve at several orders and tabulate the error.
    Converge(ConvergeArgs),
    /// Run the built-in invariant checks.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Built-in example: 1, 2, 3, 4, 5a or 5b.
    #[arg(long, value_name = "ID")]
    pub example: Option<String>,
    /// Problem file (key = value format).
    #[arg(long, value_name = "PATH")]
    pub problem: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    Uniform,
    Chebyshev,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Include wall-clock times (makes output run-dependent).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: Source,
    /// Polynomial order in x.
    #[arg(long)]
    pub n: usize,
    /// Polynomial order in y [default: n].
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, value_enum, default_value_t = Grid::Uniform)]
    pub grid: Grid,
    /// Probe points per direction for the exported solution.
    #[arg(long, default_value_t = 41, value_parser = clap::value_parser!(u64).range(2..))]
    pub probe: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub source: Source,
    /// Increasing list of orders, e.g. 11,13,15.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub orders: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Grid::Uniform)]
    pub grid: Grid,
    /// Probe points per direction for self-consistency; 1 means the domain center.
    #[arg(long, default_value_t = 11, value_parser = clap::value_parser!(u64).range(1..))]
    pub probe: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    /// Negate derivative values inside the finite-difference check.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}
