use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "sparse-map", version, about = "Sparse affine feasibility by alternating projections")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run alternating projections on an instance file
    Solve(SolveArgs),
    /// Compute the local convergence certificate at a solution
    Certify(CertifyArgs),
    /// Reproduce the three-dimensional worked example
    Example(ExampleArgs),
    /// Print a random instance with a planted sparse solution
    Gen(GenArgs),
    /// Certify and solve a batch of generated instances, printing CSV
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct IterationFlags {
    /// Stop once ||a_k - b_k|| falls to this value
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iters: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    /// Comma-separated vector, `random`, `planted`, or `basin`
    /// (0.99 of the certified radius from the planted solution)
    #[arg(long, default_value = "random", allow_hyphen_values = true)]
    pub start: String,
    /// Known solution for error tracking; defaults to the planted solution
    #[arg(long, allow_hyphen_values = true)]
    pub reference: Option<Coords>,
    /// Certify at the reference point and check the run against it
    #[arg(long)]
    pub certify: bool,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub max_enum: Option<usize>,
    /// Seed for random starts; defaults to the instance seed, then 0
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub iteration: IterationFlags,
    /// Write the per-step CSV here
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    pub instance: PathBuf,
    /// Solution to certify at; defaults to the planted solution
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<Coords>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub max_enum: Option<usize>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Solution {
    X,
    Y,
}

#[derive(Debug, Clone, Args)]
pub struct ExampleArgs {
    #[arg(long, default_value_t = 100)]
    pub starts: usize,
    /// Which solution to start around: x = (1,0,0) or y = (0,1,0)
    #[arg(long, value_enum, default_value_t = Solution::X)]
    pub solution: Solution,
    /// Radius parameter; defaults to delta_bar = 1/3
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub iteration: IterationFlags,
    /// Write the first run's per-step CSV here
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    pub n: usize,
    pub m: usize,
    pub s: usize,
    /// Number of nonzeros of the planted solution
    pub sparsity: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    pub count: usize,
    pub n: usize,
    pub m: usize,
    pub s: usize,
    /// Instance `i` uses seed `seed + i`
    pub seed: u64,
    /// Nonzeros of the planted solutions; defaults to s
    #[arg(long)]
    pub sparsity: Option<usize>,
    #[arg(long)]
    pub max_enum: Option<usize>,
    #[command(flatten)]
    pub iteration: IterationFlags,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A comma-separated vector argument such as `1,0,-0.5`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coords(pub Vec<f64>);

impl std::str::FromStr for Coords {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        parse_vector(text).map(Coords)
    }
}

pub fn parse_vector(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(format!("`{t}` is not a finite number")),
            }
        })
        .collect()
}
