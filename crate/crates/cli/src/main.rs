mod commands;
mod instance;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub const EXIT_MAXIT: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "mlpr", version, about = "Componentwise-accurate multilinear PageRank solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one instance and write the report.
    Solve(SolveArgs),
    /// Run seeded zero-sum perturbation trials and check the bounds.
    Perturb(PerturbArgs),
    /// Build a PageRank tensor from a Matrix Market graph.
    Ingest(IngestArgs),
    /// Run several methods against the extended-precision reference.
    Compare(CompareArgs),
}

#[derive(Args, Debug, Clone)]
#[group(id = "source", required = true, multiple = false)]
pub struct SourceArgs {
    /// Built-in instance: intro, ex1 or ex2.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Tensor text file (`n nnz` header, then `i j k value`, 1-based).
    #[arg(long, requires = "v")]
    pub tensor: Option<PathBuf>,
    /// Matrix Market graph; combined with `--nu` and `--v-seed` or `--v`.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct InstanceArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Teleportation vector file, for `--tensor` or `--graph`.
    #[arg(long)]
    pub v: Option<PathBuf>,
    /// Weight of the three-cycle tensor for `--graph` instances.
    #[arg(long, default_value_t = 0.5)]
    pub nu: f64,
    /// Seed of the heavy-tailed `v` for `--graph` instances without `--v`.
    #[arg(long, default_value_t = 0)]
    pub v_seed: u64,
    /// `δ` of the intro instance.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, required_unless_present = "one_minus_two_alpha", conflicts_with = "one_minus_two_alpha")]
    pub alpha: Option<f64>,
    /// `1 - 2α` as a decimal string, kept to about 32 digits.
    #[arg(long)]
    pub one_minus_two_alpha: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct IterArgs {
    #[arg(long, default_value_t = 1e-15)]
    pub tol: f64,
    /// Default 500, or 100 for graph instances.
    #[arg(long)]
    pub maxit: Option<usize>,
    /// Block sizes for the Jacobi methods, e.g. `2,2`.
    #[arg(long, value_delimiter = ',')]
    pub blocks: Option<Vec<usize>>,
    /// Starting vector: zero or v.
    #[arg(long, default_value = "zero")]
    pub start: String,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub iter: IterArgs,
    #[arg(long, default_value = "newton-gth")]
    pub method: String,
    /// Also compute the extended-precision reference and record errors.
    #[arg(long)]
    pub reference: bool,
    /// Report JSON path; stdout when omitted.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Per-iteration CSV path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PerturbArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Comma-separated perturbation sizes.
    #[arg(long, value_delimiter = ',', default_value = "1e-8")]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// relative (keeps the zero pattern) or additive.
    #[arg(long, default_value = "relative")]
    pub mode: String,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct IngestArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub nu: f64,
    #[arg(long, default_value_t = 0)]
    pub v_seed: u64,
    #[arg(long)]
    pub v: Option<PathBuf>,
    /// Tensor text output.
    #[arg(long)]
    pub out: PathBuf,
    /// Where to write the teleportation vector.
    #[arg(long)]
    pub v_out: Option<PathBuf>,
    /// Report JSON path; stdout when omitted.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub iter: IterArgs,
    /// Comma-separated method names.
    #[arg(long, value_delimiter = ',', default_value = "newton,newton-gth")]
    pub methods: Vec<String>,
    /// Long-format CSV path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<mlpr_core::Error> for Failure {
    fn from(e: mlpr_core::Error) -> Self {
        use mlpr_core::Error as E;
        match e {
            E::SingularPivot { .. } | E::Reducible { .. } | E::NotConverged(_) => {
                Failure::Numerical(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Perturb(a) => commands::perturb(a),
        Command::Ingest(a) => commands::ingest(a),
        Command::Compare(a) => commands::compare(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) => format!("usage error: {m}"),
                Failure::Numerical(m) => format!("numerical failure: {m}"),
            };
            eprintln!("mlpr: {msg}");
            ExitCode::from(f.code())
        }
    }
}
