//! `ghfp`: build cocyclic generalized Hadamard matrices and report on their
//! codes, propelinear structures and relative difference sets.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ghfp::Error;

#[derive(Parser)]
#[command(name = "ghfp", version, about = "Cocyclic generalized Hadamard matrices and GHFP codes")]
pub struct Cli {
    /// Print a JSON run record instead of key=value lines.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Raise size budgets (table1 up to a = 7).
    #[arg(long, global = true)]
    pub big: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Construct a cocycle / matrix and write it as .coc or .ghm.
    Build(BuildArgs),
    /// Check that a matrix (or a cocycle's matrix) is generalized Hadamard.
    Verify { file: PathBuf },
    /// Rank, kernel, p-kernel and minimum distance of the code.
    Code {
        file: PathBuf,
        #[arg(long)]
        rank: bool,
        #[arg(long)]
        kernel: bool,
        #[arg(long)]
        p_kernel: bool,
        #[arg(long)]
        min_distance: bool,
    },
    /// The full propelinear structure induced by a cocycle.
    Propelinear {
        file: PathBuf,
        #[arg(long)]
        pi_table: bool,
        #[arg(long)]
        group_structure: bool,
        #[arg(long)]
        verify: bool,
    },
    /// Orthogonal / GH / relative-difference-set equivalence.
    Rds {
        file: PathBuf,
        /// Histogram of |F_H ∩ x⋆F_H| over all codewords.
        #[arg(long)]
        profile: bool,
    },
    /// Monomial automorphism pairs obtained from the ⋆ operation.
    Autcheck {
        file: PathBuf,
        /// Check every codeword even above the size gate.
        #[arg(long)]
        full: bool,
        /// Also check the regular row action on the expanded matrix.
        #[arg(long)]
        expanded: bool,
    },
    /// Rank and kernel of the planar-function codes C_{a,b}.
    Table1 {
        #[arg(long, default_value_t = 4)]
        a_min: u32,
        #[arg(long, default_value_t = 7)]
        a_max: u32,
    },
    /// Everything above in one consolidated report.
    Report { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    Sylvester,
    SylvesterPower,
    GenSylvester,
    Planar,
    Kronecker,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Order {
    /// Elements by integer encoding.
    Encoding,
    /// 0, 1, x, x^2, … with a labelled group file.
    Primitive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Coc,
    Ghm,
}

#[derive(Args)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    pub construction: Construction,
    /// Characteristic.
    #[arg(long)]
    pub p: Option<u32>,
    /// Extension degree.
    #[arg(long)]
    pub m: Option<u32>,
    /// Field order (sylvester-power).
    #[arg(long)]
    pub q: Option<u32>,
    /// Number of Sylvester factors (sylvester-power).
    #[arg(long)]
    pub t: Option<u32>,
    /// Vector-space dimension (gen-sylvester).
    #[arg(long)]
    pub k: Option<u32>,
    /// Planar parameters.
    #[arg(long)]
    pub a: Option<u32>,
    #[arg(long)]
    pub b: Option<u32>,
    /// Allow any planar 1 < b < 2a-1 instead of 3 ≤ b ≤ a-1.
    #[arg(long)]
    pub unrestricted: bool,
    /// Defining polynomial, constant term first (e.g. 1,1,1).
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long, value_enum, default_value_t = Order::Encoding)]
    pub order: Order,
    /// Kronecker factors.
    #[arg(long)]
    pub left: Option<PathBuf>,
    #[arg(long)]
    pub right: Option<PathBuf>,
    /// Output file; the extension (.coc or .ghm) picks the format.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Format written to stdout when --out is absent.
    #[arg(long, value_enum, default_value_t = Format::Coc)]
    pub format: Format,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
