//! `gmcat`: validate operads, multicategories and algebras, enumerate hom-sets
//! of free algebras and check the free/underlying adjunction.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "gmcat", version, about = "Bounded-arity checks for multicategories over categorical operads")]
pub struct Cli {
    /// Builtin operad name or path of an operad file.
    #[arg(long, global = true, default_value = "barratt-eccles")]
    pub operad: String,
    /// Highest operad level to build; defaults to the bound.
    #[arg(long, global = true)]
    pub truncate: Option<usize>,
    /// Arity bound for exhaustive checks.
    #[arg(long, global = true, env = "GMCAT_BOUND", default_value_t = 3)]
    pub bound: usize,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Fail unless the operad's symmetric-group actions are free.
    #[arg(long, global = true)]
    pub require_sigma_free: bool,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of the summary.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Operad,
    Multicat,
    Algebra,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the validator for one kind of structure.
    Validate {
        kind: Kind,
        /// Input file; operads are selected with --operad instead.
        path: Option<PathBuf>,
    },
    /// Enumerate one hom-set of the free algebra on a multicategory.
    Free {
        path: PathBuf,
        /// Source and target as comma-separated object names; "" is empty.
        #[arg(long, num_args = 2, value_names = ["SRC", "TGT"], allow_hyphen_values = true)]
        hom: Vec<String>,
        /// Use the provisional construction without the quotient.
        #[arg(long)]
        hat: bool,
    },
    /// Build and dump the underlying multicategory of an algebra.
    Underlying { path: PathBuf },
    /// Check unit, counit and triangles for a multicategory and an algebra.
    CheckAdjunction {
        multicat: PathBuf,
        algebra: PathBuf,
        /// Use the provisional construction without the quotient.
        #[arg(long)]
        hat: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(commands::run(&cli))
}
