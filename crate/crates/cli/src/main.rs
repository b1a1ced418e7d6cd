mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Coverages, pseudogroups and groupoids of filters for finite inverse semigroups.
#[derive(Debug, Parser)]
#[command(name = "isg", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckLevel {
    Fast,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    All,
    Ultra,
    Tight,
    CompletelyPrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Topology {
    TauS,
    Patch,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Semigroup JSON file.
    #[arg(long, value_name = "FILE")]
    pub semigroup: PathBuf,

    /// Coverage JSON file, or one of the built-in names: tight, join, empty.
    #[arg(long, value_name = "FILE|NAME")]
    pub coverage: Option<String>,

    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,

    /// Largest semigroup accepted.
    #[arg(long, default_value_t = isg_core::algebra::DEFAULT_SIZE_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub size_cap: u64,

    /// `full` also runs every property suite that applies to the input.
    #[arg(long, value_enum, default_value = "fast")]
    pub check_level: CheckLevel,

    /// Admit the improper filter S when S has no zero.
    #[arg(long)]
    pub adjoin_improper: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load and validate a semigroup (and coverage, if given).
    Validate(Common),
    /// Print a built-in fixture as semigroup JSON, e.g. `symmetric_inverse(2)`.
    Fixture { name: String },
    /// Filters of S, or of E(S) for the tight kind.
    Filters {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "all")]
        kind: Kind,
    },
    /// Tight filters of E(S).
    TightFilters(Common),
    /// The universal pseudogroup of a coverage.
    Pseudogroup(Common),
    /// The groupoid of filters of S; with a coverage, the groupoid of
    /// completely prime filters of its universal pseudogroup.
    UniversalGroupoid {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "patch")]
        topology: Topology,
    },
    /// The reduction of the universal groupoid to the tight filters.
    TightGroupoid(Common),
    /// Completely prime filters of a finite frame with their topology.
    Spectrum(Common),
    /// Reduce the universal groupoid to the named units.
    Reduce {
        #[command(flatten)]
        common: Common,
        /// Units by the minimum of their filter, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        units: Vec<String>,
        #[arg(long, value_enum, default_value = "patch")]
        topology: Topology,
    },
    /// The embedding of groupoids induced by a nucleus on a pseudogroup.
    Embed {
        #[command(flatten)]
        common: Common,
        /// Nucleus JSON file, `identity`, or `coverage` for the nucleus of --coverage.
        #[arg(long, value_name = "FILE|NAME")]
        nucleus: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command) {
        Ok(out) => {
            print!("{}", out.stdout);
            if !out.summary.results.is_empty() && out.format != Format::Text {
                eprint!("{}", render::summary(&out.summary));
            }
            if out.summary.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
