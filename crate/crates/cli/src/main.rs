mod commands;
mod svg;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use stallings_core::sample::DEFAULT_SEED;

/// Subgroups of free groups via Stallings core graphs.
///
/// Generator lists are comma-separated words over a..z with upper case for
/// inverses, e.g. "a,baB". An argument of the form @FILE reads a subgroup
/// spec or core dump document instead.
#[derive(Debug, Parser)]
#[command(name = "stallings", version)]
pub struct Cli {
    #[command(flatten)]
    pub opts: Opts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// Rank of the ambient free group.
    #[arg(long, global = true, default_value_t = 2)]
    pub rank: usize,
    /// Random seed; STALLINGS_SEED takes precedence when set.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of random instances.
    #[arg(long, global = true)]
    pub count: Option<usize>,
    /// Maximal length of random words.
    #[arg(long, global = true)]
    pub maxlen: Option<usize>,
    /// Write the main document here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write bound comparisons as CSV here.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Write a scatter plot of exact sums against bounds here.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical core of a subgroup.
    Core { gens: String },
    /// H, n1, n2, rank, index and the Galois test when the index is finite.
    Invariants { gens: String },
    /// Index of the subgroup.
    Index { gens: String },
    /// Membership of a word.
    Member { gens: String, word: String },
    /// Galois (normality) test of a finite-index subgroup.
    Galois { gens: String },
    /// Components of the pullback and their double-coset representatives.
    Intersect { left: String, right: String },
    /// Exact intersection-rank sum against the bounds.
    Bound { left: String, right: String },
    /// Core of the subgroup generated by both.
    Join { left: String, right: String },
    /// Finite-index completion avoiding the given non-members.
    Complete {
        gens: String,
        /// Comma-separated words that must stay outside.
        #[arg(long, default_value = "")]
        avoid: String,
    },
    /// Conjugator g with g w g^-1 outside an infinite-index subgroup.
    Witness { gens: String, word: String },
    /// The k-vertex family pair and its bound report.
    Family { k: usize },
    /// Lattice excision of loops in a rank-2 base graph document.
    Excise { file: PathBuf },
    /// Property suite on seeded random instances.
    Verify {
        #[arg(long, hide = true)]
        mutant: Option<verify::Mutant>,
    },
    /// Seeded random subgroup specs, or complete cores of a given index.
    Sample {
        #[arg(long)]
        complete: Option<usize>,
    },
}

impl Opts {
    pub fn seed(&self) -> Result<u64, commands::CliError> {
        match std::env::var("STALLINGS_SEED") {
            Ok(text) if !text.trim().is_empty() => text
                .trim()
                .parse()
                .map_err(|_| commands::CliError::Usage(format!("STALLINGS_SEED is not a number: {text}"))),
            _ => Ok(self.seed.unwrap_or(DEFAULT_SEED)),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stallings: {e}");
            ExitCode::from(e.code())
        }
    }
}
