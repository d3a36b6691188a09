use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "toppling", version, about = "Betti numbers of toppling ideals through chip-firing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Edge-list file: one `u v [multiplicity]` per line, `#` comments.
    #[arg(long, global = true, value_name = "FILE")]
    pub graph: Option<PathBuf>,
    /// Homological degrees, `A..B` inclusive or a single `A`.
    #[arg(long = "k", global = true, value_name = "A..B")]
    pub k: Option<Span>,
    /// Sink vertex for superstables and class representatives.
    #[arg(long, global = true, value_name = "VERTEX")]
    pub sink: Option<String>,
    /// Divisor degrees scanned for coarse Betti numbers, inclusive.
    #[arg(long = "degree-window", global = true, value_name = "LO..HI")]
    pub degree_window: Option<Span>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    /// Seed for randomly generated graphs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare coarse Betti numbers with sums of maximal quotient parking functions.
    VerifyWilmes {
        /// Check every connected multigraph with at most N vertices and
        /// total multiplicity at most M instead of `--graph`.
        #[arg(long, value_name = "N:M", conflicts_with = "random")]
        exhaustive: Option<String>,
        /// Check this many random multigraphs drawn with `--seed`.
        #[arg(long, value_name = "COUNT")]
        random: Option<usize>,
        /// List the parking-function count of every partition.
        #[arg(long)]
        detail: bool,
    },
    /// Coarse Betti numbers, or the fine ones of a single divisor.
    Betti {
        #[arg(long, value_name = "DIVISOR")]
        divisor: Option<String>,
    },
    /// Cuts with their boundary divisors.
    Cuts,
    /// Connected partitions with their quotient parking-function counts.
    Partitions {
        #[arg(long, default_value_t = 2)]
        parts: usize,
    },
    /// Classes of boundary divisors of one partition.
    BoundaryDivisors {
        #[arg(long, value_name = "BLOCKS")]
        partition: String,
    },
    /// Members of a linear system, its complex and its splittings.
    LinearSystem {
        #[arg(long, value_name = "DIVISOR")]
        divisor: String,
    },
    /// Signed faces of an abstract extension cycle.
    ExtensionCycle {
        /// Extension label of each base vertex, e.g. `5,5,4`.
        #[arg(long, value_name = "LABELS")]
        extensions: String,
    },
    /// Witness cycle for a boundary divisor of a multi-edged tree.
    TreeWitness {
        #[arg(long, value_name = "BLOCKS")]
        partition: String,
        /// Defaults to the divisor of the canonical unique-source orientation.
        #[arg(long, value_name = "DIVISOR")]
        divisor: Option<String>,
    },
}

/// An inclusive integer range written `A..B`, `A..=B` or `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub lo: i64,
    pub hi: i64,
}

impl Span {
    pub fn range(self) -> RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("`{t}` is not an integer"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => {
                let v = num(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range `{s}`"));
        }
        Ok(Span { lo, hi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans() {
        assert_eq!("1..3".parse(), Ok(Span { lo: 1, hi: 3 }));
        assert_eq!("1..=3".parse(), Ok(Span { lo: 1, hi: 3 }));
        assert_eq!("2".parse(), Ok(Span { lo: 2, hi: 2 }));
        assert!("3..1".parse::<Span>().is_err());
        assert!("a..b".parse::<Span>().is_err());
    }
}
