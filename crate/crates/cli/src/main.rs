//! `piseries`: verify, transform and probe the catalog of Ramanujan-type
//! series from the command line.

mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exit codes shared by every subcommand.
pub mod exit {
    pub const OK: u8 = 0;
    pub const REFUTED: u8 = 2;
    pub const INCONCLUSIVE: u8 = 3;
    pub const USAGE: u8 = 64;
    pub const DATA: u8 = 65;
}

#[derive(Parser, Debug)]
#[command(name = "piseries", version, about = "Verify Ramanujan-type series with rigorous error bounds")]
pub struct Cli {
    /// Catalog file to use instead of the bundled one.
    #[arg(long, global = true, env = "PISERIES_CATALOG", value_name = "PATH")]
    pub catalog: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Worker threads for multi-identity commands (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Selection {
    /// Identity codes (repeatable or comma-separated).
    #[arg(long, value_delimiter = ',', required_unless_present = "all")]
    pub code: Vec<String>,

    /// Every identity in the catalog.
    #[arg(long, conflicts_with = "code")]
    pub all: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate identities and compare with their right-hand sides.
    Verify {
        #[command(flatten)]
        sel: Selection,
        /// Decimal digits to certify.
        #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..))]
        digits: u32,
        /// Judge against the published right-hand side even where a
        /// corrected value is recorded.
        #[arg(long)]
        published_rhs: bool,
    },
    /// Exact geometric convergence ratio of each series.
    Ratio {
        #[command(flatten)]
        sel: Selection,
    },
    /// Dual-sequence transform; prints the new identity as a catalog entry.
    Dual {
        #[arg(long)]
        code: String,
        /// Also verify the transformed identity at this many digits.
        #[arg(long)]
        verify: Option<u32>,
    },
    /// Binomial transform; prints the new identity as a catalog entry.
    TransformBinomial {
        #[arg(long)]
        code: String,
        /// Rescale parameter λ (rational); chosen automatically if omitted.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Also verify the transformed identity at this many digits.
        #[arg(long)]
        verify: Option<u32>,
    },
    /// Truncated-sum congruences modulo prime powers.
    Congruence {
        /// The mod p⁶ congruence with a Bernoulli number.
        #[arg(long, required_unless_present = "conj5", conflicts_with = "conj5")]
        conj1: bool,
        /// The mod p² congruences with the quadratic-form case split.
        #[arg(long)]
        conj5: bool,
        #[arg(long, default_value_t = 7)]
        pmin: u64,
        #[arg(long, default_value_t = 100)]
        pmax: u64,
    },
    /// q-logconvexity of the four polynomial families.
    Qlc {
        /// One family (APERY_Q, S1_Q, S2_Q, W_Q); all when omitted.
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 25, value_parser = clap::value_parser!(u64).range(1..))]
        nmax: u64,
    },
    /// Ratio of T_n(b,c) to its leading asymptotic.
    Asymptote {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        b: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        c: u64,
        /// Indices (repeatable or comma-separated).
        #[arg(long, value_delimiter = ',', default_values_t = [1000u64, 10000])]
        n: Vec<u64>,
    },
    /// Exact checks of the combinatorial side identities.
    Suite {
        #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
        nmax: u64,
    },
    /// List catalog entries.
    List,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("piseries: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
