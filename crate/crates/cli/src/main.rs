//! `fkit`: command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 certificate failure.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "fkit", version, about = "Exact circuits for polynomial roots and factors")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Field descriptor: Q, Fp:<p> or Fq:<p>^<k>.
    #[arg(long, global = true, default_value = "Q")]
    pub field: String,
    /// Seed for every random choice.
    #[arg(long, global = true, env = "FKIT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Largest total degree expanded exactly.
    #[arg(long, global = true, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    pub degree_cap: u32,
    /// Print extra diagnostics to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Expand a circuit into polynomial text.
    Expand {
        input: PathBuf,
        /// Drop monomials above --degree-cap instead of failing.
        #[arg(long)]
        truncated: bool,
    },
    /// Evaluate a circuit at a point, e.g. --at x1=3,y=1/2.
    Eval {
        input: PathBuf,
        #[arg(long, default_value = "")]
        at: String,
    },
    /// Print size, depth and degree data as key=value lines.
    Metrics { input: PathBuf },
    /// Circuit for the coefficient of var^index.
    Coeff {
        input: PathBuf,
        #[arg(long, default_value = "y")]
        var: String,
        #[arg(long)]
        index: u32,
        /// Degree bound in --var; defaults to the syntactic degree.
        #[arg(long)]
        degree_bound: Option<u32>,
    },
    /// Truncated power-series root of a polynomial in y.
    RootSeries {
        /// Polynomial or circuit file; alternatively use --poly.
        input: Option<PathBuf>,
        #[arg(long)]
        poly: Option<String>,
        /// newton, diagonal, closed0 or closedp.
        #[arg(long, default_value = "newton")]
        variant: String,
        #[arg(long)]
        precision: u32,
        /// Boundary value of the root.
        #[arg(long, default_value = "0")]
        alpha: String,
        /// Multiplicity of the root, coprime to the characteristic.
        #[arg(long, default_value_t = 1)]
        e: u32,
        /// Returns the p^ell-th power of the root.
        #[arg(long, default_value_t = 0)]
        ell: u32,
    },
    /// Circuit for the factor with a given boundary polynomial.
    FactorCircuit {
        input: PathBuf,
        /// Univariate polynomial in y dividing P(a*y + b).
        #[arg(long)]
        boundary: Option<String>,
        #[arg(long)]
        precision: Option<u32>,
        /// Comma-separated shifts `a`; drawn from --seed when omitted.
        #[arg(long)]
        a: Option<String>,
        /// Comma-separated shifts `b`.
        #[arg(long)]
        b: Option<String>,
    },
    /// Factor a circuit into irreducibles with multiplicities.
    Factorize {
        input: PathBuf,
        /// affine:seed=S:w=K, passthrough or zero.
        #[arg(long, default_value = "affine:seed=0:w=2")]
        generator: String,
        /// Directory for factor circuits and result.txt.
        #[arg(long)]
        emit_circuits: Option<PathBuf>,
        /// Known irreducible factors (.poly files); required over Q.
        #[arg(long)]
        planted: Vec<PathBuf>,
    },
    /// Run the randomized suites of a module or a single suite.
    Verify {
        /// field, poly, circuit, roots, factor, pipeline or a suite name.
        module: String,
        #[arg(long, default_value_t = 100)]
        instances: usize,
    },
    /// Render stored transform reports as a size/depth table.
    Report { files: Vec<PathBuf> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
