//! The `augustin` binary: parse flags, load files, run one command, write
//! one string.
//!
//! Exit codes: 0 success, 1 validation/parse/usage error, 2 numerical
//! failure (non-convergence, enumeration caps, degenerate or singular
//! inputs, out-of-regime requests), 3 property violation (a validation
//! sweep found a margin in the red — this should never happen and means an
//! implementation bug).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use augustin_cli::commands::{self, Format};
use augustin_cli::config::RunConfig;
use augustin_cli::io;
use augustin_core::Error;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "augustin",
    version,
    about = "Augustin information, strong converse exponents, and refined \
             converse bounds for constant composition codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Augustin information table over a list of orders
    Info {
        /// Channel file (JSON: {"rows": [[...], ...]})
        #[arg(long)]
        channel: PathBuf,
        /// Input distribution file (JSON: {"probs": [...]})
        #[arg(long)]
        composition: PathBuf,
        /// Comma-separated orders
        #[arg(long, value_delimiter = ',', default_value = "1")]
        alphas: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Strong converse exponent curve over a rate grid
    SceCurve {
        /// Channel file (JSON)
        #[arg(long)]
        channel: PathBuf,
        /// Input distribution file (JSON)
        #[arg(long)]
        composition: PathBuf,
        /// Rate grid, start:stop:step in nats
        #[arg(long)]
        rates: String,
        #[command(flatten)]
        common: Common,
    },
    /// Converse bounds for an (M, L) constant composition code
    Bound {
        /// Channel file (JSON)
        #[arg(long)]
        channel: PathBuf,
        /// Composition base distribution file (JSON); n·P must be integral
        #[arg(long)]
        composition: PathBuf,
        /// Blocklength
        #[arg(long)]
        n: usize,
        /// Number of messages
        #[arg(long = "M")]
        m: u64,
        /// List size
        #[arg(long = "L", default_value_t = 1)]
        l: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Oracle-backed validation sweeps
    Validate {
        /// Suite: ht-converse, ht-achievability, or code
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Fixed-point residual target
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Solver iteration cap
    #[arg(long = "max-iter", default_value_t = 10_000)]
    max_iter: usize,
    /// Order cap for the parametric search
    #[arg(long = "rho-cap", default_value_t = 65_536.0)]
    rho_cap: f64,
    /// Enumeration cap for the exact oracles
    #[arg(long = "atom-cap", default_value_t = 10_000_000)]
    atom_cap: u64,
    /// Seed for the seeded validation sweeps
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (standard output when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output encoding for the tabular subcommands (bound and validate
    /// always emit JSON)
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig {
            tol: self.tol,
            max_iter: self.max_iter,
            rho_cap: self.rho_cap,
            atom_cap: self.atom_cap,
            seed: self.seed,
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidInput(_) | Error::Domain(_) | Error::Hypothesis(_) => 1,
        Error::NoConvergence { .. }
        | Error::Regime(_)
        | Error::Capacity { .. }
        | Error::DegenerateVariance
        | Error::MutuallySingular { .. } => 2,
        Error::Property(_) => 3,
    }
}

fn write_out(path: Option<&Path>, contents: &str) -> augustin_core::Result<()> {
    match path {
        None => {
            println!("{contents}");
            Ok(())
        }
        Some(path) => std::fs::write(path, format!("{contents}\n"))
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display()))),
    }
}

fn run(cli: Cli) -> augustin_core::Result<ExitCode> {
    match cli.command {
        Command::Info {
            channel,
            composition,
            alphas,
            common,
        } => {
            let w = io::load_channel(&channel)?;
            let p = io::load_distribution(&composition)?;
            let out = commands::cmd_info(&w, &p, &alphas, &common.config(), common.format)?;
            write_out(common.out.as_deref(), &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::SceCurve {
            channel,
            composition,
            rates,
            common,
        } => {
            let w = io::load_channel(&channel)?;
            let p = io::load_distribution(&composition)?;
            let grid = commands::parse_rate_spec(&rates)?;
            let out = commands::cmd_sce_curve(&w, &p, &grid, &common.config(), common.format)?;
            write_out(common.out.as_deref(), &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound {
            channel,
            composition,
            n,
            m,
            l,
            common,
        } => {
            let w = io::load_channel(&channel)?;
            let p = io::load_distribution(&composition)?;
            let out = commands::cmd_bound(&w, &p, n, m, l, &common.config())?;
            write_out(common.out.as_deref(), &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { suite, common } => {
            let (out, violations) = commands::cmd_validate(&suite, &common.config())?;
            write_out(common.out.as_deref(), &out)?;
            Ok(if violations > 0 {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here as well; they stay successful.
            let _ = e.print();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
