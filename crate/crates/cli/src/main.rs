//! Command-line driver for the invariant-algebra energy bounds.
//!
//! Subcommands tabulate invariant set sizes, compute Anderson and variational
//! bound pairs, run the self-check suites, and dump Gram matrices and
//! dependency reports. Structured output is JSON with an embedded run
//! manifest; tables are plain aligned text. Exit codes: 0 success, 1 failed
//! check or bound, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use spinlb_core::VerifyLevel;

mod artifacts;
mod commands;

#[derive(Parser)]
#[command(
    name = "spinlb",
    version,
    about = "Energy lower bounds for Heisenberg spin clusters"
)]
struct Cli {
    /// Seed for the stochastic restarts; overrides the config file
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Directory holding cached structure tensors
    #[arg(long, global = true, default_value = "./.spinlb-cache")]
    cache_dir: PathBuf,

    /// Restart count for the variational search; overrides the config file
    #[arg(long, global = true)]
    restarts: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate invariant set sizes against the full operator space
    Table1 {
        /// Largest cluster size to tabulate (enumeration cross-check up to 12)
        #[arg(long, default_value_t = 12)]
        n_max: usize,
    },
    /// Compute the Anderson and variational bound pair per cluster size
    Table2 {
        /// Comma-separated cluster sizes
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,

        /// Optimizer settings as a JSON file
        #[arg(long)]
        config: Option<PathBuf>,

        /// Write rows plus manifest as JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the self-check suite
    Verify {
        /// Check depth
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
    },
    /// Dump the normalized Gram matrix of the pair products covering n sites
    Gram {
        /// Cluster size; must be even so pair products can cover every site
        #[arg(long)]
        n: usize,

        /// Write members plus matrix as JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the Gram rank of the invariant set against the predicted rank
    Deps {
        /// Cluster size
        #[arg(long)]
        n: usize,

        /// Write the report as JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

impl From<LevelArg> for VerifyLevel {
    fn from(level: LevelArg) -> Self {
        match level {
            LevelArg::Quick => VerifyLevel::Quick,
            LevelArg::Full => VerifyLevel::Full,
        }
    }
}

/// Restore the default SIGPIPE disposition so `spinlb table1 | head` ends
/// quietly instead of panicking when the reader closes the pipe.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    env_logger::init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Table1 { n_max } => commands::table1(n_max),
        Command::Table2 {
            ref sizes,
            ref config,
            ref out,
        } => commands::table2(
            sizes,
            config.as_deref(),
            out.as_deref(),
            cli.seed,
            cli.restarts,
            &cli.cache_dir,
        ),
        Command::Verify { level } => commands::verify(level.into()),
        Command::Gram { n, ref out } => commands::gram(n, out.as_deref(), cli.seed),
        Command::Deps { n, ref out } => commands::deps(n, out.as_deref(), cli.seed),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
