//! Command-line front end: config files, CSV data sets and the
//! subcommands.

pub mod args;
pub mod commands;
pub mod config;
pub mod dataset;
pub mod error;
pub mod relink;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use args::{Cli, Command};
pub use config::CliConfig;
pub use dataset::{load_csv, write_csv, TabularDataset};
pub use error::{CliError, Result};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "SPARSEPERM_THREADS";

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = v.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        CliError::Config(format!("{THREADS_ENV} = {v:?} is not a positive integer"))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot start {threads} threads: {e}")))
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let cfg = CliConfig::load_optional(cli.config.as_deref())?;
    commands::dispatch(&cli.command, cfg, out)
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I, out: &mut dyn Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Config(e.to_string()))?;
    run(&cli, out)
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = configure_threads().and_then(|()| {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        run(&cli, &mut lock)
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
