//! Command-line scenario runner: each subcommand reads a TOML config and
//! writes one CSV table.

pub mod commands;
pub mod config;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use commands::Table;
pub use config::Config;

#[derive(Debug, Parser)]
#[command(name = "erasure", version, about = "Optimal quantum erasure calculations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output CSV path (stdout if omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads; overrides ERASURE_THREADS.
    #[arg(long, global = true, env = "ERASURE_THREADS")]
    pub threads: Option<usize>,

    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Single-context erasure report.
    Optimize,
    /// Heat/error tradeoff curve.
    Tradeoff,
    /// Excess and erasure probability over a (size, β) grid.
    Sweep,
    /// Erasure under dephasing noise.
    Dephase,
    /// Closed-form limits.
    Closedform,
    /// Auxiliary-system and thermal-subsystem scenarios.
    Beyond,
    /// Compare optimised plans against exhaustive search.
    Oracle,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Numeric(crate::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        if e.is_numeric_guard() {
            CliError::Numeric(e)
        } else {
            // Everything else traces back to a value in the config.
            CliError::Config(e.to_string())
        }
    }
}

pub fn load_config(cli: &Cli) -> Result<Config, CliError> {
    match &cli.config {
        None => Ok(Config::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            config::parse(&text).map_err(CliError::Config)
        }
    }
}

/// Runs one subcommand on a parsed config.
pub fn run_command(command: Command, cfg: &Config, seed: u64) -> Result<Table, CliError> {
    Ok(match command {
        Command::Optimize => commands::optimize(cfg)?,
        Command::Tradeoff => commands::tradeoff(cfg)?,
        Command::Sweep => commands::sweep(cfg)?,
        Command::Dephase => commands::dephase(cfg)?,
        Command::Closedform => commands::closedform(cfg)?,
        Command::Beyond => commands::beyond(cfg)?,
        Command::Oracle => commands::oracle(cfg, seed)?,
    })
}

/// Loads the config, runs the subcommand on a dedicated thread pool and
/// writes the CSV.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Config(format!("threads: {e}")))?;
    let table = pool.install(|| run_command(cli.command, &cfg, cli.seed))?;
    let csv = table.to_csv();
    match &cli.out {
        Some(p) => std::fs::write(p, csv)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(csv.as_bytes())?;
        }
    }
    if !cli.quiet {
        eprintln!("{} rows", table.len());
    }
    Ok(())
}

/// Process exit code for a run.
pub fn main_with(cli: &Cli) -> i32 {
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
