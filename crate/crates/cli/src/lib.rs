//! The `gramcomp` command line: one subcommand per pipeline stage, each
//! reading and writing plain files.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use config::PipelineConfig;
pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "gramcomp", version, about = "Surprisal, syntax and dimensionality measures for parsed text")]
pub struct Cli {
    /// JSON pipeline configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for randomized diagnostics; overrides the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for outputs; overrides the config (default: current directory).
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frequency-table utilities.
    Freq {
        #[command(subcommand)]
        action: FreqCommand,
    },
    /// Per-document surprisal, tree and dimensionality metrics.
    Analyze(commands::analyze::AnalyzeArgs),
    /// Friedman test and post-hoc comparisons across surprisal conditions.
    Compare(commands::compare::CompareArgs),
    /// Spearman correlations per language with FDR control.
    Correlate(commands::correlate::CorrelateArgs),
    /// Random-effects meta-analysis of per-language correlations.
    Meta(commands::meta::MetaArgs),
}

#[derive(Debug, Subcommand)]
pub enum FreqCommand {
    /// Count tokens of a corpus into a frequency table.
    Build(commands::freq::FreqBuildArgs),
}

/// Resolved global settings shared by the subcommands.
#[derive(Debug, Clone)]
pub struct Settings {
    pub config: Option<PipelineConfig>,
    pub output_dir: PathBuf,
    pub seed: u64,
}

impl Settings {
    fn from_cli(cli: &Cli) -> Result<Self> {
        let config = cli.config.as_deref().map(PipelineConfig::load).transpose()?;
        let output_dir = cli
            .output_dir
            .clone()
            .or_else(|| config.as_ref().and_then(|c| c.output_dir.clone()))
            .unwrap_or_else(|| PathBuf::from("."));
        let seed = cli.seed.or(config.as_ref().map(|c| c.seed)).unwrap_or(0);
        Ok(Self {
            config,
            output_dir,
            seed,
        })
    }

    /// The output directory, created if needed.
    pub fn out_dir(&self) -> Result<&Path> {
        std::fs::create_dir_all(&self.output_dir).map_err(|e| CliError::io(&self.output_dir, e))?;
        Ok(&self.output_dir)
    }

    pub fn out_path(&self, name: &str) -> Result<PathBuf> {
        Ok(self.out_dir()?.join(name))
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let settings = Settings::from_cli(&cli)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Schema(format!("cannot start worker pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Freq {
            action: FreqCommand::Build(args),
        } => commands::freq::run(args, &settings),
        Command::Analyze(args) => commands::analyze::run(args, &settings),
        Command::Compare(args) => commands::compare::run(args, &settings),
        Command::Correlate(args) => commands::correlate::run(args, &settings),
        Command::Meta(args) => commands::meta::run(args, &settings),
    })
}
