//! Command-line front end: `analyze`, `trajectory` and `synth`.

use std::ffi::OsString;
use std::path::PathBuf;

use chrono::{DateTime, Utc};
use clap::{Args, Parser, Subcommand};
use netroles::metrics::{Execution, PathMode};
use netroles::synth::PlantSpec;
use thiserror::Error;

pub mod commands;
pub mod config;

pub use commands::{cmd_analyze, cmd_synth, cmd_trajectory};
pub use config::{RunConfig, WindowMode};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Config(_) | CliError::Output(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "netroles",
    version,
    about = "Central-user role analysis of temporal interaction networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze every window and write reports.
    Analyze(RunArgs),
    /// Follow one user's rank and betweenness across windows.
    Trajectory(TrajectoryArgs),
    /// Generate a synthetic network with planted roles.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Interaction CSV file; repeatable.
    #[arg(long = "input", short = 'i')]
    pub inputs: Vec<PathBuf>,
    /// calendar-month or duration:<days>
    #[arg(long, default_value = "calendar-month")]
    pub window: WindowMode,
    #[arg(long, requires = "span_end")]
    pub span_start: Option<DateTime<Utc>>,
    #[arg(long, requires = "span_start")]
    pub span_end: Option<DateTime<Utc>>,
    #[arg(long)]
    pub top_k: Option<usize>,
    /// Force this user as the conversation starter.
    #[arg(long)]
    pub seed_user: Option<String>,
    /// TOML file with role thresholds.
    #[arg(long)]
    pub thresholds: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub louvain_seed: u64,
    /// Betweenness used for ranking: undirected or directed.
    #[arg(long, default_value = "undirected")]
    pub centrality: PathMode,
    /// Analyze windows one after another.
    #[arg(long)]
    pub serial: bool,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub gexf: bool,
    #[arg(long)]
    pub dot: bool,
    /// Abort on the first malformed row.
    #[arg(long)]
    pub strict: bool,
    /// TOML run configuration; its keys override the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrajectoryArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long)]
    pub user: String,
    /// Read windows from an earlier reports.json instead of re-analyzing.
    #[arg(long)]
    pub reports: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 50)]
    pub n_isolates: usize,
    #[arg(long, default_value_t = 3)]
    pub n_influencers: usize,
    #[arg(long, default_value_t = 20)]
    pub engager_out: usize,
    #[arg(long, default_value_t = 2)]
    pub builder_links: usize,
    #[arg(long)]
    pub no_bridge: bool,
    #[arg(long, default_value_t = 3)]
    pub months: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// 1-based month from which the starter is silent.
    #[arg(long)]
    pub starter_dropout_month: Option<usize>,
    /// Any instant in the first month.
    #[arg(long)]
    pub start: Option<DateTime<Utc>>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

impl SynthArgs {
    pub fn spec(&self) -> PlantSpec {
        let defaults = PlantSpec::default();
        PlantSpec {
            n_isolates: self.n_isolates,
            n_influencers: self.n_influencers,
            engager_out: self.engager_out,
            builder_links: self.builder_links,
            plant_bridge: !self.no_bridge,
            months: self.months,
            seed: self.seed,
            starter_dropout_month: self.starter_dropout_month,
            start: self.start.unwrap_or(defaults.start),
        }
    }
}

impl RunArgs {
    /// Defaults, then flags, then the thresholds file, then `--top-k`, then
    /// the configuration file.
    pub fn to_config(&self) -> Result<RunConfig, CliError> {
        let mut c = RunConfig {
            inputs: self.inputs.clone(),
            window: self.window,
            span: config::parse_span(self.span_start, self.span_end)?,
            louvain_seed: self.louvain_seed,
            centrality: self.centrality,
            execution: if self.serial {
                Execution::Serial
            } else {
                Execution::Parallel
            },
            out_dir: self.out.clone(),
            strict: self.strict,
            ..RunConfig::default()
        };
        c.exports.gexf = self.gexf;
        c.exports.dot = self.dot;
        if let Some(path) = &self.thresholds {
            c.thresholds = config::load_thresholds(path)?;
        }
        if let Some(k) = self.top_k {
            c.thresholds.top_k = k;
        }
        if let Some(u) = &self.seed_user {
            c.seed_user = Some(config::parse_user(u)?);
        }
        if let Some(path) = &self.config {
            c.apply_file(path)?;
        }
        Ok(c)
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze(args) => {
            let written = cmd_analyze(&args.to_config()?)?;
            log::info!("wrote {} files", written.len());
        }
        Command::Trajectory(args) => {
            let config = args.run.to_config()?;
            let user = config::parse_user(&args.user)?;
            let path = cmd_trajectory(&config, &user, args.reports.as_deref())?;
            log::info!("wrote {}", path.display());
        }
        Command::Synth(args) => {
            let written = cmd_synth(&args.spec(), &args.out)?;
            log::info!("wrote {} files", written.len());
        }
    }
    Ok(())
}

/// Parses arguments and runs; returns the process exit status.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("netroles: {e}");
            e.exit_code()
        }
    }
}
