//! The `vsarena` command line: play episodes, run evaluation protocols,
//! build reasoning datasets, dump rendered frames and run the invariant suite.

pub mod commands;
pub mod config;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
    #[error("verification failed:\n{0}")]
    Verify(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
            CliError::Verify(_) => 4,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "vsarena", version, about = "Multi-agent game arena for vision-language agents")]
pub struct Cli {
    /// TOML file with defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory that receives every output file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Parallel episode workers.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Observation mode passed to remote agents: multimodal or text-only.
    #[arg(long, global = true)]
    pub mode: Option<String>,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Play episodes between the given agents and write their trajectories.
    Play(PlayArgs),
    /// Run an environment's evaluation protocol for one policy.
    Eval(EvalArgs),
    /// Generate or score next-action prediction datasets.
    #[command(subcommand)]
    Dataset(DatasetCommand),
    /// Play one episode and dump every step's frame and text observation.
    Render(RenderArgs),
    /// Run the invariant suite of every module.
    Verify(VerifyArgs),
    /// List the registered environments.
    Envs,
}

#[derive(Debug, Args)]
pub struct PlayArgs {
    #[arg(long)]
    pub env: Option<String>,
    /// Comma-separated agent specs, one per seat.
    #[arg(long)]
    pub agents: Option<String>,
    #[arg(long)]
    pub games: Option<usize>,
    /// Also dump per-step frames.
    #[arg(long)]
    pub frames: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Environment name, or `all` for the eight-game suite.
    #[arg(long)]
    pub env: Option<String>,
    #[arg(long)]
    pub agent: Option<String>,
    /// Opponent spec, or `self` for self-play; defaults to the standard one.
    #[arg(long)]
    pub opponent: Option<String>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub episodes: Option<usize>,
    /// Episodes used for references computed by simulation.
    #[arg(long)]
    pub reference_episodes: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum DatasetCommand {
    /// Build the 400-sample dataset for an environment (or `all`).
    Gen {
        #[arg(long)]
        env: Option<String>,
        /// Remote agent that answers every sample; its predictions are scored.
        #[arg(long)]
        predictor: Option<String>,
    },
    /// Score a predictions file against a generated dataset.
    Score {
        #[arg(long)]
        env: Option<String>,
        /// JSONL of `{"id", "prediction"}` objects, or one token per line.
        #[arg(long)]
        pred: PathBuf,
        /// Dataset directory; defaults to `<out>/datasets/<env>`.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub env: Option<String>,
    /// Comma-separated agent specs; random in every seat by default.
    #[arg(long)]
    pub agents: Option<String>,
    /// Seat whose observations are rendered.
    #[arg(long)]
    pub viewer: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Small sample sizes for a fast smoke run.
    #[arg(long)]
    pub quick: bool,
    #[arg(long)]
    pub probes: Option<usize>,
    #[arg(long)]
    pub hanabi_episodes: Option<usize>,
    #[arg(long)]
    pub equivalence_states: Option<usize>,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) if !p.exists() => return Err(CliError::Config(format!("--config {}: no such file", p.display()))),
        Some(p) => config::FileConfig::load(p)?,
        None => config::FileConfig::default(),
    };
    let ctx = commands::Context::new(&cli, &file)?;
    match cli.command {
        Command::Play(a) => commands::play(&ctx, &a, &file.play),
        Command::Eval(a) => commands::eval(&ctx, &a, &file.eval),
        Command::Dataset(DatasetCommand::Gen { env, predictor }) => commands::dataset_gen(&ctx, env, predictor, &file.dataset),
        Command::Dataset(DatasetCommand::Score { env, pred, dir }) => commands::dataset_score(&ctx, env, &pred, dir, &file.dataset),
        Command::Render(a) => commands::render(&ctx, &a, &file.render),
        Command::Verify(a) => commands::verify(&ctx, &a, &file.verify),
        Command::Envs => commands::envs(),
    }
}
