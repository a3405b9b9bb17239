//! `qnfl`: generate structured training sets, train circuits on them, and
//! sweep risk-vs-bound experiments.

mod commands;
mod experiment;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(name = "qnfl", version, about, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a training set and write it as JSON.
    Gen(commands::GenArgs),
    /// Train the layered ansatz on a stored training set.
    Train(commands::TrainArgs),
    /// Evaluate risk lower bounds on a (d, r, t) grid.
    Bounds(commands::BoundsArgs),
    /// Report Schmidt ranks, OPR and linear independence of a stored set.
    Check(commands::CheckArgs),
    /// Eigenphases of U†V seen by each training input.
    Phases(commands::PhasesArgs),
    /// Varying Schmidt rank sweep.
    Exp1(ExpArgs),
    /// Pairwise orthogonal inputs, r = d / t.
    Exp2(ExpArgs),
    /// Inputs linearly dependent in the X register.
    Exp3(ExpArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct ExpArgs {
    /// JSON experiment config; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub qubits: Option<usize>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub layers: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub t_list: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub rbar_list: Option<Vec<usize>>,
    /// Hold the rank fixed across t instead of r = d / t.
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub target_loss: Option<f64>,
    /// Train every instance for exactly max-iters steps.
    #[arg(long)]
    pub fixed_iterations: bool,
    /// Worker threads (default: logical cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Format of the per-cell summary file.
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Train(a) => commands::train(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Check(a) => commands::check(a),
        Command::Phases(a) => commands::phases(a),
        Command::Exp1(a) => experiment::run(qnfl_core::exper::Experiment::VaryingRank, a),
        Command::Exp2(a) => experiment::run(qnfl_core::exper::Experiment::Orthogonal, a),
        Command::Exp3(a) => experiment::run(qnfl_core::exper::Experiment::LinDep, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<commands::UsageError>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
