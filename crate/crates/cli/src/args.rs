use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use parisian_ruin::montecarlo::{Monitoring, Sampler};
use parisian_ruin::pickands::Estimator;

use crate::config::parse_flag;

#[derive(Debug, Parser)]
#[command(
    name = "parisian",
    version,
    about = "Parisian ruin of the Brownian risk model with force of interest"
)]
pub struct Cli {
    /// Flat key=value file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads. Results do not depend on it.
    #[arg(long, global = true, value_parser = parse_flag::<usize>)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo ruin probability for one reserve level.
    RuinProb(RuinProbArgs),
    /// Pickands-type constant (positive interest) or F(T) (zero interest).
    Constant(ConstantArgs),
    /// Monte Carlo against the asymptotic and exact formulas over several reserves.
    Compare(CompareArgs),
    /// Conditional law of the transformed ruin time against its limit.
    RuinTime(RuinTimeArgs),
    /// Runs the built-in invariant suites.
    Selftest,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Initial reserve.
    #[arg(long, value_parser = parse_flag::<f64>, allow_negative_numbers = true)]
    pub u: Option<f64>,
    /// Premium rate.
    #[arg(long, value_parser = parse_flag::<f64>)]
    pub c: Option<f64>,
    #[arg(long, value_parser = parse_flag::<f64>)]
    pub sigma: Option<f64>,
    /// Force of interest.
    #[arg(long, value_parser = parse_flag::<f64>)]
    pub delta: Option<f64>,
    /// Parisian window; 0 gives classical ruin.
    #[arg(long = "T", value_parser = parse_flag::<f64>)]
    pub t_window: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SimArgs {
    /// Horizon tolerance: residual standard deviation of the loss (positive interest).
    #[arg(long, value_parser = parse_flag::<f64>)]
    pub eps: Option<f64>,
    /// Explicit horizon; required in effect for zero interest (default 50).
    #[arg(long = "t-max", value_parser = parse_flag::<f64>)]
    pub t_max: Option<f64>,
    /// Grid step.
    #[arg(long, value_parser = parse_flag::<f64>)]
    pub h: Option<f64>,
    /// Grid steps; overrides --h.
    #[arg(long = "n-steps", value_parser = parse_flag::<usize>)]
    pub n_steps: Option<usize>,
    #[arg(long = "n-paths", value_parser = parse_flag::<usize>)]
    pub n_paths: Option<usize>,
    /// Defaults to $RUIN_SEED, then 1.
    #[arg(long, value_parser = parse_flag::<u64>)]
    pub seed: Option<u64>,
    /// plain | mean-shift
    #[arg(long, value_parser = parse_flag::<Sampler>)]
    pub sampler: Option<Sampler>,
    /// grid | bridge (bridge only for T = 0, the default there)
    #[arg(long, value_parser = parse_flag::<Monitoring>)]
    pub monitoring: Option<Monitoring>,
    #[arg(long = "conf-level", value_parser = parse_flag::<f64>)]
    pub conf_level: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ConstantSettings {
    #[arg(long, value_parser = parse_flag::<f64>)]
    pub a: Option<f64>,
    #[arg(long, value_parser = parse_flag::<f64>)]
    pub b: Option<f64>,
    /// First horizon of the ladder (the horizon of F for zero interest).
    #[arg(long, value_parser = parse_flag::<f64>)]
    pub lambda: Option<f64>,
    #[arg(long = "lambda-max", value_parser = parse_flag::<f64>)]
    pub lambda_max: Option<f64>,
    #[arg(long, value_parser = parse_flag::<f64>)]
    pub tol: Option<f64>,
    /// Outer grid step of the constant.
    #[arg(long = "t-step", value_parser = parse_flag::<f64>)]
    pub t_step: Option<f64>,
    #[arg(long = "n-grid-s", value_parser = parse_flag::<usize>)]
    pub n_grid_s: Option<usize>,
    #[arg(long = "n-reps", value_parser = parse_flag::<usize>)]
    pub n_reps: Option<usize>,
    /// direct | tilted
    #[arg(long, value_parser = parse_flag::<Estimator>)]
    pub estimator: Option<Estimator>,
    /// true | false
    #[arg(long, value_parser = parse_flag::<bool>)]
    pub extrapolate: Option<bool>,
}

#[derive(Debug, Args)]
pub struct RuinProbArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub sim: SimArgs,
    /// Writes OUT.csv and OUT.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstantArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub constant: ConstantSettings,
    #[arg(long, value_parser = parse_flag::<u64>)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub constant: ConstantSettings,
    /// Comma-separated reserve levels.
    #[arg(long = "u-values", value_parser = parse_flag::<f64>, value_delimiter = ',', allow_hyphen_values = true)]
    pub u_values: Option<Vec<f64>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RuinTimeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub constant: ConstantSettings,
    /// Comma-separated abscissae of the transformed ruin time.
    #[arg(long = "x-values", value_parser = parse_flag::<f64>, value_delimiter = ',', allow_hyphen_values = true)]
    pub x_values: Option<Vec<f64>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
