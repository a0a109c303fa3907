//! `simulate-mse` and `simulate-power` subcommands.
//!
//! Options resolve in three layers: built-in defaults, then a flat
//! `key=value` config file, then command-line flags.

use std::path::PathBuf;

use clap::Args;
use iorstat::harness::{
    mse_study, mse_table_csv, power_study, power_table_csv, MseConfig, PowerConfig,
};
use iorstat::DistributionSpec;

use crate::config::KeyValues;
use crate::{write_output, CliResult, DEFAULT_SEED};

fn default_mse_families() -> Vec<DistributionSpec> {
    vec![
        DistributionSpec::log_logistic(1.0).unwrap(),
        DistributionSpec::log_logistic(2.0).unwrap(),
        DistributionSpec::weibull(2.0).unwrap(),
        DistributionSpec::beta_type_ii(2.0, 3.0).unwrap(),
        DistributionSpec::haupt_schabe(0.6).unwrap(),
    ]
}

fn parse_specs(texts: &[String]) -> CliResult<Vec<DistributionSpec>> {
    texts
        .iter()
        .map(|t| t.parse::<DistributionSpec>().map_err(Into::into))
        .collect()
}

#[derive(Args)]
pub struct SimulateMseArgs {
    /// Flat key=value config file (keys: families, sizes, reps,
    /// percentiles, seed); flags win over file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Family spec strings, space separated, e.g. `w:2 b2:2,3`.
    #[arg(long, num_args = 1..)]
    families: Option<Vec<String>>,
    /// Sample sizes.
    #[arg(long, num_args = 1..)]
    sizes: Option<Vec<usize>>,
    /// Replications per cell.
    #[arg(long)]
    reps: Option<usize>,
    /// Evaluation percentiles in (0, 1); defaults to 0.01..=0.99.
    #[arg(long, num_args = 1..)]
    percentiles: Option<Vec<f64>>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run_mse(args: SimulateMseArgs) -> CliResult<()> {
    let file = match &args.config {
        Some(path) => KeyValues::load(path)?,
        None => KeyValues::default(),
    };
    let families = match args.families {
        Some(texts) => parse_specs(&texts)?,
        None => match file.get_list::<String>("families")? {
            Some(texts) => parse_specs(&texts)?,
            None => default_mse_families(),
        },
    };
    let config = MseConfig {
        families,
        sample_sizes: args
            .sizes
            .or(file.get_list("sizes")?)
            .unwrap_or_else(|| vec![10, 30, 50, 100]),
        replications: args.reps.or(file.get_parsed("reps")?).unwrap_or(1000),
        percentiles: args
            .percentiles
            .or(file.get_list("percentiles")?)
            .unwrap_or_else(MseConfig::default_percentiles),
        seed: args.seed.or(file.get_parsed("seed")?).unwrap_or(DEFAULT_SEED),
    };
    eprintln!("# resolved-config: {}", config.canonical());
    let rows = mse_study(&config)?;
    write_output(args.out.as_deref(), &mse_table_csv(&config, &rows))
}

#[derive(Args)]
pub struct SimulatePowerArgs {
    /// Flat key=value config file (keys: families, sizes, reps, alpha,
    /// calibration_reps, seed); flags win over file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Family spec strings, space separated.
    #[arg(long, num_args = 1..)]
    families: Option<Vec<String>>,
    /// Sample sizes.
    #[arg(long, num_args = 1..)]
    sizes: Option<Vec<usize>>,
    /// Replications per cell.
    #[arg(long)]
    reps: Option<usize>,
    /// Significance level.
    #[arg(long)]
    alpha: Option<f64>,
    /// Monte Carlo replications behind each critical value.
    #[arg(long = "calib-reps")]
    calib_reps: Option<usize>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run_power(args: SimulatePowerArgs) -> CliResult<()> {
    let file = match &args.config {
        Some(path) => KeyValues::load(path)?,
        None => KeyValues::default(),
    };
    let families = match args.families {
        Some(texts) => parse_specs(&texts)?,
        None => match file.get_list::<String>("families")? {
            Some(texts) => parse_specs(&texts)?,
            None => PowerConfig::default_families(),
        },
    };
    let config = PowerConfig {
        families,
        sample_sizes: args
            .sizes
            .or(file.get_list("sizes")?)
            .unwrap_or_else(|| vec![50, 100, 200]),
        replications: args.reps.or(file.get_parsed("reps")?).unwrap_or(500),
        alpha: args.alpha.or(file.get_parsed("alpha")?).unwrap_or(0.1),
        calibration_replications: args
            .calib_reps
            .or(file.get_parsed("calibration_reps")?)
            .unwrap_or(10_000),
        seed: args.seed.or(file.get_parsed("seed")?).unwrap_or(DEFAULT_SEED),
    };
    eprintln!("# resolved-config: {}", config.canonical());
    let rows = power_study(&config)?;
    write_output(args.out.as_deref(), &power_table_csv(&config, &rows))
}
