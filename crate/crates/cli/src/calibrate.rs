//! `calibrate` subcommand: simulate critical values and write a table.

use std::path::PathBuf;

use clap::Args;
use iorstat::{calibrate, CriticalValueTable, TestKind};

use crate::{config_error, input_error, CliResult, DEFAULT_SEED};

#[derive(Args)]
pub struct CalibrateArgs {
    /// Statistic: kt or ks.
    #[arg(long)]
    method: TestKind,
    /// Sample size the table is valid for.
    #[arg(long)]
    n: usize,
    /// Monte Carlo replications.
    #[arg(long, default_value_t = 10_000)]
    reps: usize,
    /// Master seed for the calibration streams.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Comma-separated significance levels, e.g. 0.05,0.1.
    #[arg(long, value_delimiter = ',', required = true)]
    alphas: Vec<f64>,
    /// Output table file.
    #[arg(long)]
    out: PathBuf,
    /// Overwrite an existing output file.
    #[arg(long)]
    force: bool,
}

pub fn run(args: CalibrateArgs) -> CliResult<()> {
    if args.out.exists() && !args.force {
        return Err(config_error(format!(
            "{} already exists; pass --force to overwrite",
            args.out.display()
        )));
    }
    println!(
        "# resolved-config: method={}, n={}, reps={}, seed={}, alphas={:?}, out={}",
        args.method,
        args.n,
        args.reps,
        args.seed,
        args.alphas,
        args.out.display()
    );
    let cal = calibrate(args.method, args.n, args.reps, args.seed)?;
    let table = CriticalValueTable::from_calibration(&cal, &args.alphas)?;
    std::fs::write(&args.out, table.to_csv_string())
        .map_err(|e| input_error(format!("cannot write {}: {e}", args.out.display())))?;
    for entry in table.entries() {
        println!(
            "alpha={} critical_value={}",
            entry.alpha, entry.critical_value
        );
    }
    println!("wrote {}", args.out.display());
    Ok(())
}
