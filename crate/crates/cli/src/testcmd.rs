//! `test` subcommand: run one hypothesis test on a sample file.

use std::path::PathBuf;

use clap::Args;
use iorstat::{run_test, CalibrationSource, CriticalValueTable, TestKind};

use crate::input::read_sample_file;
use crate::{input_error, CliResult, DEFAULT_SEED};

#[derive(Args)]
pub struct TestArgs {
    /// Sample file: one nonnegative decimal per line.
    #[arg(long)]
    input: PathBuf,
    /// Statistic: kt (transform gap) or ks (CDF distance).
    #[arg(long)]
    method: TestKind,
    /// Significance level.
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// Monte Carlo replications behind the critical value.
    #[arg(long, default_value_t = 10_000)]
    reps: usize,
    /// Master seed for the calibration streams.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Cached critical-value table; must match method, n, reps and seed
    /// exactly.
    #[arg(long)]
    table: Option<PathBuf>,
}

pub fn run(args: TestArgs) -> CliResult<()> {
    let sample = read_sample_file(&args.input)?;
    if sample.len() < 2 {
        return Err(input_error(format!(
            "{}: need at least two observations, got {}",
            args.input.display(),
            sample.len()
        )));
    }
    let table = match &args.table {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
            Some(CriticalValueTable::parse_csv(&text)?)
        }
        None => None,
    };
    println!(
        "# resolved-config: method={}, alpha={}, reps={}, seed={}, table={}, n={}",
        args.method,
        args.alpha,
        args.reps,
        args.seed,
        args.table
            .as_ref()
            .map_or("none".to_string(), |p| p.display().to_string()),
        sample.len()
    );
    let report = run_test(
        &sample,
        args.method,
        args.alpha,
        args.reps,
        args.seed,
        table.as_ref(),
    )?;
    let p_text = report
        .p_value
        .map_or("NA".to_string(), |p| p.to_string());
    println!("test: {}", report.test);
    println!("n: {}", report.n);
    println!("statistic: {}", report.statistic);
    println!(
        "critical value (alpha={}): {}",
        report.alpha, report.critical_value
    );
    println!("p-value: {p_text}");
    println!(
        "calibration: M={}, seed={}, source={}",
        report.calibration.replications,
        report.calibration.seed,
        match report.calibration.source {
            CalibrationSource::Fresh => "fresh",
            CalibrationSource::CachedTable => "cached-table",
        }
    );
    println!(
        "decision: {}",
        if report.reject {
            "reject the increasing-odds-rate null"
        } else {
            "do not reject"
        }
    );
    println!(
        "{},{},{},{}",
        report.statistic, report.critical_value, p_text, report.reject
    );
    Ok(())
}
