//! `demo` subcommand: regenerates the demonstration datasets behind the
//! five bundled figures as plot-ready CSV files.
//!
//! 1. small Haupt-Schabe sample: true, empirical and constrained CDFs
//!    plus the two odds rates;
//! 2. the standardized MSE study at its default settings;
//! 3. a small beta-type-II sample smoothed with bandwidth 1/4;
//! 4. the power study at its default settings;
//! 5. piecewise-odds samples at n = 50 and n = 100: normalized transform
//!    CDF vs. its convex minorant, and empirical vs. constrained CDF.

use std::path::{Path, PathBuf};

use clap::Args;
use iorstat::harness::{
    mse_study, mse_table_csv, power_study, power_table_csv, MseConfig, PowerConfig,
};
use iorstat::{
    empirical_cdf, fit_ior, gcm, invert_pl, normalize_ttt, ttt_inverse, DistributionSpec,
    KernelSpec, RandomStream, SmoothedIor,
};

use crate::{input_error, CliResult, DEFAULT_SEED};

/// Derivation-path tag for demo sampling streams.
const PATH_DEMO: u64 = 4;

#[derive(Args)]
pub struct DemoArgs {
    /// Figure number, 1 through 5.
    #[arg(long)]
    figure: u32,
    /// Master seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

pub fn run(args: DemoArgs) -> CliResult<()> {
    std::fs::create_dir_all(&args.out)
        .map_err(|e| input_error(format!("cannot create {}: {e}", args.out.display())))?;
    println!(
        "# resolved-config: figure={}, seed={}, out={}",
        args.figure,
        args.seed,
        args.out.display()
    );
    match args.figure {
        1 => figure1(args.seed, &args.out),
        2 => figure2(args.seed, &args.out),
        3 => figure3(args.seed, &args.out),
        4 => figure4(args.seed, &args.out),
        5 => figure5(args.seed, &args.out),
        other => Err(input_error(format!(
            "unknown figure {other}; expected 1..=5"
        ))),
    }
}

fn write_file(dir: &Path, name: &str, content: &str) -> CliResult<()> {
    let path = dir.join(name);
    std::fs::write(&path, content)
        .map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn fmt_res(v: iorstat::Result<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(|i| lo + step * i as f64).collect()
}

/// Small sample from a bathtub family inside the constrained class.
fn figure1(seed: u64, out: &Path) -> CliResult<()> {
    let spec = DistributionSpec::haupt_schabe(0.6).unwrap();
    let mut stream = RandomStream::derive(seed, &[PATH_DEMO, 1, 0]);
    let sample = spec.sample(20, &mut stream)?;
    let est = fit_ior(&sample)?;
    let ecdf = empirical_cdf(&sample);

    let mut grid = linspace(0.0, 1.0, 401);
    grid.extend(sample.values().iter().copied());
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut csv = String::from("x,F_true,F_emp,F_ior,lambda_true,lambda_ior\n");
    for &x in &grid {
        csv.push_str(&format!(
            "{x},{},{},{},{},{}\n",
            spec.cdf(x)?,
            ecdf.eval(x),
            est.cdf(x),
            fmt_res(spec.odds_rate(x)),
            est.odds_rate(x),
        ));
    }
    write_file(out, "fig1.csv", &csv)
}

/// Standardized MSE study at default settings.
fn figure2(seed: u64, out: &Path) -> CliResult<()> {
    let config = MseConfig {
        families: vec![
            DistributionSpec::log_logistic(1.0).unwrap(),
            DistributionSpec::log_logistic(2.0).unwrap(),
            DistributionSpec::weibull(2.0).unwrap(),
            DistributionSpec::beta_type_ii(2.0, 3.0).unwrap(),
            DistributionSpec::haupt_schabe(0.6).unwrap(),
        ],
        sample_sizes: vec![10, 30, 50, 100],
        replications: 1000,
        percentiles: MseConfig::default_percentiles(),
        seed,
    };
    let rows = mse_study(&config)?;
    write_file(out, "fig2.csv", &mse_table_csv(&config, &rows))
}

/// Smoothed rate and density on a small beta-type-II sample, h = 1/4.
fn figure3(seed: u64, out: &Path) -> CliResult<()> {
    let spec = DistributionSpec::beta_type_ii(2.0, 3.0).unwrap();
    let mut stream = RandomStream::derive(seed, &[PATH_DEMO, 3, 0]);
    let sample = spec.sample(20, &mut stream)?;
    let est = fit_ior(&sample)?;
    let smoother = SmoothedIor::new(&est, KernelSpec::epanechnikov(0.25)?);

    let mut grid = linspace(0.0, est.top(), 401);
    grid.extend(sample.values().iter().copied());
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut csv =
        String::from("x,lambda_true,lambda_ior,lambda_smooth,f_true,f_ior,f_smooth\n");
    for &x in &grid {
        csv.push_str(&format!(
            "{x},{},{},{},{},{},{}\n",
            fmt_res(spec.odds_rate(x)),
            est.odds_rate(x),
            smoother.odds_rate(x),
            spec.pdf(x)?,
            fmt_res(est.pdf(x)),
            fmt_res(smoother.pdf(x)),
        ));
    }
    write_file(out, "fig3.csv", &csv)
}

/// Power study at default settings.
fn figure4(seed: u64, out: &Path) -> CliResult<()> {
    let config = PowerConfig {
        families: PowerConfig::default_families(),
        sample_sizes: vec![50, 100, 200],
        replications: 500,
        alpha: 0.1,
        calibration_replications: 10_000,
        seed,
    };
    let rows = power_study(&config)?;
    write_file(out, "fig4.csv", &power_table_csv(&config, &rows))
}

/// Piecewise-odds samples at both sizes: transform-space and CDF-space
/// views of the constrained-vs-unconstrained gap.
fn figure5(seed: u64, out: &Path) -> CliResult<()> {
    let spec = DistributionSpec::piecewise_odds(5.0, 1.0).unwrap();
    for (k, n) in [(0u64, 50usize), (1, 100)] {
        let mut stream = RandomStream::derive(seed, &[PATH_DEMO, 5, k]);
        let sample = spec.sample(n, &mut stream)?;

        // Normalized transform CDF and its convex minorant at the knots.
        let tbar = invert_pl(&normalize_ttt(&ttt_inverse(&sample))?)?;
        let hull = gcm(tbar.xs(), tbar.ys())?;
        let mut csv = String::from("u,T_bar,T_bar_cx\n");
        for (u, p) in tbar.knots() {
            csv.push_str(&format!("{u},{p},{}\n", hull.hull().eval(u)?));
        }
        write_file(out, &format!("fig5_ttt_n{n}.csv"), &csv)?;

        // Empirical vs constrained CDF.
        let est = fit_ior(&sample)?;
        let ecdf = empirical_cdf(&sample);
        let mut grid = linspace(0.0, est.top(), 301);
        grid.extend(sample.values().iter().copied());
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let mut csv = String::from("x,F_emp,F_ior\n");
        for &x in &grid {
            csv.push_str(&format!("{x},{},{}\n", ecdf.eval(x), est.cdf(x)));
        }
        write_file(out, &format!("fig5_cdf_n{n}.csv"), &csv)?;
    }
    Ok(())
}
