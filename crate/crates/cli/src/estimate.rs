//! `estimate` subcommand: fit and export the constrained estimators.

use std::path::PathBuf;

use clap::Args;
use iorstat::{fit_ior, IorEstimate, KernelSpec, SmoothedIor};

use crate::input::{parse_grid, read_sample_file};
use crate::{input_error, write_output, CliResult};

#[derive(Args)]
pub struct EstimateArgs {
    /// Sample file: one nonnegative decimal per line, `#` comments allowed.
    #[arg(long)]
    input: PathBuf,
    /// Bandwidth for the kernel-smoothed estimators; adds the smoothed
    /// columns to the output.
    #[arg(long, value_name = "H")]
    smooth: Option<f64>,
    /// Extra evaluation grid `start:stop:count` merged into the knot rows.
    #[arg(long, value_name = "SPEC")]
    grid: Option<String>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: EstimateArgs) -> CliResult<()> {
    let sample = read_sample_file(&args.input)?;
    if sample.len() < 2 {
        return Err(input_error(format!(
            "{}: need at least two observations, got {}",
            args.input.display(),
            sample.len()
        )));
    }
    let grid = match &args.grid {
        Some(spec) => parse_grid(spec)?,
        None => Vec::new(),
    };
    let est = fit_ior(&sample)?;
    let smoother = match args.smooth {
        Some(h) => Some(SmoothedIor::new(&est, KernelSpec::epanechnikov(h)?)),
        None => None,
    };

    let mut out = format!(
        "# resolved-config: input={}, n={}, smooth={}, grid={}\n",
        args.input.display(),
        sample.len(),
        args.smooth.map_or("none".to_string(), |h| h.to_string()),
        args.grid.as_deref().unwrap_or("none"),
    );
    out.push_str(&render_estimate_csv(&est, smoother.as_ref(), &grid));
    write_output(args.out.as_deref(), &out)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

/// Rows at 0, the distinct observations and the grid points, with the
/// left limits at the largest observation followed by a final atom row
/// whose density column is empty.
pub fn render_estimate_csv(
    est: &IorEstimate,
    smoother: Option<&SmoothedIor<'_>>,
    grid: &[f64],
) -> String {
    let top = est.top();
    let mut xs: Vec<f64> = vec![0.0];
    xs.extend(est.observations().iter().copied());
    xs.extend(grid.iter().copied().filter(|&g| g < top));
    xs.sort_by(f64::total_cmp);
    xs.dedup();

    let mut out = String::from("x,lambda,Lambda,F,f");
    if smoother.is_some() {
        out.push_str(",lambda_s,Lambda_s,F_s,f_s");
    }
    out.push('\n');

    let mut push_row =
        |x: f64, lambda: f64, capital: f64, cdf: f64, pdf: Option<f64>| {
            out.push_str(&format!("{x},{lambda},{capital},{cdf},{}", fmt_opt(pdf)));
            if let Some(s) = smoother {
                out.push_str(&format!(
                    ",{},{},{},{}",
                    s.odds_rate(x),
                    s.odds(x),
                    s.cdf(x),
                    fmt_opt(s.pdf(x).ok())
                ));
            }
            out.push('\n');
        };

    for &x in &xs {
        if x < top {
            push_row(x, est.odds_rate(x), est.odds(x), est.cdf(x), est.pdf(x).ok());
        } else {
            // Left limits at the atom.
            let lambda = est.lambda_step().eval_left(top);
            let capital = est.odds_left(top);
            let cdf = est.cdf_left(top);
            let pdf = if lambda.is_finite() {
                Some(lambda / ((1.0 + capital) * (1.0 + capital)))
            } else {
                None
            };
            push_row(x, lambda, capital, cdf, pdf);
        }
    }
    // The atom itself.
    push_row(top, f64::INFINITY, f64::INFINITY, 1.0, None);
    out
}
