//! The shape-constrained estimators: odds-rate step estimator, odds
//! function, CDF and density.
//!
//! The rate on each inter-observation interval is the reciprocal of the
//! right slope of the least concave majorant of the empirical
//! total-time-on-test transform; integrating it gives a convex odds
//! function, and mapping through `t / (1 + t)` gives the CDF. The CDF is
//! absolutely continuous below the largest observation and puts an atom
//! there.

use crate::error::{Error, Result};
use crate::geometry::lcm;
use crate::ttt::{ttt_inverse, KahanSum, PiecewiseLinearFunction, SortedSample, StepFunction};

/// Constrained estimate fitted to a sample.
///
/// Immutable after construction; evaluation methods are safe to share
/// across threads.
#[derive(Debug, Clone)]
pub struct IorEstimate {
    observations: Vec<f64>,
    /// Odds-rate step: nondecreasing, `+inf` from the largest observation.
    lambda: StepFunction,
    /// Odds function on `[0, top]`; ordinate at `top` is the left limit.
    /// `None` only for the fully degenerate all-zero sample.
    odds_fn: Option<PiecewiseLinearFunction>,
    top: f64,
    jump_mass: f64,
}

/// Fits the increasing-odds-rate estimate.
///
/// Samples of size one (and all-zero samples) yield the degenerate
/// estimate whose CDF is the indicator of `[max, inf)`.
pub fn fit_ior(sample: &SortedSample) -> Result<IorEstimate> {
    let n = sample.len();
    let values = sample.values().to_vec();
    let top = *values.last().unwrap();

    if n == 1 || top == 0.0 {
        let odds_fn = if top > 0.0 {
            Some(PiecewiseLinearFunction::new(
                vec![0.0, top],
                vec![0.0, 0.0],
            )?)
        } else {
            None
        };
        return Ok(IorEstimate {
            observations: values,
            lambda: StepFunction::new(0.0, vec![top], vec![f64::INFINITY])?,
            odds_fn,
            top,
            jump_mass: 1.0,
        });
    }

    let t_inv = ttt_inverse(sample);
    let hull = lcm(t_inv.xs(), t_inv.ys())?;

    // Rate on the interval [X_(i), X_(i+1)) is the reciprocal of the hull
    // slope over [i/n, (i+1)/n); hull segments cover runs of intervals.
    let support = hull.support_indices();
    let hull_ys = hull.hull().ys();
    let nf = n as f64;
    let mut rates = vec![0.0; n];
    for (seg, w) in support.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let slope = (hull_ys[seg + 1] - hull_ys[seg]) / ((b - a) as f64 / nf);
        let rate = 1.0 / slope;
        for r in rates.iter_mut().take(b).skip(a) {
            *r = rate;
        }
    }

    // Walk the inter-observation intervals, skipping zero-length ones
    // (ties), merging equal-rate runs into the step function and
    // accumulating the odds function at the distinct observations.
    let mut step_bps: Vec<f64> = Vec::new();
    let mut step_vals: Vec<f64> = Vec::new();
    let mut odds_xs: Vec<f64> = vec![0.0];
    let mut odds_ys: Vec<f64> = vec![0.0];
    let mut acc = KahanSum::new();
    for (i, rate) in rates.iter().enumerate() {
        let lo = if i == 0 { 0.0 } else { values[i - 1] };
        let hi = values[i];
        if hi <= lo {
            continue;
        }
        if step_vals.last() != Some(rate) {
            step_bps.push(lo);
            step_vals.push(*rate);
        }
        acc.add(rate * (hi - lo));
        odds_xs.push(hi);
        odds_ys.push(acc.value());
    }
    step_bps.push(top);
    step_vals.push(f64::INFINITY);

    let odds_at_top = acc.value();
    Ok(IorEstimate {
        observations: values,
        lambda: StepFunction::new(0.0, step_bps, step_vals)?,
        odds_fn: Some(PiecewiseLinearFunction::new(odds_xs, odds_ys)?),
        top,
        jump_mass: 1.0 / (1.0 + odds_at_top),
    })
}

impl IorEstimate {
    /// The fitted sample, sorted ascending, ties included.
    pub fn observations(&self) -> &[f64] {
        &self.observations
    }

    /// Largest observation; the CDF jumps to 1 here.
    pub fn top(&self) -> f64 {
        self.top
    }

    /// Mass of the atom at the largest observation.
    pub fn jump_mass(&self) -> f64 {
        self.jump_mass
    }

    /// The odds-rate step function.
    pub fn lambda_step(&self) -> &StepFunction {
        &self.lambda
    }

    /// Estimated odds rate: 0 left of the origin, nondecreasing steps on
    /// the inter-observation intervals, `+inf` from the largest
    /// observation.
    pub fn odds_rate(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.lambda.eval(x)
        }
    }

    /// Estimated odds function: 0 at the origin, convex piecewise linear
    /// below the largest observation, `+inf` from there.
    pub fn odds(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x >= self.top {
            return f64::INFINITY;
        }
        match &self.odds_fn {
            Some(f) => f.eval(x).expect("odds function covers [0, top]"),
            None => 0.0,
        }
    }

    /// Left limit of the odds function; finite at the top, where the
    /// function itself jumps to `+inf`.
    pub fn odds_left(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x > self.top {
            return f64::INFINITY;
        }
        match &self.odds_fn {
            Some(f) => f.eval(x).expect("odds function covers [0, top]"),
            None => 0.0,
        }
    }

    /// Estimated CDF; right-continuous, equal to 1 from the largest
    /// observation onward.
    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x >= self.top {
            return 1.0;
        }
        let odds = self.odds(x);
        odds / (1.0 + odds)
    }

    /// Left limit of the CDF; differs from `cdf` only at the top atom.
    pub fn cdf_left(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x > self.top {
            return 1.0;
        }
        let odds = match &self.odds_fn {
            Some(f) => f.eval(x).expect("odds function covers [0, top]"),
            None => return 0.0,
        };
        odds / (1.0 + odds)
    }

    /// Estimated density on `(0, top)`. Errors outside that open interval;
    /// at and beyond the top the distribution has an atom, not a density.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        if x >= self.top {
            return Err(Error::Domain(format!(
                "density undefined at {x}: atom at the largest observation {}",
                self.top
            )));
        }
        if x <= 0.0 {
            return Err(Error::Domain(format!(
                "density is defined on (0, {}), got {x}",
                self.top
            )));
        }
        let odds = self.odds(x);
        Ok(self.odds_rate(x) / ((1.0 + odds) * (1.0 + odds)))
    }
}
