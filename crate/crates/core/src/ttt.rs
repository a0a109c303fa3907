//! Empirical generalized total-time-on-test transform.
//!
//! From an ordered sample this module builds the transform
//! `T_n^{-1}(k/n) = sum_{j<=k} ((n-j+1)/n)^2 (X_(j) - X_(j-1))`, its
//! scale-free normalization, and the empirical CDF. It also owns the two
//! function representations used throughout the crate: piecewise linear
//! functions on a knot grid and right-continuous step functions.

use crate::error::{Error, Result};

/// Ascending nonnegative observations. Ties are permitted.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample {
    values: Vec<f64>,
}

impl SortedSample {
    /// Sorts and validates a raw batch of observations.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        values.sort_by(f64::total_cmp);
        Self::from_sorted(values)
    }

    /// Wraps observations already in ascending order.
    pub fn from_sorted(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DegenerateSample("empty sample".into()));
        }
        for w in values.windows(2) {
            if w[1] < w[0] {
                return Err(Error::Domain("observations are not sorted".into()));
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("observations must be finite".into()));
        }
        if values[0] < 0.0 {
            return Err(Error::Domain("negative observation".into()));
        }
        Ok(SortedSample { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty samples
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// True when the sample contains duplicate observations.
    pub fn has_ties(&self) -> bool {
        self.values.windows(2).any(|w| w[0] == w[1])
    }

    /// Distinct values with the empirical CDF level reached at each.
    pub(crate) fn distinct_with_ecdf(&self) -> Vec<(f64, f64)> {
        let n = self.values.len() as f64;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, &v) in self.values.iter().enumerate() {
            let level = (i + 1) as f64 / n;
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 = level,
                _ => out.push((v, level)),
            }
        }
        out
    }
}

/// Compensated (Kahan) accumulator for knot ordinates.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum
    }
}

/// Continuous piecewise linear function on the knot interval `[x0, xm]`.
///
/// Abscissae are strictly increasing; evaluation at a knot returns its
/// ordinate exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearFunction {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PiecewiseLinearFunction {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidParameter(
                "knot abscissae and ordinates differ in length".into(),
            ));
        }
        if xs.len() < 2 {
            return Err(Error::InvalidParameter(
                "piecewise linear function needs at least two knots".into(),
            ));
        }
        if xs.iter().any(|v| !v.is_finite()) || ys.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("knots must be finite".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "knot abscissae must be strictly increasing".into(),
            ));
        }
        Ok(PiecewiseLinearFunction { xs, ys })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn num_knots(&self) -> usize {
        self.xs.len()
    }

    /// Domain `(x0, xm)` of definition.
    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// Linear interpolation; exact at knots. Errors outside the domain.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&x) {
            return Err(Error::Domain(format!(
                "evaluation point {x} outside [{lo}, {hi}]"
            )));
        }
        match self.xs.binary_search_by(|k| k.total_cmp(&x)) {
            Ok(i) => Ok(self.ys[i]),
            Err(i) => {
                let (x0, x1) = (self.xs[i - 1], self.xs[i]);
                let (y0, y1) = (self.ys[i - 1], self.ys[i]);
                Ok(y0 + (y1 - y0) * ((x - x0) / (x1 - x0)))
            }
        }
    }

    fn segment_slope(&self, j: usize) -> f64 {
        (self.ys[j + 1] - self.ys[j]) / (self.xs[j + 1] - self.xs[j])
    }

    /// Slope of the segment to the right of `x`; defined on `[x0, xm)`.
    /// At a knot this is the next segment's slope.
    pub fn right_slope(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(x >= lo && x < hi) {
            return Err(Error::Domain(format!(
                "right slope undefined at {x}; domain is [{lo}, {hi})"
            )));
        }
        match self.xs.binary_search_by(|k| k.total_cmp(&x)) {
            Ok(i) => Ok(self.segment_slope(i)),
            Err(i) => Ok(self.segment_slope(i - 1)),
        }
    }

    /// Slope of the segment to the left of `x`; defined on `(x0, xm]`.
    pub fn left_slope(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(x > lo && x <= hi) {
            return Err(Error::Domain(format!(
                "left slope undefined at {x}; domain is ({lo}, {hi}]"
            )));
        }
        let i = match self.xs.binary_search_by(|k| k.total_cmp(&x)) {
            Ok(i) | Err(i) => i,
        };
        Ok(self.segment_slope(i - 1))
    }
}

/// Right-continuous step function with an optional `+inf` tail.
///
/// The value is `initial` before the first breakpoint and `values[i]` on
/// `[breakpoints[i], breakpoints[i+1])`; the last value extends to `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    initial: f64,
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(initial: f64, breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() || breakpoints.is_empty() {
            return Err(Error::InvalidParameter(
                "step function needs matching, nonempty breakpoints and values".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        if breakpoints.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("breakpoints must be finite".into()));
        }
        Ok(StepFunction {
            initial,
            breakpoints,
            values,
        })
    }

    pub fn initial(&self) -> f64 {
        self.initial
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Right-continuous evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|&b| b <= x);
        if idx == 0 {
            self.initial
        } else {
            self.values[idx - 1]
        }
    }

    /// Left limit at `x`.
    pub fn eval_left(&self, x: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|&b| b < x);
        if idx == 0 {
            self.initial
        } else {
            self.values[idx - 1]
        }
    }

    /// Jump locations and sizes, in order.
    pub fn jumps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.breakpoints.iter().enumerate().map(|(i, &b)| {
            let prev = if i == 0 { self.initial } else { self.values[i - 1] };
            (b, self.values[i] - prev)
        })
    }
}

/// Empirical CDF of the sample: jumps of `k/n` at each distinct observation.
pub fn empirical_cdf(sample: &SortedSample) -> StepFunction {
    let distinct = sample.distinct_with_ecdf();
    let (bps, vals): (Vec<f64>, Vec<f64>) = distinct.into_iter().unzip();
    StepFunction::new(0.0, bps, vals).expect("distinct observations are strictly increasing")
}

/// Empirical transform `T_n^{-1}` with knots at `p = 0, 1/n, ..., 1`.
///
/// The knot ordinate at `k/n` equals the integral of `(1 - F_n)^2` from 0
/// to the k-th order statistic; ordinates are accumulated with compensated
/// summation. Tied observations contribute zero-length increments.
pub fn ttt_inverse(sample: &SortedSample) -> PiecewiseLinearFunction {
    let n = sample.len();
    let nf = n as f64;
    let mut xs = Vec::with_capacity(n + 1);
    let mut ys = Vec::with_capacity(n + 1);
    xs.push(0.0);
    ys.push(0.0);
    let mut acc = KahanSum::new();
    let mut prev = 0.0;
    for (j, &x) in sample.values().iter().enumerate() {
        let w = (nf - j as f64) / nf;
        let increment = w * w * (x - prev);
        if increment != 0.0 {
            acc.add(increment);
        }
        prev = x;
        xs.push((j + 1) as f64 / nf);
        ys.push(acc.value());
    }
    PiecewiseLinearFunction::new(xs, ys).expect("k/n grid is strictly increasing")
}

/// Scale-free version: ordinates divided by the total `T_n^{-1}(1)`,
/// mapping `[0,1]` onto `[0,1]` with endpoints fixed.
pub fn normalize_ttt(t_inv: &PiecewiseLinearFunction) -> Result<PiecewiseLinearFunction> {
    let total = *t_inv.ys().last().unwrap();
    if total <= 0.0 {
        return Err(Error::DegenerateSample(
            "total time on test is zero (all observations zero)".into(),
        ));
    }
    let ys = t_inv.ys().iter().map(|y| y / total).collect();
    PiecewiseLinearFunction::new(t_inv.xs().to_vec(), ys)
}

/// Functional inverse of a nondecreasing piecewise linear function.
///
/// Knot coordinates are swapped; a flat segment becomes a single knot at
/// its leftmost abscissa. Strictly decreasing ordinates are rejected.
pub fn invert_pl(f: &PiecewiseLinearFunction) -> Result<PiecewiseLinearFunction> {
    if f.ys().windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain(
            "cannot invert: ordinates are not nondecreasing".into(),
        ));
    }
    let mut xs = Vec::with_capacity(f.num_knots());
    let mut ys = Vec::with_capacity(f.num_knots());
    for (x, y) in f.knots() {
        if xs.last().is_some_and(|&last| y <= last) {
            continue; // flat run: keep the leftmost knot
        }
        xs.push(y);
        ys.push(x);
    }
    if xs.len() < 2 {
        return Err(Error::DegenerateSample(
            "cannot invert a constant function".into(),
        ));
    }
    PiecewiseLinearFunction::new(xs, ys)
}
