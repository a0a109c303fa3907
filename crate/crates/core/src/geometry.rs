//! Least concave majorant and greatest convex minorant of finite knot sets.
//!
//! Both are computed by a monotone-chain scan. Turn decisions use
//! cross-products of coordinate differences (no divisions), and the turn
//! test is strict, so collinear interior knots stay off the support set
//! and hull slopes are strictly monotone.

use crate::error::{Error, Result};
use crate::ttt::PiecewiseLinearFunction;

/// A concave majorant or convex minorant together with the indices of the
/// input knots it passes through.
#[derive(Debug, Clone)]
pub struct MajorantResult {
    hull: PiecewiseLinearFunction,
    support_indices: Vec<usize>,
}

impl MajorantResult {
    /// The hull as a piecewise linear function over the support knots.
    pub fn hull(&self) -> &PiecewiseLinearFunction {
        &self.hull
    }

    /// Indices of input knots lying on the hull (always includes the
    /// first and last knot).
    pub fn support_indices(&self) -> &[usize] {
        &self.support_indices
    }
}

fn validate(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidParameter(
            "knot abscissae and ordinates differ in length".into(),
        ));
    }
    if xs.len() < 2 {
        return Err(Error::InvalidParameter(
            "hull construction needs at least two knots".into(),
        ));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "knot abscissae must be strictly increasing".into(),
        ));
    }
    if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("knots must be finite".into()));
    }
    Ok(())
}

fn hull_scan(xs: &[f64], ys: &[f64], lower: bool) -> Vec<usize> {
    let mut stack: Vec<usize> = Vec::with_capacity(xs.len());
    for i in 0..xs.len() {
        while stack.len() >= 2 {
            let o = stack[stack.len() - 2];
            let a = stack[stack.len() - 1];
            let cross = (xs[a] - xs[o]) * (ys[i] - ys[o]) - (ys[a] - ys[o]) * (xs[i] - xs[o]);
            let pop = if lower { cross <= 0.0 } else { cross >= 0.0 };
            if pop {
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(i);
    }
    stack
}

fn build(xs: &[f64], ys: &[f64], lower: bool) -> Result<MajorantResult> {
    validate(xs, ys)?;
    let support = hull_scan(xs, ys, lower);
    let hull_xs: Vec<f64> = support.iter().map(|&i| xs[i]).collect();
    let hull_ys: Vec<f64> = support.iter().map(|&i| ys[i]).collect();
    Ok(MajorantResult {
        hull: PiecewiseLinearFunction::new(hull_xs, hull_ys)?,
        support_indices: support,
    })
}

/// Least concave majorant: the pointwise-smallest concave function that
/// dominates the linear interpolant of the knots. Slopes between
/// consecutive support knots are strictly decreasing.
pub fn lcm(xs: &[f64], ys: &[f64]) -> Result<MajorantResult> {
    build(xs, ys, false)
}

/// Greatest convex minorant: the pointwise-largest convex function below
/// the knots. Slopes are strictly increasing.
pub fn gcm(xs: &[f64], ys: &[f64]) -> Result<MajorantResult> {
    build(xs, ys, true)
}
