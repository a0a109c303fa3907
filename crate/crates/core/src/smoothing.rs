//! Kernel-smoothed versions of the constrained estimators.
//!
//! The rate estimator is a nondecreasing step function, so its convolution
//! with a compactly supported kernel has the closed Stieltjes form
//! `sum_i d_i K_h(x - s_i)` over the jumps `(s_i, d_i)`; integrating once
//! more stays in closed form. No bandwidth selection is provided: `h` is a
//! caller input.

use crate::error::{Error, Result};
use crate::estimator::IorEstimate;

/// Kernel shapes. Only the Epanechnikov kernel is currently offered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// `k(u) = (3/4)(1 - u^2)` on `[-1, 1]`; zero-mean with compact support.
    Epanechnikov,
}

/// A kernel with its bandwidth. The scaled kernel `k_h(x) = k(x/h)/h`
/// integrates to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    kind: KernelKind,
    bandwidth: f64,
}

impl KernelSpec {
    pub fn epanechnikov(bandwidth: f64) -> Result<Self> {
        Self::new(KernelKind::Epanechnikov, bandwidth)
    }

    pub fn new(kind: KernelKind, bandwidth: f64) -> Result<Self> {
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "bandwidth must be a positive finite real, got {bandwidth}"
            )));
        }
        Ok(KernelSpec { kind, bandwidth })
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// Scaled kernel density `k_h(y)`.
    pub fn density(&self, y: f64) -> f64 {
        let u = y / self.bandwidth;
        if u.abs() >= 1.0 {
            0.0
        } else {
            0.75 * (1.0 - u * u) / self.bandwidth
        }
    }

    /// Kernel CDF `K_h(y)`: 0 below `-h`, 1 above `h`, a cubic between.
    pub fn cdf(&self, y: f64) -> f64 {
        let u = y / self.bandwidth;
        if u <= -1.0 {
            0.0
        } else if u >= 1.0 {
            1.0
        } else {
            0.5 + 0.75 * u - 0.25 * u * u * u
        }
    }

    /// Integrated kernel CDF `J_h(y) = int_{-inf}^y K_h`: 0 below `-h`,
    /// `y` above `h` (the kernel has zero mean), a quartic between.
    pub fn integrated_cdf(&self, y: f64) -> f64 {
        let h = self.bandwidth;
        let u = y / h;
        if u <= -1.0 {
            0.0
        } else if u >= 1.0 {
            y
        } else {
            h * (0.5 * u + 0.375 * u * u - 0.0625 * u * u * u * u + 0.1875)
        }
    }
}

/// Lazy evaluator for the smoothed rate, odds, CDF and density of a fitted
/// estimate.
#[derive(Debug, Clone)]
pub struct SmoothedIor<'a> {
    estimate: &'a IorEstimate,
    kernel: KernelSpec,
    jump_locations: Vec<f64>,
    jump_sizes: Vec<f64>,
    /// Everything from `top - h` onward has infinite rate.
    finite_limit: f64,
}

impl<'a> SmoothedIor<'a> {
    pub fn new(estimate: &'a IorEstimate, kernel: KernelSpec) -> Self {
        let mut jump_locations = Vec::new();
        let mut jump_sizes = Vec::new();
        for (loc, size) in estimate.lambda_step().jumps() {
            if size.is_finite() && size > 0.0 {
                jump_locations.push(loc);
                jump_sizes.push(size);
            }
        }
        SmoothedIor {
            estimate,
            kernel,
            jump_locations,
            jump_sizes,
            finite_limit: estimate.top() - kernel.bandwidth(),
        }
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn estimate(&self) -> &IorEstimate {
        self.estimate
    }

    /// Point from which the smoothed rate is infinite (`top - h`).
    pub fn finite_limit(&self) -> f64 {
        self.finite_limit
    }

    /// Smoothed odds rate: the convolution of the scaled kernel with the
    /// rate step, `+inf` from `top - h` onward.
    pub fn odds_rate(&self, x: f64) -> f64 {
        if x >= self.finite_limit {
            return f64::INFINITY;
        }
        let mut sum = 0.0;
        for (s, d) in self.jump_locations.iter().zip(&self.jump_sizes) {
            sum += d * self.kernel.cdf(x - s);
        }
        sum
    }

    /// Smoothed odds function. Mass can sit left of the origin (down to
    /// the first jump minus `h`) because the integral starts at `-inf`.
    pub fn odds(&self, x: f64) -> f64 {
        if x > self.finite_limit {
            return f64::INFINITY;
        }
        let mut sum = 0.0;
        for (s, d) in self.jump_locations.iter().zip(&self.jump_sizes) {
            sum += d * self.kernel.integrated_cdf(x - s);
        }
        sum
    }

    /// Smoothed CDF.
    pub fn cdf(&self, x: f64) -> f64 {
        let odds = self.odds(x);
        if odds.is_infinite() {
            1.0
        } else {
            odds / (1.0 + odds)
        }
    }

    /// Smoothed density; only defined where the smoothed rate is finite.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        if x >= self.finite_limit {
            return Err(Error::Domain(format!(
                "smoothed rate is infinite from {} onward, got {x}",
                self.finite_limit
            )));
        }
        let rate = self.odds_rate(x);
        let odds = self.odds(x);
        Ok(rate / ((1.0 + odds) * (1.0 + odds)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::fit_ior;
    use crate::ttt::SortedSample;

    fn close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol,
            "got {actual}, want {expected}"
        );
    }

    fn fit(values: &[f64]) -> IorEstimate {
        fit_ior(&SortedSample::new(values.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn kernel_cdf_hand_values() {
        let k = KernelSpec::epanechnikov(1.0).unwrap();
        assert_eq!(k.cdf(0.0), 0.5);
        assert_eq!(k.cdf(1.0), 1.0);
        assert_eq!(k.cdf(-1.0), 0.0);
        assert_eq!(k.cdf(5.0), 1.0);

        let k = KernelSpec::epanechnikov(0.25).unwrap();
        close(k.cdf(0.125), 27.0 / 32.0, 1e-15);

        assert!(KernelSpec::epanechnikov(0.0).is_err());
        assert!(KernelSpec::epanechnikov(-1.0).is_err());
    }

    #[test]
    fn scaled_kernel_integrates_to_one() {
        let k = KernelSpec::epanechnikov(0.25).unwrap();
        let m = 200_000;
        let mut sum = 0.0;
        for i in 0..m {
            let y = -0.25 + 0.5 * (i as f64 + 0.5) / m as f64;
            sum += k.density(y) * 0.5 / m as f64;
        }
        close(sum, 1.0, 1e-9);
        // Normalized height at the center: k_h(0) = 3/(4h) = 3.
        assert_eq!(k.density(0.0), 3.0);
    }

    #[test]
    fn integrated_cdf_identities() {
        let k = KernelSpec::epanechnikov(0.25).unwrap();
        assert_eq!(k.integrated_cdf(-0.25), 0.0);
        assert_eq!(k.integrated_cdf(-1.0), 0.0);
        close(k.integrated_cdf(0.25), 0.25, 1e-15);
        // Linear with unit slope beyond the window: zero-mean kernel.
        close(k.integrated_cdf(2.0), 2.0, 1e-15);
        close(k.integrated_cdf(0.0), 0.25 * 3.0 / 16.0, 1e-15);
        // J_h is the integral of K_h: check by midpoint quadrature.
        let m = 100_000;
        let mut acc = 0.0;
        for i in 0..m {
            let y = -0.25 + 0.4 * (i as f64 + 0.5) / m as f64;
            acc += k.cdf(y) * 0.4 / m as f64;
        }
        close(acc, k.integrated_cdf(0.15), 1e-9);
    }

    #[test]
    fn smoothing_is_exact_outside_the_jump_windows() {
        // {1,3}: jumps of the rate at 0 and 1 (sizes 1/2 each), infinite
        // from 3. With h = 1/4 the point 0.5 lies strictly between the two
        // windows, so the smoothed rate equals the raw step there.
        let est = fit(&[1.0, 3.0]);
        let k = KernelSpec::epanechnikov(0.25).unwrap();
        let s = SmoothedIor::new(&est, k);
        assert_eq!(s.odds_rate(0.5), est.odds_rate(0.5));
        assert_eq!(s.odds_rate(0.5), 0.5);
        assert_eq!(s.odds_rate(2.0), est.odds_rate(2.0));
        // Left of every window: zero.
        assert_eq!(s.odds_rate(-0.3), 0.0);
        // Inside the infinite region.
        assert_eq!(s.odds_rate(2.75), f64::INFINITY);
        assert_eq!(s.odds_rate(2.8), f64::INFINITY);
        assert!(s.pdf(2.75).is_err());
        assert!(s.pdf(2.0).is_ok());
    }

    /// Adaptive Simpson quadrature of `t -> k_h(x - t) * rate(t)`, split at
    /// the step breakpoints so each piece is a smooth polynomial.
    fn convolution_oracle(est: &IorEstimate, k: &KernelSpec, x: f64) -> f64 {
        fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
            (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
        }
        fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let left = simpson(f, a, m);
            let right = simpson(f, m, b);
            if depth == 0 || (left + right - whole).abs() < 1e-12 {
                left + right
            } else {
                adaptive(f, a, m, left, depth - 1) + adaptive(f, m, b, right, depth - 1)
            }
        }
        let h = k.bandwidth();
        let integrand = |t: f64| k.density(x - t) * est.odds_rate(t);
        let mut cuts = vec![x - h];
        for &b in est.lambda_step().breakpoints() {
            if b > x - h && b < x + h {
                cuts.push(b);
            }
        }
        cuts.push(x + h);
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let whole = simpson(&integrand, w[0], w[1]);
            total += adaptive(&integrand, w[0], w[1], whole, 30);
        }
        total
    }

    #[test]
    fn smoothed_rate_matches_quadrature_oracle() {
        let est = fit(&[0.4, 1.0, 1.7, 2.2, 3.0, 4.5]);
        let k = KernelSpec::epanechnikov(0.3).unwrap();
        let s = SmoothedIor::new(&est, k);
        let mut stream = crate::rng::RandomStream::from_seed(88);
        for _ in 0..60 {
            let x = -0.5 + stream.uniform() * (s.finite_limit() + 0.4);
            if x >= s.finite_limit() {
                continue;
            }
            let direct = convolution_oracle(&est, &k, x);
            let val = s.odds_rate(x);
            assert!(
                (val - direct).abs() <= 1e-8,
                "at {x}: closed form {val} vs quadrature {direct}"
            );
        }
    }

    #[test]
    fn sandwich_between_shifted_rates() {
        let est = fit(&[0.4, 1.0, 1.7, 2.2, 3.0, 4.5]);
        let k = KernelSpec::epanechnikov(0.3).unwrap();
        let s = SmoothedIor::new(&est, k);
        for i in 0..200 {
            let x = -0.5 + 4.6 * i as f64 / 200.0;
            if x + 0.3 >= est.top() {
                break;
            }
            let lo = est.odds_rate(x - 0.3);
            let hi = est.odds_rate(x + 0.3);
            let mid = s.odds_rate(x);
            assert!(
                lo - 1e-12 <= mid && mid <= hi + 1e-12,
                "sandwich fails at {x}: {lo} <= {mid} <= {hi}"
            );
        }
    }

    #[test]
    fn smoothed_rate_is_monotone() {
        let est = fit(&[0.4, 1.0, 1.7, 2.2, 3.0, 4.5]);
        let k = KernelSpec::epanechnikov(0.5).unwrap();
        let s = SmoothedIor::new(&est, k);
        let mut prev = 0.0;
        for i in 0..=500 {
            let x = -1.0 + 6.0 * i as f64 / 500.0;
            let r = s.odds_rate(x);
            assert!(r >= prev, "rate decreases at {x}");
            if r.is_infinite() {
                break;
            }
            prev = r;
        }
    }

    #[test]
    fn smoothed_odds_closed_form_matches_trapezoid() {
        let est = fit(&[0.4, 1.0, 1.7, 2.2, 3.0, 4.5]);
        let h = 0.3;
        let k = KernelSpec::epanechnikov(h).unwrap();
        let s = SmoothedIor::new(&est, k);
        // Integrate the smoothed rate from below the first window.
        let a = -h;
        let upto = est.top() - 2.0 * h;
        let m = 120_000usize;
        let dx = (upto - a) / m as f64;
        let mut acc = 0.5 * s.odds_rate(a);
        for i in 1..m {
            acc += s.odds_rate(a + i as f64 * dx);
        }
        acc += 0.5 * s.odds_rate(upto);
        let trapezoid = acc * dx;
        close(s.odds(upto), trapezoid, 1e-6);
    }

    #[test]
    fn smoothed_odds_equals_raw_odds_outside_windows() {
        // Far right of every finite window the integrated kernel is the
        // identity ramp, so the smoothed and raw odds coincide exactly for
        // a zero-mean kernel.
        let est = fit(&[1.0, 3.0]);
        let k = KernelSpec::epanechnikov(0.25).unwrap();
        let s = SmoothedIor::new(&est, k);
        for &x in &[1.3, 1.9, 2.5, 2.74] {
            close(s.odds(x), est.odds(x), 1e-14);
        }
        // And zero left of the first window.
        assert_eq!(s.odds(-0.25), 0.0);
        assert_eq!(s.odds(-3.0), 0.0);
    }

    #[test]
    fn smoothed_cdf_is_monotone_and_reaches_one() {
        let est = fit(&[0.4, 1.0, 1.7, 2.2, 3.0, 4.5]);
        let k = KernelSpec::epanechnikov(0.3).unwrap();
        let s = SmoothedIor::new(&est, k);
        let mut prev: f64 = 0.0;
        for i in 0..=300 {
            let x = -1.0 + 6.5 * i as f64 / 300.0;
            let c = s.cdf(x);
            assert!((0.0..=1.0).contains(&c));
            assert!(c >= prev - 1e-15);
            prev = c;
        }
        assert_eq!(s.cdf(5.0), 1.0);
    }
}
