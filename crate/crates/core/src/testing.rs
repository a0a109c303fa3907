//! Tests of the increasing-odds-rate hypothesis.
//!
//! Two statistics are offered. KT measures the gap between the normalized
//! total-time-on-test CDF and its greatest convex minorant; KS is the
//! uniform distance between the empirical CDF and the constrained
//! estimate. Critical values come from Monte Carlo under the unit-shape
//! log-logistic reference, the least favorable null member for KT. For KS
//! no stochastic bound is available, so it is calibrated against the same
//! reference and its size under other null members is reported empirically
//! by the simulation harness rather than asserted.
//!
//! Both statistics are scale invariant and take values in `[0, 1]`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::estimator::fit_ior;
use crate::geometry::gcm;
use crate::rng::RandomStream;
use crate::ttt::{normalize_ttt, ttt_inverse, SortedSample};

/// Derivation-path tag for calibration replication streams.
pub(crate) const PATH_CALIBRATION: u64 = 1;

/// Which statistic to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestKind {
    Kt,
    Ks,
}

impl TestKind {
    pub fn name(&self) -> &'static str {
        match self {
            TestKind::Kt => "kt",
            TestKind::Ks => "ks",
        }
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "kt" => Ok(TestKind::Kt),
            "ks" => Ok(TestKind::Ks),
            other => Err(Error::Parse(format!("unknown test '{other}', use kt|ks"))),
        }
    }
}

fn check_testable(sample: &SortedSample) -> Result<()> {
    if sample.len() < 2 {
        return Err(Error::DegenerateSample(
            "test statistics need at least two observations".into(),
        ));
    }
    if sample.min() == sample.max() {
        return Err(Error::DegenerateSample(
            "all observations are equal".into(),
        ));
    }
    Ok(())
}

/// KT statistic: `max_i (i/n - g(u_i))` where `u_i` is the normalized
/// transform at `i/n` and `g` is the greatest convex minorant of the
/// points `(0, 0), (u_i, i/n)`. Zero exactly when the normalized transform
/// is concave.
pub fn kt_statistic(sample: &SortedSample) -> Result<f64> {
    check_testable(sample)?;
    let tbar = normalize_ttt(&ttt_inverse(sample))?;
    let us = tbar.ys(); // u_0 = 0, ..., u_n = 1
    let ps = tbar.xs(); // i/n grid
    // Ties give duplicate abscissae; the lower hull needs the smallest
    // ordinate at each, which is the first of the run.
    let mut xs: Vec<f64> = Vec::with_capacity(us.len());
    let mut ys: Vec<f64> = Vec::with_capacity(us.len());
    for (&u, &p) in us.iter().zip(ps) {
        if xs.last() == Some(&u) {
            continue;
        }
        xs.push(u);
        ys.push(p);
    }
    let hull = gcm(&xs, &ys)?;
    let mut stat: f64 = 0.0;
    for (&u, &p) in us.iter().zip(ps) {
        let g = hull.hull().eval(u).expect("u_i lies in [0, 1]");
        stat = stat.max(p - g);
    }
    Ok(stat)
}

/// KS statistic: `sup_x |F_n(x) - F~_n(x)|`. Both functions are monotone
/// between jump points, so the supremum is attained at interval endpoints
/// and is computed exactly there.
pub fn ks_statistic(sample: &SortedSample) -> Result<f64> {
    check_testable(sample)?;
    let est = fit_ior(sample)?;
    let mut sup: f64 = 0.0;
    let mut prev_level = 0.0;
    for (v, level) in sample.distinct_with_ecdf() {
        // On [previous, v) the empirical CDF sits at prev_level; the
        // constrained CDF rises to its left limit at v.
        sup = sup.max((prev_level - est.cdf_left(v)).abs());
        sup = sup.max((level - est.cdf(v)).abs());
        prev_level = level;
    }
    Ok(sup)
}

/// Computes the chosen statistic.
pub fn statistic(test: TestKind, sample: &SortedSample) -> Result<f64> {
    match test {
        TestKind::Kt => kt_statistic(sample),
        TestKind::Ks => ks_statistic(sample),
    }
}

/// Empirical null distribution of a statistic under the log-logistic
/// reference, for a fixed sample size.
#[derive(Debug, Clone)]
pub struct Calibration {
    test: TestKind,
    n: usize,
    replications: usize,
    seed: u64,
    /// Sorted ascending.
    stats: Vec<f64>,
}

/// Simulates `replications` samples of size `n` from the unit-shape
/// log-logistic reference and computes the statistic for each.
///
/// Each replication draws from its own stream keyed by `(seed, n,
/// replication index)`, so the result is bit-identical for a fixed
/// `(seed, replications, n)` under any execution order, and extending
/// `replications` preserves earlier draws.
pub fn calibrate(
    test: TestKind,
    n: usize,
    replications: usize,
    seed: u64,
) -> Result<Calibration> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "calibration needs sample size at least 2".into(),
        ));
    }
    if replications < 100 {
        return Err(Error::InvalidParameter(
            "calibration needs at least 100 replications".into(),
        ));
    }
    let reference = DistributionSpec::log_logistic(1.0).expect("unit shape is valid");
    let mut stats: Vec<f64> = (0..replications)
        .into_par_iter()
        .map(|r| {
            let mut stream =
                RandomStream::derive(seed, &[PATH_CALIBRATION, n as u64, r as u64]);
            let sample = reference.sample(n, &mut stream)?;
            statistic(test, &sample)
        })
        .collect::<Result<_>>()?;
    stats.sort_by(f64::total_cmp);
    Ok(Calibration {
        test,
        n,
        replications,
        seed,
        stats,
    })
}

impl Calibration {
    pub fn test(&self) -> TestKind {
        self.test
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn replications(&self) -> usize {
        self.replications
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The simulated statistics, sorted ascending.
    pub fn statistics(&self) -> &[f64] {
        &self.stats
    }

    /// Conservative critical value: the `ceil((1 - alpha)(M + 1))`-th
    /// order statistic; `+inf` when the index exceeds `M` (the test then
    /// never rejects at this level).
    pub fn critical_value(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        let m = self.stats.len();
        let k = ((1.0 - alpha) * (m + 1) as f64).ceil() as usize;
        if k > m {
            Ok(f64::INFINITY)
        } else {
            Ok(self.stats[k - 1])
        }
    }

    /// Add-one Monte Carlo p-value: `(1 + #{stats >= observed}) / (M + 1)`.
    pub fn p_value(&self, observed: f64) -> f64 {
        let below = self.stats.partition_point(|&s| s < observed);
        let count_ge = self.stats.len() - below;
        (1.0 + count_ge as f64) / (self.stats.len() + 1) as f64
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "significance level must lie in (0, 1), got {alpha}"
        )))
    }
}

/// Where the critical value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalibrationSource {
    Fresh,
    CachedTable,
}

/// Calibration metadata carried in a [`TestReport`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationInfo {
    pub replications: usize,
    pub seed: u64,
    pub source: CalibrationSource,
}

/// Outcome of one hypothesis test.
#[derive(Debug, Clone)]
pub struct TestReport {
    pub test: TestKind,
    pub n: usize,
    pub statistic: f64,
    pub alpha: f64,
    pub critical_value: f64,
    /// Add-one Monte Carlo p-value; `None` when only a cached table of
    /// critical values is available (the table does not carry the full
    /// null distribution).
    pub p_value: Option<f64>,
    pub reject: bool,
    pub calibration: CalibrationInfo,
}

/// One row of a critical-value table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableEntry {
    pub test: TestKind,
    pub n: usize,
    pub replications: usize,
    pub seed: u64,
    pub alpha: f64,
    pub critical_value: f64,
}

/// A cached table of Monte Carlo critical values.
///
/// The file format is CSV with header
/// `test,n,M,seed,alpha,critical_value`; lookups require an exact match
/// on test, n, M and seed.
#[derive(Debug, Clone, Default)]
pub struct CriticalValueTable {
    entries: Vec<TableEntry>,
}

pub const TABLE_HEADER: &str = "test,n,M,seed,alpha,critical_value";

impl CriticalValueTable {
    pub fn new(entries: Vec<TableEntry>) -> Self {
        CriticalValueTable { entries }
    }

    pub fn entries(&self) -> &[TableEntry] {
        &self.entries
    }

    /// Rows for the given levels of a finished calibration.
    pub fn from_calibration(cal: &Calibration, alphas: &[f64]) -> Result<Self> {
        let mut entries = Vec::with_capacity(alphas.len());
        for &alpha in alphas {
            entries.push(TableEntry {
                test: cal.test(),
                n: cal.n(),
                replications: cal.replications(),
                seed: cal.seed(),
                alpha,
                critical_value: cal.critical_value(alpha)?,
            });
        }
        Ok(CriticalValueTable { entries })
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from(TABLE_HEADER);
        out.push('\n');
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                e.test, e.n, e.replications, e.seed, e.alpha, e.critical_value
            ));
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Parse("empty critical-value table".into()))?;
        if header.trim() != TABLE_HEADER {
            return Err(Error::Parse(format!(
                "bad table header '{}', expected '{TABLE_HEADER}'",
                header.trim()
            )));
        }
        let mut entries = Vec::new();
        for (lineno, line) in lines {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(Error::Parse(format!(
                    "table line {}: expected 6 fields, got {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let field_err = |what: &str| {
                Error::Parse(format!("table line {}: bad {what}", lineno + 1))
            };
            entries.push(TableEntry {
                test: fields[0].parse()?,
                n: fields[1].parse().map_err(|_| field_err("n"))?,
                replications: fields[2].parse().map_err(|_| field_err("M"))?,
                seed: fields[3].parse().map_err(|_| field_err("seed"))?,
                alpha: fields[4].parse().map_err(|_| field_err("alpha"))?,
                critical_value: fields[5]
                    .parse()
                    .map_err(|_| field_err("critical_value"))?,
            });
        }
        Ok(CriticalValueTable { entries })
    }

    /// Exact-match lookup; a miss reports the requested key.
    pub fn lookup(
        &self,
        test: TestKind,
        n: usize,
        replications: usize,
        seed: u64,
        alpha: f64,
    ) -> Result<f64> {
        self.entries
            .iter()
            .find(|e| {
                e.test == test
                    && e.n == n
                    && e.replications == replications
                    && e.seed == seed
                    && e.alpha == alpha
            })
            .map(|e| e.critical_value)
            .ok_or_else(|| {
                Error::CacheMiss(format!(
                    "no entry for test={test}, n={n}, M={replications}, seed={seed}, \
                     alpha={alpha}; recalibrate or pass a matching table"
                ))
            })
    }
}

/// Runs a test at level `alpha`.
///
/// With a cached `table` the critical value must match the requested
/// `(test, n, replications, seed, alpha)` exactly; a mismatch is a hard
/// cache-miss error, never a silent recalibration. Without a table the
/// null distribution is simulated fresh, which also yields a p-value.
pub fn run_test(
    sample: &SortedSample,
    test: TestKind,
    alpha: f64,
    replications: usize,
    seed: u64,
    table: Option<&CriticalValueTable>,
) -> Result<TestReport> {
    check_alpha(alpha)?;
    let stat = statistic(test, sample)?;
    let n = sample.len();
    let (critical_value, p_value, source) = match table {
        Some(t) => {
            let cv = t.lookup(test, n, replications, seed, alpha)?;
            (cv, None, CalibrationSource::CachedTable)
        }
        None => {
            let cal = calibrate(test, n, replications, seed)?;
            let cv = cal.critical_value(alpha)?;
            (cv, Some(cal.p_value(stat)), CalibrationSource::Fresh)
        }
    };
    Ok(TestReport {
        test,
        n,
        statistic: stat,
        alpha,
        critical_value,
        p_value,
        reject: stat >= critical_value,
        calibration: CalibrationInfo {
            replications,
            seed,
            source,
        },
    })
}
