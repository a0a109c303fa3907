//! Simulation studies: standardized MSE curves for the constrained CDF
//! estimator and power curves for the two tests.
//!
//! Every replication draws from a stream keyed by `(master seed, purpose,
//! family index, n, replication index)`, so cells are independent,
//! appending a family leaves earlier families' results untouched, and
//! output tables are byte-identical across runs regardless of the rayon
//! pool size. Accumulation happens in replication order after the parallel
//! map.

use rayon::prelude::*;

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::estimator::fit_ior;
use crate::rng::RandomStream;
use crate::testing::{calibrate, ks_statistic, kt_statistic, TestKind};

/// Derivation-path tag for MSE-study replication streams.
const PATH_MSE: u64 = 2;
/// Derivation-path tag for power-study replication streams.
const PATH_POWER: u64 = 3;

/// Configuration of the MSE study.
#[derive(Debug, Clone)]
pub struct MseConfig {
    pub families: Vec<DistributionSpec>,
    pub sample_sizes: Vec<usize>,
    pub replications: usize,
    /// Evaluation percentiles, strictly inside (0, 1).
    pub percentiles: Vec<f64>,
    pub seed: u64,
}

impl MseConfig {
    /// The 99 integer percentiles 0.01..=0.99.
    pub fn default_percentiles() -> Vec<f64> {
        (1..=99).map(|k| k as f64 / 100.0).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.families.is_empty() || self.sample_sizes.is_empty() {
            return Err(Error::InvalidParameter(
                "study needs at least one family and one sample size".into(),
            ));
        }
        if self.replications == 0 {
            return Err(Error::InvalidParameter(
                "study needs at least one replication".into(),
            ));
        }
        if self.sample_sizes.iter().any(|&n| n < 2) {
            return Err(Error::InvalidParameter(
                "sample sizes must be at least 2".into(),
            ));
        }
        if self
            .percentiles
            .iter()
            .any(|&p| !(p > 0.0 && p < 1.0))
        {
            return Err(Error::InvalidParameter(
                "percentiles must lie strictly inside (0, 1)".into(),
            ));
        }
        if self.percentiles.is_empty() {
            return Err(Error::InvalidParameter(
                "study needs at least one percentile".into(),
            ));
        }
        Ok(())
    }

    /// Canonical one-line rendering, used for the output manifest.
    pub fn canonical(&self) -> String {
        format!(
            "study=mse;families={};sizes={};replications={};percentiles={};seed={}",
            join(self.families.iter().map(|f| f.to_string())),
            join(self.sample_sizes.iter().map(|n| n.to_string())),
            self.replications,
            join(self.percentiles.iter().map(|p| p.to_string())),
            self.seed
        )
    }
}

/// One row of the MSE table.
#[derive(Debug, Clone, PartialEq)]
pub struct MseRow {
    pub family: String,
    pub n: usize,
    pub percentile: f64,
    pub mse_constrained: f64,
    pub mse_empirical: f64,
    pub ratio: f64,
}

/// Simulated MSE of the constrained CDF estimator at the configured
/// percentiles, standardized by the exact empirical-CDF MSE
/// `p(1 - p)/n`.
pub fn mse_study(config: &MseConfig) -> Result<Vec<MseRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for (fam_idx, family) in config.families.iter().enumerate() {
        let points: Vec<f64> = config
            .percentiles
            .iter()
            .map(|&p| family.quantile(p))
            .collect::<Result<_>>()?;
        for &n in &config.sample_sizes {
            let per_rep: Vec<Vec<f64>> = (0..config.replications)
                .into_par_iter()
                .map(|r| -> Result<Vec<f64>> {
                    let mut stream = RandomStream::derive(
                        config.seed,
                        &[PATH_MSE, fam_idx as u64, n as u64, r as u64],
                    );
                    let sample = family.sample(n, &mut stream)?;
                    let est = fit_ior(&sample)?;
                    Ok(points
                        .iter()
                        .zip(&config.percentiles)
                        .map(|(&x, &p)| {
                            let e = est.cdf(x) - p;
                            e * e
                        })
                        .collect())
                })
                .collect::<Result<_>>()?;
            // Reduce in replication order for bit-stable sums.
            let mut sums = vec![0.0f64; config.percentiles.len()];
            for rep in &per_rep {
                for (s, v) in sums.iter_mut().zip(rep) {
                    *s += v;
                }
            }
            for (k, &p) in config.percentiles.iter().enumerate() {
                let mse_constrained = sums[k] / config.replications as f64;
                let mse_empirical = p * (1.0 - p) / n as f64;
                rows.push(MseRow {
                    family: family.to_string(),
                    n,
                    percentile: p,
                    mse_constrained,
                    mse_empirical,
                    ratio: mse_constrained / mse_empirical,
                });
            }
        }
    }
    Ok(rows)
}

/// Configuration of the power study.
#[derive(Debug, Clone)]
pub struct PowerConfig {
    pub families: Vec<DistributionSpec>,
    pub sample_sizes: Vec<usize>,
    pub replications: usize,
    pub alpha: f64,
    /// Monte Carlo replications behind each critical value.
    pub calibration_replications: usize,
    pub seed: u64,
}

impl PowerConfig {
    fn validate(&self) -> Result<()> {
        if self.families.is_empty() || self.sample_sizes.is_empty() {
            return Err(Error::InvalidParameter(
                "study needs at least one family and one sample size".into(),
            ));
        }
        if self.replications == 0 {
            return Err(Error::InvalidParameter(
                "study needs at least one replication".into(),
            ));
        }
        if self.sample_sizes.iter().any(|&n| n < 2) {
            return Err(Error::InvalidParameter(
                "sample sizes must be at least 2".into(),
            ));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "significance level must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    pub fn canonical(&self) -> String {
        format!(
            "study=power;families={};sizes={};replications={};alpha={};calibration={};seed={}",
            join(self.families.iter().map(|f| f.to_string())),
            join(self.sample_sizes.iter().map(|n| n.to_string())),
            self.replications,
            self.alpha,
            self.calibration_replications,
            self.seed
        )
    }

    /// The alternative grids used by the bundled demo: log-logistic shapes
    /// in [0.7, 1.2], Weibull in [0.3, 0.8], beta type II with b = 2 and a
    /// in [0.3, 0.7], Birnbaum-Saunders in [2, 4], plus the piecewise-odds
    /// model (5, 1).
    pub fn default_families() -> Vec<DistributionSpec> {
        let mut fams = Vec::new();
        for k in 0..=5 {
            fams.push(DistributionSpec::log_logistic(0.7 + 0.1 * k as f64).unwrap());
        }
        for k in 0..=5 {
            fams.push(DistributionSpec::weibull(0.3 + 0.1 * k as f64).unwrap());
        }
        for k in 0..=4 {
            fams.push(DistributionSpec::beta_type_ii(0.3 + 0.1 * k as f64, 2.0).unwrap());
        }
        for k in 0..=4 {
            fams.push(DistributionSpec::birnbaum_saunders(2.0 + 0.5 * k as f64).unwrap());
        }
        fams.push(DistributionSpec::piecewise_odds(5.0, 1.0).unwrap());
        fams
    }
}

/// One row of the power table.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerRow {
    pub family: String,
    pub shape: String,
    pub n: usize,
    pub test: TestKind,
    pub rejection_rate: f64,
}

/// Rejection rates of both tests over the configured family grid.
///
/// Critical values are calibrated once per sample size (both statistics
/// share the reference replications); each study replication evaluates
/// both statistics on the same sample.
pub fn power_study(config: &PowerConfig) -> Result<Vec<PowerRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for &n in &config.sample_sizes {
        let kt_cal = calibrate(TestKind::Kt, n, config.calibration_replications, config.seed)?;
        let ks_cal = calibrate(TestKind::Ks, n, config.calibration_replications, config.seed)?;
        let kt_crit = kt_cal.critical_value(config.alpha)?;
        let ks_crit = ks_cal.critical_value(config.alpha)?;
        for (fam_idx, family) in config.families.iter().enumerate() {
            let stats: Vec<(f64, f64)> = (0..config.replications)
                .into_par_iter()
                .map(|r| -> Result<(f64, f64)> {
                    let mut stream = RandomStream::derive(
                        config.seed,
                        &[PATH_POWER, fam_idx as u64, n as u64, r as u64],
                    );
                    let sample = family.sample(n, &mut stream)?;
                    Ok((kt_statistic(&sample)?, ks_statistic(&sample)?))
                })
                .collect::<Result<_>>()?;
            let mut kt_rejects = 0usize;
            let mut ks_rejects = 0usize;
            for &(kt, ks) in &stats {
                if kt >= kt_crit {
                    kt_rejects += 1;
                }
                if ks >= ks_crit {
                    ks_rejects += 1;
                }
            }
            let reps = config.replications as f64;
            rows.push(PowerRow {
                family: family.code().to_string(),
                shape: family.shape_string(),
                n,
                test: TestKind::Kt,
                rejection_rate: kt_rejects as f64 / reps,
            });
            rows.push(PowerRow {
                family: family.code().to_string(),
                shape: family.shape_string(),
                n,
                test: TestKind::Ks,
                rejection_rate: ks_rejects as f64 / reps,
            });
        }
    }
    Ok(rows)
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(" ")
}

/// FNV-1a over the canonical config string; stable across runs and builds.
fn fnv1a64(text: &str) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.as_bytes() {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn manifest_line(canonical: &str, seed: u64) -> String {
    format!(
        "# config_hash={:016x}, seed={}, version={}",
        fnv1a64(canonical),
        seed,
        env!("CARGO_PKG_VERSION")
    )
}

/// Quotes a CSV field if it contains a comma, quote or newline.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders the MSE table with a leading manifest comment.
pub fn mse_table_csv(config: &MseConfig, rows: &[MseRow]) -> String {
    let mut out = manifest_line(&config.canonical(), config.seed);
    out.push('\n');
    out.push_str("family,n,percentile,mse_constrained,mse_empirical,ratio\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            csv_field(&r.family),
            r.n,
            r.percentile,
            r.mse_constrained,
            r.mse_empirical,
            r.ratio
        ));
    }
    out
}

/// Renders the power table with a leading manifest comment.
pub fn power_table_csv(config: &PowerConfig, rows: &[PowerRow]) -> String {
    let mut out = manifest_line(&config.canonical(), config.seed);
    out.push('\n');
    out.push_str("family,shape,n,test,rejection_rate\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            csv_field(&r.family),
            csv_field(&r.shape),
            r.n,
            r.test,
            r.rejection_rate
        ));
    }
    out
}
