//! Nonparametric estimation and testing for lifetime distributions under
//! an increasing-odds-rate shape constraint.
//!
//! The pipeline: build the empirical total-time-on-test transform from a
//! sorted sample ([`ttt`]), take its least concave majorant ([`geometry`]),
//! and read the constrained odds-rate estimator off the hull slopes
//! ([`estimator`]). Two Monte-Carlo-calibrated tests of the shape
//! hypothesis live in [`testing`], kernel smoothing of the rate estimator
//! in [`smoothing`], and the simulation studies in [`harness`].

pub mod dist;
pub mod error;
pub mod estimator;
pub mod geometry;
pub mod harness;
pub mod rng;
pub mod smoothing;
pub mod special;
pub mod testing;
pub mod ttt;

pub use dist::{DistributionSpec, Family};
pub use error::{Error, Result};
pub use estimator::{fit_ior, IorEstimate};
pub use geometry::{gcm, lcm, MajorantResult};
pub use rng::RandomStream;
pub use smoothing::{KernelKind, KernelSpec, SmoothedIor};
pub use testing::{
    calibrate, ks_statistic, kt_statistic, run_test, Calibration, CalibrationSource,
    CriticalValueTable, TableEntry, TestKind, TestReport,
};
pub use ttt::{
    empirical_cdf, invert_pl, normalize_ttt, ttt_inverse, PiecewiseLinearFunction, SortedSample,
    StepFunction,
};
