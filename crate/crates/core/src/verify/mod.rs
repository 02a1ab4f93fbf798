//! Empirical CDFs, test statistics, verdict reports and the registered
//! verification suites.

mod ecdf;
mod report;
mod stats;
pub mod suites;

pub use ecdf::{
    ks_critical_value, ks_distance, ks_two_sample, ks_two_sample_critical_value, EmpiricalCdf,
};
pub use report::{ErrorMetric, Verdict, VerificationReport};
pub use stats::{binomial_sigma, binomial_z, median_of_means, MeanEstimate};
pub use suites::{run_suite, Check, DEFAULT_SEED, SUITES};
