//! The registered checks and the suite runner.
//!
//! Every check derives its seed from the master seed plus a fixed offset, so
//! a report can be replayed from `(seed, scale)` alone. Sample sizes are the
//! base sizes below multiplied by `scale`.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::ecdf::{
    ks_critical_value, ks_distance, ks_two_sample, ks_two_sample_critical_value, EmpiricalCdf,
};
use super::report::{ErrorMetric, VerificationReport};
use super::stats::{binomial_z, median_of_means, MeanEstimate};
use crate::convolution::{
    convolve_point, example_cdf, kernel_cdf_h, pareto_power_density, rescaled_power_transform,
    stable_limit_cdf, stable_limit_transform, transition_cdf, two_point_power_density,
    ConvolutionPowerLaw, ExampleFamily,
};
use crate::error::{Error, Result};
use crate::excursions::{
    geometric_kendall_transform, overshoot_closed_form, phi_closed_form, tau_pgf, tau_pmf,
    wiener_hopf_estimate, ExcursionLaw, GeometricKendall,
};
use crate::measures::{Alpha, StepDistribution};
use crate::quadrature::Quadrature;
use crate::rng::RngStream;
use crate::walk::{
    first_passage, simulate_batch, step_kernel, Direction, WalkBatch, WalkConfig, WalkMode,
};
use crate::williamson::{
    forward, g_by_quadrature, g_of, inverse, inverse_numeric, psi, LawTransform, StableTransform,
};

pub const EXACT: &str = "exact-identities";
pub const QUADRATURE: &str = "quadrature-identities";
pub const MC: &str = "mc-laws";
pub const ALL: &str = "all";
pub const SUITES: [&str; 3] = [EXACT, QUADRATURE, MC];

pub const DEFAULT_SEED: u64 = 7;

/// Smallest sample any check runs with, whatever the scale.
pub const MIN_SAMPLE: usize = 100;

/// Operations the registry must exercise.
pub const OPERATIONS: [&str; 20] = [
    "psi",
    "forward",
    "g_of",
    "inverse",
    "convolve_point",
    "kernel_cdf_h",
    "transition_cdf",
    "power_cdf",
    "example_cdf",
    "stable_limit_cdf",
    "step_kernel",
    "step_recursion",
    "simulate_batch",
    "first_passage",
    "phi_n",
    "tau_pgf",
    "overshoot_cdf",
    "geometric_kendall_transform",
    "wiener_hopf_H",
    "overshoot_alpha_moment",
];

/// Per-run parameters handed to a check.
#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    pub seed: u64,
    pub scale: f64,
}

impl Ctx {
    pub fn size(&self, base: usize) -> usize {
        ((base as f64 * self.scale).round() as usize).max(MIN_SAMPLE)
    }
}

pub struct Check {
    pub id: &'static str,
    pub suite: &'static str,
    pub seed_offset: u64,
    pub covers: &'static [&'static str],
    body: fn(&Ctx) -> Vec<VerificationReport>,
}

impl Check {
    pub fn seed_for(&self, master_seed: u64) -> u64 {
        master_seed.wrapping_add(self.seed_offset)
    }

    /// Runs the check; every report is stamped with the check's seed and
    /// wall-clock time.
    pub fn run(&self, master_seed: u64, scale: f64) -> Vec<VerificationReport> {
        let ctx = Ctx {
            seed: self.seed_for(master_seed),
            scale,
        };
        let start = Instant::now();
        let mut reports = (self.body)(&ctx);
        let ms = start.elapsed().as_secs_f64() * 1e3;
        for r in &mut reports {
            r.runtime_ms = ms;
            r.seed = ctx.seed;
        }
        reports
    }
}

pub fn registry() -> &'static [Check] {
    REGISTRY
}

pub fn find_check(id: &str) -> Option<&'static Check> {
    REGISTRY.iter().find(|c| c.id == id)
}

/// Names in [`OPERATIONS`] no registered check covers.
pub fn uncovered_operations() -> Vec<&'static str> {
    OPERATIONS
        .iter()
        .copied()
        .filter(|op| !REGISTRY.iter().any(|c| c.covers.contains(op)))
        .collect()
}

/// Runs every check of `suite` (or of all suites) in parallel and returns the
/// reports sorted by check id.
pub fn run_suite(suite: &str, seed: u64, scale: f64) -> Result<Vec<VerificationReport>> {
    if suite != ALL && !SUITES.contains(&suite) {
        return Err(Error::UnknownSuite(suite.to_string()));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "scale must be positive, got {scale}"
        )));
    }
    let mut reports: Vec<VerificationReport> = REGISTRY
        .par_iter()
        .filter(|c| suite == ALL || c.suite == suite)
        .flat_map_iter(|c| c.run(seed, scale))
        .collect();
    reports.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    Ok(reports)
}

static REGISTRY: &[Check] = &[
    // exact identities
    Check {
        id: "homomorphism-point-pair",
        suite: EXACT,
        seed_offset: 0,
        covers: &["convolve_point", "psi"],
        body: homomorphism_point_pair,
    },
    Check {
        id: "williamson-examples",
        suite: EXACT,
        seed_offset: 0,
        covers: &["psi", "forward", "g_of"],
        body: williamson_examples,
    },
    Check {
        id: "wiener-hopf-factorization",
        suite: EXACT,
        seed_offset: 0,
        covers: &["wiener_hopf_H", "tau_pgf", "geometric_kendall_transform"],
        body: wiener_hopf_factorization,
    },
    Check {
        id: "power-two-fold-two-point",
        suite: EXACT,
        seed_offset: 0,
        covers: &["power_cdf"],
        body: power_two_fold_two_point,
    },
    Check {
        id: "power-examples-match-generic",
        suite: EXACT,
        seed_offset: 0,
        covers: &["power_cdf", "example_cdf"],
        body: power_examples_match_generic,
    },
    Check {
        id: "power-cdf-shape",
        suite: EXACT,
        seed_offset: 0,
        covers: &["power_cdf"],
        body: power_cdf_shape,
    },
    Check {
        id: "kernel-scaling",
        suite: EXACT,
        seed_offset: 0,
        covers: &["kernel_cdf_h"],
        body: kernel_scaling,
    },
    Check {
        id: "kernel-open-interval-mass",
        suite: EXACT,
        seed_offset: 0,
        covers: &["kernel_cdf_h", "convolve_point"],
        body: kernel_open_interval_mass,
    },
    Check {
        id: "transition-two-point",
        suite: EXACT,
        seed_offset: 0,
        covers: &["transition_cdf"],
        body: transition_two_point,
    },
    Check {
        id: "stable-limit-inversion",
        suite: EXACT,
        seed_offset: 0,
        covers: &["stable_limit_cdf", "inverse"],
        body: stable_limit_inversion,
    },
    Check {
        id: "stable-limit-convergence",
        suite: EXACT,
        seed_offset: 0,
        covers: &[],
        body: stable_limit_convergence,
    },
    Check {
        id: "tau-law",
        suite: EXACT,
        seed_offset: 0,
        covers: &["tau_pgf"],
        body: tau_law,
    },
    Check {
        id: "phi-series-exact",
        suite: EXACT,
        seed_offset: 0,
        covers: &["phi_n", "overshoot_cdf"],
        body: phi_series_exact,
    },
    Check {
        id: "phi-series-double",
        suite: EXACT,
        seed_offset: 0,
        covers: &["phi_n", "overshoot_cdf"],
        body: phi_series_double,
    },
    Check {
        id: "overshoot-examples",
        suite: EXACT,
        seed_offset: 0,
        covers: &["overshoot_cdf", "phi_n"],
        body: overshoot_examples,
    },
    Check {
        id: "first-passage-extraction",
        suite: EXACT,
        seed_offset: 101,
        covers: &["first_passage", "simulate_batch"],
        body: first_passage_extraction,
    },
    // quadrature identities
    Check {
        id: "inversion-round-trip",
        suite: QUADRATURE,
        seed_offset: 0,
        covers: &["inverse", "forward"],
        body: inversion_round_trip,
    },
    Check {
        id: "integration-by-parts",
        suite: QUADRATURE,
        seed_offset: 0,
        covers: &["g_of"],
        body: integration_by_parts,
    },
    Check {
        id: "transform-by-quadrature",
        suite: QUADRATURE,
        seed_offset: 0,
        covers: &["g_of"],
        body: transform_by_quadrature,
    },
    Check {
        id: "overshoot-moment-quadrature",
        suite: QUADRATURE,
        seed_offset: 0,
        covers: &["overshoot_alpha_moment", "overshoot_cdf"],
        body: overshoot_moment_quadrature,
    },
    Check {
        id: "power-density-quadrature",
        suite: QUADRATURE,
        seed_offset: 0,
        covers: &["example_cdf", "power_cdf"],
        body: power_density_quadrature,
    },
    // Monte Carlo laws
    Check {
        id: "step-sampler-ks",
        suite: MC,
        seed_offset: 1_000,
        covers: &[],
        body: step_sampler_ks,
    },
    Check {
        id: "step-kernel-pareto-tail",
        suite: MC,
        seed_offset: 2_000,
        covers: &["step_kernel"],
        body: step_kernel_pareto_tail,
    },
    Check {
        id: "transition-mc",
        suite: MC,
        seed_offset: 3_000,
        covers: &["transition_cdf", "step_kernel"],
        body: transition_mc,
    },
    Check {
        id: "hitting-time-geometric",
        suite: MC,
        seed_offset: 4_000,
        covers: &["tau_pgf", "simulate_batch"],
        body: hitting_time_geometric,
    },
    Check {
        id: "marginal-ks",
        suite: MC,
        seed_offset: 5_000,
        covers: &["simulate_batch", "example_cdf", "power_cdf"],
        body: marginal_ks,
    },
    Check {
        id: "overshoot-ks",
        suite: MC,
        seed_offset: 6_000,
        covers: &["overshoot_cdf"],
        body: overshoot_ks,
    },
    Check {
        id: "overshoot-spot",
        suite: MC,
        seed_offset: 7_000,
        covers: &["overshoot_cdf"],
        body: overshoot_spot,
    },
    Check {
        id: "wiener-hopf-mc",
        suite: MC,
        seed_offset: 8_000,
        covers: &["wiener_hopf_H"],
        body: wiener_hopf_mc,
    },
    Check {
        id: "mode-equivalence",
        suite: MC,
        seed_offset: 9_000,
        covers: &["step_recursion", "step_kernel"],
        body: mode_equivalence,
    },
    Check {
        id: "phi-two-mc",
        suite: MC,
        seed_offset: 10_000,
        covers: &["phi_n"],
        body: phi_two_mc,
    },
    Check {
        id: "geometric-kendall-mc",
        suite: MC,
        seed_offset: 11_000,
        covers: &["geometric_kendall_transform"],
        body: geometric_kendall_mc,
    },
    Check {
        id: "overshoot-moment-mc",
        suite: MC,
        seed_offset: 12_000,
        covers: &["overshoot_alpha_moment"],
        body: overshoot_moment_mc,
    },
];

// ---------------------------------------------------------------------------
// helpers

const EXACT_TOL: f64 = 1e-12;
const Z_TOL: f64 = 3.0;

fn a(v: f64) -> Alpha<f64> {
    Alpha::new(v).expect("positive alpha")
}

fn two_point() -> StepDistribution<f64> {
    StepDistribution::two_point(1.0).expect("valid")
}

fn excursion(d: StepDistribution<f64>, alpha: f64) -> ExcursionLaw<f64> {
    ExcursionLaw::new(d, a(alpha)).expect("no atom at zero")
}

fn closed_form_families(alpha: f64) -> Vec<StepDistribution<f64>> {
    vec![
        two_point(),
        StepDistribution::uniform(),
        StepDistribution::mixture(0.5).expect("valid"),
        StepDistribution::pareto(2.0 * alpha).expect("valid"),
    ]
}

fn family_name(d: &StepDistribution<f64>) -> &'static str {
    match d {
        StepDistribution::SymmetricTwoPoint { .. } => "two-point",
        StepDistribution::SymmetricPareto { .. } => "pareto",
        StepDistribution::SymmetricUniform => "uniform",
        StepDistribution::TwoPointParetoMixture { .. } => "mixture",
        StepDistribution::TabulatedSymmetric(_) => "table",
    }
}

fn example_name(f: ExampleFamily<f64>) -> &'static str {
    match f {
        ExampleFamily::Uniform => "uniform",
        ExampleFamily::TwoPoint => "two-point",
        ExampleFamily::Mixture { .. } => "mixture",
        ExampleFamily::Pareto => "pareto",
    }
}

const EXAMPLES: [ExampleFamily<f64>; 4] = [
    ExampleFamily::TwoPoint,
    ExampleFamily::Uniform,
    ExampleFamily::Mixture { p: 0.5 },
    ExampleFamily::Pareto,
];

fn val(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

/// Tracks the largest error seen; NaN is sticky.
#[derive(Clone, Copy, Debug, Default)]
struct Worst {
    analytic: f64,
    estimate: f64,
    error: f64,
    count: usize,
}

impl Worst {
    fn push(&mut self, analytic: f64, estimate: f64, error: f64) {
        self.count += 1;
        if self.error.is_nan() {
            return;
        }
        if error.is_nan() || error > self.error {
            *self = Worst {
                analytic,
                estimate,
                error,
                count: self.count,
            };
        }
    }

    fn abs(&mut self, analytic: f64, estimate: f64) {
        self.push(analytic, estimate, (estimate - analytic).abs());
    }

    fn report(
        self,
        id: impl Into<String>,
        metric: ErrorMetric,
        tolerance: f64,
    ) -> VerificationReport {
        VerificationReport::new(
            id,
            self.analytic,
            self.estimate,
            self.error,
            metric,
            tolerance,
        )
        .with_sample_size(self.count)
    }
}

fn ks_report(id: String, sample: Vec<f64>, cdf: impl Fn(f64) -> f64) -> VerificationReport {
    let n = sample.len();
    let d = ks_distance(&EmpiricalCdf::new(sample), cdf);
    VerificationReport::new(id, 0.0, d, d, ErrorMetric::Ks, ks_critical_value(n))
        .with_sample_size(n)
}

fn binomial_report(id: String, hits: usize, n: usize, p: f64) -> VerificationReport {
    let z = binomial_z(hits, n, p);
    VerificationReport::new(
        id,
        p,
        hits as f64 / n as f64,
        z.abs(),
        ErrorMetric::ZScore,
        Z_TOL,
    )
    .with_sample_size(n)
}

fn passage_batch(
    dist: StepDistribution<f64>,
    alpha: f64,
    n: usize,
    seed: u64,
) -> Result<WalkBatch<f64>> {
    let cfg = WalkConfig::new(dist, a(alpha), 60, n)
        .with_seed(seed)
        .with_passage(0.0, Direction::Up)
        .with_storage_limit(0);
    simulate_batch(&cfg)
}

fn failed(id: String, _: Error) -> VerificationReport {
    VerificationReport::new(id, f64::NAN, f64::NAN, f64::NAN, ErrorMetric::Abs, 0.0)
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

// ---------------------------------------------------------------------------
// exact identities

fn homomorphism_point_pair(_: &Ctx) -> Vec<VerificationReport> {
    let mut w = Worst::default();
    for &alpha in &[0.5, 1.0, 1.7] {
        for &x in &[0.0, 0.3, 1.0, -1.7, 2.5] {
            for &y in &[0.5, 1.0, -2.0, 4.0] {
                for &t in &[0.1, 0.4, 1.0, 3.0] {
                    let law = convolve_point(x, y, a(alpha));
                    w.abs(
                        psi(a(alpha), x * t) * psi(a(alpha), y * t),
                        law.williamson(t),
                    );
                }
            }
        }
    }
    vec![w.report("homomorphism-point-pair", ErrorMetric::Abs, EXACT_TOL)]
}

fn williamson_examples(_: &Ctx) -> Vec<VerificationReport> {
    let mut w = Worst::default();
    let uni = StepDistribution::uniform();
    w.abs(0.5, psi(a(1.0), 0.5));
    w.abs(0.0, psi(a(2.0), 3.0));
    w.abs(1.0, psi(a(1.0), 0.0));
    w.abs(0.5, val(forward(&two_point(), a(1.0), 0.5)));
    w.abs(1.0, val(forward(&uni, a(0.7), 0.0)));
    w.abs(0.75, val(forward(&uni, a(1.0), 0.5)));
    w.abs(0.5, val(g_of(&two_point(), a(1.0), 2.0)));
    w.abs(
        0.25,
        val(g_of(
            &StepDistribution::pareto(2.0).expect("valid"),
            a(1.0),
            2.0,
        )),
    );
    let far = val(g_of(&two_point(), a(1.0), 1e8));
    w.push(1.0, far, (1.0 - 1e-6 - far).max(0.0));
    for &t in &[0.2, 0.9, 1.0, 2.0, 7.0] {
        w.abs(psi(a(0.8), t), val(forward(&two_point(), a(0.8), t)));
    }
    vec![w.report("williamson-examples", ErrorMetric::Abs, EXACT_TOL)]
}

fn wiener_hopf_factorization(_: &Ctx) -> Vec<VerificationReport> {
    let alpha = 0.8;
    closed_form_families(alpha)
        .into_iter()
        .map(|d| {
            let id = format!("wiener-hopf-factorization/{}", family_name(&d));
            let law = excursion(d, alpha);
            let mut w = Worst::default();
            for &s in &[0.25, 0.5, 0.75, 1.0] {
                for &u in &[0.1, 0.25, 0.5, 0.9] {
                    let product = GeometricKendall::new(s, law.clone())
                        .and_then(|z| Ok(tau_pgf(s)? * geometric_kendall_transform(&z, 1.0 / u)?));
                    w.abs(val(law.wiener_hopf_h(s, u)), val(product));
                }
            }
            w.report(id, ErrorMetric::Abs, EXACT_TOL)
        })
        .collect()
}

fn power_two_fold_two_point(_: &Ctx) -> Vec<VerificationReport> {
    let mut w = Worst::default();
    for &alpha in &[0.5, 0.8, 1.0, 1.5] {
        let law = ConvolutionPowerLaw::new(two_point(), 2, a(alpha)).expect("valid");
        let pareto = StepDistribution::pareto(2.0 * alpha).expect("valid");
        for i in 1..=100 {
            let t = 0.0437 * i as f64;
            for s in [t, -t] {
                w.abs(pareto.cdf(s), val(law.cdf(s)));
            }
        }
    }
    vec![w.report("power-two-fold-two-point", ErrorMetric::Abs, EXACT_TOL)]
}

fn power_examples_match_generic(_: &Ctx) -> Vec<VerificationReport> {
    let alpha = 0.8;
    EXAMPLES
        .iter()
        .map(|&fam| {
            let mut w = Worst::default();
            let base = fam.step_distribution(a(alpha)).expect("valid");
            for n in [1, 2, 3, 5, 10] {
                let law = ConvolutionPowerLaw::new(base.clone(), n, a(alpha)).expect("valid");
                for i in 1..=60 {
                    let t = 0.0731 * i as f64;
                    w.abs(val(example_cdf(fam, n, a(alpha), t)), val(law.cdf(t)));
                }
            }
            w.report(
                format!("power-examples-match-generic/{}", example_name(fam)),
                ErrorMetric::Abs,
                EXACT_TOL,
            )
        })
        .collect()
}

fn power_cdf_shape(_: &Ctx) -> Vec<VerificationReport> {
    let alpha = 0.8;
    let mut w = Worst::default();
    for base in closed_form_families(alpha) {
        for n in [2, 5, 10] {
            let law = ConvolutionPowerLaw::new(base.clone(), n, a(alpha)).expect("valid");
            let mut prev = 0.0;
            for i in 0..500 {
                let t = -6.0 + 12.0 * (i as f64 + 0.5) / 500.0;
                let v = val(law.cdf(t));
                let mirrored = val(law.cdf(-t));
                w.push(1.0, v + mirrored, (v + mirrored - 1.0).abs());
                w.push(prev, v, (prev - v).max(0.0));
                prev = v;
            }
        }
    }
    vec![w.report("power-cdf-shape", ErrorMetric::Abs, EXACT_TOL)]
}

fn kernel_scaling(_: &Ctx) -> Vec<VerificationReport> {
    let mut w = Worst::default();
    for &alpha in &[0.5, 1.0, 2.0] {
        for &(x, y, t) in &[
            (1.0, 2.0, 3.0),
            (0.2, -0.7, 1.0),
            (0.0, 1.0, 2.0),
            (-1.5, 1.5, 1.6),
        ] {
            for &s in &[0.01, 0.5, 3.0, 1e4] {
                w.abs(
                    kernel_cdf_h(x, y, t, a(alpha)),
                    kernel_cdf_h(s * x, s * y, s * t, a(alpha)),
                );
            }
        }
    }
    w.abs(7.0 / 18.0, kernel_cdf_h(1.0, 2.0, 3.0, a(1.0)));
    w.abs(0.0, kernel_cdf_h(1.0, 2.0, 2.0, a(1.0)));
    w.abs(0.5, kernel_cdf_h(0.0, 1.0, 2.0, a(1.0)));
    w.abs(0.0, kernel_cdf_h(0.0, 0.0, 2.0, a(1.0)));
    vec![w.report("kernel-scaling", ErrorMetric::Abs, EXACT_TOL)]
}

fn kernel_open_interval_mass(_: &Ctx) -> Vec<VerificationReport> {
    let mut w = Worst::default();
    for &alpha in &[0.5, 1.0, 2.0] {
        for &x in &[0.0, 0.4, -1.0, 2.0] {
            for &y in &[0.3, -1.0, 1.5] {
                for &t in &[0.2, 0.5, 1.0, 1.5, 2.5, 10.0] {
                    let law = convolve_point(x, y, a(alpha));
                    w.abs(kernel_cdf_h(x, y, t, a(alpha)), law.open_interval_mass(t));
                }
            }
        }
    }
    vec![w.report("kernel-open-interval-mass", ErrorMetric::Abs, EXACT_TOL)]
}

fn transition_two_point(_: &Ctx) -> Vec<VerificationReport> {
    // With unit two-point steps the kernel mass is an average over Y = ±1.
    // The grid avoids t = 1, where the step atom sits on the interval end.
    let mut w = Worst::default();
    let d = two_point();
    for &alpha in &[0.5, 1.0, 1.5] {
        for &x in &[0.0, 0.5, -1.0, 1.0, 3.0] {
            for &t in &[0.5, 0.9, 1.5, 2.0, 4.0] {
                let mix =
                    0.5 * (kernel_cdf_h(x, 1.0, t, a(alpha)) + kernel_cdf_h(x, -1.0, t, a(alpha)));
                w.abs(mix, val(transition_cdf(x, &d, t, a(alpha))));
            }
        }
    }
    w.abs(0.375, val(transition_cdf(1.0, &d, 2.0, a(1.0))));
    w.abs(0.5, val(transition_cdf(0.0, &d, 2.0, a(1.0))));
    vec![w.report("transition-two-point", ErrorMetric::Abs, EXACT_TOL)]
}

fn stable_limit_inversion(_: &Ctx) -> Vec<VerificationReport> {
    let mut w = Worst::default();
    for &alpha in &[0.5, 1.0, 2.0] {
        let g = StableTransform { alpha: a(alpha) };
        w.abs(0.5, stable_limit_cdf(0.0, a(alpha)));
        for i in 1..=300 {
            let t = 0.01 * i as f64;
            w.abs(stable_limit_cdf(t, a(alpha)), val(inverse(&g, t)));
        }
    }
    w.abs(
        0.5 * (2.0 + std::f64::consts::E) / std::f64::consts::E,
        stable_limit_cdf(1.0, a(1.0)),
    );
    // The survival at t = 10^4 is 2.5e-9 to leading order, at 10^5 it is 2.5e-11.
    w.abs(1.0 - 2.5e-9, stable_limit_cdf(1e4, a(1.0)));
    let far = stable_limit_cdf(1e5, a(1.0));
    w.push(1.0, far, (1.0 - 1e-9 - far).max(0.0));
    vec![w.report("stable-limit-inversion", ErrorMetric::Abs, 1e-10)]
}

fn stable_limit_convergence(_: &Ctx) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for &alpha in &[0.5, 1.0, 2.0] {
        for n in [100u32, 1_000, 10_000] {
            let mut w = Worst::default();
            for t in grid(0.0, 3.0, 301) {
                w.abs(
                    stable_limit_transform(t, a(alpha)),
                    rescaled_power_transform(n, a(alpha), t),
                );
            }
            out.push(w.report(
                format!("stable-limit-convergence/alpha={alpha}/n={n}"),
                ErrorMetric::Abs,
                2.0 / n as f64,
            ));
        }
    }
    out
}

fn tau_law(_: &Ctx) -> Vec<VerificationReport> {
    let mut w = Worst::default();
    w.abs(1.0, val(tau_pgf(1.0)));
    w.abs(0.0, val(tau_pgf(0.0)));
    w.abs(1.0 / 3.0, val(tau_pgf(0.5)));
    w.abs(0.125, tau_pmf::<f64>(3));
    for k in 1..=30 {
        w.abs(0.5f64.powi(k), tau_pmf::<f64>(k as u32));
    }
    let mean: f64 = (1..=200).map(|k| k as f64 * tau_pmf::<f64>(k)).sum();
    w.abs(2.0, mean);
    let pgf_series: f64 = (1..=200)
        .map(|k| 0.75f64.powi(k) * tau_pmf::<f64>(k as u32))
        .sum();
    w.abs(val(tau_pgf(0.75)), pgf_series);
    w.push(
        0.0,
        0.0,
        if tau_pgf(2.0).is_err() {
            0.0
        } else {
            f64::INFINITY
        },
    );
    vec![w.report("tau-law", ErrorMetric::Abs, EXACT_TOL)]
}

#[derive(Clone, Copy, Debug)]
enum ExactFamily {
    TwoPoint,
    Uniform,
    Pareto,
    Mixture,
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `(F(t), G(t))` at `α = 1` and `t = r²`, in exact arithmetic. The mixture
/// uses `p = ½`, whose transform involves `t^{-1/2} = 1/r`.
fn exact_parts(fam: ExactFamily, r: &BigRational) -> (BigRational, BigRational) {
    let one = rational(1, 1);
    let half = rational(1, 2);
    let t = r * r;
    if t < one {
        return match fam {
            ExactFamily::Uniform => ((&one + &t) / rational(2, 1), &t / rational(2, 1)),
            _ => (half, rational(0, 1)),
        };
    }
    let inv = one.clone() / &t;
    match fam {
        ExactFamily::TwoPoint => (one.clone(), one - inv),
        ExactFamily::Uniform => (one.clone(), one - inv / rational(2, 1)),
        ExactFamily::Pareto => {
            let g = &one - &inv;
            (&one - &inv * &inv / rational(2, 1), &g * &g)
        }
        ExactFamily::Mixture => {
            let s = one.clone() / r;
            (&one - &s / rational(4, 1), one - s)
        }
    }
}

fn exact_step(fam: ExactFamily) -> StepDistribution<f64> {
    match fam {
        ExactFamily::TwoPoint => two_point(),
        ExactFamily::Uniform => StepDistribution::uniform(),
        ExactFamily::Pareto => StepDistribution::pareto(2.0).expect("valid"),
        ExactFamily::Mixture => StepDistribution::mixture(0.5).expect("valid"),
    }
}

fn phi_series_exact(_: &Ctx) -> Vec<VerificationReport> {
    let bound = rational(1, 1) / BigRational::from_integer(BigInt::from(2).pow(55));
    let roots = [(1, 2), (1, 1), (3, 2), (2, 1), (3, 1), (10, 1), (100, 1)];
    let families = [
        ExactFamily::TwoPoint,
        ExactFamily::Uniform,
        ExactFamily::Pareto,
        ExactFamily::Mixture,
    ];
    let mut gap_worst = Worst::default();
    let mut parts_worst = Worst::default();
    let mut below_bound = true;
    for fam in families {
        let law = excursion(exact_step(fam), 1.0);
        for &(n, d) in &roots {
            let r = rational(n, d);
            let (f, g) = exact_parts(fam, &r);
            let t = (&r * &r).to_f64().expect("finite");
            match law.parts(t) {
                Ok((f64_f, f64_g)) => {
                    parts_worst.abs(f.to_f64().expect("finite"), f64_f);
                    parts_worst.abs(g.to_f64().expect("finite"), f64_g);
                }
                Err(_) => parts_worst.push(0.0, f64::NAN, f64::NAN),
            }
            let mut sum = rational(0, 1);
            for k in 1..=60 {
                sum += phi_closed_form(k, f.clone(), g.clone());
            }
            let closed = overshoot_closed_form(f, g);
            let gap = &closed - &sum;
            below_bound &= gap >= rational(0, 1) && gap <= bound;
            gap_worst.push(
                closed.to_f64().expect("finite"),
                sum.to_f64().expect("finite"),
                gap.to_f64().expect("finite").abs(),
            );
        }
    }
    let tolerance = 0.5f64.powi(55);
    let mut gap_report = gap_worst.report("phi-series-exact/gap", ErrorMetric::Abs, tolerance);
    if !below_bound {
        gap_report.verdict = super::report::Verdict::Fail;
    }
    vec![
        gap_report,
        parts_worst.report(
            "phi-series-exact/parts-match-double",
            ErrorMetric::Abs,
            1e-14,
        ),
    ]
}

fn phi_series_double(_: &Ctx) -> Vec<VerificationReport> {
    let mut w = Worst::default();
    for &alpha in &[0.5, 1.0] {
        for d in closed_form_families(alpha) {
            let law = excursion(d, alpha);
            for &t in &[0.25, 0.5, 0.999, 1.0, 1.5, 2.0, 10.0, 1e3] {
                w.abs(val(law.overshoot_cdf(t)), val(law.phi_partial_sum(60, t)));
            }
        }
    }
    vec![w.report("phi-series-double", ErrorMetric::Abs, 1e-14)]
}

fn overshoot_examples(_: &Ctx) -> Vec<VerificationReport> {
    let law = excursion(two_point(), 1.0);
    let mut w = Worst::default();
    for &t in &[0.1, 0.5, 0.99] {
        w.abs(0.0, val(law.overshoot_cdf(t)));
    }
    w.abs(7.0 / 9.0, val(law.overshoot_cdf(2.0)));
    let far = val(law.overshoot_cdf(1e6));
    w.push(1.0, far, (1.0 - 1e-6 - far).max(0.0));
    w.abs(0.1875, val(law.phi_n(2, 2.0)));
    for &t in &[0.5, 3.0] {
        let (f, _) = law.parts(t).unwrap_or((f64::NAN, f64::NAN));
        w.abs(f - 0.5, val(law.phi_n(1, t)));
    }
    let mut tail = Worst::default();
    for n in 1..=10 {
        tail.abs(0.5f64.powi(n as i32), val(law.phi_n(n, 1e6)));
    }
    vec![
        w.report("overshoot-examples", ErrorMetric::Abs, EXACT_TOL),
        tail.report("overshoot-examples/phi-limit", ErrorMetric::Abs, 1e-6),
    ]
}

fn first_passage_extraction(ctx: &Ctx) -> Vec<VerificationReport> {
    let id = "first-passage-extraction".to_string();
    let cfg = WalkConfig::new(StepDistribution::uniform(), a(0.8), 60, 2_000)
        .with_seed(ctx.seed)
        .with_passage(0.0, Direction::Up);
    let batch = match simulate_batch(&cfg) {
        Ok(b) => b,
        Err(e) => return vec![failed(id, e)],
    };
    let mismatches = batch
        .passages()
        .iter()
        .filter(|p| {
            let traj = batch.trajectory(p.path_id).expect("stored");
            first_passage(traj, 0.0, Direction::Up) != p.tau.zip(p.overshoot)
        })
        .count();
    vec![VerificationReport::abs(id, 0.0, mismatches as f64, 0.0).with_sample_size(cfg.n_paths)]
}

// ---------------------------------------------------------------------------
// quadrature identities

fn inversion_round_trip(_: &Ctx) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for &alpha in &[0.5f64, 1.0, 1.7] {
        for d in closed_form_families(alpha.min(1.0)) {
            let name = format!("{}/alpha={alpha}", family_name(&d));
            let law = LawTransform::new(d.clone(), a(alpha));
            let (mut exact, mut numeric) = (Worst::default(), Worst::default());
            for i in 1..=200 {
                let t = 5.0 * i as f64 / 200.0;
                if d.magnitude_cdf(t) != d.magnitude_cdf_left(t) {
                    continue;
                }
                let target = d.cdf(t);
                exact.abs(target, val(inverse(&law, t)));
                match inverse_numeric(&law, t) {
                    Ok(v) => numeric.abs(target, v),
                    Err(Error::Jump { .. }) => {}
                    Err(_) => numeric.push(target, f64::NAN, f64::NAN),
                }
            }
            out.push(exact.report(
                format!("inversion-round-trip/analytic/{name}"),
                ErrorMetric::Abs,
                1e-8,
            ));
            out.push(numeric.report(
                format!("inversion-round-trip/finite-difference/{name}"),
                ErrorMetric::Abs,
                1e-4,
            ));
        }
    }
    out
}

fn atom_points(d: &StepDistribution<f64>, t: f64) -> Vec<f64> {
    if let StepDistribution::TabulatedSymmetric(tab) = d {
        return tab.grid().iter().copied().filter(|&g| g < t).collect();
    }
    match d {
        StepDistribution::SymmetricTwoPoint { x } if *x < t => vec![*x],
        StepDistribution::TwoPointParetoMixture { .. }
        | StepDistribution::SymmetricPareto { .. }
            if t > 1.0 =>
        {
            vec![1.0]
        }
        _ => vec![],
    }
}

fn integration_by_parts(_: &Ctx) -> Vec<VerificationReport> {
    let q = Quadrature::with_abs_tol(1e-13);
    let mut out = Vec::new();
    let mut families = closed_form_families(1.0);
    families.push(
        StepDistribution::tabulated(vec![0.5, 1.0, 2.0, 4.0], vec![0.6, 0.75, 0.9, 1.0])
            .expect("valid"),
    );
    for d in families {
        let mut w = Worst::default();
        for &alpha in &[0.5, 1.0, 2.0] {
            for &t in &[0.3, 0.8, 1.5, 2.5, 6.0] {
                let mut pts = vec![0.0];
                pts.extend(atom_points(&d, t));
                pts.push(t);
                let lhs = q
                    .integrate_piecewise(|x: f64| x.powf(alpha - 1.0) * d.cdf(x), &pts)
                    .map(|v| 2.0 * alpha * v);
                let rhs = g_of(&d, a(alpha), t).map(|g| t.powf(alpha) * (g + 1.0));
                w.abs(val(rhs), val(lhs));
            }
        }
        out.push(w.report(
            format!("integration-by-parts/{}", family_name(&d)),
            ErrorMetric::Abs,
            1e-8,
        ));
    }
    out
}

fn transform_by_quadrature(_: &Ctx) -> Vec<VerificationReport> {
    let mut w = Worst::default();
    for d in closed_form_families(0.75) {
        for &alpha in &[0.5, 1.0, 2.0] {
            for &t in &[0.3, 1.0, 2.0, 9.0] {
                w.abs(
                    val(g_of(&d, a(alpha), t)),
                    val(g_by_quadrature(&d, a(alpha), t)),
                );
            }
        }
    }
    vec![w.report("transform-by-quadrature", ErrorMetric::Abs, 1e-8)]
}

fn overshoot_moment_quadrature(_: &Ctx) -> Vec<VerificationReport> {
    let cases = [
        ("two-point/alpha=1", two_point(), 1.0, 2.0),
        ("two-point/alpha=0.5", two_point(), 0.5, 2.0),
        ("uniform/alpha=1", StepDistribution::uniform(), 1.0, 1.0),
        (
            "pareto/alpha=1",
            StepDistribution::pareto(2.0).expect("valid"),
            1.0,
            4.0,
        ),
        (
            "pareto/alpha=0.8",
            StepDistribution::pareto(1.6).expect("valid"),
            0.8,
            4.0,
        ),
        (
            "mixture/alpha=0.25",
            StepDistribution::mixture(0.5).expect("valid"),
            0.25,
            3.0,
        ),
    ];
    let mut out = Vec::new();
    for (name, d, alpha, value) in cases {
        let law = excursion(d, alpha);
        let moment = law.overshoot_alpha_moment();
        out.push(VerificationReport::abs(
            format!("overshoot-moment-quadrature/{name}/identity"),
            value,
            moment,
            0.0,
        ));
        out.push(VerificationReport::rel(
            format!("overshoot-moment-quadrature/{name}"),
            moment,
            val(law.overshoot_alpha_moment_quadrature()),
            1e-6,
        ));
    }
    out
}

fn power_density_quadrature(_: &Ctx) -> Vec<VerificationReport> {
    let q = Quadrature::with_abs_tol(1e-12);
    let mut w = Worst::default();
    for &(n, alpha) in &[(5u32, 0.7), (2, 1.0), (3, 0.4)] {
        let mass = q.integrate_to_infinity(|t| two_point_power_density(n, a(alpha), t), 1.0);
        w.abs(0.5, val(mass));
        let pmass = q.integrate_to_infinity(|t| pareto_power_density(n, a(alpha.min(1.0)), t), 1.0);
        w.abs(0.5, val(pmass));
    }
    for &(n, alpha, t) in &[(3u32, 1.0, 2.0), (2, 1.0, 2.0), (6, 0.6, 4.5)] {
        let below = val(q
            .integrate_to_infinity(|s| two_point_power_density(n, a(alpha), s), t)
            .map(|v| 1.0 - v));
        let law = ConvolutionPowerLaw::new(two_point(), n, a(alpha)).expect("valid");
        w.abs(below, val(law.cdf(t)));
        w.abs(
            below,
            val(example_cdf(ExampleFamily::TwoPoint, n, a(alpha), t)),
        );
    }
    w.abs(
        0.875,
        val(ConvolutionPowerLaw::new(two_point(), 2, a(1.0)).and_then(|l| l.cdf(2.0))),
    );
    vec![w.report("power-density-quadrature", ErrorMetric::Abs, 1e-8)]
}

// ---------------------------------------------------------------------------
// Monte Carlo laws

fn step_sampler_ks(ctx: &Ctx) -> Vec<VerificationReport> {
    let n = ctx.size(100_000);
    closed_form_families(0.8)
        .into_iter()
        .enumerate()
        .map(|(k, d)| {
            let mut rng = RngStream::new(ctx.seed, k as u64);
            let xs = (0..n).map(|_| d.sample(&mut rng)).collect();
            ks_report(format!("step-sampler-ks/{}", family_name(&d)), xs, |t| {
                d.cdf(t)
            })
        })
        .collect()
}

fn step_kernel_pareto_tail(ctx: &Ctx) -> Vec<VerificationReport> {
    let n = ctx.size(200_000);
    let d = two_point();
    let mut out = Vec::new();
    for (k, &alpha) in [0.5, 1.0].iter().enumerate() {
        let mut rng = RngStream::new(ctx.seed, k as u64);
        let xs: Vec<f64> = (0..n)
            .map(|_| step_kernel(1.0, &d, a(alpha), &mut rng))
            .collect();
        for s in [2.0f64, 4.0] {
            let hits = xs.iter().filter(|v| v.abs() > s).count();
            out.push(binomial_report(
                format!("step-kernel-pareto-tail/alpha={alpha}/s={s}"),
                hits,
                n,
                s.powf(-2.0 * alpha),
            ));
        }
        let pos = xs.iter().filter(|v| **v > 0.0).count();
        out.push(binomial_report(
            format!("step-kernel-pareto-tail/alpha={alpha}/sign"),
            pos,
            n,
            0.5,
        ));
    }
    out
}

fn transition_mc(ctx: &Ctx) -> Vec<VerificationReport> {
    let n = ctx.size(1_000_000);
    let d = two_point();
    let mut out = Vec::new();
    for (k, &(x, t, alpha)) in [(1.0, 2.0, 1.0), (0.5, 1.5, 0.7), (-2.0, 3.0, 1.5)]
        .iter()
        .enumerate()
    {
        let mut rng = RngStream::new(ctx.seed, k as u64);
        let hits = (0..n)
            .filter(|_| {
                let v = step_kernel(x, &d, a(alpha), &mut rng);
                v > 0.0 && v < t
            })
            .count();
        let p = val(transition_cdf(x, &d, t, a(alpha)));
        out.push(binomial_report(
            format!("transition-mc/x={x}/t={t}/alpha={alpha}"),
            hits,
            n,
            p,
        ));
    }
    out
}

fn hitting_time_geometric(ctx: &Ctx) -> Vec<VerificationReport> {
    let n = ctx.size(1_000_000);
    let mut out = Vec::new();
    let cases = [
        (two_point(), 0.5),
        (two_point(), 1.0),
        (StepDistribution::uniform(), 0.5),
        (StepDistribution::uniform(), 1.0),
    ];
    for (k, (d, alpha)) in cases.into_iter().enumerate() {
        let id = format!("hitting-time-geometric/{}/alpha={alpha}", family_name(&d));
        let batch = match passage_batch(d, alpha, n, ctx.seed.wrapping_add(k as u64)) {
            Ok(b) => b,
            Err(e) => {
                out.push(failed(id, e));
                continue;
            }
        };
        let mut counts = [0usize; 11];
        for p in batch.passages() {
            if let Some(tau) = p.tau.filter(|&t| t <= 10) {
                counts[tau] += 1;
            }
        }
        let mut w = Worst::default();
        for (kk, &c) in counts.iter().enumerate().skip(1) {
            let p = tau_pmf::<f64>(kk as u32);
            w.push(p, c as f64 / n as f64, binomial_z(c, n, p).abs());
        }
        let unattained = batch.passages().iter().filter(|p| p.tau.is_none()).count();
        out.push(
            w.report(id.clone(), ErrorMetric::ZScore, Z_TOL)
                .with_sample_size(n),
        );
        out.push(
            VerificationReport::abs(format!("{id}/unattained"), 0.0, unattained as f64, 0.0)
                .with_sample_size(n),
        );
    }
    out
}

fn marginal_ks(ctx: &Ctx) -> Vec<VerificationReport> {
    let n = ctx.size(100_000);
    let alpha = 0.8;
    let mut out = Vec::new();
    for (k, fam) in EXAMPLES.into_iter().enumerate() {
        let d = fam.step_distribution(a(alpha)).expect("valid");
        let cfg = WalkConfig::new(d, a(alpha), 10, n)
            .with_seed(ctx.seed.wrapping_add(k as u64))
            .with_checkpoints([2, 5, 10])
            .with_storage_limit(0);
        let batch = match simulate_batch(&cfg) {
            Ok(b) => b,
            Err(e) => {
                out.push(failed(format!("marginal-ks/{}", example_name(fam)), e));
                continue;
            }
        };
        for step in [2u32, 5, 10] {
            let xs = batch.marginal(step as usize).expect("checkpoint");
            out.push(ks_report(
                format!("marginal-ks/{}/n={step}", example_name(fam)),
                xs,
                |t| val(example_cdf(fam, step, a(alpha), t)),
            ));
        }
    }
    out
}

fn overshoot_ks(ctx: &Ctx) -> Vec<VerificationReport> {
    let n = ctx.size(1_000_000);
    let mut out = Vec::new();
    for (k, (d, alpha)) in [
        (two_point(), 1.0),
        (StepDistribution::uniform(), 1.0),
        (two_point(), 0.5),
    ]
    .into_iter()
    .enumerate()
    {
        let id = format!("overshoot-ks/{}/alpha={alpha}", family_name(&d));
        let law = excursion(d.clone(), alpha);
        match passage_batch(d, alpha, n, ctx.seed.wrapping_add(k as u64)) {
            Ok(batch) => {
                let xs: Vec<f64> = batch.attained_passages().map(|(_, x)| x).collect();
                out.push(ks_report(id, xs, |t| {
                    if t > 0.0 {
                        val(law.overshoot_cdf(t))
                    } else {
                        0.0
                    }
                }));
            }
            Err(e) => out.push(failed(id, e)),
        }
    }
    out
}

fn overshoot_spot(ctx: &Ctx) -> Vec<VerificationReport> {
    let n = ctx.size(1_000_000);
    let id = "overshoot-spot/two-point/alpha=1/t=2".to_string();
    let law = excursion(two_point(), 1.0);
    match passage_batch(two_point(), 1.0, n, ctx.seed) {
        Ok(batch) => {
            let xs: Vec<f64> = batch.attained_passages().map(|(_, x)| x).collect();
            let hits = xs.iter().filter(|&&x| x < 2.0).count();
            vec![binomial_report(
                id,
                hits,
                xs.len(),
                val(law.overshoot_cdf(2.0)),
            )]
        }
        Err(e) => vec![failed(id, e)],
    }
}

fn wiener_hopf_mc(ctx: &Ctx) -> Vec<VerificationReport> {
    let n = ctx.size(1_000_000);
    let mut out = Vec::new();
    for (k, (d, alpha)) in [(two_point(), 1.0), (StepDistribution::uniform(), 0.5)]
        .into_iter()
        .enumerate()
    {
        let id = format!("wiener-hopf-mc/{}/alpha={alpha}", family_name(&d));
        let law = excursion(d.clone(), alpha);
        let batch = match passage_batch(d, alpha, n, ctx.seed.wrapping_add(k as u64)) {
            Ok(b) => b,
            Err(e) => {
                out.push(failed(id, e));
                continue;
            }
        };
        let mut w = Worst::default();
        for &s in &[0.25, 0.5, 0.75, 1.0] {
            for &u in &[0.1, 0.25, 0.5, 0.9] {
                let (mean, se) = wiener_hopf_estimate(batch.attained_passages(), n, a(alpha), s, u);
                let h = val(law.wiener_hopf_h(s, u));
                w.push(h, mean, (mean - h).abs() / se);
            }
        }
        out.push(w.report(id, ErrorMetric::ZScore, Z_TOL).with_sample_size(n));
    }
    out
}

fn mode_equivalence(ctx: &Ctx) -> Vec<VerificationReport> {
    let n = ctx.size(100_000);
    let alpha = 0.8;
    let mut out = Vec::new();
    for (k, d) in [two_point(), StepDistribution::uniform()]
        .into_iter()
        .enumerate()
    {
        let id = format!("mode-equivalence/{}", family_name(&d));
        let base = WalkConfig::new(d, a(alpha), 5, n)
            .with_checkpoints([5])
            .with_storage_limit(0);
        let seed = ctx.seed.wrapping_add(2 * k as u64);
        let kernel = simulate_batch(&base.clone().with_seed(seed));
        let recursion = simulate_batch(&base.with_mode(WalkMode::Recursion).with_seed(seed + 1));
        match (kernel, recursion) {
            (Ok(kb), Ok(rb)) => {
                let ek = EmpiricalCdf::new(kb.marginal(5).expect("checkpoint"));
                let er = EmpiricalCdf::new(rb.marginal(5).expect("checkpoint"));
                let d = ks_two_sample(&ek, &er);
                out.push(
                    VerificationReport::new(
                        id,
                        0.0,
                        d,
                        d,
                        ErrorMetric::Ks,
                        ks_two_sample_critical_value(n, n),
                    )
                    .with_sample_size(2 * n),
                );
            }
            (Err(e), _) | (_, Err(e)) => out.push(failed(id, e)),
        }
    }
    out
}

fn phi_two_mc(ctx: &Ctx) -> Vec<VerificationReport> {
    let n = ctx.size(1_000_000);
    let id = "phi-two-mc/two-point/alpha=1/t=2".to_string();
    let law = excursion(two_point(), 1.0);
    let cfg = WalkConfig::new(two_point(), a(1.0), 2, n)
        .with_seed(ctx.seed)
        .with_checkpoints([1, 2])
        .with_storage_limit(0);
    match simulate_batch(&cfg) {
        Ok(batch) => {
            let (x1, x2) = (
                batch.marginal(1).expect("checkpoint"),
                batch.marginal(2).expect("checkpoint"),
            );
            let hits = x1
                .iter()
                .zip(&x2)
                .filter(|(a, b)| **a <= 0.0 && **b > 0.0 && **b < 2.0)
                .count();
            vec![binomial_report(id, hits, n, val(law.phi_n(2, 2.0)))]
        }
        Err(e) => vec![failed(id, e)],
    }
}

fn geometric_kendall_mc(ctx: &Ctx) -> Vec<VerificationReport> {
    let n = ctx.size(400_000);
    let mut out = Vec::new();
    for (k, &(s, t)) in [(1.0, 2.0), (0.5, 1.5), (0.25, 3.0)].iter().enumerate() {
        let id = format!("geometric-kendall-mc/two-point/alpha=1/s={s}/t={t}");
        let z = match GeometricKendall::new(s, excursion(two_point(), 1.0)) {
            Ok(z) => z,
            Err(e) => {
                out.push(failed(id, e));
                continue;
            }
        };
        let mut rng = RngStream::new(ctx.seed, k as u64);
        let vals: Vec<f64> = (0..n)
            .map(|_| psi(a(1.0), z.sample(&mut rng) / t))
            .collect();
        let est = MeanEstimate::from_values(&vals);
        let exact = val(geometric_kendall_transform(&z, t));
        out.push(
            VerificationReport::new(
                id,
                exact,
                est.mean,
                est.z_score(exact).abs(),
                ErrorMetric::ZScore,
                Z_TOL,
            )
            .with_sample_size(n),
        );
    }
    out
}

fn overshoot_moment_mc(ctx: &Ctx) -> Vec<VerificationReport> {
    let n = ctx.size(1_000_000);
    let mut out = Vec::new();
    for (k, (d, alpha)) in [(two_point(), 1.0), (StepDistribution::uniform(), 1.0)]
        .into_iter()
        .enumerate()
    {
        let id = format!("overshoot-moment-mc/{}/alpha={alpha}", family_name(&d));
        let law = excursion(d.clone(), alpha);
        match passage_batch(d, alpha, n, ctx.seed.wrapping_add(k as u64)) {
            Ok(batch) => {
                let xs: Vec<f64> = batch
                    .attained_passages()
                    .map(|(_, x)| x.powf(alpha))
                    .collect();
                let est = median_of_means(&xs, 32);
                out.push(
                    VerificationReport::rel(id, law.overshoot_alpha_moment(), est, 0.05)
                        .with_sample_size(xs.len()),
                );
            }
            Err(e) => out.push(failed(id, e)),
        }
    }
    out
}
