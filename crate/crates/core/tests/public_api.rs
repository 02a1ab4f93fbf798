use kendall::verify::{run_suite, ErrorMetric, Verdict, SUITES};
use kendall::{
    convolve_point, forward, g_of, inverse, simulate_batch, Alpha32, Alpha64,
    ConvolutionPowerLaw64, Direction, ExcursionLaw32, ExcursionLaw64, LawTransform64,
    StepDistribution32, StepDistribution64, WalkConfig64, WalkMode,
};

fn a(v: f64) -> Alpha64 {
    Alpha64::new(v).unwrap()
}

#[test]
fn every_suite_passes_at_smoke_scale() {
    for suite in SUITES {
        let reports = run_suite(suite, 7, 0.02).unwrap();
        assert!(!reports.is_empty());
        for r in &reports {
            assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        }
    }
}

#[test]
fn reports_replay_from_their_seed() {
    let first = run_suite("mc-laws", 19, 0.01).unwrap();
    let again = run_suite("mc-laws", 19, 0.01).unwrap();
    assert_eq!(first.len(), again.len());
    for (x, y) in first.iter().zip(&again) {
        assert_eq!(
            (x.check_id.as_str(), x.estimate.to_bits(), x.seed),
            (y.check_id.as_str(), y.estimate.to_bits(), y.seed)
        );
    }
    assert!(first.iter().any(|r| r.metric == ErrorMetric::Ks));
}

#[test]
fn transform_then_invert_recovers_each_family() {
    for d in [
        StepDistribution64::uniform(),
        StepDistribution64::pareto(1.5).unwrap(),
        StepDistribution64::mixture(0.3).unwrap(),
    ] {
        for alpha in [0.5, 1.0, 2.0] {
            let law = LawTransform64::new(d.clone(), a(alpha));
            for i in 1..=40 {
                let t = 0.123 * i as f64;
                if (t - 1.0).abs() < 1e-9 {
                    continue;
                }
                let f = inverse(&law, t).unwrap();
                assert!((f - d.cdf(t)).abs() < 1e-8, "{d} alpha={alpha} t={t}");
            }
        }
    }
}

#[test]
fn point_convolution_multiplies_transforms() {
    let alpha = a(0.7);
    let law = convolve_point(0.4, -1.3, alpha);
    let two = |x: f64| StepDistribution64::two_point(x).unwrap();
    for t in [0.1, 0.5, 0.75, 2.0] {
        let product = forward(&two(0.4), alpha, t).unwrap() * forward(&two(1.3), alpha, t).unwrap();
        assert!((law.williamson(t) - product).abs() < 1e-12);
    }
}

#[test]
fn power_law_transform_is_a_power() {
    let d = StepDistribution64::uniform();
    let p = ConvolutionPowerLaw64::new(d.clone(), 4, a(1.3)).unwrap();
    for t in [0.2, 1.0, 3.0] {
        let g = g_of(&d, a(1.3), t).unwrap();
        assert!((p.williamson(1.0 / t).unwrap() - g.powi(4)).abs() < 1e-14);
    }
}

#[test]
fn batches_are_deterministic_and_mode_aware() {
    let base = WalkConfig64::new(StepDistribution64::pareto(2.0).unwrap(), a(1.0), 30, 200)
        .with_seed(5)
        .with_passage(0.0, Direction::Up);
    let k1 = simulate_batch(&base).unwrap();
    let k2 = simulate_batch(&base.clone()).unwrap();
    assert_eq!(k1.trajectory(17), k2.trajectory(17));
    let r = simulate_batch(&base.clone().with_mode(WalkMode::Recursion)).unwrap();
    assert_ne!(k1.trajectory(17), r.trajectory(17));
    for p in k1.passages() {
        if let (Some(tau), Some(x)) = (p.tau, p.overshoot) {
            let path = k1.trajectory(p.path_id).unwrap();
            assert_eq!(path[tau - 1], x);
            assert!(path[..tau - 1].iter().all(|&v| v <= 0.0));
        }
    }
}

#[test]
fn single_precision_aliases() {
    let d = StepDistribution32::two_point(1.0).unwrap();
    let law = ExcursionLaw32::new(d, Alpha32::new(1.0).unwrap()).unwrap();
    let wide = ExcursionLaw64::new(StepDistribution64::two_point(1.0).unwrap(), a(1.0)).unwrap();
    for t in [0.5f32, 1.5, 2.0, 4.0] {
        let narrow = law.overshoot_cdf(t).unwrap() as f64;
        assert!((narrow - wide.overshoot_cdf(t as f64).unwrap()).abs() < 1e-6);
    }
    assert!((wide.overshoot_cdf(2.0).unwrap() - 7.0 / 9.0).abs() < 1e-15);
}
