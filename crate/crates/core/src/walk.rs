//! Exact simulation of the Kendall random walk.
//!
//! Two step rules are available. [`step_kernel`] draws from the Markov kernel
//! `δ_x △_α ν` directly; [`step_recursion`] follows the max/min recursion with
//! an explicit sign variable and a uniform switch between the point and Pareto
//! branches. Both produce the same marginal laws; the kernel rule is the
//! default.

use rayon::prelude::*;

use crate::convolution::convolve_point;
use crate::error::{Error, Result};
use crate::measures::{Alpha, StepDistribution};
use crate::rng::RngStream;
use crate::scalar::Real;

/// Paths × steps above which trajectories are not kept in memory.
pub const DEFAULT_STORAGE_LIMIT: usize = 10_000_000;
/// Paths × steps above which a batch is refused.
pub const DEFAULT_STEP_BUDGET: u128 = 100_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkMode {
    /// Sample `δ_x △_α ν` each step.
    Kernel,
    /// Max/min recursion, Pareto branch taken with probability `(m/M)^α`.
    Recursion,
    /// Max/min recursion with the branch orientation reversed: the point
    /// branch is taken with probability `(m/M)^α`. Kept for comparison only;
    /// its marginals do not match the convolution powers.
    RecursionLiteral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// First `n >= 1` with `X_n > level`.
    Up,
    /// First `n >= 1` with `X_n < level`.
    Down,
}

/// One step from `x` under the Markov kernel.
pub fn step_kernel<T: Real>(
    x: T,
    dist: &StepDistribution<T>,
    alpha: Alpha<T>,
    rng: &mut RngStream,
) -> T {
    let y = dist.sample(rng);
    convolve_point(x, y, alpha).sample(rng)
}

fn symmetric_pareto_2alpha<T: Real>(alpha: Alpha<T>, rng: &mut RngStream) -> T {
    let u: T = rng.uniform_open_closed();
    rng.sign::<T>() * u.powf(-T::one() / (T::two() * alpha.get()))
}

fn recursion_step<T: Real>(
    x: T,
    dist: &StepDistribution<T>,
    alpha: Alpha<T>,
    rng: &mut RngStream,
    pareto_on_low_draw: bool,
) -> T {
    let y = dist.sample(rng);
    let (ax, ay) = (x.abs(), y.abs());
    let big = ax.max(ay);
    if big == T::zero() {
        return T::zero();
    }
    // Sign of the argument attaining the max; ties go to the new step.
    let r = if ax > ay { x.signum() } else { y.signum() };
    let rho = (ax.min(ay) / big).powf(alpha.get());
    let xi: T = rng.uniform();
    if (xi < rho) == pareto_on_low_draw {
        big * r * symmetric_pareto_2alpha(alpha, rng)
    } else {
        big * r
    }
}

/// One step from `x` under the max/min recursion.
pub fn step_recursion<T: Real>(
    x: T,
    dist: &StepDistribution<T>,
    alpha: Alpha<T>,
    rng: &mut RngStream,
) -> T {
    recursion_step(x, dist, alpha, rng, true)
}

/// The recursion with the point branch on the low draw.
pub fn step_recursion_literal<T: Real>(
    x: T,
    dist: &StepDistribution<T>,
    alpha: Alpha<T>,
    rng: &mut RngStream,
) -> T {
    recursion_step(x, dist, alpha, rng, false)
}

/// First index `n >= 1` (1-based into `trajectory`, which holds `X_1, X_2, …`)
/// at which the walk is strictly beyond `level`, with the value there.
pub fn first_passage<T: Real>(
    trajectory: &[T],
    level: T,
    direction: Direction,
) -> Option<(usize, T)> {
    trajectory
        .iter()
        .position(|&v| match direction {
            Direction::Up => v > level,
            Direction::Down => v < level,
        })
        .map(|i| (i + 1, trajectory[i]))
}

#[derive(Clone, Debug)]
pub struct WalkConfig<T> {
    pub dist: StepDistribution<T>,
    pub alpha: Alpha<T>,
    pub n_steps: usize,
    pub n_paths: usize,
    pub mode: WalkMode,
    pub master_seed: u64,
    pub x0: T,
    /// Steps whose marginal samples are retained.
    pub checkpoints: Vec<usize>,
    pub passage_level: T,
    pub passage_direction: Direction,
    pub storage_limit: usize,
    pub step_budget: u128,
}

impl<T: Real> WalkConfig<T> {
    pub fn new(dist: StepDistribution<T>, alpha: Alpha<T>, n_steps: usize, n_paths: usize) -> Self {
        Self {
            dist,
            alpha,
            n_steps,
            n_paths,
            mode: WalkMode::Kernel,
            master_seed: 0,
            x0: T::zero(),
            checkpoints: Vec::new(),
            passage_level: T::zero(),
            passage_direction: Direction::Up,
            storage_limit: DEFAULT_STORAGE_LIMIT,
            step_budget: DEFAULT_STEP_BUDGET,
        }
    }

    pub fn with_mode(mut self, mode: WalkMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_start(mut self, x0: T) -> Self {
        self.x0 = x0;
        self
    }

    pub fn with_checkpoints(mut self, steps: impl IntoIterator<Item = usize>) -> Self {
        let mut steps: Vec<usize> = steps.into_iter().collect();
        steps.sort_unstable();
        steps.dedup();
        self.checkpoints = steps;
        self
    }

    pub fn with_passage(mut self, level: T, direction: Direction) -> Self {
        self.passage_level = level;
        self.passage_direction = direction;
        self
    }

    pub fn with_storage_limit(mut self, values: usize) -> Self {
        self.storage_limit = values;
        self
    }

    pub fn with_step_budget(mut self, path_steps: u128) -> Self {
        self.step_budget = path_steps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.dist.validate()?;
        if self.n_steps == 0 {
            return Err(Error::InvalidConfig("n_steps must be at least 1".into()));
        }
        if self.n_paths == 0 {
            return Err(Error::InvalidConfig("n_paths must be at least 1".into()));
        }
        if !self.x0.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "x0 = {} is not finite",
                self.x0
            )));
        }
        if let Some(&bad) = self
            .checkpoints
            .iter()
            .find(|&&s| s == 0 || s > self.n_steps)
        {
            return Err(Error::InvalidConfig(format!(
                "checkpoint {bad} outside 1..={}",
                self.n_steps
            )));
        }
        Ok(())
    }

    fn total_steps(&self) -> u128 {
        self.n_paths as u128 * self.n_steps as u128
    }

    /// Whether a batch for this configuration keeps full trajectories.
    pub fn stores_trajectories(&self) -> bool {
        self.total_steps() <= self.storage_limit as u128
    }

    #[inline]
    fn step(&self, x: T, rng: &mut RngStream) -> T {
        match self.mode {
            WalkMode::Kernel => step_kernel(x, &self.dist, self.alpha, rng),
            WalkMode::Recursion => step_recursion(x, &self.dist, self.alpha, rng),
            WalkMode::RecursionLiteral => step_recursion_literal(x, &self.dist, self.alpha, rng),
        }
    }
}

/// The first crossing of the configured level on one path; `tau` is `None`
/// when the level was not crossed within the simulated horizon.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FirstPassage<T> {
    pub path_id: usize,
    pub tau: Option<usize>,
    pub overshoot: Option<T>,
}

struct PathOutput<T> {
    values: Vec<T>,
    checkpoints: Vec<T>,
    passage: Option<(usize, T)>,
}

#[derive(Clone, Debug)]
pub struct WalkBatch<T> {
    config: WalkConfig<T>,
    trajectories: Option<Vec<T>>,
    marginals: Vec<(usize, Vec<T>)>,
    passages: Vec<FirstPassage<T>>,
}

impl<T: Real> WalkBatch<T> {
    pub fn config(&self) -> &WalkConfig<T> {
        &self.config
    }

    pub fn has_trajectories(&self) -> bool {
        self.trajectories.is_some()
    }

    /// `X_1, …, X_{n_steps}` of path `i`, when trajectories were stored.
    pub fn trajectory(&self, i: usize) -> Option<&[T]> {
        let n = self.config.n_steps;
        self.trajectories
            .as_ref()
            .filter(|_| i < self.config.n_paths)
            .map(|all| &all[i * n..(i + 1) * n])
    }

    /// Samples of `X_step` across paths, for a checkpoint step or any step
    /// when trajectories are stored.
    pub fn marginal(&self, step: usize) -> Option<Vec<T>> {
        if let Some((_, v)) = self.marginals.iter().find(|(s, _)| *s == step) {
            return Some(v.clone());
        }
        if step == 0 || step > self.config.n_steps {
            return None;
        }
        let all = self.trajectories.as_ref()?;
        let n = self.config.n_steps;
        Some(all.iter().skip(step - 1).step_by(n).copied().collect())
    }

    pub fn checkpoints(&self) -> impl Iterator<Item = (usize, &[T])> {
        self.marginals.iter().map(|(s, v)| (*s, v.as_slice()))
    }

    pub fn passages(&self) -> &[FirstPassage<T>] {
        &self.passages
    }

    /// `(tau, X_tau)` for every path that crossed the level.
    pub fn attained_passages(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.passages
            .iter()
            .filter_map(|p| Some((p.tau?, p.overshoot?)))
    }
}

fn simulate_path<T: Real>(config: &WalkConfig<T>, path: usize, store: bool) -> PathOutput<T> {
    let mut rng = RngStream::new(config.master_seed, path as u64);
    let last_checkpoint = config.checkpoints.last().copied().unwrap_or(0);
    let mut out = PathOutput {
        values: Vec::with_capacity(if store { config.n_steps } else { 0 }),
        checkpoints: Vec::with_capacity(config.checkpoints.len()),
        passage: None,
    };
    let mut next_checkpoint = config.checkpoints.iter().peekable();
    let mut x = config.x0;
    for step in 1..=config.n_steps {
        x = config.step(x, &mut rng);
        if store {
            out.values.push(x);
        }
        if next_checkpoint.peek() == Some(&&step) {
            out.checkpoints.push(x);
            next_checkpoint.next();
        }
        if out.passage.is_none() {
            let crossed = match config.passage_direction {
                Direction::Up => x > config.passage_level,
                Direction::Down => x < config.passage_level,
            };
            if crossed {
                out.passage = Some((step, x));
            }
        }
        if !store && out.passage.is_some() && step >= last_checkpoint {
            break;
        }
    }
    out
}

/// Simulates `n_paths` independent walks; path `i` draws from
/// `RngStream::new(master_seed, i)`, so the batch is reproducible from the
/// configuration alone.
pub fn simulate_batch<T: Real>(config: &WalkConfig<T>) -> Result<WalkBatch<T>> {
    config.validate()?;
    let requested = config.total_steps();
    if requested > config.step_budget {
        return Err(Error::BudgetExceeded {
            requested,
            limit: config.step_budget,
        });
    }
    let store = config.stores_trajectories();
    let outputs: Vec<PathOutput<T>> = (0..config.n_paths)
        .into_par_iter()
        .map(|i| simulate_path(config, i, store))
        .collect();

    let mut trajectories = store.then(|| Vec::with_capacity(config.n_paths * config.n_steps));
    let mut marginals: Vec<(usize, Vec<T>)> = config
        .checkpoints
        .iter()
        .map(|&s| (s, Vec::with_capacity(config.n_paths)))
        .collect();
    let mut passages = Vec::with_capacity(config.n_paths);
    for (path_id, out) in outputs.into_iter().enumerate() {
        if let Some(all) = trajectories.as_mut() {
            all.extend_from_slice(&out.values);
        }
        for (slot, v) in marginals.iter_mut().zip(out.checkpoints) {
            slot.1.push(v);
        }
        passages.push(FirstPassage {
            path_id,
            tau: out.passage.map(|p| p.0),
            overshoot: out.passage.map(|p| p.1),
        });
    }
    Ok(WalkBatch {
        config: config.clone(),
        trajectories,
        marginals,
        passages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{ks_critical_value, ks_distance, EmpiricalCdf};

    fn a(v: f64) -> Alpha<f64> {
        Alpha::new(v).unwrap()
    }

    fn within_3_sigma(hits: usize, n: usize, p: f64) -> bool {
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        (hits as f64 / n as f64 - p).abs() <= 3.0 * sigma
    }

    #[test]
    fn kernel_step_from_origin_is_the_step_law() {
        let n = 100_000;
        for (k, d) in [
            StepDistribution::two_point(1.0).unwrap(),
            StepDistribution::uniform(),
        ]
        .into_iter()
        .enumerate()
        {
            let mut rng = RngStream::new(5, k as u64);
            let xs: Vec<f64> = (0..n)
                .map(|_| step_kernel(0.0, &d, a(0.8), &mut rng))
                .collect();
            let dist = ks_distance(&EmpiricalCdf::new(xs), |t| d.cdf(t));
            assert!(dist < ks_critical_value(n), "{d}: {dist}");
        }
    }

    #[test]
    fn kernel_step_from_unit_two_point_is_pareto() {
        let n = 200_000;
        let d = StepDistribution::two_point(1.0).unwrap();
        for &alpha in &[0.5, 1.0] {
            let mut rng = RngStream::new(6, 0);
            let xs: Vec<f64> = (0..n)
                .map(|_| step_kernel(1.0, &d, a(alpha), &mut rng))
                .collect();
            for s in [2.0, 4.0] {
                let hits = xs.iter().filter(|v| v.abs() > s).count();
                assert!(
                    within_3_sigma(hits, n, f64::powf(s, -2.0 * alpha)),
                    "a={alpha} s={s}"
                );
            }
        }
    }

    #[test]
    fn kernel_step_sign_is_fair() {
        let n = 100_000;
        let d = StepDistribution::uniform();
        let mut rng = RngStream::new(8, 0);
        for x in [0.3, -2.0] {
            let pos = (0..n)
                .filter(|_| step_kernel(x, &d, a(1.0), &mut rng) > 0.0)
                .count();
            assert!(within_3_sigma(pos, n, 0.5));
        }
    }

    #[test]
    fn recursion_first_step_is_the_step_itself() {
        let d = StepDistribution::uniform();
        for seed in 0..100 {
            let mut r1 = RngStream::new(seed, 0);
            let mut r2 = r1.clone();
            assert_eq!(step_recursion(0.0, &d, a(1.0), &mut r1), d.sample(&mut r2));
        }
    }

    #[test]
    fn recursion_takes_pareto_branch_on_ties() {
        let d = StepDistribution::two_point(1.0).unwrap();
        let mut rng = RngStream::new(9, 0);
        let n = 100_000;
        let xs: Vec<f64> = (0..n)
            .map(|_| step_recursion(1.0, &d, a(1.0), &mut rng))
            .collect();
        assert!(xs.iter().all(|v| v.abs() >= 1.0));
        let hits = xs.iter().filter(|v| v.abs() > 2.0).count();
        assert!(within_3_sigma(hits, n, 0.25));
    }

    #[test]
    fn literal_orientation_differs() {
        // From x = 1 with unit two-point steps the literal rule never leaves ±1.
        let d = StepDistribution::two_point(1.0).unwrap();
        let mut rng = RngStream::new(10, 0);
        for _ in 0..1000 {
            assert_eq!(step_recursion_literal(1.0, &d, a(1.0), &mut rng).abs(), 1.0);
        }
    }

    #[test]
    fn first_passage_examples() {
        assert_eq!(
            first_passage(&[-1.0, -2.0, 0.5, 3.0], 0.0, Direction::Up),
            Some((3, 0.5))
        );
        assert_eq!(first_passage(&[-1.0, -2.0, -0.5], 0.0, Direction::Up), None);
        assert_eq!(
            first_passage(&[1.0, -2.0], 0.0, Direction::Down),
            Some((2, -2.0))
        );
        assert_eq!(first_passage(&[0.0, 0.0], 0.0, Direction::Up), None);
        assert_eq!(first_passage::<f64>(&[], 0.0, Direction::Up), None);
    }

    #[test]
    fn single_step_single_path() {
        let cfg =
            WalkConfig::new(StepDistribution::two_point(1.0).unwrap(), a(1.0), 1, 1).with_seed(3);
        let batch = simulate_batch(&cfg).unwrap();
        let traj = batch.trajectory(0).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(traj[0].abs(), 1.0);
    }

    #[test]
    fn batches_are_reproducible() {
        let cfg = WalkConfig::new(StepDistribution::uniform(), a(0.7), 20, 500)
            .with_seed(99)
            .with_checkpoints([5]);
        let b1 = simulate_batch(&cfg).unwrap();
        let b2 = simulate_batch(&cfg).unwrap();
        for i in 0..500 {
            assert_eq!(b1.trajectory(i), b2.trajectory(i));
        }
        assert_eq!(b1.passages(), b2.passages());
        assert_eq!(b1.marginal(5), b2.marginal(5));
        let b3 = simulate_batch(&cfg.clone().with_seed(100)).unwrap();
        assert_ne!(b1.trajectory(0), b3.trajectory(0));
    }

    #[test]
    fn stored_and_streamed_batches_agree() {
        let cfg = WalkConfig::new(StepDistribution::uniform(), a(1.0), 12, 300)
            .with_seed(4)
            .with_checkpoints([3, 12]);
        let stored = simulate_batch(&cfg).unwrap();
        let streamed = simulate_batch(&cfg.clone().with_storage_limit(0)).unwrap();
        assert!(stored.has_trajectories());
        assert!(!streamed.has_trajectories());
        assert_eq!(stored.passages(), streamed.passages());
        assert_eq!(stored.marginal(3), streamed.marginal(3));
        assert_eq!(stored.marginal(12), streamed.marginal(12));
        assert_eq!(streamed.marginal(7), None);
        for p in stored.passages() {
            let traj = stored.trajectory(p.path_id).unwrap();
            assert_eq!(
                first_passage(traj, 0.0, Direction::Up),
                p.tau.zip(p.overshoot)
            );
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let d = StepDistribution::uniform();
        assert!(simulate_batch(&WalkConfig::new(d.clone(), a(1.0), 0, 5)).is_err());
        assert!(simulate_batch(&WalkConfig::new(d.clone(), a(1.0), 5, 0)).is_err());
        assert!(
            simulate_batch(&WalkConfig::new(d.clone(), a(1.0), 5, 5).with_checkpoints([6]))
                .is_err()
        );
        let err = simulate_batch(&WalkConfig::new(d, a(1.0), 100, 100).with_step_budget(1000))
            .unwrap_err();
        assert!(matches!(
            err,
            Error::BudgetExceeded {
                requested: 10_000,
                limit: 1000
            }
        ));
    }

    #[test]
    fn kernel_signs_are_independent_of_the_past() {
        let cfg = WalkConfig::new(StepDistribution::uniform(), a(1.0), 6, 100_000).with_seed(21);
        let batch = simulate_batch(&cfg).unwrap();
        let (x5, x6) = (batch.marginal(5).unwrap(), batch.marginal(6).unwrap());
        let given: Vec<bool> = x5
            .iter()
            .zip(&x6)
            .filter(|(a, _)| **a > 0.0)
            .map(|(_, b)| *b > 0.0)
            .collect();
        let hits = given.iter().filter(|b| **b).count();
        assert!(within_3_sigma(hits, given.len(), 0.5));
    }
}
