//! The Williamson transform `ν̂(t) = E(1 - |tY|^α)_+` and its inverse.
//!
//! Throughout, `G(t) = ν̂(1/t)` for `t > 0`. The inverse recovers the CDF from
//! `G` and its derivative:
//!
//! ```text
//! F(t) = (α (G(t) + 1) + t G'(t)) / (2α),   t > 0,
//! ```
//!
//! valid wherever `F` is continuous.

use crate::error::{Error, Result};
use crate::measures::{Alpha, StepDistribution};
use crate::quadrature::Quadrature;
use crate::scalar::{exprel, Real};

/// Relative mismatch between one-sided slopes that flags a kink in `G`.
pub const JUMP_RELATIVE_TOLERANCE: f64 = 1e-3;
/// Slopes closer than this in absolute terms are never flagged.
pub const JUMP_ABSOLUTE_FLOOR: f64 = 1e-6;
/// Finite-difference step is `FD_STEP * max(t, 1)`.
pub const FD_STEP: f64 = 1e-5;

/// The transform kernel `Ψ(t) = (1 - |t|^α)_+`.
#[inline]
pub fn psi<T: Real>(alpha: Alpha<T>, t: T) -> T {
    (T::one() - t.abs().powf(alpha.get())).max(T::zero())
}

/// `ν̂(t)` for any real `t`.
pub fn forward<T: Real>(dist: &StepDistribution<T>, alpha: Alpha<T>, t: T) -> Result<T> {
    if t == T::zero() {
        return Ok(T::one());
    }
    dist.g(alpha, T::one() / t.abs())
}

/// `G(t) = ν̂(1/t)` for `t > 0`.
pub fn g_of<T: Real>(dist: &StepDistribution<T>, alpha: Alpha<T>, t: T) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::Domain(format!("G(t) needs t > 0, got {t}")));
    }
    dist.g(alpha, t)
}

/// `G(t)` through `G(t) = -1 + 2α t^{-α} ∫_0^t x^{α-1} F(x) dx`, for any
/// family.
///
/// The constant part of `F` is integrated exactly so the integrand stays
/// bounded near zero when `α < 1`.
pub fn g_by_quadrature<T: Real>(dist: &StepDistribution<T>, alpha: Alpha<T>, t: T) -> Result<T> {
    let a = alpha.get();
    if !(t > T::zero()) {
        return Err(Error::Domain(format!("G(t) needs t > 0, got {t}")));
    }
    let mut points = match dist {
        StepDistribution::TabulatedSymmetric(table) => table.breakpoints_to(t),
        _ => vec![T::zero(), t],
    };
    // Split at the jumps of F so each piece is smooth.
    let atom = match *dist {
        StepDistribution::SymmetricTwoPoint { x } => Some(x),
        StepDistribution::SymmetricPareto { .. }
        | StepDistribution::TwoPointParetoMixture { .. } => Some(T::one()),
        _ => None,
    };
    if let Some(x) = atom {
        if x > T::zero() && x < t {
            points.insert(1, x);
        }
    }
    let centred = Quadrature::default().integrate_piecewise(
        |x| x.powf(a - T::one()) * (dist.cdf(x) - T::half()),
        &points,
    )?;
    // For an atom at zero, F(0+) - 1/2 is the half-mass of that atom.
    Ok(T::two() * a * t.powf(-a) * centred)
}

impl<T: Real> StepDistribution<T> {
    /// `G(t)` for `t > 0`: closed form for the parametric families,
    /// quadrature for tables.
    pub fn g(&self, alpha: Alpha<T>, t: T) -> Result<T> {
        let a = alpha.get();
        let one = T::one();
        Ok(match *self {
            Self::SymmetricTwoPoint { x } => psi(alpha, x / t),
            Self::SymmetricPareto { p } => pareto_g(p, a, t),
            Self::SymmetricUniform => {
                if t >= one {
                    one - t.powf(-a) / (a + one)
                } else {
                    a * t / (a + one)
                }
            }
            Self::TwoPointParetoMixture { p } => {
                p * psi(alpha, one / t) + (one - p) * pareto_g(p, a, t)
            }
            Self::TabulatedSymmetric(_) => return g_by_quadrature(self, alpha, t),
        })
    }

    /// Closed-form `G'(t)` where the family has one. At a kink the
    /// right-hand derivative is returned.
    pub fn g_prime(&self, alpha: Alpha<T>, t: T) -> Option<T> {
        let a = alpha.get();
        let one = T::one();
        Some(match *self {
            Self::SymmetricTwoPoint { x } => {
                if t >= x && x > T::zero() {
                    a * x.powf(a) * t.powf(-a - one)
                } else {
                    T::zero()
                }
            }
            Self::SymmetricPareto { p } => pareto_g_prime(p, a, t),
            Self::SymmetricUniform => {
                if t >= one {
                    a * t.powf(-a - one) / (a + one)
                } else {
                    a / (a + one)
                }
            }
            Self::TwoPointParetoMixture { p } => {
                let point = if t >= one {
                    a * t.powf(-a - one)
                } else {
                    T::zero()
                };
                p * point + (one - p) * pareto_g_prime(p, a, t)
            }
            Self::TabulatedSymmetric(_) => return None,
        })
    }
}

// G for pareto(p), t >= 1:
//   1 - t^{-p} [1 + p ln(t) exprel(-(α - p) ln t)]
// which reduces to the logarithmic form when α = p.
fn pareto_g<T: Real>(p: T, a: T, t: T) -> T {
    if t <= T::one() {
        return T::zero();
    }
    let l = t.ln();
    T::one() - t.powf(-p) * (T::one() + p * l * exprel(-(a - p) * l))
}

fn pareto_g_prime<T: Real>(p: T, a: T, t: T) -> T {
    if t < T::one() {
        return T::zero();
    }
    let l = t.ln();
    p * a * t.powf(-p - T::one()) * l * exprel(-(a - p) * l)
}

/// A Williamson transform given through `G`.
pub trait TransformFn<T: Real> {
    fn alpha(&self) -> Alpha<T>;

    /// `G(t)` for `t > 0`.
    fn g(&self, t: T) -> Result<T>;

    /// `G'(t)` when known in closed form.
    fn analytic_g_prime(&self, _t: T) -> Option<T> {
        None
    }

    /// `ν̂(t)` for any real `t`.
    fn transform(&self, t: T) -> Result<T> {
        if t == T::zero() {
            Ok(T::one())
        } else {
            self.g(T::one() / t.abs())
        }
    }
}

/// The transform of a step law.
#[derive(Clone, Debug)]
pub struct LawTransform<T> {
    dist: StepDistribution<T>,
    alpha: Alpha<T>,
}

impl<T: Real> LawTransform<T> {
    pub fn new(dist: StepDistribution<T>, alpha: Alpha<T>) -> Self {
        Self { dist, alpha }
    }

    pub fn dist(&self) -> &StepDistribution<T> {
        &self.dist
    }
}

impl<T: Real> TransformFn<T> for LawTransform<T> {
    fn alpha(&self) -> Alpha<T> {
        self.alpha
    }

    fn g(&self, t: T) -> Result<T> {
        g_of(&self.dist, self.alpha, t)
    }

    fn analytic_g_prime(&self, t: T) -> Option<T> {
        self.dist.g_prime(self.alpha, t)
    }
}

/// `ν̂(t) = exp(-|t|^α)`, i.e. `G(t) = exp(-t^{-α})`: the transform of the
/// stable limit law.
#[derive(Clone, Copy, Debug)]
pub struct StableTransform<T> {
    pub alpha: Alpha<T>,
}

impl<T: Real> TransformFn<T> for StableTransform<T> {
    fn alpha(&self) -> Alpha<T> {
        self.alpha
    }

    fn g(&self, t: T) -> Result<T> {
        if !(t > T::zero()) {
            return Err(Error::Domain(format!("G(t) needs t > 0, got {t}")));
        }
        Ok((-t.powf(-self.alpha.get())).exp())
    }

    fn analytic_g_prime(&self, t: T) -> Option<T> {
        let a = self.alpha.get();
        let u = t.powf(-a);
        Some(a * u / t * (-u).exp())
    }
}

/// Central difference for `G'` with jump detection.
///
/// The one-sided three-point slopes on either side of `t` must agree to
/// within [`JUMP_RELATIVE_TOLERANCE`]; otherwise `t` is reported as a kink of
/// `G` (a jump of `F`).
pub fn finite_difference_g_prime<T: Real, G: TransformFn<T> + ?Sized>(g: &G, t: T) -> Result<T> {
    let h = (T::lit(FD_STEP) * t.max(T::one())).min(t / T::lit(4.0));
    let two = T::two();
    let g0 = g.g(t)?;
    let (gp1, gp2) = (g.g(t + h)?, g.g(t + two * h)?);
    let (gm1, gm2) = (g.g(t - h)?, g.g(t - two * h)?);
    let three = T::lit(3.0);
    let four = T::lit(4.0);
    let right = (-three * g0 + four * gp1 - gp2) / (two * h);
    let left = (three * g0 - four * gm1 + gm2) / (two * h);
    let scale = left.abs().max(right.abs());
    if (right - left).abs() > T::lit(JUMP_RELATIVE_TOLERANCE) * scale + T::lit(JUMP_ABSOLUTE_FLOOR)
    {
        return Err(Error::Jump {
            t: t.as_f64(),
            left: left.as_f64(),
            right: right.as_f64(),
        });
    }
    Ok((gp1 - gm1) / (two * h))
}

fn recover_cdf<T: Real>(alpha: Alpha<T>, t: T, g: T, g_prime: T) -> T {
    let a = alpha.get();
    (a * (g + T::one()) + t * g_prime) / (T::two() * a)
}

/// `F(t)` from the transform, using the analytic derivative when present.
pub fn inverse<T: Real, G: TransformFn<T> + ?Sized>(g: &G, t: T) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::Domain(format!("inversion needs t > 0, got {t}")));
    }
    let d = match g.analytic_g_prime(t) {
        Some(d) => d,
        None => finite_difference_g_prime(g, t)?,
    };
    Ok(recover_cdf(g.alpha(), t, g.g(t)?, d))
}

/// `F(t)` from the transform, always differentiating numerically.
pub fn inverse_numeric<T: Real, G: TransformFn<T> + ?Sized>(g: &G, t: T) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::Domain(format!("inversion needs t > 0, got {t}")));
    }
    let d = finite_difference_g_prime(g, t)?;
    Ok(recover_cdf(g.alpha(), t, g.g(t)?, d))
}

/// `G` known only at a set of nodes, e.g. read back from a CSV.
///
/// Derivatives at the nodes come from the five-point Lagrange interpolant
/// around each node; kinks are flagged by comparing the three-point one-sided
/// interpolants.
#[derive(Clone, Debug)]
pub struct SampledTransform<T> {
    alpha: Alpha<T>,
    t: Vec<T>,
    g: Vec<T>,
}

impl<T: Real> SampledTransform<T> {
    pub fn new(alpha: Alpha<T>, t: Vec<T>, g: Vec<T>) -> Result<Self> {
        if t.len() != g.len() {
            return Err(Error::InvalidTable(format!(
                "{} abscissae but {} transform values",
                t.len(),
                g.len()
            )));
        }
        if t.len() < 3 {
            return Err(Error::InvalidTable("need at least three nodes".into()));
        }
        if t[0] <= T::zero() || t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidTable(
                "abscissae must be positive and strictly increasing".into(),
            ));
        }
        Ok(Self { alpha, t, g })
    }

    pub fn nodes(&self) -> &[T] {
        &self.t
    }

    /// Derivative at node `i` of the polynomial through `nodes`.
    fn lagrange_slope(&self, i: usize, nodes: std::ops::RangeInclusive<usize>) -> T {
        let xi = self.t[i];
        let mut acc = T::zero();
        for j in nodes.clone() {
            let w = if j == i {
                nodes
                    .clone()
                    .filter(|&k| k != i)
                    .fold(T::zero(), |s, k| s + T::one() / (xi - self.t[k]))
            } else {
                let num = nodes
                    .clone()
                    .filter(|&k| k != i && k != j)
                    .fold(T::one(), |s, k| s * (xi - self.t[k]));
                let den = nodes
                    .clone()
                    .filter(|&k| k != j)
                    .fold(T::one(), |s, k| s * (self.t[j] - self.t[k]));
                num / den
            };
            acc = acc + w * self.g[j];
        }
        acc
    }

    /// Third derivative of the cubic through nodes `start..=start + 3`.
    fn third_derivative(&self, start: usize) -> T {
        let x = &self.t[start..start + 4];
        let mut dd: Vec<T> = self.g[start..start + 4].to_vec();
        for order in 1..4 {
            for k in (order..4).rev() {
                dd[k] = (dd[k] - dd[k - 1]) / (x[k] - x[k - order]);
            }
        }
        T::lit(6.0) * dd[3]
    }

    /// Bound on how far the two three-point slopes at node `i` drift apart
    /// on a smooth `G`, with the third derivative taken from the smoother
    /// side.
    fn truncation_allowance(&self, i: usize) -> T {
        let n = self.t.len();
        let mut third: Option<T> = None;
        for start in [i.checked_sub(3), (i + 3 < n).then_some(i)]
            .into_iter()
            .flatten()
        {
            let v = self.third_derivative(start).abs();
            third = Some(third.map_or(v, |m| m.min(v)));
        }
        let Some(third) = third else { return T::zero() };
        let xi = self.t[i];
        let spread = ((xi - self.t[i - 1]) * (xi - self.t[i - 2])).abs()
            + ((xi - self.t[i + 1]) * (xi - self.t[i + 2])).abs();
        T::two() * third * spread / T::lit(6.0)
    }

    /// `G'` at node `i`.
    pub fn node_g_prime(&self, i: usize) -> Result<T> {
        let n = self.t.len();
        if i >= 2 && i + 2 < n {
            let left = self.lagrange_slope(i, i - 2..=i);
            let right = self.lagrange_slope(i, i..=i + 2);
            let scale = left.abs().max(right.abs());
            if (right - left).abs()
                > T::lit(JUMP_RELATIVE_TOLERANCE) * scale
                    + T::lit(JUMP_ABSOLUTE_FLOOR)
                    + self.truncation_allowance(i)
            {
                return Err(Error::Jump {
                    t: self.t[i].as_f64(),
                    left: left.as_f64(),
                    right: right.as_f64(),
                });
            }
        }
        let width = 4.min(n - 1);
        let start = i.saturating_sub(2).min(n - 1 - width);
        Ok(self.lagrange_slope(i, start..=start + width))
    }

    /// `(t_i, F(t_i))` at every node, or the error that prevented inversion
    /// there.
    pub fn invert_nodes(&self) -> Vec<(T, Result<T>)> {
        (0..self.t.len())
            .map(|i| {
                let f = self
                    .node_g_prime(i)
                    .map(|d| recover_cdf(self.alpha, self.t[i], self.g[i], d));
                (self.t[i], f)
            })
            .collect()
    }
}

impl<T: Real> TransformFn<T> for SampledTransform<T> {
    fn alpha(&self) -> Alpha<T> {
        self.alpha
    }

    /// Linear interpolation between nodes, constant beyond them.
    fn g(&self, t: T) -> Result<T> {
        if !(t > T::zero()) {
            return Err(Error::Domain(format!("G(t) needs t > 0, got {t}")));
        }
        let k = self.t.partition_point(|&x| x < t);
        Ok(if k == 0 {
            self.g[0]
        } else if k == self.t.len() {
            self.g[k - 1]
        } else {
            let (t0, t1) = (self.t[k - 1], self.t[k]);
            self.g[k - 1] + (self.g[k] - self.g[k - 1]) * (t - t0) / (t1 - t0)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a(v: f64) -> Alpha<f64> {
        Alpha::new(v).unwrap()
    }

    fn closed_form_families() -> Vec<StepDistribution<f64>> {
        vec![
            StepDistribution::two_point(1.0).unwrap(),
            StepDistribution::two_point(0.4).unwrap(),
            StepDistribution::pareto(2.0).unwrap(),
            StepDistribution::pareto(1.3).unwrap(),
            StepDistribution::uniform(),
            StepDistribution::mixture(0.5).unwrap(),
            StepDistribution::mixture(1.0).unwrap(),
        ]
    }

    fn table() -> StepDistribution<f64> {
        StepDistribution::tabulated(vec![0.5, 1.0, 2.0, 4.0], vec![0.6, 0.75, 0.9, 1.0]).unwrap()
    }

    // Oracle: the defining integral E(1 - |tY|^alpha)_+, by quadrature over
    // the magnitude law (density plus atoms).
    fn transform_by_definition(d: &StepDistribution<f64>, alpha: f64, t: f64) -> f64 {
        let q = Quadrature::with_abs_tol(1e-13);
        let kernel = |y: f64| (1.0 - (y * t).abs().powf(alpha)).max(0.0);
        let reach = 1.0 / t.abs();
        let pareto = |p: f64| {
            if reach <= 1.0 {
                0.0
            } else {
                q.integrate(|y: f64| kernel(y) * p * y.powf(-p - 1.0), 1.0, reach)
                    .unwrap()
            }
        };
        match d {
            StepDistribution::SymmetricTwoPoint { x } => kernel(*x),
            StepDistribution::SymmetricUniform => q.integrate(kernel, 0.0, reach.min(1.0)).unwrap(),
            StepDistribution::SymmetricPareto { p } => pareto(*p),
            StepDistribution::TwoPointParetoMixture { p } => {
                p * kernel(1.0) + (1.0 - p) * pareto(*p)
            }
            StepDistribution::TabulatedSymmetric(tab) => {
                let mut pts = vec![0.0];
                pts.extend(tab.grid().iter().copied().filter(|&g| g < reach));
                let last = *tab.grid().last().unwrap();
                let end = reach.min(last);
                if *pts.last().unwrap() < end {
                    pts.push(end);
                }
                let body = q
                    .integrate_piecewise(|y| kernel(y) * cell_density(d, tab.grid(), y), &pts)
                    .unwrap();
                body + (1.0 - d.magnitude_cdf_left(last)) * kernel(last)
            }
        }
    }

    // Piecewise-constant density of a tabulated magnitude law.
    fn cell_density(d: &StepDistribution<f64>, grid: &[f64], y: f64) -> f64 {
        let i = grid.partition_point(|&g| g <= y);
        if i >= grid.len() {
            return 0.0;
        }
        let lo = if i == 0 { 0.0 } else { grid[i - 1] };
        (d.magnitude_cdf_left(grid[i]) - d.magnitude_cdf(lo)) / (grid[i] - lo)
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(a(1.0), 0.5), 0.5);
        assert_eq!(psi(a(2.0), 3.0), 0.0);
        assert_eq!(psi(a(1.0), 0.0), 1.0);
        assert_eq!(psi(a(1.5), -0.3), psi(a(1.5), 0.3));
    }

    #[test]
    fn forward_examples() {
        let two = StepDistribution::two_point(1.0).unwrap();
        assert_eq!(forward(&two, a(1.0), 0.5).unwrap(), 0.5);
        for t in [0.1, 0.5, 0.9, 1.5] {
            assert!((forward(&two, a(1.3), t).unwrap() - psi(a(1.3), t)).abs() < 1e-15);
        }
        for d in closed_form_families() {
            assert_eq!(forward(&d, a(0.7), 0.0).unwrap(), 1.0);
        }
        let u = StepDistribution::uniform();
        let v = forward(&u, a(1.0), 0.5).unwrap();
        assert!((v - 0.75).abs() < 1e-15);
        assert!((transform_by_definition(&u, 1.0, 0.5) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn g_of_examples() {
        let two = StepDistribution::two_point(1.0).unwrap();
        assert_eq!(g_of(&two, a(1.0), 2.0).unwrap(), 0.5);
        assert!(g_of(&two, a(1.0), 1e8).unwrap() >= 1.0 - 1e-6);
        let par = StepDistribution::pareto(2.0).unwrap();
        let g = g_of(&par, a(1.0), 2.0).unwrap();
        assert!((g - 0.25).abs() < 1e-15);
        assert!((transform_by_definition(&par, 1.0, 0.5) - 0.25).abs() < 1e-10);
        assert!(g_of(&two, a(1.0), 0.0).is_err());
        assert!(g_of(&two, a(1.0), -1.0).is_err());
    }

    #[test]
    fn closed_forms_match_defining_integral() {
        let mut families = closed_form_families();
        families.push(table());
        for d in &families {
            for &alpha in &[0.5, 1.0, 1.3, 2.0] {
                for &t in &[0.05, 0.2, 0.5, 0.9, 1.0, 1.7, 3.0] {
                    let exact = forward(d, a(alpha), t).unwrap();
                    let oracle = transform_by_definition(d, alpha, t);
                    assert!(
                        (exact - oracle).abs() < 1e-9,
                        "{d} a={alpha} t={t}: {exact} vs {oracle}"
                    );
                }
            }
        }
    }

    #[test]
    fn pareto_g_is_smooth_across_alpha_equal_p() {
        let d = StepDistribution::pareto(1.0).unwrap();
        let at = g_of(&d, a(1.0), 3.0).unwrap();
        // Logarithmic form at alpha = p.
        let expected = 1.0 - (1.0 + 3f64.ln()) / 3.0;
        assert!((at - expected).abs() < 1e-15);
        let near = g_of(&d, a(1.0 + 1e-9), 3.0).unwrap();
        assert!((near - at).abs() < 1e-8);
    }

    #[test]
    fn integration_by_parts_identity() {
        let mut families = closed_form_families();
        families.push(table());
        let q = Quadrature::with_abs_tol(1e-13);
        for d in &families {
            for &alpha in &[0.5, 1.0, 2.0] {
                for &t in &[0.3, 0.8, 1.5, 2.5] {
                    // 2α ∫_0^t x^{α-1} F(x) dx = t^α (G(t) + 1), integrand taken verbatim.
                    let mut pts = vec![0.0, t];
                    for atom in [0.4, 1.0] {
                        if atom < t {
                            pts.insert(1, atom);
                        }
                    }
                    if let StepDistribution::TabulatedSymmetric(tab) = d {
                        pts = tab.breakpoints_to(t);
                    }
                    let lhs = 2.0
                        * alpha
                        * q.integrate_piecewise(|x: f64| x.powf(alpha - 1.0) * d.cdf(x), &pts)
                            .unwrap();
                    let rhs = t.powf(alpha) * (g_of(d, a(alpha), t).unwrap() + 1.0);
                    assert!(
                        (lhs - rhs).abs() < 1e-8,
                        "{d} a={alpha} t={t}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn quadrature_route_matches_closed_forms() {
        for d in closed_form_families() {
            for &alpha in &[0.5, 1.0, 2.0] {
                for &t in &[0.3, 1.0, 2.0, 9.0] {
                    let exact = g_of(&d, a(alpha), t).unwrap();
                    let numeric = g_by_quadrature(&d, a(alpha), t).unwrap();
                    assert!((exact - numeric).abs() < 1e-8, "{d} a={alpha} t={t}");
                }
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let alpha = a(1.0);
        let two = LawTransform::new(StepDistribution::two_point(1.0).unwrap(), alpha);
        for t in [0.2, 0.5, 0.9] {
            assert_eq!(inverse(&two, t).unwrap(), 0.5);
        }
        for t in [1.5, 3.0] {
            assert!((inverse(&two, t).unwrap() - 1.0).abs() < 1e-15);
        }
        let stable = StableTransform { alpha };
        let v = inverse(&stable, 1.0).unwrap();
        let expected = 0.5 * (2.0 + std::f64::consts::E) / std::f64::consts::E;
        assert!((v - expected).abs() < 1e-15);
        assert!((v - 0.86787).abs() < 1e-5);
        let uni = LawTransform::new(StepDistribution::uniform(), alpha);
        assert!((inverse(&uni, 0.7).unwrap() - 0.85).abs() < 1e-8);
    }

    #[test]
    fn inversion_round_trip() {
        for d in closed_form_families() {
            for &alpha in &[0.5, 1.0, 1.7] {
                let law = LawTransform::new(d.clone(), a(alpha));
                for i in 1..=200 {
                    let t = 5.0 * i as f64 / 200.0;
                    if d.magnitude_cdf(t) != d.magnitude_cdf_left(t) {
                        continue;
                    }
                    let target = d.cdf(t);
                    let exact = inverse(&law, t).unwrap();
                    assert!((exact - target).abs() <= 1e-8, "{d} a={alpha} t={t}");
                    match inverse_numeric(&law, t) {
                        Ok(v) => assert!((v - target).abs() <= 1e-4, "{d} a={alpha} t={t}: {v}"),
                        Err(Error::Jump { .. }) => {}
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn tabulated_round_trip_uses_finite_differences() {
        let d = table();
        let law = LawTransform::new(d.clone(), a(1.0));
        let mut checked = 0;
        for i in 1..=40 {
            let t = 0.05 + 0.1 * i as f64;
            if let Ok(v) = inverse(&law, t) {
                assert!((v - d.cdf(t)).abs() < 1e-4, "t={t}: {v} vs {}", d.cdf(t));
                checked += 1;
            }
        }
        assert!(checked > 30);
    }

    #[test]
    fn jump_is_reported_not_averaged() {
        let two = LawTransform::new(StepDistribution::two_point(1.0).unwrap(), a(1.0));
        let err = inverse_numeric(&two, 1.0).unwrap_err();
        assert!(matches!(err, Error::Jump { .. }));
        let stepped = StepDistribution::tabulated(vec![1.0, 2.0], vec![0.7, 0.9]).unwrap();
        let tab = LawTransform::new(stepped, a(1.0));
        assert!(matches!(inverse(&tab, 2.0), Err(Error::Jump { .. })));
        assert!(inverse(&tab, 1.5).is_ok());
    }

    #[test]
    fn sampled_transform_inverts_smooth_regions() {
        let d = StepDistribution::uniform();
        let alpha = a(1.0);
        let ts: Vec<f64> = (1..=200).map(|i| 5.0 * i as f64 / 200.0).collect();
        let gs: Vec<f64> = ts.iter().map(|&t| g_of(&d, alpha, t).unwrap()).collect();
        let sampled = SampledTransform::new(alpha, ts, gs).unwrap();
        let mut flagged = 0;
        for (t, f) in sampled.invert_nodes() {
            match f {
                Ok(v) => assert!((v - d.cdf(t)).abs() < 1e-4, "t={t}: {v}"),
                Err(_) => {
                    flagged += 1;
                    assert!((t - 1.0).abs() < 0.2, "spurious kink at {t}");
                }
            }
        }
        assert!(flagged <= 6);
        assert!(SampledTransform::new(alpha, vec![1.0, 0.5, 2.0], vec![0.0; 3]).is_err());
    }

    #[test]
    fn transform_fn_invariants() {
        for d in closed_form_families() {
            let law = LawTransform::new(d.clone(), a(0.9));
            assert_eq!(law.transform(0.0).unwrap(), 1.0);
            let mut prev = 1.0;
            for i in 1..400 {
                let t = 0.02 * i as f64;
                let v = law.transform(t).unwrap();
                assert_eq!(v, law.transform(-t).unwrap());
                assert!((0.0..=1.0).contains(&v));
                assert!(v <= prev + 1e-12, "{d}: not monotone at {t}");
                prev = v;
            }
        }
    }

    #[test]
    fn single_precision_closed_forms() {
        let d = StepDistribution::<f32>::uniform();
        let g = g_of(&d, Alpha::new(1.0f32).unwrap(), 2.0).unwrap();
        assert!((g - 0.75).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn g_is_non_decreasing(alpha in 0.2f64..3.0, t in 0.01f64..20.0, dt in 0.0f64..5.0, idx in 0usize..7) {
            let d = &closed_form_families()[idx];
            let lo = g_of(d, a(alpha), t).unwrap();
            let hi = g_of(d, a(alpha), t + dt).unwrap();
            prop_assert!(hi >= lo - 1e-12);
            prop_assert!((-1e-15..=1.0).contains(&lo));
        }
    }
}
