//! The Kendall convolution `△_α`.
//!
//! Convolving two point masses at `x` and `y` gives, with `M = max(|x|,|y|)`
//! and `ρ = min(|x|,|y|) / M`,
//!
//! ```text
//! δ_x △_α δ_y = T_M( ρ^α · pareto(2α) + (1 - ρ^α) · two-point(1) ),
//! ```
//!
//! a law that depends on `|x|` and `|y|` only and is symmetric in sign. Under
//! the Williamson transform the operation becomes multiplication, so the
//! n-fold power of `ν` has transform `ν̂^n`.

use crate::error::{Error, Result};
use crate::measures::{Alpha, StepDistribution};
use crate::rng::RngStream;
use crate::scalar::Real;
use crate::williamson::{finite_difference_g_prime, psi, LawTransform, TransformFn};

/// `δ_x △_α δ_y` as a scaled two-component mixture.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointConvolutionLaw<T> {
    scale: T,
    pareto_weight: T,
    alpha: Alpha<T>,
}

impl<T: Real> PointConvolutionLaw<T> {
    pub fn scale(&self) -> T {
        self.scale
    }

    /// `ρ^α`, the weight of the Pareto component.
    pub fn pareto_weight(&self) -> T {
        self.pareto_weight
    }

    pub fn alpha(&self) -> Alpha<T> {
        self.alpha
    }

    /// True for `x = y = 0`, where the result is the point mass at zero.
    pub fn is_degenerate(&self) -> bool {
        self.scale == T::zero()
    }

    fn components(&self) -> (StepDistribution<T>, StepDistribution<T>) {
        let pareto = StepDistribution::SymmetricPareto {
            p: T::two() * self.alpha.get(),
        };
        let point = StepDistribution::SymmetricTwoPoint { x: T::one() };
        (pareto, point)
    }

    /// Right-continuous CDF.
    pub fn cdf(&self, t: T) -> T {
        if self.is_degenerate() {
            return if t < T::zero() { T::zero() } else { T::one() };
        }
        let (pareto, point) = self.components();
        let s = t / self.scale;
        let w = self.pareto_weight;
        w * pareto.cdf(s) + (T::one() - w) * point.cdf(s)
    }

    /// Mass of the open interval `(0, t)`, computed from the mixture.
    pub fn open_interval_mass(&self, t: T) -> T {
        if self.is_degenerate() || !(t > T::zero()) {
            return T::zero();
        }
        let (pareto, point) = self.components();
        let s = t / self.scale;
        let w = self.pareto_weight;
        T::half()
            * (w * pareto.magnitude_cdf_left(s) + (T::one() - w) * point.magnitude_cdf_left(s))
    }

    /// Williamson transform of the law, from the component transforms.
    pub fn williamson(&self, t: T) -> T {
        if self.is_degenerate() || t == T::zero() {
            return T::one();
        }
        let (pareto, _) = self.components();
        let st = (self.scale * t).abs();
        let w = self.pareto_weight;
        let pareto_part = pareto
            .g(self.alpha, T::one() / st)
            .expect("closed-form transform");
        w * pareto_part + (T::one() - w) * psi(self.alpha, st)
    }

    pub fn sample(&self, rng: &mut RngStream) -> T {
        if self.is_degenerate() {
            return T::zero();
        }
        let xi: T = rng.uniform();
        if xi < self.pareto_weight {
            let u: T = rng.uniform_open_closed();
            let theta = u.powf(-T::one() / (T::two() * self.alpha.get()));
            rng.sign::<T>() * self.scale * theta
        } else {
            rng.sign::<T>() * self.scale
        }
    }
}

/// `δ_x △_α δ_y`.
pub fn convolve_point<T: Real>(x: T, y: T, alpha: Alpha<T>) -> PointConvolutionLaw<T> {
    let (ax, ay) = (x.abs(), y.abs());
    let scale = ax.max(ay);
    let pareto_weight = if scale == T::zero() {
        T::zero()
    } else {
        (ax.min(ay) / scale).powf(alpha.get())
    };
    PointConvolutionLaw {
        scale,
        pareto_weight,
        alpha,
    }
}

/// `h(x, y, t) = (δ_x △_α δ_y)(0, t) = ½ (1 - |xy/t²|^α)` on `|x|, |y| < t`.
///
/// The interval is open: the value is `0` once `max(|x|, |y|) >= t`, and for
/// `x = y = 0`.
pub fn kernel_cdf_h<T: Real>(x: T, y: T, t: T, alpha: Alpha<T>) -> T {
    if !(t > T::zero()) || (x == T::zero() && y == T::zero()) {
        return T::zero();
    }
    if x.abs() < t && y.abs() < t {
        let a = alpha.get();
        T::half() * (T::one() - (x / t).abs().powf(a) * (y / t).abs().powf(a))
    } else {
        T::zero()
    }
}

/// One-step kernel mass `P_1(x, (0, t))` of the walk with step law `dist`.
pub fn transition_cdf<T: Real>(
    x: T,
    dist: &StepDistribution<T>,
    t: T,
    alpha: Alpha<T>,
) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::Domain(format!(
            "transition mass needs t > 0, got {t}"
        )));
    }
    if x.abs() >= t {
        return Ok(T::zero());
    }
    let h = psi(alpha, x / t);
    let f = dist.cdf(t);
    let g = dist.g(alpha, t)?;
    Ok(h * (f - T::half()) + T::half() * g - T::half() * h * g)
}

/// `ν^{△_α n}` for a step law `ν`.
#[derive(Clone, Debug)]
pub struct ConvolutionPowerLaw<T> {
    transform: LawTransform<T>,
    n: u32,
}

impl<T: Real> ConvolutionPowerLaw<T> {
    pub fn new(base: StepDistribution<T>, n: u32, alpha: Alpha<T>) -> Result<Self> {
        base.validate()?;
        if n == 0 {
            return Err(Error::Domain("convolution power needs n >= 1".into()));
        }
        Ok(Self {
            transform: LawTransform::new(base, alpha),
            n,
        })
    }

    pub fn base(&self) -> &StepDistribution<T> {
        self.transform.dist()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alpha(&self) -> Alpha<T> {
        self.transform.alpha()
    }

    /// Williamson transform, `ν̂(t)^n`.
    pub fn williamson(&self, t: T) -> Result<T> {
        Ok(self.transform.transform(t)?.powi(self.n as i32))
    }

    /// `F_n(t)`; `t` must be a continuity point.
    ///
    /// For `t > 0`,
    /// `F_n(t) = (α (G^n + 1) + t n G^{n-1} G') / (2α)` with `G` the transform
    /// of the base law in the radius variable.
    pub fn cdf(&self, t: T) -> Result<T> {
        let base = self.base();
        if self.n == 1 || base.has_atom_at_zero() {
            return Ok(base.cdf(t));
        }
        if t == T::zero() {
            return Ok(T::half());
        }
        if t < T::zero() {
            return self.cdf_positive(-t).map(|v| T::one() - v);
        }
        self.cdf_positive(t)
    }

    fn cdf_positive(&self, t: T) -> Result<T> {
        let a = self.alpha().get();
        let n = T::from_u32(self.n).expect("small integer");
        let g = self.transform.g(t)?;
        let d = match self.transform.analytic_g_prime(t) {
            Some(d) => d,
            None => finite_difference_g_prime(&self.transform, t)?,
        };
        let gn1 = g.powi(self.n as i32 - 1);
        Ok((a * (gn1 * g + T::one()) + t * n * gn1 * d) / (T::two() * a))
    }
}

/// The four step laws whose convolution powers have closed-form CDFs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExampleFamily<T> {
    /// Uniform on `[-1, 1]`.
    Uniform,
    /// `two-point(1)`.
    TwoPoint,
    /// `p · two-point(1) + (1 - p) · pareto(p)`, `p ∈ (0, 1]`, `α ≠ p`.
    Mixture { p: T },
    /// `pareto(2α)` for `α ∈ (0, 1]`.
    Pareto,
}

impl<T: Real> ExampleFamily<T> {
    /// The step law this family convolves.
    pub fn step_distribution(&self, alpha: Alpha<T>) -> Result<StepDistribution<T>> {
        match *self {
            Self::Uniform => Ok(StepDistribution::uniform()),
            Self::TwoPoint => StepDistribution::two_point(T::one()),
            Self::Mixture { p } => StepDistribution::mixture(p),
            Self::Pareto => StepDistribution::pareto(T::two() * alpha.get()),
        }
    }

    fn check(&self, n: u32, alpha: Alpha<T>) -> Result<()> {
        if n == 0 {
            return Err(Error::Domain("convolution power needs n >= 1".into()));
        }
        let a = alpha.get();
        match *self {
            Self::Mixture { p } if !(p > T::zero() && p <= T::one()) => {
                Err(Error::InvalidParameter {
                    family: "mixture",
                    reason: format!("p = {p} must lie in (0, 1]"),
                })
            }
            Self::Mixture { p } if p == a => Err(Error::InvalidParameter {
                family: "mixture",
                reason: format!("closed form needs alpha != p (both {p})"),
            }),
            Self::Pareto if a > T::one() => Err(Error::InvalidParameter {
                family: "pareto",
                reason: format!("closed form stated for alpha in (0, 1], got {a}"),
            }),
            _ => Ok(()),
        }
    }
}

/// Closed-form `F_n(t)` for the example families.
pub fn example_cdf<T: Real>(family: ExampleFamily<T>, n: u32, alpha: Alpha<T>, t: T) -> Result<T> {
    family.check(n, alpha)?;
    Ok(if t >= T::zero() {
        example_cdf_positive(family, n, alpha, t, false)
    } else {
        T::one() - example_cdf_positive(family, n, alpha, -t, true)
    })
}

// `left` selects the left limit at t, which differs only at the atom at 1
// that the two-point and mixture laws carry for n = 1.
fn example_cdf_positive<T: Real>(
    family: ExampleFamily<T>,
    n: u32,
    alpha: Alpha<T>,
    t: T,
    left: bool,
) -> T {
    let a = alpha.get();
    let one = T::one();
    let half = T::half();
    let nn = T::from_u32(n).expect("small integer");
    let below_one = if left { t <= one } else { t < one };
    match family {
        ExampleFamily::Uniform => {
            let k = a / (a + one);
            if t < one {
                half + half * k.powi(n as i32) * t.powi(n as i32) * (one + nn / a)
            } else {
                let tail = t.powf(-a) / (a + one);
                let g = one - tail;
                half + half * g.powi(n as i32 - 1) * (one + (nn - one) * tail)
            }
        }
        ExampleFamily::TwoPoint => {
            if below_one {
                half
            } else {
                let g = one - t.powf(-a);
                half + half * (nn * g.powi(n as i32 - 1) - (nn - one) * g.powi(n as i32))
            }
        }
        ExampleFamily::Mixture { p } => {
            if below_one {
                half
            } else {
                let tp = t.powf(-p);
                let ta = t.powf(-a);
                let base = one - a * (one - p) / (a - p) * tp + p * (one - a) / (a - p) * ta;
                let factor = one + (one - p) * (nn * p - a) / (a - p) * tp
                    - p * (one - a) * (nn - one) / (a - p) * ta;
                half + half * base.powi(n as i32 - 1) * factor
            }
        }
        ExampleFamily::Pareto => {
            example_cdf_positive(ExampleFamily::TwoPoint, 2 * n, alpha, t, left)
        }
    }
}

/// Density of `two-point(1)^{△_α n}`, `n >= 2`:
/// `α n (n-1) / 2 · |t|^{-2α-1} (1 - |t|^{-α})^{n-2}` on `|t| >= 1`.
pub fn two_point_power_density<T: Real>(n: u32, alpha: Alpha<T>, t: T) -> T {
    let a = alpha.get();
    let s = t.abs();
    if n < 2 || s < T::one() {
        return T::zero();
    }
    let nn = T::from_u32(n).expect("small integer");
    a * nn * (nn - T::one()) / T::two()
        * s.powf(-T::two() * a - T::one())
        * (T::one() - s.powf(-a)).powi(n as i32 - 2)
}

/// Density of `pareto(2α)^{△_α n}`:
/// `α n (2n-1) |t|^{-2α-1} (1 - |t|^{-α})^{2(n-1)}` on `|t| >= 1`.
pub fn pareto_power_density<T: Real>(n: u32, alpha: Alpha<T>, t: T) -> T {
    let a = alpha.get();
    let s = t.abs();
    if n < 1 || s < T::one() {
        return T::zero();
    }
    let nn = T::from_u32(n).expect("small integer");
    a * nn
        * (T::two() * nn - T::one())
        * s.powf(-T::two() * a - T::one())
        * (T::one() - s.powf(-a)).powi(2 * (n as i32 - 1))
}

/// CDF of the stable limit `σ`, the law with transform `exp(-|t|^α)`:
/// `½ (1 + (1 + t^{-α}) e^{-t^{-α}})` for `t > 0`.
pub fn stable_limit_cdf<T: Real>(t: T, alpha: Alpha<T>) -> T {
    if t == T::zero() {
        return T::half();
    }
    let u = t.abs().powf(-alpha.get());
    let v = T::half() * (T::one() + (T::one() + u) * (-u).exp());
    if t > T::zero() {
        v
    } else {
        T::one() - v
    }
}

/// `exp(-|t|^α)`.
pub fn stable_limit_transform<T: Real>(t: T, alpha: Alpha<T>) -> T {
    (-t.abs().powf(alpha.get())).exp()
}

/// Transform of `two-point(1)^{△_α n}` rescaled by `c_n = n^{-1/α}`:
/// `(1 - |c_n t|^α)_+^n`.
pub fn rescaled_power_transform<T: Real>(n: u32, alpha: Alpha<T>, t: T) -> T {
    let nn = T::from_u32(n).expect("small integer");
    let c = nn.powf(-T::one() / alpha.get());
    psi(alpha, c * t).powf(nn)
}
