//! First-passage analytics of the Kendall random walk started at zero.
//!
//! With `F` the step CDF and `G` its Williamson transform in the radius
//! variable, the walk's first strict ascent above zero has
//!
//! ```text
//! P(X_1 <= 0, …, X_{n-1} <= 0, 0 < X_n < t) = 2^{-n} G^{n-1} (2n (F - ½) - (n-1) G)
//! P(τ = k)                                  = 2^{-k}
//! P(X_τ < t)                                = (4F - 2 - G²) / (2 - G)²
//! E s^τ Ψ(u X_τ)                            = (s/2) G(1/u) / (1 - (s/2) G(1/u))
//! ```
//!
//! The last identity factors as `E s^τ · E Ψ(u Z)` with `Z` the walk observed
//! at an independent geometric time, see [`GeometricKendall`].
//!
//! The first three formulas are rational in `(F(t), G(t))`; [`phi_closed_form`]
//! and [`overshoot_closed_form`] evaluate them over any field, so they can be
//! checked in exact arithmetic.

use num_traits::Num;

use crate::error::{Error, Result};
use crate::measures::{Alpha, StepDistribution};
use crate::quadrature::Quadrature;
use crate::rng::RngStream;
use crate::scalar::Real;
use crate::walk::step_kernel;
use crate::williamson::{psi, LawTransform, TransformFn};

/// Above this index `phi_n` is evaluated through logarithms.
pub const PHI_LOG_SPACE_FROM: u32 = 40;

/// Survival level of the overshoot law beyond which the moment integrand is
/// replaced by its power-law tail.
pub const MOMENT_TAIL_SURVIVAL: f64 = 1e-9;

/// The moment is reported infinite unless the fitted tail exponent exceeds
/// `α (1 + MOMENT_TAIL_MARGIN)`.
pub const MOMENT_TAIL_MARGIN: f64 = 0.01;

fn small<T: Num + Clone>(k: u32) -> T {
    (0..k).fold(T::zero(), |acc, _| acc + T::one())
}

/// `2^{-n} g^{n-1} (2n (f - ½) - (n-1) g)` over any field.
pub fn phi_closed_form<T: Num + Clone>(n: u32, f: T, g: T) -> T {
    let one = T::one();
    let two: T = small(2);
    let nn: T = small(n);
    let n1: T = small(n - 1);
    let bracket = two.clone() * nn * (f - one.clone() / two.clone()) - n1 * g.clone();
    num_traits::pow(g, (n - 1) as usize) * bracket / num_traits::pow(two, n as usize)
}

/// `(4f - 2 - g²) / (2 - g)²` over any field.
pub fn overshoot_closed_form<T: Num + Clone>(f: T, g: T) -> T {
    let two: T = small(2);
    let four: T = small(4);
    let d = two.clone() - g.clone();
    (four * f - two - g.clone() * g) / (d.clone() * d)
}

/// `E s^τ = (s/2) / (1 - s/2)` for `s` in `[0, 2)`.
pub fn tau_pgf<T: Real>(s: T) -> Result<T> {
    if !(s >= T::zero() && s < T::two()) {
        return Err(Error::Domain(format!(
            "generating function needs s in [0, 2), got {s}"
        )));
    }
    let h = s / T::two();
    Ok(h / (T::one() - h))
}

/// `P(τ = k) = 2^{-k}`; zero for `k = 0`.
pub fn tau_pmf<T: Real>(k: u32) -> T {
    if k == 0 {
        T::zero()
    } else {
        T::two().powi(-(k as i32))
    }
}

/// `E τ = 2`.
pub fn tau_mean<T: Real>() -> T {
    T::two()
}

/// A step law together with its transform, for first-passage analytics.
#[derive(Clone, Debug)]
pub struct ExcursionLaw<T> {
    transform: LawTransform<T>,
}

impl<T: Real> ExcursionLaw<T> {
    /// Rejects laws with an atom at zero.
    pub fn new(dist: StepDistribution<T>, alpha: Alpha<T>) -> Result<Self> {
        dist.validate()?;
        if dist.has_atom_at_zero() {
            return Err(Error::AtomAtZero);
        }
        Ok(Self {
            transform: LawTransform::new(dist, alpha),
        })
    }

    pub fn dist(&self) -> &StepDistribution<T> {
        self.transform.dist()
    }

    pub fn alpha(&self) -> Alpha<T> {
        self.transform.alpha()
    }

    /// `(F(t), G(t))` for `t > 0`.
    pub fn parts(&self, t: T) -> Result<(T, T)> {
        if !(t > T::zero()) {
            return Err(Error::Domain(format!(
                "excursion formulas need t > 0, got {t}"
            )));
        }
        Ok((self.dist().cdf(t), self.transform.g(t)?))
    }

    /// `Φ_n(t) = P(X_1 <= 0, …, X_{n-1} <= 0, 0 < X_n < t)`.
    pub fn phi_n(&self, n: u32, t: T) -> Result<T> {
        if n == 0 {
            return Err(Error::Domain("phi_n needs n >= 1".into()));
        }
        let (f, g) = self.parts(t)?;
        if n <= PHI_LOG_SPACE_FROM {
            return Ok(phi_closed_form(n, f, g));
        }
        if g == T::zero() {
            return Ok(T::zero());
        }
        let nn = T::from_u32(n).expect("index representable");
        let bracket = T::two() * nn * (f - T::half()) - (nn - T::one()) * g;
        let log_scale = (nn - T::one()) * g.ln() - nn * T::LN_2();
        Ok(log_scale.exp() * bracket)
    }

    /// `Σ_{k=1}^{n} Φ_k(t)`.
    pub fn phi_partial_sum(&self, n: u32, t: T) -> Result<T> {
        (1..=n).try_fold(T::zero(), |acc, k| Ok(acc + self.phi_n(k, t)?))
    }

    /// `P(X_τ < t)` for the first strict ascent above zero.
    pub fn overshoot_cdf(&self, t: T) -> Result<T> {
        let (f, g) = self.parts(t)?;
        Ok(overshoot_closed_form(f, g))
    }

    /// `P(X_τ >= t) = (2 (1 - G)² + 4 (1 - F)) / (2 - G)²`, free of the
    /// cancellation in `1 - P(X_τ < t)`.
    pub fn overshoot_survival(&self, t: T) -> Result<T> {
        let (f, g) = self.parts(t)?;
        let (one, two) = (T::one(), T::two());
        let (cf, cg) = (one - f, one - g);
        Ok((two * cg * cg + two * two * cf) / ((two - g) * (two - g)))
    }

    /// `E s^τ Ψ(u X_τ)` for `s` in `[0, 1]`; `u = 0` gives `E s^τ`.
    pub fn wiener_hopf_h(&self, s: T, u: T) -> Result<T> {
        if !(s >= T::zero() && s <= T::one()) {
            return Err(Error::Domain(format!("s must lie in [0, 1], got {s}")));
        }
        if u == T::zero() {
            return tau_pgf(s);
        }
        let g = self.transform.g(T::one() / u.abs())?;
        let h = s / T::two();
        Ok(h * g / (T::one() - h * g))
    }

    /// `E X_τ^α = 2 E|Y|^α`, possibly infinite.
    pub fn overshoot_alpha_moment(&self) -> T {
        T::two() * self.dist().alpha_moment(self.alpha())
    }

    /// `E X_τ^α = ∫_0^∞ α t^{α-1} P(X_τ >= t) dt` by quadrature of the
    /// overshoot CDF.
    ///
    /// Beyond the point `R` where the survival drops below
    /// [`MOMENT_TAIL_SURVIVAL`] the survival is taken as `c t^{-κ}`, with `κ`
    /// read off `R` and `2R`. Returns `+∞` when `κ` does not clear `α` by
    /// [`MOMENT_TAIL_MARGIN`].
    pub fn overshoot_alpha_moment_quadrature(&self) -> Result<T> {
        let a = self.alpha().get();
        let one = T::one();
        let survival = |t: T| self.overshoot_survival(t);

        let mut r = one;
        while survival(r)? >= T::lit(MOMENT_TAIL_SURVIVAL) {
            r = r * T::two();
            if r > T::lit(1e200) {
                return Ok(T::infinity());
            }
        }
        let (s_r, s_2r) = (survival(r)?, survival(r * T::two())?);
        let kappa = (s_r / s_2r).log2();
        if !(kappa > a * (one + T::lit(MOMENT_TAIL_MARGIN))) {
            return Ok(T::infinity());
        }
        let tail = a * s_r * r.powf(a) / (kappa - a);

        let mut points = vec![T::zero()];
        if let StepDistribution::TabulatedSymmetric(table) = self.dist() {
            points.extend(table.grid().iter().copied().filter(|&g| g < one));
        }
        let mut p = one;
        while p < r {
            points.push(p);
            p = p * T::lit(10.0);
        }
        if let StepDistribution::TabulatedSymmetric(table) = self.dist() {
            points.extend(table.grid().iter().copied().filter(|&g| g > one && g < r));
        }
        points.push(r);
        points.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
        points.dedup();

        let quad = Quadrature {
            abs_tol: T::lit(1e-12),
            rel_tol: T::lit(1e-10),
            ..Quadrature::default()
        };
        let mut failure = None;
        let body = quad.integrate_piecewise(
            |t| {
                if t == T::zero() {
                    return T::zero();
                }
                match survival(t) {
                    Ok(v) => a * t.powf(a - one) * v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        T::zero()
                    }
                }
            },
            &points,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(body + tail)
    }

    /// Draws one kernel-mode step from `x`.
    pub fn step(&self, x: T, rng: &mut RngStream) -> T {
        step_kernel(x, self.dist(), self.alpha(), rng)
    }
}

/// `E s^τ Ψ(u X_τ)` from simulated passages, with its standard error.
///
/// `passages` yields `(τ, X_τ)` for the paths that crossed; `n_paths` counts
/// all paths, the others contributing zero.
pub fn wiener_hopf_estimate<T: Real>(
    passages: impl IntoIterator<Item = (usize, T)>,
    n_paths: usize,
    alpha: Alpha<T>,
    s: T,
    u: T,
) -> (f64, f64) {
    let (mut sum, mut sum_sq) = (0.0_f64, 0.0_f64);
    for (tau, x) in passages {
        let v = (s.powi(tau as i32) * psi(alpha, u * x)).as_f64();
        sum += v;
        sum_sq += v * v;
    }
    let n = n_paths as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

/// The walk observed at an independent geometric time `N` with
/// `P(N = k) = (1 - s/2)(s/2)^{k-1}`, `k >= 1`.
#[derive(Clone, Debug)]
pub struct GeometricKendall<T> {
    s: T,
    base: ExcursionLaw<T>,
}

impl<T: Real> GeometricKendall<T> {
    pub fn new(s: T, base: ExcursionLaw<T>) -> Result<Self> {
        if !(s >= T::zero() && s <= T::one()) {
            return Err(Error::Domain(format!("s must lie in [0, 1], got {s}")));
        }
        Ok(Self { s, base })
    }

    pub fn s(&self) -> T {
        self.s
    }

    pub fn base(&self) -> &ExcursionLaw<T> {
        &self.base
    }

    /// `E Ψ(Z/t) = G(t)(1 - s/2) / (1 - (s/2) G(t))`.
    pub fn transform(&self, t: T) -> Result<T> {
        let (_, g) = self.base.parts(t)?;
        let h = self.s / T::two();
        Ok(g * (T::one() - h) / (T::one() - h * g))
    }

    /// Draws `N`, then runs the walk from zero for `N` steps.
    pub fn sample(&self, rng: &mut RngStream) -> T {
        let h = self.s / T::two();
        let mut n = 1;
        while rng.uniform::<T>() < h {
            n += 1;
        }
        (0..n).fold(T::zero(), |x, _| self.base.step(x, rng))
    }
}

/// `E Ψ(Z_{s/2}/t)` for the geometric-Kendall variable.
pub fn geometric_kendall_transform<T: Real>(z: &GeometricKendall<T>, t: T) -> Result<T> {
    z.transform(t)
}
