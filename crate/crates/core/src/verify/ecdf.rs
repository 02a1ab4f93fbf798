use std::cmp::Ordering;

/// KS critical value at the 1% level, `1.63 / √n`.
pub fn ks_critical_value(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

/// Two-sample KS critical value at the 1% level.
pub fn ks_two_sample_critical_value(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    1.63 * ((n + m) / (n * m)).sqrt()
}

/// Sorted sample with right-continuous step CDF `rank(t) / n`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalCdf {
    values: Vec<f64>,
}

impl EmpiricalCdf {
    /// Sorts the sample. NaNs are not allowed.
    pub fn new(mut values: Vec<f64>) -> Self {
        assert!(!values.is_empty(), "empirical CDF needs at least one value");
        assert!(values.iter().all(|v| !v.is_nan()), "sample contains NaN");
        values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Fraction of the sample `<= t`.
    pub fn eval(&self, t: f64) -> f64 {
        self.values.partition_point(|&v| v <= t) as f64 / self.len() as f64
    }

    /// Fraction of the sample `< t`.
    pub fn eval_left(&self, t: f64) -> f64 {
        self.values.partition_point(|&v| v < t) as f64 / self.len() as f64
    }

    /// Smallest sample value `v` with `eval(v) >= p`.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.len();
        let k = ((p.clamp(0.0, 1.0) * n as f64).ceil() as usize).clamp(1, n);
        self.values[k - 1]
    }

    // Distinct values with the ranks just below and at each.
    fn steps(&self) -> impl Iterator<Item = (f64, usize, usize)> + '_ {
        let mut i = 0;
        std::iter::from_fn(move || {
            let v = *self.values.get(i)?;
            let start = i;
            while i < self.values.len() && self.values[i] == v {
                i += 1;
            }
            Some((v, start, i))
        })
    }
}

/// `sup_t |F_n(t) - F(t)|` over both sides of every sample point.
///
/// The left limit of `F` at a sample point is taken at the next float below,
/// so atoms of `F` are handled.
pub fn ks_distance(sample: &EmpiricalCdf, cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sample.len() as f64;
    sample
        .steps()
        .map(|(v, below, upto)| {
            let right = (upto as f64 / n - cdf(v)).abs();
            let left = (below as f64 / n - cdf(v.next_down())).abs();
            right.max(left)
        })
        .fold(0.0, f64::max)
}

/// Two-sample KS statistic `sup_t |F_n(t) - G_m(t)|`.
pub fn ks_two_sample(a: &EmpiricalCdf, b: &EmpiricalCdf) -> f64 {
    let (xa, xb) = (a.values(), b.values());
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let v = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] == v {
            i += 1;
        }
        while j < xb.len() && xb[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}
