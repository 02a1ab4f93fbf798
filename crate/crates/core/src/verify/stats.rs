/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
}

impl MeanEstimate {
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        let var = if n > 1 { ss / (n - 1) as f64 } else { 0.0 };
        Self {
            mean,
            stderr: (var / n as f64).sqrt(),
            n,
        }
    }

    /// `(estimate - target) / stderr`.
    pub fn z_score(&self, target: f64) -> f64 {
        z(self.mean - target, self.stderr)
    }
}

fn z(diff: f64, sigma: f64) -> f64 {
    if sigma > 0.0 {
        diff / sigma
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(diff)
    }
}

/// Standard deviation of a frequency over `n` trials with success
/// probability `p`.
pub fn binomial_sigma(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// `(hits / n - p) / binomial_sigma(p, n)`.
pub fn binomial_z(hits: usize, n: usize, p: f64) -> f64 {
    z(hits as f64 / n as f64 - p, binomial_sigma(p, n))
}

/// Median of the means of `blocks` contiguous blocks; trailing values that do
/// not fill a block are dropped.
pub fn median_of_means(values: &[f64], blocks: usize) -> f64 {
    assert!(
        blocks >= 1 && values.len() >= blocks,
        "need at least one value per block"
    );
    let size = values.len() / blocks;
    let mut means: Vec<f64> = values
        .chunks_exact(size)
        .take(blocks)
        .map(|c| c.iter().sum::<f64>() / size as f64)
        .collect();
    means.sort_by(|a, b| a.total_cmp(b));
    if blocks % 2 == 1 {
        means[blocks / 2]
    } else {
        0.5 * (means[blocks / 2 - 1] + means[blocks / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_stderr() {
        let e = MeanEstimate::from_values(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.mean, 2.5);
        assert!((e.stderr - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(e.z_score(2.5), 0.0);
        let c = MeanEstimate::from_values(&[1.0, 1.0]);
        assert_eq!(c.z_score(1.0), 0.0);
        assert_eq!(c.z_score(0.0), f64::INFINITY);
    }

    #[test]
    fn binomial() {
        assert_eq!(binomial_sigma(0.5, 100), 0.05);
        assert!((binomial_z(60, 100, 0.5) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn median_of_means_resists_outliers() {
        let mut v = vec![1.0; 320];
        v[0] = 1e9;
        assert_eq!(median_of_means(&v, 32), 1.0);
        assert_eq!(median_of_means(&[1.0, 2.0, 3.0], 3), 2.0);
    }
}
