use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorMetric {
    Abs,
    Rel,
    Ks,
    ZScore,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One analytic value set against its numerical or simulated estimate.
///
/// Fields serialize in declaration order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub analytic: f64,
    pub estimate: f64,
    pub error: f64,
    pub metric: ErrorMetric,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub runtime_ms: f64,
    pub seed: u64,
    pub sample_size: u64,
}

impl VerificationReport {
    /// Builds a report; the verdict is `error <= tolerance`, and a NaN error
    /// fails.
    pub fn new(
        check_id: impl Into<String>,
        analytic: f64,
        estimate: f64,
        error: f64,
        metric: ErrorMetric,
        tolerance: f64,
    ) -> Self {
        let verdict = if error.abs() <= tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            check_id: check_id.into(),
            analytic,
            estimate,
            error,
            metric,
            tolerance,
            verdict,
            runtime_ms: 0.0,
            seed: 0,
            sample_size: 0,
        }
    }

    /// `|estimate - analytic|` against `tolerance`.
    pub fn abs(check_id: impl Into<String>, analytic: f64, estimate: f64, tolerance: f64) -> Self {
        Self::new(
            check_id,
            analytic,
            estimate,
            (estimate - analytic).abs(),
            ErrorMetric::Abs,
            tolerance,
        )
    }

    /// `|estimate / analytic - 1|` against `tolerance`.
    pub fn rel(check_id: impl Into<String>, analytic: f64, estimate: f64, tolerance: f64) -> Self {
        let error = if analytic == estimate {
            0.0
        } else {
            ((estimate - analytic) / analytic).abs()
        };
        Self::new(
            check_id,
            analytic,
            estimate,
            error,
            ErrorMetric::Rel,
            tolerance,
        )
    }

    pub fn with_sample_size(mut self, n: usize) -> Self {
        self.sample_size = n as u64;
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        assert!(VerificationReport::abs("a", 1.0, 1.0 + 1e-13, 1e-12).passed());
        assert!(!VerificationReport::abs("a", 1.0, 1.1, 1e-12).passed());
        assert!(!VerificationReport::abs("a", 1.0, f64::NAN, 1e-12).passed());
        assert!(VerificationReport::rel("r", 2.0, 2.000001, 1e-6).passed());
        assert!(VerificationReport::new("z", 0.5, 0.5, -2.5, ErrorMetric::ZScore, 3.0).passed());
    }

    #[test]
    fn json_field_order_is_stable() {
        let r = VerificationReport::abs("x", 0.5, 0.25, 1.0).with_sample_size(10);
        let s = serde_json::to_string(&r).unwrap();
        let keys = [
            "check_id",
            "analytic",
            "estimate",
            "error",
            "metric",
            "tolerance",
            "verdict",
            "runtime_ms",
            "seed",
            "sample_size",
        ];
        let pos: Vec<usize> = keys
            .iter()
            .map(|k| s.find(&format!("\"{k}\"")).unwrap())
            .collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{s}");
        assert!(s.contains("\"metric\":\"abs\"") && s.contains("\"verdict\":\"pass\""));
        let back: VerificationReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
