//! Small statistics helpers for Monte Carlo probes.

use serde::{Deserialize, Serialize};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Observed success rate of a Bernoulli probe with its Wilson score interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub trials: u64,
    pub successes: u64,
    pub rate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

impl RateReport {
    pub fn new(successes: u64, trials: u64) -> Self {
        assert!(successes <= trials, "more successes than trials");
        let (wilson_low, wilson_high) = wilson_interval(successes, trials, Z95);
        let rate = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
        RateReport { trials, successes, rate, wilson_low, wilson_high }
    }
}

/// Wilson score interval for `successes / trials` at normal quantile `z`.
/// Zero trials give the uninformative interval `[0, 1]`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // 50/100 at 95%: 0.4038 .. 0.5962.
        let (lo, hi) = wilson_interval(50, 100, Z95);
        assert!((lo - 0.4038).abs() < 1e-4 && (hi - 0.5962).abs() < 1e-4);
        let (lo, hi) = wilson_interval(0, 10, Z95);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.2775).abs() < 1e-4);
        let (lo, hi) = wilson_interval(10, 10, Z95);
        assert!((lo - 0.7225).abs() < 1e-4 && (hi - 1.0).abs() < 1e-12, "{lo} {hi}");
    }

    #[test]
    fn report_rate() {
        let r = RateReport::new(3, 4);
        assert_eq!(r.rate, 0.75);
        assert!(r.wilson_low < 0.75 && r.wilson_high > 0.75);
        assert_eq!(RateReport::new(0, 0).wilson_high, 1.0);
    }
}
