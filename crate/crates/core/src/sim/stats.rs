//! Interval estimates and paired tests for Monte-Carlo counts.

use statrs::distribution::{Binomial, ContinuousCDF, DiscreteCDF, Normal};

/// Two-sided normal quantile for confidence `level` (0.95 → 1.96).
pub fn z_score(level: f64) -> f64 {
    Normal::standard().inverse_cdf(0.5 + level / 2.0)
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, level: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = z_score(level);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Exact one-sided sign test on discordant pairs: the probability of at
/// least `x` of `x + y` discordant frames falling on one side under equal
/// error rates. Small values mean the `x` side has significantly more.
pub fn sign_test_greater(x: u64, y: u64) -> f64 {
    let n = x + y;
    if n == 0 || x == 0 {
        return 1.0;
    }
    let b = Binomial::new(0.5, n).expect("valid binomial");
    // P(X ≥ x) = 1 − P(X ≤ x − 1)
    b.sf(x - 1)
}

/// Normal-approximation interval for a sample mean.
pub fn mean_interval(sum: f64, sum_sq: f64, n: u64, level: f64) -> (f64, f64) {
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let nf = n as f64;
    let mean = sum / nf;
    if n == 1 {
        return (mean, mean);
    }
    let var = ((sum_sq - sum * sum / nf) / (nf - 1.0)).max(0.0);
    let half = z_score(level) * (var / nf).sqrt();
    (mean - half, mean + half)
}
