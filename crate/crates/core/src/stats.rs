//! Binomial helpers for the statistical acceptance checks.

/// Standard deviation of a Binomial(n, p) count.
pub fn binomial_sigma(n: usize, p: f64) -> f64 {
    (n as f64 * p * (1.0 - p)).sqrt()
}

/// Signed distance of an observed count from its binomial mean, in sigmas.
/// A zero-variance model yields 0.0 on exact agreement and ±∞ otherwise.
pub fn count_z_score(count: usize, n: usize, p: f64) -> f64 {
    let mean = n as f64 * p;
    let sigma = binomial_sigma(n, p);
    if sigma == 0.0 {
        if (count as f64 - mean).abs() == 0.0 {
            0.0
        } else {
            f64::INFINITY * (count as f64 - mean).signum()
        }
    } else {
        (count as f64 - mean) / sigma
    }
}

/// True iff the observed count sits within `k` sigmas of Binomial(n, p).
pub fn within_sigma(count: usize, n: usize, p: f64, k: f64) -> bool {
    count_z_score(count, n, p).abs() <= k
}
