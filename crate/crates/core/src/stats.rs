//! Goodness-of-fit helpers used to check simulated output.

/// Kolmogorov–Smirnov statistic of a sample against U(0, 1).
pub fn ks_uniform(sample: &[f64]) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let x = x.clamp(0.0, 1.0);
            ((i + 1) as f64 / n - x).max(x - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// Kolmogorov–Smirnov statistic against an arbitrary continuous CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let transformed: Vec<f64> = sample.iter().map(|&x| cdf(x)).collect();
    ks_uniform(&transformed)
}

/// Asymptotic 1% critical value 1.628/√n of the one-sample KS statistic.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evenly_spaced_sample() {
        let n = 100;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        assert!((ks_uniform(&xs) - 0.5 / n as f64).abs() < 1e-15);
    }

    #[test]
    fn skewed_sample_fails() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i as f64 + 0.5) / 1000.0).powi(2)).collect();
        assert!(ks_uniform(&xs) > ks_critical_1pct(1000));
    }
}
