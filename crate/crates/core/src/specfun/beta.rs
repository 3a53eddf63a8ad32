//! Beta and gamma variates, generated on the log scale so that shapes far
//! below 1 do not underflow before the final exponentiation.

use rand::distr::Open01;
use rand::Rng;
use rand_distr::StandardNormal;

/// ln of a Gamma(shape, 1) variate.
///
/// Marsaglia–Tsang for shape ≥ 1; below 1 the boost
/// G(s) = G(1+s)·U^{1/s} is applied as ln G(1+s) + ln U / s.
pub fn ln_gamma_variate<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    if shape < 1.0 {
        let u: f64 = rng.sample(Open01);
        return ln_gamma_variate(1.0 + shape, rng) + u.ln() / shape;
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let z: f64 = rng.sample(StandardNormal);
        let v = 1.0 + c * z;
        if v <= 0.0 {
            continue;
        }
        let v3 = v * v * v;
        let u: f64 = rng.sample(Open01);
        let z2 = z * z;
        if u < 1.0 - 0.0331 * z2 * z2 || u.ln() < 0.5 * z2 + d * (1.0 - v3 + v3.ln()) {
            return d.ln() + v3.ln();
        }
    }
}

/// ln of a Beta(a, b) variate.
pub fn ln_beta_variate<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    if b == 1.0 {
        // CDF x^a
        let u: f64 = rng.sample(Open01);
        return u.ln() / a;
    }
    if a == 1.0 {
        // CDF 1 − (1−x)^b
        let u: f64 = rng.sample(Open01);
        return (-(u.ln() / b).exp_m1()).ln();
    }
    let ly1 = ln_gamma_variate(a, rng);
    let ly2 = ln_gamma_variate(b, rng);
    let hi = ly1.max(ly2);
    let lse = hi + ((ly1 - hi).exp() + (ly2 - hi).exp()).ln();
    ly1 - lse
}

/// One draw from Beta(a, b). Shapes may be as small as ~1e-300; draws whose
/// logarithm is below the double range come back as 0.
pub fn beta_sample<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0);
    if b != 1.0 && a == 1.0 {
        let u: f64 = rng.sample(Open01);
        return -(u.ln() / b).exp_m1();
    }
    ln_beta_variate(a, b, rng).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mean_and_se(a: f64, b: f64, n: usize) -> (f64, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let xs: Vec<f64> = (0..n).map(|_| beta_sample(a, b, &mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (mean, (var / n as f64).sqrt())
    }

    #[test]
    fn means() {
        for (a, b) in [(0.5, 1.0), (2.0, 4.0), (1.0, 3.0), (0.3, 0.7)] {
            let (m, se) = mean_and_se(a, b, 100_000);
            let want = a / (a + b);
            assert!((m - want).abs() < 3.0 * se, "Beta({a},{b}) mean {m}");
        }
    }

    #[test]
    fn tiny_shape_stays_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let x = beta_sample(1e-12, 3.0, &mut rng);
            assert!((0.0..=1.0).contains(&x));
            let lx = ln_beta_variate(1e-12, 3.0, &mut rng);
            assert!(lx < -1e5);
        }
    }

    #[test]
    fn gamma_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for shape in [0.2, 1.0, 7.5] {
            let n = 50_000;
            let s: f64 = (0..n).map(|_| ln_gamma_variate(shape, &mut rng).exp()).sum();
            assert!((s / n as f64 / shape - 1.0).abs() < 0.03);
        }
    }
}
