//! Sample moments and the two-sample Kolmogorov-Smirnov test.

use crate::integrate::Moments;

/// Mean and standard error of the mean.
pub fn mean_and_std_error(xs: &[f64]) -> (f64, f64) {
    let mut m = Moments::default();
    xs.iter().for_each(|&x| m.push(x));
    (m.mean, m.std_error())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    /// `sup |F_a − F_b|` over the pooled sample.
    pub statistic: f64,
    pub p_value: f64,
}

impl KsResult {
    /// The null hypothesis (same distribution) survives at level `alpha`.
    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value > alpha
    }
}

/// Kolmogorov survival function `Q(λ) = 2 Σ_{k≥1} (−1)^{k−1} e^{−2k²λ²}`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=200 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-17 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample KS test with the asymptotic p-value, using the effective size
/// `n_e = n_a n_b/(n_a + n_b)` and the usual `√n_e + 0.12 + 0.11/√n_e`
/// small-sample correction.
///
/// # Panics
/// If either sample is empty or contains NaN.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsResult {
    assert!(!a.is_empty() && !b.is_empty(), "KS test needs non-empty samples");
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    let cmp = |x: &f64, y: &f64| x.partial_cmp(y).expect("NaN in KS sample");
    a.sort_by(cmp);
    b.sort_by(cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = na * nb / (na + nb);
    let root = ne.sqrt();
    KsResult {
        statistic: d,
        p_value: kolmogorov_q((root + 0.12 + 0.11 / root) * d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kolmogorov_tail_values() {
        // Q(1.3581) ≈ 0.05 and Q(1.9495) ≈ 0.001 are the standard critical points
        assert!((kolmogorov_q(1.3581) - 0.05).abs() < 1e-4);
        assert!((kolmogorov_q(1.9495) - 0.001).abs() < 2e-5);
        assert_eq!(kolmogorov_q(0.0), 1.0);
    }

    #[test]
    fn ks_detects_shift_and_accepts_same_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a: Vec<f64> = (0..5000).map(|_| rng.gen()).collect();
        let b: Vec<f64> = (0..5000).map(|_| rng.gen()).collect();
        let c: Vec<f64> = (0..5000).map(|_| rng.gen::<f64>() + 0.1).collect();
        assert!(ks_two_sample(&a, &b).passes(0.001));
        assert!(!ks_two_sample(&a, &c).passes(0.001));
    }

    #[test]
    fn ks_statistic_on_disjoint_samples() {
        let r = ks_two_sample(&[1.0, 2.0], &[3.0, 4.0, 5.0]);
        assert_eq!(r.statistic, 1.0);
        let same = ks_two_sample(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]);
        assert_eq!(same.statistic, 0.0);
    }

    #[test]
    fn mean_and_error() {
        let (m, e) = mean_and_std_error(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        // s² = 5/3, se = √(5/12)
        assert!((e - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }
}
