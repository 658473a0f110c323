//! Tensor-product Gauss-Legendre quadrature and seeded Monte Carlo over
//! chart parameter boxes.

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::charts::Chart;

pub const MAX_GAUSS_ORDER: usize = 256;
pub const MAX_TENSOR_DIM: usize = 5;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IntegrateError {
    #[error("Gauss-Legendre order {0} outside 1..={MAX_GAUSS_ORDER}")]
    UnsupportedOrder(usize),
    #[error("tensor quadrature over {dim} dimensions is infeasible (max {MAX_TENSOR_DIM}); use Monte Carlo")]
    TooManyDimensions { dim: usize },
    #[error("Monte Carlo needs at least one sample")]
    NoSamples,
    #[error("Monte Carlo needs at least one chunk")]
    NoChunks,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    GaussTensor,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegrationResult {
    pub estimate: f64,
    /// Zero for deterministic quadrature.
    pub std_error: f64,
    pub evaluations: u64,
    pub method: Method,
}

/// Nodes and weights on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `∫_lo^hi f` with the affinely mapped rule.
    pub fn integrate(&self, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre rule of the given order: roots of `P_n` by Newton
/// iteration, weights `2 / ((1 − x²) P_n'(x)²)`. Exact for polynomials of
/// degree `≤ 2·order − 1`.
pub fn gauss_legendre_rule(order: usize) -> Result<GaussRule, IntegrateError> {
    if !(1..=MAX_GAUSS_ORDER).contains(&order) {
        return Err(IntegrateError::UnsupportedOrder(order));
    }
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess for the i-th largest root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(GaussRule { nodes, weights })
}

/// Tensor-product Gauss rule of the given order in every parameter.
pub fn integrate_tensor(chart: &Chart, order: usize) -> Result<IntegrationResult, IntegrateError> {
    let dim = chart.dim();
    if dim > MAX_TENSOR_DIM {
        return Err(IntegrateError::TooManyDimensions { dim });
    }
    let rule = gauss_legendre_rule(order)?;
    // mapped nodes/weights per axis
    let axes: Vec<(Vec<f64>, Vec<f64>)> = chart
        .ranges()
        .iter()
        .map(|&(lo, hi)| {
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            let x = rule.nodes.iter().map(|t| mid + half * t).collect();
            let w = rule.weights.iter().map(|w| w * half).collect();
            (x, w)
        })
        .collect();
    let mut index = vec![0usize; dim];
    let mut point: Vec<f64> = axes.iter().map(|(x, _)| x[0]).collect();
    let mut total = 0.0;
    let mut evaluations = 0u64;
    loop {
        let weight: f64 = index.iter().zip(&axes).map(|(&i, (_, w))| w[i]).product();
        total += weight * chart.density(&point);
        evaluations += 1;
        // odometer increment, last axis fastest
        let mut axis = dim;
        loop {
            if axis == 0 {
                return Ok(IntegrationResult {
                    estimate: total,
                    std_error: 0.0,
                    evaluations,
                    method: Method::GaussTensor,
                });
            }
            axis -= 1;
            index[axis] += 1;
            if index[axis] < order {
                point[axis] = axes[axis].0[index[axis]];
                break;
            }
            index[axis] = 0;
            point[axis] = axes[axis].0[0];
        }
    }
}

/// Independent random stream `stream` of the master `seed`.
///
/// ChaCha is counter based: each stream id selects a disjoint keystream, so
/// chunk results do not depend on which thread computes them.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Pairwise combination; used in a fixed order so the result is
    /// reproducible.
    pub fn merge(&self, other: &Moments) -> Moments {
        if other.count == 0 {
            return *self;
        }
        if self.count == 0 {
            return *other;
        }
        let count = self.count + other.count;
        let (na, nb, n) = (self.count as f64, other.count as f64, count as f64);
        let delta = other.mean - self.mean;
        Moments {
            count,
            mean: (na * self.mean + nb * other.mean) / n,
            m2: self.m2 + other.m2 + delta * delta * na * nb / n,
        }
    }

    /// Unbiased sample variance; 0 for fewer than two values.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

/// Number of samples assigned to `chunk`.
pub fn chunk_len(samples: u64, chunks: u64, chunk: u64) -> u64 {
    samples / chunks + u64::from(chunk < samples % chunks)
}

/// Plain Monte Carlo: `box volume · mean(density)` with standard error
/// `box volume · s/√N`. Chunk `c` draws `chunk_len(samples, chunks, c)`
/// points from `stream_rng(seed, c)`; chunk moments are merged in chunk
/// order, so the result is bit-identical for any thread count.
pub fn integrate_mc(
    chart: &Chart,
    samples: u64,
    seed: u64,
    chunks: u64,
) -> Result<IntegrationResult, IntegrateError> {
    if samples == 0 {
        return Err(IntegrateError::NoSamples);
    }
    if chunks == 0 {
        return Err(IntegrateError::NoChunks);
    }
    let ranges = chart.ranges();
    let per_chunk: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c);
            let mut point = vec![0.0; ranges.len()];
            let mut m = Moments::default();
            for _ in 0..chunk_len(samples, chunks, c) {
                for (x, &(lo, hi)) in point.iter_mut().zip(ranges) {
                    let u: f64 = rng.sample(Open01);
                    *x = lo + (hi - lo) * u;
                }
                m.push(chart.density(&point));
            }
            m
        })
        .collect();
    let total = per_chunk.iter().fold(Moments::default(), |acc, m| acc.merge(m));
    let volume = chart.box_volume();
    Ok(IntegrationResult {
        estimate: volume * total.mean,
        std_error: volume * total.std_error(),
        evaluations: total.count,
        method: Method::MonteCarlo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::{so3_euler_chart, sphere_chart, su2_euler_chart};
    use std::f64::consts::PI;

    #[test]
    fn low_order_rules() {
        let r1 = gauss_legendre_rule(1).unwrap();
        assert_eq!(r1.nodes, vec![0.0]);
        assert!((r1.weights[0] - 2.0).abs() < 1e-15);
        let r2 = gauss_legendre_rule(2).unwrap();
        let root = 1.0 / 3f64.sqrt();
        assert!((r2.nodes[0] + root).abs() < 1e-15 && (r2.nodes[1] - root).abs() < 1e-15);
        assert!(r2.weights.iter().all(|w| (w - 1.0).abs() < 1e-14));
        let r5 = gauss_legendre_rule(5).unwrap();
        assert!((r5.integrate(-1.0, 1.0, |x| x.powi(8)) - 2.0 / 9.0).abs() < 1e-14);
        assert_eq!(gauss_legendre_rule(0), Err(IntegrateError::UnsupportedOrder(0)));
        assert_eq!(gauss_legendre_rule(257), Err(IntegrateError::UnsupportedOrder(257)));
    }

    #[test]
    fn rules_are_symmetric_positive_and_exact() {
        for order in [3, 7, 16, 32, 64, 128, 200, 256] {
            let r = gauss_legendre_rule(order).unwrap();
            let sum: f64 = r.weights.iter().sum();
            assert!((sum - 2.0).abs() < 1e-13, "order {order}: {sum}");
            assert!(r.weights.iter().all(|&w| w > 0.0));
            for i in 0..order {
                assert_eq!(r.nodes[i], -r.nodes[order - 1 - i]);
            }
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
            // highest exactly integrated even degree
            let deg = (2 * order - 2).min(60) as i32;
            let exact = 2.0 / (deg as f64 + 1.0);
            assert!((r.integrate(-1.0, 1.0, |x| x.powi(deg)) - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn tensor_quadrature_on_charts() {
        let unit = Chart::new("unit square", vec![(0.0, 1.0); 2], |_: &[f64]| 1.0).unwrap();
        let r = integrate_tensor(&unit, 4).unwrap();
        assert!((r.estimate - 1.0).abs() < 1e-15);
        assert_eq!(r.evaluations, 16);
        assert_eq!(r.std_error, 0.0);
        let su2 = integrate_tensor(&su2_euler_chart(), 32).unwrap();
        assert!((su2.estimate - 2.0 * PI * PI).abs() < 1e-10 * 2.0 * PI * PI);
        let s2 = integrate_tensor(&sphere_chart(2).unwrap(), 32).unwrap();
        assert!((s2.estimate - 4.0 * PI).abs() < 1e-10 * 4.0 * PI);
        let six = Chart::new("6d", vec![(0.0, 1.0); 6], |_: &[f64]| 1.0).unwrap();
        assert_eq!(
            integrate_tensor(&six, 2),
            Err(IntegrateError::TooManyDimensions { dim: 6 })
        );
    }

    #[test]
    fn mc_constant_density_is_exact() {
        let cube = Chart::new("cube", vec![(0.0, 1.0); 3], |_: &[f64]| 1.0).unwrap();
        for seed in [0, 7, 12345] {
            let r = integrate_mc(&cube, 1000, seed, 8).unwrap();
            assert_eq!(r.estimate, 1.0);
            assert_eq!(r.std_error, 0.0);
            assert_eq!(r.evaluations, 1000);
        }
        assert_eq!(integrate_mc(&cube, 0, 1, 1), Err(IntegrateError::NoSamples));
        assert_eq!(integrate_mc(&cube, 1, 1, 0), Err(IntegrateError::NoChunks));
    }

    #[test]
    fn mc_is_reproducible() {
        let chart = so3_euler_chart();
        let a = integrate_mc(&chart, 20_000, 42, 16).unwrap();
        let b = integrate_mc(&chart, 20_000, 42, 16).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        let c = integrate_mc(&chart, 20_000, 43, 16).unwrap();
        assert_ne!(a.estimate, c.estimate);
    }

    #[test]
    fn mc_so3_volume() {
        let r = integrate_mc(&so3_euler_chart(), 1_000_000, 2024, 64).unwrap();
        let truth = 8.0 * PI * PI;
        assert!((r.estimate - truth).abs() < 3.0 * r.std_error, "{r:?}");
    }

    #[test]
    fn chunk_lengths_cover_all_samples() {
        for (n, c) in [(10, 3), (5, 8), (1_000_003, 64)] {
            let total: u64 = (0..c).map(|k| chunk_len(n, c, k)).sum();
            assert_eq!(total, n);
        }
    }

    #[test]
    fn moments_merge_matches_sequential() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37 % 101) as f64).sqrt()).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let (a, b) = xs.split_at(377);
        let mut ma = Moments::default();
        let mut mb = Moments::default();
        a.iter().for_each(|&x| ma.push(x));
        b.iter().for_each(|&x| mb.push(x));
        let merged = ma.merge(&mb);
        assert_eq!(merged.count, whole.count);
        assert!((merged.mean - whole.mean).abs() < 1e-12);
        assert!((merged.variance() - whole.variance()).abs() < 1e-10);
    }
}
