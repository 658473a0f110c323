//! Haar-distributed samples from SU(2), SO(3) and SU(3), plus a
//! Gaussian-QR sampler on SU(n) used as an independent oracle.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::charts::{rotation_y, rotation_z, su2_embedding_matrix, su3_matrix_chart, MatrixChart};
use crate::integrate::{chunk_len, stream_rng};
use crate::linalg::CMat;

/// A sampled group element.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSample {
    pub matrix: DMatrix<Complex64>,
    pub group_label: String,
    /// Chart coordinates of the sample; empty for the QR oracle.
    pub parameters: Vec<f64>,
}

impl GroupSample {
    fn from_cmat(m: &CMat, label: &str, parameters: Vec<f64>) -> Self {
        Self {
            matrix: m.to_dmatrix(),
            group_label: label.to_string(),
            parameters,
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn determinant(&self) -> Complex64 {
        self.matrix.determinant()
    }

    /// Largest entry of `U†U − I`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.matrix.nrows();
        (self.matrix.adjoint() * &self.matrix - DMatrix::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `g·U` for a fixed `g`.
    pub fn left_multiplied(&self, g: &DMatrix<Complex64>) -> Self {
        Self {
            matrix: g * &self.matrix,
            group_label: format!("g·{}", self.group_label),
            parameters: self.parameters.clone(),
        }
    }
}

/// Inverse CDF of the normalized `sin 2β` on `[0, π/2]`.
pub fn su2_beta_from_uniform(u: f64) -> f64 {
    u.sqrt().asin()
}

/// Inverse CDF of the normalized `sin β` on `[0, π]`.
pub fn so3_beta_from_uniform(u: f64) -> f64 {
    (1.0 - 2.0 * u).acos()
}

/// `e^{iασ3} e^{iβσ2} e^{iγσ3}`.
pub fn su2_euler_matrix(alpha: f64, beta: f64, gamma: f64) -> CMat {
    su2_embedding_matrix(alpha + gamma, beta, alpha - gamma)
}

/// `R_z(α) R_y(β) R_z(γ)`.
pub fn so3_euler_matrix(alpha: f64, beta: f64, gamma: f64) -> CMat {
    rotation_z(alpha) * rotation_y(beta) * rotation_z(gamma)
}

pub fn sample_su2<R: Rng + ?Sized>(rng: &mut R) -> GroupSample {
    let alpha = PI * rng.gen::<f64>();
    let beta = su2_beta_from_uniform(rng.gen());
    let gamma = 2.0 * PI * rng.gen::<f64>();
    let m = su2_euler_matrix(alpha, beta, gamma);
    GroupSample::from_cmat(&m, "SU(2)", vec![alpha, beta, gamma])
}

pub fn sample_so3<R: Rng + ?Sized>(rng: &mut R) -> GroupSample {
    let alpha = 2.0 * PI * rng.gen::<f64>();
    let beta = so3_beta_from_uniform(rng.gen());
    let gamma = 2.0 * PI * rng.gen::<f64>();
    let m = so3_euler_matrix(alpha, beta, gamma);
    GroupSample::from_cmat(&m, "SO(3)", vec![alpha, beta, gamma])
}

const GRID_POINTS: usize = 5;
const BOUND_INFLATION: f64 = 1.1;

fn su3_chart() -> &'static MatrixChart {
    static CHART: OnceLock<MatrixChart> = OnceLock::new();
    CHART.get_or_init(su3_matrix_chart)
}

/// Largest density found by a midpoint grid scan of the box followed by a
/// compass search from the best grid point.
pub fn scan_density_max(chart: &MatrixChart, points_per_axis: usize) -> f64 {
    let ranges = chart.ranges();
    let dim = ranges.len();
    let total = points_per_axis.pow(dim as u32);
    let (mut best, mut best_at) = (0.0, vec![0.0; dim]);
    let mut alpha = vec![0.0; dim];
    for flat in 0..total {
        let mut rest = flat;
        for (a, &(lo, hi)) in alpha.iter_mut().zip(ranges) {
            let k = rest % points_per_axis;
            rest /= points_per_axis;
            *a = lo + (hi - lo) * (k as f64 + 0.5) / points_per_axis as f64;
        }
        let d = chart.density_unchecked(&alpha);
        if d > best {
            best = d;
            best_at.clone_from(&alpha);
        }
    }
    let mut step: Vec<f64> = ranges
        .iter()
        .map(|&(lo, hi)| (hi - lo) / points_per_axis as f64)
        .collect();
    for _ in 0..60 {
        let mut improved = false;
        for p in 0..dim {
            for dir in [-1.0, 1.0] {
                let mut trial = best_at.clone();
                trial[p] = (trial[p] + dir * step[p]).clamp(ranges[p].0, ranges[p].1);
                let d = chart.density_unchecked(&trial);
                if d > best {
                    best = d;
                    best_at = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            step.iter_mut().for_each(|s| *s *= 0.5);
        }
    }
    best
}

/// Rejection bound for the SU(3) chart density: scanned maximum × 1.1,
/// computed once per process.
pub fn su3_density_bound() -> f64 {
    static BOUND: OnceLock<f64> = OnceLock::new();
    *BOUND.get_or_init(|| BOUND_INFLATION * scan_density_max(su3_chart(), GRID_POINTS))
}

/// Rejection sampler on the SU(3) parameter box. Keeps its own bound so a
/// violation only inflates this sampler's bound.
#[derive(Debug, Clone)]
pub struct Su3Sampler {
    bound: f64,
    proposals: u64,
    accepted: u64,
    violations: u64,
}

impl Default for Su3Sampler {
    fn default() -> Self {
        Self::new()
    }
}

impl Su3Sampler {
    pub fn new() -> Self {
        Self::with_bound(su3_density_bound())
    }

    pub fn with_bound(bound: f64) -> Self {
        assert!(bound > 0.0, "rejection bound must be positive");
        Self { bound, proposals: 0, accepted: 0, violations: 0 }
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn proposals(&self) -> u64 {
        self.proposals
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    pub fn violations(&self) -> u64 {
        self.violations
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposals == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposals as f64
        }
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> GroupSample {
        let chart = su3_chart();
        let ranges = chart.ranges();
        let mut alpha = vec![0.0; ranges.len()];
        loop {
            for (a, &(lo, hi)) in alpha.iter_mut().zip(ranges) {
                *a = lo + (hi - lo) * rng.gen::<f64>();
            }
            let u: f64 = rng.gen();
            self.proposals += 1;
            let d = chart.density_unchecked(&alpha);
            if d > self.bound {
                self.violations += 1;
                log::warn!(
                    "SU(3) density {d} exceeds rejection bound {}; doubling bound and resampling",
                    self.bound
                );
                self.bound *= 2.0;
                continue;
            }
            if u * self.bound < d {
                self.accepted += 1;
                let m = chart.element(&alpha).expect("dimension matches chart");
                return GroupSample::from_cmat(&m, "SU(3)", alpha);
            }
        }
    }
}

pub fn sample_su3<R: Rng + ?Sized>(rng: &mut R) -> GroupSample {
    Su3Sampler::new().sample(rng)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HaarError {
    #[error("QR oracle supports 2 ≤ n ≤ 8, got {0}")]
    UnsupportedDimension(usize),
    #[error("unknown group '{0}' (expected su2, so3 or su3)")]
    UnknownGroup(String),
}

/// Haar sample on SU(n): complex Ginibre matrix, QR with the phases of
/// `diag R` moved into `Q` (Haar on U(n)), then `Q·det(Q)^{−1/n}`.
pub fn sample_qr_oracle<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<GroupSample, HaarError> {
    if !(2..=8).contains(&n) {
        return Err(HaarError::UnsupportedDimension(n));
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    let det = q.determinant();
    let fix = Complex64::from_polar(1.0, -det.arg() / n as f64);
    q *= fix;
    Ok(GroupSample {
        matrix: q,
        group_label: format!("SU({n})"),
        parameters: Vec::new(),
    })
}

/// Groups with a chart sampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HaarGroup {
    Su2,
    So3,
    Su3,
}

impl HaarGroup {
    pub fn key(self) -> &'static str {
        match self {
            HaarGroup::Su2 => "su2",
            HaarGroup::So3 => "so3",
            HaarGroup::Su3 => "su3",
        }
    }

    pub fn matrix_dim(self) -> usize {
        match self {
            HaarGroup::Su2 => 2,
            HaarGroup::So3 | HaarGroup::Su3 => 3,
        }
    }
}

impl fmt::Display for HaarGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for HaarGroup {
    type Err = HaarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "su2" => Ok(HaarGroup::Su2),
            "so3" => Ok(HaarGroup::So3),
            "su3" => Ok(HaarGroup::Su3),
            other => Err(HaarError::UnknownGroup(other.to_string())),
        }
    }
}

/// Result of [`sample_batch`].
#[derive(Debug, Clone)]
pub struct SampleBatch {
    pub samples: Vec<GroupSample>,
    /// Proposals drawn; equals the sample count for inverse-CDF samplers.
    pub proposals: u64,
    pub violations: u64,
}

impl SampleBatch {
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposals == 0 {
            0.0
        } else {
            self.samples.len() as f64 / self.proposals as f64
        }
    }
}

/// `count` samples split over `chunks` independent streams of `seed`,
/// concatenated in chunk order. Deterministic for any thread count.
pub fn sample_batch(group: HaarGroup, count: u64, seed: u64, chunks: u64) -> SampleBatch {
    let chunks = chunks.max(1);
    let parts: Vec<SampleBatch> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c);
            let len = chunk_len(count, chunks, c);
            match group {
                HaarGroup::Su2 => SampleBatch {
                    samples: (0..len).map(|_| sample_su2(&mut rng)).collect(),
                    proposals: len,
                    violations: 0,
                },
                HaarGroup::So3 => SampleBatch {
                    samples: (0..len).map(|_| sample_so3(&mut rng)).collect(),
                    proposals: len,
                    violations: 0,
                },
                HaarGroup::Su3 => {
                    let mut sampler = Su3Sampler::new();
                    let samples = (0..len).map(|_| sampler.sample(&mut rng)).collect();
                    SampleBatch {
                        samples,
                        proposals: sampler.proposals(),
                        violations: sampler.violations(),
                    }
                }
            }
        })
        .collect();
    let mut out = SampleBatch { samples: Vec::with_capacity(count as usize), proposals: 0, violations: 0 };
    for part in parts {
        out.samples.extend(part.samples);
        out.proposals += part.proposals;
        out.violations += part.violations;
    }
    out
}

/// `count` QR-oracle samples on SU(n), chunked like [`sample_batch`].
pub fn qr_oracle_batch(n: usize, count: u64, seed: u64, chunks: u64) -> Result<Vec<GroupSample>, HaarError> {
    if !(2..=8).contains(&n) {
        return Err(HaarError::UnsupportedDimension(n));
    }
    let chunks = chunks.max(1);
    let parts: Vec<Vec<GroupSample>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c);
            (0..chunk_len(count, chunks, c))
                .map(|_| sample_qr_oracle(n, &mut rng).expect("dimension checked"))
                .collect()
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}
