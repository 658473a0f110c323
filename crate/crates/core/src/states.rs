//! Spectral types of density matrices and positivity of qutrit states.
//!
//! A density matrix on `C^n` is determined up to unitary conjugation by its
//! spectrum; the multiplicities of coincident eigenvalues form a partition of
//! `n`, and the orbit of that spectral type is the flag manifold
//! `U(n)/∏U(q_i)`.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::charts::Chart;
use crate::closed_forms::{vol_complex_flag, vol_sphere, ClosedFormError};
use crate::exact::ExactVolume;
use crate::integrate::{integrate_mc, IntegrateError, IntegrationResult};

pub const MAX_STATE_DIM: u32 = 30;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatesError {
    #[error("dimension {0} outside 1..={MAX_STATE_DIM}")]
    InvalidDimension(u32),
    #[error("invalid partition of {n}: {parts:?}")]
    InvalidPartition { n: u32, parts: Vec<u32> },
    #[error("eigenvalues sum to {0}, expected 1")]
    InvalidSpectrum(f64),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
}

pub type Result<T> = std::result::Result<T, StatesError>;

/// One spectral type of an `n`-level density matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralType {
    pub n: u32,
    /// Eigenvalue multiplicities, descending.
    pub partition: Vec<u32>,
    pub orbit_label: String,
    pub orbit_dim: u32,
}

impl SpectralType {
    /// `[3,1^2]`-style notation.
    pub fn partition_label(&self) -> String {
        format!("[{}]", grouped(&self.partition, ","))
    }

    pub fn is_point(&self) -> bool {
        self.partition.len() == 1
    }
}

impl fmt::Display for SpectralType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} dim {}", self.partition_label(), self.orbit_label, self.orbit_dim)
    }
}

/// Runs of equal parts as `(part, multiplicity)`.
fn runs(parts: &[u32]) -> Vec<(u32, usize)> {
    let mut out: Vec<(u32, usize)> = Vec::new();
    for &q in parts {
        match out.last_mut() {
            Some((v, k)) if *v == q => *k += 1,
            _ => out.push((q, 1)),
        }
    }
    out
}

fn grouped(parts: &[u32], sep: &str) -> String {
    runs(parts)
        .iter()
        .map(|&(q, k)| if k == 1 { q.to_string() } else { format!("{q}^{k}") })
        .collect::<Vec<_>>()
        .join(sep)
}

/// `U(5)/(U(3)×U(1)^2)`; a single stabilizer factor is left unparenthesized.
pub fn orbit_label(partition: &[u32]) -> String {
    let n: u32 = partition.iter().sum();
    let factors: Vec<String> = runs(partition)
        .iter()
        .map(|&(q, k)| if k == 1 { format!("U({q})") } else { format!("U({q})^{k}") })
        .collect();
    if factors.len() == 1 {
        format!("U({n})/{}", factors[0])
    } else {
        format!("U({n})/({})", factors.join("×"))
    }
}

fn check_dimension(n: u32) -> Result<()> {
    if (1..=MAX_STATE_DIM).contains(&n) {
        Ok(())
    } else {
        Err(StatesError::InvalidDimension(n))
    }
}

fn check_partition(n: u32, partition: &[u32]) -> Result<()> {
    let sum: u64 = partition.iter().map(|&q| u64::from(q)).sum();
    if partition.is_empty() || partition.contains(&0) || sum != u64::from(n) {
        return Err(StatesError::InvalidPartition { n, parts: partition.to_vec() });
    }
    Ok(())
}

/// `n² − Σ q_i²`.
pub fn orbit_dimension(n: u32, partition: &[u32]) -> Result<u32> {
    check_partition(n, partition)?;
    Ok(n * n - partition.iter().map(|q| q * q).sum::<u32>())
}

/// Partitions of `n` in reverse lexicographic order (`[n]` first).
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(current.clone());
            return;
        }
        for q in (1..=rest.min(max)).rev() {
            current.push(q);
            go(rest - q, q, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// All spectral types for `n` levels, by ascending orbit dimension (ties in
/// reverse lexicographic partition order).
pub fn enumerate_spectral_types(n: u32) -> Result<Vec<SpectralType>> {
    check_dimension(n)?;
    let mut types: Vec<SpectralType> = partitions(n)
        .into_iter()
        .map(|partition| SpectralType {
            n,
            orbit_dim: n * n - partition.iter().map(|q| q * q).sum::<u32>(),
            orbit_label: orbit_label(&partition),
            partition,
        })
        .collect();
    types.sort_by_key(|t| t.orbit_dim);
    Ok(types)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitVolume {
    pub volume: ExactVolume,
    /// The orbit is a single point (`[n]`); `volume` is 1 by convention.
    pub is_point: bool,
}

/// Volume of the orbit `U(n)/∏U(q_i)`, via the flag-manifold formula.
pub fn orbit_volume(n: u32, partition: &[u32]) -> Result<OrbitVolume> {
    check_partition(n, partition)?;
    if partition.len() == 1 {
        return Ok(OrbitVolume { volume: ExactVolume::one(), is_point: true });
    }
    let mut sorted = partition.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    Ok(OrbitVolume { volume: vol_complex_flag(&sorted)?, is_point: false })
}

/// Eigenvalues of the diagonal qutrit state with Bloch coordinates
/// `(x3, x8)`: `(1/3)(1 + x3 + x8/√3)`, `(1/3)(1 − x3 + x8/√3)`,
/// `(1/3)(1 − 2x8/√3)`.
pub fn su3_eigenvalues(x3: f64, x8: f64) -> [f64; 3] {
    let root3 = 3f64.sqrt();
    let y = x8 / root3;
    [
        (1.0 + x3 + y) / 3.0,
        (1.0 - x3 + y) / 3.0,
        (1.0 - 2.0 * x8 / root3) / 3.0,
    ]
}

/// Whether the diagonal qutrit state with Bloch coordinates `(x3, x8)` is
/// positive semidefinite.
pub fn su3_positivity(x3: f64, x8: f64) -> bool {
    su3_eigenvalues(x3, x8).iter().all(|&l| l >= 0.0)
}

/// Positivity through the characteristic-polynomial coefficients:
/// `Σλ ≥ 0`, `Σ_{i<j} λ_iλ_j ≥ 0`, `λ1λ2λ3 ≥ 0`.
pub fn minor_conditions(l1: f64, l2: f64, l3: f64) -> Result<bool> {
    let trace = l1 + l2 + l3;
    if !((trace - 1.0).abs() <= 1e-12) {
        return Err(StatesError::InvalidSpectrum(trace));
    }
    Ok(trace >= 0.0 && l1 * l2 + l1 * l3 + l2 * l3 >= 0.0 && l1 * l2 * l3 >= 0.0)
}

/// Euclidean volume of the qubit Bloch ball: `∫₀¹ r² dr · Vol(S²) = 4π/3`.
pub fn qubit_state_volume() -> ExactVolume {
    let radial = ExactVolume::rational(BigInt::from(1), BigInt::from(3)).expect("nonzero denominator");
    radial.mul(&vol_sphere(2).expect("S^2 is valid"))
}

/// Indicator of the Bloch ball on the cube `[−1, 1]³`.
pub fn bloch_ball_chart() -> Chart {
    Chart::new("Bloch ball indicator", vec![(-1.0, 1.0); 3], |x: &[f64]| {
        if x.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
            1.0
        } else {
            0.0
        }
    })
    .expect("static ranges")
}

/// Hit-or-miss estimate of the Bloch ball volume.
pub fn qubit_state_volume_mc(samples: u64, seed: u64, chunks: u64) -> Result<IntegrationResult> {
    Ok(integrate_mc(&bloch_ball_chart(), samples, seed, chunks)?)
}
