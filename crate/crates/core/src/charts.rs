//! Coordinate charts: parameter boxes carrying an invariant density.
//!
//! Two kinds live here. [`Chart`] is a box plus a closed-form density, used
//! for spheres and the Euler-angle charts of SU(2) and SO(3). [`MatrixChart`]
//! describes a group element as an ordered product of exponentials
//! `u(α) = ∏ exp(i λ_{j_m} α_{p_m})`; its density is derived numerically from
//! the left-invariant Maurer-Cartan form:
//!
//! 1. differentiate `u` with respect to each parameter,
//! 2. write `u⁻¹ ∂u/∂α_p = i Σ_i J_ip λ_i` in the generator basis,
//! 3. the invariant co-frame is the dual of these vector fields,
//! 4. the volume element is `|det J|`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::linalg::{real_determinant, CMat};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChartError {
    #[error("empty range for parameter {index}: [{lo}, {hi}]")]
    EmptyRange { index: usize, lo: f64, hi: f64 },
    #[error("chart must have at least one parameter")]
    NoParameters,
    #[error("parameter vector has length {got}, chart has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("generator basis is not orthonormal: Tr[λ_{i}λ_{j}] = {value}")]
    NotOrthonormal { i: usize, j: usize, value: f64 },
    #[error("generator {0} is not hermitian")]
    NotHermitian(usize),
    #[error("invalid exponent sequence: {0}")]
    BadSequence(String),
    #[error("derivative left the generator span at {alpha:?}: residual {residual:e}")]
    Inconsistent { alpha: Vec<f64>, residual: f64 },
}

pub type Density = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A parameter box with a non-negative density.
#[derive(Clone)]
pub struct Chart {
    label: String,
    ranges: Vec<(f64, f64)>,
    density: Density,
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Chart")
            .field("label", &self.label)
            .field("ranges", &self.ranges)
            .finish_non_exhaustive()
    }
}

fn check_ranges(ranges: &[(f64, f64)]) -> Result<(), ChartError> {
    if ranges.is_empty() {
        return Err(ChartError::NoParameters);
    }
    for (index, &(lo, hi)) in ranges.iter().enumerate() {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(ChartError::EmptyRange { index, lo, hi });
        }
    }
    Ok(())
}

impl Chart {
    pub fn new(
        label: impl Into<String>,
        ranges: Vec<(f64, f64)>,
        density: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self, ChartError> {
        check_ranges(&ranges)?;
        Ok(Self {
            label: label.into(),
            ranges,
            density: Arc::new(density),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.ranges.len()
    }

    pub fn ranges(&self) -> &[(f64, f64)] {
        &self.ranges
    }

    pub fn box_volume(&self) -> f64 {
        self.ranges.iter().map(|(lo, hi)| hi - lo).product()
    }

    #[inline]
    pub fn density(&self, alpha: &[f64]) -> f64 {
        (self.density)(alpha)
    }

    /// Same density on a different box for parameter `index`.
    pub fn with_range(&self, index: usize, lo: f64, hi: f64) -> Result<Self, ChartError> {
        let mut ranges = self.ranges.clone();
        let slot = ranges.get_mut(index).ok_or(ChartError::DimensionMismatch {
            expected: self.dim(),
            got: index + 1,
        })?;
        *slot = (lo, hi);
        check_ranges(&ranges)?;
        Ok(Self {
            label: format!("{} [α{index} ∈ [{lo}, {hi}]]", self.label),
            ranges,
            density: Arc::clone(&self.density),
        })
    }
}

/// Hyperspherical chart of the unit `S^n`: `θ_1 ∈ [0, 2π]` is the base
/// circle, `θ_k ∈ [0, π]` for `k ≥ 2` are latitudes, and the density is
/// `∏_{k≥2} sin^{k−1} θ_k`.
///
/// The two points of `S^0` are accounted for by running the base angle over
/// the full circle.
pub fn sphere_chart(n: usize) -> Result<Chart, ChartError> {
    if n == 0 {
        return Err(ChartError::NoParameters);
    }
    let mut ranges = vec![(0.0, 2.0 * PI)];
    ranges.extend(std::iter::repeat_n((0.0, PI), n - 1));
    Chart::new(format!("S^{n} hyperspherical"), ranges, move |theta: &[f64]| {
        theta
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, t)| t.sin().powi(k as i32))
            .product()
    })
}

/// Euler chart `e^{iασ3} e^{iβσ2} e^{iγσ3}` of SU(2): density `sin 2β` on
/// `α ∈ [0, π]`, `β ∈ [0, π/2]`, `γ ∈ [0, 2π]`.
pub fn su2_euler_chart() -> Chart {
    Chart::new(
        "SU(2) Euler",
        vec![(0.0, PI), (0.0, PI / 2.0), (0.0, 2.0 * PI)],
        |a: &[f64]| (2.0 * a[1]).sin(),
    )
    .expect("static ranges")
}

/// SU(2) as the unit sphere in `C²`, `(cos β e^{iφ}, sin β e^{iψ})`, with
/// parameters ordered `(φ, β, ψ)` and density `½ sin 2β`.
pub fn su2_embedding_chart() -> Chart {
    Chart::new(
        "SU(2) embedding S^3 ⊂ R^4",
        vec![(0.0, 2.0 * PI), (0.0, PI / 2.0), (0.0, 2.0 * PI)],
        |a: &[f64]| 0.5 * (2.0 * a[1]).sin(),
    )
    .expect("static ranges")
}

/// SO(3) Euler chart `R_z(α) R_y(β) R_z(γ)`: density `sin β` on
/// `α, γ ∈ [0, 2π]`, `β ∈ [0, π]`.
pub fn so3_euler_chart() -> Chart {
    Chart::new(
        "SO(3) Euler",
        vec![(0.0, 2.0 * PI), (0.0, PI), (0.0, 2.0 * PI)],
        |a: &[f64]| a[1].sin(),
    )
    .expect("static ranges")
}

/// Euler angles `(α, β, γ)` to embedding angles `(φ, β, ψ) = (α+γ, β, α−γ)`.
pub fn su2_euler_to_embedding(alpha: f64, beta: f64, gamma: f64) -> (f64, f64, f64) {
    (alpha + gamma, beta, alpha - gamma)
}

/// `[[cos β e^{iφ}, sin β e^{iψ}], [−sin β e^{−iψ}, cos β e^{−iφ}]]`.
pub fn su2_embedding_matrix(phi: f64, beta: f64, psi: f64) -> CMat {
    let (c, s) = (beta.cos(), beta.sin());
    let e = |t: f64| Complex64::from_polar(1.0, t);
    CMat::from_rows(&[&[e(phi) * c, e(psi) * s], &[-e(-psi) * s, e(-phi) * c]])
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Pauli matrices `σ1, σ2, σ3`.
pub fn pauli() -> [CMat; 3] {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    [
        CMat::from_rows(&[&[o, l], &[l, o]]),
        CMat::from_rows(&[&[o, -i], &[i, o]]),
        CMat::from_rows(&[&[l, o], &[o, -l]]),
    ]
}

/// Gell-Mann matrices `λ1 … λ8` (index 0 is `λ1`), normalized `Tr[λ_iλ_j] = 2δ_ij`.
pub fn gell_mann() -> [CMat; 8] {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let r3 = 1.0 / 3f64.sqrt();
    [
        CMat::from_rows(&[&[o, l, o], &[l, o, o], &[o, o, o]]),
        CMat::from_rows(&[&[o, -i, o], &[i, o, o], &[o, o, o]]),
        CMat::from_rows(&[&[l, o, o], &[o, -l, o], &[o, o, o]]),
        CMat::from_rows(&[&[o, o, l], &[o, o, o], &[l, o, o]]),
        CMat::from_rows(&[&[o, o, -i], &[o, o, o], &[i, o, o]]),
        CMat::from_rows(&[&[o, o, o], &[o, o, l], &[o, l, o]]),
        CMat::from_rows(&[&[o, o, o], &[o, o, -i], &[o, i, o]]),
        CMat::diagonal(&[c(r3, 0.0), c(r3, 0.0), c(-2.0 * r3, 0.0)]),
    ]
}

/// Rotation generators `J_x, J_y, J_z` of the 3-dimensional (adjoint)
/// representation, `(J_k)_{ij} = −i ε_{kij}`, so that `[J_x, J_y] = i J_z`
/// and `Tr[J_a J_b] = 2δ_ab`.
pub fn so3_generators() -> [CMat; 3] {
    let (o, i) = (c(0.0, 0.0), c(0.0, 1.0));
    [
        CMat::from_rows(&[&[o, o, o], &[o, o, -i], &[o, i, o]]),
        CMat::from_rows(&[&[o, o, i], &[o, o, o], &[-i, o, o]]),
        CMat::from_rows(&[&[o, -i, o], &[i, o, o], &[o, o, o]]),
    ]
}

/// `R_z(α)` of the SO(3) Euler form, `[[cos α, sin α, 0], [−sin α, cos α, 0], [0, 0, 1]]`.
pub fn rotation_z(angle: f64) -> CMat {
    let (cs, sn) = (angle.cos(), angle.sin());
    CMat::from_real_rows(&[&[cs, sn, 0.0], &[-sn, cs, 0.0], &[0.0, 0.0, 1.0]])
}

/// `R_y(β) = exp(iβJ_y)`, `[[cos β, 0, −sin β], [0, 1, 0], [sin β, 0, cos β]]`.
pub fn rotation_y(angle: f64) -> CMat {
    let (cs, sn) = (angle.cos(), angle.sin());
    CMat::from_real_rows(&[&[cs, 0.0, -sn], &[0.0, 1.0, 0.0], &[sn, 0.0, cs]])
}

/// How `exp(iαG)` is evaluated for a fixed generator `G`.
#[derive(Debug, Clone, Copy)]
enum ExpRule {
    /// `G` diagonal: phases on the diagonal.
    Diagonal,
    /// `G³ = G` (eigenvalues in {−1, 0, 1}): `I + i sin α G + (cos α − 1) G²`.
    Cubic { square: CMat },
    General,
}

impl ExpRule {
    fn classify(g: &CMat) -> Self {
        if g.is_diagonal(0.0) {
            return ExpRule::Diagonal;
        }
        let square = *g * *g;
        if (square * *g - *g).max_abs() < 1e-14 {
            ExpRule::Cubic { square }
        } else {
            ExpRule::General
        }
    }

    fn exp(&self, g: &CMat, alpha: f64) -> CMat {
        match self {
            ExpRule::Diagonal => {
                let mut m = CMat::zeros(g.dim());
                for k in 0..g.dim() {
                    m.set(k, k, Complex64::from_polar(1.0, alpha * g.get(k, k).re));
                }
                m
            }
            ExpRule::Cubic { square } => {
                let n = g.dim();
                CMat::identity(n)
                    + g.scale(c(0.0, alpha.sin()))
                    + square.scale(c(alpha.cos() - 1.0, 0.0))
            }
            ExpRule::General => g.scale(c(0.0, alpha)).exp(),
        }
    }
}

/// Nonzero entries of a generator, for cheap `Tr[λ M]`.
#[derive(Debug, Clone)]
struct Sparse(Vec<(usize, usize, Complex64)>);

impl Sparse {
    fn of(g: &CMat) -> Self {
        let n = g.dim();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = g.get(i, j);
                if v.norm() > 0.0 {
                    entries.push((i, j, v));
                }
            }
        }
        Sparse(entries)
    }

    /// `Tr[G · M] = Σ G_ij M_ji`.
    #[inline]
    fn trace_with(&self, m: &CMat) -> Complex64 {
        self.0.iter().map(|&(i, j, v)| v * m.get(j, i)).sum()
    }
}

/// The Maurer-Cartan coefficient matrix at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    /// Row-major `J[i][p]`: component along `λ_i` of `−i u⁻¹ ∂u/∂α_p`.
    pub coefficients: Vec<f64>,
    pub dim: usize,
    /// Largest Frobenius norm, over all parameters, of the part of
    /// `−i u⁻¹ ∂u/∂α_p` outside the real span of the generators.
    pub residual: f64,
}

impl Frame {
    pub fn get(&self, i: usize, p: usize) -> f64 {
        self.coefficients[i * self.dim + p]
    }

    pub fn determinant(&self) -> f64 {
        let mut m = self.coefficients.clone();
        real_determinant(self.dim, &mut m)
    }
}

/// Determinants below this are reported as an exact zero (degenerate Euler
/// coordinates).
const DEGENERATE_DET: f64 = 1e-13;

/// A matrix group parameterized as a product of exponentials of fixed
/// hermitian generators.
#[derive(Debug, Clone)]
pub struct MatrixChart {
    group_label: String,
    matrix_dim: usize,
    generators: Vec<CMat>,
    sparse: Vec<Sparse>,
    /// `(generator index, parameter index)` per factor, left to right.
    sequence: Vec<(usize, usize)>,
    rules: Vec<ExpRule>,
    ranges: Vec<(f64, f64)>,
    left: Option<CMat>,
}

impl MatrixChart {
    /// Validates `Tr[λ_iλ_j] = 2δ_ij` to 1e-12, hermiticity, and that the
    /// number of parameters equals the number of generators.
    pub fn new(
        group_label: impl Into<String>,
        generators: Vec<CMat>,
        sequence: Vec<(usize, usize)>,
        ranges: Vec<(f64, f64)>,
    ) -> Result<Self, ChartError> {
        check_ranges(&ranges)?;
        let matrix_dim = generators
            .first()
            .map(CMat::dim)
            .ok_or_else(|| ChartError::BadSequence("no generators".into()))?;
        for (k, g) in generators.iter().enumerate() {
            if g.dim() != matrix_dim {
                return Err(ChartError::BadSequence(format!("generator {k} has wrong size")));
            }
            if (g.adjoint() - *g).max_abs() > 1e-14 {
                return Err(ChartError::NotHermitian(k));
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for (j, b) in generators.iter().enumerate() {
                let value = a.trace_product(b).re;
                let target = if i == j { 2.0 } else { 0.0 };
                if (value - target).abs() > 1e-12 {
                    return Err(ChartError::NotOrthonormal { i, j, value });
                }
            }
        }
        if ranges.len() != generators.len() {
            return Err(ChartError::BadSequence(format!(
                "{} parameters for {} generators; the frame must be square",
                ranges.len(),
                generators.len()
            )));
        }
        for &(g, p) in &sequence {
            if g >= generators.len() || p >= ranges.len() {
                return Err(ChartError::BadSequence(format!("factor ({g}, {p}) out of range")));
            }
        }
        for p in 0..ranges.len() {
            if !sequence.iter().any(|&(_, q)| q == p) {
                return Err(ChartError::BadSequence(format!("parameter {p} is unused")));
            }
        }
        let rules = sequence
            .iter()
            .map(|&(g, _)| ExpRule::classify(&generators[g]))
            .collect();
        let sparse = generators.iter().map(Sparse::of).collect();
        Ok(Self {
            group_label: group_label.into(),
            matrix_dim,
            generators,
            sparse,
            sequence,
            rules,
            ranges,
            left: None,
        })
    }

    pub fn group_label(&self) -> &str {
        &self.group_label
    }

    pub fn matrix_dim(&self) -> usize {
        self.matrix_dim
    }

    pub fn generators(&self) -> &[CMat] {
        &self.generators
    }

    pub fn exponent_sequence(&self) -> &[(usize, usize)] {
        &self.sequence
    }

    pub fn ranges(&self) -> &[(f64, f64)] {
        &self.ranges
    }

    pub fn dim(&self) -> usize {
        self.ranges.len()
    }

    /// The chart `α ↦ g·u(α)`.
    pub fn left_translated(&self, g: CMat) -> Self {
        let mut out = self.clone();
        out.left = Some(match self.left {
            Some(h) => g * h,
            None => g,
        });
        out.group_label = format!("g·{}", self.group_label);
        out
    }

    fn check_len(&self, alpha: &[f64]) -> Result<(), ChartError> {
        if alpha.len() != self.dim() {
            return Err(ChartError::DimensionMismatch {
                expected: self.dim(),
                got: alpha.len(),
            });
        }
        Ok(())
    }

    fn factors(&self, alpha: &[f64]) -> Vec<CMat> {
        self.sequence
            .iter()
            .zip(&self.rules)
            .map(|(&(g, p), rule)| rule.exp(&self.generators[g], alpha[p]))
            .collect()
    }

    /// `u(α)`.
    pub fn element(&self, alpha: &[f64]) -> Result<CMat, ChartError> {
        self.check_len(alpha)?;
        let u = self
            .factors(alpha)
            .into_iter()
            .fold(CMat::identity(self.matrix_dim), |acc, f| acc * f);
        Ok(match self.left {
            Some(g) => g * u,
            None => u,
        })
    }

    /// Exact `∂u/∂α_p`: for every factor carrying `α_p`, insert `iλ` in front
    /// of that factor and sum (product rule).
    pub fn derivative(&self, alpha: &[f64], p: usize) -> Result<CMat, ChartError> {
        self.check_len(alpha)?;
        let factors = self.factors(alpha);
        let (prefix, suffix) = self.prefix_suffix(&factors);
        let mut d = CMat::zeros(self.matrix_dim);
        for (m, &(g, q)) in self.sequence.iter().enumerate() {
            if q == p {
                d = d + self.inserted(&prefix[m], g, &suffix[m]);
            }
        }
        Ok(d)
    }

    /// `prefix[m] = left·F_0⋯F_{m−1}`, `suffix[m] = F_m⋯F_last`.
    fn prefix_suffix(&self, factors: &[CMat]) -> (Vec<CMat>, Vec<CMat>) {
        let n = self.matrix_dim;
        let len = factors.len();
        let mut prefix = Vec::with_capacity(len + 1);
        prefix.push(self.left.unwrap_or_else(|| CMat::identity(n)));
        for f in factors {
            let last = *prefix.last().expect("seeded");
            prefix.push(last * *f);
        }
        let mut suffix = vec![CMat::identity(n); len + 1];
        for m in (0..len).rev() {
            suffix[m] = factors[m] * suffix[m + 1];
        }
        (prefix, suffix)
    }

    #[inline]
    fn inserted(&self, left: &CMat, g: usize, right: &CMat) -> CMat {
        *left * self.generators[g].scale(c(0.0, 1.0)) * *right
    }

    fn frame_impl(&self, alpha: &[f64], with_residual: bool) -> Frame {
        let k = self.dim();
        let factors = self.factors(alpha);
        let (prefix, suffix) = self.prefix_suffix(&factors);
        let u_inv = prefix[factors.len()].adjoint();
        let mut coefficients = vec![0.0; k * k];
        let mut residual: f64 = 0.0;
        let minus_i = c(0.0, -1.0);
        for p in 0..k {
            let mut du = CMat::zeros(self.matrix_dim);
            for (m, &(g, q)) in self.sequence.iter().enumerate() {
                if q == p {
                    du = du + self.inserted(&prefix[m], g, &suffix[m]);
                }
            }
            let form = (u_inv * du).scale(minus_i);
            for (i, gen) in self.sparse.iter().enumerate() {
                coefficients[i * k + p] = 0.5 * gen.trace_with(&form).re;
            }
            if with_residual {
                let mut rest = form;
                for (i, gen) in self.generators.iter().enumerate() {
                    rest = rest - gen.scale(c(coefficients[i * k + p], 0.0));
                }
                residual = residual.max(rest.frobenius_norm());
            }
        }
        Frame { coefficients, dim: k, residual }
    }

    /// The coefficient matrix `J(α)` and its decomposition residual.
    pub fn frame(&self, alpha: &[f64]) -> Result<Frame, ChartError> {
        self.check_len(alpha)?;
        Ok(self.frame_impl(alpha, true))
    }

    /// Invariant density `|det J(α)|`. Degenerate points (box boundaries
    /// where Euler coordinates collapse) give 0. Fails if some derivative is
    /// not in the span of the generators to 1e-9.
    pub fn maurer_cartan_density(&self, alpha: &[f64]) -> Result<f64, ChartError> {
        let frame = self.frame(alpha)?;
        if !(frame.residual <= 1e-9) {
            return Err(ChartError::Inconsistent {
                alpha: alpha.to_vec(),
                residual: frame.residual,
            });
        }
        Ok(clamp_degenerate(frame.determinant().abs()))
    }

    /// `|det J(α)|` without the residual check; for hot loops on charts whose
    /// consistency has been established.
    #[inline]
    pub fn density_unchecked(&self, alpha: &[f64]) -> f64 {
        clamp_degenerate(self.frame_impl(alpha, false).determinant().abs())
    }

    /// A [`Chart`] over the same box whose density is the Maurer-Cartan density.
    pub fn to_chart(&self) -> Chart {
        let me = self.clone();
        Chart::new(
            format!("{} Maurer-Cartan", self.group_label),
            self.ranges.clone(),
            move |a: &[f64]| me.density_unchecked(a),
        )
        .expect("ranges validated at construction")
    }
}

#[inline]
fn clamp_degenerate(d: f64) -> f64 {
    if d < DEGENERATE_DET {
        0.0
    } else {
        d
    }
}

/// SU(2) as `e^{iσ3α} e^{iσ2β} e^{iσ3γ}` with the Euler ranges.
pub fn su2_matrix_chart() -> MatrixChart {
    MatrixChart::new(
        "SU(2)",
        pauli().to_vec(),
        vec![(2, 0), (1, 1), (2, 2)],
        vec![(0.0, PI), (0.0, PI / 2.0), (0.0, 2.0 * PI)],
    )
    .expect("Pauli basis is orthonormal")
}

/// SO(3) as `e^{iαJ_z} e^{iβJ_y} e^{iγJ_z} = R_z(α) R_y(β) R_z(γ)`.
pub fn so3_matrix_chart() -> MatrixChart {
    MatrixChart::new(
        "SO(3)",
        so3_generators().to_vec(),
        vec![(2, 0), (1, 1), (2, 2)],
        vec![(0.0, 2.0 * PI), (0.0, PI), (0.0, 2.0 * PI)],
    )
    .expect("J basis is orthonormal")
}

/// SU(3) as
/// `e^{iλ3α1} e^{iλ2α2} e^{iλ3α3} e^{iλ5α4} e^{iλ3α5} e^{iλ2α6} e^{iλ3α7} e^{iλ8α8}`
/// with `α1, α5 ∈ [0, π]`, `α2, α4, α6 ∈ [0, π/2]`, `α3, α7 ∈ [0, 2π]`,
/// `α8 ∈ [0, √3π]`.
pub fn su3_matrix_chart() -> MatrixChart {
    // zero-based Gell-Mann indices: λ2 → 1, λ3 → 2, λ5 → 4, λ8 → 7
    let gens = [2, 1, 2, 4, 2, 1, 2, 7];
    let sequence = gens.iter().enumerate().map(|(p, &g)| (g, p)).collect();
    let half = PI / 2.0;
    let ranges = vec![
        (0.0, PI),
        (0.0, half),
        (0.0, 2.0 * PI),
        (0.0, half),
        (0.0, PI),
        (0.0, half),
        (0.0, 2.0 * PI),
        (0.0, 3f64.sqrt() * PI),
    ];
    MatrixChart::new("SU(3)", gell_mann().to_vec(), sequence, ranges)
        .expect("Gell-Mann basis is orthonormal")
}
