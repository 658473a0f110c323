//! Closed-form volumes of spheres, projective spaces, classical and
//! exceptional groups, and generalized flag manifolds.
//!
//! Normalizations: spheres have unit radius, projective spaces are sphere
//! quotients (closed geodesics of length π), unitary groups use generators
//! with `Tr[λ_i λ_j] = 2δ_ij` in the defining representation, orthogonal
//! groups the vector representation, and `Sp(n)` the product of unit spheres
//! `S^3 × S^7 × ⋯`. `G2` and `F4` carry a free positive scale `ξ`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::exact::{ExactError, ExactVolume};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClosedFormError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported manifold: {0}")]
    Unsupported(String),
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

type Result<T> = std::result::Result<T, ClosedFormError>;

fn invalid(msg: impl Into<String>) -> ClosedFormError {
    ClosedFormError::InvalidParameter(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Sphere,
    Ball,
    RealProj,
    ComplexProj,
    QuatProj,
    OctProj,
    SU,
    U,
    PU,
    SO,
    O,
    Spin,
    Sp,
    G2,
    F4,
    ComplexFlag,
    RealFlag,
}

impl Family {
    pub const ALL: [Family; 17] = [
        Family::Sphere,
        Family::Ball,
        Family::RealProj,
        Family::ComplexProj,
        Family::QuatProj,
        Family::OctProj,
        Family::SU,
        Family::U,
        Family::PU,
        Family::SO,
        Family::O,
        Family::Spin,
        Family::Sp,
        Family::G2,
        Family::F4,
        Family::ComplexFlag,
        Family::RealFlag,
    ];

    /// Short lowercase name used on the command line.
    pub fn key(self) -> &'static str {
        match self {
            Family::Sphere => "sphere",
            Family::Ball => "ball",
            Family::RealProj => "rp",
            Family::ComplexProj => "cp",
            Family::QuatProj => "hp",
            Family::OctProj => "op",
            Family::SU => "su",
            Family::U => "u",
            Family::PU => "pu",
            Family::SO => "so",
            Family::O => "o",
            Family::Spin => "spin",
            Family::Sp => "sp",
            Family::G2 => "g2",
            Family::F4 => "f4",
            Family::ComplexFlag => "flag",
            Family::RealFlag => "rflag",
        }
    }

    pub fn from_key(key: &str) -> Option<Family> {
        let key = key.to_ascii_lowercase();
        Family::ALL.into_iter().find(|f| f.key() == key)
    }

    /// Number of integer parameters, `None` for partitions.
    fn arity(self) -> Option<usize> {
        match self {
            Family::G2 | Family::F4 => Some(0),
            Family::ComplexFlag | Family::RealFlag => None,
            _ => Some(1),
        }
    }
}

/// Projective-space base field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    R,
    C,
    H,
    O,
}

impl Field {
    /// Real dimension of the field.
    pub fn dim(self) -> u32 {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
            Field::O => 8,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Field::R => "RP",
            Field::C => "CP",
            Field::H => "HP",
            Field::O => "OP",
        }
    }
}

/// A manifold of one of the supported families with its integer parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ManifoldId {
    pub family: Family,
    pub params: Vec<u32>,
    /// Scale for `G2`/`F4`; ignored elsewhere.
    pub xi: Option<BigRational>,
}

impl ManifoldId {
    pub fn new(family: Family, params: Vec<u32>) -> Result<Self> {
        let id = Self { family, params, xi: None };
        id.validate()?;
        Ok(id)
    }

    pub fn with_xi(mut self, xi: BigRational) -> Result<Self> {
        if !xi.is_positive() {
            return Err(invalid("xi must be positive"));
        }
        self.xi = Some(xi);
        Ok(self)
    }

    pub fn projective(field: Field, n: u32) -> Result<Self> {
        let family = match field {
            Field::R => Family::RealProj,
            Field::C => Family::ComplexProj,
            Field::H => Family::QuatProj,
            Field::O => Family::OctProj,
        };
        Self::new(family, vec![n])
    }

    fn validate(&self) -> Result<()> {
        match self.family.arity() {
            Some(k) if self.params.len() != k => {
                return Err(invalid(format!(
                    "{} takes {k} parameter(s), got {}",
                    self.family.key(),
                    self.params.len()
                )))
            }
            None => check_partition(&self.params)?,
            _ => {}
        }
        if self.family == Family::OctProj && !matches!(self.params[0], 1 | 2) {
            return Err(ClosedFormError::Unsupported(format!(
                "OP^{} does not exist; only OP^1 and OP^2",
                self.params[0]
            )));
        }
        Ok(())
    }

    pub fn projective_field(&self) -> Option<Field> {
        match self.family {
            Family::RealProj => Some(Field::R),
            Family::ComplexProj => Some(Field::C),
            Family::QuatProj => Some(Field::H),
            Family::OctProj => Some(Field::O),
            _ => None,
        }
    }

    fn xi(&self) -> BigRational {
        self.xi.clone().unwrap_or_else(BigRational::one)
    }

    pub fn volume(&self) -> Result<ExactVolume> {
        let p = |i: usize| self.params[i];
        match self.family {
            Family::Sphere => vol_sphere(p(0)),
            Family::Ball => vol_ball(p(0)),
            Family::RealProj | Family::ComplexProj | Family::QuatProj | Family::OctProj => {
                vol_projective(self.projective_field().expect("projective family"), p(0))
            }
            Family::SU => vol_su(p(0)),
            Family::U => vol_u(p(0)),
            Family::PU => vol_pu(p(0)),
            Family::SO => vol_so(p(0)),
            Family::O => vol_o(p(0)),
            Family::Spin => vol_spin(p(0)),
            Family::Sp => vol_sp(p(0)),
            Family::G2 => vol_g2(&self.xi()),
            Family::F4 => vol_f4(&self.xi()),
            Family::ComplexFlag => vol_complex_flag(&self.params),
            Family::RealFlag => vol_real_flag(&self.params),
        }
    }
}

impl fmt::Display for ManifoldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p0 = self.params.first().copied().unwrap_or(0);
        match self.family {
            Family::Sphere => write!(f, "S^{p0}"),
            Family::Ball => write!(f, "D^{p0}"),
            Family::RealProj | Family::ComplexProj | Family::QuatProj | Family::OctProj => {
                write!(f, "{}^{p0}", self.projective_field().unwrap().symbol())
            }
            Family::SU => write!(f, "SU({p0})"),
            Family::U => write!(f, "U({p0})"),
            Family::PU => write!(f, "PU({p0})"),
            Family::SO => write!(f, "SO({p0})"),
            Family::O => write!(f, "O({p0})"),
            Family::Spin => write!(f, "Spin({p0})"),
            Family::Sp => write!(f, "Sp({p0})"),
            Family::G2 | Family::F4 => {
                let name = if self.family == Family::G2 { "G2" } else { "F4" };
                match &self.xi {
                    Some(xi) if !xi.is_one() => write!(f, "{name}[ξ={xi}]"),
                    _ => f.write_str(name),
                }
            }
            Family::ComplexFlag | Family::RealFlag => {
                let g = if self.family == Family::ComplexFlag { "U" } else { "O" };
                let n: u32 = self.params.iter().sum();
                let parts: Vec<String> = self.params.iter().map(|q| format!("{g}({q})")).collect();
                write!(f, "{g}({n})/({})", parts.join("×"))
            }
        }
    }
}

fn check_partition(parts: &[u32]) -> Result<()> {
    if parts.len() < 2 {
        return Err(invalid("a flag partition needs at least two parts"));
    }
    if parts.contains(&0) {
        return Err(invalid("partition parts must be positive"));
    }
    Ok(())
}

fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

fn frac_pi(num: impl Into<BigInt>, den: impl Into<BigInt>, pi_pow: u32) -> ExactVolume {
    ExactVolume::normalize(num, den, 1u32, pi_pow).expect("nonzero denominator")
}

/// Volume of the unit sphere `S^n ⊂ R^{n+1}`.
///
/// `Vol(S^{2m+1}) = 2π^{m+1}/m!` and `Vol(S^{2m}) = 2(2π)^m/(2m−1)!!`.
pub fn vol_sphere(n: u32) -> Result<ExactVolume> {
    let m = n / 2;
    Ok(if n % 2 == 1 {
        frac_pi(2, factorial(m), m + 1)
    } else {
        frac_pi(BigInt::from(2) << m as usize, double_factorial(2 * i64::from(m) - 1), m)
    })
}

/// Unit ball `D^n`: `Vol(S^{n−1})/n`.
pub fn vol_ball(n: u32) -> Result<ExactVolume> {
    if n == 0 {
        return Err(invalid("ball dimension must be at least 1"));
    }
    Ok(vol_sphere(n - 1)?.mul(&frac_pi(1, n, 0)))
}

/// `KP^n` as the quotient `S^{kn+k−1}/S^{k−1}`, `k = dim K`. `n = 0` is a point.
pub fn vol_projective(field: Field, n: u32) -> Result<ExactVolume> {
    if field == Field::O && n > 2 {
        return Err(ClosedFormError::Unsupported(format!(
            "OP^{n} does not exist; only OP^1 and OP^2"
        )));
    }
    let k = field.dim();
    Ok(vol_sphere(k * n + k - 1)?.div(&vol_sphere(k - 1)?)?)
}

/// Weinstein integer `(2π/l)^d · Vol(X)/Vol(S^d)` of a projective space with
/// geodesic length `l = π`, `d = dim X`.
pub fn weinstein_integer(cross: &ManifoldId) -> Result<BigInt> {
    let field = cross
        .projective_field()
        .ok_or_else(|| invalid(format!("{cross} is not a projective space")))?;
    let n = cross.params[0];
    let dim = field.dim() * n;
    let ratio = vol_projective(field, n)?
        .div(&vol_sphere(dim)?)?
        .mul(&ExactVolume::integer(BigInt::one() << dim as usize));
    ratio.as_integer().cloned().ok_or_else(|| {
        ClosedFormError::InternalConsistency(format!(
            "Weinstein ratio for {cross} is {ratio}, not an integer"
        ))
    })
}

fn require_at_least(name: &str, n: u32, min: u32) -> Result<()> {
    if n < min {
        return Err(invalid(format!("{name}({n}) needs n ≥ {min}")));
    }
    Ok(())
}

/// `Vol(SU(n)) = √(n·2^{n−1}) · π^{(n−1)(n+2)/2} / ∏_{k=1}^{n−1} k!`.
pub fn vol_su(n: u32) -> Result<ExactVolume> {
    require_at_least("SU", n, 2)?;
    let den: BigInt = (1..n).map(factorial).product();
    let radicand = BigUint::from(n) << (n - 1) as usize;
    Ok(ExactVolume::normalize(1, den, radicand, (n - 1) * (n + 2) / 2)?)
}

/// The SU(n) volume built by the fibration `SU(n−1) → SU(n) → S^{2n−1}`, with
/// the stretching factor `√(n/(2(n−1)))` of the last Cartan generator at each
/// step, starting from `Vol(SU(2)) = 2π²`.
pub fn vol_su_recursive(n: u32) -> Result<ExactVolume> {
    require_at_least("SU", n, 2)?;
    let mut vol = vol_sphere(3)?;
    for m in 3..=n {
        let stretch = ExactVolume::sqrt_ratio(m, 2 * (m - 1))?;
        vol = stretch.mul(&vol_sphere(2 * m - 1)?).mul(&vol);
    }
    Ok(vol)
}

/// Stretching factor `√(n/(2(n−1)))` between `SU(n)` and `SU(n−1) × S^{2n−1}`.
pub fn stretching_factor(n: u32) -> Result<ExactVolume> {
    require_at_least("stretching factor for SU", n, 2)?;
    Ok(ExactVolume::sqrt_ratio(n, 2 * (n - 1))?)
}

/// `Vol(U(n)) = √(n·2^{n+1}) · π^{n(n+1)/2} / ∏_{k=1}^{n−1} k!` with a unit-radius U(1) factor.
pub fn vol_u(n: u32) -> Result<ExactVolume> {
    require_at_least("U", n, 1)?;
    let den: BigInt = (1..n).map(factorial).product();
    let radicand = BigUint::from(n) << (n + 1) as usize;
    Ok(ExactVolume::normalize(1, den, radicand, n * (n + 1) / 2)?)
}

/// `Vol(PU(n)) = Vol(SU(n)) / n`, the center `Z_n` having `n` elements.
pub fn vol_pu(n: u32) -> Result<ExactVolume> {
    require_at_least("PU", n, 2)?;
    Ok(vol_su(n)?.mul(&frac_pi(1, n, 0)))
}

/// `Vol(SO(n)) = ∏_{d=2}^{n} Vol(S^{d−1})` (vector representation, no stretching).
pub fn vol_so(n: u32) -> Result<ExactVolume> {
    require_at_least("SO", n, 2)?;
    (2..=n).try_fold(ExactVolume::one(), |acc, d| Ok(acc.mul(&vol_sphere(d - 1)?)))
}

/// Even/odd closed forms
/// `Vol(SO(2m)) = 2^{m−1}(2π)^{m²}/∏_{s=1}^{m−1}(2s)!` and
/// `Vol(SO(2m+1)) = 2^m(2π)^{m(m+1)}/∏_{s=1}^{m−1}(2s+1)!`.
pub fn vol_so_parity_form(n: u32) -> Result<ExactVolume> {
    require_at_least("SO", n, 2)?;
    let m = n / 2;
    let (two_pow, pi_pow, den): (u32, u32, BigInt) = if n.is_multiple_of(2) {
        (m - 1, m * m, (1..m).map(|s| factorial(2 * s)).product())
    } else {
        (m, m * (m + 1), (1..m).map(|s| factorial(2 * s + 1)).product())
    };
    let num = BigInt::one() << (two_pow + pi_pow) as usize;
    Ok(frac_pi(num, den, pi_pow))
}

/// `2·Vol(SO(n))`: both `O(n)` and `Spin(n)` under the vector normalization.
pub fn vol_o_or_spin(n: u32) -> Result<ExactVolume> {
    require_at_least("O/Spin", n, 2)?;
    Ok(vol_so(n)?.mul(&ExactVolume::integer(2)))
}

/// `O(n)` for all `n ≥ 0`, with `Vol(O(0)) = 1` and `Vol(O(1)) = 2`.
pub fn vol_o(n: u32) -> Result<ExactVolume> {
    match n {
        0 => Ok(ExactVolume::one()),
        1 => Ok(ExactVolume::integer(2)),
        _ => vol_o_or_spin(n),
    }
}

pub fn vol_spin(n: u32) -> Result<ExactVolume> {
    require_at_least("Spin", n, 3)?;
    vol_o_or_spin(n)
}

/// `Vol(Sp(n)) = ∏_{k=1}^{n} Vol(S^{4k−1})`.
pub fn vol_sp(n: u32) -> Result<ExactVolume> {
    require_at_least("Sp", n, 1)?;
    (1..=n).try_fold(ExactVolume::one(), |acc, k| Ok(acc.mul(&vol_sphere(4 * k - 1)?)))
}

/// `2^n π^{n(n+1)} / ∏_{k=1}^{n} (2k−1)!`.
pub fn vol_sp_closed_form(n: u32) -> Result<ExactVolume> {
    require_at_least("Sp", n, 1)?;
    let den: BigInt = (1..=n).map(|k| factorial(2 * k - 1)).product();
    Ok(frac_pi(BigInt::one() << n as usize, den, n * (n + 1)))
}

fn check_xi(xi: &BigRational) -> Result<()> {
    if !xi.is_positive() {
        return Err(invalid("xi must be positive"));
    }
    Ok(())
}

/// `Vol(G2) = Vol(SU(3)) · Vol(S^6) · ξ` from `SU(3) → G2 → S^6`.
pub fn vol_g2(xi: &BigRational) -> Result<ExactVolume> {
    check_xi(xi)?;
    Ok(vol_su(3)?.mul(&vol_sphere(6)?).scale(xi))
}

/// `Vol(F4) = 2^25 π^28 / (5!·7!·11!) · ξ`.
pub fn vol_f4(xi: &BigRational) -> Result<ExactVolume> {
    check_xi(xi)?;
    let den = factorial(5) * factorial(7) * factorial(11);
    Ok(frac_pi(BigInt::one() << 25usize, den, 28).scale(xi))
}

/// `Vol(OP²) · Vol(Spin(9)) · ξ` from `Spin(9) → F4 → OP²`.
pub fn vol_f4_fibration(xi: &BigRational) -> Result<ExactVolume> {
    check_xi(xi)?;
    Ok(vol_projective(Field::O, 2)?.mul(&vol_spin(9)?).scale(xi))
}

/// Product of the odd unit spheres `S^1 × S^3 × ⋯ × S^{2q−1}` (the naive U(q) volume).
fn odd_sphere_product(q: u32) -> Result<ExactVolume> {
    (1..=q).try_fold(ExactVolume::one(), |acc, k| Ok(acc.mul(&vol_sphere(2 * k - 1)?)))
}

/// `U(n)/∏U(q_i)` as a quotient of odd-sphere products without stretching
/// factors; the Cartan tori in numerator and denominator coincide so the
/// factors cancel.
pub fn vol_complex_flag(partition: &[u32]) -> Result<ExactVolume> {
    check_partition(partition)?;
    let n: u32 = partition.iter().sum();
    let denominator = partition
        .iter()
        .try_fold(ExactVolume::one(), |acc, &q| Ok::<_, ClosedFormError>(acc.mul(&odd_sphere_product(q)?)))?;
    Ok(odd_sphere_product(n)?.div(&denominator)?)
}

/// Full flag manifold `U(n)/U(1)^n`: `∏_{k=1}^{n−1} π^k/k!`.
pub fn vol_full_flag(n: u32) -> Result<ExactVolume> {
    require_at_least("Fl", n, 2)?;
    Ok((1..n).fold(ExactVolume::one(), |acc, k| acc.mul(&frac_pi(1, factorial(k), k))))
}

/// `O(n)/∏O(n_i)` from the orthogonal group volumes, with `Vol(O(1)) = 2`.
pub fn vol_real_flag(partition: &[u32]) -> Result<ExactVolume> {
    check_partition(partition)?;
    let n: u32 = partition.iter().sum();
    let denominator = partition
        .iter()
        .try_fold(ExactVolume::one(), |acc, &q| Ok::<_, ClosedFormError>(acc.mul(&vol_o(q)?)))?;
    Ok(vol_o(n)?.div(&denominator)?)
}

/// `R_sc(S^n_R) = n(n−1)/R²`.
pub fn scalar_curvature(n: u32, radius: &BigRational) -> Result<BigRational> {
    require_at_least("sphere for scalar curvature", n, 1)?;
    if !radius.is_positive() {
        return Err(invalid("radius must be positive"));
    }
    let nn = BigInt::from(n);
    Ok(BigRational::from_integer(&nn * (&nn - 1)) / (radius * radius))
}

/// Norm `√(n(n−1)/2)` of the generator-coefficient vector of a pure state.
pub fn bloch_radius(n: u32) -> Result<ExactVolume> {
    require_at_least("Bloch radius for dimension", n, 2)?;
    Ok(ExactVolume::normalize(1, 1, BigUint::from(n) * (n - 1) / 2u32, 0)?)
}

/// Two groups that are isomorphic but whose volumes disagree because the
/// generator normalization is fixed in different representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationClash {
    pub name_a: String,
    pub value_a: ExactVolume,
    pub name_b: String,
    pub value_b: ExactVolume,
}

impl NormalizationClash {
    pub fn ratio(&self) -> Result<ExactVolume> {
        Ok(self.value_a.div(&self.value_b)?)
    }
}

/// `Spin(6) ≅ SU(4)` and `Spin(5) ≅ Sp(2)`, each side computed from its own formula.
pub fn normalization_clashes() -> Result<Vec<NormalizationClash>> {
    Ok(vec![
        NormalizationClash {
            name_a: "Spin(6)".into(),
            value_a: vol_spin(6)?,
            name_b: "SU(4)".into(),
            value_b: vol_su(4)?,
        },
        NormalizationClash {
            name_a: "Spin(5)".into(),
            value_a: vol_spin(5)?,
            name_b: "Sp(2)".into(),
            value_b: vol_sp(2)?,
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn v(s: &str) -> ExactVolume {
        s.parse().unwrap()
    }

    #[test]
    fn spheres() {
        let expected = ["2", "2·π", "4·π", "2·π^2", "(8/3)·π^2", "π^3"];
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(vol_sphere(n as u32).unwrap(), v(e), "S^{n}");
        }
        assert_eq!(vol_sphere(8).unwrap(), v("(32/105)·π^4"));
    }

    #[test]
    fn balls() {
        assert_eq!(vol_ball(3).unwrap(), v("(4/3)·π"));
        assert_eq!(vol_ball(1).unwrap(), v("2"));
        assert_eq!(vol_ball(2).unwrap(), v("π"));
        assert!(vol_ball(0).is_err());
    }

    #[test]
    fn projective_spaces() {
        assert_eq!(vol_projective(Field::R, 1).unwrap(), v("π"));
        assert_eq!(vol_projective(Field::H, 1).unwrap(), v("(1/6)·π^2"));
        assert_eq!(vol_projective(Field::O, 2).unwrap(), v("(6/39916800)·π^8"));
        assert_eq!(vol_projective(Field::O, 1).unwrap(), v("(1/840)·π^4"));
        assert_eq!(vol_projective(Field::C, 0).unwrap(), ExactVolume::one());
        assert!(matches!(
            vol_projective(Field::O, 3),
            Err(ClosedFormError::Unsupported(_))
        ));
        assert!(ManifoldId::projective(Field::O, 3).is_err());
    }

    #[test]
    fn weinstein_examples() {
        let w = |f, n| weinstein_integer(&ManifoldId::projective(f, n).unwrap()).unwrap();
        for n in 1..=10u32 {
            assert_eq!(w(Field::R, n), BigInt::from(1u64 << (n - 1)));
        }
        assert_eq!(w(Field::C, 3), BigInt::from(10));
        assert_eq!(w(Field::O, 2), BigInt::from(39));
        assert_eq!(w(Field::O, 1), BigInt::from(1));
        assert_eq!(w(Field::H, 1), BigInt::from(1));
        assert_eq!(w(Field::H, 2), BigInt::from(7));
        let sphere = ManifoldId::new(Family::Sphere, vec![3]).unwrap();
        assert!(weinstein_integer(&sphere).is_err());
    }

    #[test]
    fn unitary_groups() {
        assert_eq!(vol_su(2).unwrap(), v("2·π^2"));
        assert_eq!(vol_su(3).unwrap(), v("√3·π^5"));
        assert_eq!(vol_su(4).unwrap(), v("(1/3)·√2·π^9"));
        assert_eq!(vol_u(1).unwrap(), v("2·π"));
        assert_eq!(vol_u(2).unwrap(), v("4·π^3"));
        // √(3·16)·π^6/(1!·2!) = 4√3·π^6/2
        assert_eq!(vol_u(3).unwrap(), v("2·√3·π^6"));
        assert_eq!(vol_pu(2).unwrap(), v("π^2"));
        assert_eq!(vol_pu(3).unwrap(), v("(1/3)·√3·π^5"));
        assert_eq!(vol_pu(4).unwrap(), v("(1/12)·√2·π^9"));
        assert!(vol_su(1).is_err());
        assert!(vol_u(0).is_err());
    }

    #[test]
    fn u_is_su_times_circle() {
        for n in 2..=10 {
            assert_eq!(vol_u(n).unwrap(), vol_su(n).unwrap().mul(&vol_sphere(1).unwrap()));
        }
    }

    #[test]
    fn pu2_matches_rp3() {
        assert_eq!(vol_pu(2).unwrap(), vol_projective(Field::R, 3).unwrap());
    }

    #[test]
    fn orthogonal_groups() {
        assert_eq!(vol_so(2).unwrap(), v("2·π"));
        assert_eq!(vol_so(3).unwrap(), v("8·π^2"));
        assert_eq!(vol_so(5).unwrap(), v("(128/3)·π^6"));
        assert_eq!(vol_spin(6).unwrap(), v("(256/3)·π^9"));
        assert_eq!(vol_o_or_spin(2).unwrap(), v("4·π"));
        assert_eq!(vol_o_or_spin(3).unwrap(), v("16·π^2"));
        assert!(vol_spin(2).is_err());
        assert_eq!(vol_o(0).unwrap(), ExactVolume::one());
        assert_eq!(vol_o(1).unwrap(), v("2"));
    }

    #[test]
    fn symplectic_groups() {
        assert_eq!(vol_sp(1).unwrap(), v("2·π^2"));
        assert_eq!(vol_sp(2).unwrap(), v("(2/3)·π^6"));
        assert_eq!(vol_sp(3).unwrap(), v("(1/90)·π^12"));
        for n in 1..=8 {
            assert_eq!(vol_sp(n).unwrap(), vol_sp_closed_form(n).unwrap());
        }
    }

    #[test]
    fn exceptional_groups() {
        let one = BigRational::one();
        let g2 = vol_g2(&one).unwrap();
        assert_eq!(g2, v("(16/15)·√3·π^8"));
        let two = BigRational::from_integer(2.into());
        assert_eq!(vol_g2(&two).unwrap(), v("(32/15)·√3·π^8"));
        let expected = 16.0 / 15.0 * 3f64.sqrt() * std::f64::consts::PI.powi(8);
        assert!((g2.approx() - expected).abs() / expected < 1e-14);
        assert!((g2.approx() - 1.753e4).abs() < 1.0);

        let f4 = vol_f4(&one).unwrap();
        assert_eq!(f4, vol_f4_fibration(&one).unwrap());
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(vol_f4(&half).unwrap().mul(&ExactVolume::integer(2)), f4);
        assert!(vol_g2(&BigRational::zero()).is_err());
    }

    #[test]
    fn complex_flags() {
        assert_eq!(vol_complex_flag(&[1, 1, 1]).unwrap(), v("(1/2)·π^3"));
        assert_eq!(vol_complex_flag(&[1, 4]).unwrap(), v("(1/24)·π^4"));
        assert_eq!(vol_complex_flag(&[2, 3]).unwrap(), v("(1/144)·π^6"));
        for n in 2..=8 {
            let ones = vec![1; n as usize];
            assert_eq!(vol_complex_flag(&ones).unwrap(), vol_full_flag(n).unwrap());
        }
        assert!(vol_complex_flag(&[3]).is_err());
        assert!(vol_complex_flag(&[2, 0]).is_err());
    }

    #[test]
    fn real_flags() {
        assert_eq!(vol_real_flag(&[1, 2]).unwrap(), v("2·π"));
        assert_eq!(vol_real_flag(&[2, 2]).unwrap(), v("2·π^2"));
        for n in 1..=10 {
            assert_eq!(
                vol_real_flag(&[1, n]).unwrap(),
                vol_projective(Field::R, n).unwrap()
            );
        }
    }

    #[test]
    fn curvature_and_bloch() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(scalar_curvature(2, &r(1, 1)).unwrap(), r(2, 1));
        assert_eq!(scalar_curvature(1, &r(1, 1)).unwrap(), r(0, 1));
        assert_eq!(scalar_curvature(3, &r(2, 1)).unwrap(), r(3, 2));
        assert_eq!(bloch_radius(2).unwrap(), ExactVolume::one());
        assert_eq!(bloch_radius(3).unwrap(), v("√3"));
        assert_eq!(bloch_radius(4).unwrap(), v("√6"));
    }

    #[test]
    fn clashes() {
        let c = normalization_clashes().unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].ratio().unwrap(), v("128·√2"));
        assert_eq!(c[1].ratio().unwrap(), v("128"));
    }

    #[test]
    fn manifold_id_validation_and_display() {
        assert!(ManifoldId::new(Family::SU, vec![]).is_err());
        assert!(ManifoldId::new(Family::ComplexFlag, vec![5]).is_err());
        let flag = ManifoldId::new(Family::ComplexFlag, vec![3, 2]).unwrap();
        assert_eq!(flag.to_string(), "U(5)/(U(3)×U(2))");
        assert_eq!(flag.volume().unwrap(), v("(1/144)·π^6"));
        let g2 = ManifoldId::new(Family::G2, vec![])
            .unwrap()
            .with_xi(BigRational::new(1.into(), 2.into()))
            .unwrap();
        assert_eq!(g2.volume().unwrap(), v("(8/15)·√3·π^8"));
        assert_eq!(Family::from_key("SU"), Some(Family::SU));
        assert_eq!(Family::from_key("e8"), None);
    }
}
