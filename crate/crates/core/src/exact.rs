//! Exact numbers of the form `(p/q)·√m·π^k`.
//!
//! Every closed-form volume produced by this crate lives in this set: a
//! rational coefficient, an optional square root of a square-free integer and
//! a non-negative power of π. The set is closed under multiplication and
//! division (as long as the π power stays non-negative). Addition is not
//! supported since `√2 + √3` has no representation here.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("invalid denominator: zero")]
    InvalidDenominator,
    #[error("radicand must be at least 1")]
    InvalidRadicand,
    #[error("division by zero")]
    DivideByZero,
    #[error("result would carry a negative power of pi ({0})")]
    NegativePiPower(i64),
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// `num/den · √radicand · π^pi_pow` in canonical form.
///
/// Canonical means `gcd(|num|, den) = 1`, `den ≥ 1`, `radicand` square-free
/// and `≥ 1`, and zero is stored as `0/1·√1·π^0`. Since the representation is
/// canonical, structural equality is numeric equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactVolume {
    num: BigInt,
    den: BigInt,
    radicand: BigUint,
    pi_pow: u32,
}

impl ExactVolume {
    /// Builds a canonical value from raw fields, pulling square factors out of
    /// the radicand and reducing the fraction.
    pub fn normalize(
        num: impl Into<BigInt>,
        den: impl Into<BigInt>,
        radicand: impl Into<BigUint>,
        pi_pow: u32,
    ) -> Result<Self, ExactError> {
        let num = num.into();
        let den = den.into();
        let radicand = radicand.into();
        if den.is_zero() {
            return Err(ExactError::InvalidDenominator);
        }
        if radicand.is_zero() {
            return Err(ExactError::InvalidRadicand);
        }
        let (square_root, free) = split_square(radicand);
        Ok(Self::reduce(num * BigInt::from(square_root), den, free, pi_pow))
    }

    /// Reduce assuming `radicand` is already square-free and `den ≠ 0`.
    fn reduce(num: BigInt, den: BigInt, radicand: BigUint, pi_pow: u32) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / &g, den / &g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Self { num, den, radicand, pi_pow }
    }

    pub fn zero() -> Self {
        Self {
            num: BigInt::zero(),
            den: BigInt::one(),
            radicand: BigUint::one(),
            pi_pow: 0,
        }
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self::reduce(n.into(), BigInt::one(), BigUint::one(), 0)
    }

    pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, ExactError> {
        Self::normalize(num, den, 1u32, 0)
    }

    pub fn from_ratio(r: &BigRational) -> Self {
        Self::reduce(r.numer().clone(), r.denom().clone(), BigUint::one(), 0)
    }

    /// π^k.
    pub fn pi_power(k: u32) -> Self {
        Self {
            num: BigInt::one(),
            den: BigInt::one(),
            radicand: BigUint::one(),
            pi_pow: k,
        }
    }

    /// `√(p/q)` for non-negative rational `p/q`, rationalized as `√(pq)/q`.
    pub fn sqrt_ratio(p: impl Into<BigUint>, q: impl Into<BigUint>) -> Result<Self, ExactError> {
        let p = p.into();
        let q = q.into();
        if q.is_zero() {
            return Err(ExactError::InvalidDenominator);
        }
        if p.is_zero() {
            return Ok(Self::zero());
        }
        let q_int = BigInt::from(q.clone());
        Self::normalize(1, q_int, p * q, 0)
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn radicand(&self) -> &BigUint {
        &self.radicand
    }

    pub fn pi_pow(&self) -> u32 {
        self.pi_pow
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The rational coefficient `num/den`.
    pub fn coefficient(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.den.clone())
    }

    /// True when the value is a plain integer (no radical, no π, unit denominator).
    pub fn as_integer(&self) -> Option<&BigInt> {
        (self.den.is_one() && self.radicand.is_one() && self.pi_pow == 0).then_some(&self.num)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        // For square-free a, b with g = gcd(a, b): a·b = g²·(a/g)·(b/g), and
        // the cofactor (a/g)(b/g) is square-free again.
        let g = self.radicand.gcd(&other.radicand);
        let radicand = (&self.radicand / &g) * (&other.radicand / &g);
        let num = &self.num * &other.num * BigInt::from(g);
        let den = &self.den * &other.den;
        Self::reduce(num, den, radicand, self.pi_pow + other.pi_pow)
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivideByZero);
        }
        if self.pi_pow > 0 {
            return Err(ExactError::NegativePiPower(-i64::from(self.pi_pow)));
        }
        // 1/(p/q·√m) = q·√m/(p·m)
        let den = &self.num * BigInt::from(self.radicand.clone());
        Ok(Self::reduce(self.den.clone(), den, self.radicand.clone(), 0))
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        if other.is_zero() {
            return Err(ExactError::DivideByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let pi_pow = i64::from(self.pi_pow) - i64::from(other.pi_pow);
        if pi_pow < 0 {
            return Err(ExactError::NegativePiPower(pi_pow));
        }
        let mut inv = other.clone();
        inv.pi_pow = 0;
        let mut q = self.mul(&inv.recip()?);
        q.pi_pow = pi_pow as u32;
        Ok(q)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        self.mul(&Self::from_ratio(r))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Floating-point value of `num/den · √radicand · π^pi_pow`.
    pub fn approx(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let coeff = ratio_to_f64(&self.num, &self.den);
        let root = self.radicand.to_f64().map_or(f64::INFINITY, f64::sqrt);
        coeff * root * std::f64::consts::PI.powi(self.pi_pow as i32)
    }

    /// JSON record `{"num","den","radicand","pi_pow","approx"}`. Integer
    /// fields are emitted as exact JSON integers of arbitrary size.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("num".into(), big_number(&self.num.to_string()));
        m.insert("den".into(), big_number(&self.den.to_string()));
        m.insert("radicand".into(), big_number(&self.radicand.to_string()));
        m.insert("pi_pow".into(), Value::from(self.pi_pow));
        m.insert(
            "approx".into(),
            Number::from_f64(self.approx()).map_or(Value::Null, Value::Number),
        );
        Value::Object(m)
    }

    /// Reads the exact fields of a JSON record; `approx` is ignored.
    pub fn from_json(v: &Value) -> Result<Self, ExactError> {
        let field = |name: &str| -> Result<String, ExactError> {
            match v.get(name) {
                Some(Value::Number(n)) => Ok(n.to_string()),
                _ => Err(ExactError::Parse {
                    input: v.to_string(),
                    reason: format!("missing integer field {name:?}"),
                }),
            }
        };
        let bad = |reason: &str| ExactError::Parse {
            input: v.to_string(),
            reason: reason.to_string(),
        };
        let num: BigInt = field("num")?.parse().map_err(|_| bad("num"))?;
        let den: BigInt = field("den")?.parse().map_err(|_| bad("den"))?;
        let radicand: BigUint = field("radicand")?.parse().map_err(|_| bad("radicand"))?;
        let pi_pow: u32 = field("pi_pow")?.parse().map_err(|_| bad("pi_pow"))?;
        Self::normalize(num, den, radicand, pi_pow)
    }
}

fn big_number(digits: &str) -> Value {
    Value::Number(Number::from_str(digits).expect("decimal integer is a valid JSON number"))
}

/// Correctly scaled `num/den` as f64, robust to operands beyond f64 range.
fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if let (Some(n), Some(d)) = (num.to_f64(), den.to_f64()) {
        if n.is_finite() && d.is_finite() && n.abs() < 9.0e15 && d < 9.0e15 {
            return n / d;
        }
    }
    BigRational::new(num.clone(), den.clone())
        .to_f64()
        .unwrap_or(f64::NAN)
}

/// Splits `n` into `(s, f)` with `n = s²·f` and `f` square-free.
fn split_square(n: BigUint) -> (BigUint, BigUint) {
    let mut rest = n;
    let mut root = BigUint::one();
    let mut free = BigUint::one();
    let mut p = BigUint::from(2u32);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        root *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= &p;
        }
        p += 1u32;
    }
    // what is left is 1 or a prime
    (root, free * rest)
}

impl fmt::Display for ExactVolume {
    /// `[-]coeff[·√m][·π[^k]]` where the coefficient is `p` or `(p/q)` and
    /// unit factors are omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts: Vec<String> = Vec::with_capacity(3);
        let mag = self.num.abs();
        let has_rest = !self.radicand.is_one() || self.pi_pow > 0;
        if !self.den.is_one() {
            parts.push(format!("({}/{})", mag, self.den));
        } else if !mag.is_one() || !has_rest {
            parts.push(mag.to_string());
        }
        if !self.radicand.is_one() {
            parts.push(format!("√{}", self.radicand));
        }
        match self.pi_pow {
            0 => {}
            1 => parts.push("π".to_string()),
            k => parts.push(format!("π^{k}")),
        }
        if self.num.sign() == Sign::Minus {
            f.write_str("-")?;
        }
        f.write_str(&parts.join("·"))
    }
}

impl FromStr for ExactVolume {
    type Err = ExactError;

    /// Parses the canonical text form produced by `Display`. Non-canonical
    /// but well-formed inputs such as `(2/4)·√12` are accepted and normalized.
    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| ExactError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let s = input.trim();
        if s.is_empty() {
            return Err(err("empty input"));
        }
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        let mut radicand = BigUint::one();
        let mut pi_pow = 0u32;
        let mut stage = 0u8; // 0 coefficient, 1 radical, 2 pi
        for (i, token) in body.split('·').enumerate() {
            if token.is_empty() {
                return Err(err("empty factor"));
            }
            if let Some(inner) = token.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
                if i != 0 {
                    return Err(err("coefficient must come first"));
                }
                let (p, q) = inner.split_once('/').ok_or_else(|| err("expected p/q"))?;
                num = p.parse().map_err(|_| err("bad numerator"))?;
                den = q.parse().map_err(|_| err("bad denominator"))?;
                if num.is_negative() || den.is_negative() {
                    return Err(err("sign belongs in front"));
                }
                stage = 1;
            } else if let Some(m) = token.strip_prefix('√') {
                if stage > 1 {
                    return Err(err("radical after π"));
                }
                radicand = m.parse().map_err(|_| err("bad radicand"))?;
                stage = 2;
            } else if let Some(rest) = token.strip_prefix('π') {
                if stage > 2 {
                    return Err(err("repeated π factor"));
                }
                pi_pow = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .ok_or_else(|| err("expected ^ after π"))?
                        .parse()
                        .map_err(|_| err("bad exponent"))?
                };
                stage = 3;
            } else if i == 0 && token.bytes().all(|b| b.is_ascii_digit()) {
                num = token.parse().map_err(|_| err("bad integer"))?;
                stage = 1;
            } else {
                return Err(err("unrecognised factor"));
            }
        }
        if negative {
            num = -num;
        }
        Self::normalize(num, den, radicand, pi_pow)
    }
}
