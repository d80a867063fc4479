use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::PolyError;

/// Largest prime accepted; keeps products of reduced residues inside `u64`.
const MAX_PRIME: u64 = (1 << 31) - 1;

/// Coefficient field: a prime field `F_p` or the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoefficientField {
    Prime(u64),
    Rationals,
}

/// Field element. Residues are stored reduced in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Residue(u64),
    Rational(BigRational),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl CoefficientField {
    pub fn prime(p: u64) -> Result<Self, PolyError> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(PolyError::NotPrime(p));
        }
        Ok(CoefficientField::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientField::Prime(p) => *p,
            CoefficientField::Rationals => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            CoefficientField::Prime(p) => Scalar::Residue(n.rem_euclid(*p as i64) as u64),
            CoefficientField::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        match self {
            CoefficientField::Prime(_) => self.div(&self.from_i64(num), &self.from_i64(den)),
            CoefficientField::Rationals => Scalar::Rational(BigRational::new(num.into(), den.into())),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Residue(v) => *v == 0,
            Scalar::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Residue(v) => *v == 1,
            Scalar::Rational(q) => q.is_one(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (CoefficientField::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => Scalar::Residue((x + y) % p),
            (CoefficientField::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (CoefficientField::Prime(p), Scalar::Residue(x)) => Scalar::Residue((p - x) % p),
            (CoefficientField::Rationals, Scalar::Rational(x)) => Scalar::Rational(-x),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (CoefficientField::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => Scalar::Residue((x + p - y) % p),
            (CoefficientField::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x - y),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (CoefficientField::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => Scalar::Residue(x * y % p),
            (CoefficientField::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        assert!(!self.is_zero(a), "inverse of zero");
        match (self, a) {
            (CoefficientField::Prime(p), Scalar::Residue(x)) => Scalar::Residue(pow_mod(*x, p - 2, *p)),
            (CoefficientField::Rationals, Scalar::Rational(x)) => Scalar::Rational(x.recip()),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b))
    }

    /// Short lowercase tag used on the command line: `f2`, `f3`, `q`.
    pub fn tag(&self) -> String {
        match self {
            CoefficientField::Prime(p) => format!("f{p}"),
            CoefficientField::Rationals => "q".into(),
        }
    }
}

impl fmt::Display for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientField::Prime(p) => write!(f, "F{p}"),
            CoefficientField::Rationals => f.write_str("Q"),
        }
    }
}

impl FromStr for CoefficientField {
    type Err = PolyError;

    /// Accepts `q`, `Q`, `f5`, `F5`, `gf5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        if lower == "q" {
            return Ok(CoefficientField::Rationals);
        }
        let digits = lower.strip_prefix("gf").or_else(|| lower.strip_prefix('f'));
        match digits.and_then(|d| d.parse::<u64>().ok()) {
            Some(p) => CoefficientField::prime(p),
            None => Err(PolyError::UnknownField(s.to_string())),
        }
    }
}

impl Scalar {
    /// Renders the element; residues print as their representative in `0..p`.
    pub fn render(&self) -> String {
        match self {
            Scalar::Residue(v) => v.to_string(),
            Scalar::Rational(q) => {
                if q.is_integer() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
        }
    }

    pub(crate) fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }

    pub(crate) fn abs_render(&self) -> String {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.abs()).render(),
            other => other.render(),
        }
    }
}
