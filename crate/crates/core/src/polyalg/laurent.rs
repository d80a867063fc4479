use std::fmt;

use super::field::{CoefficientField, Scalar};
use super::PolyError;

/// Laurent polynomial `sum c_k t^k` over a [`CoefficientField`].
///
/// Stored densely from the lowest exponent: `coeffs[0]` is the coefficient of
/// `t^low`. Both the first and the last stored coefficient are nonzero; the
/// zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    field: CoefficientField,
    low: i64,
    coeffs: Vec<Scalar>,
}

impl LaurentPoly {
    pub fn zero(field: CoefficientField) -> Self {
        LaurentPoly { field, low: 0, coeffs: Vec::new() }
    }

    pub fn one(field: CoefficientField) -> Self {
        Self::monomial(field.one(), 0, field)
    }

    pub fn monomial(c: Scalar, exp: i64, field: CoefficientField) -> Self {
        Self::from_dense(field, exp, vec![c])
    }

    /// `t^exp`.
    pub fn t_pow(exp: i64, field: CoefficientField) -> Self {
        Self::monomial(field.one(), exp, field)
    }

    pub fn constant(c: i64, field: CoefficientField) -> Self {
        Self::monomial(field.from_i64(c), 0, field)
    }

    /// Integer coefficients starting at exponent `low`; `[-2, 1]` at 0 is `t - 2`.
    pub fn from_ints(field: CoefficientField, low: i64, coeffs: &[i64]) -> Self {
        Self::from_dense(field, low, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    fn from_dense(field: CoefficientField, low: i64, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        let lead_zeros = coeffs.iter().take_while(|c| field.is_zero(c)).count();
        if lead_zeros == coeffs.len() {
            return Self::zero(field);
        }
        coeffs.drain(..lead_zeros);
        LaurentPoly { field, low: low + lead_zeros as i64, coeffs }
    }

    pub fn field(&self) -> CoefficientField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.field.is_one(&self.coeffs[0])
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn high_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    /// `true` when no negative powers of `t` occur.
    pub fn is_polynomial(&self) -> bool {
        self.is_zero() || self.low >= 0
    }

    /// Degree as an element of `F[t]`; only meaningful for polynomials.
    pub fn degree(&self) -> Option<i64> {
        self.high_exp()
    }

    /// `high - low`: the degree after clearing powers of `t`.
    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, exp: i64) -> Scalar {
        let idx = exp - self.low;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            self.field.zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    fn check_field(&self, other: &LaurentPoly) -> Result<(), PolyError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(PolyError::FieldMismatch(self.field, other.field))
        }
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
        self.check_field(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn try_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
        self.check_field(other)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
        self.check_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &LaurentPoly, subtract: bool) -> LaurentPoly {
        let f = self.field;
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if subtract { other.neg() } else { other.clone() };
        }
        let low = self.low.min(other.low);
        let high = self.high_exp().unwrap().max(other.high_exp().unwrap());
        let mut coeffs = vec![f.zero(); (high - low + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + i] = c.clone();
        }
        let off = (other.low - low) as usize;
        for (i, c) in other.coeffs.iter().enumerate() {
            let slot = &mut coeffs[off + i];
            *slot = if subtract { f.sub(slot, c) } else { f.add(slot, c) };
        }
        LaurentPoly::from_dense(f, low, coeffs)
    }

    fn mul_unchecked(&self, other: &LaurentPoly) -> LaurentPoly {
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero(f);
        }
        let mut coeffs = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if f.is_zero(b) {
                    continue;
                }
                coeffs[i + j] = f.add(&coeffs[i + j], &f.mul(a, b));
            }
        }
        LaurentPoly::from_dense(f, self.low + other.low, coeffs)
    }

    pub fn neg(&self) -> LaurentPoly {
        let f = self.field;
        LaurentPoly { field: f, low: self.low, coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> LaurentPoly {
        let f = self.field;
        LaurentPoly::from_dense(f, self.low, self.coeffs.iter().map(|x| f.mul(x, c)).collect())
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { field: self.field, low: self.low + k, coeffs: self.coeffs.clone() }
    }

    /// Substitution `t -> t^-1`.
    pub fn reciprocal(&self) -> LaurentPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        LaurentPoly { field: self.field, low: -self.high_exp().unwrap(), coeffs }
    }

    /// Scales so the leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> LaurentPoly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => self.scale(&self.field.inv(lc)),
        }
    }

    /// Canonical associate under the units `c t^k` of `F[t^{+-1}]`: monic,
    /// in `F[t]`, with nonzero constant term. Zero stays zero.
    pub fn canonical(&self) -> LaurentPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.shift(-self.low).monic()
    }

    /// Quotient and remainder in `F[t]`. Both operands must be polynomials.
    pub fn div_rem(&self, divisor: &LaurentPoly) -> Result<(LaurentPoly, LaurentPoly), PolyError> {
        self.check_field(divisor)?;
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if !self.is_polynomial() || !divisor.is_polynomial() {
            return Err(PolyError::NotPolynomial);
        }
        let f = self.field;
        let ddeg = divisor.degree().unwrap();
        let Some(sdeg) = self.degree() else {
            return Ok((LaurentPoly::zero(f), LaurentPoly::zero(f)));
        };
        if sdeg < ddeg {
            return Ok((LaurentPoly::zero(f), self.clone()));
        }
        // dense ascending arrays indexed by exponent
        let mut rem: Vec<Scalar> = (0..=sdeg).map(|k| self.coeff(k)).collect();
        let div: Vec<Scalar> = (0..=ddeg).map(|k| divisor.coeff(k)).collect();
        let inv_lead = f.inv(&div[ddeg as usize]);
        let mut quot = vec![f.zero(); (sdeg - ddeg + 1) as usize];
        for k in (0..=(sdeg - ddeg) as usize).rev() {
            let top = &rem[k + ddeg as usize];
            if f.is_zero(top) {
                continue;
            }
            let q = f.mul(top, &inv_lead);
            for (j, d) in div.iter().enumerate() {
                if !f.is_zero(d) {
                    rem[k + j] = f.sub(&rem[k + j], &f.mul(&q, d));
                }
            }
            quot[k] = q;
        }
        Ok((LaurentPoly::from_dense(f, 0, quot), LaurentPoly::from_dense(f, 0, rem)))
    }

    /// Exact quotient in `F[t]`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        let (q, r) = self.div_rem(divisor).ok()?;
        r.is_zero().then_some(q)
    }

    /// Exact quotient in `F[t^{+-1}]`, where powers of `t` are units.
    pub fn div_exact_laurent(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        if divisor.is_zero() || self.field != divisor.field {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let q = self.shift(-self.low).div_exact(&divisor.shift(-divisor.low))?;
        Some(q.shift(self.low - divisor.low))
    }

    /// Monic gcd in `F[t]`.
    pub fn gcd(&self, other: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
        self.check_field(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Value at a field element (Laurent exponents require a nonzero point).
    pub fn evaluate(&self, x: &Scalar) -> Scalar {
        let f = self.field;
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        let mut scale = f.one();
        if self.low >= 0 {
            for _ in 0..self.low {
                scale = f.mul(&scale, x);
            }
        } else {
            let xi = f.inv(x);
            for _ in 0..(-self.low) {
                scale = f.mul(&scale, &xi);
            }
        }
        f.mul(&acc, &scale)
    }
}

/// Operation selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
    Neg,
}

/// Exact ring arithmetic; `Neg` ignores `b`.
pub fn poly_arith(a: &LaurentPoly, b: &LaurentPoly, op: PolyOp) -> Result<LaurentPoly, PolyError> {
    match op {
        PolyOp::Add => a.try_add(b),
        PolyOp::Mul => a.try_mul(b),
        PolyOp::Neg => Ok(a.neg()),
    }
}

macro_rules! impl_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl std::ops::$tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                assert_eq!(self.field, rhs.field, "field mismatch");
                $body(self, rhs)
            }
        }
    };
}

impl_binop!(Add, add, |a: &LaurentPoly, b| a.add_unchecked(b, false));
impl_binop!(Sub, sub, |a: &LaurentPoly, b| a.add_unchecked(b, true));
impl_binop!(Mul, mul, |a: &LaurentPoly, b| a.mul_unchecked(b));

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::neg(self)
    }
}

impl fmt::Display for LaurentPoly {
    /// Ascending exponents joined by ` + `, e.g. `-2 + t` or `1 + -3*t^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let field = self.field;
        let parts: Vec<String> = self
            .terms()
            .map(|(k, c)| {
                if k == 0 {
                    return c.render();
                }
                let var = if k == 1 { "t".to_string() } else { format!("t^{k}") };
                if field.is_one(c) {
                    var
                } else if c.is_negative() && c.abs_render() == "1" {
                    format!("-{var}")
                } else {
                    format!("{}*{var}", c.render())
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
