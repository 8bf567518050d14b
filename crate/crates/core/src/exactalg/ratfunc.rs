//! Reduced quotients of integer polynomials in `q`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{AlgebraError, IntPolynomial};

/// An element of `Q(q)` in canonical form.
///
/// Canonical means: `gcd(num, den) = 1` in `Q[q]`, the integer contents of
/// `num` and `den` are coprime, and `den` has a positive leading coefficient.
/// Zero is `0/1`. Two equal functions therefore have identical fields.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: IntPolynomial,
    den: IntPolynomial,
}

/// Arithmetic selector for [`rf_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl RationalFunction {
    pub fn zero() -> Self {
        Self {
            num: IntPolynomial::zero(),
            den: IntPolynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(IntPolynomial::one())
    }

    pub fn from_poly(p: IntPolynomial) -> Self {
        Self {
            num: p,
            den: IntPolynomial::one(),
        }
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        Self::from_poly(IntPolynomial::constant(c))
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::new(
            IntPolynomial::constant(r.numer().clone()),
            IntPolynomial::constant(r.denom().clone()),
        )
        .expect("rational has nonzero denominator")
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> Self {
        let mono = IntPolynomial::monomial(1, k.unsigned_abs() as usize);
        if k >= 0 {
            Self::from_poly(mono)
        } else {
            Self {
                num: IntPolynomial::one(),
                den: mono,
            }
        }
    }

    /// Builds and canonicalises `num / den`.
    pub fn new(num: IntPolynomial, den: IntPolynomial) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: IntPolynomial, den: IntPolynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Self::normalise_content(num, den)
    }

    /// Assumes `gcd(num, den) = 1` already; fixes content and sign.
    fn normalise_content(num: IntPolynomial, den: IntPolynomial) -> Self {
        let mut k = num.content().gcd(&den.content());
        if den.leading().expect("nonzero denominator").is_negative() {
            k = -k;
        }
        Self {
            num: num.div_scalar_exact(&k),
            den: den.div_scalar_exact(&k),
        }
    }

    pub fn num(&self) -> &IntPolynomial {
        &self.num
    }

    pub fn den(&self) -> &IntPolynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The numerator when the denominator is exactly 1.
    pub fn as_polynomial(&self) -> Option<&IntPolynomial> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalise_content(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        &Self::from_rational(r) * self
    }

    pub fn pow(&self, e: u32) -> Self {
        // Powers of coprime polynomials stay coprime.
        Self::normalise_content(self.num.pow(e), self.den.pow(e))
    }

    /// Exact value at `q0`.
    pub fn eval(&self, q0: &BigRational) -> Result<BigRational, AlgebraError> {
        let d = self.den.eval(q0);
        if d.is_zero() {
            return Err(AlgebraError::Pole(q0.to_string()));
        }
        Ok(self.num.eval(q0) / d)
    }

    fn add_impl(&self, rhs: &Self, negate: bool) -> Self {
        let rnum = if negate { -&rhs.num } else { rhs.num.clone() };
        if self.is_zero() {
            return Self { num: rnum, den: rhs.den.clone() };
        }
        if rhs.is_zero() {
            return self.clone();
        }
        // a/b + c/d with g = gcd(b, d): only g can share factors with the sum.
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rnum * &self.den);
            let den = &self.den * &rhs.den;
            if num.is_zero() {
                return Self::zero();
            }
            return Self::normalise_content(num, den);
        }
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = rhs.den.div_exact(&g).expect("gcd divides");
        let t = &(&self.num * &d1) + &(&rnum * &b1);
        if t.is_zero() {
            return Self::zero();
        }
        let h = t.gcd(&g);
        let (t, g_rest) = if h.is_one() {
            (t, g)
        } else {
            (t.div_exact(&h).expect("gcd divides"), g.div_exact(&h).expect("gcd divides"))
        };
        let den = &(&b1 * &d1) * &g_rest;
        Self::normalise_content(t, den)
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        // Cross-cancel a/b * c/d: gcd(a, d) and gcd(c, b).
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let cancel = |p: &IntPolynomial, g: &IntPolynomial| {
            if g.is_one() {
                p.clone()
            } else {
                p.div_exact(g).expect("gcd divides")
            }
        };
        let num = &cancel(&self.num, &g1) * &cancel(&rhs.num, &g2);
        let den = &cancel(&self.den, &g2) * &cancel(&rhs.den, &g1);
        Self::normalise_content(num, den)
    }
}

/// Exact arithmetic on canonical rational functions.
pub fn rf_arith(
    lhs: &RationalFunction,
    rhs: &RationalFunction,
    op: ArithOp,
) -> Result<RationalFunction, AlgebraError> {
    Ok(match op {
        ArithOp::Add => lhs.add_impl(rhs, false),
        ArithOp::Sub => lhs.add_impl(rhs, true),
        ArithOp::Mul => lhs.mul_impl(rhs),
        ArithOp::Div => lhs.mul_impl(&rhs.recip()?),
    })
}

/// Exact evaluation; a vanishing denominator is reported as a pole.
pub fn rf_eval(f: &RationalFunction, q0: &BigRational) -> Result<BigRational, AlgebraError> {
    f.eval(q0)
}

/// `(1 - q^-1)(1 - q^-2)...(1 - q^-d)` as a function of `q`.
pub fn phi_d(d: usize) -> RationalFunction {
    let mut num = IntPolynomial::one();
    for i in 1..=d {
        num = &num * &IntPolynomial::q_pow_minus_one(i);
    }
    let den = IntPolynomial::monomial(1, d * (d + 1) / 2);
    RationalFunction::new(num, den).expect("monomial denominator")
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: Self) -> RationalFunction {
        self.add_impl(rhs, false)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: Self) -> RationalFunction {
        self.add_impl(rhs, true)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: Self) -> RationalFunction {
        self.mul_impl(rhs)
    }
}

/// Panics on division by zero; use [`rf_arith`] for a checked quotient.
impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: Self) -> RationalFunction {
        rf_arith(self, rhs, ArithOp::Div).expect("division by the zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &IntPolynomial| {
            let s = p.to_string();
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl From<IntPolynomial> for RationalFunction {
    fn from(p: IntPolynomial) -> Self {
        Self::from_poly(p)
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        RationalFunction::one()
    }
}

impl Mul for RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: Self) -> RationalFunction {
        self.mul_impl(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(p(n), p(d)).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sum_over_common_denominator() {
        // 1/(q-1) + 1/(q+1) = 2q/(q^2-1)
        let s = rf_arith(&rf(&[1], &[-1, 1]), &rf(&[1], &[1, 1]), ArithOp::Add).unwrap();
        assert_eq!(s, rf(&[0, 2], &[-1, 0, 1]));
    }

    #[test]
    fn product_and_quotient_cancel() {
        let m = rf_arith(&rf(&[1, 1, 1], &[1]), &rf(&[-1, 1], &[1]), ArithOp::Mul).unwrap();
        assert_eq!(m.as_polynomial(), Some(&p(&[-1, 0, 0, 1])));
        let d = rf_arith(&rf(&[-1, 0, 0, 1], &[1]), &rf(&[-1, 1], &[1]), ArithOp::Div).unwrap();
        assert_eq!(d.as_polynomial(), Some(&p(&[1, 1, 1])));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let r = rf_arith(&RationalFunction::one(), &RationalFunction::zero(), ArithOp::Div);
        assert_eq!(r, Err(AlgebraError::DivisionByZero));
        assert!(RationalFunction::new(p(&[1]), IntPolynomial::zero()).is_err());
    }

    #[test]
    fn canonical_form_is_unique() {
        // (2q+2)/(-4q^2+4) == -1/(2q-2) == 1/(2-2q)
        let a = rf(&[2, 2], &[4, 0, -4]);
        let b = rf(&[-1], &[-2, 2]);
        let c = rf(&[1], &[2, -2]);
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert_eq!(a.num(), &p(&[-1]));
        assert_eq!(a.den(), &p(&[-2, 2]));
        // scalar 3/6 == 1/2
        assert_eq!(rf(&[3], &[6]), rf(&[1], &[2]));
        // x - x is canonical zero
        assert_eq!(&a - &a, RationalFunction::zero());
        assert_eq!(RationalFunction::zero().den(), &IntPolynomial::one());
    }

    #[test]
    fn eval_examples() {
        let f = rf(&[1, 1, 1], &[1]);
        assert_eq!(rf_eval(&f, &rat(3, 1)).unwrap(), rat(13, 1));
        assert_eq!(rf_eval(&f, &rat(5, 1)).unwrap(), rat(31, 1));
        let pole = rf(&[1], &[-1, 1]);
        assert!(matches!(rf_eval(&pole, &rat(1, 1)), Err(AlgebraError::Pole(_))));
    }

    #[test]
    fn phi_values() {
        assert!(phi_d(0).is_one());
        assert_eq!(phi_d(1), rf(&[-1, 1], &[0, 1]));
        // (q-1)(q^2-1)/q^3
        assert_eq!(phi_d(2), rf(&[1, -1, -1, 1], &[0, 0, 0, 1]));
        for d in 1..6 {
            let step = &phi_d(d - 1) * &(&RationalFunction::one() - &RationalFunction::q_pow(-(d as i64)));
            assert_eq!(phi_d(d), step);
        }
    }

    #[test]
    fn gl_order_matches_q_pow_times_phi() {
        for n in 0..7usize {
            let mut gl = IntPolynomial::monomial(1, n * (n.saturating_sub(1)) / 2);
            for i in 1..=n {
                gl = &gl * &IntPolynomial::q_pow_minus_one(i);
            }
            let rhs = &RationalFunction::q_pow((n * n) as i64) * &phi_d(n);
            assert_eq!(RationalFunction::from_poly(gl), rhs);
        }
    }

    #[test]
    fn q_pow_negative() {
        let f = RationalFunction::q_pow(-3);
        assert_eq!(f.eval(&rat(2, 1)).unwrap(), rat(1, 8));
        assert!((&f * &RationalFunction::q_pow(3)).is_one());
    }
}
