//! Coefficient rings for truncated power series in `t`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactalg::RationalFunction;

/// Which coefficient ring a series lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingTag {
    /// Exact rational functions of `q`.
    Ratfunc,
    /// Truncated series in `u = 1/q` with rational coefficients.
    Useries,
}

/// A commutative coefficient ring containing `Q`.
///
/// The ring value carries any parameters (the `u` truncation order), so two
/// series are compatible exactly when their ring values compare equal.
pub trait CoeffRing: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn tag(&self) -> RingTag;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, a: &Self::Elem, r: &BigRational) -> Self::Elem;
    /// Whether `a` is a well-formed element of this ring.
    fn accepts(&self, a: &Self::Elem) -> bool;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct RatFuncRing;

impl CoeffRing for RatFuncRing {
    type Elem = RationalFunction;

    fn tag(&self) -> RingTag {
        RingTag::Ratfunc
    }
    fn zero(&self) -> RationalFunction {
        RationalFunction::zero()
    }
    fn one(&self) -> RationalFunction {
        RationalFunction::one()
    }
    fn is_zero(&self, a: &RationalFunction) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a + b
    }
    fn sub(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a - b
    }
    fn mul(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a * b
    }
    fn scale(&self, a: &RationalFunction, r: &BigRational) -> RationalFunction {
        a.scale(r)
    }
    fn accepts(&self, _: &RationalFunction) -> bool {
        true
    }
}

/// Truncated series `c_0 + c_1 u + ... + c_U u^U`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UCoeff {
    coeffs: Vec<BigRational>,
}

impl UCoeff {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    /// `c * u^k`, vanishing when `k` exceeds the truncation order.
    pub fn monomial(order: usize, c: BigRational, k: usize) -> Self {
        let mut out = Self::zero(order);
        if k <= order {
            out.coeffs[k] = c;
        }
        out
    }

    /// Pads or truncates to `order`.
    pub fn from_coeffs(order: usize, mut coeffs: Vec<BigRational>) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    /// Multiplies by `u^k`, dropping what falls past the truncation order.
    pub fn shift(&self, k: usize) -> Self {
        let order = self.order();
        let mut out = Self::zero(order);
        for i in 0..=order.saturating_sub(k) {
            if i + k <= order {
                out.coeffs[i + k] = self.coeffs[i].clone();
            }
        }
        out
    }
}

impl fmt::Debug for UCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{c}*u^{i}"))
            .collect();
        write!(f, "UCoeff[{}; O(u^{})]", terms.join(" + "), self.order() + 1)
    }
}

impl Serialize for UCoeff {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        strs.serialize(s)
    }
}

/// Ring of `u`-series truncated at `u^order`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct USeriesRing {
    pub order: usize,
}

impl USeriesRing {
    pub fn new(order: usize) -> Self {
        Self { order }
    }
}

impl CoeffRing for USeriesRing {
    type Elem = UCoeff;

    fn tag(&self) -> RingTag {
        RingTag::Useries
    }
    fn zero(&self) -> UCoeff {
        UCoeff::zero(self.order)
    }
    fn one(&self) -> UCoeff {
        UCoeff::monomial(self.order, BigRational::one(), 0)
    }
    fn is_zero(&self, a: &UCoeff) -> bool {
        a.coeffs.iter().all(Zero::is_zero)
    }
    fn add(&self, a: &UCoeff, b: &UCoeff) -> UCoeff {
        UCoeff {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
    fn sub(&self, a: &UCoeff, b: &UCoeff) -> UCoeff {
        UCoeff {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }
    fn mul(&self, a: &UCoeff, b: &UCoeff) -> UCoeff {
        let mut out = UCoeff::zero(self.order);
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(self.order + 1 - i) {
                if !y.is_zero() {
                    out.coeffs[i + j] += x * y;
                }
            }
        }
        out
    }
    fn scale(&self, a: &UCoeff, r: &BigRational) -> UCoeff {
        UCoeff {
            coeffs: a.coeffs.iter().map(|x| x * r).collect(),
        }
    }
    fn accepts(&self, a: &UCoeff) -> bool {
        a.coeffs.len() == self.order + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn useries_multiplication_truncates() {
        let ring = USeriesRing::new(3);
        // (1 + u)^2 = 1 + 2u + u^2 ; (1+u)*(u^3) keeps only u^3
        let a = UCoeff::from_coeffs(3, vec![r(1), r(1)]);
        let sq = ring.mul(&a, &a);
        assert_eq!(sq.coeffs(), &[r(1), r(2), r(1), r(0)]);
        let cube = ring.mul(&a, &UCoeff::monomial(3, r(1), 3));
        assert_eq!(cube.coeffs(), &[r(0), r(0), r(0), r(1)]);
        assert!(ring.is_zero(&UCoeff::monomial(3, r(5), 4)));
    }

    #[test]
    fn shift_drops_overflow() {
        let a = UCoeff::from_coeffs(2, vec![r(1), r(2), r(3)]);
        assert_eq!(a.shift(1).coeffs(), &[r(0), r(1), r(2)]);
        assert_eq!(a.shift(5).coeffs(), &[r(0), r(0), r(0)]);
    }
}
