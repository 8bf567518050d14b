//! Truncated power series in `t` over a [`CoeffRing`].

use num_rational::BigRational;

use super::ring::CoeffRing;
use super::SeriesError;

/// `c_0 + c_1 t + ... + c_order t^order`, always exactly `order + 1` entries.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<R: CoeffRing> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: CoeffRing> PowerSeries<R> {
    /// Pads with zeros up to `order`; rejects elements foreign to `ring`.
    pub fn new(ring: R, order: usize, mut coeffs: Vec<R::Elem>) -> Result<Self, SeriesError> {
        if coeffs.len() > order + 1 {
            return Err(SeriesError::OrderMismatch {
                left: coeffs.len() - 1,
                right: order,
            });
        }
        if !coeffs.iter().all(|c| ring.accepts(c)) {
            return Err(SeriesError::RingMismatch);
        }
        coeffs.resize(order + 1, ring.zero());
        Ok(Self { ring, coeffs })
    }

    pub fn zero(ring: R, order: usize) -> Self {
        let coeffs = vec![ring.zero(); order + 1];
        Self { ring, coeffs }
    }

    pub fn one(ring: R, order: usize) -> Self {
        let mut s = Self::zero(ring, order);
        s.coeffs[0] = s.ring.one();
        s
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &R::Elem {
        &self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }

    /// Sets the coefficient of `t^k`; ignored past the truncation order.
    pub fn set_coeff(&mut self, k: usize, c: R::Elem) -> Result<(), SeriesError> {
        if !self.ring.accepts(&c) {
            return Err(SeriesError::RingMismatch);
        }
        if k < self.coeffs.len() {
            self.coeffs[k] = c;
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<(), SeriesError> {
        if self.ring != other.ring {
            return Err(SeriesError::RingMismatch);
        }
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |r, a, b| r.add(a, b)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |r, a, b| r.sub(a, b)))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&R, &R::Elem, &R::Elem) -> R::Elem) -> Self {
        Self {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(&self.ring, a, b))
                .collect(),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| self.ring.scale(c, r)).collect(),
        }
    }

    /// Cauchy product truncated at `t^order`.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        let ring = &self.ring;
        let n = self.order();
        let mut out = vec![ring.zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !ring.is_zero(b) {
                    out[i + j] = ring.add(&out[i + j], &ring.mul(a, b));
                }
            }
        }
        Ok(Self {
            ring: ring.clone(),
            coeffs: out,
        })
    }

    /// Multiplies in place by `(1 - c t^step)^(-1)`.
    pub fn mul_geometric(&mut self, c: &R::Elem, step: usize) {
        assert!(step >= 1, "geometric factor needs a positive t-degree");
        for k in step..self.coeffs.len() {
            let add = self.ring.mul(c, &self.coeffs[k - step]);
            self.coeffs[k] = self.ring.add(&self.coeffs[k], &add);
        }
    }

    /// `exp(self)` for a series with zero constant term.
    ///
    /// Uses `n e_n = sum_{k=1..n} k a_k e_{n-k}`, which is the truncation of
    /// `sum_j a^j / j!` computed with exact rational scalars.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        let ring = &self.ring;
        if !ring.is_zero(&self.coeffs[0]) {
            return Err(SeriesError::NonzeroConstant);
        }
        let n = self.order();
        let mut out = vec![ring.zero(); n + 1];
        out[0] = ring.one();
        for m in 1..=n {
            let mut acc = ring.zero();
            for k in 1..=m {
                let a = &self.coeffs[k];
                if ring.is_zero(a) {
                    continue;
                }
                let term = ring.mul(a, &out[m - k]);
                acc = ring.add(&acc, &ring.scale(&term, &BigRational::from_integer(k.into())));
            }
            out[m] = ring.scale(&acc, &BigRational::new(1.into(), m.into()));
        }
        Ok(Self {
            ring: ring.clone(),
            coeffs: out,
        })
    }

    /// `log(self)` for a series with constant term one.
    pub fn log(&self) -> Result<Self, SeriesError> {
        let ring = &self.ring;
        if self.coeffs[0] != ring.one() {
            return Err(SeriesError::ConstantNotOne);
        }
        // n l_n = n b_n - sum_{k=1..n-1} k l_k b_{n-k}
        let n = self.order();
        let mut out = vec![ring.zero(); n + 1];
        for m in 1..=n {
            let mut acc = ring.scale(&self.coeffs[m], &BigRational::from_integer(m.into()));
            for (k, lk) in out.iter().enumerate().take(m).skip(1) {
                if ring.is_zero(lk) {
                    continue;
                }
                let term = ring.mul(lk, &self.coeffs[m - k]);
                acc = ring.sub(&acc, &ring.scale(&term, &BigRational::from_integer(k.into())));
            }
            out[m] = ring.scale(&acc, &BigRational::new(1.into(), m.into()));
        }
        Ok(Self {
            ring: ring.clone(),
            coeffs: out,
        })
    }

    /// Applies a coefficient-wise ring map.
    pub fn map_ring<S: CoeffRing, E>(
        &self,
        target: S,
        mut f: impl FnMut(&R::Elem) -> Result<S::Elem, E>,
    ) -> Result<PowerSeries<S>, E> {
        let coeffs = self.coeffs.iter().map(&mut f).collect::<Result<Vec<_>, E>>()?;
        Ok(PowerSeries {
            ring: target,
            coeffs,
        })
    }
}

/// Cauchy product; see [`PowerSeries::mul`].
pub fn ps_mul<R: CoeffRing>(a: &PowerSeries<R>, b: &PowerSeries<R>) -> Result<PowerSeries<R>, SeriesError> {
    a.mul(b)
}

/// Exponential; see [`PowerSeries::exp`].
pub fn ps_exp<R: CoeffRing>(a: &PowerSeries<R>) -> Result<PowerSeries<R>, SeriesError> {
    a.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::RationalFunction;
    use crate::qseries::ring::{RatFuncRing, UCoeff, USeriesRing};

    fn rat(n: i64, d: i64) -> RationalFunction {
        RationalFunction::from_rational(&BigRational::new(n.into(), d.into()))
    }

    fn series(coeffs: &[(i64, i64)], order: usize) -> PowerSeries<RatFuncRing> {
        PowerSeries::new(RatFuncRing, order, coeffs.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = series(&[(1, 1), (1, 1)], 2);
        let b = series(&[(1, 1), (-1, 1)], 2);
        assert_eq!(ps_mul(&a, &b).unwrap(), series(&[(1, 1), (0, 1), (-1, 1)], 2));
    }

    #[test]
    fn multiplicative_identity() {
        let a = series(&[(3, 1), (1, 2), (-7, 5)], 2);
        assert_eq!(ps_mul(&a, &PowerSeries::one(RatFuncRing, 2)).unwrap(), a);
    }

    #[test]
    fn mismatched_orders_and_rings_are_rejected() {
        let a = series(&[(1, 1)], 2);
        let b = series(&[(1, 1)], 3);
        assert!(matches!(ps_mul(&a, &b), Err(SeriesError::OrderMismatch { .. })));
        let u1 = PowerSeries::one(USeriesRing::new(4), 2);
        let u2 = PowerSeries::one(USeriesRing::new(5), 2);
        assert_eq!(ps_mul(&u1, &u2), Err(SeriesError::RingMismatch));
        let foreign = UCoeff::zero(7);
        assert_eq!(
            PowerSeries::new(USeriesRing::new(4), 2, vec![foreign]).unwrap_err(),
            SeriesError::RingMismatch
        );
    }

    #[test]
    fn exp_examples() {
        assert_eq!(ps_exp(&PowerSeries::zero(RatFuncRing, 4)).unwrap(), PowerSeries::one(RatFuncRing, 4));
        let t = series(&[(0, 1), (1, 1)], 3);
        assert_eq!(ps_exp(&t).unwrap(), series(&[(1, 1), (1, 1), (1, 2), (1, 6)], 3));
        assert_eq!(ps_exp(&series(&[(1, 1)], 2)), Err(SeriesError::NonzeroConstant));
    }

    #[test]
    fn exp_of_minus_log_gives_geometric_series() {
        let one_minus_t = series(&[(1, 1), (-1, 1)], 4);
        let log = one_minus_t.log().unwrap();
        let neg = log.scale(&BigRational::from_integer((-1).into()));
        assert_eq!(ps_exp(&neg).unwrap(), series(&[(1, 1); 5], 4));
        assert_eq!(series(&[(2, 1)], 1).log(), Err(SeriesError::ConstantNotOne));
    }

    #[test]
    fn geometric_factor_matches_inverse() {
        let mut g = PowerSeries::one(RatFuncRing, 6);
        g.mul_geometric(&rat(2, 1), 2);
        // 1/(1 - 2t^2) = 1 + 2t^2 + 4t^4 + 8t^6
        assert_eq!(g, series(&[(1, 1), (0, 1), (2, 1), (0, 1), (4, 1), (0, 1), (8, 1)], 6));
        let back = ps_mul(&g, &series(&[(1, 1), (0, 1), (-2, 1)], 6)).unwrap();
        assert_eq!(back, PowerSeries::one(RatFuncRing, 6));
    }
}
