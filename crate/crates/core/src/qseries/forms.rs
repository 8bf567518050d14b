//! The generating functions `F1`, `F2` and `Fbar = F1 * F2` in each of their
//! equivalent presentations.
//!
//! * exponential form: `exp` of an explicit logarithm, coefficients in `Q(q)`;
//! * sum form (`F1` only): `sum_d t^d / (q^d phi_d(1/q))`;
//! * product form: Euler products whose `t`-coefficients are infinite series
//!   in `u = 1/q`, so they only exist in the truncated `u`-ring.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::ring::{RatFuncRing, UCoeff, USeriesRing};
use super::series::PowerSeries;
use super::SeriesError;
use crate::exactalg::{phi_d, IntPolynomial, RationalFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Exp,
    Sum,
    Product,
}

/// Requested coefficient ring for a builder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Ratfunc,
    Useries { u_order: usize },
}

/// A series in whichever ring it was built in.
#[derive(Clone, Debug, PartialEq)]
pub enum AnySeries {
    Ratfunc(PowerSeries<RatFuncRing>),
    Useries(PowerSeries<USeriesRing>),
}

impl AnySeries {
    pub fn order(&self) -> usize {
        match self {
            AnySeries::Ratfunc(s) => s.order(),
            AnySeries::Useries(s) => s.order(),
        }
    }

    /// JSON list of coefficients: rational-function objects or `u`-coefficient arrays.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            AnySeries::Ratfunc(s) => serde_json::to_value(s.coeffs()).expect("serialisable"),
            AnySeries::Useries(s) => serde_json::to_value(s.coeffs()).expect("serialisable"),
        }
    }

    pub fn into_useries(self, u_order: usize) -> Result<PowerSeries<USeriesRing>, SeriesError> {
        match self {
            AnySeries::Useries(s) => Ok(s),
            AnySeries::Ratfunc(s) => series_to_useries(&s, u_order),
        }
    }
}

/// Expands `f(q)` in powers of `u = 1/q` up to `u^u_order`.
pub fn rf_to_useries(f: &RationalFunction, u_order: usize) -> Result<UCoeff, SeriesError> {
    if f.is_zero() {
        return Ok(UCoeff::zero(u_order));
    }
    let (num, den) = (f.num(), f.den());
    let (dn, dd) = (num.degree().unwrap(), den.degree().unwrap());
    // f(1/u) = u^(dd - dn) * rev(num)(u) / rev(den)(u), rev(den)(0) = lc(den) != 0
    if dn > dd {
        return Err(SeriesError::PoleAtZero(f.to_string()));
    }
    let shift = dd - dn;
    let top: Vec<BigInt> = num.reversed().coeffs().to_vec();
    let bottom = den.reversed();
    let d0 = BigRational::from_integer(bottom.coeff(0));
    let mut out = vec![BigRational::zero(); u_order + 1];
    if shift > u_order {
        return Ok(UCoeff::from_coeffs(u_order, out));
    }
    let len = u_order + 1 - shift;
    let mut s: Vec<BigRational> = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = BigRational::from_integer(top.get(k).cloned().unwrap_or_default());
        for (j, dj) in bottom.coeffs().iter().enumerate().take(k + 1).skip(1) {
            if !dj.is_zero() {
                acc -= &s[k - j] * BigRational::from_integer(dj.clone());
            }
        }
        s.push(acc / &d0);
    }
    for (k, c) in s.into_iter().enumerate() {
        out[k + shift] = c;
    }
    Ok(UCoeff::from_coeffs(u_order, out))
}

/// Maps every coefficient of a rational-function series into the `u`-ring.
pub fn series_to_useries(
    s: &PowerSeries<RatFuncRing>,
    u_order: usize,
) -> Result<PowerSeries<USeriesRing>, SeriesError> {
    s.map_ring(USeriesRing::new(u_order), |c| rf_to_useries(c, u_order))
}

/// `1 / (d (1 - q^-d) q^d) = 1 / (d (q^d - 1))`.
fn f1_log_coeff(d: usize) -> RationalFunction {
    let den = IntPolynomial::q_pow_minus_one(d).scale(&BigInt::from(d));
    RationalFunction::new(IntPolynomial::one(), den).expect("nonzero")
}

/// `1 / (d (1 - q^-d)^2 q^(2dm - d)) = 1 / (d (q^d - 1)^2 q^(2dm - 3d))`, `m >= 2`.
fn f2_log_coeff(d: usize, m: usize) -> RationalFunction {
    let qd1 = IntPolynomial::q_pow_minus_one(d);
    let den = (&qd1 * &qd1).shift(2 * d * m - 3 * d).scale(&BigInt::from(d));
    RationalFunction::new(IntPolynomial::one(), den).expect("nonzero")
}

/// The logarithm of `F1`.
pub fn f1_log(order: usize) -> PowerSeries<RatFuncRing> {
    let mut s = PowerSeries::zero(RatFuncRing, order);
    for d in 1..=order {
        s.set_coeff(d, f1_log_coeff(d)).expect("same ring");
    }
    s
}

/// The logarithm of `F2`.
pub fn f2_log(order: usize) -> PowerSeries<RatFuncRing> {
    let mut coeffs = vec![RationalFunction::zero(); order + 1];
    for m in 2..=order {
        for d in 1..=order / m {
            coeffs[d * m] = &coeffs[d * m] + &f2_log_coeff(d, m);
        }
    }
    PowerSeries::new(RatFuncRing, order, coeffs).expect("same ring")
}

fn f1_sum(order: usize) -> PowerSeries<RatFuncRing> {
    let coeffs = (0..=order)
        .map(|d| {
            (&RationalFunction::q_pow(d as i64) * &phi_d(d))
                .recip()
                .expect("nonzero")
        })
        .collect();
    PowerSeries::new(RatFuncRing, order, coeffs).expect("same ring")
}

/// Multiplies in place by `(1 - u^e t^m)^(-1)`.
fn mul_u_geometric(s: &mut PowerSeries<USeriesRing>, e: usize, m: usize) {
    if e > s.ring().order {
        return;
    }
    let ring = *s.ring();
    let mut coeffs = std::mem::replace(s, PowerSeries::zero(ring, 0)).into_coeffs();
    for k in m..coeffs.len() {
        let add = coeffs[k - m].shift(e);
        coeffs[k] = UCoeff::from_coeffs(
            ring.order,
            coeffs[k].coeffs().iter().zip(add.coeffs()).map(|(a, b)| a + b).collect(),
        );
    }
    *s = PowerSeries::new(ring, coeffs.len() - 1, coeffs).expect("same ring");
}

/// `prod_{i>=0} (1 - u^(i+1) t)^(-1)`.
fn f1_product(order: usize, u_order: usize) -> PowerSeries<USeriesRing> {
    let mut s = PowerSeries::one(USeriesRing::new(u_order), order);
    for e in 1..=u_order {
        mul_u_geometric(&mut s, e, 1);
    }
    s
}

/// `prod_{m>=2} prod_{i,j>=0} (1 - u^(i+j+2m-1) t^m)^(-1)`.
fn f2_product(order: usize, u_order: usize) -> PowerSeries<USeriesRing> {
    let mut s = PowerSeries::one(USeriesRing::new(u_order), order);
    for m in 2..=order {
        // i + j = k has k + 1 solutions
        for k in 0.. {
            let e = k + 2 * m - 1;
            if e > u_order {
                break;
            }
            for _ in 0..=k {
                mul_u_geometric(&mut s, e, m);
            }
        }
    }
    s
}

fn finish(s: PowerSeries<RatFuncRing>, target: Target) -> Result<AnySeries, SeriesError> {
    match target {
        Target::Ratfunc => Ok(AnySeries::Ratfunc(s)),
        Target::Useries { u_order } => Ok(AnySeries::Useries(series_to_useries(&s, u_order)?)),
    }
}

/// `F1` in the requested form and ring.
pub fn build_f1(order: usize, form: Form, target: Target) -> Result<AnySeries, SeriesError> {
    match (form, target) {
        (Form::Exp, _) => finish(f1_log(order).exp()?, target),
        (Form::Sum, _) => finish(f1_sum(order), target),
        (Form::Product, Target::Ratfunc) => Err(SeriesError::ProductNeedsUSeries),
        (Form::Product, Target::Useries { u_order }) => Ok(AnySeries::Useries(f1_product(order, u_order))),
    }
}

/// `F2` in the requested form and ring. There is no sum form.
pub fn build_f2(order: usize, form: Form, target: Target) -> Result<AnySeries, SeriesError> {
    match (form, target) {
        (Form::Exp, _) => finish(f2_log(order).exp()?, target),
        (Form::Sum, _) => Err(SeriesError::NoSumForm),
        (Form::Product, Target::Ratfunc) => Err(SeriesError::ProductNeedsUSeries),
        (Form::Product, Target::Useries { u_order }) => Ok(AnySeries::Useries(f2_product(order, u_order))),
    }
}

/// `Fbar = F1 * F2` with both factors in exponential form; the `t^n`
/// coefficient is `b_n`.
pub fn build_fbar(order: usize) -> Result<PowerSeries<RatFuncRing>, SeriesError> {
    let f1 = f1_log(order).exp()?;
    let f2 = f2_log(order).exp()?;
    f1.mul(&f2)
}

/// `Fbar` in any form: `Sum` uses the sum form of `F1`, `Product` the full
/// Euler product in the `u`-ring.
pub fn build_fbar_form(order: usize, form: Form, target: Target) -> Result<AnySeries, SeriesError> {
    match (form, target) {
        (Form::Exp, _) => finish(build_fbar(order)?, target),
        (Form::Sum, _) => finish(f1_sum(order).mul(&f2_log(order).exp()?)?, target),
        (Form::Product, Target::Ratfunc) => Err(SeriesError::ProductNeedsUSeries),
        (Form::Product, Target::Useries { u_order }) => Ok(AnySeries::Useries(
            f1_product(order, u_order).mul(&f2_product(order, u_order))?,
        )),
    }
}

/// `1 / ((1 - q^-1)^2 q^3)`, the lone contribution to the `t^2` coefficient
/// of `F2`.
pub fn f2_t2_term() -> RationalFunction {
    let one_minus = &RationalFunction::one() - &RationalFunction::q_pow(-1);
    (&(&one_minus * &one_minus) * &RationalFunction::q_pow(3))
        .recip()
        .expect("nonzero")
}
