//! Certified rational enclosures of the limit
//! `l(q) = prod_{k>=1} (1 - q^-k)^-(k(k+1)/2 + 1)` and exact checks of the
//! numeric estimates and convergence facts around it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::census::b_value;
use crate::exactalg::decimal_string;

/// Number of product factors taken exactly by default.
pub const DEFAULT_TERMS: usize = 30;

/// Taylor terms used when bounding `exp` of a rational from both sides.
const EXP_TERMS: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsymptError {
    #[error("the product diverges for q <= 1 (got {0})")]
    Divergent(String),
    #[error("at least one exact factor is needed")]
    NoTerms,
}

/// A closed interval `[lo, hi]` known to contain some quantity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval with lo > hi");
        Self { lo, hi }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Every point of the interval is strictly greater than `x`.
    pub fn above(&self, x: &BigRational) -> bool {
        &self.lo > x
    }

    /// Every point of the interval is strictly less than `x`.
    pub fn below(&self, x: &BigRational) -> bool {
        &self.hi < x
    }

    pub fn shift(&self, by: &BigRational) -> Self {
        Self::new(add_unreduced(&self.lo, by), add_unreduced(&self.hi, by))
    }
}

impl Serialize for RatInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            lo: String,
            hi: String,
            decimal_lo: String,
            decimal_hi: String,
        }
        Repr {
            lo: self.lo.to_string(),
            hi: self.hi.to_string(),
            decimal_lo: decimal_string(&self.lo, 6),
            decimal_hi: decimal_string(&self.hi, 6),
        }
        .serialize(s)
    }
}

/// The partial products carry numerators of ~10^5 bits; gcd reduction of
/// every intermediate dominates the run time, so these skip it. Comparisons
/// on unreduced values stay exact.
fn add_unreduced(a: &BigRational, b: &BigRational) -> BigRational {
    BigRational::new_raw(a.numer() * b.denom() + b.numer() * a.denom(), a.denom() * b.denom())
}

fn mul_unreduced(a: &BigRational, b: &BigRational) -> BigRational {
    BigRational::new_raw(a.numer() * b.numer(), a.denom() * b.denom())
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn exponent(k: usize) -> usize {
    k * (k + 1) / 2 + 1
}

/// `sum_{k>=1} (k(k+1)/2 + 1) x^k = x/(1-x)^3 + x/(1-x)` for `0 < x < 1`.
fn exponent_series(x: &BigRational) -> BigRational {
    let one_minus = BigRational::one() - x;
    x / (&one_minus * &one_minus * &one_minus) + x / &one_minus
}

/// Upper bound for `exp(t)`, `t >= 0`: `1/(1-t)` after halving `t` until it
/// drops below `1/2`, then squaring back.
fn exp_upper_small(t: &BigRational) -> BigRational {
    let half = BigRational::new(1.into(), 2.into());
    let mut s = 0u32;
    let mut t = t.clone();
    while t >= half {
        t /= rat(2);
        s += 1;
    }
    let mut b = (BigRational::one() - t).recip();
    for _ in 0..s {
        b = &b * &b;
    }
    b
}

/// `sum_{r<=R} y^r / r!`, a lower bound for `exp(y)` when `y >= 0`.
fn exp_taylor(y: &BigRational, terms: usize) -> (BigRational, BigRational) {
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for r in 0..=terms {
        if r > 0 {
            term = term * y / rat(r as i64);
        }
        sum += &term;
    }
    (sum, term)
}

/// Two-sided rational bounds on `exp(y)` for `0 <= y < EXP_TERMS`.
pub fn exp_bounds(y: &BigRational) -> RatInterval {
    assert!(!y.is_negative(), "exp bounds need y >= 0");
    let (lo, last) = exp_taylor(y, EXP_TERMS);
    let r = rat(EXP_TERMS as i64 + 1);
    let ratio = y / (&r + BigRational::one());
    assert!(ratio < BigRational::one(), "argument too large for the Taylor tail bound");
    // remainder <= y^(R+1)/(R+1)! * 1/(1 - y/(R+2))
    let tail = &last * y / &r / (BigRational::one() - ratio);
    RatInterval::new(lo.clone(), lo + tail)
}

/// Enclosure of `l(q)` from the first `terms` exact factors and a rational
/// bound on the tail.
///
/// With `x = 1/q` the log of the tail is at most
/// `T = sum_{k>K} e_k x^k / (1 - x^(K+1))`, summed in closed form, and the
/// tail factor is at most `exp(T)`.
pub fn l_of_q(q: &BigRational, terms: usize) -> Result<RatInterval, AsymptError> {
    if q <= &BigRational::one() {
        return Err(AsymptError::Divergent(q.to_string()));
    }
    if terms == 0 {
        return Err(AsymptError::NoTerms);
    }
    let x = q.recip();
    // prod (1 - (b/a)^k)^-e = a^(sum k e) / prod (a^k - b^k)^e, already in
    // lowest terms because gcd(a, b) = 1 makes a^k and a^k - b^k coprime
    let (a, b) = (q.numer(), q.denom());
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let mut head = BigRational::zero();
    let mut xk = BigRational::one();
    for k in 1..=terms {
        xk *= &x;
        let e = exponent(k) as u32;
        let ak = a.pow(k as u32);
        den *= (&ak - b.pow(k as u32)).pow(e);
        num *= ak.pow(e);
        head += &xk * rat(e as i64);
    }
    let partial = BigRational::new_raw(num, den);
    let x_next = &xk * &x;
    let tail = (exponent_series(&x) - head) / (BigRational::one() - x_next);
    let bound = if tail < BigRational::one() {
        (BigRational::one() - &tail).recip()
    } else {
        exp_upper_small(&tail)
    };
    let hi = mul_unreduced(&partial, &bound);
    Ok(RatInterval::new(partial, hi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    /// Verdict for the claim "quantity < bound" given an enclosure of the quantity.
    fn below(quantity: &RatInterval, bound: &RatInterval) -> Self {
        if quantity.hi < bound.lo {
            Verdict::Holds
        } else if quantity.lo >= bound.hi {
            Verdict::Fails
        } else {
            Verdict::Inconclusive
        }
    }

    fn point(x: &BigRational) -> RatInterval {
        RatInterval::new(x.clone(), x.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub q: String,
    pub terms: usize,
    pub interval: RatInterval,
    /// `l(q) > 1 + 2/q + 7/q^2 + 19/q^3`.
    pub lower_poly: Verdict,
    /// `l(q) < (1 - 1/q - 1/q^2)^-1 exp(x/(1-x)^3) exp(x^2 (1+x) / (2 (1-x^2)^4))`.
    pub exp_bound: Verdict,
    /// `l(q) < 1 + 2/q + 7/q^2 + 114/q^3`, only for `q > 2`.
    pub upper_poly: Option<Verdict>,
    /// `278.98 < l(2) < 395.0005`, only for `q = 2`.
    pub numeric_two: Option<Verdict>,
}

impl EstimateReport {
    pub fn verdicts(&self) -> Vec<(&'static str, Verdict)> {
        let mut v = vec![("lower_poly", self.lower_poly), ("exp_bound", self.exp_bound)];
        if let Some(c) = self.upper_poly {
            v.push(("upper_poly", c));
        }
        if let Some(d) = self.numeric_two {
            v.push(("numeric_two", d));
        }
        v
    }

    pub fn all_hold(&self) -> bool {
        self.verdicts().iter().all(|(_, v)| *v == Verdict::Holds)
    }
}

fn cubic_in_x(x: &BigRational, c: [i64; 4]) -> BigRational {
    c.iter().rev().fold(BigRational::zero(), |acc, &ci| acc * x + rat(ci))
}

/// The right-hand side of the exponential upper estimate, enclosed.
pub fn exp_estimate_bound(q: &BigRational) -> RatInterval {
    let x = q.recip();
    let one = BigRational::one();
    let pre = (&one - &x - &x * &x).recip();
    let omx = &one - &x;
    let y1 = &x / (&omx * &omx * &omx);
    let omx2 = &one - &x * &x;
    let omx2_4 = num_traits::pow(omx2, 4);
    let y2 = &x * &x * (&one + &x) / (rat(2) * omx2_4);
    let (e1, e2) = (exp_bounds(&y1), exp_bounds(&y2));
    RatInterval::new(&pre * &e1.lo * &e2.lo, &pre * &e1.hi * &e2.hi)
}

/// Decides each numeric estimate on `l(q)` by exact interval comparison.
pub fn check_estimates(q: &BigRational, terms: usize) -> Result<EstimateReport, AsymptError> {
    let interval = l_of_q(q, terms)?;
    let x = q.recip();
    let lower = cubic_in_x(&x, [1, 2, 7, 19]);
    let lower_poly = Verdict::below(&Verdict::point(&lower), &interval);
    let exp_bound = Verdict::below(&interval, &exp_estimate_bound(q));
    let two = rat(2);
    let upper_poly =
        (q > &two).then(|| Verdict::below(&interval, &Verdict::point(&cubic_in_x(&x, [1, 2, 7, 114]))));
    let numeric_two = (q == &two).then(|| {
        let lo_claim = BigRational::new(27898.into(), 100.into());
        let hi_claim = BigRational::new(3950005.into(), 10000.into());
        match (
            Verdict::below(&Verdict::point(&lo_claim), &interval),
            Verdict::below(&interval, &Verdict::point(&hi_claim)),
        ) {
            (Verdict::Holds, Verdict::Holds) => Verdict::Holds,
            (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
            _ => Verdict::Inconclusive,
        }
    });
    Ok(EstimateReport {
        q: q.to_string(),
        terms,
        interval,
        lower_poly,
        exp_bound,
        upper_poly,
        numeric_two,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    /// `q^n b_n`, exact.
    pub scaled_b: String,
    /// Enclosure of `l(q) - q^n b_n`.
    pub gap: RatInterval,
    #[serde(skip)]
    pub scaled_b_exact: BigRational,
}

/// `l(q) - q^n b_n` for `n = 1..=max_n`, using the default number of terms.
pub fn convergence_report(q: u64, max_n: usize) -> Result<Vec<ConvergenceRow>, AsymptError> {
    let qr = BigRational::from_integer(BigInt::from(q));
    let l = l_of_q(&qr, DEFAULT_TERMS)?;
    Ok((1..=max_n)
        .map(|n| {
            let v = num_traits::pow(qr.clone(), n) * b_value(n, &qr);
            ConvergenceRow {
                n,
                scaled_b: v.to_string(),
                gap: l.shift(&-v.clone()),
                scaled_b_exact: v,
            }
        })
        .collect())
}
