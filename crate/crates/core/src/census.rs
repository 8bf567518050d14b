//! Class labels of the abelian cover, normalizer orders, the proportions
//! `b_n`, the census polynomials `|A_n(q)| = b_n |GL_n(q)|` and the closed
//! clique-number values derived from them.
//!
//! A label is a map `(d, m) -> multiplicity` with `sum d*m*mult = n`: `d` is
//! the degree of an irreducible polynomial and `m` the size of the Jordan-type
//! block built on it.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactalg::{prime_power, IntPolynomial, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("no exact clique-number formula for n = {n}, q = {q} (needs q > n, or q = n > 2)")]
    UnsupportedRegime { n: usize, q: u64 },
    #[error("census value for n = {0} is not an integer polynomial")]
    NonPolynomial(usize),
}

/// A label `mu`; entries with multiplicity zero are never stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MuFunction {
    support: BTreeMap<(usize, usize), usize>,
}

impl MuFunction {
    /// Builds a label from `((d, m), multiplicity)` entries, dropping zeros.
    pub fn from_entries(entries: impl IntoIterator<Item = ((usize, usize), usize)>) -> Self {
        let mut support = BTreeMap::new();
        for ((d, m), c) in entries {
            assert!(d >= 1 && m >= 1, "labels need d, m >= 1");
            if c > 0 {
                *support.entry((d, m)).or_insert(0) += c;
            }
        }
        Self { support }
    }

    pub fn support(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.support
    }

    pub fn multiplicity(&self, d: usize, m: usize) -> usize {
        self.support.get(&(d, m)).copied().unwrap_or(0)
    }

    /// `sum d * m * mu(d, m)`.
    pub fn weight(&self) -> usize {
        self.support.iter().map(|(&(d, m), &c)| d * m * c).sum()
    }
}

impl fmt::Display for MuFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .support
            .iter()
            .map(|((d, m), c)| format!("({d},{m}):{c}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for MuFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<[usize; 3]> = self.support.iter().map(|(&(d, m), &c)| [d, m, c]).collect();
        entries.serialize(s)
    }
}

fn divisor_pairs(k: usize) -> Vec<(usize, usize)> {
    (1..=k).filter(|d| k.is_multiple_of(*d)).map(|d| (d, k / d)).collect()
}

/// All ways to spread `count` parts over `slots`, appending to `current`.
fn spread(
    slots: &[(usize, usize)],
    count: usize,
    current: &mut Vec<((usize, usize), usize)>,
    out: &mut Vec<Vec<((usize, usize), usize)>>,
) {
    match slots {
        [] => {
            if count == 0 {
                out.push(current.clone());
            }
        }
        [last] => {
            current.push((*last, count));
            out.push(current.clone());
            current.pop();
        }
        [first, rest @ ..] => {
            for c in (0..=count).rev() {
                current.push((*first, c));
                spread(rest, count - c, current, out);
                current.pop();
            }
        }
    }
}

fn descend(k: usize, remaining: usize, current: &mut Vec<((usize, usize), usize)>, out: &mut Vec<MuFunction>) {
    if remaining == 0 {
        out.push(MuFunction::from_entries(current.iter().copied()));
        return;
    }
    if k == 0 {
        return;
    }
    let slots = divisor_pairs(k);
    for parts in (0..=remaining / k).rev() {
        let mut spreads = Vec::new();
        spread(&slots, parts, &mut Vec::new(), &mut spreads);
        for s in spreads {
            let before = current.len();
            current.extend(s);
            descend(k - 1, remaining - parts * k, current, out);
            current.truncate(before);
        }
    }
}

/// Every label of weight `n`, sorted by support.
pub fn enumerate_phi(n: usize) -> Vec<MuFunction> {
    let mut out = Vec::new();
    descend(n, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// `prod_{i<n} (q^n - q^i) = q^(n(n-1)/2) prod_{i=1..n} (q^i - 1)`.
pub fn gl_order(n: usize) -> IntPolynomial {
    (1..=n).fold(IntPolynomial::monomial(1, n * n.saturating_sub(1) / 2), |acc, i| {
        &acc * &IntPolynomial::q_pow_minus_one(i)
    })
}

/// Polynomial part and integer part of the normalizer order of one label.
fn normalizer_parts(mu: &MuFunction) -> (IntPolynomial, BigInt) {
    let mut poly = IntPolynomial::one();
    let mut scalar = BigInt::one();
    for (&(d, m), &c) in mu.support() {
        let qd1 = IntPolynomial::q_pow_minus_one(d);
        let block = if m == 1 {
            qd1
        } else {
            (&qd1 * &qd1).shift(2 * d * m - 3 * d)
        };
        poly = &poly * &block.pow(c as u32);
        scalar *= BigInt::from(d).pow(c as u32);
        scalar *= (1..=c).fold(BigInt::one(), |f, i| f * i);
    }
    (poly, scalar)
}

/// Order of the normalizer of the class labelled `mu`, intersected with the
/// stabilizer of its decomposition.
///
/// Each `(d, 1)` block contributes `d (q^d - 1)`, each `(d, m >= 2)` block
/// `d (q^d - 1)^2 q^(2dm - 3d)`; a label with multiplicity `c` raises the
/// factor to the `c` and multiplies by `c!`.
pub fn normalizer_order(mu: &MuFunction) -> RationalFunction {
    let (poly, scalar) = normalizer_parts(mu);
    RationalFunction::from_poly(poly.scale(&scalar))
}

/// `sum_mu |GL_n| / N(mu)` with rational coefficients.
fn scaled_class_sum(n: usize) -> Vec<BigRational> {
    let gl = gl_order(n);
    let terms: Vec<Vec<BigRational>> = enumerate_phi(n)
        .par_iter()
        .map(|mu| {
            let (poly, scalar) = normalizer_parts(mu);
            let index = gl
                .div_exact(&poly)
                .expect("block polynomials divide the group order");
            index
                .coeffs()
                .iter()
                .map(|c| BigRational::new(c.clone(), scalar.clone()))
                .collect()
        })
        .collect();
    let mut acc = vec![BigRational::zero(); gl.degree().unwrap_or(0) + 1];
    for t in terms {
        for (a, c) in acc.iter_mut().zip(t) {
            *a += c;
        }
    }
    acc
}

/// `|A_n(q)| = b_n |GL_n(q)|`, which must be an integer polynomial.
///
/// This is the census for `q > 2`; at `q = 2` it is only an upper bound.
pub fn a_polynomial(n: usize) -> Result<IntPolynomial, CensusError> {
    let sum = scaled_class_sum(n);
    if sum.iter().any(|c| !c.is_integer()) {
        return Err(CensusError::NonPolynomial(n));
    }
    Ok(IntPolynomial::from_coeffs(sum.iter().map(|c| c.to_integer()).collect()))
}

/// `b_n = sum_{mu} 1 / N(mu)`.
pub fn b_coefficient(n: usize) -> RationalFunction {
    let sum = scaled_class_sum(n);
    let lcm = sum
        .iter()
        .fold(BigInt::one(), |l, c| num_integer::Integer::lcm(&l, c.denom()));
    let num = IntPolynomial::from_coeffs(sum.iter().map(|c| (c * &lcm).to_integer()).collect());
    RationalFunction::new(num, gl_order(n).scale(&lcm)).expect("group order is nonzero")
}

/// `b_n` at a numeric `q`, summed class by class.
pub fn b_value(n: usize, q: &BigRational) -> BigRational {
    enumerate_phi(n)
        .iter()
        .map(|mu| {
            let (poly, scalar) = normalizer_parts(mu);
            (poly.eval(q) * BigRational::from_integer(scalar)).recip()
        })
        .fold(BigRational::zero(), |a, b| a + b)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusRow {
    pub n: usize,
    pub b_n: RationalFunction,
    pub a_poly: IntPolynomial,
    pub class_count: usize,
}

pub fn census_row(n: usize) -> Result<CensusRow, CensusError> {
    Ok(CensusRow {
        n,
        b_n: b_coefficient(n),
        a_poly: a_polynomial(n)?,
        class_count: enumerate_phi(n).len(),
    })
}

/// Exact clique number of `GL_n(q)` in the two regimes with a closed form:
/// `|A_n(q)|` when `q > n`, and `|A_q(q)| - |GL_q(q)| / ((q-1)^q q!)` when
/// `q = n > 2`.
pub fn omega_closed(n: usize, q: u64) -> Result<BigInt, CensusError> {
    prime_power(q).ok_or(CensusError::NotPrimePower(q))?;
    let qn = q as usize;
    if qn < n || (qn == n && q == 2) {
        return Err(CensusError::UnsupportedRegime { n, q });
    }
    let qb = BigInt::from(q);
    let cover = a_polynomial(n)?.eval_int(&qb);
    if qn > n {
        return Ok(cover);
    }
    let torus_norm = BigInt::from(q - 1).pow(q as u32) * (1..=q).fold(BigInt::one(), |f, i| f * i);
    Ok(cover - gl_order(n).eval_int(&qb) / torus_norm)
}

/// Leading coefficients `[x^0 .. x^(n/2 - 1)]` of
/// `prod_{k>=1} (1 - x^k)^(-k(k+1)/2)`, which are the top `n/2` coefficients
/// of `|A_n(q)|`.
pub fn stabilized_prefix(n: usize) -> Vec<BigInt> {
    let len = n / 2;
    let mut s = vec![BigInt::zero(); len];
    if len == 0 {
        return s;
    }
    s[0] = BigInt::one();
    for k in 1..len {
        for _ in 0..k * (k + 1) / 2 {
            for i in k..len {
                let add = s[i - k].clone();
                s[i] += add;
            }
        }
    }
    s
}
