//! Small finite fields `F_q`, `q = p^e <= 256`, by full operation tables.
//!
//! An element is its coefficient vector over `F_p` in the basis
//! `1, a, ..., a^(e-1)`, read as a base-`p` integer (constant term least
//! significant). The modulus is the least monic irreducible of degree `e`
//! in that same encoding.

use std::fmt;

use super::OracleError;
use crate::exactalg::prime_power;

#[derive(Clone)]
pub struct Fq {
    p: u32,
    e: u32,
    q: usize,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} (p = {}, modulus {:?})", self.q, self.p, self.modulus)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}

impl Eq for Fq {}

/// Product of two `F_p` polynomials (ascending coefficients) reduced by a monic modulus.
fn prime_poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for top in (e..prod.len()).rev() {
        let c = prod[top];
        if c != 0 {
            for (k, &mk) in modulus.iter().enumerate() {
                let idx = top - e + k;
                prod[idx] = (prod[idx] + (p - c) * mk) % p;
            }
        }
    }
    prod.truncate(e);
    prod
}

fn digits(mut x: usize, p: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = (x % p as usize) as u32;
            x /= p as usize;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> usize {
    d.iter().rev().fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

/// Whether the monic `F_p` polynomial has a monic factor of degree `1..=deg/2`.
fn prime_poly_reducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        for low in 0..(p as usize).pow(d as u32) {
            let mut g = digits(low, p, d);
            g.push(1);
            if prime_poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return true;
            }
        }
    }
    false
}

fn prime_poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        for (k, &gk) in g.iter().enumerate() {
            r[shift + k] = (r[shift + k] + (p - c) * gk) % p;
        }
        r.pop();
    }
    r
}

impl Fq {
    pub fn new(q: u64) -> Result<Self, OracleError> {
        let (p, e) = prime_power(q).ok_or(OracleError::NotPrimePower(q))?;
        if q > 256 {
            return Err(OracleError::FieldTooLarge(q));
        }
        let (p, q) = (p as u32, q as usize);
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            (0..q)
                .map(|low| {
                    let mut f = digits(low, p, e as usize);
                    f.push(1);
                    f
                })
                .find(|f| !prime_poly_reducible(f, p))
                .expect("irreducible polynomials exist in every degree")
        };
        let width = e as usize;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let da = digits(a, p, width);
            for b in 0..q {
                let db = digits(b, p, width);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&sum, p) as u8;
                let prod = if e == 1 {
                    vec![(da[0] * db[0]) % p]
                } else {
                    prime_poly_mulmod(&da, &db, &modulus, p)
                };
                mul[a * q + b] = undigits(&prod, p) as u8;
            }
        }
        let neg = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8).collect();
        let mut inv = vec![0u8; q];
        for a in 1..q {
            inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).expect("field element is invertible") as u8;
        }
        Ok(Self {
            p,
            e,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Coefficients of the defining polynomial over `F_p`, ascending.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `a` must be nonzero.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        assert!(a != 0, "zero has no inverse");
        self.inv[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        (0..self.q).map(|a| a as u8)
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> u8 {
        (2..self.q)
            .map(|a| a as u8)
            .find(|&a| self.mult_order(a) == self.q - 1)
            .unwrap_or(1)
    }

    pub fn mult_order(&self, a: u8) -> usize {
        assert!(a != 0);
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

/// Polynomial over `F_q`, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqPoly {
    coeffs: Vec<u8>,
}

impl FqPoly {
    pub fn new(mut coeffs: Vec<u8>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1] }
    }

    /// `t - a`.
    pub fn linear(field: &Fq, a: u8) -> Self {
        Self::new(vec![field.neg(a), 1])
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn add(&self, other: &Self, field: &Fq) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let c = (0..len)
            .map(|i| {
                field.add(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Self::new(c)
    }

    pub fn mul(&self, other: &Self, field: &Fq) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![0u8; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = field.add(c[i + j], field.mul(a, b));
            }
        }
        Self::new(c)
    }

    pub fn pow(&self, e: usize, field: &Fq) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self, field))
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn div_rem(&self, d: &Self, field: &Fq) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = field.inv(d.coeffs[dd]);
        let mut r = self.coeffs.clone();
        let mut quot = vec![0u8; self.coeffs.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let c = field.mul(r[top], lead_inv);
            if c != 0 {
                let shift = top - dd;
                quot[shift] = c;
                for (k, &dk) in d.coeffs.iter().enumerate() {
                    r[shift + k] = field.sub(r[shift + k], field.mul(c, dk));
                }
            }
            r.pop();
        }
        (Self::new(quot), Self::new(r))
    }

    /// No monic factor of degree `1..=deg/2`; constants are not irreducible.
    pub fn is_irreducible(&self, field: &Fq) -> bool {
        let Some(deg) = self.degree() else { return false };
        if deg == 0 {
            return false;
        }
        (1..=deg / 2).all(|d| monic_polys(field, d).all(|g| !self.div_rem(&g, field).1.is_zero()))
    }
}

/// All monic polynomials of degree `d`, low coefficients in base-`q` order.
pub fn monic_polys(field: &Fq, d: usize) -> impl Iterator<Item = FqPoly> + '_ {
    let q = field.order();
    (0..q.pow(d as u32)).map(move |mut low| {
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push((low % q) as u8);
            low /= q;
        }
        c.push(1);
        FqPoly::new(c)
    })
}

/// Monic irreducible polynomials of degree `d`.
pub fn irreducible_polys(field: &Fq, d: usize) -> Vec<FqPoly> {
    monic_polys(field, d).filter(|f| f.is_irreducible(field)).collect()
}
