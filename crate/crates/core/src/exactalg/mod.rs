//! Exact arithmetic substrate: big rationals, integer polynomials in `q`,
//! and canonical rational functions.
//!
//! Rationals come from `num-rational`; everything polynomial is local.
//! JSON forms: a polynomial is an array of decimal coefficient strings in
//! ascending degree, a rational function is `{"num": [...], "den": [...]}`.

mod poly;
mod ratfunc;
mod serial;

pub use num_rational::BigRational;
pub use poly::IntPolynomial;
pub use ratfunc::{phi_d, rf_arith, rf_eval, ArithOp, RationalFunction};
pub use serial::{decimal_string, parse_rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("pole at q = {0}")]
    Pole(String),
    #[error("malformed number: {0}")]
    Parse(String),
}

/// `q = p^e` with `p` prime, or `None`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..).take_while(|d| d * d <= q).find(|d| q.is_multiple_of(*d)).unwrap_or(q);
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}
