//! Dense square matrices over a small [`Fq`].

use std::fmt;

use super::field::{Fq, FqPoly};

/// `n x n` matrix, row-major field encodings.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqMatrix {
    n: usize,
    data: Vec<u8>,
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.data.chunks(self.n.max(1)).map(|r| format!("{r:?}")).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl fmt::Display for FqMatrix {
    /// Entries row-major, space separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.data.iter().map(u8::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FqMatrix {
    pub fn zero(n: usize) -> Self {
        Self { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Scalar matrix `c * I`.
    pub fn scalar(n: usize, c: u8) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self {
            n,
            data: rows.concat(),
        }
    }

    /// Row-major entries; the length must be a perfect square.
    pub fn from_entries(data: Vec<u8>) -> Self {
        let n = (data.len() as f64).sqrt().round() as usize;
        assert_eq!(n * n, data.len(), "entry count must be a square");
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[i * self.n + j] = v;
    }

    pub fn is_well_formed(&self, field: &Fq) -> bool {
        self.data.iter().all(|&x| (x as usize) < field.order())
    }

    /// Base-`q` number with entry `(0, 0)` most significant.
    pub fn encode(&self, q: usize) -> u64 {
        self.data.iter().fold(0u64, |acc, &x| acc * q as u64 + x as u64)
    }

    pub fn decode(mut code: u64, n: usize, q: usize) -> Self {
        let mut data = vec![0u8; n * n];
        for slot in data.iter_mut().rev() {
            *slot = (code % q as u64) as u8;
            code /= q as u64;
        }
        Self { n, data }
    }

    pub fn mul(&self, other: &Self, field: &Fq) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    out.data[idx] = field.add(out.data[idx], field.mul(a, other.data[k * n + j]));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self, field: &Fq) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| field.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self, field: &Fq) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| field.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: u8, field: &Fq) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&a| field.mul(c, a)).collect(),
        }
    }

    /// `AB == BA`, stopping at the first differing entry.
    pub fn commutes(&self, other: &Self, field: &Fq) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let mut ab = 0u8;
                let mut ba = 0u8;
                for k in 0..n {
                    ab = field.add(ab, field.mul(self.data[i * n + k], other.data[k * n + j]));
                    ba = field.add(ba, field.mul(other.data[i * n + k], self.data[k * n + j]));
                }
                if ab != ba {
                    return false;
                }
            }
        }
        true
    }

    pub fn rank(&self, field: &Fq) -> usize {
        row_reduce(self.data.clone(), self.n, self.n, field).len()
    }

    pub fn is_invertible(&self, field: &Fq) -> bool {
        self.rank(field) == self.n
    }

    /// Gauss-Jordan inverse, `None` when singular.
    pub fn inverse(&self, field: &Fq) -> Option<Self> {
        let n = self.n;
        let w = 2 * n;
        let mut a = vec![0u8; n * w];
        for i in 0..n {
            a[i * w..i * w + n].copy_from_slice(&self.data[i * n..(i + 1) * n]);
            a[i * w + n + i] = 1;
        }
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r * w + col] != 0)?;
            if piv != col {
                for j in 0..w {
                    a.swap(piv * w + j, col * w + j);
                }
            }
            let inv = field.inv(a[col * w + col]);
            for j in 0..w {
                a[col * w + j] = field.mul(inv, a[col * w + j]);
            }
            for r in 0..n {
                let f = a[r * w + col];
                if r != col && f != 0 {
                    for j in 0..w {
                        a[r * w + j] = field.sub(a[r * w + j], field.mul(f, a[col * w + j]));
                    }
                }
            }
        }
        let mut out = Self::zero(n);
        for i in 0..n {
            out.data[i * n..(i + 1) * n].copy_from_slice(&a[i * w + n..(i + 1) * w]);
        }
        Some(out)
    }

    /// Monic minimal polynomial, from the first linear dependency among
    /// `I, M, M^2, ...` viewed as vectors of length `n^2`.
    pub fn min_poly(&self, field: &Fq) -> FqPoly {
        let n = self.n;
        let len = n * n;
        // reduced vectors with their pivot and the power combination they represent
        let mut basis: Vec<(usize, Vec<u8>, Vec<u8>)> = Vec::new();
        let mut power = Self::identity(n);
        for k in 0..=n {
            let mut v = power.data.clone();
            let mut comb = vec![0u8; n + 1];
            comb[k] = 1;
            for (piv, bv, bc) in &basis {
                let f = v[*piv];
                if f != 0 {
                    for j in 0..len {
                        v[j] = field.sub(v[j], field.mul(f, bv[j]));
                    }
                    for j in 0..=n {
                        comb[j] = field.sub(comb[j], field.mul(f, bc[j]));
                    }
                }
            }
            match v.iter().position(|&x| x != 0) {
                None => return FqPoly::new(comb),
                Some(piv) => {
                    let inv = field.inv(v[piv]);
                    let v = v.iter().map(|&x| field.mul(inv, x)).collect();
                    let comb = comb.iter().map(|&x| field.mul(inv, x)).collect();
                    basis.push((piv, v, comb));
                }
            }
            power = power.mul(self, field);
        }
        unreachable!("I, M, ..., M^n are linearly dependent")
    }

    /// `det(tI - M)` by Berkowitz's division-free recurrence.
    pub fn char_poly(&self, field: &Fq) -> FqPoly {
        let n = self.n;
        if n == 0 {
            return FqPoly::one();
        }
        // coefficients, highest degree first
        let mut vect = vec![1u8, field.neg(self.get(0, 0))];
        for i in 1..n {
            let row: Vec<u8> = (0..i).map(|j| self.get(i, j)).collect();
            let mut col: Vec<u8> = (0..i).map(|j| self.get(j, i)).collect();
            let mut toeplitz = vec![1u8, field.neg(self.get(i, i))];
            for _ in 0..i {
                let rc = row.iter().zip(&col).fold(0u8, |acc, (&r, &c)| field.add(acc, field.mul(r, c)));
                toeplitz.push(field.neg(rc));
                // col <- A_i col
                col = (0..i)
                    .map(|r| (0..i).fold(0u8, |acc, c| field.add(acc, field.mul(self.get(r, c), col[c]))))
                    .collect();
            }
            let mut next = vec![0u8; i + 2];
            for (r, slot) in next.iter_mut().enumerate() {
                for (c, &v) in vect.iter().enumerate() {
                    if r >= c {
                        *slot = field.add(*slot, field.mul(toeplitz[r - c], v));
                    }
                }
            }
            vect = next;
        }
        vect.reverse();
        FqPoly::new(vect)
    }

    /// Whether the characteristic and minimal polynomials coincide.
    pub fn is_cyclic(&self, field: &Fq) -> bool {
        self.min_poly(field).degree() == Some(self.n)
    }

    /// Substitutes the matrix into a polynomial.
    pub fn eval_poly(&self, f: &FqPoly, field: &Fq) -> Self {
        let mut acc = Self::zero(self.n);
        for &c in f.coeffs().iter().rev() {
            acc = acc.mul(self, field).add(&Self::scalar(self.n, c), field);
        }
        acc
    }
}

/// Row echelon form of a `rows x cols` matrix; returns the nonzero rows.
pub(crate) fn row_reduce(mut a: Vec<u8>, rows: usize, cols: usize, field: &Fq) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        let Some(piv) = (r..rows).find(|&i| a[i * cols + col] != 0) else { continue };
        for j in 0..cols {
            a.swap(piv * cols + j, r * cols + j);
        }
        let inv = field.inv(a[r * cols + col]);
        for j in 0..cols {
            a[r * cols + j] = field.mul(inv, a[r * cols + j]);
        }
        for i in 0..rows {
            let f = a[i * cols + col];
            if i != r && f != 0 {
                for j in 0..cols {
                    a[i * cols + j] = field.sub(a[i * cols + j], field.mul(f, a[r * cols + j]));
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    for i in 0..r {
        out.push(a[i * cols..(i + 1) * cols].to_vec());
    }
    out
}

/// Basis of `{x : A x = 0}` for a `rows x cols` matrix.
pub(crate) fn nullspace(a: Vec<u8>, rows: usize, cols: usize, field: &Fq) -> Vec<Vec<u8>> {
    let rref = row_reduce(a, rows, cols, field);
    let pivots: Vec<usize> = rref.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect();
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u8; cols];
            v[free] = 1;
            for (row, &p) in rref.iter().zip(&pivots) {
                v[p] = field.neg(row[free]);
            }
            v
        })
        .collect()
}

/// Companion matrix of a monic `f` of degree `d`: ones below the diagonal,
/// last column `-f_0, ..., -f_(d-1)`.
pub fn companion(f: &FqPoly, field: &Fq) -> FqMatrix {
    assert!(f.is_monic(), "companion matrix needs a monic polynomial");
    let d = f.degree().unwrap();
    assert!(d >= 1, "companion matrix needs degree >= 1");
    let mut m = FqMatrix::zero(d);
    for i in 1..d {
        m.set(i, i - 1, 1);
    }
    for i in 0..d {
        m.set(i, d - 1, field.neg(f.coeffs()[i]));
    }
    m
}

/// `m` companion blocks of `f` on the diagonal and identity blocks above
/// them; its minimal polynomial is `f^m` for irreducible `f`.
pub fn jm_block(f: &FqPoly, m: usize, field: &Fq) -> FqMatrix {
    let c = companion(f, field);
    let d = c.n();
    let mut out = FqMatrix::zero(d * m);
    for b in 0..m {
        for i in 0..d {
            for j in 0..d {
                out.set(b * d + i, b * d + j, c.get(i, j));
            }
            if b + 1 < m {
                out.set(b * d + i, (b + 1) * d + i, 1);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::field::irreducible_polys;

    /// `det(tI - M)` by cofactor expansion with polynomial entries.
    fn laplace_char_poly(m: &FqMatrix, f: &Fq) -> FqPoly {
        fn det(rows: &[Vec<FqPoly>], f: &Fq) -> FqPoly {
            if rows.is_empty() {
                return FqPoly::one();
            }
            let mut acc = FqPoly::zero();
            for (j, entry) in rows[0].iter().enumerate() {
                let minor: Vec<Vec<FqPoly>> = rows[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, e)| e.clone()).collect())
                    .collect();
                let mut term = entry.mul(&det(&minor, f), f);
                if j % 2 == 1 {
                    term = term.mul(&FqPoly::new(vec![f.neg(1)]), f);
                }
                acc = acc.add(&term, f);
            }
            acc
        }
        let n = m.n();
        let rows: Vec<Vec<FqPoly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = f.neg(m.get(i, j));
                        if i == j {
                            FqPoly::new(vec![c, 1])
                        } else {
                            FqPoly::new(vec![c])
                        }
                    })
                    .collect()
            })
            .collect();
        det(&rows, f)
    }

    fn pseudo_random_matrices(n: usize, f: &Fq, count: usize) -> Vec<FqMatrix> {
        let q = f.order() as u64;
        let total = q.pow((n * n) as u32);
        (0..count as u64)
            .map(|i| FqMatrix::decode((i * 2654435761 + 12345) % total, n, f.order()))
            .collect()
    }

    #[test]
    fn encode_round_trip_and_order() {
        let m = FqMatrix::from_rows(&[vec![1, 2], vec![0, 1]]);
        assert_eq!(m.encode(3), 27 + 2 * 9 + 1);
        assert_eq!(FqMatrix::decode(m.encode(3), 2, 3), m);
    }

    #[test]
    fn inverse_and_rank() {
        let f = Fq::new(5).unwrap();
        for m in pseudo_random_matrices(3, &f, 200) {
            match m.inverse(&f) {
                Some(inv) => {
                    assert_eq!(m.mul(&inv, &f), FqMatrix::identity(3));
                    assert_eq!(m.rank(&f), 3);
                }
                None => assert!(m.rank(&f) < 3),
            }
        }
    }

    #[test]
    fn berkowitz_matches_cofactor_expansion() {
        for q in [2, 3, 4, 5] {
            let f = Fq::new(q).unwrap();
            for n in 1..=4 {
                for m in pseudo_random_matrices(n, &f, 60) {
                    let cp = m.char_poly(&f);
                    assert_eq!(cp, laplace_char_poly(&m, &f), "{m:?} over F_{q}");
                    assert!(m.eval_poly(&cp, &f) == FqMatrix::zero(n), "Cayley-Hamilton");
                }
            }
        }
    }

    #[test]
    fn min_poly_divides_char_poly_and_annihilates() {
        for q in [2, 3, 4] {
            let f = Fq::new(q).unwrap();
            for n in 1..=4 {
                for m in pseudo_random_matrices(n, &f, 60) {
                    let mp = m.min_poly(&f);
                    assert!(mp.is_monic());
                    assert_eq!(m.eval_poly(&mp, &f), FqMatrix::zero(n));
                    assert!(m.char_poly(&f).div_rem(&mp, &f).1.is_zero());
                    // no proper divisor of lower degree annihilates: check all monic of lower degree
                    let d = mp.degree().unwrap();
                    if d >= 1 && q == 2 && n <= 3 {
                        for k in 0..d {
                            assert!(crate::oracle::field::monic_polys(&f, k)
                                .all(|g| m.eval_poly(&g, &f) != FqMatrix::zero(n)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn min_poly_examples() {
        let f2 = Fq::new(2).unwrap();
        assert_eq!(FqMatrix::identity(2).min_poly(&f2), FqPoly::new(vec![1, 1]));
        assert!(!FqMatrix::identity(2).is_cyclic(&f2));
        let quad = FqPoly::new(vec![1, 1, 1]);
        let c = companion(&quad, &f2);
        assert_eq!(c.min_poly(&f2), quad);
        assert_eq!(jm_block(&quad, 1, &f2), c);
        let t_minus_one = FqPoly::linear(&f2, 1);
        let u = jm_block(&t_minus_one, 3, &f2);
        assert!(u.is_cyclic(&f2));
        assert_eq!(u.min_poly(&f2), t_minus_one.pow(3, &f2));
    }

    #[test]
    fn block_minimal_polynomials_are_powers() {
        for q in [2, 3] {
            let f = Fq::new(q).unwrap();
            for d in 1..=3 {
                for p in irreducible_polys(&f, d) {
                    for m in 1..=3 {
                        let j = jm_block(&p, m, &f);
                        assert_eq!(j.min_poly(&f), p.pow(m, &f));
                        assert_eq!(j.char_poly(&f), p.pow(m, &f));
                    }
                }
            }
        }
    }

    #[test]
    fn commutation_check() {
        let f = Fq::new(3).unwrap();
        let a = FqMatrix::from_rows(&[vec![1, 1], vec![0, 1]]);
        let b = FqMatrix::from_rows(&[vec![1, 0], vec![1, 1]]);
        assert!(!a.commutes(&b, &f));
        assert!(a.commutes(&a.mul(&a, &f), &f));
        assert_eq!(a.commutes(&b, &f), a.mul(&b, &f) == b.mul(&a, &f));
    }

    #[test]
    fn nullspace_dimension() {
        let f = Fq::new(3).unwrap();
        // x + y + z = 0 over F_3
        let ns = nullspace(vec![1, 1, 1], 1, 3, &f);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert_eq!(v.iter().fold(0u8, |a, &x| f.add(a, x)), 0);
        }
    }
}
