//! Explicit enumeration of `GL_n(q)` and brute-force subgroup computations.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::field::{Fq, FqPoly};
use super::matrix::{jm_block, nullspace, FqMatrix};
use super::{Budget, OracleError};
use crate::census::{a_polynomial, gl_order};

/// `|GL_n(q)|`, saturating.
pub fn group_order(n: usize, q: u64) -> u64 {
    gl_order(n).eval_int(&BigInt::from(q)).to_u64().unwrap_or(u64::MAX)
}

enum Lookup {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

/// All invertible `n x n` matrices over `F_q`, ordered by their encoding.
pub struct GlGroup {
    field: Fq,
    n: usize,
    elems: Vec<FqMatrix>,
    lookup: Lookup,
}

/// Largest matrix space indexed through a flat table.
const DENSE_LIMIT: u64 = 1 << 26;

/// Enumerates `GL_n(q)` after checking it fits in `budget`.
pub fn enumerate_gl(n: usize, q: u64, budget: &Budget) -> Result<GlGroup, OracleError> {
    let field = Fq::new(q)?;
    let order = group_order(n, q);
    budget.check_elements(order)?;
    let space = q.checked_pow((n * n) as u32).ok_or(OracleError::BudgetExceeded {
        what: "matrix space scan",
        required: u64::MAX,
        budget: budget.steps,
    })?;
    budget.check_steps("matrix space scan", space.saturating_mul((n * n * n) as u64))?;
    let qs = field.order();
    let elems: Vec<FqMatrix> = (0..space)
        .into_par_iter()
        .filter_map(|code| {
            let m = FqMatrix::decode(code, n, qs);
            m.is_invertible(&field).then_some(m)
        })
        .collect();
    debug_assert_eq!(elems.len() as u64, order);
    let lookup = if space <= DENSE_LIMIT {
        let mut table = vec![u32::MAX; space as usize];
        for (i, m) in elems.iter().enumerate() {
            table[m.encode(qs) as usize] = i as u32;
        }
        Lookup::Dense(table)
    } else {
        Lookup::Sparse(elems.iter().enumerate().map(|(i, m)| (m.encode(qs), i as u32)).collect())
    };
    Ok(GlGroup {
        field,
        n,
        elems,
        lookup,
    })
}

/// A subgroup given by sorted element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CentralizerSet {
    pub members: Vec<u32>,
}

impl CentralizerSet {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.members.binary_search(&(idx as u32)).is_ok()
    }
}

impl GlGroup {
    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.field.order() as u64
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[FqMatrix] {
        &self.elems
    }

    pub fn element(&self, i: usize) -> &FqMatrix {
        &self.elems[i]
    }

    pub fn index_of(&self, m: &FqMatrix) -> Option<usize> {
        let code = m.encode(self.field.order());
        let idx = match &self.lookup {
            Lookup::Dense(t) => *t.get(code as usize)?,
            Lookup::Sparse(h) => *h.get(&code)?,
        };
        (idx != u32::MAX).then_some(idx as usize)
    }

    pub fn identity_index(&self) -> usize {
        self.index_of(&FqMatrix::identity(self.n)).expect("identity is invertible")
    }

    pub fn commute(&self, i: usize, j: usize) -> bool {
        self.elems[i].commutes(&self.elems[j], &self.field)
    }

    /// `{h : hM = Mh}` by scanning every element.
    pub fn centralizer(&self, m: &FqMatrix) -> CentralizerSet {
        let members = self
            .elems
            .par_iter()
            .enumerate()
            .filter(|(_, h)| h.commutes(m, &self.field))
            .map(|(i, _)| i as u32)
            .collect();
        CentralizerSet { members }
    }

    /// The same set from the solution space of `XM = MX`: enumerate the
    /// linear span of a kernel basis and keep the invertible matrices.
    pub fn commutant_centralizer(&self, m: &FqMatrix) -> CentralizerSet {
        let mut members: Vec<u32> = commutant_units(m, &self.field)
            .iter()
            .map(|x| self.index_of(x).expect("invertible matrix is enumerated") as u32)
            .collect();
        members.sort_unstable();
        CentralizerSet { members }
    }

    /// Every pair of members commutes.
    pub fn is_abelian(&self, set: &CentralizerSet) -> bool {
        let ms = &set.members;
        ms.iter()
            .enumerate()
            .all(|(a, &i)| ms[a + 1..].iter().all(|&j| self.commute(i as usize, j as usize)))
    }

    pub fn is_closed(&self, set: &CentralizerSet) -> bool {
        set.members.iter().all(|&i| {
            set.members.iter().all(|&j| {
                let p = self.elems[i as usize].mul(&self.elems[j as usize], &self.field);
                set.contains(self.index_of(&p).unwrap())
            })
        })
    }

    /// `|{g : g C g^-1 = C}|` by scanning every element.
    pub fn normalizer_of_set(&self, set: &CentralizerSet) -> usize {
        let mut inside = vec![false; self.order()];
        for &i in &set.members {
            inside[i as usize] = true;
        }
        let f = &self.field;
        self.elems
            .par_iter()
            .filter(|g| {
                let gi = g.inverse(f).expect("group element");
                set.members.iter().all(|&c| {
                    let conj = g.mul(&self.elems[c as usize], f).mul(&gi, f);
                    inside[self.index_of(&conj).unwrap()]
                })
            })
            .count()
    }

    pub fn center(&self) -> Vec<usize> {
        let f = &self.field;
        let gens = generators(self.n, f);
        (0..self.order())
            .into_par_iter()
            .filter(|&i| gens.iter().all(|g| self.elems[i].commutes(g, f)))
            .collect()
    }
}

/// Elementary transvections `I + E_ij` and `diag(a, 1, ..., 1)`, `a` primitive; they generate `GL_n(q)`.
pub fn generators(n: usize, field: &Fq) -> Vec<FqMatrix> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut t = FqMatrix::identity(n);
                t.set(i, j, 1);
                gens.push(t);
            }
        }
    }
    if n > 0 {
        let mut d = FqMatrix::identity(n);
        d.set(0, 0, field.primitive_element());
        gens.push(d);
    }
    gens
}

/// Invertible solutions of `XM = MX`.
pub fn commutant_units(m: &FqMatrix, field: &Fq) -> Vec<FqMatrix> {
    let n = m.n();
    let len = n * n;
    // row (i, j) of the system: sum_k x_ik m_kj - m_ik x_kj = 0
    let mut sys = vec![0u8; len * len];
    for i in 0..n {
        for j in 0..n {
            let row = (i * n + j) * len;
            for k in 0..n {
                let a = row + i * n + k;
                sys[a] = field.add(sys[a], m.get(k, j));
                let b = row + k * n + j;
                sys[b] = field.sub(sys[b], m.get(i, k));
            }
        }
    }
    let basis = nullspace(sys, len, len, field);
    let q = field.order();
    let total = q.pow(basis.len() as u32);
    (0..total)
        .into_par_iter()
        .filter_map(|mut code| {
            let mut x = vec![0u8; len];
            for b in &basis {
                let c = (code % q) as u8;
                code /= q;
                if c != 0 {
                    for (xe, &be) in x.iter_mut().zip(b) {
                        *xe = field.add(*xe, field.mul(c, be));
                    }
                }
            }
            let x = FqMatrix::from_entries(x);
            x.is_invertible(field).then_some(x)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CyclicProportion {
    pub n: usize,
    pub q: u64,
    pub cyclic: u64,
    pub total: u64,
    pub proportion: String,
    /// `(1 - q^-5)/(1 + q^-3) - 1/(q^n (q - 1))`.
    pub limit_lower: String,
    /// `1 - q^-3 - q^-5 + q^-6 - q^-n`.
    pub expanded_lower: String,
    /// `|c - (1 - q^-5)/(1 + q^-3)| <= 1/(q^n (q - 1))`.
    pub two_sided: bool,
    /// `c >= limit_lower` and `c > expanded_lower`.
    pub holds: bool,
    #[serde(skip)]
    pub exact: BigRational,
}

fn inv_pow(q: u64, k: usize) -> BigRational {
    BigRational::new(1.into(), BigInt::from(q).pow(k as u32))
}

/// Exact proportion of cyclic matrices in `GL_n(q)` and the lower bounds it must meet.
pub fn cyclic_proportion(group: &GlGroup) -> CyclicProportion {
    let (n, q) = (group.n(), group.q());
    let f = group.field();
    let cyclic = group.elements().par_iter().filter(|m| m.is_cyclic(f)).count() as u64;
    let total = group.order() as u64;
    let c = BigRational::new(cyclic.into(), total.into());
    let one = BigRational::from_integer(1.into());
    let limit = (&one - inv_pow(q, 5)) / (&one + inv_pow(q, 3));
    let err = inv_pow(q, n) / BigRational::from_integer((q - 1).into());
    let limit_lower = &limit - &err;
    let expanded_lower = &one - inv_pow(q, 3) - inv_pow(q, 5) + inv_pow(q, 6) - inv_pow(q, n);
    let dev = if c > limit { &c - &limit } else { &limit - &c };
    CyclicProportion {
        n,
        q,
        cyclic,
        total,
        proportion: c.to_string(),
        limit_lower: limit_lower.to_string(),
        expanded_lower: expanded_lower.to_string(),
        two_sided: dev <= err,
        holds: c >= limit_lower && c > expanded_lower,
        exact: c,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CyclicCentralizers {
    pub n: usize,
    pub q: u64,
    /// Number of distinct centralizers of cyclic elements.
    pub count: usize,
    pub cyclic_total: usize,
    /// Least element index generating each distinct centralizer, in order.
    pub representatives: Vec<usize>,
    #[serde(skip)]
    pub sets: Vec<CentralizerSet>,
    /// Each cyclic element lies in exactly one of the sets.
    pub partition_ok: bool,
    /// Every set is abelian of order at most `q^n`.
    pub abelian_small: bool,
    /// `count >= q^-n |GL| (1 - q^-3 - q^-5 + q^-6 - q^-n)`.
    pub lower_bound_ok: bool,
}

/// Cost charged for [`count_cyclic_centralizers`]: one full scan per distinct
/// centralizer (at most `|A_n(q)|` of them) plus one commutant per element.
pub fn centralizer_count_cost(n: usize, q: u64) -> u64 {
    let order = group_order(n, q);
    let sets = a_polynomial(n)
        .map(|a| a.eval_int(&BigInt::from(q)).to_u64().unwrap_or(u64::MAX))
        .unwrap_or(u64::MAX);
    let per_elem = q.saturating_pow(n as u32);
    sets.saturating_mul(order).saturating_add(order.saturating_mul(per_elem))
}

/// Distinct centralizers of cyclic elements.
///
/// Each centralizer comes from the commutant of the element; every distinct
/// set is then re-derived by a full scan of its representative.
pub fn count_cyclic_centralizers(group: &GlGroup, budget: &Budget) -> Result<CyclicCentralizers, OracleError> {
    let (n, q) = (group.n(), group.q());
    budget.check_steps("cyclic centralizer count", centralizer_count_cost(n, q))?;
    let f = group.field();
    let cyclic: Vec<bool> = group.elements().par_iter().map(|m| m.is_cyclic(f)).collect();
    let cyclic_idx: Vec<usize> = (0..group.order()).filter(|&i| cyclic[i]).collect();
    let cents: Vec<CentralizerSet> = cyclic_idx
        .par_iter()
        .map(|&i| group.commutant_centralizer(group.element(i)))
        .collect();
    let mut seen: HashMap<&[u32], usize> = HashMap::new();
    let mut representatives = Vec::new();
    let mut sets: Vec<CentralizerSet> = Vec::new();
    for (&i, c) in cyclic_idx.iter().zip(&cents) {
        if !seen.contains_key(c.members.as_slice()) {
            seen.insert(c.members.as_slice(), sets.len());
            representatives.push(i);
            sets.push(c.clone());
        }
    }
    let mismatch = sets
        .par_iter()
        .zip(&representatives)
        .find_any(|(s, &r)| group.centralizer(group.element(r)) != **s);
    if let Some((_, &r)) = mismatch {
        return Err(OracleError::Inconsistent(format!(
            "commutant and scanned centralizer differ for element {r}"
        )));
    }
    let mut hits = vec![0u32; group.order()];
    for s in &sets {
        for &m in &s.members {
            if cyclic[m as usize] {
                hits[m as usize] += 1;
            }
        }
    }
    let partition_ok = cyclic_idx.iter().all(|&i| hits[i] == 1)
        && sets.iter().map(|s| s.members.iter().filter(|&&m| cyclic[m as usize]).count()).sum::<usize>()
            == cyclic_idx.len();
    let cap = q.pow(n as u32) as usize;
    let abelian_small = sets.par_iter().all(|s| s.order() <= cap && group.is_abelian(s));
    let bound = BigRational::new(group.order().into(), BigInt::from(q).pow(n as u32))
        * (BigRational::from_integer(1.into()) - inv_pow(q, 3) - inv_pow(q, 5) + inv_pow(q, 6) - inv_pow(q, n));
    let count = sets.len();
    Ok(CyclicCentralizers {
        n,
        q,
        count,
        cyclic_total: cyclic_idx.len(),
        representatives,
        sets,
        partition_ok,
        abelian_small,
        lower_bound_ok: BigRational::from_integer(count.into()) >= bound,
    })
}

/// The unipotent Jordan block of size `n`.
pub fn regular_unipotent(n: usize, field: &Fq) -> FqMatrix {
    jm_block(&FqPoly::linear(field, 1), n, field)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockOrders {
    pub d: usize,
    pub m: usize,
    pub centralizer: usize,
    pub centralizer_expected: u64,
    pub normalizer: usize,
    pub normalizer_expected: u64,
    pub abelian: bool,
}

impl BlockOrders {
    pub fn matches(&self) -> bool {
        self.abelian
            && self.centralizer as u64 == self.centralizer_expected
            && self.normalizer as u64 == self.normalizer_expected
    }
}

/// Centralizer and normalizer orders of `jm_block(f, m)` in `GL_{dm}(q)`
/// against `(q^d - 1) q^(d(m-1))` and `d (q^d - 1)` (m = 1) or
/// `d (q^d - 1)^2 q^(2dm - 3d)` (m >= 2).
pub fn block_orders(group: &GlGroup, f: &FqPoly) -> BlockOrders {
    let field = group.field();
    let d = f.degree().expect("nonconstant");
    let m = group.n() / d;
    assert_eq!(d * m, group.n(), "block size must divide n");
    let x = jm_block(f, m, field);
    let c = group.centralizer(&x);
    let q = group.q();
    let qd1 = q.pow(d as u32) - 1;
    let normalizer_expected = if m == 1 {
        d as u64 * qd1
    } else {
        d as u64 * qd1 * qd1 * q.pow((2 * d * m - 3 * d) as u32)
    };
    BlockOrders {
        d,
        m,
        centralizer: c.order(),
        centralizer_expected: qd1 * q.pow((d * (m - 1)) as u32),
        normalizer: group.normalizer_of_set(&c),
        normalizer_expected,
        abelian: group.is_abelian(&c),
    }
}

/// The unipotent `4 x 4` matrix over `F_2` whose centralizer holds no cyclic element.
pub fn acyclic_centralizer_matrix() -> FqMatrix {
    FqMatrix::from_rows(&[vec![1, 0, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 1, 1], vec![0, 0, 0, 1]])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcyclicCentralizerReport {
    pub centralizer_order: usize,
    pub cyclic_members: usize,
    pub max_rank_minus_identity: usize,
    pub scan_agrees: bool,
}

/// Centralizer of [`acyclic_centralizer_matrix`] in `GL_4(2)`.
pub fn acyclic_centralizer_check(budget: &Budget) -> Result<AcyclicCentralizerReport, OracleError> {
    let group = enumerate_gl(4, 2, budget)?;
    let f = group.field();
    let x = acyclic_centralizer_matrix();
    let c = group.centralizer(&x);
    let via_commutant = group.commutant_centralizer(&x);
    let id = FqMatrix::identity(4);
    let members = c.members.iter().map(|&i| group.element(i as usize));
    Ok(AcyclicCentralizerReport {
        centralizer_order: c.order(),
        cyclic_members: members.clone().filter(|m| m.is_cyclic(f)).count(),
        max_rank_minus_identity: members.map(|m| m.sub(&id, f).rank(f)).max().unwrap_or(0),
        scan_agrees: via_commutant == c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::field::irreducible_polys;

    fn small() -> Budget {
        Budget::default()
    }

    #[test]
    fn group_orders_match_formula() {
        for (n, q, order) in [(1, 5, 4), (2, 2, 6), (2, 3, 48), (2, 4, 180), (3, 2, 168)] {
            let g = enumerate_gl(n, q, &small()).unwrap();
            assert_eq!(g.order(), order);
            assert_eq!(group_order(n, q), order as u64);
            assert!(g.elements().windows(2).all(|w| w[0].encode(q as usize) < w[1].encode(q as usize)));
        }
    }

    #[test]
    fn budget_refusal_states_requirement() {
        let tight = Budget {
            elements: 100,
            steps: 1_000_000_000,
        };
        match enumerate_gl(2, 5, &tight) {
            Err(OracleError::BudgetExceeded { required, .. }) => assert_eq!(required, 480),
            other => panic!("expected refusal, got {:?}", other.map(|g| g.order())),
        }
    }

    #[test]
    fn centers_are_scalars() {
        for (n, q, z) in [(2, 2, 1), (2, 3, 2), (2, 4, 3), (3, 3, 2)] {
            assert_eq!(enumerate_gl(n, q, &small()).unwrap().center().len(), z);
        }
    }

    #[test]
    fn small_proportions() {
        let g = enumerate_gl(2, 2, &small()).unwrap();
        let c = cyclic_proportion(&g);
        assert_eq!(c.exact, BigRational::new(5.into(), 6.into()));
        assert!(c.holds && c.two_sided);
    }

    #[test]
    fn commutant_agrees_with_scan() {
        let g = enumerate_gl(2, 3, &small()).unwrap();
        for i in 0..g.order() {
            let m = g.element(i);
            assert_eq!(g.commutant_centralizer(m), g.centralizer(m));
        }
    }

    #[test]
    fn two_dim_counts() {
        for (q, expect) in [(3, 13), (4, 21)] {
            let g = enumerate_gl(2, q, &small()).unwrap();
            let r = count_cyclic_centralizers(&g, &small()).unwrap();
            assert_eq!(r.count, expect);
            assert!(r.partition_ok && r.abelian_small && r.lower_bound_ok);
            assert!(r.sets.iter().all(|s| g.is_closed(s)));
        }
    }

    #[test]
    fn regular_unipotent_orders() {
        for (n, q) in [(2, 2), (2, 3), (3, 2)] {
            let g = enumerate_gl(n, q, &small()).unwrap();
            let t1 = FqPoly::linear(g.field(), 1);
            let r = block_orders(&g, &t1);
            assert!(r.matches(), "{r:?}");
        }
    }

    #[test]
    fn singer_normalizer() {
        let g = enumerate_gl(2, 3, &small()).unwrap();
        let f = &irreducible_polys(g.field(), 2)[0];
        let r = block_orders(&g, f);
        assert_eq!(r.normalizer, 16);
        assert!(r.matches(), "{r:?}");
    }

    #[test]
    fn acyclic_centralizer_has_no_cyclic_members() {
        let r = acyclic_centralizer_check(&small()).unwrap();
        assert_eq!(r.centralizer_order, 16);
        assert_eq!(r.cyclic_members, 0);
        assert!(r.max_rank_minus_identity <= 2);
        assert!(r.scan_agrees);
    }
}
