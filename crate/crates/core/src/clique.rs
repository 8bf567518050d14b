//! Non-commuting graphs of small `GL_n(q)` and exact maximum cliques.
//!
//! Vertices are the non-central elements; two are adjacent when they do not
//! commute. The solver is a bitset branch and bound with greedy colouring
//! bounds, started from a known clique.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::census::{omega_closed, CensusError};
use crate::oracle::{count_cyclic_centralizers, Budget, CyclicCentralizers, GlGroup, OracleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliqueError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error("seed is not a clique: elements {0} and {1} commute")]
    InvalidSeed(usize, usize),
    #[error("element {0} is central or not in the group")]
    NotAVertex(usize),
}

/// Step and wall-clock limits for one search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub steps: u64,
    pub time: Duration,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            steps: 1_000_000_000,
            time: Duration::from_secs(60),
        }
    }
}

type Bits = Vec<u64>;

fn bit_set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn bit_clear(b: &mut Bits, i: usize) {
    b[i / 64] &= !(1 << (i % 64));
}

fn bit_get(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn bits_iter(b: &Bits) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(w, &word)| {
        let mut x = word;
        std::iter::from_fn(move || {
            if x == 0 {
                return None;
            }
            let t = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(w * 64 + t)
        })
    })
}

fn first_bit(b: &Bits) -> Option<usize> {
    b.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}

fn bits_and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bits_empty(b: &Bits) -> bool {
    b.iter().all(|&w| w == 0)
}

/// Non-commuting graph on the non-central elements of a group.
pub struct NonComGraph {
    /// Group index of each vertex, in solver order.
    vertices: Vec<usize>,
    adj: Vec<Bits>,
    center: Vec<usize>,
}

impl NonComGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Group indices of the vertices, in solver order.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn center(&self) -> &[usize] {
        &self.center
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        bit_get(&self.adj[u], v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    fn position_of(&self, elem: usize) -> Option<usize> {
        self.vertices.iter().position(|&e| e == elem)
    }
}

/// Builds the graph with vertices in degeneracy order: repeatedly removing
/// a vertex of least remaining degree, the last removed comes first.
pub fn build_graph(group: &GlGroup) -> NonComGraph {
    let center = group.center();
    let elems: Vec<usize> = (0..group.order()).filter(|i| center.binary_search(i).is_err()).collect();
    let k = elems.len();
    let words = k.div_ceil(64);
    let rows: Vec<Bits> = (0..k)
        .into_par_iter()
        .map(|a| {
            let mut row = vec![0u64; words];
            for b in 0..k {
                if a != b && !group.commute(elems[a], elems[b]) {
                    bit_set(&mut row, b);
                }
            }
            row
        })
        .collect();
    let mut degree: Vec<usize> = rows.iter().map(|r| r.iter().map(|w| w.count_ones() as usize).sum()).collect();
    let mut removed = vec![false; k];
    let mut removal = Vec::with_capacity(k);
    for _ in 0..k {
        let v = (0..k).filter(|&v| !removed[v]).min_by_key(|&v| (degree[v], v)).unwrap();
        removed[v] = true;
        removal.push(v);
        for u in bits_iter(&rows[v]) {
            if !removed[u] {
                degree[u] -= 1;
            }
        }
    }
    removal.reverse();
    let mut pos = vec![0usize; k];
    for (p, &v) in removal.iter().enumerate() {
        pos[v] = p;
    }
    let mut adj = vec![vec![0u64; words]; k];
    for (v, row) in rows.iter().enumerate() {
        for u in bits_iter(row) {
            bit_set(&mut adj[pos[v]], pos[u]);
        }
    }
    NonComGraph {
        vertices: removal.iter().map(|&v| elems[v]).collect(),
        adj,
        center,
    }
}

/// One cyclic element per distinct cyclic centralizer, checked pairwise non-commuting.
pub fn seed_clique(group: &GlGroup, counts: &CyclicCentralizers) -> Result<Vec<usize>, CliqueError> {
    let seed = counts.representatives.clone();
    verify_elements(group, &seed).map_err(|(a, b)| CliqueError::InvalidSeed(a, b))?;
    Ok(seed)
}

/// The size of the abelian cover, refined at `q = n`; see [`omega_closed`].
pub fn covering_upper_bound(n: usize, q: u64) -> Result<u64, CliqueError> {
    let v = omega_closed(n, q)?;
    Ok(u64::try_from(v).expect("cover size fits in u64"))
}

fn verify_elements(group: &GlGroup, elems: &[usize]) -> Result<(), (usize, usize)> {
    let bad = (0..elems.len()).into_par_iter().find_map_first(|a| {
        (a + 1..elems.len())
            .find(|&b| group.commute(elems[a], elems[b]))
            .map(|b| (elems[a], elems[b]))
    });
    match bad {
        Some(p) => Err(p),
        None => Ok(()),
    }
}

/// Pairwise non-commutation of group elements, checked by matrix products.
pub fn verify_clique(group: &GlGroup, witness: &[usize]) -> bool {
    let mut sorted = witness.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len() == witness.len() && verify_elements(group, witness).is_ok()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueResult {
    pub size: usize,
    /// Group indices, sorted.
    pub witness: Vec<usize>,
    pub optimal: bool,
    pub upper_bound_used: Option<u64>,
    pub seed_size: usize,
    pub steps: u64,
}

struct Search<'a> {
    graph: &'a NonComGraph,
    best: Vec<usize>,
    stack: Vec<usize>,
    steps: u64,
    budget: SearchBudget,
    start: Instant,
    target: usize,
    exhausted: bool,
}

impl Search<'_> {
    fn out_of_budget(&mut self) -> bool {
        if self.steps >= self.budget.steps || (self.steps.is_multiple_of(1024) && self.start.elapsed() >= self.budget.time) {
            self.exhausted = true;
        }
        self.exhausted
    }

    /// Greedy sequential colouring in vertex order; vertices with their colour
    /// number, ascending.
    fn colour(&self, p: &Bits) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut uncoloured = p.clone();
        let mut colour = 0;
        while !bits_empty(&uncoloured) {
            colour += 1;
            let mut avail = uncoloured.clone();
            while let Some(v) = first_bit(&avail) {
                bit_clear(&mut uncoloured, v);
                bit_clear(&mut avail, v);
                for (a, n) in avail.iter_mut().zip(&self.graph.adj[v]) {
                    *a &= !n;
                }
                out.push((v, colour));
            }
        }
        out
    }

    fn expand(&mut self, mut p: Bits) {
        self.steps += 1;
        if self.out_of_budget() {
            return;
        }
        let order = self.colour(&p);
        for &(v, c) in order.iter().rev() {
            if self.stack.len() + c <= self.best.len() || self.best.len() >= self.target || self.exhausted {
                return;
            }
            self.stack.push(v);
            let next = bits_and(&p, &self.graph.adj[v]);
            if bits_empty(&next) {
                if self.stack.len() > self.best.len() {
                    self.best = self.stack.clone();
                }
            } else {
                self.expand(next);
            }
            self.stack.pop();
            bit_clear(&mut p, v);
        }
    }
}

/// Maximum clique of the non-commuting graph, in group indices.
///
/// `seed` (group indices) must be pairwise non-commuting and starts as the
/// incumbent. When it already reaches `upper` the search is skipped. A
/// group with no edges has clique number 1.
pub fn max_clique(
    graph: &NonComGraph,
    group: &GlGroup,
    seed: &[usize],
    upper: Option<u64>,
    budget: SearchBudget,
) -> Result<CliqueResult, CliqueError> {
    verify_elements(group, seed).map_err(|(a, b)| CliqueError::InvalidSeed(a, b))?;
    let finish = |mut witness: Vec<usize>, optimal: bool, steps: u64| {
        witness.sort_unstable();
        CliqueResult {
            size: witness.len(),
            witness,
            optimal,
            upper_bound_used: upper,
            seed_size: seed.len(),
            steps,
        }
    };
    if let Some(u) = upper {
        if seed.len() as u64 >= u {
            return Ok(finish(seed.to_vec(), true, 0));
        }
    }
    if graph.edge_count() == 0 {
        let one = seed.first().copied().or_else(|| graph.center().first().copied());
        return Ok(finish(one.into_iter().collect(), true, 0));
    }
    let seed_pos = seed
        .iter()
        .map(|&e| graph.position_of(e).ok_or(CliqueError::NotAVertex(e)))
        .collect::<Result<Vec<_>, _>>()?;
    let k = graph.vertex_count();
    let mut all = vec![0u64; k.div_ceil(64)];
    for v in 0..k {
        bit_set(&mut all, v);
    }
    let mut search = Search {
        graph,
        best: seed_pos,
        stack: Vec::new(),
        steps: 0,
        budget,
        start: Instant::now(),
        target: upper.map_or(usize::MAX, |u| u as usize),
        exhausted: false,
    };
    search.expand(all);
    let optimal = !search.exhausted;
    let witness = search.best.iter().map(|&v| graph.vertices[v]).collect();
    Ok(finish(witness, optimal, search.steps))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaReport {
    pub n: usize,
    pub q: u64,
    pub omega: usize,
    pub optimal: bool,
    pub seed_size: usize,
    pub upper_bound: Option<u64>,
    pub vertices: Option<usize>,
    pub steps: u64,
    pub witness: Vec<usize>,
}

/// Clique number of `GL_n(q)`: seed from the cyclic centralizers, cover
/// bound where a closed form exists, and an exact search otherwise.
pub fn clique_omega(
    group: &GlGroup,
    oracle_budget: &Budget,
    search: SearchBudget,
) -> Result<OmegaReport, CliqueError> {
    let (n, q) = (group.n(), group.q());
    let counts = count_cyclic_centralizers(group, oracle_budget)?;
    let seed = seed_clique(group, &counts)?;
    let upper = covering_upper_bound(n, q).ok();
    let (result, vertices) = if upper.is_some_and(|u| seed.len() as u64 >= u) {
        (max_clique(&NonComGraph::empty(), group, &seed, upper, search)?, None)
    } else {
        let graph = build_graph(group);
        let r = max_clique(&graph, group, &seed, upper, search)?;
        (r, Some(graph.vertex_count()))
    };
    Ok(OmegaReport {
        n,
        q,
        omega: result.size,
        optimal: result.optimal,
        seed_size: seed.len(),
        upper_bound: upper,
        vertices,
        steps: result.steps,
        witness: result.witness,
    })
}

impl NonComGraph {
    fn empty() -> Self {
        Self {
            vertices: Vec::new(),
            adj: Vec::new(),
            center: Vec::new(),
        }
    }
}
