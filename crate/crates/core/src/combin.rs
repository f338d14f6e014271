//! Recovery hypergraphs and matching-theoretic checks.
//!
//! Servers are vertices and recovery sets are hyperedges labelled by object.
//! A size-one recovery set would be a self-loop, so it is padded with dummy
//! vertices attached to that systematic column.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::codebook::StorageScheme;
use crate::lp::{LinearProgram, LpError, LpOutcome, Sense};
use crate::rational::{self, Rational};
use crate::recovery::RecoveryCatalog;
use crate::region::Allocation;

/// Largest vertex count for exact matching and vertex-cover search.
pub const MAX_SEARCH_VERTICES: usize = 24;
/// Default node budget for integral allocation search.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CombinError {
    #[error("exact search supports at most {MAX_SEARCH_VERTICES} vertices, graph has {0}")]
    TooManyVertices(usize),
    #[error("graph has hyperedges of size {0}; bipartiteness needs plain edges")]
    NotAGraph(usize),
    #[error("search exceeded {0} nodes")]
    BudgetExceeded(u64),
    #[error("capacity and demand must be non-negative integers")]
    NonIntegral,
    #[error("expected {expected} demand entries, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("t must be at least 1")]
    ZeroT,
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphMode {
    /// Recovery sets of at most two servers, one dummy per systematic column.
    PairsOnly,
    /// Every recovery set; `k - 1` dummies per systematic column for MDS schemes.
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperedge {
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    pub label: usize,
}

/// Servers are vertices `0..n`; dummy vertices follow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveryHypergraph {
    pub servers: usize,
    /// For each dummy vertex `n + d`, the systematic server it pads.
    pub dummy_of: Vec<usize>,
    pub edges: Vec<Hyperedge>,
    pub mode: GraphMode,
}

impl RecoveryHypergraph {
    pub fn vertex_count(&self) -> usize {
        self.servers + self.dummy_of.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.vertices.contains(&v)).count()
    }

    /// Merges hyperedges with identical vertex sets, keeping the first label.
    pub fn collapsed(&self) -> RecoveryHypergraph {
        let mut edges: Vec<Hyperedge> = Vec::new();
        for e in &self.edges {
            if !edges.iter().any(|x| x.vertices == e.vertices) {
                edges.push(e.clone());
            }
        }
        RecoveryHypergraph { edges, ..self.clone() }
    }
}

pub fn build_graph(scheme: &StorageScheme, cat: &RecoveryCatalog, mode: GraphMode) -> RecoveryHypergraph {
    let n = cat.n();
    let pad = match mode {
        GraphMode::PairsOnly => 1,
        GraphMode::Full if scheme.is_mds() => scheme.k().saturating_sub(1).max(1),
        GraphMode::Full => 1,
    };
    let mut dummy_of = Vec::new();
    let mut first_dummy = vec![None; n];
    for j in 0..n {
        if scheme.systematic_object(j).is_some() {
            first_dummy[j] = Some(n + dummy_of.len());
            dummy_of.extend(core::iter::repeat_n(j, pad));
        }
    }
    let mut edges = Vec::new();
    for i in 0..cat.k() {
        for set in cat.sets(i) {
            if mode == GraphMode::PairsOnly && set.size() > 2 {
                continue;
            }
            let mut vertices = set.servers.clone();
            if let [s] = set.servers[..] {
                let d = first_dummy[s].expect("size-one recovery set is a systematic column");
                vertices.extend(d..d + pad);
            }
            edges.push(Hyperedge { vertices, label: i });
        }
    }
    RecoveryHypergraph { servers: n, dummy_of, edges, mode }
}

/// LP over edge weights with every vertex sum at most `cap`.
fn matching_lp(g: &RecoveryHypergraph, cap: Rational) -> LinearProgram {
    let mut lp = LinearProgram::new(g.edges.len());
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); g.vertex_count()];
    for (e, edge) in g.edges.iter().enumerate() {
        for &v in &edge.vertices {
            rows[v].push((e, Rational::from_integer(1)));
        }
    }
    for row in rows.into_iter().filter(|r| !r.is_empty()) {
        lp.add(row, Sense::Le, cap);
    }
    lp
}

pub fn fractional_matching_number(g: &RecoveryHypergraph) -> Result<Rational, CombinError> {
    let mut lp = matching_lp(g, Rational::from_integer(1));
    for e in 0..g.edges.len() {
        lp.set_objective(e, Rational::from_integer(1));
    }
    match lp.solve()? {
        LpOutcome::Optimal { value, .. } => Ok(value),
        _ => unreachable!("matching LP is feasible and bounded"),
    }
}

fn check_size(g: &RecoveryHypergraph) -> Result<(), CombinError> {
    if g.vertex_count() > MAX_SEARCH_VERTICES {
        return Err(CombinError::TooManyVertices(g.vertex_count()));
    }
    Ok(())
}

fn masks(g: &RecoveryHypergraph) -> Vec<u32> {
    g.edges.iter().map(|e| e.vertices.iter().fold(0u32, |m, &v| m | (1 << v))).collect()
}

/// Largest set of pairwise disjoint hyperedges.
pub fn matching_number(g: &RecoveryHypergraph) -> Result<usize, CombinError> {
    check_size(g)?;
    let mut edges = masks(g);
    edges.sort_unstable();
    edges.dedup();
    fn go(edges: &[u32], used: u32, count: usize, best: &mut usize) {
        let rest: Vec<u32> = edges.iter().copied().filter(|e| e & used == 0).collect();
        if count + rest.len() <= *best {
            return;
        }
        let free = (!used).count_ones() as usize;
        let smallest = rest.iter().map(|e| e.count_ones() as usize).min().unwrap_or(1).max(1);
        if count + free / smallest <= *best {
            return;
        }
        let Some((&first, tail)) = rest.split_first() else {
            *best = (*best).max(count);
            return;
        };
        go(tail, used | first, count + 1, best);
        go(tail, used, count, best);
    }
    let mut best = 0;
    go(&edges, 0, 0, &mut best);
    Ok(best)
}

/// Fewest vertices meeting every hyperedge.
pub fn vertex_cover_number(g: &RecoveryHypergraph) -> Result<usize, CombinError> {
    check_size(g)?;
    let edges = masks(g);
    fn go(edges: &[u32], chosen: u32, best: &mut usize) {
        let size = chosen.count_ones() as usize;
        if size >= *best {
            return;
        }
        let Some(&open) = edges.iter().find(|&&e| e & chosen == 0) else {
            *best = size;
            return;
        };
        let mut bits = open;
        while bits != 0 {
            let v = bits.trailing_zeros();
            go(edges, chosen | (1 << v), best);
            bits &= bits - 1;
        }
    }
    let mut best = g.vertex_count();
    go(&edges, 0, &mut best);
    Ok(best)
}

/// Two-colourability; only defined when every edge has two vertices.
pub fn is_bipartite(g: &RecoveryHypergraph) -> Result<bool, CombinError> {
    if let Some(e) = g.edges.iter().find(|e| e.vertices.len() != 2) {
        return Err(CombinError::NotAGraph(e.vertices.len()));
    }
    let n = g.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for e in &g.edges {
        adj[e.vertices[0]].push(e.vertices[1]);
        adj[e.vertices[1]].push(e.vertices[0]);
    }
    let mut color: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            let c = color[u].unwrap();
            for &w in &adj[u] {
                match color[w] {
                    None => {
                        color[w] = Some(!c);
                        stack.push(w);
                    }
                    Some(x) if x == c => return Ok(false),
                    _ => {}
                }
            }
        }
    }
    Ok(true)
}

/// Edge weights with vertex sums at most `mu` and label `i` weights summing to
/// `λ_i`, if any exist.
pub fn achievable_via_matching(g: &RecoveryHypergraph, mu: Rational, demand: &[Rational]) -> Result<Option<Vec<Rational>>, CombinError> {
    let mut lp = matching_lp(g, mu);
    for (i, d) in demand.iter().enumerate() {
        let terms = g.edges.iter().enumerate().filter(|(_, e)| e.label == i).map(|(j, _)| (j, Rational::from_integer(1))).collect();
        lp.add(terms, Sense::Eq, *d);
    }
    if g.edges.iter().any(|e| e.label >= demand.len()) {
        return Err(CombinError::Dimension { expected: g.edges.iter().map(|e| e.label + 1).max().unwrap_or(0), got: demand.len() });
    }
    Ok(match lp.solve()? {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    })
}

fn as_count(x: &Rational) -> Result<u64, CombinError> {
    if x.is_negative() || !rational::is_integer(x) {
        return Err(CombinError::NonIntegral);
    }
    u64::try_from(*x.numer()).map_err(|_| CombinError::NonIntegral)
}

struct Search<'a> {
    cat: &'a RecoveryCatalog,
    capacity: Vec<u64>,
    /// One entry per requested unit: the object it belongs to.
    units: Vec<usize>,
    chosen: Vec<usize>,
    min_size: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn run(&mut self, u: usize) -> Result<bool, CombinError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(CombinError::BudgetExceeded(self.budget));
        }
        if u == self.units.len() {
            return Ok(true);
        }
        let need: u64 = self.units[u..].iter().map(|&i| self.min_size[i] as u64).sum();
        if need > self.capacity.iter().sum::<u64>() {
            return Ok(false);
        }
        let i = self.units[u];
        // Units of one object take nondecreasing set indices.
        let start = if u > 0 && self.units[u - 1] == i { self.chosen[u - 1] } else { 0 };
        for j in start..self.cat.count(i) {
            let set = &self.cat.sets(i)[j];
            if set.servers.iter().all(|&s| self.capacity[s] > 0) {
                set.servers.iter().for_each(|&s| self.capacity[s] -= 1);
                self.chosen.push(j);
                if self.run(u + 1)? {
                    return Ok(true);
                }
                self.chosen.pop();
                set.servers.iter().for_each(|&s| self.capacity[s] += 1);
            }
        }
        Ok(false)
    }
}

/// An all-integer valid allocation for integral `mu` and demand, by
/// depth-first search over multisets of recovery sets per object.
pub fn integral_achievable_with(cat: &RecoveryCatalog, mu: Rational, demand: &[Rational], budget: u64) -> Result<Option<Allocation>, CombinError> {
    if demand.len() != cat.k() {
        return Err(CombinError::Dimension { expected: cat.k(), got: demand.len() });
    }
    let cap = as_count(&mu)?;
    let mut units = Vec::new();
    for (i, d) in demand.iter().enumerate() {
        units.extend(core::iter::repeat_n(i, as_count(d)? as usize));
    }
    let min_size = (0..cat.k()).map(|i| cat.sets(i).iter().map(|s| s.size()).min().unwrap_or(usize::MAX / 64)).collect();
    let mut search = Search { cat, capacity: vec![cap; cat.n()], units, chosen: Vec::new(), min_size, nodes: 0, budget };
    if !search.run(0)? {
        return Ok(None);
    }
    let mut alloc = Allocation::zeros(cat);
    for (&i, &j) in search.units.iter().zip(&search.chosen) {
        alloc.rates[i][j] += Rational::from_integer(1);
    }
    Ok(Some(alloc))
}

pub fn integral_achievable(cat: &RecoveryCatalog, mu: Rational, demand: &[Rational]) -> Result<Option<Allocation>, CombinError> {
    integral_achievable_with(cat, mu, demand, DEFAULT_NODE_BUDGET)
}

fn compositions(total: usize, parts: usize, prefix: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> Result<bool, CombinError>) -> Result<bool, CombinError> {
    if prefix.len() + 1 == parts {
        let used: usize = prefix.iter().sum();
        prefix.push(total - used);
        let ok = f(prefix)?;
        prefix.pop();
        return Ok(ok);
    }
    let used: usize = prefix.iter().sum();
    for x in (0..=total - used).rev() {
        prefix.push(x);
        let ok = compositions(total, parts, prefix, f)?;
        prefix.pop();
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every demand multiset of `t` requests has an integral allocation.
pub fn is_batch_code(cat: &RecoveryCatalog, mu: Rational, t: usize) -> Result<bool, CombinError> {
    if t == 0 {
        return Err(CombinError::ZeroT);
    }
    if cat.k() == 0 {
        return Ok(true);
    }
    compositions(t, cat.k(), &mut Vec::new(), &mut |parts| {
        let d: Vec<Rational> = parts.iter().map(|&x| Rational::from_integer(x as i128)).collect();
        Ok(integral_achievable(cat, mu, &d)?.is_some())
    })
}

/// Every single object can be requested `t` times at once.
pub fn is_pir_code(cat: &RecoveryCatalog, mu: Rational, t: usize) -> Result<bool, CombinError> {
    if t == 0 {
        return Err(CombinError::ZeroT);
    }
    for i in 0..cat.k() {
        let mut d = vec![Rational::zero(); cat.k()];
        d[i] = Rational::from_integer(t as i128);
        if integral_achievable(cat, mu, &d)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::{make_mds, make_replication, make_simplex};
    use crate::galois::FieldSpec;
    use crate::rational::int;
    use crate::recovery::enumerate_recovery_sets;

    fn simplex3() -> (StorageScheme, RecoveryCatalog) {
        let s = make_simplex(3, int(1)).unwrap();
        let c = enumerate_recovery_sets(&s).unwrap();
        (s, c)
    }

    #[test]
    fn simplex_pairs_graph() {
        let (s, c) = simplex3();
        let g = build_graph(&s, &c, GraphMode::PairsOnly);
        assert_eq!(g.vertex_count(), 10);
        assert!((0..7).all(|v| g.degree(v) == 3));
        assert!(is_bipartite(&g).unwrap());
        assert_eq!(vertex_cover_number(&g).unwrap(), 4);
        assert_eq!(matching_number(&g).unwrap(), 4);
        assert_eq!(fractional_matching_number(&g).unwrap(), int(4));
    }

    #[test]
    fn mds_graphs() {
        let s = make_mds(4, 2, &FieldSpec::prime(3).unwrap(), true, int(1)).unwrap();
        let c = enumerate_recovery_sets(&s).unwrap();
        assert_eq!(build_graph(&s, &c, GraphMode::Full).vertex_count(), 6);
        let s = make_mds(8, 2, &FieldSpec::prime(11).unwrap(), false, int(1)).unwrap();
        let c = enumerate_recovery_sets(&s).unwrap();
        let g = build_graph(&s, &c, GraphMode::Full);
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edges.len(), 56);
        assert_eq!(g.collapsed().edges.len(), 28);
        assert_eq!(fractional_matching_number(&g).unwrap(), int(4));
    }

    #[test]
    fn single_edge() {
        let g = RecoveryHypergraph { servers: 2, dummy_of: vec![], edges: vec![Hyperedge { vertices: vec![0, 1], label: 0 }], mode: GraphMode::PairsOnly };
        assert_eq!(matching_number(&g).unwrap(), 1);
        assert_eq!(vertex_cover_number(&g).unwrap(), 1);
        assert_eq!(fractional_matching_number(&g).unwrap(), int(1));
    }

    #[test]
    fn matching_demands() {
        let (s, c) = simplex3();
        let g = build_graph(&s, &c, GraphMode::PairsOnly);
        assert!(achievable_via_matching(&g, int(1), &[int(1), int(3), int(0)]).unwrap().is_some());
        assert!(achievable_via_matching(&g, int(1), &[int(0); 3]).unwrap().is_some());
        assert!(achievable_via_matching(&g, int(1), &[int(2), int(2), int(1)]).unwrap().is_none());
    }

    #[test]
    fn integral_simplex() {
        let (_, c) = simplex3();
        let a = integral_achievable(&c, int(1), &[int(1), int(3), int(0)]).unwrap().unwrap();
        a.validate(&c, &[int(1), int(3), int(0)], int(1)).unwrap();
        assert!(integral_achievable(&c, int(1), &[int(4), int(1), int(0)]).unwrap().is_none());
        assert!(is_batch_code(&c, int(1), 4).unwrap());
        assert!(!is_batch_code(&c, int(1), 5).unwrap());
        assert!(is_pir_code(&c, int(1), 4).unwrap());
    }

    #[test]
    fn replication_batch() {
        let c = enumerate_recovery_sets(&make_replication(2, &[2, 2], int(1)).unwrap()).unwrap();
        assert!(is_batch_code(&c, int(1), 2).unwrap());
        assert!(!is_batch_code(&c, int(1), 3).unwrap());
    }
}
