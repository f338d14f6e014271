//! The service rate region as an exact linear program.
//!
//! Variables are the rates `λ_{i,j}` sent to the `j`-th recovery set of object
//! `i`. Each object's rates sum to its demand and each server carries at most
//! `mu`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Deref;

use num_traits::{Signed, Zero};

use crate::codebook::StorageScheme;
use crate::hull::{self, Point};
use crate::lp::{LinearProgram, LpError, LpOutcome, Sense};
use crate::rational::{self, Rational};
use crate::recovery::{self, RecoveryCatalog, RecoveryError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegionError {
    #[error("expected {expected} entries, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("demand entries must be non-negative")]
    NegativeDemand,
    #[error("the fixed demands are not achievable")]
    Infeasible,
    #[error("polytope extraction supports at most 3 objects, got {0}")]
    TooManyObjects(usize),
    #[error("server capacity must be positive")]
    NonPositiveCapacity,
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Recovery(#[from] RecoveryError),
}

/// Requested rate per object.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DemandVector(Vec<Rational>);

impl DemandVector {
    pub fn new(rates: Vec<Rational>) -> Result<Self, RegionError> {
        if rates.iter().any(Signed::is_negative) {
            return Err(RegionError::NegativeDemand);
        }
        Ok(DemandVector(rates))
    }

    pub fn zero(k: usize) -> Self {
        DemandVector(vec![Rational::zero(); k])
    }

    pub fn total(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |a, b| a + b)
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }
}

impl Deref for DemandVector {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

/// Ways an allocation can violate the model constraints.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AllocationError {
    #[error("allocation shape does not match the catalog")]
    Shape,
    #[error("negative rate for object {object}, set {set}")]
    Negative { object: usize, set: usize },
    #[error("object {object} receives {got} but demands {want}")]
    Demand { object: usize, got: Rational, want: Rational },
    #[error("server {server} carries {load}, above capacity {mu}")]
    Overload { server: usize, load: Rational, mu: Rational },
}

/// Rates `λ_{i,j}` indexed by object, then by position in the catalog's list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Allocation {
    pub rates: Vec<Vec<Rational>>,
}

impl Allocation {
    pub fn zeros(cat: &RecoveryCatalog) -> Self {
        Allocation { rates: (0..cat.k()).map(|i| vec![Rational::zero(); cat.count(i)]).collect() }
    }

    pub fn rate(&self, object: usize, set: usize) -> Rational {
        self.rates[object][set]
    }

    /// Total rate served per object.
    pub fn served(&self) -> Vec<Rational> {
        self.rates.iter().map(|r| r.iter().fold(Rational::zero(), |a, b| a + b)).collect()
    }

    pub fn server_loads(&self, cat: &RecoveryCatalog) -> Vec<Rational> {
        let mut loads = vec![Rational::zero(); cat.n()];
        for (i, row) in self.rates.iter().enumerate() {
            for (set, x) in cat.sets(i).iter().zip(row) {
                for &s in &set.servers {
                    loads[s] += x;
                }
            }
        }
        loads
    }

    /// `Σ |R_{i,j}| λ_{i,j}`: symbols downloaded per unit time.
    pub fn transfer(&self, cat: &RecoveryCatalog) -> Rational {
        let mut total = Rational::zero();
        for (i, row) in self.rates.iter().enumerate() {
            for (set, x) in cat.sets(i).iter().zip(row) {
                total += *x * Rational::from_integer(set.size() as i128);
            }
        }
        total
    }

    /// Exact check of the demand, capacity and sign constraints.
    pub fn validate(&self, cat: &RecoveryCatalog, demand: &[Rational], mu: Rational) -> Result<(), AllocationError> {
        if self.rates.len() != cat.k() || demand.len() != cat.k() {
            return Err(AllocationError::Shape);
        }
        for (i, row) in self.rates.iter().enumerate() {
            if row.len() != cat.count(i) {
                return Err(AllocationError::Shape);
            }
            if let Some(j) = row.iter().position(Signed::is_negative) {
                return Err(AllocationError::Negative { object: i, set: j });
            }
        }
        for (i, (got, want)) in self.served().into_iter().zip(demand).enumerate() {
            if got != *want {
                return Err(AllocationError::Demand { object: i, got, want: *want });
            }
        }
        for (s, load) in self.server_loads(cat).into_iter().enumerate() {
            if load > mu {
                return Err(AllocationError::Overload { server: s, load, mu });
            }
        }
        Ok(())
    }
}

/// `a . λ <= b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfSpace {
    pub a: Vec<Rational>,
    pub b: Rational,
}

impl HalfSpace {
    pub fn contains(&self, x: &[Rational]) -> bool {
        dot(&self.a, x) <= self.b
    }

    pub fn is_tight(&self, x: &[Rational]) -> bool {
        dot(&self.a, x) == self.b
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).fold(Rational::zero(), |s, t| s + t)
}

/// A region described by half-spaces and, in dimension at most 3, vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionPolytope {
    pub dim: usize,
    /// Sorted lexicographically.
    pub halfspaces: Vec<HalfSpace>,
    /// Sorted lexicographically; `None` when not computed.
    pub vertices: Option<Vec<Point>>,
    /// True for the achievable region, false for an outer bound.
    pub exact: bool,
}

impl RegionPolytope {
    /// Builds a polytope from half-spaces, dropping redundant ones when
    /// vertices can be enumerated (`dim <= 3`).
    pub fn from_halfspaces(dim: usize, halfspaces: Vec<HalfSpace>, exact: bool) -> Self {
        let normalized: Vec<HalfSpace> = halfspaces
            .iter()
            .filter(|h| h.a.iter().any(|x| !x.is_zero()))
            .map(|h| hull::normalized(&h.a, h.b))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if dim == 0 || dim > 3 {
            return RegionPolytope { dim, halfspaces: normalized, vertices: None, exact };
        }
        let vertices = hull::vertices_of(&normalized, dim);
        let facets = hull::facets_only(&normalized, &vertices, dim);
        RegionPolytope { dim, halfspaces: facets, vertices: Some(vertices), exact }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.halfspaces.iter().all(|h| h.contains(x))
    }

    /// Exact area, for `dim == 2`.
    pub fn area(&self) -> Option<Rational> {
        match (&self.vertices, self.dim) {
            (Some(v), 2) => Some(hull::polygon_area(v)),
            _ => None,
        }
    }

    /// The face `λ_i = 0` for every `i` outside `keep`, in the coordinates of `keep`.
    pub fn slice_zero(&self, keep: &[usize]) -> RegionPolytope {
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| HalfSpace { a: keep.iter().map(|&i| h.a[i]).collect(), b: h.b })
            .collect();
        RegionPolytope::from_halfspaces(keep.len(), halfspaces, self.exact)
    }

    /// `max c . λ` over the polytope (within `λ >= 0`); `None` if unbounded,
    /// empty, or the LP overflows.
    pub fn support(&self, c: &[Rational]) -> Option<Rational> {
        if let Some(v) = &self.vertices {
            return v.iter().map(|v| dot(c, v)).max();
        }
        let mut lp = LinearProgram::new(self.dim);
        for (i, ci) in c.iter().enumerate() {
            lp.set_objective(i, *ci);
        }
        for h in &self.halfspaces {
            lp.add(h.a.iter().copied().enumerate().filter(|(_, x)| !x.is_zero()).collect(), Sense::Le, h.b);
        }
        match lp.solve() {
            Ok(LpOutcome::Optimal { value, .. }) => Some(value),
            _ => None,
        }
    }
}

/// Optimal point of a support query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportPoint {
    pub value: Rational,
    pub demand: Vec<Rational>,
    pub allocation: Allocation,
}

/// A recovery catalog together with the per-server capacity.
#[derive(Clone, Debug)]
pub struct ServiceRegion {
    catalog: RecoveryCatalog,
    mu: Rational,
}

impl ServiceRegion {
    pub fn new(catalog: RecoveryCatalog, mu: Rational) -> Result<Self, RegionError> {
        if !mu.is_positive() {
            return Err(RegionError::NonPositiveCapacity);
        }
        Ok(ServiceRegion { catalog, mu })
    }

    /// Enumerates the scheme's recovery sets.
    pub fn of_scheme(scheme: &StorageScheme) -> Result<Self, RegionError> {
        let cat = recovery::enumerate_recovery_sets(scheme)?;
        ServiceRegion::new(cat, scheme.mu())
    }

    pub fn catalog(&self) -> &RecoveryCatalog {
        &self.catalog
    }

    pub fn mu(&self) -> Rational {
        self.mu
    }

    pub fn k(&self) -> usize {
        self.catalog.k()
    }

    fn check_len(&self, len: usize) -> Result<(), RegionError> {
        if len == self.k() {
            Ok(())
        } else {
            Err(RegionError::Dimension { expected: self.k(), got: len })
        }
    }

    /// First LP variable of each object, plus the total count.
    fn offsets(&self) -> (Vec<usize>, usize) {
        let mut offsets = Vec::with_capacity(self.k());
        let mut next = 0;
        for i in 0..self.k() {
            offsets.push(next);
            next += self.catalog.count(i);
        }
        (offsets, next)
    }

    /// LP with the capacity rows only.
    fn base_lp(&self) -> (LinearProgram, Vec<usize>) {
        let (offsets, vars) = self.offsets();
        let mut lp = LinearProgram::new(vars);
        let mut per_server: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.catalog.n()];
        for i in 0..self.k() {
            for (j, set) in self.catalog.sets(i).iter().enumerate() {
                for &s in &set.servers {
                    per_server[s].push((offsets[i] + j, Rational::from_integer(1)));
                }
            }
        }
        for terms in per_server.into_iter().filter(|t| !t.is_empty()) {
            lp.add(terms, Sense::Le, self.mu);
        }
        (lp, offsets)
    }

    fn object_terms(&self, offsets: &[usize], i: usize) -> Vec<(usize, Rational)> {
        (0..self.catalog.count(i)).map(|j| (offsets[i] + j, Rational::from_integer(1))).collect()
    }

    fn unpack(&self, offsets: &[usize], x: &[Rational]) -> Allocation {
        let rates = (0..self.k()).map(|i| x[offsets[i]..offsets[i] + self.catalog.count(i)].to_vec()).collect();
        Allocation { rates }
    }

    /// A valid allocation serving `demand`, or `None` when it lies outside the region.
    pub fn is_achievable(&self, demand: &[Rational]) -> Result<Option<Allocation>, RegionError> {
        self.check_len(demand.len())?;
        if demand.iter().any(Signed::is_negative) {
            return Err(RegionError::NegativeDemand);
        }
        if demand.iter().all(Zero::is_zero) {
            return Ok(Some(Allocation::zeros(&self.catalog)));
        }
        let (mut lp, offsets) = self.base_lp();
        for (i, d) in demand.iter().enumerate() {
            lp.add(self.object_terms(&offsets, i), Sense::Eq, *d);
        }
        Ok(match lp.solve()? {
            LpOutcome::Optimal { x, .. } => Some(self.unpack(&offsets, &x)),
            _ => None,
        })
    }

    /// Allocation serving `demand` that minimizes the largest server load,
    /// ignoring capacity, together with that load. The demand is achievable
    /// exactly when the load is at most `mu`.
    pub fn balanced_allocation(&self, demand: &[Rational]) -> Result<(Allocation, Rational), RegionError> {
        self.check_len(demand.len())?;
        if demand.iter().any(Signed::is_negative) {
            return Err(RegionError::NegativeDemand);
        }
        let (offsets, vars) = self.offsets();
        let peak = vars;
        let mut lp = LinearProgram::new(vars + 1);
        let mut per_server: Vec<Vec<(usize, Rational)>> = vec![vec![(peak, -Rational::from_integer(1))]; self.catalog.n()];
        for i in 0..self.k() {
            for (j, set) in self.catalog.sets(i).iter().enumerate() {
                for &s in &set.servers {
                    per_server[s].push((offsets[i] + j, Rational::from_integer(1)));
                }
            }
        }
        for terms in per_server {
            lp.add(terms, Sense::Le, Rational::zero());
        }
        for (i, d) in demand.iter().enumerate() {
            lp.add(self.object_terms(&offsets, i), Sense::Eq, *d);
        }
        lp.set_objective(peak, -Rational::from_integer(1));
        match lp.solve()? {
            LpOutcome::Optimal { x, value } => Ok((self.unpack(&offsets, &x), -value)),
            _ => Err(RegionError::Infeasible),
        }
    }

    /// Largest `λ_free` such that the vector is achievable with the other
    /// entries fixed. `None` entries other than `free` are taken as zero.
    pub fn max_along(&self, fixed: &[Option<Rational>], free: usize) -> Result<Rational, RegionError> {
        self.check_len(fixed.len())?;
        if free >= self.k() {
            return Err(RegionError::Dimension { expected: self.k(), got: free + 1 });
        }
        let (mut lp, offsets) = self.base_lp();
        for (i, f) in fixed.iter().enumerate() {
            if i == free {
                continue;
            }
            let d = f.unwrap_or_else(Rational::zero);
            if d.is_negative() {
                return Err(RegionError::NegativeDemand);
            }
            lp.add(self.object_terms(&offsets, i), Sense::Eq, d);
        }
        for j in 0..self.catalog.count(free) {
            lp.set_objective(offsets[free] + j, Rational::from_integer(1));
        }
        match lp.solve()? {
            LpOutcome::Optimal { value, .. } => Ok(value),
            _ => Err(RegionError::Infeasible),
        }
    }

    /// `max c . λ` over the region, with a maximizing demand and allocation.
    pub fn support_point(&self, c: &[Rational]) -> Result<SupportPoint, RegionError> {
        self.check_len(c.len())?;
        let (mut lp, offsets) = self.base_lp();
        for (i, ci) in c.iter().enumerate() {
            for j in 0..self.catalog.count(i) {
                lp.set_objective(offsets[i] + j, *ci);
            }
        }
        match lp.solve()? {
            LpOutcome::Optimal { x, value } => {
                let allocation = self.unpack(&offsets, &x);
                Ok(SupportPoint { value, demand: allocation.served(), allocation })
            }
            // Rates are bounded by capacity and the zero allocation is feasible.
            _ => unreachable!("region LP is feasible and bounded"),
        }
    }

    pub fn support(&self, c: &[Rational]) -> Result<Rational, RegionError> {
        Ok(self.support_point(c)?.value)
    }

    /// Exact facets and vertices, for at most 3 objects.
    pub fn polytope(&self) -> Result<RegionPolytope, RegionError> {
        let k = self.k();
        if k > 3 {
            return Err(RegionError::TooManyObjects(k));
        }
        if k == 0 {
            return Ok(RegionPolytope { dim: 0, halfspaces: Vec::new(), vertices: Some(vec![Vec::new()]), exact: true });
        }
        let mut points: BTreeSet<Point> = BTreeSet::new();
        points.insert(vec![Rational::zero(); k]);
        for i in 0..k {
            let mut e = vec![Rational::zero(); k];
            e[i] = Rational::from_integer(1);
            let sp = self.support_point(&e)?;
            let mut axis = vec![Rational::zero(); k];
            axis[i] = sp.value;
            points.insert(axis);
            points.insert(sp.demand);
        }
        let mut confirmed: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
        loop {
            let pts: Vec<Point> = points.iter().cloned().collect();
            let h = hull::convex_hull(&pts);
            let mut grew = false;
            for facet in &h.facets {
                if let Some(b) = confirmed.get(&facet.a) {
                    if *b == facet.b {
                        continue;
                    }
                }
                let sp = self.support_point(&facet.a)?;
                if sp.value > facet.b {
                    grew |= points.insert(sp.demand);
                } else {
                    confirmed.insert(facet.a.clone(), facet.b);
                }
            }
            if !grew {
                return Ok(RegionPolytope { dim: k, halfspaces: h.facets, vertices: Some(h.vertices), exact: true });
            }
        }
    }

    /// Allocation minimizing downloaded symbols, with the normalized cost
    /// `Σ|R|λ_{i,j} / Σλ_i` (1 for zero demand).
    pub fn min_cost_allocation(&self, demand: &[Rational]) -> Result<(Allocation, Rational), RegionError> {
        self.check_len(demand.len())?;
        if demand.iter().any(Signed::is_negative) {
            return Err(RegionError::NegativeDemand);
        }
        let total = demand.iter().fold(Rational::zero(), |a, b| a + b);
        if total.is_zero() {
            return Ok((Allocation::zeros(&self.catalog), Rational::from_integer(1)));
        }
        let (mut lp, offsets) = self.base_lp();
        for (i, d) in demand.iter().enumerate() {
            lp.add(self.object_terms(&offsets, i), Sense::Eq, *d);
            for (j, set) in self.catalog.sets(i).iter().enumerate() {
                lp.set_objective(offsets[i] + j, -Rational::from_integer(set.size() as i128));
            }
        }
        match lp.solve()? {
            LpOutcome::Optimal { x, value } => Ok((self.unpack(&offsets, &x), -value / total)),
            _ => Err(RegionError::Infeasible),
        }
    }
}

/// `λ` with every coordinate scaled by `c`.
pub fn scaled(demand: &[Rational], c: Rational) -> Vec<Rational> {
    demand.iter().map(|x| *x * c).collect()
}

/// Convenience: componentwise `min(λ_i, μ)`.
pub fn clamp(demand: &[Rational], mu: Rational) -> Vec<Rational> {
    demand.iter().map(|x| rational::min(*x, mu)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::{make_mds, make_replication, make_simplex};
    use crate::galois::{Fe, FieldSpec};
    use crate::rational::{int, ratio};

    fn v(xs: &[Rational]) -> Vec<Rational> {
        xs.to_vec()
    }

    fn rep22() -> ServiceRegion {
        ServiceRegion::of_scheme(&make_replication(2, &[2, 2], int(1)).unwrap()).unwrap()
    }

    fn mds42() -> ServiceRegion {
        ServiceRegion::of_scheme(&make_mds(4, 2, &FieldSpec::prime(3).unwrap(), true, int(1)).unwrap()).unwrap()
    }

    #[test]
    fn replication_square() {
        let r = rep22();
        assert!(r.is_achievable(&[int(2), int(2)]).unwrap().is_some());
        assert!(r.is_achievable(&[ratio(201, 100), int(0)]).unwrap().is_none());
        let p = r.polytope().unwrap();
        assert_eq!(p.vertices.unwrap(), [v(&[int(0), int(0)]), v(&[int(0), int(2)]), v(&[int(2), int(0)]), v(&[int(2), int(2)])]);
    }

    #[test]
    fn zero_demand() {
        let r = mds42();
        let a = r.is_achievable(&[int(0), int(0)]).unwrap().unwrap();
        assert!(a.served().iter().all(Zero::is_zero));
    }

    #[test]
    fn a_a_b_ab() {
        let spec = FieldSpec::prime(2).unwrap();
        let cols = vec![vec![Fe(1), Fe(0)], vec![Fe(1), Fe(0)], vec![Fe(0), Fe(1)], vec![Fe(1), Fe(1)]];
        let s = StorageScheme::explicit(&spec, 2, cols, int(1)).unwrap();
        let r = ServiceRegion::of_scheme(&s).unwrap();
        let w = r.is_achievable(&[ratio(3, 2), ratio(3, 2)]).unwrap().unwrap();
        w.validate(r.catalog(), &[ratio(3, 2), ratio(3, 2)], int(1)).unwrap();
        assert!(r.is_achievable(&[ratio(8, 5), ratio(3, 2)]).unwrap().is_none());
    }

    #[test]
    fn mds_pentagon() {
        let r = mds42();
        assert_eq!(r.max_along(&[None, Some(int(0))], 0).unwrap(), ratio(5, 2));
        let p = r.polytope().unwrap();
        let want = [
            v(&[int(0), int(0)]),
            v(&[int(0), ratio(5, 2)]),
            v(&[int(1), int(2)]),
            v(&[int(2), int(1)]),
            v(&[ratio(5, 2), int(0)]),
        ];
        assert_eq!(p.vertices.clone().unwrap(), want);
        assert_eq!(p.area(), Some(int(4)));
    }

    #[test]
    fn simplex_support() {
        let r = ServiceRegion::of_scheme(&make_simplex(3, int(1)).unwrap()).unwrap();
        assert_eq!(r.support(&[int(1), int(1), int(1)]).unwrap(), int(4));
        assert_eq!(r.support(&[int(0), int(0), int(0)]).unwrap(), int(0));
        assert_eq!(r.max_along(&[None, Some(int(0)), Some(int(0))], 0).unwrap(), int(4));
    }

    #[test]
    fn min_cost() {
        let r = mds42();
        let (a, c) = r.min_cost_allocation(&[ratio(3, 2), ratio(1, 2)]).unwrap();
        assert_eq!(c, ratio(5, 4));
        a.validate(r.catalog(), &[ratio(3, 2), ratio(1, 2)], int(1)).unwrap();
        let (_, c) = rep22().min_cost_allocation(&[int(1), ratio(3, 2)]).unwrap();
        assert_eq!(c, int(1));
        assert_eq!(r.min_cost_allocation(&[int(0), int(0)]).unwrap().1, int(1));
        assert_eq!(r.min_cost_allocation(&[int(3), int(0)]), Err(RegionError::Infeasible));
    }

    #[test]
    fn dimension_errors() {
        let r = rep22();
        assert!(matches!(r.is_achievable(&[int(1)]), Err(RegionError::Dimension { .. })));
        assert!(matches!(r.support(&[int(1), int(1), int(1)]), Err(RegionError::Dimension { .. })));
    }

    #[test]
    fn slice_of_halfspaces() {
        let p = mds42().polytope().unwrap();
        let s = p.slice_zero(&[0]);
        assert_eq!(s.vertices.unwrap(), [v(&[int(0)]), v(&[ratio(5, 2)])]);
    }

    #[test]
    fn balanced_peak_load() {
        let r = rep22();
        let d = [ratio(9, 5), ratio(9, 5)];
        let (a, peak) = r.balanced_allocation(&d).unwrap();
        assert_eq!(peak, ratio(9, 10));
        assert!(a.server_loads(r.catalog()).iter().all(|l| *l == ratio(9, 10)));
        assert_eq!(r.balanced_allocation(&[int(3), int(0)]).unwrap().1, ratio(3, 2));
    }
}
