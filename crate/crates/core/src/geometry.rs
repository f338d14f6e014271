//! Outer bounds from projective geometry.
//!
//! Columns of the generator matrix are points of `PG(k-1, q)`. For a hyperplane
//! `h`, the objects `e_i` off the hyperplane can only be recovered with help
//! from some column off the hyperplane, so their total demand is at most `mu`
//! times the number of such columns.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::codebook::{for_each_subset, StorageScheme};
use crate::galois::{Fe, GaloisField};
use crate::rational::Rational;
use crate::recovery::RecoveryCatalog;
use crate::region::{HalfSpace, RegionPolytope};

/// Largest `q^k` enumerated when listing hyperplanes.
pub const MAX_ENUMERATION: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("column {0} is zero")]
    ZeroColumn(usize),
    #[error("q^k = {0} exceeds the enumeration cap")]
    TooLarge(u64),
}

/// A nonzero vector scaled so its first nonzero coordinate is one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint(pub Vec<Fe>);

impl ProjPoint {
    pub fn new(field: &GaloisField, v: &[Fe]) -> Option<Self> {
        v.iter().any(|x| !x.is_zero()).then(|| ProjPoint(field.normalize(v)))
    }
}

/// Columns tallied as projective points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMultiset {
    pub points: BTreeMap<ProjPoint, usize>,
}

impl PointMultiset {
    pub fn total(&self) -> usize {
        self.points.values().sum()
    }

    pub fn multiplicity(&self, p: &ProjPoint) -> usize {
        self.points.get(p).copied().unwrap_or(0)
    }
}

pub fn point_multiset(s: &StorageScheme) -> Result<PointMultiset, GeometryError> {
    let mut points = BTreeMap::new();
    for (j, col) in s.columns().iter().enumerate() {
        let p = ProjPoint::new(s.field(), col).ok_or(GeometryError::ZeroColumn(j))?;
        *points.entry(p).or_insert(0) += 1;
    }
    Ok(PointMultiset { points })
}

/// All normalized nonzero vectors of `GF(q)^k`, one per hyperplane.
pub fn hyperplanes(field: &GaloisField, k: usize) -> Result<Vec<ProjPoint>, GeometryError> {
    let q = field.order() as u64;
    let total = (0..k).try_fold(1u64, |acc, _| acc.checked_mul(q).filter(|&x| x <= MAX_ENUMERATION));
    let total = total.ok_or(GeometryError::TooLarge(q.saturating_pow(k as u32)))?;
    let mut out = Vec::new();
    for idx in 1..total {
        let mut rest = idx;
        let v: Vec<Fe> = (0..k)
            .map(|_| {
                let d = rest % q;
                rest /= q;
                Fe(d as u32)
            })
            .collect();
        if v.iter().find(|x| !x.is_zero()) == Some(&Fe::ONE) {
            out.push(ProjPoint(v));
        }
    }
    out.sort();
    Ok(out)
}

/// One bound per distinct index set `I(h) = {i : h_i != 0}`, the tightest over
/// hyperplanes sharing it: `Σ_{i in I(h)} λ_i <= mu * #{columns g : h . g != 0}`.
pub fn hyperplane_bounds(s: &StorageScheme, mu: Rational) -> Result<Vec<HalfSpace>, GeometryError> {
    let k = s.k();
    let f = s.field();
    let mut best: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for h in hyperplanes(f, k)? {
        let support: Vec<usize> = (0..k).filter(|&i| !h.0[i].is_zero()).collect();
        let off = s.columns().iter().filter(|g| !f.dot(&h.0, g).is_zero()).count();
        best.entry(support).and_modify(|b| *b = (*b).min(off)).or_insert(off);
    }
    Ok(best
        .into_iter()
        .map(|(support, off)| {
            let mut a = vec![Rational::zero(); k];
            support.iter().for_each(|&i| a[i] = Rational::from_integer(1));
            HalfSpace { a, b: mu * Rational::from_integer(off as i128) }
        })
        .collect())
}

/// Linear pieces of the capacity-counting bound: each object is charged its
/// smallest recovery-set size, or (for objects in the pattern) `s_1 mu +
/// s_2 (λ_i - mu)` with `s_2` its second smallest size; the total is at most `n mu`.
pub fn counting_bounds(cat: &RecoveryCatalog, mu: Rational) -> Vec<HalfSpace> {
    let k = cat.k();
    let sizes: Vec<(i128, i128)> = (0..k)
        .map(|i| {
            let mut p: Vec<usize> = cat.sets(i).iter().map(|s| s.size()).collect();
            p.sort_unstable();
            let s1 = p.first().copied().unwrap_or(0) as i128;
            let s2 = p.get(1).copied().unwrap_or(p.last().copied().unwrap_or(0)) as i128;
            (s1, s2)
        })
        .collect();
    let n = Rational::from_integer(cat.n() as i128);
    let mut out = BTreeSet::new();
    for size in 0..=k {
        for_each_subset(k, size, &mut |pattern| {
            let mut a = Vec::with_capacity(k);
            let mut b = n * mu;
            for (i, &(s1, s2)) in sizes.iter().enumerate() {
                if pattern.contains(&i) {
                    a.push(Rational::from_integer(s2));
                    b -= Rational::from_integer(s1 - s2) * mu;
                } else {
                    a.push(Rational::from_integer(s1));
                }
            }
            out.insert(HalfSpace { a, b });
            true
        });
    }
    out.into_iter().collect()
}

/// Hyperplane bounds, nonnegativity and optionally the counting pieces.
pub fn outer_polytope(s: &StorageScheme, cat: Option<&RecoveryCatalog>, mu: Rational) -> Result<RegionPolytope, GeometryError> {
    let k = s.k();
    let mut hs = hyperplane_bounds(s, mu)?;
    for i in 0..k {
        let mut a = vec![Rational::zero(); k];
        a[i] = Rational::from_integer(-1);
        hs.push(HalfSpace { a, b: Rational::zero() });
    }
    if let Some(cat) = cat {
        hs.extend(counting_bounds(cat, mu));
    }
    Ok(RegionPolytope::from_halfspaces(k, hs, false))
}
