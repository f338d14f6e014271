//! Minimal recovery sets.
//!
//! A set of servers recovers object `i` when the unit vector `e_i` lies in the
//! span of their columns. Minimal sets are always linearly independent, so no
//! minimal set has more than `k` servers; enumeration walks subsets by size up
//! to that cap.

use alloc::vec::Vec;

use crate::codebook::{for_each_subset, StorageScheme};
use crate::galois::{self, Fe};

/// Default cap on the number of subsets examined while enumerating.
pub const DEFAULT_SUBSET_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecoveryError {
    #[error("examined more than {0} subsets while enumerating recovery sets")]
    BudgetExceeded(u64),
    #[error("object index {0} out of range")]
    NoSuchObject(usize),
}

/// A minimal set of servers from which `object` can be decoded.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RecoverySet {
    pub object: usize,
    /// Sorted server indices.
    pub servers: Vec<usize>,
}

impl RecoverySet {
    pub fn size(&self) -> usize {
        self.servers.len()
    }

    pub fn contains(&self, server: usize) -> bool {
        self.servers.binary_search(&server).is_ok()
    }
}

/// Every minimal recovery set of every object, ordered by size then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveryCatalog {
    n: usize,
    k: usize,
    sets: Vec<Vec<RecoverySet>>,
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    /// Only keep sets of at most this many servers.
    pub max_size: Option<usize>,
    pub budget: u64,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { max_size: None, budget: DEFAULT_SUBSET_BUDGET }
    }
}

impl RecoveryCatalog {
    /// Builds a catalog from explicit sets. Each list is sorted and deduplicated.
    pub fn from_sets(n: usize, mut sets: Vec<Vec<RecoverySet>>) -> Self {
        let k = sets.len();
        for list in sets.iter_mut() {
            for s in list.iter_mut() {
                s.servers.sort_unstable();
            }
            list.sort_by(|a, b| (a.size(), &a.servers).cmp(&(b.size(), &b.servers)));
            list.dedup();
        }
        RecoveryCatalog { n, k, sets }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Recovery sets of object `i`.
    pub fn sets(&self, i: usize) -> &[RecoverySet] {
        &self.sets[i]
    }

    pub fn all(&self) -> impl Iterator<Item = &RecoverySet> {
        self.sets.iter().flatten()
    }

    /// `t_i`.
    pub fn count(&self, i: usize) -> usize {
        self.sets[i].len()
    }

    pub fn total(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    /// Ascending multiset of recovery-set sizes of object `i`.
    pub fn size_profile(&self, i: usize) -> Result<Vec<usize>, RecoveryError> {
        let list = self.sets.get(i).ok_or(RecoveryError::NoSuchObject(i))?;
        let mut sizes: Vec<usize> = list.iter().map(RecoverySet::size).collect();
        sizes.sort_unstable();
        Ok(sizes)
    }

    /// Keeps only sets of at most `max` servers.
    pub fn truncated(&self, max: usize) -> Self {
        let sets = self.sets.iter().map(|l| l.iter().filter(|s| s.size() <= max).cloned().collect()).collect();
        RecoveryCatalog { n: self.n, k: self.k, sets }
    }

    /// The catalog seen when every object outside `keep` has zero demand: the
    /// retained objects are renumbered `0..keep.len()` in the given order.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let sets = keep
            .iter()
            .enumerate()
            .map(|(new, &old)| {
                self.sets[old].iter().map(|s| RecoverySet { object: new, servers: s.servers.clone() }).collect()
            })
            .collect();
        RecoveryCatalog { n: self.n, k: keep.len(), sets }
    }
}

/// All minimal recovery sets with the default options.
pub fn enumerate_recovery_sets(s: &StorageScheme) -> Result<RecoveryCatalog, RecoveryError> {
    enumerate_with(s, EnumerateOptions::default())
}

pub fn enumerate_with(s: &StorageScheme, opts: EnumerateOptions) -> Result<RecoveryCatalog, RecoveryError> {
    let (n, k) = (s.n(), s.k());
    let f = s.field();
    let cap = opts.max_size.map_or(k, |m| m.min(k));
    let mut examined: u64 = 0;
    let mut sets: Vec<Vec<RecoverySet>> = (0..k).map(|_| Vec::new()).collect();
    let mut target = alloc::vec![Fe::ZERO; k];
    let mut over = false;
    for size in 1..=cap {
        for_each_subset(n, size, &mut |subset| {
            examined += 1;
            if examined > opts.budget {
                over = true;
                return false;
            }
            let cols: Vec<&[Fe]> = subset.iter().map(|&j| s.column(j)).collect();
            if size > 1 && galois::rank_of_columns(f, &cols) < size {
                return true;
            }
            for (i, found) in sets.iter_mut().enumerate() {
                target[i] = Fe::ONE;
                // Independent columns: the representation is unique, and the set
                // is minimal exactly when every coefficient is nonzero.
                if let Some(coeffs) = galois::express(f, &cols, &target) {
                    if coeffs.iter().all(|c| !c.is_zero()) {
                        found.push(RecoverySet { object: i, servers: subset.to_vec() });
                    }
                }
                target[i] = Fe::ZERO;
            }
            true
        });
        if over {
            return Err(RecoveryError::BudgetExceeded(opts.budget));
        }
    }
    Ok(RecoveryCatalog { n, k, sets })
}
