//! Waterfilling allocators for systematic MDS and Pyramid-style LRC layouts,
//! plus capacity-counting bounds.
//!
//! Systematic servers first serve their own object up to `mu`. The overflow is
//! then spread over `k`-server sets of the least-loaded unsaturated servers.
//! The MDS filler advances exactly from one load event to the next instead of
//! taking infinitesimal steps.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::codebook::{for_each_subset, LrcProfile, StorageScheme};
use crate::galois::{self, Fe};
use crate::rational::{self, Rational};
use crate::recovery::RecoveryCatalog;
use crate::region::Allocation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WaterfillError {
    #[error("demand entries must be non-negative")]
    NegativeDemand,
    #[error("expected {expected} demand entries, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("need 1 <= k <= n, got n = {n}, k = {k}")]
    BadShape { n: usize, k: usize },
    #[error("server capacity must be positive")]
    NonPositiveCapacity,
    #[error("LRC profile does not match the scheme")]
    ProfileMismatch,
    #[error("waterfilling did not serve the demand")]
    NotFeasible,
    #[error("server set {0:?} holds no recovery set of object {1}")]
    NoRecoverySet(Vec<usize>, usize),
}

/// One assignment of `amount` requests, each served by every server in `servers`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaterfillStep {
    pub amount: Rational,
    pub servers: Vec<usize>,
    /// Local group whose objects this step serves; `None` for global steps.
    pub group: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaterfillResult {
    pub loads: Vec<Rational>,
    pub residual: Rational,
    pub feasible: bool,
    pub log: Vec<WaterfillStep>,
}

fn check(demand: &[Rational], k: usize, mu: Rational) -> Result<(), WaterfillError> {
    if demand.len() != k {
        return Err(WaterfillError::Dimension { expected: k, got: demand.len() });
    }
    if demand.iter().any(Signed::is_negative) {
        return Err(WaterfillError::NegativeDemand);
    }
    if !mu.is_positive() {
        return Err(WaterfillError::NonPositiveCapacity);
    }
    Ok(())
}

fn overflow(demand: &[Rational], mu: Rational) -> Rational {
    demand.iter().map(|x| rational::pos(*x - mu)).fold(Rational::zero(), |a, b| a + b)
}

fn push_step(log: &mut Vec<WaterfillStep>, amount: Rational, servers: Vec<usize>, group: Option<usize>) {
    if amount.is_zero() {
        return;
    }
    if let Some(last) = log.last_mut() {
        if last.servers == servers && last.group == group {
            last.amount += amount;
            return;
        }
    }
    log.push(WaterfillStep { amount, servers, group });
}

/// Spreads `residual` over `k`-subsets of the least-loaded unsaturated servers
/// among `pool`, event by event. Returns the unserved remainder.
fn fill(pool: &[usize], loads: &mut [Rational], k: usize, mu: Rational, mut residual: Rational, group: Option<usize>, log: &mut Vec<WaterfillStep>) -> Rational {
    let one = Rational::from_integer(1);
    while residual.is_positive() {
        let mut open: Vec<usize> = pool.iter().copied().filter(|&s| loads[s] < mu).collect();
        if open.len() < k {
            break;
        }
        open.sort_by(|&a, &b| loads[a].cmp(&loads[b]).then(a.cmp(&b)));
        let v = loads[open[k - 1]];
        let lower: Vec<usize> = open.iter().copied().filter(|&s| loads[s] < v).collect();
        let tier: Vec<usize> = open.iter().copied().filter(|&s| loads[s] == v).collect();
        let (a, g) = (lower.len(), tier.len());
        let rho = Rational::new((k - a) as i128, g as i128);

        let mut t = residual;
        t = t.min((mu - v) / rho);
        if let Some(&next) = open.iter().find(|&&s| loads[s] > v) {
            t = t.min((loads[next] - v) / rho);
        }
        if rho < one {
            if let Some(&top) = lower.last() {
                t = t.min((v - loads[top]) / (one - rho));
            }
        }

        for &s in &lower {
            loads[s] += t;
        }
        for &s in &tier {
            loads[s] += t * rho;
        }
        residual -= t;

        // Cyclic windows of k - a tier servers; each tier server sits in k - a of them.
        let width = k - a;
        let windows = if width == g { 1 } else { g };
        let share = t / Rational::from_integer(windows as i128);
        for w in 0..windows {
            let mut set = lower.clone();
            set.extend((0..width).map(|o| tier[(w + o) % g]));
            set.sort_unstable();
            push_step(log, share, set, group);
        }
    }
    residual
}

/// Waterfilling for a systematic `[n, k]` MDS scheme with servers `0..k`
/// holding the objects and `k..n` the parities.
pub fn mds_waterfill(n: usize, k: usize, mu: Rational, demand: &[Rational]) -> Result<WaterfillResult, WaterfillError> {
    if k == 0 || k > n {
        return Err(WaterfillError::BadShape { n, k });
    }
    check(demand, k, mu)?;
    let mut loads = vec![Rational::zero(); n];
    for (i, d) in demand.iter().enumerate() {
        loads[i] = rational::min(*d, mu);
    }
    let mut log = Vec::new();
    let pool: Vec<usize> = (0..n).collect();
    let residual = fill(&pool, &mut loads, k, mu, overflow(demand, mu), None, &mut log);
    Ok(WaterfillResult { loads, feasible: residual.is_zero(), residual, log })
}

/// `Σ (min(λ_i, μ) + k (λ_i − μ)^+) <= n μ`.
pub fn mds_bound_holds(n: usize, k: usize, mu: Rational, demand: &[Rational]) -> bool {
    let kk = Rational::from_integer(k as i128);
    let used = demand
        .iter()
        .map(|x| rational::min(*x, mu) + kk * rational::pos(*x - mu))
        .fold(Rational::zero(), |a, b| a + b);
    used <= Rational::from_integer(n as i128) * mu
}

/// Least capacity each object's demand can consume: fill its recovery sets in
/// ascending size order at `mu` each. Demand beyond the last set is charged at
/// the largest size. `profiles[i]` must be sorted ascending.
pub fn capacity_usage(profiles: &[Vec<usize>], mu: Rational, demand: &[Rational]) -> Rational {
    let mut total = Rational::zero();
    for (sizes, d) in profiles.iter().zip(demand) {
        let mut left = *d;
        for &s in sizes {
            if !left.is_positive() {
                break;
            }
            let take = rational::min(left, mu);
            total += take * Rational::from_integer(s as i128);
            left -= take;
        }
        if left.is_positive() {
            let largest = sizes.last().copied().unwrap_or(0);
            total += left * Rational::from_integer(largest as i128);
        }
    }
    total
}

/// Quantum of the LRC global step, as a fraction of `mu`.
pub const LRC_STEP_DIVISOR: i128 = 4096;

/// `k`-server sets allowed in the global LRC step: a set touching a group's
/// local parity holds exactly `r` servers of that group, and the set has full rank.
fn admissible_sets(scheme: &StorageScheme, profile: &LrcProfile) -> Vec<Vec<usize>> {
    let (n, k, r) = (scheme.n(), scheme.k(), profile.r);
    let groups: Vec<(Vec<usize>, Vec<usize>)> = (0..profile.groups.len()).map(|g| profile.group_servers(g)).collect();
    let f = scheme.field();
    let mut out = Vec::new();
    for_each_subset(n, k, &mut |s| {
        let ok = groups.iter().all(|(sys, par)| {
            let touches = s.iter().any(|x| par.contains(x));
            !touches || s.iter().filter(|x| sys.contains(x) || par.contains(x)).count() == r
        });
        if ok {
            let cols: Vec<&[Fe]> = s.iter().map(|&j| scheme.column(j)).collect();
            if galois::rank_of_columns(f, &cols) == k {
                out.push(s.to_vec());
            }
        }
        true
    });
    out
}

/// Two-step waterfilling for a scheme built by `make_lrc` with this profile.
///
/// Step 1 waterfills each group's overflow over its systematic and local
/// parity servers. Step 2 repeatedly picks the admissible set with the least
/// total load (lexicographically smallest on ties) and serves on it until
/// another set becomes as cheap, rounded to whole steps of `mu / 4096` (one
/// step when sets are tied).
pub fn lrc_waterfill(scheme: &StorageScheme, profile: &LrcProfile, demand: &[Rational]) -> Result<WaterfillResult, WaterfillError> {
    let (n, k, mu) = (scheme.n(), scheme.k(), scheme.mu());
    if profile.k != k || profile.n() != n {
        return Err(WaterfillError::ProfileMismatch);
    }
    check(demand, k, mu)?;
    let mut loads = vec![Rational::zero(); n];
    for (i, d) in demand.iter().enumerate() {
        loads[i] = rational::min(*d, mu);
    }
    let mut log = Vec::new();
    let mut residual = Rational::zero();
    for (g, group) in profile.groups.iter().enumerate() {
        let (sys, par) = profile.group_servers(g);
        let pool: Vec<usize> = sys.iter().chain(&par).copied().collect();
        let local: Vec<Rational> = group.objects.iter().map(|&o| demand[o]).collect();
        residual += fill(&pool, &mut loads, profile.r, mu, overflow(&local, mu), Some(g), &mut log);
    }

    let sets = admissible_sets(scheme, profile);
    let eps = mu / Rational::from_integer(LRC_STEP_DIVISOR);
    let kk = Rational::from_integer(k as i128);
    while residual.is_positive() {
        let open: Vec<(&Vec<usize>, Rational)> = sets
            .iter()
            .filter(|s| s.iter().all(|&x| loads[x] < mu))
            .map(|s| (s, s.iter().map(|&x| loads[x]).fold(Rational::zero(), |a, b| a + b)))
            .collect();
        // Sets are in lexicographic order, so the first minimum wins ties.
        let Some(&(best, best_sum)) = open.iter().min_by(|a, b| a.1.cmp(&b.1)) else {
            break;
        };
        // Run until another set is at least as cheap, snapped to the eps grid
        // so denominators stay bounded.
        let mut until: Option<Rational> = None;
        for &(other, sum) in &open {
            if core::ptr::eq(other, best) {
                continue;
            }
            let shared = other.iter().filter(|x| best.contains(x)).count();
            let cross = (sum - best_sum) / (kk - Rational::from_integer(shared as i128));
            until = Some(until.map_or(cross, |u| u.min(cross)));
        }
        let quantum = match until {
            Some(c) if c >= eps => (c / eps).floor() * eps,
            Some(_) => eps,
            None => residual,
        };
        let room = best.iter().map(|&x| mu - loads[x]).min().unwrap();
        let t = residual.min(room).min(quantum);
        for &x in best {
            loads[x] += t;
        }
        residual -= t;
        push_step(&mut log, t, best.clone(), None);
    }
    Ok(WaterfillResult { loads, feasible: residual.is_zero(), residual, log })
}

/// Turns a feasible waterfilling result into an allocation over `cat`.
///
/// Object `i` is served at rate `min(λ_i, μ)` by its systematic server `i`; its
/// overflow takes log steps in order (group steps only go to that group's
/// objects), each realized by the first recovery set of the object inside the
/// step's servers.
pub fn decompose(cat: &RecoveryCatalog, demand: &[Rational], mu: Rational, result: &WaterfillResult, profile: Option<&LrcProfile>) -> Result<Allocation, WaterfillError> {
    if !result.feasible {
        return Err(WaterfillError::NotFeasible);
    }
    let k = cat.k();
    if demand.len() != k {
        return Err(WaterfillError::Dimension { expected: k, got: demand.len() });
    }
    let mut alloc = Allocation::zeros(cat);
    let find = |i: usize, servers: &[usize]| -> Result<usize, WaterfillError> {
        cat.sets(i)
            .iter()
            .position(|r| r.servers.iter().all(|s| servers.contains(s)))
            .ok_or_else(|| WaterfillError::NoRecoverySet(servers.to_vec(), i))
    };
    let mut left: Vec<Rational> = Vec::with_capacity(k);
    for (i, d) in demand.iter().enumerate() {
        let direct = rational::min(*d, mu);
        if direct.is_positive() {
            alloc.rates[i][find(i, &[i])?] += direct;
        }
        left.push(rational::pos(*d - mu));
    }
    for step in &result.log {
        let eligible: Vec<usize> = match (step.group, profile) {
            (Some(g), Some(p)) => p.groups[g].objects.clone(),
            _ => (0..k).collect(),
        };
        let mut amount = step.amount;
        for &i in &eligible {
            if amount.is_zero() {
                break;
            }
            let take = rational::min(amount, left[i]);
            if take.is_positive() {
                alloc.rates[i][find(i, &step.servers)?] += take;
                left[i] -= take;
                amount -= take;
            }
        }
        if amount.is_positive() {
            return Err(WaterfillError::NotFeasible);
        }
    }
    Ok(alloc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::{make_lrc, make_mds};
    use crate::galois::FieldSpec;
    use crate::rational::{int, ratio};
    use crate::recovery::enumerate_recovery_sets;
    use crate::region::ServiceRegion;

    #[test]
    fn six_three_trace() {
        let d = [ratio(7, 5), ratio(6, 5), ratio(3, 5)];
        let r = mds_waterfill(6, 3, int(1), &d).unwrap();
        assert!(r.feasible);
        let p = ratio(3, 5);
        assert_eq!(r.loads, [int(1), int(1), p, p, p, p]);
        assert_eq!(capacity_usage(&[vec![1, 3, 3], vec![1, 3], vec![1, 3]], int(1), &d), ratio(22, 5));
        assert!(mds_bound_holds(6, 3, int(1), &d));
    }

    #[test]
    fn systematic_only() {
        let r = mds_waterfill(6, 3, int(1), &[int(1), int(1), int(1)]).unwrap();
        assert_eq!(r.loads, [int(1), int(1), int(1), int(0), int(0), int(0)]);
        assert!(r.log.is_empty());
    }

    #[test]
    fn four_two_boundary() {
        assert!(mds_waterfill(4, 2, int(1), &[ratio(5, 2), int(0)]).unwrap().feasible);
        assert!(!mds_waterfill(4, 2, int(1), &[ratio(5, 2) + ratio(1, 1000), int(0)]).unwrap().feasible);
    }

    #[test]
    fn decomposition_is_valid() {
        let s = make_mds(6, 3, &FieldSpec::prime(7).unwrap(), true, int(1)).unwrap();
        let cat = enumerate_recovery_sets(&s).unwrap();
        let d = [int(2), ratio(1, 2), int(1)];
        let r = mds_waterfill(6, 3, int(1), &d).unwrap();
        assert!(r.feasible);
        let a = decompose(&cat, &d, int(1), &r, None).unwrap();
        a.validate(&cat, &d, int(1)).unwrap();
    }

    #[test]
    fn rm_usage() {
        let profile = vec![vec![1, 3, 3, 3, 3, 3, 3, 3]];
        assert_eq!(capacity_usage(&profile, int(1), &[int(2)]), int(4));
        assert_eq!(capacity_usage(&profile, int(1), &[int(0)]), int(0));
    }

    #[test]
    fn lrc_example() {
        let p = LrcProfile::example_12_4();
        let s = make_lrc(&p, &FieldSpec::prime(13).unwrap(), int(1)).unwrap();
        let r = lrc_waterfill(&s, &p, &[int(1); 4]).unwrap();
        assert!(r.feasible);
        assert_eq!(&r.loads[..4], [int(1); 4]);
        assert!(r.loads[4..].iter().all(Zero::is_zero));

        let d = [ratio(3, 2), int(1), int(1), int(1)];
        let r = lrc_waterfill(&s, &p, &d).unwrap();
        assert!(r.feasible);
        assert!(r.log.iter().all(|st| st.group == Some(0)));
        let cat = enumerate_recovery_sets(&s).unwrap();
        decompose(&cat, &d, int(1), &r, Some(&p)).unwrap().validate(&cat, &d, int(1)).unwrap();

        let region = ServiceRegion::new(cat, int(1)).unwrap();
        let top = region.support(&[int(1); 4]).unwrap();
        let over = [top / int(4) + ratio(1, 100); 4];
        assert!(!lrc_waterfill(&s, &p, &over).unwrap().feasible);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(mds_waterfill(4, 2, int(1), &[int(-1), int(0)]), Err(WaterfillError::NegativeDemand));
        assert!(matches!(mds_waterfill(4, 2, int(1), &[int(1)]), Err(WaterfillError::Dimension { .. })));
    }
}
