//! Coverage of demand distributions and normalized download cost.
//!
//! Samples are drawn from a ChaCha8 stream keyed by `(seed, sample index)`, so
//! a sample's value never depends on how the work is split up. Sampled demands
//! are rounded to dyadic rationals before the exact membership test.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::rational::{self, Rational};
use crate::recovery::RecoveryCatalog;
use crate::region::{Allocation, AllocationError, RegionError, ServiceRegion};

/// Fewest samples accepted for Monte Carlo estimates.
pub const MIN_SAMPLES: u64 = 1000;
/// Resolution (bits after the binary point) of sampled demands.
pub const SAMPLE_BITS: u32 = 24;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("need at least {MIN_SAMPLES} samples, got {0}")]
    TooFewSamples(u64),
    #[error("grid probabilities must be non-negative and sum to 1 (sum is {0})")]
    BadProbabilities(f64),
    #[error("distribution parameters must be positive and match the dimension")]
    BadParameters,
    #[error("distribution has {got} coordinates, region has {expected}")]
    Dimension { expected: usize, got: usize },
    #[error(transparent)]
    Allocation(#[from] AllocationError),
    #[error(transparent)]
    Region(#[from] RegionError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum DemandDistribution {
    /// Uniform on `[0, b_1] x ... x [0, b_k]`.
    UniformBox { bounds: Vec<Rational> },
    /// Independent exponentials with the given rates, each truncated to `[0, bound]`.
    TruncExp { rates: Vec<f64>, bounds: Vec<f64> },
    /// Finitely many points with probabilities.
    Grid { points: Vec<Vec<Rational>>, probs: Vec<f64> },
}

impl DemandDistribution {
    pub fn dim(&self) -> usize {
        match self {
            DemandDistribution::UniformBox { bounds } => bounds.len(),
            DemandDistribution::TruncExp { rates, .. } => rates.len(),
            DemandDistribution::Grid { points, .. } => points.first().map_or(0, Vec::len),
        }
    }

    pub fn validate(&self) -> Result<(), MetricsError> {
        match self {
            DemandDistribution::UniformBox { bounds } => {
                if bounds.is_empty() || bounds.iter().any(|b| !b.is_positive()) {
                    return Err(MetricsError::BadParameters);
                }
            }
            DemandDistribution::TruncExp { rates, bounds } => {
                let ok = |x: &f64| x.is_finite() && *x > 0.0;
                if rates.is_empty() || rates.len() != bounds.len() || !rates.iter().all(ok) || !bounds.iter().all(ok) {
                    return Err(MetricsError::BadParameters);
                }
            }
            DemandDistribution::Grid { points, probs } => {
                let d = self.dim();
                if points.is_empty() || points.len() != probs.len() || points.iter().any(|p| p.len() != d || p.iter().any(Signed::is_negative)) {
                    return Err(MetricsError::BadParameters);
                }
                let sum: f64 = probs.iter().sum();
                if probs.iter().any(|p| !(*p >= 0.0)) || libm::fabs(sum - 1.0) > 1e-9 {
                    return Err(MetricsError::BadProbabilities(sum));
                }
            }
        }
        Ok(())
    }

    /// The `index`-th sample for `seed`. Grid distributions are sampled by inversion.
    pub fn sample(&self, seed: u64, index: u64) -> Vec<Rational> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let mut unit = || Rational::new(i128::from(rng.next_u32() >> (32 - SAMPLE_BITS)), 1i128 << SAMPLE_BITS);
        match self {
            DemandDistribution::UniformBox { bounds } => bounds.iter().map(|b| *b * unit()).collect(),
            DemandDistribution::TruncExp { rates, bounds } => rates
                .iter()
                .zip(bounds)
                .map(|(r, b)| {
                    let u = rational::to_f64(&unit());
                    let x = -libm::log(1.0 - u * (1.0 - libm::exp(-r * b))) / r;
                    rational::min(rational::from_f64_dyadic(x, SAMPLE_BITS), rational::from_f64_dyadic(*b, SAMPLE_BITS))
                })
                .collect(),
            DemandDistribution::Grid { points, probs } => {
                let u = rational::to_f64(&unit());
                let mut acc = 0.0;
                for (p, w) in points.iter().zip(probs) {
                    acc += w;
                    if u < acc {
                        return p.clone();
                    }
                }
                points.last().cloned().unwrap_or_default()
            }
        }
    }
}

/// Grid over `[0, b_1] x ... x [0, b_k]` with `steps + 1` points per axis,
/// weighted by a mixture of isotropic Gaussians `(center, weight)` of width `sigma`.
pub fn gaussian_mixture_grid(bounds: &[Rational], steps: usize, centers: &[(Vec<f64>, f64)], sigma: f64) -> Result<DemandDistribution, MetricsError> {
    if bounds.is_empty() || steps == 0 || !(sigma > 0.0) || centers.is_empty() || centers.iter().any(|(c, w)| c.len() != bounds.len() || !(*w >= 0.0)) {
        return Err(MetricsError::BadParameters);
    }
    let k = bounds.len();
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        let p: Vec<Rational> = idx.iter().zip(bounds).map(|(&i, b)| *b * Rational::new(i as i128, steps as i128)).collect();
        let x: Vec<f64> = p.iter().map(rational::to_f64).collect();
        let w: f64 = centers
            .iter()
            .map(|(c, wt)| {
                let d2: f64 = x.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum();
                wt * libm::exp(-d2 / (2.0 * sigma * sigma))
            })
            .sum();
        points.push(p);
        weights.push(w);
        let mut axis = 0;
        while axis < k {
            idx[axis] += 1;
            if idx[axis] <= steps {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
        if axis == k {
            break;
        }
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(MetricsError::BadParameters);
    }
    let probs = weights.iter().map(|w| w / total).collect();
    Ok(DemandDistribution::Grid { points, probs })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Coverage {
    pub estimate: f64,
    /// 95% confidence half-width; zero for exact grid sums.
    pub half_width: f64,
    pub samples: u64,
    pub hits: u64,
}

/// Probability mass inside the region described by `member`.
pub fn coverage(member: &mut dyn FnMut(&[Rational]) -> Result<bool, RegionError>, dist: &DemandDistribution, samples: u64, seed: u64) -> Result<Coverage, MetricsError> {
    dist.validate()?;
    if let DemandDistribution::Grid { points, probs } = dist {
        let mut mass = 0.0;
        let mut hits = 0;
        for (p, w) in points.iter().zip(probs) {
            if member(p)? {
                mass += w;
                hits += 1;
            }
        }
        return Ok(Coverage { estimate: mass, half_width: 0.0, samples: points.len() as u64, hits });
    }
    if samples < MIN_SAMPLES {
        return Err(MetricsError::TooFewSamples(samples));
    }
    let mut hits = 0u64;
    for i in 0..samples {
        if member(&dist.sample(seed, i))? {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    Ok(Coverage { estimate: p, half_width: 1.96 * libm::sqrt(p * (1.0 - p) / samples as f64), samples, hits })
}

/// Coverage of the exact service rate region.
pub fn region_coverage(region: &ServiceRegion, dist: &DemandDistribution, samples: u64, seed: u64) -> Result<Coverage, MetricsError> {
    if dist.dim() != region.k() {
        return Err(MetricsError::Dimension { expected: region.k(), got: dist.dim() });
    }
    coverage(&mut |x| Ok(region.is_achievable(x)?.is_some()), dist, samples, seed)
}

/// `Σ |R_{i,j}| λ_{i,j} / Σ λ_{i,j}` for an allocation respecting capacity `mu`;
/// 1 when nothing is served.
pub fn cost_of(cat: &RecoveryCatalog, alloc: &Allocation, mu: Rational) -> Result<Rational, MetricsError> {
    let served = alloc.served();
    alloc.validate(cat, &served, mu)?;
    let total = served.iter().fold(Rational::zero(), |a, b| a + b);
    if total.is_zero() {
        return Ok(Rational::from_integer(1));
    }
    Ok(alloc.transfer(cat) / total)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CostEstimate {
    /// Mean minimum normalized cost over samples inside the region.
    pub mean_cost: f64,
    pub covered_mass: f64,
    pub uncovered_mass: f64,
    pub samples: u64,
}

/// Expected minimum normalized cost over the part of the distribution inside
/// the region; mass outside is reported, not averaged.
pub fn expected_min_cost(region: &ServiceRegion, dist: &DemandDistribution, samples: u64, seed: u64) -> Result<CostEstimate, MetricsError> {
    dist.validate()?;
    if dist.dim() != region.k() {
        return Err(MetricsError::Dimension { expected: region.k(), got: dist.dim() });
    }
    let eval = |p: &[Rational]| -> Result<Option<f64>, MetricsError> {
        match region.min_cost_allocation(p) {
            Ok((_, c)) => Ok(Some(rational::to_f64(&c))),
            Err(RegionError::Infeasible) => Ok(None),
            Err(e) => Err(e.into()),
        }
    };
    let (mut covered, mut weighted) = (0.0, 0.0);
    let count;
    if let DemandDistribution::Grid { points, probs } = dist {
        for (p, w) in points.iter().zip(probs) {
            if let Some(c) = eval(p)? {
                covered += w;
                weighted += w * c;
            }
        }
        count = points.len() as u64;
    } else {
        if samples < MIN_SAMPLES {
            return Err(MetricsError::TooFewSamples(samples));
        }
        let w = 1.0 / samples as f64;
        for i in 0..samples {
            if let Some(c) = eval(&dist.sample(seed, i))? {
                covered += w;
                weighted += w * c;
            }
        }
        count = samples;
    }
    let mean_cost = if covered > 0.0 { weighted / covered } else { f64::NAN };
    Ok(CostEstimate { mean_cost, covered_mass: covered, uncovered_mass: 1.0 - covered, samples: count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::{make_mds, make_replication};
    use crate::galois::FieldSpec;
    use crate::rational::{int, ratio};

    fn rep22() -> ServiceRegion {
        ServiceRegion::of_scheme(&make_replication(2, &[2, 2], int(1)).unwrap()).unwrap()
    }

    #[test]
    fn replication_box_coverage() {
        let r = rep22();
        let inside = DemandDistribution::UniformBox { bounds: vec![int(2), int(2)] };
        assert_eq!(region_coverage(&r, &inside, 2000, 1).unwrap().estimate, 1.0);
        let wide = DemandDistribution::UniformBox { bounds: vec![int(4), int(4)] };
        let c = region_coverage(&r, &wide, 4000, 7).unwrap();
        assert!((c.estimate - 0.25).abs() < 3.0 * c.half_width.max(1e-3), "{c:?}");
    }

    #[test]
    fn deterministic_samples() {
        let d = DemandDistribution::TruncExp { rates: vec![1.0, 0.5], bounds: vec![3.0, 3.0] };
        assert_eq!(d.sample(9, 17), d.sample(9, 17));
        assert_ne!(d.sample(9, 17), d.sample(9, 18));
        assert!(d.sample(9, 3).iter().all(|x| *x >= int(0) && *x <= int(3)));
    }

    #[test]
    fn grid_exact() {
        let d = DemandDistribution::Grid { points: vec![vec![int(1), int(1)], vec![int(3), int(0)]], probs: vec![0.75, 0.25] };
        let c = region_coverage(&rep22(), &d, 0, 0).unwrap();
        assert_eq!((c.estimate, c.half_width), (0.75, 0.0));
        let bad = DemandDistribution::Grid { points: vec![vec![int(1), int(1)]], probs: vec![0.5] };
        assert!(matches!(bad.validate(), Err(MetricsError::BadProbabilities(_))));
    }

    #[test]
    fn mixture_grid_sums_to_one() {
        let d = gaussian_mixture_grid(&[int(3), int(3)], 12, &[(vec![2.2, 0.4], 1.0), (vec![0.4, 2.2], 1.0)], 0.3).unwrap();
        d.validate().unwrap();
        if let DemandDistribution::Grid { points, .. } = &d {
            assert_eq!(points.len(), 169);
        }
    }

    #[test]
    fn costs() {
        let s = make_mds(4, 2, &FieldSpec::prime(3).unwrap(), true, int(1)).unwrap();
        let r = ServiceRegion::of_scheme(&s).unwrap();
        let cat = r.catalog();
        // a systematically at 1, a via {a+b, a+2b} at 1/2, b systematically at 1/2.
        let mut a = Allocation::zeros(cat);
        a.rates[0][0] = int(1);
        let pair = cat.sets(0).iter().position(|s| s.servers == [2, 3]).unwrap();
        a.rates[0][pair] = ratio(1, 2);
        a.rates[1][0] = ratio(1, 2);
        assert_eq!(cost_of(cat, &a, int(1)).unwrap(), ratio(5, 4));
        let rep = rep22();
        let (alloc, _) = rep.min_cost_allocation(&[ratio(3, 2), int(1)]).unwrap();
        assert_eq!(cost_of(rep.catalog(), &alloc, int(1)).unwrap(), int(1));
        let mut over = Allocation::zeros(cat);
        over.rates[0][0] = int(2);
        assert!(cost_of(cat, &over, int(1)).is_err());
    }

    #[test]
    fn expected_cost_replication() {
        let d = DemandDistribution::UniformBox { bounds: vec![int(3), int(3)] };
        let e = expected_min_cost(&rep22(), &d, 1000, 3).unwrap();
        assert_eq!(e.mean_cost, 1.0);
        assert!(e.uncovered_mass > 0.3 && e.uncovered_mass < 0.7);
    }
}
