//! Discrete-event fork-join queueing simulation.
//!
//! Requests for object `i` arrive as a Poisson process of rate `λ_i` and are
//! routed to recovery set `j` with probability `λ_{i,j} / λ_i`. Each server of
//! the set receives one sub-task; servers are FCFS queues with exponential
//! service of rate `mu`. A request completes when its last sub-task does.

use alloc::collections::{BinaryHeap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::rational::{self, Rational};
use crate::recovery::RecoveryCatalog;
use crate::region::{Allocation, AllocationError};

pub const DEFAULT_WARMUP: f64 = 0.2;
pub const DEFAULT_MARGIN: f64 = 0.02;
/// Queue lengths are sampled this many times over the horizon for the drift fit.
pub const DRIFT_SAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("allocation does not match the demand: {0}")]
    Allocation(AllocationError),
    #[error("horizon must be positive and finite")]
    BadHorizon,
    #[error("warmup fraction must lie in [0, 1)")]
    BadWarmup,
    #[error("service rate must be positive")]
    BadRate,
}

#[derive(Clone, Debug)]
pub struct SimConfig<'a> {
    pub catalog: &'a RecoveryCatalog,
    pub allocation: &'a Allocation,
    pub demand: &'a [Rational],
    pub mu: Rational,
    pub horizon: f64,
    pub warmup: f64,
    pub margin: f64,
    pub seed: u64,
}

impl<'a> SimConfig<'a> {
    pub fn new(catalog: &'a RecoveryCatalog, allocation: &'a Allocation, demand: &'a [Rational], mu: Rational, horizon: f64, seed: u64) -> Self {
        SimConfig { catalog, allocation, demand, mu, horizon, warmup: DEFAULT_WARMUP, margin: DEFAULT_MARGIN, seed }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimReport {
    /// Sub-tasks per unit time reaching each server after warmup.
    pub arrival_rate: Vec<f64>,
    /// Offered load `arrival_rate / mu`; may exceed 1 for overloaded servers.
    pub utilization: Vec<f64>,
    /// Fraction of post-warmup time each server was busy.
    pub busy_fraction: Vec<f64>,
    /// Time-averaged number of sub-tasks at each server after warmup.
    pub mean_queue: Vec<f64>,
    /// Least-squares slope of sampled queue length against time after warmup.
    pub drift: Vec<f64>,
    /// Queue lengths of every server at each of the evenly spaced sampling
    /// instants after warmup.
    pub queue_trace: Vec<(f64, Vec<usize>)>,
    pub stable: Vec<bool>,
    /// Mean time from arrival to completion of requests arriving after warmup.
    pub mean_response: f64,
    pub completed: u64,
    pub events: u64,
}

impl SimReport {
    pub fn all_stable(&self) -> bool {
        self.stable.iter().all(|&s| s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Kind {
    Arrival(usize),
    Departure(usize),
    Sample,
}

#[derive(Clone, Copy, Debug)]
struct Event {
    time: f64,
    seq: u64,
    kind: Kind,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    // Reversed so the max-heap pops the earliest event.
    fn cmp(&self, other: &Self) -> Ordering {
        other.time.total_cmp(&self.time).then(other.seq.cmp(&self.seq))
    }
}

struct Rng(ChaCha8Rng);

impl Rng {
    fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn exp(&mut self, rate: f64) -> f64 {
        -libm::log(1.0 - self.unit()) / rate
    }
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return 0.0;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

pub fn simulate(cfg: &SimConfig) -> Result<SimReport, SimError> {
    let cat = cfg.catalog;
    cfg.allocation.validate(cat, cfg.demand, Rational::from_integer(i128::MAX / 4)).map_err(SimError::Allocation)?;
    if !(cfg.horizon > 0.0 && cfg.horizon.is_finite()) {
        return Err(SimError::BadHorizon);
    }
    if !(0.0..1.0).contains(&cfg.warmup) {
        return Err(SimError::BadWarmup);
    }
    if !cfg.mu.is_positive() {
        return Err(SimError::BadRate);
    }
    let n = cat.n();
    let mu = rational::to_f64(&cfg.mu);
    let rates: Vec<f64> = cfg.demand.iter().map(rational::to_f64).collect();
    // Cumulative routing probabilities per object.
    let routes: Vec<Vec<f64>> = cfg
        .allocation
        .rates
        .iter()
        .zip(cfg.demand)
        .map(|(row, d)| {
            let mut acc = Rational::zero();
            row.iter()
                .map(|x| {
                    acc += x;
                    if d.is_zero() { 0.0 } else { rational::to_f64(&(acc / d)) }
                })
                .collect()
        })
        .collect();

    let mut rng = Rng(ChaCha8Rng::seed_from_u64(cfg.seed));
    let warm = cfg.horizon * cfg.warmup;
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let mut push = |heap: &mut BinaryHeap<Event>, time: f64, kind: Kind| {
        heap.push(Event { time, seq, kind });
        seq += 1;
    };
    for (i, &r) in rates.iter().enumerate() {
        if r > 0.0 {
            let t = rng.exp(r);
            push(&mut heap, t, Kind::Arrival(i));
        }
    }
    let interval = cfg.horizon / DRIFT_SAMPLES as f64;
    push(&mut heap, interval, Kind::Sample);

    let mut queues: Vec<VecDeque<usize>> = vec![VecDeque::new(); n];
    // (arrival time, sub-tasks outstanding)
    let mut requests: Vec<(f64, usize)> = Vec::new();
    let mut arrivals = vec![0u64; n];
    let mut busy = vec![0.0f64; n];
    let mut area = vec![0.0f64; n];
    let mut trace: Vec<(f64, Vec<usize>)> = Vec::new();
    let (mut completed, mut response_sum, mut events) = (0u64, 0.0f64, 0u64);
    let mut now = 0.0f64;

    while let Some(ev) = heap.pop() {
        if ev.time > cfg.horizon {
            break;
        }
        // Integrate queue state over [now, ev.time] intersected with the measured window.
        let from = now.max(warm);
        if ev.time > from {
            let dt = ev.time - from;
            for s in 0..n {
                let len = queues[s].len();
                if len > 0 {
                    busy[s] += dt;
                    area[s] += dt * len as f64;
                }
            }
        }
        now = ev.time;
        events += 1;
        match ev.kind {
            Kind::Arrival(i) => {
                let u = rng.unit();
                let j = routes[i].iter().position(|&c| u < c).unwrap_or_else(|| routes[i].iter().rposition(|&c| c > 0.0).unwrap_or(0));
                let set = &cat.sets(i)[j];
                let id = requests.len();
                requests.push((now, set.size()));
                for &s in &set.servers {
                    if now >= warm {
                        arrivals[s] += 1;
                    }
                    queues[s].push_back(id);
                    if queues[s].len() == 1 {
                        let t = now + rng.exp(mu);
                        push(&mut heap, t, Kind::Departure(s));
                    }
                }
                let t = now + rng.exp(rates[i]);
                push(&mut heap, t, Kind::Arrival(i));
            }
            Kind::Departure(s) => {
                let id = queues[s].pop_front().expect("departure from an empty queue");
                let req = &mut requests[id];
                req.1 -= 1;
                if req.1 == 0 && req.0 >= warm {
                    completed += 1;
                    response_sum += now - req.0;
                }
                if !queues[s].is_empty() {
                    let t = now + rng.exp(mu);
                    push(&mut heap, t, Kind::Departure(s));
                }
            }
            Kind::Sample => {
                if now >= warm {
                    trace.push((now, queues.iter().map(VecDeque::len).collect()));
                }
                push(&mut heap, now + interval, Kind::Sample);
            }
        }
    }
    // Account for the stretch between the last event and the horizon.
    let from = now.max(warm);
    if cfg.horizon > from {
        let dt = cfg.horizon - from;
        for s in 0..n {
            let len = queues[s].len();
            if len > 0 {
                busy[s] += dt;
                area[s] += dt * len as f64;
            }
        }
    }

    let window = cfg.horizon - warm;
    let arrival_rate: Vec<f64> = arrivals.iter().map(|&a| a as f64 / window).collect();
    let utilization: Vec<f64> = arrival_rate.iter().map(|r| r / mu).collect();
    let stable = utilization.iter().map(|u| *u < 1.0 - cfg.margin).collect();
    Ok(SimReport {
        busy_fraction: busy.iter().map(|b| b / window).collect(),
        mean_queue: area.iter().map(|a| a / window).collect(),
        drift: (0..n).map(|s| slope(&trace.iter().map(|(t, q)| (*t, q[s] as f64)).collect::<Vec<_>>())).collect(),
        queue_trace: trace,
        arrival_rate,
        utilization,
        stable,
        mean_response: if completed > 0 { response_sum / completed as f64 } else { 0.0 },
        completed,
        events,
    })
}
