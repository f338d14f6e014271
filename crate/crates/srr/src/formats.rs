//! JSON documents read and written by the command-line tool.
//!
//! Every document written carries `"schema": "srr/1"` and a `"kind"` tag.
//! Rationals are written as `"num/den"` strings (plain integers without the
//! denominator) and read from such strings, decimal strings or JSON numbers.

use std::fmt;

use serde::de::{self, DeserializeOwned, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

use srr_core::codebook::{LocalGroup, LrcProfile, StorageScheme};
use srr_core::combin::{GraphMode, RecoveryHypergraph};
use srr_core::galois::{Fe, FieldSpec};
use srr_core::metrics::{gaussian_mixture_grid, DemandDistribution};
use srr_core::rational::{self, Rational};
use srr_core::recovery::{RecoveryCatalog, RecoverySet};
use srr_core::region::{Allocation, HalfSpace, RegionPolytope};
use srr_core::simq::SimReport;
use srr_core::waterfill::WaterfillResult;

use crate::CliError;

pub const SCHEMA: &str = "srr/1";

/// An exact rational as it appears in JSON.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as \"num/den\", a decimal string or a number")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
                rational::parse(v).map(Q).map_err(|_| E::custom(format!("not a rational: {v:?}")))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
                Ok(Q(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Q, E> {
                Ok(Q(Rational::from_integer(v.into())))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Q, E> {
                // Shortest round-trip decimal, then exact.
                self.visit_str(&v.to_string())
            }
        }
        d.deserialize_any(V)
    }
}

pub fn qs(v: &[Rational]) -> Vec<Q> {
    v.iter().copied().map(Q).collect()
}

pub fn unq(v: &[Q]) -> Vec<Rational> {
    v.iter().map(|q| q.0).collect()
}

/// Wraps a serializable body with the schema and kind tags.
pub fn document<T: Serialize>(kind: &str, body: &T) -> Value {
    let mut map = Map::new();
    map.insert("schema".into(), SCHEMA.into());
    map.insert("kind".into(), kind.into());
    match serde_json::to_value(body).expect("documents serialize") {
        Value::Object(fields) => map.extend(fields),
        other => {
            map.insert("value".into(), other);
        }
    }
    Value::Object(map)
}

pub fn parse_json(text: &str, origin: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Json(format!("{origin}: {e}")))
}

/// Decodes a document of the given kind. `schema` and `kind`, when present,
/// must match; both may be omitted in hand-written input.
pub fn read_document<T: DeserializeOwned>(value: Value, kind: &str, origin: &str) -> Result<T, CliError> {
    if let Value::Object(map) = &value {
        if let Some(s) = map.get("schema") {
            if s != SCHEMA {
                return Err(CliError::Invalid(format!("{origin}: unsupported schema {s}, expected \"{SCHEMA}\"")));
            }
        }
        if let Some(k) = map.get("kind") {
            if k != kind {
                return Err(CliError::Invalid(format!("{origin}: expected a {kind} document, found kind {k}")));
            }
        }
    }
    serde_json::from_value(value).map_err(|e| CliError::Json(format!("{origin}: {e}")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldJson {
    pub p: u32,
    #[serde(default = "one")]
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

fn one() -> u32 {
    1
}

impl FieldJson {
    pub fn of(spec: &FieldSpec) -> Self {
        let m = spec.degree();
        FieldJson { p: spec.characteristic(), m, modulus: (m > 1).then(|| spec.modulus().to_vec()) }
    }

    pub fn spec(&self) -> Result<FieldSpec, CliError> {
        FieldSpec::new(self.p, self.m, self.modulus.clone()).map_err(invalid)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupJson {
    pub objects: Vec<usize>,
    /// Element indices, one vector per local parity.
    pub parities: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LrcJson {
    pub k: usize,
    pub ell: usize,
    pub r: usize,
    pub groups: Vec<GroupJson>,
    pub global_parities: usize,
}

impl LrcJson {
    pub fn of(p: &LrcProfile) -> Self {
        LrcJson {
            k: p.k,
            ell: p.ell,
            r: p.r,
            groups: p
                .groups
                .iter()
                .map(|g| GroupJson { objects: g.objects.clone(), parities: g.parities.iter().map(|c| indices(c)).collect() })
                .collect(),
            global_parities: p.global_parities,
        }
    }

    pub fn profile(&self) -> LrcProfile {
        LrcProfile {
            k: self.k,
            ell: self.ell,
            r: self.r,
            groups: self
                .groups
                .iter()
                .map(|g| LocalGroup { objects: g.objects.clone(), parities: g.parities.iter().map(|c| elements(c)).collect() })
                .collect(),
            global_parities: self.global_parities,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeJson {
    pub field: FieldJson,
    pub k: usize,
    pub n: usize,
    pub mu: Q,
    /// Element indices; column `j` is what server `j` stores.
    pub columns: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lrc: Option<LrcJson>,
}

fn indices(v: &[Fe]) -> Vec<u32> {
    v.iter().map(|x| x.index()).collect()
}

fn elements(v: &[u32]) -> Vec<Fe> {
    v.iter().map(|&x| Fe(x)).collect()
}

impl SchemeJson {
    pub fn of(s: &StorageScheme, lrc: Option<&LrcProfile>) -> Self {
        SchemeJson {
            field: FieldJson::of(s.field().spec()),
            k: s.k(),
            n: s.n(),
            mu: Q(s.mu()),
            columns: s.columns().iter().map(|c| indices(c)).collect(),
            lrc: lrc.map(LrcJson::of),
        }
    }

    pub fn scheme(&self) -> Result<StorageScheme, CliError> {
        if self.columns.len() != self.n {
            return Err(CliError::Invalid(format!("n = {} but {} columns given", self.n, self.columns.len())));
        }
        let spec = self.field.spec()?;
        if let Some(x) = self.columns.iter().flatten().find(|&&x| x >= spec.order()) {
            return Err(CliError::Invalid(format!("element {x} is outside GF({})", spec.order())));
        }
        let cols = self.columns.iter().map(|c| elements(c)).collect();
        StorageScheme::explicit(&spec, self.k, cols, self.mu.0).map_err(invalid)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogJson {
    pub n: usize,
    pub k: usize,
    /// Per object, its recovery sets as server index lists.
    pub objects: Vec<Vec<Vec<usize>>>,
}

impl CatalogJson {
    pub fn of(cat: &RecoveryCatalog) -> Self {
        CatalogJson { n: cat.n(), k: cat.k(), objects: sets_of(cat) }
    }

    pub fn catalog(&self) -> Result<RecoveryCatalog, CliError> {
        if self.objects.len() != self.k {
            return Err(CliError::Invalid(format!("k = {} but {} objects listed", self.k, self.objects.len())));
        }
        if let Some(j) = self.objects.iter().flatten().flatten().find(|&&j| j >= self.n) {
            return Err(CliError::Invalid(format!("server {j} out of range for n = {}", self.n)));
        }
        let sets = self
            .objects
            .iter()
            .enumerate()
            .map(|(i, l)| l.iter().map(|s| RecoverySet { object: i, servers: s.clone() }).collect())
            .collect();
        Ok(RecoveryCatalog::from_sets(self.n, sets))
    }
}

fn sets_of(cat: &RecoveryCatalog) -> Vec<Vec<Vec<usize>>> {
    (0..cat.k()).map(|i| cat.sets(i).iter().map(|s| s.servers.clone()).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfSpaceJson {
    pub a: Vec<Q>,
    pub b: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionJson {
    pub dim: usize,
    pub halfspaces: Vec<HalfSpaceJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<Q>>>,
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area: Option<Q>,
}

impl RegionJson {
    pub fn of(p: &RegionPolytope) -> Self {
        RegionJson {
            dim: p.dim,
            halfspaces: p.halfspaces.iter().map(|h| HalfSpaceJson { a: qs(&h.a), b: Q(h.b) }).collect(),
            vertices: p.vertices.as_ref().map(|vs| vs.iter().map(|v| qs(v)).collect()),
            exact: p.exact,
            area: p.area().map(Q),
        }
    }

    pub fn polytope(&self) -> RegionPolytope {
        let hs = self.halfspaces.iter().map(|h| HalfSpace { a: unq(&h.a), b: h.b.0 }).collect();
        RegionPolytope::from_halfspaces(self.dim, hs, self.exact)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AllocationJson {
    /// `rates[i][j]`: rate of object `i` served by its `j`-th recovery set.
    pub rates: Vec<Vec<Q>>,
    /// The recovery sets the rates refer to, in catalog order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<Vec<Vec<Vec<usize>>>>,
}

impl AllocationJson {
    pub fn of(a: &Allocation, cat: &RecoveryCatalog) -> Self {
        AllocationJson { rates: a.rates.iter().map(|r| qs(r)).collect(), sets: Some(sets_of(cat)) }
    }

    pub fn allocation(&self, cat: &RecoveryCatalog) -> Result<Allocation, CliError> {
        if let Some(sets) = &self.sets {
            if *sets != sets_of(cat) {
                return Err(CliError::Invalid("allocation lists recovery sets that differ from the scheme's catalog".into()));
            }
        }
        let shape_ok = self.rates.len() == cat.k() && self.rates.iter().enumerate().all(|(i, r)| r.len() == cat.count(i));
        if !shape_ok {
            return Err(CliError::Invalid("allocation shape does not match the recovery catalog".into()));
        }
        Ok(Allocation { rates: self.rates.iter().map(|r| unq(r)).collect() })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepJson {
    pub amount: Q,
    pub servers: Vec<usize>,
    #[serde(default)]
    pub group: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaterfillJson {
    pub feasible: bool,
    pub residual: Q,
    pub loads: Vec<Q>,
    pub log: Vec<StepJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allocation: Option<AllocationJson>,
}

impl WaterfillJson {
    pub fn of(r: &WaterfillResult) -> Self {
        WaterfillJson {
            feasible: r.feasible,
            residual: Q(r.residual),
            loads: qs(&r.loads),
            log: r.log.iter().map(|s| StepJson { amount: Q(s.amount), servers: s.servers.clone(), group: s.group }).collect(),
            allocation: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub vertices: Vec<usize>,
    pub label: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphStatsJson {
    /// `None` when the graph is too large for exact search.
    pub matching_number: Option<usize>,
    pub fractional_matching_number: Q,
    pub vertex_cover_number: Option<usize>,
    pub bipartite: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    /// `"pairs"` or `"full"`.
    pub mode: String,
    pub servers: usize,
    /// Dummy vertex `servers + d` pads systematic server `dummy_of[d]`.
    pub dummy_of: Vec<usize>,
    pub edges: Vec<EdgeJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<GraphStatsJson>,
}

pub fn mode_name(m: GraphMode) -> &'static str {
    match m {
        GraphMode::PairsOnly => "pairs",
        GraphMode::Full => "full",
    }
}

impl GraphJson {
    pub fn of(g: &RecoveryHypergraph) -> Self {
        GraphJson {
            mode: mode_name(g.mode).into(),
            servers: g.servers,
            dummy_of: g.dummy_of.clone(),
            edges: g.edges.iter().map(|e| EdgeJson { vertices: e.vertices.clone(), label: e.label }).collect(),
            stats: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenterJson {
    pub mean: Vec<f64>,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DistributionJson {
    UniformBox { bounds: Vec<Q> },
    TruncExp { rates: Vec<f64>, bounds: Vec<f64> },
    Grid { points: Vec<Vec<Q>>, probs: Vec<f64> },
    GaussianMixture { bounds: Vec<Q>, steps: usize, centers: Vec<CenterJson>, sigma: f64 },
}

impl DistributionJson {
    pub fn distribution(&self) -> Result<DemandDistribution, CliError> {
        let d = match self {
            DistributionJson::UniformBox { bounds } => DemandDistribution::UniformBox { bounds: unq(bounds) },
            DistributionJson::TruncExp { rates, bounds } => DemandDistribution::TruncExp { rates: rates.clone(), bounds: bounds.clone() },
            DistributionJson::Grid { points, probs } => DemandDistribution::Grid { points: points.iter().map(|p| unq(p)).collect(), probs: probs.clone() },
            DistributionJson::GaussianMixture { bounds, steps, centers, sigma } => {
                let centers: Vec<(Vec<f64>, f64)> = centers.iter().map(|c| (c.mean.clone(), c.weight)).collect();
                gaussian_mixture_grid(&unq(bounds), *steps, &centers, *sigma).map_err(invalid)?
            }
        };
        d.validate().map_err(invalid)?;
        Ok(d)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimJson {
    pub horizon: f64,
    pub seed: u64,
    pub mu: Q,
    pub demand: Vec<Q>,
    pub arrival_rate: Vec<f64>,
    pub utilization: Vec<f64>,
    pub busy_fraction: Vec<f64>,
    pub mean_queue: Vec<f64>,
    pub drift: Vec<f64>,
    pub stable: Vec<bool>,
    pub all_stable: bool,
    pub mean_response: f64,
    pub completed: u64,
    pub events: u64,
}

impl SimJson {
    pub fn of(r: &SimReport, horizon: f64, seed: u64, mu: Rational, demand: &[Rational]) -> Self {
        SimJson {
            horizon,
            seed,
            mu: Q(mu),
            demand: qs(demand),
            arrival_rate: r.arrival_rate.clone(),
            utilization: r.utilization.clone(),
            busy_fraction: r.busy_fraction.clone(),
            mean_queue: r.mean_queue.clone(),
            drift: r.drift.clone(),
            stable: r.stable.clone(),
            all_stable: r.all_stable(),
            mean_response: r.mean_response,
            completed: r.completed,
            events: r.events,
        }
    }
}

/// A demand vector: a bare array or `{"demand": [...]}`.
pub fn read_demand(value: Value, origin: &str) -> Result<Vec<Rational>, CliError> {
    #[derive(Deserialize)]
    struct Wrapped {
        demand: Vec<Q>,
    }
    let v: Vec<Q> = match value {
        Value::Array(_) => serde_json::from_value(value).map_err(|e| CliError::Json(format!("{origin}: {e}")))?,
        other => read_document::<Wrapped>(other, "demand", origin)?.demand,
    };
    Ok(unq(&v))
}

pub fn invalid<E: fmt::Display>(e: E) -> CliError {
    CliError::Invalid(e.to_string())
}
