//! Argument parsing and the subcommands.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use srr_core::codebook::{make_lrc, make_mds, make_replication, make_rm1, make_simplex, LrcProfile, StorageScheme};
use srr_core::combin::{
    build_graph, fractional_matching_number, integral_achievable, is_batch_code, is_bipartite, is_pir_code, matching_number, vertex_cover_number, GraphMode,
};
use srr_core::galois::FieldSpec;
use srr_core::geometry::outer_polytope;
use srr_core::metrics::{cost_of, region_coverage};
use srr_core::rational::{self, Rational};
use srr_core::recovery::{enumerate_with, EnumerateOptions, RecoveryCatalog};
use srr_core::region::{RegionError, RegionPolytope, ServiceRegion};
use srr_core::simq::{simulate, SimConfig};
use srr_core::waterfill::{decompose, lrc_waterfill, mds_waterfill};

use crate::formats::{
    document, invalid, parse_json, qs, read_demand, read_document, AllocationJson, CatalogJson, DistributionJson, GraphJson, GraphStatsJson, LrcJson, RegionJson, SchemeJson, SimJson, WaterfillJson, Q,
};
use crate::reproduce::{reproduce, Figure};
use crate::{CliError, EXIT_NO, EXIT_OK, EXIT_USAGE};

pub const DEFAULT_SEED: u64 = 1;
/// Largest number of grid points `sweep` evaluates.
pub const MAX_SWEEP_POINTS: usize = 1_000_000;

#[derive(Parser, Debug)]
#[command(name = "srr", version, about = "Service rate regions of linear storage codes")]
pub struct Cli {
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a storage scheme from one of the standard families.
    Construct {
        #[command(subcommand)]
        family: Family,
        /// Per-server service rate.
        #[arg(long, default_value = "1", value_parser = parse_rational, global = true)]
        mu: Rational,
    },
    /// List the minimal recovery sets of every object.
    Recovery {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// Exact service rate region (vertices and facets for up to 3 objects).
    Region {
        #[command(flatten)]
        scheme: SchemeArg,
        /// Only these objects, all others at zero demand.
        #[arg(long, value_delimiter = ',')]
        keep: Option<Vec<usize>>,
    },
    /// Whether a demand vector is achievable; exit 2 if not.
    Check {
        #[command(flatten)]
        scheme: SchemeArg,
        #[command(flatten)]
        demand: DemandArg,
    },
    /// Achievability on a regular grid over [0, max]^k.
    Sweep {
        #[command(flatten)]
        scheme: SchemeArg,
        #[arg(long, default_value_t = 8)]
        steps: usize,
        /// Upper end of every axis; defaults to the largest single-object rate.
        #[arg(long, value_parser = parse_rational)]
        max: Option<Rational>,
    },
    /// Geometric outer bound on the region.
    Bounds {
        #[command(flatten)]
        scheme: SchemeArg,
        /// Add the recovery-set counting constraints.
        #[arg(long)]
        counting: bool,
        #[arg(long, value_delimiter = ',')]
        keep: Option<Vec<usize>>,
    },
    /// Waterfilling allocation for MDS or LRC schemes; exit 2 if it fails to serve the demand.
    Waterfill {
        #[command(flatten)]
        scheme: SchemeArg,
        #[command(flatten)]
        demand: DemandArg,
        /// LRC profile; defaults to the one embedded in the scheme, if any.
        #[arg(long)]
        lrc: Option<PathBuf>,
        /// Also emit a per-recovery-set allocation.
        #[arg(long)]
        decompose: bool,
    },
    /// Recovery graph or hypergraph.
    Graph {
        #[command(flatten)]
        scheme: SchemeArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Pairs)]
        mode: ModeArg,
        /// Matching, fractional matching and vertex cover numbers.
        #[arg(long)]
        stats: bool,
    },
    /// Batch/PIR property for `t`, or an integral allocation for a demand; exit 2 if none.
    Batch {
        #[command(flatten)]
        scheme: SchemeArg,
        #[arg(long, conflicts_with = "demand")]
        t: Option<usize>,
        #[arg(long, requires = "t")]
        pir: bool,
        /// Integral demand vector, inline JSON or a file.
        #[arg(long)]
        demand: Option<String>,
    },
    /// Probability mass of a demand distribution inside the region.
    Coverage {
        #[command(flatten)]
        scheme: SchemeArg,
        #[arg(long)]
        dist: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// Defaults to SRR_SEED, then 1.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Minimum download cost of a demand, and the cost of a given allocation.
    Cost {
        #[command(flatten)]
        scheme: SchemeArg,
        #[command(flatten)]
        demand: DemandArg,
        #[arg(long)]
        alloc: Option<PathBuf>,
    },
    /// Fork-join queueing simulation under a static allocation.
    Simulate {
        #[command(flatten)]
        scheme: SchemeArg,
        #[command(flatten)]
        demand: DemandArg,
        /// Defaults to the allocation minimizing the largest server load.
        #[arg(long)]
        alloc: Option<PathBuf>,
        #[arg(long, default_value_t = 1e5)]
        horizon: f64,
        /// Defaults to SRR_SEED, then 1.
        #[arg(long)]
        seed: Option<u64>,
        /// Write sampled queue lengths to this CSV file.
        #[arg(long)]
        queue_csv: Option<PathBuf>,
    },
    /// Write the data behind a figure as CSV files plus a manifest.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct SchemeArg {
    #[arg(long)]
    pub scheme: PathBuf,
}

#[derive(Args, Debug)]
pub struct DemandArg {
    /// Inline JSON array such as '[2,2]', or a file.
    #[arg(long)]
    pub demand: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Pairs,
    Full,
}

#[derive(Subcommand, Debug)]
pub enum Family {
    /// Each object stored uncoded `replicas[i]` times.
    Replication {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        replicas: Vec<usize>,
    },
    /// [n, k] MDS code over GF(q).
    Mds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        nonsystematic: bool,
    },
    /// Binary [2^k - 1, k] Simplex code.
    Simplex {
        #[arg(long)]
        k: usize,
    },
    /// First-order Reed-Muller code of length 2^(k-1).
    Rm1 {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        systematic: bool,
    },
    /// Pyramid LRC; the profile is embedded in the scheme document.
    Lrc {
        /// The (12, 4) layout with (4, 2) locality.
        #[arg(long, conflicts_with_all = ["k", "ell", "r", "globals"])]
        example: bool,
        #[arg(long, required_unless_present = "example")]
        k: Option<usize>,
        #[arg(long, required_unless_present = "example")]
        ell: Option<usize>,
        #[arg(long, required_unless_present = "example")]
        r: Option<usize>,
        #[arg(long, default_value_t = 0)]
        globals: usize,
        #[arg(long, default_value_t = 13)]
        q: u32,
    },
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("srr: {e}");
            e.exit_code()
        }
    }
}

/// Command output and the exit code it implies.
pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn json<T: Serialize>(kind: &str, body: &T) -> Self {
        Output::json_with(kind, body, EXIT_OK)
    }

    fn json_with<T: Serialize>(kind: &str, body: &T, code: u8) -> Self {
        let mut text = serde_json::to_string_pretty(&document(kind, body)).expect("documents serialize");
        text.push('\n');
        Output { text, code }
    }

    fn csv(rows: Vec<Vec<String>>) -> Self {
        Output { text: csv_text(&rows), code: EXIT_OK }
    }
}

pub fn csv_text(rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

pub fn execute(cli: &Cli) -> Result<u8, CliError> {
    let out = command(&cli.command, cli.format)?;
    match &cli.out {
        Some(path) => write_file(path, &out.text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(out.text.as_bytes()).map_err(|e| io_error("standard output", e))?;
        }
    }
    Ok(out.code)
}

fn io_error(path: &str, source: std::io::Error) -> CliError {
    CliError::Io { path: path.into(), source }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| io_error(&path.display().to_string(), e))
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| io_error(&path.display().to_string(), e))
}

fn load_json(path: &Path) -> Result<Value, CliError> {
    parse_json(&read_file(path)?, &path.display().to_string())
}

pub fn load_scheme(path: &Path) -> Result<(StorageScheme, Option<LrcProfile>), CliError> {
    let doc: SchemeJson = read_document(load_json(path)?, "scheme", &path.display().to_string())?;
    let s = doc.scheme()?;
    Ok((s, doc.lrc.as_ref().map(LrcJson::profile)))
}

fn load_demand(arg: &str, k: usize) -> Result<Vec<Rational>, CliError> {
    let trimmed = arg.trim_start();
    let (value, origin) = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        (parse_json(arg, "--demand")?, "--demand".to_string())
    } else {
        (load_json(Path::new(arg))?, arg.to_string())
    };
    let d = read_demand(value, &origin)?;
    if d.len() != k {
        return Err(CliError::Invalid(format!("demand has {} entries, the scheme stores {k} objects", d.len())));
    }
    if d.iter().any(|x| *x < Rational::from_integer(0)) {
        return Err(CliError::Invalid("demand entries must be non-negative".into()));
    }
    Ok(d)
}

fn catalog(s: &StorageScheme, max_size: Option<usize>) -> Result<RecoveryCatalog, CliError> {
    enumerate_with(s, EnumerateOptions { max_size, ..Default::default() }).map_err(invalid)
}

fn region_of(s: &StorageScheme) -> Result<ServiceRegion, CliError> {
    ServiceRegion::new(catalog(s, None)?, s.mu()).map_err(invalid)
}

fn check_keep(keep: &[usize], k: usize) -> Result<(), CliError> {
    if keep.is_empty() || keep.iter().any(|&i| i >= k) {
        return Err(CliError::Invalid(format!("--keep must list object indices below {k}")));
    }
    Ok(())
}

/// Resolves a seed: the flag, then SRR_SEED, then the default.
pub fn seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("SRR_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Invalid(format!("SRR_SEED is not an unsigned integer: {v:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn no_csv(name: &str) -> CliError {
    CliError::Usage(format!("{name} has no CSV output; use --format json"))
}

fn fmt_q(x: &Rational) -> String {
    x.to_string()
}

pub fn polytope_csv(p: &RegionPolytope) -> Vec<Vec<String>> {
    let names = |prefix: &str| (0..p.dim).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>();
    match &p.vertices {
        Some(vs) => {
            let mut rows = vec![names("lambda")];
            rows.extend(vs.iter().map(|v| v.iter().map(fmt_q).collect()));
            rows
        }
        None => {
            let mut header = names("a");
            header.push("b".into());
            let mut rows = vec![header];
            rows.extend(p.halfspaces.iter().map(|h| h.a.iter().chain([&h.b]).map(fmt_q).collect()));
            rows
        }
    }
}

fn polytope_output(p: &RegionPolytope, format: Format) -> Output {
    match format {
        Format::Json => Output::json("region", &RegionJson::of(p)),
        Format::Csv => Output::csv(polytope_csv(p)),
    }
}

#[derive(Serialize)]
struct CheckJson {
    achievable: bool,
    demand: Vec<Q>,
    #[serde(skip_serializing_if = "Option::is_none")]
    allocation: Option<AllocationJson>,
}

#[derive(Serialize)]
struct SweepPoint {
    demand: Vec<Q>,
    achievable: bool,
}

#[derive(Serialize)]
struct SweepJson {
    steps: usize,
    max: Q,
    points: Vec<SweepPoint>,
}

#[derive(Serialize)]
struct PropertyJson {
    property: &'static str,
    t: usize,
    holds: bool,
}

#[derive(Serialize)]
struct IntegralJson {
    demand: Vec<Q>,
    integral: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    allocation: Option<AllocationJson>,
}

#[derive(Serialize)]
struct CoverageJson {
    estimate: f64,
    half_width: f64,
    samples: u64,
    hits: u64,
    seed: u64,
}

#[derive(Serialize)]
struct CostJson {
    demand: Vec<Q>,
    achievable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_cost: Option<Q>,
    #[serde(skip_serializing_if = "Option::is_none")]
    allocation: Option<AllocationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    given_cost: Option<Q>,
}

fn command(cmd: &Command, format: Format) -> Result<Output, CliError> {
    match cmd {
        Command::Construct { family, mu } => {
            if format == Format::Csv {
                return Err(no_csv("construct"));
            }
            let (s, profile) = construct(family, *mu)?;
            Ok(Output::json("scheme", &SchemeJson::of(&s, profile.as_ref())))
        }
        Command::Recovery { scheme, max_size } => {
            let (s, _) = load_scheme(scheme)?;
            let cat = catalog(&s, *max_size)?;
            Ok(match format {
                Format::Json => Output::json("catalog", &CatalogJson::of(&cat)),
                Format::Csv => {
                    let mut rows = vec![vec!["object".into(), "set".into(), "size".into(), "servers".into()]];
                    for i in 0..cat.k() {
                        for (j, r) in cat.sets(i).iter().enumerate() {
                            let servers: Vec<String> = r.servers.iter().map(usize::to_string).collect();
                            rows.push(vec![i.to_string(), j.to_string(), r.size().to_string(), servers.join(" ")]);
                        }
                    }
                    Output::csv(rows)
                }
            })
        }
        Command::Region { scheme, keep } => {
            let (s, _) = load_scheme(&scheme.scheme)?;
            let mut cat = catalog(&s, None)?;
            if let Some(keep) = keep {
                check_keep(keep, s.k())?;
                cat = cat.restrict(keep);
            }
            let r = ServiceRegion::new(cat, s.mu()).map_err(invalid)?;
            let p = r.polytope().map_err(|e| match e {
                RegionError::TooManyObjects(k) => CliError::Invalid(format!("the exact region is computed for at most 3 objects (got {k}); use --keep to slice")),
                other => invalid(other),
            })?;
            Ok(polytope_output(&p, format))
        }
        Command::Check { scheme, demand } => {
            let (s, _) = load_scheme(&scheme.scheme)?;
            let d = load_demand(&demand.demand, s.k())?;
            let r = region_of(&s)?;
            let witness = r.is_achievable(&d).map_err(invalid)?;
            let code = if witness.is_some() { EXIT_OK } else { EXIT_NO };
            match format {
                Format::Json => {
                    let body = CheckJson { achievable: witness.is_some(), demand: qs(&d), allocation: witness.map(|a| AllocationJson::of(&a, r.catalog())) };
                    Ok(Output::json_with("check", &body, code))
                }
                Format::Csv => Ok(Output { text: csv_text(&[vec!["achievable".into()], vec![(code == EXIT_OK).to_string()]]), code }),
            }
        }
        Command::Sweep { scheme, steps, max } => {
            let (s, _) = load_scheme(&scheme.scheme)?;
            let r = region_of(&s)?;
            let k = s.k();
            if *steps == 0 {
                return Err(CliError::Invalid("--steps must be positive".into()));
            }
            let count = (steps + 1).checked_pow(k as u32).filter(|&c| c <= MAX_SWEEP_POINTS);
            let count = count.ok_or_else(|| CliError::Invalid(format!("grid exceeds {MAX_SWEEP_POINTS} points")))?;
            let top = match max {
                Some(m) => *m,
                None => {
                    let mut best = Rational::from_integer(0);
                    for i in 0..k {
                        let fixed: Vec<Option<Rational>> = (0..k).map(|j| (j != i).then(|| Rational::from_integer(0))).collect();
                        best = best.max(r.max_along(&fixed, i).map_err(invalid)?);
                    }
                    best
                }
            };
            let mut points = Vec::with_capacity(count);
            for idx in 0..count {
                let mut rest = idx;
                let d: Vec<Rational> = (0..k)
                    .map(|_| {
                        let c = rest % (steps + 1);
                        rest /= steps + 1;
                        top * Rational::new(c as i128, *steps as i128)
                    })
                    .collect();
                let ok = r.is_achievable(&d).map_err(invalid)?.is_some();
                points.push(SweepPoint { demand: qs(&d), achievable: ok });
            }
            Ok(match format {
                Format::Json => Output::json("sweep", &SweepJson { steps: *steps, max: Q(top), points }),
                Format::Csv => {
                    let mut header: Vec<String> = (0..k).map(|i| format!("lambda{i}")).collect();
                    header.push("achievable".into());
                    let mut rows = vec![header];
                    rows.extend(points.iter().map(|p| p.demand.iter().map(|q| fmt_q(&q.0)).chain([p.achievable.to_string()]).collect()));
                    Output::csv(rows)
                }
            })
        }
        Command::Bounds { scheme, counting, keep } => {
            let (s, _) = load_scheme(&scheme.scheme)?;
            let cat = if *counting { Some(catalog(&s, None)?) } else { None };
            let mut p = outer_polytope(&s, cat.as_ref(), s.mu()).map_err(invalid)?;
            if let Some(keep) = keep {
                check_keep(keep, s.k())?;
                p = p.slice_zero(keep);
            }
            Ok(polytope_output(&p, format))
        }
        Command::Waterfill { scheme, demand, lrc, decompose: want_alloc } => {
            if format == Format::Csv {
                return Err(no_csv("waterfill"));
            }
            let (s, embedded) = load_scheme(&scheme.scheme)?;
            let d = load_demand(&demand.demand, s.k())?;
            let profile = match lrc {
                Some(path) => Some(read_document::<LrcJson>(load_json(path)?, "lrc", &path.display().to_string())?.profile()),
                None => embedded,
            };
            let result = match &profile {
                Some(p) => lrc_waterfill(&s, p, &d).map_err(invalid)?,
                None if s.is_mds() => mds_waterfill(s.n(), s.k(), s.mu(), &d).map_err(invalid)?,
                None => return Err(CliError::Invalid("waterfilling needs an MDS scheme or an LRC profile".into())),
            };
            let mut body = WaterfillJson::of(&result);
            if *want_alloc && result.feasible {
                let cat = catalog(&s, None)?;
                let a = decompose(&cat, &d, s.mu(), &result, profile.as_ref()).map_err(invalid)?;
                body.allocation = Some(AllocationJson::of(&a, &cat));
            }
            Ok(Output::json_with("waterfill", &body, if result.feasible { EXIT_OK } else { EXIT_NO }))
        }
        Command::Graph { scheme, mode, stats } => {
            if format == Format::Csv {
                return Err(no_csv("graph"));
            }
            let (s, _) = load_scheme(&scheme.scheme)?;
            let cat = catalog(&s, None)?;
            let mode = match mode {
                ModeArg::Pairs => GraphMode::PairsOnly,
                ModeArg::Full => GraphMode::Full,
            };
            let g = build_graph(&s, &cat, mode);
            let mut body = GraphJson::of(&g);
            if *stats {
                body.stats = Some(GraphStatsJson {
                    matching_number: matching_number(&g).ok(),
                    fractional_matching_number: Q(fractional_matching_number(&g).map_err(invalid)?),
                    vertex_cover_number: vertex_cover_number(&g).ok(),
                    bipartite: is_bipartite(&g).ok(),
                });
            }
            Ok(Output::json("graph", &body))
        }
        Command::Batch { scheme, t, pir, demand } => {
            if format == Format::Csv {
                return Err(no_csv("batch"));
            }
            let (s, _) = load_scheme(&scheme.scheme)?;
            let cat = catalog(&s, None)?;
            match (t, demand) {
                (Some(t), _) => {
                    let holds = if *pir { is_pir_code(&cat, s.mu(), *t) } else { is_batch_code(&cat, s.mu(), *t) }.map_err(invalid)?;
                    let body = PropertyJson { property: if *pir { "pir" } else { "batch" }, t: *t, holds };
                    Ok(Output::json_with("property", &body, if holds { EXIT_OK } else { EXIT_NO }))
                }
                (None, Some(arg)) => {
                    let d = load_demand(arg, s.k())?;
                    let w = integral_achievable(&cat, s.mu(), &d).map_err(invalid)?;
                    let code = if w.is_some() { EXIT_OK } else { EXIT_NO };
                    let body = IntegralJson { demand: qs(&d), integral: w.is_some(), allocation: w.map(|a| AllocationJson::of(&a, &cat)) };
                    Ok(Output::json_with("integral", &body, code))
                }
                (None, None) => Err(CliError::Usage("batch needs --t or --demand".into())),
            }
        }
        Command::Coverage { scheme, dist, samples, seed: flag } => {
            let (s, _) = load_scheme(&scheme.scheme)?;
            let dj: DistributionJson = read_document(load_json(dist)?, "distribution", &dist.display().to_string())?;
            let dist = dj.distribution()?;
            let seed = seed(*flag)?;
            let c = region_coverage(&region_of(&s)?, &dist, *samples, seed).map_err(invalid)?;
            let body = CoverageJson { estimate: c.estimate, half_width: c.half_width, samples: c.samples, hits: c.hits, seed };
            Ok(match format {
                Format::Json => Output::json("coverage", &body),
                Format::Csv => Output::csv(vec![
                    ["estimate", "half_width", "samples", "hits", "seed"].map(String::from).to_vec(),
                    vec![body.estimate.to_string(), body.half_width.to_string(), body.samples.to_string(), body.hits.to_string(), body.seed.to_string()],
                ]),
            })
        }
        Command::Cost { scheme, demand, alloc } => {
            if format == Format::Csv {
                return Err(no_csv("cost"));
            }
            let (s, _) = load_scheme(&scheme.scheme)?;
            let d = load_demand(&demand.demand, s.k())?;
            let r = region_of(&s)?;
            let cat = r.catalog();
            let given_cost = match alloc {
                Some(path) => {
                    let aj: AllocationJson = read_document(load_json(path)?, "allocation", &path.display().to_string())?;
                    let a = aj.allocation(cat)?;
                    a.validate(cat, &d, s.mu()).map_err(invalid)?;
                    Some(Q(cost_of(cat, &a, s.mu()).map_err(invalid)?))
                }
                None => None,
            };
            match r.min_cost_allocation(&d) {
                Ok((a, c)) => {
                    let body = CostJson { demand: qs(&d), achievable: true, min_cost: Some(Q(c)), allocation: Some(AllocationJson::of(&a, cat)), given_cost };
                    Ok(Output::json("cost", &body))
                }
                Err(RegionError::Infeasible) => {
                    let body = CostJson { demand: qs(&d), achievable: false, min_cost: None, allocation: None, given_cost };
                    Ok(Output::json_with("cost", &body, EXIT_NO))
                }
                Err(e) => Err(invalid(e)),
            }
        }
        Command::Simulate { scheme, demand, alloc, horizon, seed: flag, queue_csv } => {
            if format == Format::Csv {
                return Err(no_csv("simulate"));
            }
            let (s, _) = load_scheme(&scheme.scheme)?;
            let d = load_demand(&demand.demand, s.k())?;
            let cat = catalog(&s, None)?;
            let a = match alloc {
                Some(path) => read_document::<AllocationJson>(load_json(path)?, "allocation", &path.display().to_string())?.allocation(&cat)?,
                None => ServiceRegion::new(cat.clone(), s.mu()).and_then(|r| r.balanced_allocation(&d)).map_err(invalid)?.0,
            };
            let seed = seed(*flag)?;
            let report = simulate(&SimConfig::new(&cat, &a, &d, s.mu(), *horizon, seed)).map_err(invalid)?;
            if let Some(path) = queue_csv {
                let mut header = vec!["time".to_string()];
                header.extend((0..cat.n()).map(|j| format!("server{j}")));
                let mut rows = vec![header];
                rows.extend(report.queue_trace.iter().map(|(t, q)| std::iter::once(t.to_string()).chain(q.iter().map(usize::to_string)).collect()));
                write_file(path, &csv_text(&rows))?;
            }
            Ok(Output::json("simulation", &SimJson::of(&report, *horizon, seed, s.mu(), &d)))
        }
        Command::Reproduce { figure, out_dir } => {
            let manifest = reproduce(*figure, out_dir)?;
            let mut text = serde_json::to_string_pretty(&manifest).expect("documents serialize");
            text.push('\n');
            Ok(Output { text, code: EXIT_OK })
        }
    }
}

pub fn construct(family: &Family, mu: Rational) -> Result<(StorageScheme, Option<LrcProfile>), CliError> {
    let field = |q: u32| FieldSpec::of_order(q).map_err(invalid);
    let s = match family {
        Family::Replication { k, replicas } => {
            if replicas.len() != *k {
                return Err(CliError::Invalid(format!("--replicas lists {} counts for k = {k}", replicas.len())));
            }
            make_replication(*k, replicas, mu)
        }
        Family::Mds { n, k, q, nonsystematic } => make_mds(*n, *k, &field(*q)?, !nonsystematic, mu),
        Family::Simplex { k } => make_simplex(*k, mu),
        Family::Rm1 { k, systematic } => make_rm1(*k, *systematic, mu),
        Family::Lrc { example, k, ell, r, globals, q } => {
            let spec = field(*q)?;
            let profile = if *example {
                LrcProfile::example_12_4()
            } else {
                let (k, ell, r) = (k.unwrap_or(0), ell.unwrap_or(0), r.unwrap_or(0));
                LrcProfile::pyramid(k, ell, r, *globals, &spec).map_err(invalid)?
            };
            let s = make_lrc(&profile, &spec, mu).map_err(invalid)?;
            return Ok((s, Some(profile)));
        }
    };
    Ok((s.map_err(invalid)?, None))
}
