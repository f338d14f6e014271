//! CSV data behind the published figures, with a manifest of the equivalent
//! `srr` invocations.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};

use srr_core::codebook::{make_mds, make_replication, make_rm1, make_simplex, StorageScheme};
use srr_core::combin::{build_graph, integral_achievable, GraphMode};
use srr_core::galois::{Fe, FieldSpec};
use srr_core::geometry::outer_polytope;
use srr_core::rational::{int, Rational};
use srr_core::recovery::{enumerate_recovery_sets, RecoveryCatalog};
use srr_core::region::{RegionPolytope, ServiceRegion};

use crate::cli::{csv_text, polytope_csv, write_file};
use crate::formats::{document, invalid, SchemeJson};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// Replication, MDS and hybrid regions of two objects on four servers.
    Fig1,
    /// Four eight-server schemes for two objects.
    Fig3,
    /// First-order Reed-Muller [8, 4] region at zero demand for objects 1 and 2.
    Fig10Slice,
    /// Fractional and integral service of (1, 3, 0) by the [7, 3] Simplex code.
    Fig12,
}

impl Figure {
    fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig3 => "fig3",
            Figure::Fig10Slice => "fig10-slice",
            Figure::Fig12 => "fig12",
        }
    }
}

#[derive(Serialize)]
struct FileEntry {
    path: String,
    description: String,
}

struct Run {
    dir: PathBuf,
    files: Vec<FileEntry>,
    calls: Vec<String>,
    results: Map<String, Value>,
}

impl Run {
    fn file(&mut self, name: &str, text: &str, description: &str) -> Result<(), CliError> {
        write_file(&self.dir.join(name), text)?;
        self.files.push(FileEntry { path: name.into(), description: description.into() });
        Ok(())
    }

    fn scheme(&mut self, name: &str, s: &StorageScheme, call: Option<&str>) -> Result<String, CliError> {
        let file = format!("{name}.scheme.json");
        let mut text = serde_json::to_string_pretty(&document("scheme", &SchemeJson::of(s, None))).expect("documents serialize");
        text.push('\n');
        self.file(&file, &text, "storage scheme")?;
        if let Some(c) = call {
            self.calls.push(format!("srr construct {c} --out {file}"));
        }
        Ok(file)
    }

    fn vertices(&mut self, name: &str, p: &RegionPolytope, call: String, description: &str) -> Result<(), CliError> {
        let file = format!("{name}.csv");
        self.file(&file, &csv_text(&polytope_csv(p)), description)?;
        self.calls.push(format!("srr --format csv {call} --out {file}"));
        Ok(())
    }
}

fn explicit(q: u32, k: usize, columns: &[&[u32]]) -> Result<StorageScheme, CliError> {
    let spec = FieldSpec::of_order(q).map_err(invalid)?;
    let cols = columns.iter().map(|c| c.iter().map(|&x| Fe(x)).collect()).collect();
    StorageScheme::explicit(&spec, k, cols, int(1)).map_err(invalid)
}

fn exact(s: &StorageScheme) -> Result<RegionPolytope, CliError> {
    ServiceRegion::of_scheme(s).and_then(|r| r.polytope()).map_err(invalid)
}

fn catalog(s: &StorageScheme) -> Result<RecoveryCatalog, CliError> {
    enumerate_recovery_sets(s).map_err(invalid)
}

fn area(p: &RegionPolytope) -> Value {
    p.area().map_or(Value::Null, |a| a.to_string().into())
}

fn two_object_regions(run: &mut Run, schemes: Vec<(&str, StorageScheme, Option<String>, &str)>) -> Result<(), CliError> {
    let mut areas = Map::new();
    for (name, s, call, description) in schemes {
        let file = run.scheme(name, &s, call.as_deref())?;
        let p = exact(&s)?;
        run.vertices(name, &p, format!("region --scheme {file}"), description)?;
        areas.insert(name.into(), area(&p));
    }
    run.results.insert("areas".into(), Value::Object(areas));
    Ok(())
}

/// Writes the figure's files into `dir` and returns the manifest, which is
/// also written there as `manifest.json`.
pub fn reproduce(figure: Figure, dir: &Path) -> Result<Value, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io { path: dir.display().to_string(), source: e })?;
    let mut run = Run { dir: dir.to_path_buf(), files: Vec::new(), calls: Vec::new(), results: Map::new() };
    match figure {
        Figure::Fig1 => {
            let gf3 = FieldSpec::prime(3).map_err(invalid)?;
            two_object_regions(
                &mut run,
                vec![
                    ("fig1_replication", make_replication(2, &[2, 2], int(1)).map_err(invalid)?, Some("replication --k 2 --replicas 2,2".into()), "replication (a, a, b, b)"),
                    ("fig1_mds", make_mds(4, 2, &gf3, true, int(1)).map_err(invalid)?, Some("mds --n 4 --k 2 --q 3".into()), "[4, 2] MDS (a, b, a+b, a+2b)"),
                    ("fig1_hybrid", explicit(2, 2, &[&[1, 0], &[1, 0], &[0, 1], &[1, 1]])?, None, "hybrid (a, a, b, a+b)"),
                ],
            )?;
        }
        Figure::Fig3 => {
            let gf11 = FieldSpec::prime(11).map_err(invalid)?;
            two_object_regions(
                &mut run,
                vec![
                    ("fig3_replication", make_replication(2, &[4, 4], int(1)).map_err(invalid)?, Some("replication --k 2 --replicas 4,4".into()), "four replicas of each object"),
                    ("fig3_mds", make_mds(8, 2, &gf11, false, int(1)).map_err(invalid)?, Some("mds --n 8 --k 2 --q 11 --nonsystematic".into()), "non-systematic [8, 2] MDS"),
                    ("fig3_systematic_mds", make_mds(8, 2, &gf11, true, int(1)).map_err(invalid)?, Some("mds --n 8 --k 2 --q 11".into()), "systematic [8, 2] MDS"),
                    (
                        "fig3_hybrid",
                        explicit(11, 2, &[&[1, 0], &[1, 0], &[1, 0], &[0, 1], &[0, 1], &[0, 1], &[1, 1], &[1, 2]])?,
                        None,
                        "hybrid (a, a, a, b, b, b, a+b, a+2b)",
                    ),
                ],
            )?;
        }
        Figure::Fig10Slice => {
            let s = make_rm1(4, false, int(1)).map_err(invalid)?;
            let file = run.scheme("fig10_rm", &s, Some("rm1 --k 4"))?;
            let cat = catalog(&s)?;
            let slice = ServiceRegion::new(cat.restrict(&[0, 3]), s.mu()).and_then(|r| r.polytope()).map_err(invalid)?;
            run.vertices("fig10_slice_exact", &slice, format!("region --scheme {file} --keep 0,3"), "exact region in (lambda_a, lambda_d)")?;
            let outer = outer_polytope(&s, Some(&cat), s.mu()).map_err(invalid)?;
            let outer_slice = outer.slice_zero(&[0, 3]);
            run.vertices("fig10_slice_outer", &outer_slice, format!("bounds --scheme {file} --counting --keep 0,3"), "geometric outer bound in (lambda_a, lambda_d)")?;
            run.results.insert("exact_equals_outer".into(), (slice.vertices == outer_slice.vertices).into());
            run.results.insert("area".into(), area(&slice));
        }
        Figure::Fig12 => {
            let s = make_simplex(3, int(1)).map_err(invalid)?;
            let file = run.scheme("fig12_simplex", &s, Some("simplex --k 3"))?;
            let cat = catalog(&s)?;
            let demand = [int(1), int(3), int(0)];
            let g = build_graph(&s, &cat, GraphMode::PairsOnly);
            // Every object owns the same number of edges; split its demand evenly.
            let mut rows = vec![["edge", "label", "vertices", "weight"].map(String::from).to_vec()];
            let mut per_vertex = vec![Rational::from_integer(0); g.vertex_count()];
            for (e, edge) in g.edges.iter().enumerate() {
                let share = g.edges.iter().filter(|f| f.label == edge.label).count();
                let w = demand[edge.label] / int(share as i128);
                for &v in &edge.vertices {
                    per_vertex[v] += w;
                }
                let vs: Vec<String> = edge.vertices.iter().map(usize::to_string).collect();
                rows.push(vec![e.to_string(), edge.label.to_string(), vs.join(" "), w.to_string()]);
            }
            let valid = per_vertex.iter().all(|x| *x <= int(1));
            run.file("fig12_fractional.csv", &csv_text(&rows), "fractional matching on the recovery graph (vertices past 6 are dummies)")?;
            run.calls.push(format!("srr graph --scheme {file} --mode pairs --stats"));
            run.results.insert("fractional_matching_valid".into(), valid.into());

            let w = integral_achievable(&cat, s.mu(), &demand).map_err(invalid)?;
            let w = w.ok_or_else(|| CliError::Invalid("no integral allocation for (1, 3, 0)".into()))?;
            let mut rows = vec![["object", "servers", "rate"].map(String::from).to_vec()];
            for i in 0..cat.k() {
                for (set, rate) in cat.sets(i).iter().zip(&w.rates[i]) {
                    if *rate > int(0) {
                        let vs: Vec<String> = set.servers.iter().map(usize::to_string).collect();
                        rows.push(vec![i.to_string(), vs.join(" "), rate.to_string()]);
                    }
                }
            }
            run.file("fig12_integral.csv", &csv_text(&rows), "integral allocation serving (1, 3, 0)")?;
            run.calls.push(format!("srr batch --scheme {file} --demand '[1,3,0]'"));
        }
    }
    let body = json!({
        "figure": figure.name(),
        "files": run.files,
        "calls": run.calls,
        "results": run.results,
    });
    let manifest = document("manifest", &body);
    let mut text = serde_json::to_string_pretty(&manifest).expect("documents serialize");
    text.push('\n');
    write_file(&dir.join("manifest.json"), &text)?;
    Ok(manifest)
}
