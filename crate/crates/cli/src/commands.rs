//! The subcommands, each a thin wrapper around one engine operation.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use dgforge_core::dg::{homology, is_quasi_iso, DgModule, HomologyTable};
use dgforge_core::tower::{aisle_tower, tower_vanishing_check};
use dgforge_core::tstruct::{
    check_simple_minded, is_bounded, jordan_holder, t_amplitude, t_homology, t_membership, t_truncate, Generation,
    TMembership,
};
use dgforge_core::twisted::{minimalize, resolve, tw_hom, FiberReport, TwistedComplex};
use dgforge_core::weight::{derived_hom_windowed, weight_filtration, weight_truncate, Verification};
use serde_json::{json, Value};

use crate::cache::{sha256_hex, Cache};
use crate::doc::{idempotent_names, AlgebraRef, Document, Loaded, Loader, ModuleDoc, Object, TwistedDoc};
use crate::error::CliError;
use crate::report::{homology_table, Input, Report};
use crate::shipped;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "dgforge", version, about = "Exact computations with positive dg algebras")]
pub struct Cli {
    /// Output format of the report.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Ignore DGFORGE_CACHE_DIR for this run.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo = a.trim().parse::<i64>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<i64>().map_err(|e| e.to_string())?;
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check the axioms of a document; algebras are also classified (class P or not).
    Validate { doc: PathBuf },
    /// Homology of a module, or of the realization of a twisted complex.
    Homology { doc: PathBuf },
    /// Weight truncation σ_{>p} -> x -> σ_{≤p}.
    Wtrunc {
        #[arg(long, allow_hyphen_values = true)]
        level: i64,
        doc: PathBuf,
    },
    /// Weight filtration with its layers.
    Wfilt { doc: PathBuf },
    /// t-truncation x^{t≤n} -> x -> x^{t≥n+1} of a twisted complex.
    Ttrunc {
        #[arg(long, allow_hyphen_values = true)]
        level: i64,
        doc: PathBuf,
    },
    /// t-homology objects in the heart, amplitude and membership.
    Heart { doc: PathBuf },
    /// Composition factors of a heart object.
    Jh { doc: PathBuf },
    /// dim Hom(m, Σ^n y) over a degree range.
    Dhom {
        /// The module m.
        #[arg(long)]
        from: PathBuf,
        /// The module y.
        #[arg(long)]
        to: PathBuf,
        /// Degrees `a:b`, inclusive.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        range: (i64, i64),
        /// Maximal number of cells in the resolution of m.
        #[arg(long, default_value_t = 8)]
        budget: usize,
    },
    /// Simple-minded checks for a family of twisted complexes, or for {e_i A} given an algebra.
    SmoCheck {
        #[arg(required = true)]
        docs: Vec<PathBuf>,
        /// Shifts `a:b` used by the generation search.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-1:1")]
        window: (i64, i64),
        /// Maximal number of cones tried by the generation search.
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
    /// Stages of the aisle tower over a module.
    Tower {
        #[arg(long, default_value_t = 5)]
        stages: usize,
        doc: PathBuf,
    },
    /// Minimal form of a twisted complex with its homotopy data.
    Minimalize { doc: PathBuf },
    /// Cell resolution of a module.
    Resolve {
        /// Maximal number of cells.
        #[arg(long, default_value_t = 8)]
        budget: usize,
        doc: PathBuf,
    },
    /// Write the shipped example documents to a directory.
    Corpus {
        #[arg(long)]
        out: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Homology { .. } => "homology",
            Command::Wtrunc { .. } => "wtrunc",
            Command::Wfilt { .. } => "wfilt",
            Command::Ttrunc { .. } => "ttrunc",
            Command::Heart { .. } => "heart",
            Command::Jh { .. } => "jh",
            Command::Dhom { .. } => "dhom",
            Command::SmoCheck { .. } => "smo-check",
            Command::Tower { .. } => "tower",
            Command::Minimalize { .. } => "minimalize",
            Command::Resolve { .. } => "resolve",
            Command::Corpus { .. } => "corpus",
        }
    }

    fn inputs(&self) -> Vec<&Path> {
        match self {
            Command::Validate { doc }
            | Command::Homology { doc }
            | Command::Wtrunc { doc, .. }
            | Command::Wfilt { doc }
            | Command::Ttrunc { doc, .. }
            | Command::Heart { doc }
            | Command::Jh { doc }
            | Command::Tower { doc, .. }
            | Command::Minimalize { doc }
            | Command::Resolve { doc, .. } => vec![doc],
            Command::Dhom { from, to, .. } => vec![from, to],
            Command::SmoCheck { docs, .. } => docs.iter().map(PathBuf::as_path).collect(),
            Command::Corpus { .. } => vec![],
        }
    }

    fn parameters(&self) -> BTreeMap<String, Value> {
        let mut p = BTreeMap::new();
        match self {
            Command::Wtrunc { level, .. } | Command::Ttrunc { level, .. } => {
                p.insert("level".into(), json!(level));
            }
            Command::Dhom { range, budget, .. } => {
                p.insert("range".into(), json!(range));
                p.insert("budget".into(), json!(budget));
            }
            Command::SmoCheck { window, budget, .. } => {
                p.insert("window".into(), json!(window));
                p.insert("budget".into(), json!(budget));
            }
            Command::Tower { stages, .. } => {
                p.insert("stages".into(), json!(stages));
            }
            Command::Resolve { budget, .. } => {
                p.insert("budget".into(), json!(budget));
            }
            _ => {}
        }
        p
    }
}

/// Runs one command, consulting `cache` for everything except `corpus`.
pub fn execute(cmd: &Command, cache: Option<&Cache>) -> Result<Report, CliError> {
    if let Command::Corpus { out } = cmd {
        return write_corpus(out);
    }
    let mut loader = Loader::new();
    let loaded: Vec<Loaded> = cmd.inputs().into_iter().map(|p| loader.load(p)).collect::<Result<_, _>>()?;
    let parameters = cmd.parameters();
    let key = cache.map(|_| {
        let params = serde_json::to_string(&parameters).expect("parameters serialize");
        let docs: Vec<String> =
            loaded.iter().map(|l| format!("{}\n{}", input_record(l).name, l.self_contained())).collect();
        Cache::key(cmd.name(), &params, &docs)
    });
    if let (Some(c), Some(k)) = (cache, &key) {
        if let Some(r) = c.get(k) {
            return Ok(r);
        }
    }
    let mut report = Report::new(cmd.name());
    report.parameters = parameters;
    report.inputs = loaded.iter().map(input_record).collect();
    compute(cmd, &loaded, &mut report)?;
    if let (Some(c), Some(k)) = (cache, &key) {
        let _ = c.put(k, &report);
    }
    Ok(report)
}

fn input_record(l: &Loaded) -> Input {
    let name = Path::new(&l.name).file_name().map_or(l.name.clone(), |n| n.to_string_lossy().into_owned());
    let kind = serde_json::to_value(l.doc.kind()).expect("kind").as_str().unwrap_or_default().to_string();
    Input { name, kind, sha256: sha256_hex(l.doc.to_canonical().as_bytes()) }
}

fn module_of(l: &Loaded) -> Result<Arc<DgModule>, CliError> {
    match l.object()? {
        Object::Module(m) => Ok(m.clone()),
        Object::Twisted(x) => Ok(x.realize().module),
        Object::Algebra(_) => Err(CliError::Usage(format!("{}: expected a module or twisted complex", l.name))),
    }
}

fn twisted_of(l: &Loaded) -> Result<TwistedComplex, CliError> {
    match l.object()? {
        Object::Twisted(x) => Ok(x.clone()),
        _ => Err(CliError::Usage(format!("{}: expected a twisted complex", l.name))),
    }
}

fn module_doc(m: &DgModule, r: &AlgebraRef) -> Value {
    Document::Module(ModuleDoc::of(m, r.clone())).to_value()
}

fn twisted_doc(x: &TwistedComplex, r: &AlgebraRef) -> Value {
    Document::Twisted(TwistedDoc::of(x, r.clone())).to_value()
}

fn names(m: &DgModule, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| m.basis()[i].name.clone()).collect()
}

/// Nonzero multiplicities keyed by 1-based idempotent number.
fn factor_map(factors: &[usize]) -> BTreeMap<String, usize> {
    factors.iter().enumerate().filter(|(_, &n)| n > 0).map(|(i, &n)| ((i + 1).to_string(), n)).collect()
}

fn fiber_table(r: &FiberReport) -> Value {
    json!({
        "acyclic": r.acyclic,
        "iso_below": r.iso_below,
        "fiber_window": r.fiber_window,
        "cone_top_degree": r.cone_top_degree,
        "cells": r.cells,
        "budget_exhausted": r.budget_exhausted,
    })
}

fn membership_name(m: TMembership) -> &'static str {
    match m {
        TMembership::Zero => "zero",
        TMembership::Heart => "heart",
        TMembership::LeZero => "le_zero",
        TMembership::GeOne => "ge_one",
        TMembership::GeZero => "ge_zero",
        TMembership::Neither => "neither",
    }
}

fn homology_of(h: &HomologyTable, alg: &dgforge_core::dg::DgAlgebra) -> Value {
    homology_table(h, &idempotent_names(alg))
}

fn compute(cmd: &Command, loaded: &[Loaded], r: &mut Report) -> Result<(), CliError> {
    match cmd {
        Command::Validate { .. } => validate(&loaded[0], r),
        Command::Homology { .. } => {
            let m = module_of(&loaded[0])?;
            r.table("homology", homology_of(&homology(&m), m.algebra()));
            r.table("dimension", m.dim());
            Ok(())
        }
        Command::Wtrunc { level, .. } => {
            let l = &loaded[0];
            let m = module_of(l)?;
            let t = weight_truncate(&m, *level)?;
            let c = &t.certificates;
            r.cert("gt_membership", c.gt_membership)
                .cert("le_membership", c.le_membership)
                .cert("inclusion_iso_above", c.inclusion_iso_above)
                .cert("projection_iso_below", c.projection_iso_below)
                .cert("short_exact", c.short_exact);
            let h = &c.x_homology;
            if h.support().is_none_or(|(_, top)| *level >= top) {
                r.cert("projection_quasi_iso", is_quasi_iso(&t.projection));
            }
            let alg = m.algebra();
            r.table("x_homology", homology_of(h, alg))
                .table("gt_homology", homology_of(&c.gt_homology, alg))
                .table("le_homology", homology_of(&c.le_homology, alg))
                .table("gt_basis", names(&m, &t.gt_basis));
            r.document("sigma_gt", module_doc(&t.sigma_gt, &l.algebra_ref()))
                .document("sigma_le", module_doc(&t.sigma_le, &l.algebra_ref()));
            Ok(())
        }
        Command::Wfilt { .. } => {
            let m = module_of(&loaded[0])?;
            let f = weight_filtration(&m)?;
            let layers: Vec<Value> = f
                .nontrivial_layers()
                .map(|l| json!({ "degree": l.degree, "multiplicities": l.multiplicities, "dim": l.module.dim(), "concentrated": l.concentrated }))
                .collect();
            let steps: Vec<Value> = f.steps.iter().map(|(q, b)| json!({ "q": q, "dim": b.len() })).collect();
            let r_count = m.algebra().idempotent_count();
            r.cert("nested", f.is_nested())
                .cert("layers_concentrated", f.layers.iter().all(|l| l.concentrated))
                .cert("multiplicities_sum_to_homology", f.total_homology(r_count) == homology(&m));
            r.table("layers", layers).table("steps", steps);
            Ok(())
        }
        Command::Ttrunc { level, .. } => {
            let l = &loaded[0];
            let x = twisted_of(l)?;
            let t = t_truncate(&x, *level)?;
            let c = &t.certificates;
            r.cert("minimalization_verified", c.minimalization_verified)
                .cert("sub_closed", c.sub_closed)
                .cert("inclusion_is_cycle", c.inclusion_is_cycle)
                .cert("projection_is_cycle", c.projection_is_cycle)
                .cert("strict_triangle", c.strict_triangle)
                .cert("le_in_aisle", c.le_in_aisle)
                .cert("gt_in_coaisle", c.gt_in_coaisle)
                .cert("orthogonal", c.orthogonal);
            r.table("le_cells", &t.le_cells)
                .table("gt_cells", &t.gt_cells)
                .table("eliminated", &t.minimalization.eliminated);
            let ar = l.algebra_ref();
            r.document("minimal", twisted_doc(&t.minimalization.minimal, &ar))
                .document("x_le", twisted_doc(&t.x_le, &ar))
                .document("x_gt", twisted_doc(&t.x_gt, &ar));
            Ok(())
        }
        Command::Heart { .. } => {
            let x = twisted_of(&loaded[0])?;
            let th = t_homology(&x)?;
            let minimal = minimalize(&x).minimal;
            let rows: Vec<Value> = th
                .iter()
                .map(|(n, h)| json!({ "degree": n, "factors": factor_map(&h.factors), "length": h.length }))
                .collect();
            let reconstructs = th.iter().all(|(n, h)| {
                let mut count = vec![0; x.algebra().idempotent_count()];
                for c in minimal.cells().iter().filter(|c| c.shift == -n) {
                    count[c.idem] += 1;
                }
                count == h.factors
            }) && th.values().map(|h| h.length).sum::<usize>() == minimal.len();
            r.cert("bounded", is_bounded(&x)?).cert("reconstructs_minimal_cells", reconstructs);
            r.table("idempotents", idempotent_names(x.algebra()))
                .table("t_homology", rows)
                .table("amplitude", t_amplitude(&x)?)
                .table("membership", membership_name(t_membership(&x)?));
            Ok(())
        }
        Command::Jh { .. } => {
            let x = twisted_of(&loaded[0])?;
            let jh = jordan_holder(&x)?;
            r.cert("orders_agree", jh.orders_agree);
            r.table("idempotents", idempotent_names(x.algebra()))
                .table("factors", factor_map(&jh.factors))
                .table("length", jh.length)
                .table("end_h0_dim", tw_hom(&x, &x)?.homology_dim(0));
            Ok(())
        }
        Command::Dhom { range, budget, .. } => {
            let m = module_of(&loaded[0])?;
            let y = module_of(&loaded[1])?;
            let t = derived_hom_windowed(&m, &y, *range, *budget)?;
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|row| {
                    let v = match row.verification {
                        Verification::APrioriZero => "a_priori_zero",
                        Verification::Exact => "exact",
                        Verification::Unverified => "unverified",
                    };
                    json!({ "degree": row.degree, "dim": row.dim, "verification": v })
                })
                .collect();
            r.table("rows", rows)
                .table("vanishing_above", t.vanishing_above)
                .table("resolution", fiber_table(&t.resolution));
            r.verified_ranges = t.verified_ranges();
            Ok(())
        }
        Command::SmoCheck { window, budget, .. } => {
            let family = smo_family(loaded)?;
            let rep = check_simple_minded(&family, *window, *budget)?;
            let violations: Vec<Value> = rep
                .b_violations
                .iter()
                .map(|(i, j, t, d)| json!({ "i": i, "j": j, "t": t, "dim": d }))
                .collect();
            let generation = match &rep.generation {
                Generation::Certified { witnesses } => json!({ "certified": true, "witnesses": witnesses }),
                Generation::Inconclusive { missing } => json!({ "certified": false, "missing": missing }),
            };
            r.cert("a_scalar_and_orthogonal", rep.a_holds)
                .cert("b_no_negative_extensions", rep.b_holds)
                .cert("c_generation", rep.generation.is_certified());
            r.table("family_size", family.len())
                .table("hom0", &rep.hom0)
                .table("b_violations", violations)
                .table("generation", generation)
                .table("cones_tried", rep.cones_tried)
                .table("objects_reached", rep.search.len());
            Ok(())
        }
        Command::Tower { stages, .. } => {
            let l = &loaded[0];
            let m = module_of(l)?;
            let tower = aisle_tower(&m, *stages)?;
            let vanishing = tower_vanishing_check(&tower)?;
            let alg = m.algebra();
            let rows: Vec<Value> = tower
                .stages
                .iter()
                .map(|s| json!({ "index": s.index, "cells": s.complex.len(), "surjective": s.surjective(), "stable": s.is_stable() }))
                .collect();
            let cone_h: Vec<Value> = tower.stages.iter().map(|s| homology_of(&s.cone_homology, alg)).collect();
            let checks: Vec<Value> = vanishing
                .checks
                .iter()
                .map(|c| json!({ "stage": c.stage, "idem": c.idem, "n": c.n, "rank": c.rank }))
                .collect();
            r.cert("surjectivity", tower.stages.iter().all(|s| s.surjective()))
                .cert("transitions_vanish", vanishing.all_zero);
            if let Some(t) = tower.truncation_iso {
                r.cert("truncation_iso", t);
            }
            r.table("stages", rows)
                .table("quasi_iso", tower.quasi_iso)
                .table("cone_homology", cone_h)
                .table("transitions", checks)
                .table("stabilized_at", tower.stabilized_at);
            if let Some(last) = tower.stages.last() {
                r.document("last_stage", twisted_doc(&last.complex, &l.algebra_ref()));
            }
            Ok(())
        }
        Command::Minimalize { .. } => {
            let l = &loaded[0];
            let x = twisted_of(l)?;
            let min = minimalize(&x);
            r.cert("homotopy_equivalence", min.verify(&x).is_ok()).cert("minimal", min.minimal.is_minimal());
            r.table("cells_before", x.len()).table("cells_after", min.minimal.len()).table("eliminated", &min.eliminated);
            r.document("minimal", twisted_doc(&min.minimal, &l.algebra_ref()));
            Ok(())
        }
        Command::Resolve { budget, .. } => {
            let l = &loaded[0];
            let m = module_of(l)?;
            let res = resolve(&m, *budget)?;
            r.cert("map_is_chain_map", res.map.is_chain_map());
            r.table("fiber", fiber_table(&res.report));
            r.document("resolution", twisted_doc(&res.complex, &l.algebra_ref()));
            Ok(())
        }
        Command::Corpus { .. } => unreachable!("handled by execute"),
    }
}

fn validate(l: &Loaded, r: &mut Report) -> Result<(), CliError> {
    match &l.object {
        Ok(Object::Algebra(a)) => {
            let rep = a.report();
            r.cert("valid", rep.is_valid());
            r.table("class_p", rep.class_p)
                .table("violations", &rep.violations)
                .table("class_p_failures", &rep.class_p_failures)
                .table("dimension", a.dim())
                .table("idempotents", idempotent_names(a));
        }
        Ok(Object::Module(m)) => {
            r.cert("valid", true);
            r.table("algebra_class_p", m.algebra().is_class_p())
                .table("dimension", m.dim()).table("homology", homology_of(&homology(m), m.algebra()));
        }
        Ok(Object::Twisted(x)) => {
            r.cert("valid", true);
            let cells: Vec<Value> = x.cells().iter().map(|c| json!({ "idem": c.idem + 1, "shift": c.shift })).collect();
            r.table("algebra_class_p", x.algebra().is_class_p()).table("minimal", x.is_minimal()).table("cells", cells);
        }
        Err(CliError::Core(e)) => {
            r.cert("valid", false);
            r.table("violations", vec![e.to_string()]);
        }
        Err(e) => return Err(e.clone()),
    }
    Ok(())
}

/// The family to check: the given twisted complexes, or `{e_i A}` when one algebra is given.
fn smo_family(loaded: &[Loaded]) -> Result<Vec<TwistedComplex>, CliError> {
    if let [l] = loaded {
        if let Object::Algebra(a) = l.object()? {
            a.require_class_p()?;
            return Ok((0..a.idempotent_count()).map(|i| TwistedComplex::cell(a, i, 0)).collect());
        }
    }
    loaded.iter().map(twisted_of).collect()
}

fn write_corpus(out: &Path) -> Result<Report, CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", out.display()));
    fs::create_dir_all(out).map_err(io)?;
    let mut r = Report::new("corpus");
    let mut files = Vec::new();
    for (file, doc) in shipped::documents() {
        let text = doc.to_canonical();
        fs::write(out.join(&file), &text).map_err(io)?;
        files.push(json!({ "file": file, "kind": doc.kind(), "sha256": sha256_hex(text.as_bytes()) }));
    }
    r.table("files", files);
    Ok(r)
}
