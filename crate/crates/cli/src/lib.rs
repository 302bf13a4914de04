//! The `pnh` command line: construction, counting, verification and export.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pnh_core::exact::{parse_rat, parse_rat_list};
use pnh_core::export::{face_poset_json, parse_building_json, polytope_json, write_off};
use pnh_core::face_poset::{aut_action, f_vector_by_index, permutation_order, simplicity, FacePoset, DEFAULT_FACE_CAP};
use pnh_core::flats::{all_flats, BuildingKind, BuildingSet, DEFAULT_FLAT_CAP};
use pnh_core::fvector::formula_f_vector;
use pnh_core::halfspaces::HalfspaceError;
use pnh_core::polytope::{euler_check, BuildOptions, Permutonestohedron, PolytopeError};
use pnh_core::root_system::{RootSystem, RootType};
use pnh_core::weyl::DEFAULT_GROUP_CAP;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "pnh", version, about = "Exact permutonestohedra for classical root systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Instance {
    /// Root system, e.g. A3, B2, D4, A1^3 or A2xA1.
    #[arg(long = "type", value_name = "SPEC")]
    pub root_type: String,
    /// minimal, maximal, interval or file:<path> (JSON with "roots" and "flats").
    #[arg(long, default_value = "minimal")]
    pub building: String,
    /// Largest value of the suitable list, as p/q.
    #[arg(long, default_value = "1")]
    pub a: String,
    /// Explicit comma-separated list eps_1,...,eps_n instead of the generated one.
    #[arg(long, allow_hyphen_values = true)]
    pub epsilons: Option<String>,
    #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
    pub group_cap: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Off,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    None,
    Fast,
    Full,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the H- and V-representation as JSON.
    Build {
        #[command(flatten)]
        instance: Instance,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Face counts by dimension, with closed formulas for type A.
    Fvector {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, value_enum, default_value = "table")]
        format: ReportFormat,
        /// Also list every face and count them.
        #[arg(long)]
        faces: bool,
    },
    /// Run the verification suite; exit status 1 if any check fails.
    Verify {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, value_enum, default_value = "full")]
        level: Level,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "table")]
        format: ReportFormat,
    },
    /// Mesh (OFF, rank 3 only) or JSON export.
    Export {
        #[command(flatten)]
        instance: Instance,
        /// Defaults to off in rank 3 and json otherwise.
        #[arg(long, value_enum)]
        format: Option<ExportFormat>,
        /// Significant digits for OFF coordinates.
        #[arg(long, default_value_t = 12)]
        digits: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Face poset as JSON.
    Poset {
        #[command(flatten)]
        instance: Instance,
        /// Include covering edges (default: only in rank <= 3).
        #[arg(long)]
        edges: Option<bool>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failed(_) => EXIT_FAILED,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

pub fn parse_building(rs: &RootSystem, spec: &str) -> Result<BuildingSet, CliError> {
    match spec {
        "minimal" => BuildingSet::minimal(rs, DEFAULT_FLAT_CAP).map_err(usage),
        "maximal" => BuildingSet::maximal(rs, DEFAULT_FLAT_CAP).map_err(usage),
        "interval" => BuildingSet::interval(rs).map_err(usage),
        other => match other.strip_prefix("file:") {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
                parse_building_json(rs, &text, DEFAULT_FLAT_CAP).map_err(|e| usage(format!("{path}: {e}")))
            }
            None => Err(usage(format!("unknown building set {other:?}; expected minimal, maximal, interval or file:<path>"))),
        },
    }
}

pub fn build_instance(inst: &Instance) -> Result<Permutonestohedron, CliError> {
    let rs = RootSystem::from_spec_str(&inst.root_type).map_err(usage)?;
    let g = parse_building(&rs, &inst.building)?;
    let a = parse_rat(&inst.a).map_err(usage)?;
    let eps = inst.epsilons.as_deref().map(parse_rat_list).transpose().map_err(usage)?;
    let opts = BuildOptions { a, eps, group_cap: inst.group_cap, ..BuildOptions::default() };
    Permutonestohedron::build(rs, g, &opts).map_err(|e| match e {
        PolytopeError::SingularSystem(_) | PolytopeError::NotInChamber(_) | PolytopeError::EmptyFacet(_) => {
            CliError::Failed(e.to_string())
        }
        PolytopeError::Halfspace(HalfspaceError::NotSuitable { .. }) => CliError::Failed(e.to_string()),
        other => usage(other),
    })
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Failed(e.to_string())),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Closed-form f-vector when the instance is `A_{n-1}` with its minimal or maximal building set.
pub fn formula_for(p: &Permutonestohedron) -> Option<Vec<String>> {
    let comps = p.rs.components();
    if comps.len() != 1 || comps[0].kind != RootType::A {
        return None;
    }
    let maximal = match p.g.kind() {
        BuildingKind::Minimal => false,
        BuildingKind::Maximal => true,
        _ => return None,
    };
    formula_f_vector(p.rank() + 1, maximal).ok().map(|f| f.iter().map(|x| x.to_string()).collect())
}

#[derive(Serialize)]
struct FvectorJson {
    root_system: String,
    building: String,
    enumeration: Vec<String>,
    faces: Option<Vec<usize>>,
    formula: Option<Vec<String>>,
}

fn fvector(inst: &Instance, format: ReportFormat, faces: bool) -> Result<String, CliError> {
    let p = build_instance(inst)?;
    let by_index: Vec<String> = f_vector_by_index(&p).iter().map(|x| x.to_string()).collect();
    let listed = if faces {
        Some(FacePoset::enumerate(&p, DEFAULT_FACE_CAP).map_err(usage)?.f_vector())
    } else {
        None
    };
    let formula = formula_for(&p);
    if format == ReportFormat::Json {
        return Ok(to_json(&FvectorJson {
            root_system: p.rs.label(),
            building: pnh_core::export::building_name(p.g.kind()).into(),
            enumeration: by_index,
            faces: listed,
            formula,
        }));
    }
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", p.rs.label(), pnh_core::export::building_name(p.g.kind()));
    let mut header = format!("{:>4}  {:>14}", "dim", "enumeration");
    if listed.is_some() {
        header += &format!("  {:>14}", "faces");
    }
    header += &format!("  {:>14}", "formula");
    let _ = writeln!(s, "{header}");
    for (d, e) in by_index.iter().enumerate() {
        let mut line = format!("{d:>4}  {e:>14}");
        if let Some(l) = &listed {
            line += &format!("  {:>14}", l[d]);
        }
        let f = formula.as_ref().map_or("-".to_string(), |f| f[d].clone());
        line += &format!("  {f:>14}");
        let _ = writeln!(s, "{line}");
    }
    Ok(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub root_system: String,
    pub building: String,
    pub level: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(checks: &mut Vec<Check>, name: &str, passed: bool, detail: String) {
    checks.push(Check { name: name.to_string(), passed, detail });
}

/// Runs the checks for one instance.
pub fn verify_instance(p: &Permutonestohedron, level: Level, seed: u64) -> VerifyReport {
    let mut c = Vec::new();
    let n = p.rank();
    check(&mut c, "construction", true, format!("{} vertices, {} half-spaces", p.vertices.len(), p.halfspaces.len()));
    if level >= Level::Fast {
        let eps: Vec<String> = p.eps.values().iter().map(|x| x.to_string()).collect();
        match &p.suitability {
            Ok(()) => check(&mut c, "suitable list", true, eps.join(",")),
            Err(e) => check(&mut c, "suitable list", false, format!("{}: {e}", eps.join(","))),
        }
        let detail = match p.lemma.violations.first() {
            None => format!("{} inequalities", p.lemma.checked),
            Some(w) => format!("{} violations; first: flat {} parts {:?}: {} vs {}", p.lemma.violations.len(), w.flat, w.parts, w.lhs, w.rhs),
        };
        check(&mut c, "epsilon inequalities", p.lemma.holds(), detail);
        let nest = p.nestohedron_check(seed);
        check(
            &mut c,
            "chamber nestohedron",
            nest.passed(),
            format!(
                "{} vertices in chamber, {} strict and {} excluded checks, {} failures",
                nest.chamber_vertices,
                nest.strict_checked,
                nest.non_nested_checked,
                nest.chamber_failures + nest.strict_failures + nest.exclusion_failures
            ),
        );
        let h = p.verify_hrep_vrep(seed, level == Level::Full);
        check(
            &mut c,
            "H/V representation",
            h.passed(),
            format!(
                "{} pairs ({}), {} violations, {} coincident vertices",
                h.pairs_checked,
                if h.exhaustive { "exhaustive" } else { "sampled" },
                h.violation_count,
                h.coincidences
            ),
        );
        let f = f_vector_by_index(p);
        let facets = p.facet_vertex_sets();
        let counts_ok = f[0] == p.vertices.len() as u128
            && n >= 1
            && f[n - 1] == p.halfspaces.len() as u128
            && facets.as_ref().map(|fs| fs.iter().all(|s| !s.is_empty())).unwrap_or(false);
        let fu: Vec<usize> = f.iter().map(|&x| x as usize).collect();
        check(
            &mut c,
            "f-vector",
            counts_ok && euler_check(&fu, n),
            format!("{fu:?}, Euler {}", if euler_check(&fu, n) { "ok" } else { "fails" }),
        );
        if let Some(formula) = formula_for(p) {
            let enumeration: Vec<String> = f.iter().map(|x| x.to_string()).collect();
            check(&mut c, "closed-form face counts", formula == enumeration, format!("formula {formula:?}"));
        }
        let s = simplicity(p);
        let is_maximal = all_flats(&p.rs, DEFAULT_FLAT_CAP).map(|all| all.len() == p.g.flats().len()).unwrap_or(false);
        let consistent = s.facets_per_vertex.iter().zip(&s.chains).all(|(&k, &chain)| (k == n) == chain);
        check(
            &mut c,
            "simplicity",
            consistent && s.simple == is_maximal,
            format!("simple = {}, building set maximal = {}", s.simple, is_maximal),
        );
        let mut aut_ok = true;
        let mut max_order = 1;
        let mut tried = 0;
        let sigmas: Vec<usize> = std::iter::once(p.w.identity()).chain(p.w.generators().iter().copied()).collect();
        for gamma in p.g.preserving_automorphisms(&p.rs) {
            for &sigma in &sigmas {
                tried += 1;
                match aut_action(p, sigma, &gamma) {
                    Ok(perm) => max_order = max_order.max(permutation_order(&perm)),
                    Err(_) => aut_ok = false,
                }
            }
        }
        check(&mut c, "automorphism action", aut_ok, format!("{tried} maps, largest permutation order {max_order}"));
    }
    if level == Level::Full {
        verify_faces(p, &mut c);
    }
    VerifyReport {
        root_system: p.rs.label(),
        building: pnh_core::export::building_name(p.g.kind()).into(),
        level: format!("{level:?}").to_lowercase(),
        seed,
        checks: c,
    }
}

fn verify_faces(p: &Permutonestohedron, c: &mut Vec<Check>) {
    let n = p.rank();
    let poset = match FacePoset::enumerate(p, DEFAULT_FACE_CAP) {
        Ok(poset) => poset,
        Err(e) => {
            check(c, "face enumeration", false, e.to_string());
            return;
        }
    };
    let listed = poset.f_vector();
    let by_index: Vec<usize> = f_vector_by_index(p).iter().map(|&x| x as usize).collect();
    check(c, "face enumeration", listed == by_index, format!("{listed:?}"));
    if n > 3 {
        check(c, "face geometry", true, "skipped above rank 3".into());
    } else {
        let boundary = match p.facet_vertex_sets() {
            Ok(b) => b,
            Err(e) => {
                check(c, "face geometry", false, e.to_string());
                return;
            }
        };
        let sets: Vec<Vec<usize>> = poset.faces().iter().map(|f| poset.face_vertices(f)).collect();
        let geometric = poset.faces().iter().zip(&sets).filter(|(f, s)| &poset.incidence_vertices(f, &boundary) != *s).count();
        check(c, "face geometry", geometric == 0, format!("{} faces, {geometric} mismatches", poset.len()));
        let mut mismatches = 0usize;
        let mut pairs = 0usize;
        for i in 0..poset.len() {
            for j in 0..poset.len() {
                pairs += 1;
                let contained = sets[i].len() <= sets[j].len() && sets[i].iter().all(|v| sets[j].binary_search(v).is_ok());
                if poset.leq(i, j) != contained {
                    mismatches += 1;
                }
            }
        }
        check(c, "face order", mismatches == 0, format!("{pairs} pairs, {mismatches} disagreements with vertex containment"));
    }
    let v = p.g.fund().len() - 1;
    let mut seen = std::collections::BTreeSet::new();
    let (mut total, mut bad, mut iso) = (0, 0, 0);
    for f in poset.faces() {
        let l = &f.labelled;
        let crossing = !l.labels.is_empty() && !l.labels.contains(&v) && l.labels.len() + 1 == l.nested.len();
        if !crossing || !seen.insert(l.clone()) {
            continue;
        }
        total += 1;
        match poset.facet_factors(&poset.face(p.w.identity(), l.clone())) {
            Ok(ff) => {
                if ff.isomorphism_checked {
                    iso += 1;
                }
                if !ff.consistent() {
                    bad += 1;
                }
            }
            Err(_) => bad += 1,
        }
    }
    check(
        c,
        "facet factorization",
        bad == 0,
        format!("{total} crossing facet types, {iso} with full lattice check, {bad} failures"),
    );
}

fn render_report(r: &VerifyReport, format: ReportFormat) -> String {
    if format == ReportFormat::Json {
        return to_json(r);
    }
    let mut s = String::new();
    let _ = writeln!(s, "{} {} (level {}, seed {})", r.root_system, r.building, r.level, r.seed);
    for ch in &r.checks {
        let _ = writeln!(s, "{} {}: {}", if ch.passed { "PASS" } else { "FAIL" }, ch.name, ch.detail);
    }
    let _ = writeln!(s, "{}", if r.passed() { "all checks passed" } else { "verification FAILED" });
    s
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Build { instance, output } => {
            let p = build_instance(&instance)?;
            if let Err(e) = &p.suitability {
                return Err(CliError::Failed(format!("epsilon list is not suitable: {e}")));
            }
            emit(out, output.as_ref(), &to_json(&polytope_json(&p)))
        }
        Command::Fvector { instance, format, faces } => emit(out, None, &fvector(&instance, format, faces)?),
        Command::Verify { instance, level, seed, format } => {
            let p = match build_instance(&instance) {
                Ok(p) => p,
                Err(CliError::Failed(msg)) => {
                    let _ = writeln!(out, "FAIL construction: {msg}");
                    return Err(CliError::Failed("verification FAILED".into()));
                }
                Err(e) => return Err(e),
            };
            let report = verify_instance(&p, level, seed);
            emit(out, None, &render_report(&report, format))?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Failed("verification FAILED".into()))
            }
        }
        Command::Export { instance, format, digits, output } => {
            let p = build_instance(&instance)?;
            let format = format.unwrap_or(if p.rank() == 3 { ExportFormat::Off } else { ExportFormat::Json });
            let text = match format {
                ExportFormat::Off => write_off(&p, digits).map_err(usage)?,
                ExportFormat::Json => to_json(&polytope_json(&p)),
            };
            emit(out, output.as_ref(), &text)
        }
        Command::Poset { instance, edges, output } => {
            let p = build_instance(&instance)?;
            let poset = FacePoset::enumerate(&p, DEFAULT_FACE_CAP).map_err(usage)?;
            let with_edges = edges.unwrap_or(p.rank() <= 3);
            emit(out, output.as_ref(), &to_json(&face_poset_json(&poset, with_edges)))
        }
    }
}

/// Parses `args` (including the program name) and runs; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let msg = match &e {
                CliError::Usage(m) => format!("error: {m}"),
                CliError::Failed(m) => m.clone(),
            };
            let _ = writeln!(err, "{msg}");
            e.code()
        }
    }
}
