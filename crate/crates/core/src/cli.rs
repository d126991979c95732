//! Job specs, their resolution, and deterministic rendering of results.
//!
//! A job is either built from command-line flags or read from a JSON file.
//! Both paths go through [`JobSpec`] and [`JobSpec::resolve`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::coalgebra::{CoalgebraError, CoalgebraTable, GradedCoalgebra};
use crate::comodule::{self, Comodule, ComoduleError};
use crate::complex::{CoHHTable, ComplexError};
use crate::field::{FieldError, FieldSpec};
use crate::report::AxiomReport;
use crate::spectral::{self, SpectralError, Verdict};

pub const DEFAULT_FIELD: u64 = 2;
pub const DEFAULT_S_MAX: usize = 6;
pub const DEFAULT_T_MAX: u32 = 40;
pub const DEFAULT_MAX_DEGREE: u32 = 20;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid job at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("field: {0}")]
    Field(#[from] FieldError),
    #[error("coalgebra: {0}")]
    Coalgebra(#[from] CoalgebraError),
    #[error("complex: {0}")]
    Complex(#[from] ComplexError),
    #[error("comodule: {0}")]
    Comodule(#[from] ComoduleError),
    #[error("{0}")]
    Spectral(#[from] SpectralError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("table differs from the expected fixture: {0}")]
    ExpectationMismatch(String),
}

impl CliError {
    /// 2 for mathematical refusals, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spectral(SpectralError::CollapseNotEstablished(_)) => 2,
            _ => 1,
        }
    }

    fn schema(path: &str, message: impl Into<String>) -> Self {
        CliError::Schema { path: path.to_string(), message: message.into() }
    }
}

fn parse_error(e: serde_json::Error) -> CliError {
    CliError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Validate,
    Cohh,
    E2,
    Collapse,
    Loops,
    Audit,
    Cotor,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Exterior,
    Polynomial,
    Tensor,
    Table,
    Trivial,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ComoduleKind {
    #[default]
    Trivial,
    Regular,
}

/// A coalgebra description, inline or in its own file.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CoalgebraSpec {
    pub field: Option<u64>,
    pub kind: Option<Kind>,
    pub degrees: Option<Vec<u32>>,
    pub trunc: Option<u32>,
    pub table: Option<CoalgebraTable>,
    pub left: Option<Box<CoalgebraSpec>>,
    pub right: Option<Box<CoalgebraSpec>>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum CoalgebraSource {
    Path(PathBuf),
    Inline(CoalgebraSpec),
}

/// A job as written by the user; unset fields take defaults in [`JobSpec::resolve`].
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    pub coalgebra: Option<CoalgebraSource>,
    pub field: Option<u64>,
    pub kind: Option<Kind>,
    pub degrees: Option<Vec<u32>>,
    pub trunc: Option<u32>,
    pub table: Option<CoalgebraTable>,
    pub s_max: Option<usize>,
    pub t_max: Option<u32>,
    pub max_degree: Option<u32>,
    pub prime: Option<u64>,
    #[serde(default)]
    pub format: Format,
    pub output: Option<PathBuf>,
    pub left_comodule: Option<ComoduleKind>,
    pub right_comodule: Option<ComoduleKind>,
    pub expect: Option<PathBuf>,
}

/// Parses a JSON job file.
pub fn parse_spec(text: &str) -> Result<JobSpec, CliError> {
    serde_json::from_str(text).map_err(parse_error)
}

pub fn parse_coalgebra_spec(text: &str) -> Result<CoalgebraSpec, CliError> {
    serde_json::from_str(text).map_err(parse_error)
}

/// A job with defaults applied and inputs validated.
#[derive(Clone, Debug)]
pub struct Job {
    pub command: Command,
    pub coalgebra: Option<Arc<GradedCoalgebra>>,
    pub degrees: Vec<u32>,
    pub field: FieldSpec,
    pub s_max: usize,
    pub t_max: u32,
    pub max_degree: u32,
    pub prime: Option<u64>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub comodules: (ComoduleKind, ComoduleKind),
    pub expect: Option<PathBuf>,
}

fn build_coalgebra(spec: &CoalgebraSpec, path: &str, field: FieldSpec, t_max: u32) -> Result<GradedCoalgebra, CliError> {
    let field = match spec.field {
        Some(p) => FieldSpec::new(p).map_err(|e| CliError::schema(&format!("{path}field"), e.to_string()))?,
        None => field,
    };
    let kind = spec.kind.ok_or_else(|| CliError::schema(&format!("{path}kind"), "missing"))?;
    let degrees = || spec.degrees.clone().ok_or_else(|| CliError::schema(&format!("{path}degrees"), "missing"));
    Ok(match kind {
        Kind::Trivial => GradedCoalgebra::trivial(field),
        Kind::Exterior => {
            let d = degrees()?;
            if let Some(i) = d.iter().position(|x| x % 2 == 0) {
                return Err(CliError::schema(&format!("{path}degrees[{i}]"), SpectralError::DegreeEven(d[i]).to_string()));
            }
            GradedCoalgebra::exterior(&d, field)?
        }
        Kind::Polynomial => {
            let d = degrees()?;
            if let Some(i) = d.iter().position(|&x| x == 0) {
                return Err(CliError::schema(&format!("{path}degrees[{i}]"), "degree must be positive"));
            }
            GradedCoalgebra::polynomial(&d, field, spec.trunc.unwrap_or(t_max))?
        }
        Kind::Table => {
            let table = spec.table.as_ref().ok_or_else(|| CliError::schema(&format!("{path}table"), "missing"))?;
            GradedCoalgebra::from_table(table, field)?
        }
        Kind::Tensor => {
            let side = |s: &Option<Box<CoalgebraSpec>>, name: &str| -> Result<Arc<GradedCoalgebra>, CliError> {
                let s = s.as_ref().ok_or_else(|| CliError::schema(&format!("{path}{name}"), "missing"))?;
                Ok(Arc::new(build_coalgebra(s, &format!("{path}{name}."), field, t_max)?))
            };
            GradedCoalgebra::tensor(&side(&spec.left, "left")?, &side(&spec.right, "right")?)?
        }
    })
}

impl JobSpec {
    /// Applies defaults (field 2, s ≤ 6, t ≤ 40, text) and validates.
    pub fn resolve(&self, base_dir: &Path) -> Result<Job, CliError> {
        let field = match self.field {
            Some(p) => FieldSpec::new(p).map_err(|e| CliError::schema("field", e.to_string()))?,
            None => FieldSpec::new(DEFAULT_FIELD)?,
        };
        let s_max = self.s_max.unwrap_or(DEFAULT_S_MAX);
        let t_max = self.t_max.unwrap_or(DEFAULT_T_MAX);
        let max_degree = self.max_degree.unwrap_or(DEFAULT_MAX_DEGREE);
        if t_max == 0 {
            return Err(CliError::schema("t_max", "must be positive"));
        }
        if max_degree == 0 {
            return Err(CliError::schema("max_degree", "must be positive"));
        }
        let inline = CoalgebraSpec {
            field: None,
            kind: self.kind,
            degrees: self.degrees.clone(),
            trunc: self.trunc,
            table: self.table.clone(),
            left: None,
            right: None,
        };
        let spec = match &self.coalgebra {
            Some(CoalgebraSource::Inline(s)) => Some((s.clone(), "coalgebra.")),
            Some(CoalgebraSource::Path(p)) => {
                let p = if p.is_absolute() { p.clone() } else { base_dir.join(p) };
                Some((parse_coalgebra_spec(&read_file(&p)?)?, "coalgebra."))
            }
            None if inline.kind.is_some() => Some((inline, "")),
            None => None,
        };
        let needs_degrees = matches!(self.command, Command::Collapse | Command::Loops);
        let (coalgebra, degrees) = match spec {
            Some((s, path)) => {
                let c = build_coalgebra(&s, path, field, t_max)?;
                let degrees = s.degrees.clone().unwrap_or_default();
                (Some(Arc::new(c)), degrees)
            }
            None if needs_degrees => {
                let d = self.degrees.clone().ok_or_else(|| CliError::schema("degrees", "missing"))?;
                (None, d)
            }
            None => return Err(CliError::schema("kind", "missing coalgebra: give `kind` or `coalgebra`")),
        };
        if needs_degrees {
            if let Some(c) = &coalgebra {
                if spectral::exterior_degrees(c).is_none() {
                    return Err(CliError::schema("kind", "collapse and loop tables need an exterior coalgebra"));
                }
            }
            if let Some(i) = degrees.iter().position(|x| x % 2 == 0) {
                return Err(CliError::schema(&format!("degrees[{i}]"), SpectralError::DegreeEven(degrees[i]).to_string()));
            }
        }
        let field = coalgebra.as_ref().map(|c| c.field()).unwrap_or(field);
        if let Some(p) = self.prime {
            FieldSpec::prime(p).map_err(|e| CliError::schema("prime", e.to_string()))?;
        }
        Ok(Job {
            command: self.command,
            coalgebra,
            degrees,
            field,
            s_max,
            t_max,
            max_degree,
            prime: self.prime,
            format: self.format,
            output: self.output.clone(),
            comodules: (self.left_comodule.unwrap_or_default(), self.right_comodule.unwrap_or_default()),
            expect: self.expect.clone(),
        })
    }
}

/// Result of running a job: rendered output and exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub rendered: String,
}

fn meta(job: &Job, bounds: Value) -> Value {
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": format!("{:?}", job.command).to_lowercase(),
        "bounds": bounds,
        "field": job.field.characteristic(),
    })
}

fn field_name(f: &FieldSpec) -> String {
    match f.characteristic() {
        0 => "Q".to_string(),
        p => format!("F{p}"),
    }
}

/// Text grid with rows `t` and columns `s`, nonzero rows only.
fn grid(dims: &BTreeMap<(usize, u32), usize>, s_max: usize) -> String {
    let mut out = String::new();
    let _ = write!(out, "{:>4} |", "t\\s");
    for s in 0..=s_max {
        let _ = write!(out, "{s:>4}");
    }
    out.push('\n');
    let rows: std::collections::BTreeSet<u32> = dims.iter().filter(|(_, d)| **d > 0).map(|((_, t), _)| *t).collect();
    for t in rows {
        let _ = write!(out, "{t:>4} |");
        for s in 0..=s_max {
            match dims.get(&(s, t)).copied().unwrap_or(0) {
                0 => out.push_str("   ."),
                d => {
                    let _ = write!(out, "{d:>4}");
                }
            }
        }
        out.push('\n');
    }
    out
}

fn csv(rows: impl IntoIterator<Item = ((usize, u32), usize)>) -> String {
    let mut out = String::from("s,t,dim\n");
    for ((s, t), d) in rows {
        let _ = writeln!(out, "{s},{t},{d}");
    }
    out
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn checks_json(reports: &[AxiomReport]) -> Value {
    serde_json::to_value(reports).expect("reports serialize")
}

fn checks_text(reports: &[AxiomReport]) -> String {
    reports.iter().map(|r| format!("{r}\n")).collect()
}

fn require_coalgebra(job: &Job) -> Result<&Arc<GradedCoalgebra>, CliError> {
    job.coalgebra.as_ref().ok_or_else(|| CliError::schema("kind", "missing coalgebra"))
}

fn prime_of(job: &Job) -> u64 {
    job.prime.unwrap_or(job.field.characteristic())
}

fn table_json(job: &Job, table: &CoHHTable, bounds: Value) -> Value {
    let d = require_coalgebra(job).expect("checked by caller");
    let rows: Vec<Value> = table
        .nonzero()
        .map(|((s, t), dim)| {
            let reps: Vec<String> = table.representatives.get(&(s, t)).map(|v| v.iter().map(|r| d.format_tensor(r)).collect()).unwrap_or_default();
            json!({ "s": s, "t": t, "dim": dim, "representatives": reps })
        })
        .collect();
    json!({ "meta": meta(job, bounds), "table": rows })
}

/// Reads `(s,t) → dim` back from a JSON table, as written by `cohh`.
pub fn table_from_json(text: &str) -> Result<BTreeMap<(usize, u32), usize>, CliError> {
    let v: Value = serde_json::from_str(text).map_err(parse_error)?;
    let rows = v.get("table").and_then(Value::as_array).ok_or_else(|| CliError::schema("table", "missing array"))?;
    let mut out = BTreeMap::new();
    for (i, row) in rows.iter().enumerate() {
        let get = |k: &str| row.get(k).and_then(Value::as_u64).ok_or_else(|| CliError::schema(&format!("table[{i}].{k}"), "missing integer"));
        let dim = get("dim")? as usize;
        if dim > 0 {
            out.insert((get("s")? as usize, get("t")? as u32), dim);
        }
    }
    Ok(out)
}

fn expect_table(job: &Job, dims: &BTreeMap<(usize, u32), usize>) -> Result<(), CliError> {
    let Some(path) = &job.expect else {
        return Ok(());
    };
    let want = table_from_json(&read_file(path)?)?;
    if &want == dims {
        return Ok(());
    }
    let key = want.keys().chain(dims.keys()).find(|k| want.get(k) != dims.get(k)).copied();
    let (s, t) = key.expect("maps differ somewhere");
    Err(CliError::ExpectationMismatch(format!(
        "bidegree ({s},{t}): computed {} vs expected {}",
        dims.get(&(s, t)).copied().unwrap_or(0),
        want.get(&(s, t)).copied().unwrap_or(0)
    )))
}

/// Runs a resolved job and renders its output.
pub fn run(job: &Job) -> Result<Outcome, CliError> {
    let bounds_st = json!({ "s_max": job.s_max, "t_max": job.t_max });
    let ok = |rendered: String| Ok(Outcome { code: 0, rendered });
    match job.command {
        Command::Validate => {
            let d = require_coalgebra(job)?;
            let report = d.validate();
            let code = if report.all_pass() { 0 } else { 1 };
            let rendered = match job.format {
                Format::Json => render_json(&json!({
                    "meta": meta(job, json!({ "max_degree": d.max_degree() })),
                    "checks": checks_json(&report.entries),
                    "dim": d.dim(),
                })),
                Format::Csv => {
                    let mut s = String::from("axiom,passed,witness\n");
                    for r in &report.entries {
                        let _ = writeln!(s, "{},{},{}", r.axiom, r.passed, r.witness.clone().unwrap_or_default().replace(',', ";"));
                    }
                    s
                }
                Format::Text => format!("coalgebra of dimension {} over {}, degree <= {}\n{}", d.dim(), field_name(&job.field), d.max_degree(), checks_text(&report.entries)),
            };
            Ok(Outcome { code, rendered })
        }
        Command::Cohh | Command::E2 => {
            let d = require_coalgebra(job)?;
            let page = spectral::build_e2(d, job.s_max, job.t_max)?;
            let dims: BTreeMap<(usize, u32), usize> = page.table.nonzero().collect();
            expect_table(job, &dims)?;
            let e2 = job.command == Command::E2;
            match job.format {
                Format::Json => {
                    let mut v = table_json(job, &page.table, bounds_st);
                    if e2 {
                        if let Some(rows) = v["table"].as_array_mut() {
                            for row in rows {
                                let key = (row["s"].as_u64().unwrap() as usize, row["t"].as_u64().unwrap() as u32);
                                row["names"] = json!(page.names[&key]);
                            }
                        }
                        v["generators"] = json!(page.generators().iter().map(|(n, (s, t))| json!({ "name": n, "s": s, "t": t })).collect::<Vec<_>>());
                        v["closed_form"] = json!(page.matches_closed_form());
                    }
                    ok(render_json(&v))
                }
                Format::Csv => ok(csv(dims)),
                Format::Text => {
                    let title = if e2 { "E2 = coHH" } else { "coHH" };
                    let mut s = format!("{title} over {}, s <= {}, t <= {}\n", field_name(&job.field), job.s_max, job.t_max);
                    s.push_str(&grid(&dims, job.s_max));
                    if e2 {
                        for ((st, t), names) in &page.names {
                            let _ = writeln!(s, "({st},{t}): {}", names.join(", "));
                        }
                        if let Some(m) = page.matches_closed_form() {
                            let _ = writeln!(s, "closed form Λ(y)⊗k[w]: {}", if m { "matches" } else { "differs" });
                        }
                    }
                    ok(s)
                }
            }
        }
        Command::Collapse => {
            let p = prime_of(job);
            let r = spectral::collapse_analysis(&job.degrees, p, job.s_max, job.t_max)?;
            let bounds = json!({ "s_search": r.s_search, "t_search": r.t_search });
            let verdict = match r.verdict {
                Verdict::Collapses => "Collapses",
                Verdict::CandidatesExist => "CandidatesExist",
            };
            match job.format {
                Format::Json => {
                    let mut m = meta(job, bounds);
                    m["field"] = json!(p);
                    ok(render_json(&json!({
                        "meta": m,
                        "degrees": r.degrees,
                        "verdict": verdict,
                        "candidates": r.candidates,
                        "bound": { "numerator": r.bound.numer(), "denominator": r.bound.denom(), "value": r.bound_value(), "below_prime": r.bound_below_prime },
                        "loop_bound": { "numerator": r.loop_bound.numer(), "denominator": r.loop_bound.denom(), "value": r.loop_bound_value(), "at_most_prime": r.loop_bound_at_most_prime },
                        "exhaustive": r.exhaustive,
                        "argument": r.argument,
                    })))
                }
                Format::Csv => {
                    let mut s = String::from("r,source,source_s,source_t,target,target_s,target_t\n");
                    for c in &r.candidates {
                        let _ = writeln!(s, "{},{},{},{},{},{},{}", c.r, c.source, c.source_bidegree.0, c.source_bidegree.1, c.target, c.target_bidegree.0, c.target_bidegree.1);
                    }
                    ok(s)
                }
                Format::Text => {
                    let mut s = format!("degrees {:?}, p = {p}, search s <= {}, t <= {}\n", r.degrees, r.s_search, r.t_search);
                    let _ = writeln!(s, "verdict: {verdict}");
                    let _ = writeln!(s, "bound (i_n - 2 + sum i)/(i_1 - 1) = {} = {} ({} p)", r.bound, r.bound_value(), if r.bound_below_prime { "<" } else { ">=" });
                    let _ = writeln!(s, "loop bound (i_n + sum i)/(i_1 - 1) = {} = {} ({} p)", r.loop_bound, r.loop_bound_value(), if r.loop_bound_at_most_prime { "<=" } else { ">" });
                    for c in &r.candidates {
                        let _ = writeln!(s, "d{}: {} {:?} -> {} {:?}  [{}]", c.r, c.source, c.source_bidegree, c.target, c.target_bidegree, c.equations);
                    }
                    let _ = writeln!(s, "exhaustive: {} ({})", r.exhaustive, r.argument);
                    ok(s)
                }
            }
        }
        Command::Loops => {
            let p = prime_of(job);
            let t = spectral::loop_homology(&job.degrees, p, job.max_degree)?;
            match job.format {
                Format::Json => {
                    let mut m = meta(job, json!({ "max_degree": job.max_degree }));
                    m["field"] = json!(p);
                    let rows: Vec<Value> = t.dims.iter().enumerate().map(|(n, d)| json!({ "degree": n, "dim": d })).collect();
                    ok(render_json(&json!({
                        "meta": m,
                        "degrees": t.degrees,
                        "table": rows,
                        "generators": t.generators.iter().map(|(n, d)| json!({ "name": n, "degree": d })).collect::<Vec<_>>(),
                        "coalgebra_structure": t.coalgebra_structure,
                        "convergence": t.convergence,
                    })))
                }
                Format::Csv => {
                    let mut s = String::from("degree,dim\n");
                    for (n, d) in t.dims.iter().enumerate() {
                        let _ = writeln!(s, "{n},{d}");
                    }
                    ok(s)
                }
                Format::Text => {
                    let gens: Vec<String> = t.generators.iter().map(|(n, d)| format!("{n}:{d}")).collect();
                    let mut s = format!("H_*(LX; F{p}) for degrees {:?}, degree <= {}\ngenerators {}\n", t.degrees, job.max_degree, gens.join(" "));
                    for (n, d) in t.dims.iter().enumerate() {
                        let _ = writeln!(s, "{n:>4} {d}");
                    }
                    let _ = writeln!(s, "convergence: {}\ncoalgebra structure: {}", t.convergence, t.coalgebra_structure);
                    ok(s)
                }
            }
        }
        Command::Audit => {
            let d = require_coalgebra(job)?;
            let page = spectral::build_e2(d, job.s_max, job.max_degree)?;
            let a = spectral::e2_structure_audit(&page, job.max_degree)?;
            match job.format {
                Format::Json => ok(render_json(&json!({
                    "meta": meta(job, json!({ "max_degree": a.max_degree })),
                    "checks": checks_json(&a.checks),
                    "found": a.found,
                }))),
                Format::Csv => {
                    let mut s = String::from("kind,s,t,element\n");
                    for (kind, pieces) in &a.found {
                        for (st, elems) in pieces {
                            let (si, ti) = st.trim_matches(|c| c == '(' || c == ')').split_once(',').unwrap_or(("", ""));
                            for e in elems {
                                let _ = writeln!(s, "{kind},{si},{ti},{}", e.replace(',', ";"));
                            }
                        }
                    }
                    ok(s)
                }
                Format::Text => {
                    let mut s = checks_text(&a.checks);
                    for (kind, pieces) in &a.found {
                        let _ = writeln!(s, "{kind}:");
                        for (st, elems) in pieces {
                            let _ = writeln!(s, "  {st}: {}", elems.join(", "));
                        }
                    }
                    ok(s)
                }
            }
        }
        Command::Cotor => {
            let d = require_coalgebra(job)?;
            let make = |k: ComoduleKind| -> Result<Comodule, CliError> {
                Ok(match k {
                    ComoduleKind::Trivial => Comodule::trivial(d)?,
                    ComoduleKind::Regular => Comodule::regular(d),
                })
            };
            let dims = comodule::cobar_cotor(&make(job.comodules.0)?, &make(job.comodules.1)?, job.s_max, job.t_max)?;
            let nonzero: BTreeMap<(usize, u32), usize> = dims.into_iter().filter(|(_, d)| *d > 0).collect();
            match job.format {
                Format::Json => {
                    let rows: Vec<Value> = nonzero.iter().map(|((s, t), dim)| json!({ "s": s, "t": t, "dim": dim })).collect();
                    ok(render_json(&json!({ "meta": meta(job, bounds_st), "table": rows })))
                }
                Format::Csv => ok(csv(nonzero)),
                Format::Text => {
                    let name = |k: ComoduleKind| format!("{k:?}").to_lowercase();
                    let mut s = format!("Cotor({}, {}) over {}, s <= {}, t <= {}\n", name(job.comodules.0), name(job.comodules.1), field_name(&job.field), job.s_max, job.t_max);
                    s.push_str(&grid(&nonzero, job.s_max));
                    ok(s)
                }
            }
        }
    }
}

/// Parses, resolves and runs a JSON job file.
pub fn run_job_file(path: &Path) -> Result<(Job, Outcome), CliError> {
    let spec = parse_spec(&read_file(path)?)?;
    let job = spec.resolve(path.parent().unwrap_or(Path::new(".")))?;
    let out = run(&job)?;
    Ok((job, out))
}

/// Writes to `job.output` or returns the text for stdout.
pub fn emit(job: &Job, out: &Outcome) -> Result<Option<String>, CliError> {
    match &job.output {
        Some(p) => std::fs::write(p, &out.rendered)
            .map(|_| None)
            .map_err(|e| CliError::Io { path: p.display().to_string(), message: e.to_string() }),
        None => Ok(Some(out.rendered.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_job_gets_defaults() {
        let spec = parse_spec(r#"{"command":"e2","kind":"exterior","degrees":[3]}"#).unwrap();
        let job = spec.resolve(Path::new(".")).unwrap();
        assert_eq!(job.field.characteristic(), 2);
        assert_eq!((job.s_max, job.t_max, job.format), (6, 40, Format::Text));
    }

    #[test]
    fn schema_violations_are_located() {
        let err = parse_spec("{\n  \"command\": \"cohh\",\n  \"bogus\": 1\n}").unwrap_err();
        match err {
            CliError::Parse { line, .. } => assert_eq!(line, 3),
            e => panic!("{e}"),
        }
        let spec = parse_spec(r#"{"command":"cohh","kind":"exterior","degrees":[3,4]}"#).unwrap();
        match spec.resolve(Path::new(".")).unwrap_err() {
            CliError::Schema { path, message } => {
                assert_eq!(path, "degrees[1]");
                assert!(message.contains("even"));
            }
            e => panic!("{e}"),
        }
        let spec = parse_spec(r#"{"command":"cohh","kind":"exterior","degrees":[3],"field":4}"#).unwrap();
        assert!(spec.resolve(Path::new(".")).unwrap_err().to_string().contains("nor a prime"));
    }

    #[test]
    fn refusal_exit_code() {
        let spec = parse_spec(r#"{"command":"loops","degrees":[3,5],"prime":3}"#).unwrap();
        let err = run(&spec.resolve(Path::new(".")).unwrap()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
