//! Scenario files: a presentation plus named sets, rays, a depth grid and a
//! list of checks.
//!
//! ```text
//! include example4.graph          # or presentation lines inline
//! set U = {X[0]}
//! set F = {X[2], X[3]}
//! ray S prefix X[2] Z#0.z X[3] period Y@n.y X[n+1] start 3
//! depths 10,20,40
//! reps 3
//! check lemma U=U F=F ray=S expect=holds
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use crate::address::{fmt_set, Vertex};
use crate::adhesion::classify_adhesion;
use crate::parse::{strip_comment, ParseError, PresentationParser};
use crate::presentation::GraphPresentation;
use crate::projection::{check_local_finiteness, check_projection_walk, is_tendril, project_ray};
use crate::ray::{validate_ray, RaySpec};
use crate::report::Report;
use crate::separation::{
    faithfulness_pipeline, lemma421_check_with, remark_tail_check, separates_at_depths, Arena, Certificate, Grid,
    LemmaOutcome, Modification, PipelineReport, Targets,
};
use crate::torso::{conservativity_check, torso_of, Torso};

const MAX_INCLUDE_DEPTH: usize = 8;

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("{path}: file not found")]
    NotFound { path: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Presentation { path: String, source: ParseError },
    #[error("{path}:{line}: {msg}")]
    Syntax { path: String, line: usize, msg: String },
    #[error("set `{set}`: vertex {vertex} is not in G or K")]
    Unresolved { set: String, vertex: Vertex },
    #[error("ray `{ray}`: vertex {vertex} is not in G")]
    UnresolvedRay { ray: String, vertex: Vertex },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckKind {
    Classify,
    Torso,
    Conservativity,
    Project,
    Separate,
    Lemma,
    Remark,
    Pipeline,
}

impl CheckKind {
    pub const ALL: [CheckKind; 8] = [
        CheckKind::Classify,
        CheckKind::Torso,
        CheckKind::Conservativity,
        CheckKind::Project,
        CheckKind::Separate,
        CheckKind::Lemma,
        CheckKind::Remark,
        CheckKind::Pipeline,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Classify => "classify",
            CheckKind::Torso => "torso",
            CheckKind::Conservativity => "conservativity",
            CheckKind::Project => "project",
            CheckKind::Separate => "separate",
            CheckKind::Lemma => "lemma",
            CheckKind::Remark => "remark",
            CheckKind::Pipeline => "pipeline",
        }
    }

    fn parse(s: &str) -> Option<CheckKind> {
        CheckKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub kind: CheckKind,
    pub args: BTreeMap<String, String>,
}

impl Check {
    pub fn new(kind: CheckKind) -> Self {
        Check { kind, args: BTreeMap::new() }
    }

    pub fn arg(mut self, key: &str, value: impl Into<String>) -> Self {
        self.args.insert(key.to_owned(), value.into());
        self
    }

    fn get<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.args.get(key).map_or(default, String::as_str)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "check {}", self.kind.name())?;
        for (k, v) in &self.args {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub presentation: GraphPresentation,
    pub sets: BTreeMap<String, BTreeSet<Vertex>>,
    pub rays: BTreeMap<String, RaySpec>,
    pub grid: Grid,
    pub checks: Vec<Check>,
}

/// Canonical text; parsing it gives back the same scenario.
impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.presentation)?;
        writeln!(f)?;
        for (name, s) in &self.sets {
            writeln!(f, "set {name} = {}", fmt_set(s))?;
        }
        for r in self.rays.values() {
            writeln!(f, "{r}")?;
        }
        let ds: Vec<String> = self.grid.depths.iter().map(u64::to_string).collect();
        writeln!(f, "depths {}", ds.join(","))?;
        writeln!(f, "reps {}", self.grid.reps)?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

struct Loader {
    pres: PresentationParser,
    sets: BTreeMap<String, BTreeSet<Vertex>>,
    rays: BTreeMap<String, RaySpec>,
    depths: Option<Vec<u64>>,
    reps: Option<u64>,
    checks: Vec<Check>,
}

fn syntax(path: &str, line: usize, msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Syntax { path: path.to_owned(), line, msg: msg.into() }
}

/// Parses `{a, b, c}` (braces optional, commas or whitespace between items).
pub fn parse_vertex_set(s: &str) -> Result<BTreeSet<Vertex>, String> {
    let body = s.trim();
    let body = body.strip_prefix('{').map_or(body, |b| b.strip_suffix('}').unwrap_or(b));
    body.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|w| !w.is_empty())
        .map(|w| Vertex::parse(w).map_err(|e| format!("`{w}`: {e}")))
        .collect()
}

impl Loader {
    fn feed_text(&mut self, text: &str, path: &str, dir: &Path, depth: usize) -> Result<(), ScenarioError> {
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = strip_comment(raw).trim();
            let (head, rest) = line.split_once(char::is_whitespace).map_or((line, ""), |(h, r)| (h, r.trim()));
            match head {
                "include" => {
                    if depth >= MAX_INCLUDE_DEPTH {
                        return Err(syntax(path, lineno, "includes nested too deeply"));
                    }
                    let target = dir.join(rest);
                    let text = read_file(&target)?;
                    let sub_dir = target.parent().map(Path::to_path_buf).unwrap_or_default();
                    self.feed_text(&text, &target.display().to_string(), &sub_dir, depth + 1)?;
                }
                "set" => {
                    let (name, value) =
                        rest.split_once('=').ok_or_else(|| syntax(path, lineno, "expected `set NAME = {...}`"))?;
                    let set = parse_vertex_set(value).map_err(|m| syntax(path, lineno, m))?;
                    self.sets.insert(name.trim().to_owned(), set);
                }
                "ray" => {
                    let r = RaySpec::parse(line).map_err(|e| syntax(path, lineno, e.to_string()))?;
                    self.rays.insert(r.name.clone(), r);
                }
                "depths" => {
                    let ds: Result<Vec<u64>, _> = rest.split(',').map(|d| d.trim().parse::<u64>()).collect();
                    let ds = ds.map_err(|_| syntax(path, lineno, "expected `depths d1,d2,...`"))?;
                    if ds.is_empty() {
                        return Err(syntax(path, lineno, "empty depth list"));
                    }
                    self.depths = Some(ds);
                }
                "reps" => {
                    self.reps = Some(rest.parse().map_err(|_| syntax(path, lineno, "expected `reps <n>`"))?);
                }
                "check" => {
                    let mut words = rest.split_whitespace();
                    let kind = words.next().unwrap_or("");
                    let kind = CheckKind::parse(kind).ok_or_else(|| syntax(path, lineno, format!("unknown check `{kind}`")))?;
                    let mut check = Check::new(kind);
                    for w in words {
                        let (k, v) = w.split_once('=').ok_or_else(|| syntax(path, lineno, format!("expected key=value, found `{w}`")))?;
                        check.args.insert(k.to_owned(), v.to_owned());
                    }
                    self.checks.push(check);
                }
                _ => {
                    let taken = self
                        .pres
                        .feed(lineno, raw)
                        .map_err(|source| ScenarioError::Presentation { path: path.to_owned(), source })?;
                    if !taken {
                        return Err(syntax(path, lineno, format!("unexpected `{head}`")));
                    }
                }
            }
        }
        Ok(())
    }

    fn finish(self, path: &str) -> Result<Scenario, ScenarioError> {
        let presentation =
            self.pres.finish().map_err(|source| ScenarioError::Presentation { path: path.to_owned(), source })?;
        let default = Grid::default();
        Ok(Scenario {
            presentation,
            sets: self.sets,
            rays: self.rays,
            grid: Grid { depths: self.depths.unwrap_or(default.depths), reps: self.reps.unwrap_or(default.reps) },
            checks: self.checks,
        })
    }
}

fn read_file(path: &Path) -> Result<String, ScenarioError> {
    std::fs::read_to_string(path).map_err(|source| {
        let p = path.display().to_string();
        if source.kind() == std::io::ErrorKind::NotFound {
            ScenarioError::NotFound { path: p }
        } else {
            ScenarioError::Io { path: p, source }
        }
    })
}

impl Scenario {
    /// Parses scenario text; `include` paths are taken relative to `dir`.
    pub fn parse(text: &str, dir: &Path) -> Result<Scenario, ScenarioError> {
        Self::parse_named(text, "<scenario>", dir)
    }

    fn parse_named(text: &str, path: &str, dir: &Path) -> Result<Scenario, ScenarioError> {
        let mut loader = Loader {
            pres: PresentationParser::default(),
            sets: BTreeMap::new(),
            rays: BTreeMap::new(),
            depths: None,
            reps: None,
            checks: Vec::new(),
        };
        loader.feed_text(text, path, dir, 0)?;
        loader.finish(path)
    }

    pub fn load(path: &Path) -> Result<Scenario, ScenarioError> {
        let text = read_file(path)?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse_named(&text, &path.display().to_string(), &dir)
    }

    /// Every named vertex must exist in `G` or `K`, and the first cycle of
    /// every ray in `G`.
    pub fn resolve(&self, t: &Torso) -> Result<(), ScenarioError> {
        for (name, s) in &self.sets {
            if let Some(v) = s.iter().find(|v| !t.presentation.contains(v) && !t.contains(v)) {
                return Err(ScenarioError::Unresolved { set: name.clone(), vertex: v.clone() });
            }
        }
        for (name, r) in &self.rays {
            let first = r.seq.unroll(1).prefix;
            if let Some(v) = first.iter().find(|v| !t.presentation.contains(v)) {
                return Err(ScenarioError::UnresolvedRay { ray: name.clone(), vertex: v.clone() });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub check: Check,
    pub outcome: String,
    pub expected: Option<String>,
    pub report: Report,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        !self.outcome.starts_with("error") && self.expected.as_ref().is_none_or(|e| *e == self.outcome)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioRun {
    pub results: Vec<CheckResult>,
}

impl ScenarioRun {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(CheckResult::passed)
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        for (i, c) in self.results.iter().enumerate() {
            let key = format!("check.{}.{}", i + 1, c.check.kind.name());
            let verdict = if c.passed() { "PASS" } else { "FAIL" };
            match &c.expected {
                Some(e) => r.push(&key, format!("{verdict} outcome={} expect={e}", c.outcome)),
                None => r.push(&key, format!("{verdict} outcome={}", c.outcome)),
            };
            r.extend(&key, &c.report);
        }
        r.push("result", if self.all_passed() { "PASS" } else { "FAIL" });
        r
    }
}

pub fn certificate_token(c: &Certificate) -> &'static str {
    if c.is_separated() {
        "separated"
    } else {
        "not-separated"
    }
}

pub fn lemma_token(o: LemmaOutcome) -> &'static str {
    match o {
        LemmaOutcome::Holds => "holds",
        LemmaOutcome::HypothesisNotEstablished => "hypothesis-not-established",
        LemmaOutcome::Violation => "violation",
        LemmaOutcome::XFails => "x-fails",
    }
}

fn comma_path(p: &[Vertex]) -> String {
    p.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

struct Ctx<'a> {
    sc: &'a Scenario,
    t: &'a Torso,
}

impl Ctx<'_> {
    fn set(&self, c: &Check, key: &str) -> Result<BTreeSet<Vertex>, String> {
        let name = c.get(key, key);
        self.sc.sets.get(name).cloned().ok_or_else(|| format!("no set named `{name}`"))
    }

    fn ray(&self, c: &Check, validate: bool) -> Result<&RaySpec, String> {
        let name = c.get("ray", "S");
        let r = self.sc.rays.get(name).ok_or_else(|| format!("no ray named `{name}`"))?;
        if validate {
            validate_ray(&self.t.presentation, r).map_err(|e| e.to_string())?;
        }
        Ok(r)
    }

    fn run(&self, c: &Check) -> Result<(String, Report), String> {
        let grid = &self.sc.grid;
        let t = self.t;
        let mut r = Report::new();
        let outcome = match c.kind {
            CheckKind::Classify => {
                let cl = classify_adhesion(&t.presentation);
                r = cl.to_report();
                "ok".to_owned()
            }
            CheckKind::Torso => {
                let k = t.truncate(grid.max_depth(), grid.reps);
                r.push("depth", grid.max_depth()).push("reps", grid.reps);
                r.push("vertices", k.graph.vertex_count()).push("edges", k.graph.edge_count());
                "ok".to_owned()
            }
            CheckKind::Conservativity => {
                let cons = conservativity_check(t);
                r = cons.to_report();
                if cons.conservative { "conservative" } else { "not-conservative" }.to_owned()
            }
            CheckKind::Project => {
                let s = self.ray(c, true)?;
                let proj = project_ray(t, s).map_err(|e| e.to_string())?;
                let n = c.args.get("expect").map_or(8, |e| e.split(',').count());
                let lf = check_local_finiteness(&proj, 64);
                r.push("local_finiteness", lf);
                match check_projection_walk(t, &proj, grid.max_depth(), grid.reps) {
                    Ok(steps) => r.push("walk_in_K", format!("ok steps={steps}")),
                    Err(e) => r.push("walk_in_K", format!("broken at {} -- {}", e.0, e.1)),
                };
                comma_path(&proj.sample(n))
            }
            CheckKind::Separate => {
                let f = self.set(c, "F")?;
                let u = self.set(c, "U")?;
                let arena = match c.get("in", "G") {
                    "G" => Arena::G(t),
                    "K" => Arena::K(t),
                    other => return Err(format!("unknown graph `{other}`")),
                };
                let cert = if let Some(name) = c.args.get("targets") {
                    let ws = self.sc.sets.get(name).ok_or_else(|| format!("no set named `{name}`"))?;
                    separates_at_depths(arena, &f, &u, Targets::Vertices(ws), grid)
                } else {
                    let s = self.ray(c, true)?;
                    let from: usize = c.get("from", "0").parse().map_err(|_| "bad `from`".to_owned())?;
                    match arena {
                        Arena::G(_) => separates_at_depths(arena, &f, &u, Targets::Ray { seq: &s.seq, from }, grid),
                        Arena::K(_) => {
                            let proj = project_ray(t, s).map_err(|e| e.to_string())?;
                            separates_at_depths(arena, &f, &u, Targets::Projection(&proj), grid)
                        }
                    }
                }
                .map_err(|e| e.to_string())?;
                r.push("graph", arena.name()).push("certificate", &cert);
                let token = certificate_token(&cert);
                match (cert.witness(), c.args.get("witness")) {
                    (Some(w), Some(_)) => format!("{token}:{}", comma_path(w)),
                    _ => token.to_owned(),
                }
            }
            CheckKind::Lemma => {
                let s = self.ray(c, true)?;
                let modification = match c.get("with", "FS") {
                    "FS" => Modification::FS,
                    "X" => Modification::X,
                    other => return Err(format!("unknown separator `{other}`")),
                };
                let rep = lemma421_check_with(t, &self.set(c, "U")?, s, &self.set(c, "F")?, grid, modification)
                    .map_err(|e| e.to_string())?;
                r = rep.to_report();
                lemma_token(rep.outcome).to_owned()
            }
            CheckKind::Remark => {
                let s = self.ray(c, true)?;
                let rep = remark_tail_check(t, &self.set(c, "U")?, s, &self.set(c, "F")?, grid).map_err(|e| e.to_string())?;
                r = rep.to_report();
                certificate_token(&rep.certificate).to_owned()
            }
            CheckKind::Pipeline => {
                let s = self.ray(c, false)?;
                if s.is_finite() || is_tendril(s) {
                    validate_ray(&t.presentation, s).map_err(|e| e.to_string())?;
                }
                let rep = faithfulness_pipeline(t, &self.set(c, "U")?, s, grid).map_err(|e| e.to_string())?;
                r = rep.to_report();
                match &rep {
                    PipelineReport::NonTendril { certificate, .. } => certificate_token(certificate).to_owned(),
                    PipelineReport::UMeetsProjection { .. } => "u-meets-w".to_owned(),
                    PipelineReport::Tendril { lemma, .. } => lemma_token(lemma.outcome).to_owned(),
                }
            }
        };
        Ok((outcome, r))
    }
}

/// Runs every check in order. The expected value of a `separate` check may
/// pin the witness as `not-separated:<v>,<v>,...` together with `witness=1`.
pub fn run_scenario(sc: &Scenario) -> Result<ScenarioRun, ScenarioError> {
    let t = torso_of(&sc.presentation);
    sc.resolve(&t)?;
    let ctx = Ctx { sc, t: &t };
    let results = sc
        .checks
        .iter()
        .map(|c| {
            let (outcome, report) = ctx.run(c).unwrap_or_else(|e| (format!("error: {e}"), Report::new()));
            CheckResult { check: c.clone(), outcome, expected: c.args.get("expect").cloned(), report }
        })
        .collect();
    Ok(ScenarioRun { results })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example4::{PRESENTATION, RAY_S};

    fn example4_scenario() -> String {
        format!(
            "{PRESENTATION}\nset U = {{X[0]}}\nset F = {{X[2], X[3]}}\n{RAY_S}\n\
             check classify\n\
             check project ray=S expect=X[2],X[3],V[Y@3],X[4],V[Y@4]\n\
             check separate in=K expect=separated\n\
             check separate in=G witness=1 expect=not-separated:X[0],X[1],Z#0.z\n\
             check lemma expect=holds\n\
             check lemma with=X expect=x-fails\n\
             check remark expect=separated\n\
             check pipeline expect=holds\n\
             check conservativity expect=conservative\n"
        )
    }

    #[test]
    fn example4_checks_pass() {
        let sc = Scenario::parse(&example4_scenario(), Path::new(".")).unwrap();
        let run = run_scenario(&sc).unwrap();
        assert!(run.all_passed(), "{}", run.to_report());
        assert_eq!(run.results.len(), 9);
    }

    #[test]
    fn canonical_text_round_trips() {
        let sc = Scenario::parse(&example4_scenario(), Path::new(".")).unwrap();
        let text = sc.to_string();
        let again = Scenario::parse(&text, Path::new(".")).unwrap();
        assert_eq!(again.to_string(), text);
        assert_eq!(run_scenario(&again).unwrap(), run_scenario(&sc).unwrap());
    }

    #[test]
    fn include_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("ex4.graph"), PRESENTATION).unwrap();
        let text = format!("include ex4.graph\nset U = {{X[0]}}\nset F = {{X[2]}}\n{RAY_S}\ndepths 10\ncheck remark\n");
        let main = dir.path().join("main.scn");
        std::fs::write(&main, text).unwrap();
        let sc = Scenario::load(&main).unwrap();
        assert_eq!(sc.grid.depths, vec![10]);
        assert!(run_scenario(&sc).unwrap().all_passed());

        let missing = Scenario::load(&dir.path().join("nope.scn")).unwrap_err();
        assert!(missing.to_string().ends_with("file not found"), "{missing}");
        assert!(matches!(Scenario::parse("bogus line\n", Path::new(".")), Err(ScenarioError::Syntax { line: 1, .. })));
        assert!(Scenario::parse("check frobnicate\n", Path::new(".")).is_err());
        let unresolved = format!("{PRESENTATION}set U = {{W[0]}}\ncheck classify\n");
        let sc = Scenario::parse(&unresolved, Path::new(".")).unwrap();
        assert!(matches!(run_scenario(&sc), Err(ScenarioError::Unresolved { .. })));
    }

    #[test]
    fn failing_expectation_and_check_errors() {
        let text = format!("{PRESENTATION}set U = {{X[0]}}\nset F = {{X[2], X[3]}}\n{RAY_S}\ncheck separate expect=separated\ncheck lemma ray=T\n");
        let run = run_scenario(&Scenario::parse(&text, Path::new(".")).unwrap()).unwrap();
        assert!(!run.results[0].passed());
        assert!(run.results[1].outcome.starts_with("error: no ray named `T`"));
        assert!(!run.all_passed());
    }
}
