//! Separation checks on truncations, and the separators built from a torso
//! separator `F`: the prime-only `X` and the `S`-modification `F_S`.
//!
//! A path meets `F` if any of its vertices, endpoints included, lies in `F`.
//! `NotSeparated` is definitive (a finite path of a truncation is a path of
//! the infinite graph); `Separated` only records the truncations searched.

use std::collections::BTreeSet;
use std::fmt;

use crate::address::{fmt_set, ComponentId, Solve, Vertex};
use crate::adhesion::Side;
use crate::flow::min_vertex_separator;
use crate::graph::FiniteGraph;
use crate::presentation::FiniteTruncation;
use crate::projection::{is_tendril, mask_sequence, project_ray, tail_component, Masked, ProjectionError, ProjectionSeq};
use crate::ray::{Lasso, RaySpec};
use crate::report::Report;
use crate::torso::Torso;

pub type SeparatorSet = BTreeSet<Vertex>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub depths: Vec<u64>,
    pub reps: u64,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { depths: vec![10, 20, 40], reps: 3 }
    }
}

impl Grid {
    pub fn max_depth(&self) -> u64 {
        self.depths.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeparationError {
    #[error("U is empty")]
    EmptySources,
    #[error("the target set is empty")]
    EmptyTargets,
    #[error("the depth grid is empty")]
    EmptyGrid,
    #[error(transparent)]
    Projection(#[from] ProjectionError),
}

/// One truncation searched without finding a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stamp {
    pub depth: u64,
    pub reps: u64,
    /// U or the targets had no vertex in this truncation.
    pub vacuous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Separated { checked: Vec<Stamp> },
    NotSeparated { witness: Vec<Vertex>, depth: u64, reps: u64 },
}

impl Certificate {
    pub fn is_separated(&self) -> bool {
        matches!(self, Certificate::Separated { .. })
    }

    pub fn witness(&self) -> Option<&[Vertex]> {
        match self {
            Certificate::NotSeparated { witness, .. } => Some(witness),
            Certificate::Separated { .. } => None,
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Separated { checked } => {
                let ds: Vec<String> =
                    checked.iter().map(|s| format!("{}{}", s.depth, if s.vacuous { "*" } else { "" })).collect();
                let reps = checked.first().map_or(0, |s| s.reps);
                write!(f, "Separated depths={} reps={reps}", ds.join(","))
            }
            Certificate::NotSeparated { witness, depth, reps } => {
                write!(f, "NotSeparated witness=({}) depth={depth} reps={reps}", path_string(witness))
            }
        }
    }
}

pub fn path_string(p: &[Vertex]) -> String {
    p.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Outcome on a single finite graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiniteVerdict {
    Separated,
    NotSeparated(Vec<Vertex>),
}

/// BFS from `U \ F` in `g - F`; the witness is a shortest path, ties going to
/// the canonically smallest vertices.
pub fn separates_finite(
    g: &FiniteGraph<Vertex>,
    f: &SeparatorSet,
    u: &BTreeSet<Vertex>,
    targets: &BTreeSet<Vertex>,
) -> Result<FiniteVerdict, SeparationError> {
    if u.is_empty() {
        return Err(SeparationError::EmptySources);
    }
    if targets.is_empty() {
        return Err(SeparationError::EmptyTargets);
    }
    let blocked: Vec<bool> = g.vertices().iter().map(|v| f.contains(v)).collect();
    let sources: Vec<usize> = u.iter().filter_map(|v| g.id(v)).collect();
    let is_target: Vec<bool> = g.vertices().iter().map(|v| targets.contains(v)).collect();
    Ok(match g.bfs_path(&sources, &blocked, |x| is_target[x]) {
        Some(path) => FiniteVerdict::NotSeparated(path.into_iter().map(|x| g.vertex(x).clone()).collect()),
        None => FiniteVerdict::Separated,
    })
}

/// Which infinite graph a check runs in.
#[derive(Debug, Clone, Copy)]
pub enum Arena<'a> {
    G(&'a Torso),
    K(&'a Torso),
}

impl Arena<'_> {
    pub fn truncate(&self, depth: u64, reps: u64) -> FiniteTruncation {
        match self {
            Arena::G(t) => t.presentation.truncate(depth, reps),
            Arena::K(t) => t.truncate(depth, reps),
        }
    }

    /// Adjacency straight from the templates, independent of truncations.
    pub fn adjacent(&self, a: &Vertex, b: &Vertex) -> bool {
        match self {
            Arena::G(t) => t.presentation.adjacent(a, b),
            Arena::K(t) => t.adjacent(a, b),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Arena::G(_) => "G",
            Arena::K(_) => "K",
        }
    }
}

/// Targets of a separation claim.
#[derive(Debug, Clone, Copy)]
pub enum Targets<'a> {
    Vertices(&'a BTreeSet<Vertex>),
    /// The vertices of a ray or walk from position `from` on.
    Ray { seq: &'a Lasso<crate::address::SymVertex>, from: usize },
    Projection(&'a ProjectionSeq),
}

impl Targets<'_> {
    /// Target vertices that can lie in the truncation at `(depth, reps)`.
    pub fn at(&self, depth: u64, reps: u64) -> BTreeSet<Vertex> {
        let bound = depth.max(reps);
        match self {
            Targets::Vertices(s) => (*s).clone(),
            Targets::Ray { seq, from } => seq.terms_up_to(bound).into_iter().skip(*from).collect(),
            Targets::Projection(p) => p.seq.terms_up_to(bound).into_iter().collect(),
        }
    }

    fn is_empty(&self) -> bool {
        match self {
            Targets::Vertices(s) => s.is_empty(),
            Targets::Ray { seq, from } => seq.is_finite() && seq.prefix.len() <= *from,
            Targets::Projection(p) => p.seq.prefix.is_empty() && p.seq.period.is_empty(),
        }
    }
}

/// Runs [`separates_finite`] on every truncation of the grid, stopping at the
/// first witness. Sources and targets are restricted to each truncation; a
/// truncation missing all of either is recorded as vacuous.
pub fn separates_at_depths(
    arena: Arena<'_>,
    f: &SeparatorSet,
    u: &BTreeSet<Vertex>,
    targets: Targets<'_>,
    grid: &Grid,
) -> Result<Certificate, SeparationError> {
    if u.is_empty() {
        return Err(SeparationError::EmptySources);
    }
    if targets.is_empty() {
        return Err(SeparationError::EmptyTargets);
    }
    if grid.depths.is_empty() {
        return Err(SeparationError::EmptyGrid);
    }
    let mut checked = Vec::new();
    for &depth in &grid.depths {
        let t = arena.truncate(depth, grid.reps);
        let g = &t.graph;
        let us: BTreeSet<Vertex> = u.iter().filter(|v| g.contains(v)).cloned().collect();
        let ws: BTreeSet<Vertex> = targets.at(depth, grid.reps).into_iter().filter(|v| g.contains(v)).collect();
        let stamp = Stamp { depth, reps: grid.reps, vacuous: us.is_empty() || ws.is_empty() };
        if !stamp.vacuous {
            if let FiniteVerdict::NotSeparated(witness) = separates_finite(g, f, &us, &ws)? {
                return Ok(Certificate::NotSeparated { witness, depth, reps: grid.reps });
            }
        }
        checked.push(stamp);
    }
    Ok(Certificate::Separated { checked })
}

/// Re-checks a witness with template adjacency: a path from `U` to a target
/// that avoids `F`.
pub fn witness_is_valid(
    arena: Arena<'_>,
    witness: &[Vertex],
    f: &SeparatorSet,
    u: &BTreeSet<Vertex>,
    targets: &BTreeSet<Vertex>,
) -> bool {
    let (Some(first), Some(last)) = (witness.first(), witness.last()) else { return false };
    let distinct: BTreeSet<&Vertex> = witness.iter().collect();
    distinct.len() == witness.len()
        && u.contains(first)
        && targets.contains(last)
        && witness.iter().all(|v| !f.contains(v))
        && witness.windows(2).all(|w| arena.adjacent(&w[0], &w[1]))
}

/// A minimum vertex set meeting every `U`-`Targets` path of the graph.
pub fn min_separator(g: &FiniteGraph<Vertex>, u: &BTreeSet<Vertex>, targets: &BTreeSet<Vertex>) -> SeparatorSet {
    min_vertex_separator(g, u, targets).separator
}

/// Prime components whose torso vertex lies in `F`.
pub fn d_hat_prime(t: &Torso, f: &SeparatorSet) -> BTreeSet<ComponentId> {
    f.iter()
        .filter_map(|v| match v {
            Vertex::Contracted(d) if t.contains(v) => Some(d.clone()),
            _ => None,
        })
        .collect()
}

/// Positions `k` of the ray with `v_k = v`, found exactly.
fn positions_of(seq: &Lasso<crate::address::SymVertex>, v: &Vertex) -> Vec<usize> {
    let mut out: Vec<usize> = seq.prefix.iter().enumerate().filter(|(_, x)| *x == v).map(|(k, _)| k).collect();
    for (j, term) in seq.period.iter().enumerate() {
        if let Solve::At(n) = term.solve(v) {
            if n >= seq.start && (n - seq.start).is_multiple_of(seq.step) {
                out.push(seq.position((n - seq.start) / seq.step, j));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Double-prime components `D` met by the ray at some position `n` whose
/// successor `v_{n+1}` lies in `F`.
pub fn d_hat_double_prime(t: &Torso, s: &RaySpec, f: &SeparatorSet) -> Result<BTreeSet<ComponentId>, SeparationError> {
    if !s.is_finite() && !is_tendril(s) {
        return Err(ProjectionError::NotTendril.into());
    }
    let m = mask_sequence(t, &s.seq)?;
    let mut out = BTreeSet::new();
    for v in f.iter().filter(|v| v.is_host()) {
        for k in positions_of(&s.seq, v).into_iter().filter(|&k| k > 0) {
            if let Some(Masked::Comp(d)) = m.term(k - 1) {
                if t.classes.side_of(&d) == Side::DoublePrime {
                    out.insert(d);
                }
            }
        }
    }
    Ok(out)
}

fn host_part(t: &Torso, f: &SeparatorSet) -> SeparatorSet {
    f.iter().filter(|v| v.is_host() && t.presentation.contains(v)).cloned().collect()
}

fn with_adhesions<'a>(t: &Torso, mut base: SeparatorSet, ds: impl IntoIterator<Item = &'a ComponentId>) -> SeparatorSet {
    for d in ds {
        base.extend(t.presentation.attach_targets(d).unwrap_or_default());
    }
    base
}

/// `F_S = (F ∩ V(H)) ∪ ⋃ N_G(D)` over `D` in `D̂' ∪ D̂''`.
pub fn s_modification(t: &Torso, s: &RaySpec, f: &SeparatorSet) -> Result<SeparatorSet, SeparationError> {
    let dp = d_hat_prime(t, f);
    let ddp = d_hat_double_prime(t, s, f)?;
    Ok(with_adhesions(t, host_part(t, f), dp.iter().chain(&ddp)))
}

/// `X = (F ∩ V(H)) ∪ ⋃ N_G(D)` over `D` in `D̂'` only.
pub fn pitz_x(t: &Torso, f: &SeparatorSet) -> SeparatorSet {
    with_adhesions(t, host_part(t, f), &d_hat_prime(t, f))
}

/// Which separator the lemma's conclusion is tested with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modification {
    FS,
    X,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaOutcome {
    Holds,
    HypothesisNotEstablished,
    /// Hypothesis separated at every depth, conclusion refuted.
    Violation,
    /// Hypothesis separated, conclusion refuted, with `X` in place of `F_S`.
    XFails,
}

impl fmt::Display for LemmaOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LemmaOutcome::Holds => "holds",
            LemmaOutcome::HypothesisNotEstablished => "hypothesis not established",
            LemmaOutcome::Violation => "LEMMA-VIOLATION",
            LemmaOutcome::XFails => "X fails",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub f: SeparatorSet,
    pub separator: SeparatorSet,
    pub modification: Modification,
    pub projection: Vec<Vertex>,
    pub hypothesis: Certificate,
    pub conclusion: Certificate,
    pub outcome: LemmaOutcome,
}

impl LemmaReport {
    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        let name = match self.modification {
            Modification::FS => "F_S",
            Modification::X => "X",
        };
        r.push("F", fmt_set(&self.f))
            .push(name, fmt_set(&self.separator))
            .push("projection_prefix", format!("({})", path_string(&self.projection)))
            .push("hypothesis", &self.hypothesis)
            .push("conclusion", &self.conclusion)
            .push("outcome", self.outcome);
        r
    }
}

/// Checks the hypothesis (`F` separates `U` from the projection `S'` in `K`)
/// and the conclusion (`F_S`, or `X`, separates `U` from `S` in `G`) on the
/// same truncations.
pub fn lemma421_check_with(
    t: &Torso,
    u: &BTreeSet<Vertex>,
    s: &RaySpec,
    f: &SeparatorSet,
    grid: &Grid,
    modification: Modification,
) -> Result<LemmaReport, SeparationError> {
    let proj = project_ray(t, s)?;
    let separator = match modification {
        Modification::FS => s_modification(t, s, f)?,
        Modification::X => pitz_x(t, f),
    };
    let hypothesis = separates_at_depths(Arena::K(t), f, u, Targets::Projection(&proj), grid)?;
    let conclusion = separates_at_depths(Arena::G(t), &separator, u, Targets::Ray { seq: &s.seq, from: 0 }, grid)?;
    let outcome = match (hypothesis.is_separated(), conclusion.is_separated(), modification) {
        (false, _, _) => LemmaOutcome::HypothesisNotEstablished,
        (true, true, _) => LemmaOutcome::Holds,
        (true, false, Modification::FS) => LemmaOutcome::Violation,
        (true, false, Modification::X) => LemmaOutcome::XFails,
    };
    Ok(LemmaReport {
        f: f.clone(),
        separator,
        modification,
        projection: proj.sample(8),
        hypothesis,
        conclusion,
        outcome,
    })
}

pub fn lemma421_check(
    t: &Torso,
    u: &BTreeSet<Vertex>,
    s: &RaySpec,
    f: &SeparatorSet,
    grid: &Grid,
) -> Result<LemmaReport, SeparationError> {
    lemma421_check_with(t, u, s, f, grid, Modification::FS)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PipelineReport {
    /// The tail lies in one component `D`: `N_G(D)` plus the initial segment.
    NonTendril { component: ComponentId, tail_from: usize, separator: SeparatorSet, certificate: Certificate },
    /// `U` meets the projection, so no separator exists.
    UMeetsProjection { common: BTreeSet<Vertex> },
    Tendril { lemma: LemmaReport, x: SeparatorSet },
}

impl PipelineReport {
    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        match self {
            PipelineReport::NonTendril { component, tail_from, separator, certificate } => {
                r.push("case", "non-tendril")
                    .push("component", component)
                    .push("tail_from", tail_from)
                    .push("separator", fmt_set(separator))
                    .push("certificate", certificate);
            }
            PipelineReport::UMeetsProjection { common } => {
                r.push("case", "tendril").push("U_meets_W", fmt_set(common)).push("separable", false);
            }
            PipelineReport::Tendril { lemma, x } => {
                r.push("case", "tendril");
                r.push("X", fmt_set(x));
                r.extend("lemma", &lemma.to_report());
            }
        }
        r
    }
}

/// Finds a separator for `U` and `S` in `G` the way the faithfulness proof
/// does. `F` comes from a minimum cut in the deepest `K`-truncation of the
/// grid, which also separates in every shallower one.
pub fn faithfulness_pipeline(
    t: &Torso,
    u: &BTreeSet<Vertex>,
    s: &RaySpec,
    grid: &Grid,
) -> Result<PipelineReport, SeparationError> {
    if u.is_empty() {
        return Err(SeparationError::EmptySources);
    }
    if grid.depths.is_empty() {
        return Err(SeparationError::EmptyGrid);
    }
    if !s.is_finite() && !is_tendril(s) {
        let (component, tail_from) = tail_component(s)?;
        let mut separator: SeparatorSet = t.presentation.attach_targets(&component).unwrap_or_default();
        separator.extend(s.seq.prefix[..tail_from].iter().cloned());
        let certificate =
            separates_at_depths(Arena::G(t), &separator, u, Targets::Ray { seq: &s.seq, from: 0 }, grid)?;
        return Ok(PipelineReport::NonTendril { component, tail_from, separator, certificate });
    }
    let proj = project_ray(t, s)?;
    let depth = grid.max_depth();
    let k = t.truncate(depth, grid.reps);
    let w: BTreeSet<Vertex> = Targets::Projection(&proj).at(depth, grid.reps).into_iter().filter(|v| k.graph.contains(v)).collect();
    let common: BTreeSet<Vertex> = u.intersection(&w).cloned().collect();
    if !common.is_empty() {
        return Ok(PipelineReport::UMeetsProjection { common });
    }
    let f = min_separator(&k.graph, u, &w);
    let lemma = lemma421_check(t, u, s, &f, grid)?;
    Ok(PipelineReport::Tendril { lemma, x: pitz_x(t, &f) })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemarkReport {
    pub x: SeparatorSet,
    /// Last position of `S` in `X`, if `S` meets `X` at all.
    pub last_meeting: Option<usize>,
    pub certificate: Certificate,
}

impl RemarkReport {
    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.push("X", fmt_set(&self.x));
        match self.last_meeting {
            Some(k) => r.push("last_meeting", k).push("tail_from", k + 1),
            None => r.push("last_meeting", "none").push("tail_from", "0 (S never meets X)"),
        };
        r.push("certificate", &self.certificate);
        r
    }
}

/// Checks that `X` separates `U` from the tail of `S` after its last vertex
/// in `X`.
pub fn remark_tail_check(
    t: &Torso,
    u: &BTreeSet<Vertex>,
    s: &RaySpec,
    f: &SeparatorSet,
    grid: &Grid,
) -> Result<RemarkReport, SeparationError> {
    let x = pitz_x(t, f);
    let last_meeting = x.iter().flat_map(|v| positions_of(&s.seq, v)).max();
    let from = last_meeting.map_or(0, |k| k + 1);
    let certificate = separates_at_depths(Arena::G(t), &x, u, Targets::Ray { seq: &s.seq, from }, grid)?;
    Ok(RemarkReport { x, last_meeting, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_presentation;
    use crate::presentation::tests::EXAMPLE4;
    use crate::torso::torso_of;

    const RAY_S: &str = "ray S prefix X[2] Z#0.z X[3] period Y@n.y X[n+1] start 3";

    fn v(s: &str) -> Vertex {
        Vertex::parse(s).unwrap()
    }

    fn set(items: &[&str]) -> BTreeSet<Vertex> {
        items.iter().map(|s| v(s)).collect()
    }

    fn ex4() -> (Torso, RaySpec) {
        (torso_of(&parse_presentation(EXAMPLE4).unwrap()), RaySpec::parse(RAY_S).unwrap())
    }

    #[test]
    fn finite_checks() {
        let (t, s) = ex4();
        let k = t.truncate(10, 3);
        let proj = project_ray(&t, &s).unwrap();
        let w: BTreeSet<Vertex> = Targets::Projection(&proj).at(10, 3).into_iter().filter(|x| k.graph.contains(x)).collect();
        let u = set(&["X[0]"]);
        assert_eq!(separates_finite(&k.graph, &set(&["X[2]", "X[3]"]), &u, &w).unwrap(), FiniteVerdict::Separated);
        assert!(matches!(separates_finite(&k.graph, &BTreeSet::new(), &u, &w).unwrap(), FiniteVerdict::NotSeparated(_)));
        assert_eq!(separates_finite(&k.graph, &u, &u, &w).unwrap(), FiniteVerdict::Separated);
        assert_eq!(separates_finite(&k.graph, &u, &BTreeSet::new(), &w), Err(SeparationError::EmptySources));
    }

    #[test]
    fn example4_separators() {
        let (t, s) = ex4();
        let f = set(&["X[2]", "X[3]"]);
        assert!(d_hat_prime(&t, &f).is_empty());
        assert_eq!(d_hat_double_prime(&t, &s, &f).unwrap(), BTreeSet::from([ComponentId::replicate("Z", 0)]));
        assert_eq!(s_modification(&t, &s, &f).unwrap(), set(&["X[1]", "X[2]", "X[3]"]));
        assert_eq!(pitz_x(&t, &f), f);
        let vy = set(&["V[Y@3]"]);
        assert_eq!(d_hat_prime(&t, &vy), BTreeSet::from([ComponentId::indexed("Y", 3)]));
        assert_eq!(pitz_x(&t, &vy), set(&["X[3]", "X[4]"]));
        assert_eq!(s_modification(&t, &s, &vy).unwrap(), set(&["X[3]", "X[4]"]));
        assert!(pitz_x(&t, &BTreeSet::new()).is_empty());
        assert!(d_hat_double_prime(&t, &s, &set(&["X[7]"])).unwrap().is_empty());
    }

    #[test]
    fn example4_certificates() {
        let (t, s) = ex4();
        let grid = Grid::default();
        let u = set(&["X[0]"]);
        let x = set(&["X[2]", "X[3]"]);
        let cert = separates_at_depths(Arena::G(&t), &x, &u, Targets::Ray { seq: &s.seq, from: 0 }, &grid).unwrap();
        assert_eq!(cert.witness().unwrap(), &[v("X[0]"), v("X[1]"), v("Z#0.z")]);
        let targets: BTreeSet<Vertex> = s.seq.terms_up_to(10).into_iter().collect();
        assert!(witness_is_valid(Arena::G(&t), cert.witness().unwrap(), &x, &u, &targets));
        let fs = set(&["X[1]", "X[2]", "X[3]"]);
        let cert = separates_at_depths(Arena::G(&t), &fs, &u, Targets::Ray { seq: &s.seq, from: 0 }, &grid).unwrap();
        assert!(cert.is_separated(), "{cert}");
        let empty = Lasso::walk(vec![]);
        let e = separates_at_depths(Arena::G(&t), &fs, &u, Targets::Ray { seq: &empty, from: 0 }, &grid);
        assert_eq!(e, Err(SeparationError::EmptyTargets));
    }

    #[test]
    fn example4_lemma_and_remark() {
        let (t, s) = ex4();
        let grid = Grid::default();
        let u = set(&["X[0]"]);
        let f = set(&["X[2]", "X[3]"]);
        let r = lemma421_check(&t, &u, &s, &f, &grid).unwrap();
        assert_eq!(r.outcome, LemmaOutcome::Holds);
        assert_eq!(r.separator, set(&["X[1]", "X[2]", "X[3]"]));
        let r = lemma421_check_with(&t, &u, &s, &f, &grid, Modification::X).unwrap();
        assert_eq!(r.outcome, LemmaOutcome::XFails);
        assert_eq!(r.conclusion.witness().unwrap(), &[v("X[0]"), v("X[1]"), v("Z#0.z")]);
        let r = lemma421_check(&t, &u, &s, &BTreeSet::new(), &grid).unwrap();
        assert_eq!(r.outcome, LemmaOutcome::HypothesisNotEstablished);

        let rem = remark_tail_check(&t, &u, &s, &f, &grid).unwrap();
        assert_eq!(rem.last_meeting, Some(2));
        assert!(rem.certificate.is_separated());
        let rem = remark_tail_check(&t, &u, &s, &BTreeSet::new(), &grid).unwrap();
        assert_eq!(rem.last_meeting, None);
        assert!(!rem.certificate.is_separated());
        let rem = remark_tail_check(&t, &u, &s, &u, &grid).unwrap();
        assert!(rem.certificate.is_separated());
    }

    #[test]
    fn example4_pipeline() {
        let (t, s) = ex4();
        let grid = Grid::default();
        match faithfulness_pipeline(&t, &set(&["X[0]"]), &s, &grid).unwrap() {
            PipelineReport::Tendril { lemma, .. } => {
                assert_eq!(lemma.outcome, LemmaOutcome::Holds);
                assert_eq!(lemma.f, set(&["X[1]"]));
            }
            other => panic!("{other:?}"),
        }
        match faithfulness_pipeline(&t, &set(&["X[2]"]), &s, &grid).unwrap() {
            PipelineReport::UMeetsProjection { common } => assert_eq!(common, set(&["X[2]"])),
            other => panic!("{other:?}"),
        }
        let n = RaySpec::parse("ray N prefix X[0] Y@0.y X[1] Y@1.y period Y@1.y start 0").unwrap();
        match faithfulness_pipeline(&t, &set(&["X[5]"]), &n, &grid).unwrap() {
            PipelineReport::NonTendril { component, tail_from, separator, .. } => {
                assert_eq!((component, tail_from), (ComponentId::indexed("Y", 1), 3));
                assert_eq!(separator, set(&["X[0]", "X[1]", "X[2]", "Y@0.y"]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn min_separator_example4() {
        let (t, _) = ex4();
        let k = t.truncate(10, 3);
        let cut = min_separator(&k.graph, &set(&["X[0]"]), &set(&["X[4]"]));
        assert_eq!(cut.len(), 1);
        let cut = min_separator(&k.graph, &set(&["X[0]", "V[Y@0]"]), &set(&["X[4]"]));
        assert_eq!(cut, set(&["X[4]"]));
        assert_eq!(separates_finite(&k.graph, &cut, &set(&["X[0]", "V[Y@0]"]), &set(&["X[4]"])).unwrap(), FiniteVerdict::Separated);
    }
}
