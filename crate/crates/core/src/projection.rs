//! H-masking and K-projection of walks and rays.
//!
//! Masking replaces every vertex outside `H` by its component. Projection
//! then collapses each maximal run of one prime component `D` to `V[D]` and
//! drops double-prime components.

use std::fmt;
use std::ops::Range;

use crate::address::{ComponentId, Index, Selector, SymVertex, Vertex};
use crate::adhesion::Side;
use crate::ray::{ground_bound, Lasso, RaySpec, Symbolic};
use crate::torso::Torso;

/// A term of an H-masked sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Masked<I = u64> {
    Host(Vertex<I>),
    Comp(ComponentId<I>),
}

impl Symbolic for Masked<Index> {
    type Ground = Masked;

    fn at(&self, n: u64) -> Masked {
        match self {
            Masked::Host(v) => Masked::Host(v.at(n)),
            Masked::Comp(c) => Masked::Comp(c.at(n)),
        }
    }

    fn is_ground(&self) -> bool {
        match self {
            Masked::Host(v) => v.is_ground(),
            Masked::Comp(c) => !c.sel.value().is_affine(),
        }
    }
}

impl fmt::Display for Masked {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Masked::Host(v) => write!(f, "{v}"),
            Masked::Comp(c) => write!(f, "Comp({c})"),
        }
    }
}

impl fmt::Display for Masked<Index> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Masked::Host(v) => write!(f, "{v}"),
            Masked::Comp(c) => write!(f, "Comp({c})"),
        }
    }
}

pub type MaskedSequence = Lasso<Masked<Index>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProjectionError {
    #[error("`{0}` is not a vertex of G")]
    NotInG(String),
    #[error("unstable period: {0}")]
    UnstablePeriod(String),
    #[error("the ray is not a tendril")]
    NotTendril,
    #[error("the ray is a tendril")]
    IsTendril,
    #[error("the tail of the ray does not stay in one component")]
    TailNotInOneComponent,
}

fn mask_term<I: Clone>(v: &Vertex<I>) -> Option<Masked<I>> {
    match v {
        Vertex::Host { .. } => Some(Masked::Host(v.clone())),
        Vertex::Inner { component, .. } => Some(Masked::Comp(component.clone())),
        Vertex::Contracted(_) => None,
    }
}

pub fn mask_vertex(v: &Vertex) -> Result<Masked, ProjectionError> {
    mask_term(v).ok_or_else(|| ProjectionError::NotInG(v.to_string()))
}

/// Pointwise masking of a walk or ray of `G`.
pub fn mask_sequence(t: &Torso, w: &Lasso<SymVertex>) -> Result<MaskedSequence, ProjectionError> {
    let p = &t.presentation;
    let mut prefix = Vec::with_capacity(w.prefix.len());
    for v in &w.prefix {
        if !p.contains(v) {
            return Err(ProjectionError::NotInG(v.to_string()));
        }
        prefix.push(mask_vertex(v)?);
    }
    let period = w
        .period
        .iter()
        .map(|s| mask_term(s).ok_or_else(|| ProjectionError::NotInG(s.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Lasso { prefix, period, start: w.start, step: w.step })
}

/// A K-projection with the masked positions each term came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionSeq {
    pub seq: Lasso<SymVertex>,
    /// Masked positions behind each prefix term.
    pub prefix_origins: Vec<Range<usize>>,
    /// Positions behind each period term, relative to the start of a cycle.
    pub period_origins: Vec<Range<usize>>,
    /// Masked position of the first cycle, and the masked period length.
    pub period_base: usize,
    pub masked_period_len: usize,
    /// Built from a finite sample of a ray rather than symbolically.
    pub sampled: bool,
}

impl ProjectionSeq {
    /// Masked positions that produced term `k`.
    pub fn origin(&self, k: usize) -> Option<Range<usize>> {
        if k < self.prefix_origins.len() {
            return Some(self.prefix_origins[k].clone());
        }
        if self.period_origins.is_empty() {
            return None;
        }
        let r = k - self.prefix_origins.len();
        let (c, j) = (r / self.period_origins.len(), r % self.period_origins.len());
        let shift = self.period_base + c * self.masked_period_len;
        let o = &self.period_origins[j];
        Some(o.start + shift..o.end + shift)
    }

    pub fn sample(&self, len: usize) -> Vec<Vertex> {
        self.seq.sample(len)
    }
}

/// Rule 1 then rule 2 on finitely many masked terms; origins are offset by
/// `base`.
fn project_finite(t: &Torso, terms: &[Masked], base: usize) -> (Vec<Vertex>, Vec<Range<usize>>) {
    let mut out: Vec<Vertex> = Vec::new();
    let mut origins: Vec<Range<usize>> = Vec::new();
    for (k, m) in terms.iter().enumerate() {
        match m {
            Masked::Host(v) => {
                out.push(v.clone());
                origins.push(base + k..base + k + 1);
            }
            Masked::Comp(d) => {
                if t.classes.side_of(d) == Side::DoublePrime {
                    continue;
                }
                if k > 0 && terms[k - 1] == *m {
                    origins.last_mut().expect("run already started").end += 1;
                } else {
                    out.push(Vertex::Contracted(d.clone()));
                    origins.push(base + k..base + k + 1);
                }
            }
        }
    }
    (out, origins)
}

/// Projection of the first `len` masked terms, treated as a finite walk.
pub fn k_project_sampled(t: &Torso, m: &MaskedSequence, len: usize) -> ProjectionSeq {
    let terms = m.sample(len);
    let (out, origins) = project_finite(t, &terms, 0);
    ProjectionSeq {
        seq: Lasso::walk(out),
        prefix_origins: origins,
        period_origins: Vec::new(),
        period_base: terms.len(),
        masked_period_len: 0,
        sampled: true,
    }
}

/// K-projection. Periodic inputs are first unrolled until every period term
/// has a fixed prime or double-prime side; a collapse that would cross a
/// cycle boundary is refused.
pub fn k_project(t: &Torso, m: &MaskedSequence) -> Result<ProjectionSeq, ProjectionError> {
    if m.is_finite() {
        let (out, origins) = project_finite(t, &m.prefix, 0);
        return Ok(ProjectionSeq {
            seq: Lasso::walk(out),
            prefix_origins: origins,
            period_origins: Vec::new(),
            period_base: m.prefix.len(),
            masked_period_len: 0,
            sampled: false,
        });
    }
    if !m.period.iter().any(|x| matches!(x, Masked::Host(_))) {
        return Err(ProjectionError::NotTendril);
    }

    let mut l = m.unroll(stable_from(t, m));
    let prime_comp = |x: &Masked| matches!(x, Masked::Comp(d) if t.classes.side_of(d) == Side::Prime);

    // A run crossing from one cycle into the next.
    let (first, last) = (&l.period[0], &l.period[l.period.len() - 1]);
    let far = ground_bound(&t.presentation).max(l.start) + l.step;
    for n in [l.start, far] {
        let (a, b) = (last.at(n), first.at(n + l.step));
        if a == b && prime_comp(&a) {
            return Err(ProjectionError::UnstablePeriod(format!("component {a} continues across the cycle boundary")));
        }
    }
    // A run crossing from the prefix into the first cycle moves into the prefix.
    if let Some(p) = l.prefix.last() {
        if *p == first.at(l.start) && prime_comp(p) {
            l = l.unroll(1);
        }
    }

    let (prefix, prefix_origins) = project_finite(t, &l.prefix, 0);
    let mut period = Vec::new();
    let mut period_origins: Vec<Range<usize>> = Vec::new();
    for (j, x) in l.period.iter().enumerate() {
        match x {
            Masked::Host(v) => {
                period.push(v.clone());
                period_origins.push(j..j + 1);
            }
            Masked::Comp(d) => {
                if t.classes.side_of(&d.at(l.start)) == Side::DoublePrime {
                    continue;
                }
                if j > 0 && l.period[j - 1] == *x {
                    period_origins.last_mut().expect("run already started").end += 1;
                } else {
                    period.push(Vertex::Contracted(d.clone()));
                    period_origins.push(j..j + 1);
                }
            }
        }
    }
    let out = ProjectionSeq {
        seq: Lasso { prefix, period, start: l.start, step: l.step },
        prefix_origins,
        period_origins,
        period_base: l.prefix.len(),
        masked_period_len: l.period.len(),
        sampled: false,
    };

    // Double unroll: the symbolic form must agree with direct projection.
    let concrete = l.unrolled_terms(2);
    let (direct, _) = project_finite(t, &concrete, 0);
    if direct != out.seq.unrolled_terms(2) {
        return Err(ProjectionError::UnstablePeriod("symbolic and unrolled projections disagree".into()));
    }
    Ok(out)
}

/// Number of cycles after which every masked period term has one side.
fn stable_from(t: &Torso, m: &MaskedSequence) -> u64 {
    let window = t.classes.window;
    let p = &t.presentation;
    let mut need = 0;
    for x in &m.period {
        let Masked::Comp(d) = x else { continue };
        let (Selector::Indexed(Index::Affine(off)), Some(q)) = (d.sel, p.pattern(&d.pattern)) else { continue };
        let anchor = m.start + off + q.min_offset().unwrap_or(0);
        if anchor < window {
            need = need.max((window - anchor).div_ceil(m.step));
        }
    }
    need
}

/// Whether the ray has infinitely many vertices in `H`, i.e. its period
/// contains a host term.
pub fn is_tendril(s: &RaySpec) -> bool {
    s.seq.period.iter().any(SymVertex::is_host)
}

/// For a ray that is not a tendril: the component containing its tail and
/// the position where the tail starts (one past the last host vertex).
pub fn tail_component(s: &RaySpec) -> Result<(ComponentId, usize), ProjectionError> {
    if is_tendril(s) {
        return Err(ProjectionError::IsTendril);
    }
    let seq = &s.seq;
    let n = seq.prefix.iter().rposition(Vertex::is_host).map_or(0, |k| k + 1);
    let mut comps = seq.prefix[n..].iter().map(|v| v.component().cloned()).chain(seq.period.iter().map(|t| {
        t.component().filter(|c| !c.sel.value().is_affine()).map(|c| c.at(0))
    }));
    let first = comps.next().flatten().ok_or(ProjectionError::TailNotInOneComponent)?;
    if comps.all(|c| c.as_ref() == Some(&first)) {
        Ok((first, n))
    } else {
        Err(ProjectionError::TailNotInOneComponent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalFiniteness {
    /// Decided for the whole (symbolic or finite) sequence.
    Definitive(bool),
    /// No repeated vertex among the first `depth` terms of a sample.
    Sampled { holds: bool, depth: usize },
}

impl LocalFiniteness {
    pub fn holds(self) -> bool {
        match self {
            LocalFiniteness::Definitive(b) => b,
            LocalFiniteness::Sampled { holds, .. } => holds,
        }
    }
}

impl fmt::Display for LocalFiniteness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalFiniteness::Definitive(b) => write!(f, "{b} (definitive)"),
            LocalFiniteness::Sampled { holds, depth } => write!(f, "{holds} (sampled to {depth})"),
        }
    }
}

/// A symbolic tour visits each vertex finitely often exactly when every
/// period term moves with the loop index.
pub fn check_local_finiteness(s: &ProjectionSeq, depth: usize) -> LocalFiniteness {
    if s.sampled {
        let terms = s.sample(depth);
        let distinct: std::collections::BTreeSet<&Vertex> = terms.iter().collect();
        return LocalFiniteness::Sampled { holds: distinct.len() == terms.len(), depth };
    }
    LocalFiniteness::Definitive(s.seq.period.iter().all(|t| !t.is_ground()))
}

/// Checks that consecutive projection terms inside the K-truncation are
/// adjacent there. Returns the number of pairs checked or the first failure.
pub fn check_projection_walk(t: &Torso, s: &ProjectionSeq, depth: u64, reps: u64) -> Result<usize, Box<(Vertex, Vertex)>> {
    let k = t.truncate(depth, reps);
    let terms = s.seq.terms_up_to(depth.max(reps) + 1);
    let mut checked = 0;
    for w in terms.windows(2) {
        if k.graph.contains(&w[0]) && k.graph.contains(&w[1]) {
            if !k.graph.adjacent(&w[0], &w[1]) {
                return Err(Box::new((w[0].clone(), w[1].clone())));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Masks and projects a ray in one step.
pub fn project_ray(t: &Torso, s: &RaySpec) -> Result<ProjectionSeq, ProjectionError> {
    k_project(t, &mask_sequence(t, &s.seq)?)
}
