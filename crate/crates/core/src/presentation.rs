//! Finite descriptions of infinite graphs `G` with a designated induced
//! subgraph `H`.
//!
//! `H` is a union of host families (finite or indexed by the naturals) with
//! edge templates. Every component of `G - H` is a copy of a component
//! pattern: indexed patterns have one copy per natural `i`, replicated
//! patterns have a cardinal number of identical copies.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::address::{ComponentId, Index, Name, Selector, Solve, Vertex};
use crate::cardinal::Cardinal;
use crate::graph::FiniteGraph;
use crate::report::Report;

pub const DEFAULT_MAX_OFFSET: u64 = 8;
pub const DEFAULT_CHECK_DEPTH: u64 = 20;

/// A host vertex term `X[3]` or `X[i+c]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HostTerm {
    pub family: Name,
    pub index: Index,
}

impl HostTerm {
    pub fn ground(family: impl Into<Name>, g: u64) -> Self {
        HostTerm { family: family.into(), index: Index::Ground(g) }
    }

    pub fn affine(family: impl Into<Name>, c: u64) -> Self {
        HostTerm { family: family.into(), index: Index::Affine(c) }
    }

    pub fn at(&self, i: u64) -> Vertex {
        Vertex::host(self.family.clone(), self.index.at(i))
    }

    pub fn offset(&self) -> Option<u64> {
        match self.index {
            Index::Affine(c) => Some(c),
            Index::Ground(_) => None,
        }
    }
}

impl fmt::Display for HostTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Index::Ground(g) => write!(f, "{}[{g}]", self.family),
            Index::Affine(0) => write!(f, "{}[i]", self.family),
            Index::Affine(c) => write!(f, "{}[i+{c}]", self.family),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HostFamily {
    pub name: Name,
    pub size: Cardinal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    Indexed,
    Replicated(Cardinal),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPattern {
    pub name: Name,
    pub kind: PatternKind,
    pub inner: Vec<Name>,
    pub inner_edges: Vec<(Name, Name)>,
    pub attach: Vec<(Name, HostTerm)>,
}

impl ComponentPattern {
    pub fn is_indexed(&self) -> bool {
        self.kind == PatternKind::Indexed
    }

    pub fn selector(&self, copy: u64) -> Selector {
        match self.kind {
            PatternKind::Indexed => Selector::Indexed(copy),
            PatternKind::Replicated(_) => Selector::Replicate(copy),
        }
    }

    pub fn copy_id(&self, copy: u64) -> ComponentId {
        ComponentId { pattern: self.name.clone(), sel: self.selector(copy) }
    }

    /// Distinct attachment targets as host terms.
    pub fn attach_terms(&self) -> BTreeSet<&HostTerm> {
        self.attach.iter().map(|(_, t)| t).collect()
    }

    /// Smallest offset among the `i`-dependent attachment terms.
    pub fn min_offset(&self) -> Option<u64> {
        self.attach.iter().filter_map(|(_, t)| t.offset()).min()
    }

    pub fn has_inner(&self, local: &str) -> bool {
        self.inner.iter().any(|v| v == local)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphPresentation {
    pub families: Vec<HostFamily>,
    pub host_edges: Vec<(HostTerm, HostTerm)>,
    pub patterns: Vec<ComponentPattern>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("unknown family `{0}`")]
    UnknownFamily(Name),
    #[error("unknown pattern `{0}`")]
    UnknownPattern(Name),
    #[error("pattern `{pattern}` has no inner vertex `{local}`")]
    UnknownInner { pattern: Name, local: Name },
    #[error("duplicate name `{0}`")]
    DuplicateName(Name),
    #[error("host family `{0}` must be finite or countable")]
    UncountableHost(Name),
    #[error("host family `{0}` is empty")]
    EmptyFamily(Name),
    #[error("pattern `{0}` has no inner vertices")]
    EmptyPattern(Name),
    #[error("pattern `{0}` has empty adhesion")]
    EmptyAdhesion(Name),
    #[error("pattern `{0}` not connected")]
    PatternNotConnected(Name),
    #[error("indexed pattern `{0}` has no i-dependent attachment")]
    NoIndexedAttachment(Name),
    #[error("replicated pattern `{0}` may only attach to ground terms")]
    ReplicatedAffineAttachment(Name),
    #[error("offset in `{term}` exceeds the bound {max}")]
    OffsetTooLarge { term: String, max: u64 },
    #[error("`{0}` is out of range")]
    OutOfRange(String),
    #[error("edge template `{0}` is a loop")]
    LoopTemplate(String),
    #[error("indexed pattern `{pattern}` is not injective: copies {first} and {second} share an adhesion set")]
    NotInjective { pattern: Name, first: u64, second: u64 },
    #[error("{graph} truncation at depth {depth} is disconnected")]
    Disconnected { graph: &'static str, depth: u64 },
    #[error("address `{0}` does not denote a vertex of G")]
    AddressOutOfRange(String),
}

/// A finite induced subgraph of the presented graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTruncation {
    pub depth: u64,
    pub reps: u64,
    pub graph: FiniteGraph<Vertex>,
}

/// Infinite (or replicated) neighbor families of a vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum NeighborFamily {
    /// `Z#k.local` for every copy `k` below `count`.
    Replicated { pattern: Name, local: Name, count: Cardinal },
    /// `Y@i.local` for every `i >= from`.
    Indexed { pattern: Name, local: Name, from: u64 },
    /// `F[k]` for every `k >= from` except `skip`.
    Host { family: Name, from: u64, skip: Option<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Neighborhood {
    pub ground: BTreeSet<Vertex>,
    pub families: BTreeSet<NeighborFamily>,
}

impl Neighborhood {
    /// The neighbors that lie in the truncation.
    pub fn restrict_to(&self, t: &FiniteTruncation) -> BTreeSet<Vertex> {
        let mut out: BTreeSet<Vertex> = self.ground.iter().filter(|v| t.graph.contains(v)).cloned().collect();
        for fam in &self.families {
            let candidates: Vec<Vertex> = match fam {
                NeighborFamily::Replicated { pattern, local, count } => (0..count.clamp_to(t.reps))
                    .map(|k| Vertex::inner(ComponentId::replicate(pattern.clone(), k), local.clone()))
                    .collect(),
                NeighborFamily::Indexed { pattern, local, from } => (*from..=t.depth)
                    .map(|i| Vertex::inner(ComponentId::indexed(pattern.clone(), i), local.clone()))
                    .collect(),
                NeighborFamily::Host { family, from, skip } => (*from..=t.depth)
                    .filter(|k| Some(*k) != *skip)
                    .map(|k| Vertex::host(family.clone(), k))
                    .collect(),
            };
            out.extend(candidates.into_iter().filter(|v| t.graph.contains(v)));
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty() && self.families.is_empty()
    }
}

impl fmt::Display for Neighborhood {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::address::fmt_set(&self.ground))?;
        for fam in &self.families {
            match fam {
                NeighborFamily::Replicated { pattern, local, count } => {
                    write!(f, " + {pattern}#*.{local} x {count}")?
                }
                NeighborFamily::Indexed { pattern, local, from } => {
                    write!(f, " + {pattern}@(>={from}).{local} x aleph0")?
                }
                NeighborFamily::Host { family, from, skip } => {
                    write!(f, " + {family}[>={from}] x aleph0")?;
                    if let Some(s) = skip {
                        write!(f, " (without {family}[{s}])")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationConfig {
    pub check_depth: u64,
    pub max_offset: u64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig { check_depth: DEFAULT_CHECK_DEPTH, max_offset: DEFAULT_MAX_OFFSET }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub check_depth: u64,
    pub host_vertices: Cardinal,
    pub patterns: usize,
    pub truncation_vertices: usize,
    pub truncation_edges: usize,
}

impl ValidationReport {
    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.push("valid", true)
            .push("connectivity_checked_depth", self.check_depth)
            .push("host_vertices", self.host_vertices)
            .push("patterns", self.patterns)
            .push("truncation_vertices", self.truncation_vertices)
            .push("truncation_edges", self.truncation_edges);
        r
    }
}

impl GraphPresentation {
    pub fn family(&self, name: &str) -> Option<&HostFamily> {
        self.families.iter().find(|f| f.name == name)
    }

    pub fn pattern(&self, name: &str) -> Option<&ComponentPattern> {
        self.patterns.iter().find(|p| p.name == name)
    }

    pub fn family_size(&self, name: &str) -> Option<Cardinal> {
        self.family(name).map(|f| f.size)
    }

    pub fn host_contains(&self, family: &str, index: u64) -> bool {
        self.family_size(family).is_some_and(|s| s.admits(index))
    }

    pub fn host_cardinality(&self) -> Cardinal {
        self.families.iter().map(|f| f.size).sum()
    }

    /// Number of copies of a pattern: the valid index range of an indexed
    /// pattern, or the multiplicity of a replicated one.
    pub fn copy_count(&self, p: &ComponentPattern) -> Cardinal {
        match p.kind {
            PatternKind::Replicated(m) => m,
            PatternKind::Indexed => {
                let mut count = Cardinal::Aleph0;
                for (_, t) in &p.attach {
                    let size = self.family_size(&t.family).unwrap_or(Cardinal::ZERO);
                    match (t.index, size) {
                        (Index::Affine(c), Cardinal::Finite(s)) => {
                            count = count.min(Cardinal::Finite(s.saturating_sub(c)));
                        }
                        (Index::Ground(g), s) if !s.admits(g) => count = Cardinal::ZERO,
                        _ => {}
                    }
                }
                count
            }
        }
    }

    pub fn component_exists(&self, id: &ComponentId) -> bool {
        self.pattern(&id.pattern).is_some_and(|p| {
            p.selector(id.copy()) == id.sel && self.copy_count(p).admits(id.copy())
        })
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        match v {
            Vertex::Host { family, index } => self.host_contains(family, *index),
            Vertex::Inner { component, local } => {
                self.component_exists(component)
                    && self.pattern(&component.pattern).is_some_and(|p| p.has_inner(local))
            }
            Vertex::Contracted(_) => false,
        }
    }

    /// `N_G(D)` for a copy `D`, evaluated from the attachment templates.
    pub fn attach_targets(&self, id: &ComponentId) -> Result<BTreeSet<Vertex>, PresentationError> {
        if !self.component_exists(id) {
            return Err(PresentationError::AddressOutOfRange(id.to_string()));
        }
        let p = self.pattern(&id.pattern).expect("checked above");
        Ok(p.attach.iter().map(|(_, t)| t.at(id.copy())).collect())
    }

    /// Largest ground host index used by any attachment, and the largest
    /// attachment offset.
    pub(crate) fn attach_bounds(&self) -> (Option<u64>, u64) {
        let mut ground = None;
        let mut offset = 0;
        for p in &self.patterns {
            for (_, t) in &p.attach {
                match t.index {
                    Index::Ground(g) => ground = ground.max(Some(g)),
                    Index::Affine(c) => offset = offset.max(c),
                }
            }
        }
        (ground, offset)
    }

    /// Anchors below this value may collide with ground attachments; above
    /// it adhesion sets of indexed copies are determined by their shape.
    pub fn adhesion_window(&self) -> u64 {
        let (ground, offset) = self.attach_bounds();
        ground.map_or(0, |g| g + 1) + offset
    }

    /// The subgraph of `G` on host vertices of index at most `depth`, indexed
    /// copies whose attachments all lie there, and the first `reps` copies of
    /// each replicated pattern whose attachments lie there.
    pub fn truncate(&self, depth: u64, reps: u64) -> FiniteTruncation {
        let present = |v: &Vertex| match v {
            Vertex::Host { family, index } => *index <= depth && self.host_contains(family, *index),
            _ => false,
        };
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for f in &self.families {
            vertices.extend((0..=depth).filter(|&k| f.size.admits(k)).map(|k| Vertex::host(f.name.clone(), k)));
        }
        for (a, b) in &self.host_edges {
            let range = if a.index.is_affine() || b.index.is_affine() { 0..=depth } else { 0..=0 };
            for i in range {
                let (x, y) = (a.at(i), b.at(i));
                if present(&x) && present(&y) {
                    edges.push((x, y));
                }
            }
        }
        for p in &self.patterns {
            let count = self.copy_count(p);
            let copies: Vec<u64> = match p.kind {
                PatternKind::Indexed => (0..=depth).filter(|&i| count.admits(i)).collect(),
                PatternKind::Replicated(m) => (0..m.clamp_to(reps)).collect(),
            };
            for copy in copies {
                let id = p.copy_id(copy);
                if !p.attach.iter().all(|(_, t)| present(&t.at(copy))) {
                    continue;
                }
                let local = |name: &Name| Vertex::inner(id.clone(), name.clone());
                vertices.extend(p.inner.iter().map(local));
                edges.extend(p.inner_edges.iter().map(|(a, b)| (local(a), local(b))));
                edges.extend(p.attach.iter().map(|(a, t)| (local(a), t.at(copy))));
            }
        }
        FiniteTruncation { depth, reps, graph: FiniteGraph::new(vertices, edges) }
    }

    /// The host-only part of a truncation.
    pub fn truncate_host(&self, depth: u64) -> FiniteTruncation {
        let t = self.truncate(depth, 0);
        let hosts: Vec<Vertex> = t.graph.vertices().iter().filter(|v| v.is_host()).cloned().collect();
        FiniteTruncation { depth, reps: 0, graph: t.graph.induced(hosts) }
    }

    /// Describes `N_G(v)`: finitely many explicit neighbors plus families of
    /// neighbors that cannot be listed.
    pub fn neighborhood(&self, v: &Vertex) -> Result<Neighborhood, PresentationError> {
        if !self.contains(v) {
            return Err(PresentationError::AddressOutOfRange(v.to_string()));
        }
        let mut nb = Neighborhood::default();
        match v {
            Vertex::Host { family, index } => {
                self.host_neighbors(family, *index, &mut nb);
                self.pattern_neighbors_of_host(family, *index, &mut nb);
            }
            Vertex::Inner { component, local } => {
                let p = self.pattern(&component.pattern).expect("contains() checked the pattern");
                let copy = component.copy();
                for (a, b) in &p.inner_edges {
                    if a == local {
                        nb.ground.insert(Vertex::inner(component.clone(), b.clone()));
                    }
                    if b == local {
                        nb.ground.insert(Vertex::inner(component.clone(), a.clone()));
                    }
                }
                for (a, t) in &p.attach {
                    if a == local {
                        nb.ground.insert(t.at(copy));
                    }
                }
            }
            Vertex::Contracted(_) => unreachable!("contains() rejects contracted vertices"),
        }
        nb.ground.remove(v);
        Ok(nb)
    }

    /// Adjacency in `G`, decided from the templates alone.
    pub fn adjacent(&self, u: &Vertex, w: &Vertex) -> bool {
        if u == w || !self.contains(u) || !self.contains(w) {
            return false;
        }
        match (u, w) {
            (Vertex::Host { .. }, Vertex::Host { .. }) => self.host_edges.iter().any(|(a, b)| {
                [(a, b), (b, a)].into_iter().any(|(x, y)| template_hits(x, y, u, w))
            }),
            (Vertex::Inner { component, local }, h @ Vertex::Host { .. })
            | (h @ Vertex::Host { .. }, Vertex::Inner { component, local }) => {
                let p = self.pattern(&component.pattern).expect("contains() checked the pattern");
                p.attach.iter().any(|(a, t)| a == local && t.at(component.copy()) == *h)
            }
            (Vertex::Inner { component: c1, local: l1 }, Vertex::Inner { component: c2, local: l2 }) => {
                c1 == c2 && {
                    let p = self.pattern(&c1.pattern).expect("contains() checked the pattern");
                    p.inner_edges.iter().any(|(a, b)| (a == l1 && b == l2) || (a == l2 && b == l1))
                }
            }
            _ => false,
        }
    }

    fn host_neighbors(&self, family: &str, index: u64, nb: &mut Neighborhood) {
        let me = Vertex::host(family, index);
        for (a, b) in &self.host_edges {
            for (x, y) in [(a, b), (b, a)] {
                match (x.index, y.index) {
                    (Index::Ground(g), Index::Ground(_)) => {
                        if x.family == family && g == index {
                            nb.ground.insert(y.at(0));
                        }
                    }
                    (Index::Ground(g), Index::Affine(c)) => {
                        if x.family == family && g == index {
                            let size = self.family_size(&y.family).unwrap_or(Cardinal::ZERO);
                            match size {
                                Cardinal::Finite(s) => {
                                    nb.ground.extend((c..s).map(|k| Vertex::host(y.family.clone(), k)));
                                }
                                _ => {
                                    let skip = (y.family == family && index >= c).then_some(index);
                                    nb.families.insert(NeighborFamily::Host { family: y.family.clone(), from: c, skip });
                                }
                            }
                        }
                    }
                    (Index::Affine(c), _) => {
                        if x.family == family && index >= c {
                            let other = y.at(index - c);
                            if other != me && self.contains(&other) {
                                nb.ground.insert(other);
                            }
                        }
                    }
                }
            }
        }
    }

    fn pattern_neighbors_of_host(&self, family: &str, index: u64, nb: &mut Neighborhood) {
        for p in &self.patterns {
            let count = self.copy_count(p);
            for (local, t) in &p.attach {
                if t.family != family {
                    continue;
                }
                match (t.index, p.kind) {
                    (Index::Ground(g), PatternKind::Replicated(m)) if g == index => {
                        nb.families.insert(NeighborFamily::Replicated {
                            pattern: p.name.clone(),
                            local: local.clone(),
                            count: m,
                        });
                    }
                    (Index::Ground(g), PatternKind::Indexed) if g == index => match count {
                        Cardinal::Finite(n) => nb
                            .ground
                            .extend((0..n).map(|i| Vertex::inner(p.copy_id(i), local.clone()))),
                        _ => {
                            nb.families.insert(NeighborFamily::Indexed {
                                pattern: p.name.clone(),
                                local: local.clone(),
                                from: 0,
                            });
                        }
                    },
                    (Index::Affine(c), PatternKind::Indexed) if index >= c && count.admits(index - c) => {
                        nb.ground.insert(Vertex::inner(p.copy_id(index - c), local.clone()));
                    }
                    _ => {}
                }
            }
        }
    }

    pub fn validate(&self, check_depth: u64) -> Result<ValidationReport, PresentationError> {
        self.validate_with(ValidationConfig { check_depth, ..ValidationConfig::default() })
    }

    /// Checks every structural invariant; connectivity of `G` and `H` is
    /// checked on the truncation at `check_depth` only.
    pub fn validate_with(&self, cfg: ValidationConfig) -> Result<ValidationReport, PresentationError> {
        use PresentationError as E;
        let mut names = BTreeSet::new();
        for name in self.families.iter().map(|f| &f.name).chain(self.patterns.iter().map(|p| &p.name)) {
            if !names.insert(name) {
                return Err(E::DuplicateName(name.clone()));
            }
        }
        for f in &self.families {
            match f.size {
                Cardinal::Aleph1 => return Err(E::UncountableHost(f.name.clone())),
                Cardinal::Finite(0) => return Err(E::EmptyFamily(f.name.clone())),
                _ => {}
            }
        }
        let check_term = |t: &HostTerm| -> Result<(), PresentationError> {
            let size = self.family_size(&t.family).ok_or_else(|| E::UnknownFamily(t.family.clone()))?;
            match t.index {
                Index::Ground(g) if !size.admits(g) => Err(E::OutOfRange(t.to_string())),
                Index::Affine(c) if c > cfg.max_offset => {
                    Err(E::OffsetTooLarge { term: t.to_string(), max: cfg.max_offset })
                }
                _ => Ok(()),
            }
        };
        for (a, b) in &self.host_edges {
            check_term(a)?;
            check_term(b)?;
            if a == b {
                return Err(E::LoopTemplate(format!("{a} -- {b}")));
            }
        }
        for p in &self.patterns {
            self.validate_pattern(p, &check_term)?;
        }
        self.check_injective()?;

        let t = self.truncate(cfg.check_depth, 1);
        if !t.graph.is_connected() {
            return Err(E::Disconnected { graph: "G", depth: cfg.check_depth });
        }
        if !self.truncate_host(cfg.check_depth).graph.is_connected() {
            return Err(E::Disconnected { graph: "H", depth: cfg.check_depth });
        }
        Ok(ValidationReport {
            check_depth: cfg.check_depth,
            host_vertices: self.host_cardinality(),
            patterns: self.patterns.len(),
            truncation_vertices: t.graph.vertex_count(),
            truncation_edges: t.graph.edge_count(),
        })
    }

    fn validate_pattern(
        &self,
        p: &ComponentPattern,
        check_term: &dyn Fn(&HostTerm) -> Result<(), PresentationError>,
    ) -> Result<(), PresentationError> {
        use PresentationError as E;
        if p.inner.is_empty() {
            return Err(E::EmptyPattern(p.name.clone()));
        }
        let mut locals = BTreeSet::new();
        for v in &p.inner {
            if !locals.insert(v) {
                return Err(E::DuplicateName(format!("{}.{v}", p.name)));
            }
        }
        let known = |v: &Name| {
            if p.has_inner(v) {
                Ok(())
            } else {
                Err(E::UnknownInner { pattern: p.name.clone(), local: v.clone() })
            }
        };
        for (a, b) in &p.inner_edges {
            known(a)?;
            known(b)?;
            if a == b {
                return Err(E::LoopTemplate(format!("{}: {a} -- {b}", p.name)));
            }
        }
        if p.attach.is_empty() {
            return Err(E::EmptyAdhesion(p.name.clone()));
        }
        for (a, t) in &p.attach {
            known(a)?;
            check_term(t)?;
        }
        let inner = FiniteGraph::new(p.inner.iter().cloned(), p.inner_edges.iter().cloned());
        if !inner.is_connected() {
            return Err(E::PatternNotConnected(p.name.clone()));
        }
        let any_affine = p.attach.iter().any(|(_, t)| t.index.is_affine());
        match p.kind {
            PatternKind::Indexed if !any_affine => Err(E::NoIndexedAttachment(p.name.clone())),
            PatternKind::Replicated(_) if any_affine => Err(E::ReplicatedAffineAttachment(p.name.clone())),
            _ => Ok(()),
        }
    }

    /// Distinct copies of one indexed pattern must have distinct adhesion
    /// sets. Copies whose anchor lies past the adhesion window are separated
    /// by their largest affine target, so only the window is searched.
    fn check_injective(&self) -> Result<(), PresentationError> {
        let window = self.adhesion_window();
        for p in self.patterns.iter().filter(|p| p.is_indexed()) {
            let m = p.min_offset().unwrap_or(0);
            let count = self.copy_count(p);
            let mut seen: BTreeMap<BTreeSet<Vertex>, u64> = BTreeMap::new();
            for i in (0..(window + 1).saturating_sub(m).max(1)).filter(|&i| count.admits(i)) {
                let set = self.attach_targets(&p.copy_id(i))?;
                if let Some(&first) = seen.get(&set) {
                    return Err(PresentationError::NotInjective { pattern: p.name.clone(), first, second: i });
                }
                seen.insert(set, i);
            }
        }
        Ok(())
    }
}

/// Serializes to the presentation file format; `parse` inverts it.
impl fmt::Display for GraphPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fam in &self.families {
            match fam.size {
                Cardinal::Finite(n) => writeln!(f, "host family {} size {n}", fam.name)?,
                Cardinal::Aleph0 => writeln!(f, "host family {} index nat", fam.name)?,
                Cardinal::Aleph1 => writeln!(f, "host family {} size aleph1", fam.name)?,
            }
        }
        for (a, b) in &self.host_edges {
            writeln!(f, "host edge {a} -- {b}")?;
        }
        for p in &self.patterns {
            match p.kind {
                PatternKind::Indexed => writeln!(f, "component {} indexed", p.name)?,
                PatternKind::Replicated(m) => writeln!(f, "component {} replicated {m}", p.name)?,
            }
            for v in &p.inner {
                writeln!(f, "  inner {v}")?;
            }
            for (a, b) in &p.inner_edges {
                writeln!(f, "  inner edge {a} -- {b}")?;
            }
            for (a, t) in &p.attach {
                writeln!(f, "  attach {a} -- {t}")?;
            }
        }
        Ok(())
    }
}

/// Whether the host edge template `x -- y` produces the edge `u -- w`.
fn template_hits(x: &HostTerm, y: &HostTerm, u: &Vertex, w: &Vertex) -> bool {
    let (Vertex::Host { family: fu, index: iu }, Vertex::Host { family: fw, index: iw }) = (u, w) else {
        return false;
    };
    if x.family != *fu || y.family != *fw {
        return false;
    }
    match x.index.solve(*iu) {
        Solve::Never => false,
        Solve::At(i) => y.index.at(i) == *iw,
        Solve::Always => y.index.solve(*iw) != Solve::Never,
    }
}
