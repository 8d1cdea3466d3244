//! The dominated torso `K` of `H` in `G`.
//!
//! Prime components are contracted to new vertices `V[D]`; double-prime
//! components are contracted onto a vertex of their adhesion set chosen by
//! `η`, which turns every double-prime adhesion set into a clique.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::address::{ComponentId, Name, Selector, Vertex};
use crate::adhesion::{classify_adhesion, AdhesionClassification, Side};
use crate::cardinal::Cardinal;
use crate::graph::FiniteGraph;
use crate::presentation::{
    ComponentPattern, FiniteTruncation, GraphPresentation, HostFamily, HostTerm, PatternKind, PresentationError,
};
use crate::report::Report;

/// How `η` picks a vertex of `A = N_G(D)` for a double-prime `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EtaRule {
    /// Copy `k` goes to `A[k mod |A|]` in canonical order.
    #[default]
    RoundRobin,
    /// Copy `k` goes to `A[|A| - 1 - (k mod |A|)]`.
    Reversed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaAssignment {
    pub rule: EtaRule,
}

impl EtaAssignment {
    /// `η(D)` given the sorted adhesion set of `D`. Indexed copies use
    /// ordinal 0; replicated copies use their ordinal.
    pub fn apply(&self, d: &ComponentId, adhesion: &BTreeSet<Vertex>) -> Vertex {
        let a: Vec<&Vertex> = adhesion.iter().collect();
        let k = match d.sel {
            Selector::Indexed(_) => 0,
            Selector::Replicate(k) => k,
        };
        let pos = (k % a.len() as u64) as usize;
        match self.rule {
            EtaRule::RoundRobin => a[pos].clone(),
            EtaRule::Reversed => a[a.len() - 1 - pos].clone(),
        }
    }
}

pub fn choose_eta(_c: &AdhesionClassification) -> EtaAssignment {
    EtaAssignment { rule: EtaRule::RoundRobin }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TorsoError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("pattern `{pattern}` mixes prime and double-prime copies {copies:?}; K has no host-only presentation")]
    NotPresentable { pattern: Name, copies: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Torso {
    pub presentation: GraphPresentation,
    pub classes: AdhesionClassification,
    pub eta: EtaAssignment,
    /// Host family of `K`'s presentation holding the `V[D]` of each pattern.
    family_of: BTreeMap<Name, Name>,
}

pub fn build_torso(p: &GraphPresentation, c: &AdhesionClassification, eta: &EtaAssignment) -> Torso {
    let mut taken: BTreeSet<Name> = p.families.iter().map(|f| f.name.clone()).collect();
    taken.extend(p.patterns.iter().map(|q| q.name.clone()));
    let mut family_of = BTreeMap::new();
    for q in &p.patterns {
        let mut name = format!("V_{}", q.name);
        while taken.contains(&name) {
            name.push('_');
        }
        taken.insert(name.clone());
        family_of.insert(q.name.clone(), name);
    }
    Torso { presentation: p.clone(), classes: c.clone(), eta: eta.clone(), family_of }
}

/// Classifies and builds with the default `η`.
pub fn torso_of(p: &GraphPresentation) -> Torso {
    let c = classify_adhesion(p);
    let eta = choose_eta(&c);
    build_torso(p, &c, &eta)
}

pub fn rho_of(t: &Torso, u: &Vertex) -> Result<Vertex, PresentationError> {
    if !t.presentation.contains(u) {
        return Err(PresentationError::AddressOutOfRange(u.to_string()));
    }
    Ok(t.rho(u))
}

impl Torso {
    /// `ϱ(u)` for a vertex of `G` (unchecked; see [`rho_of`]).
    pub fn rho(&self, u: &Vertex) -> Vertex {
        match u {
            Vertex::Inner { component, .. } => self.rho_component(component),
            other => other.clone(),
        }
    }

    /// The torso vertex a whole component is contracted to.
    pub fn rho_component(&self, d: &ComponentId) -> Vertex {
        match self.classes.side_of(d) {
            Side::Prime => Vertex::Contracted(d.clone()),
            Side::DoublePrime => {
                let a = self.presentation.attach_targets(d).unwrap_or_default();
                self.eta.apply(d, &a)
            }
        }
    }

    pub fn is_prime(&self, d: &ComponentId) -> bool {
        self.classes.side_of(d) == Side::Prime
    }

    /// Finite part of `K`: host vertices of index at most `depth`, `V[D]`
    /// for the prime copies present in `G`'s truncation, and the clique
    /// edges between the present vertices of every double-prime adhesion set.
    pub fn truncate(&self, depth: u64, reps: u64) -> FiniteTruncation {
        let p = &self.presentation;
        let host = p.truncate_host(depth).graph;
        let present = |v: &Vertex| host.contains(v);
        let mut vertices: Vec<Vertex> = host.vertices().to_vec();
        let mut edges: Vec<(Vertex, Vertex)> = host.edges().map(|(a, b)| (a.clone(), b.clone())).collect();
        for q in &p.patterns {
            for copy in copies_in(p, q, depth, reps) {
                let id = q.copy_id(copy);
                if !self.is_prime(&id) {
                    continue;
                }
                let targets: Vec<Vertex> = q.attach.iter().map(|(_, t)| t.at(copy)).collect();
                if !targets.iter().all(present) {
                    continue;
                }
                let vd = Vertex::Contracted(id);
                edges.extend(targets.into_iter().map(|a| (vd.clone(), a)));
                vertices.push(vd);
            }
        }
        for a in self.classes.double_prime_sets() {
            let inside: BTreeSet<Vertex> = a.iter().filter(|v| present(v)).cloned().collect();
            edges.extend(clique(&inside));
        }
        FiniteTruncation { depth, reps, graph: FiniteGraph::new(vertices, edges) }
    }

    /// Whether `v` is a vertex of `K`.
    pub fn contains(&self, v: &Vertex) -> bool {
        match v {
            Vertex::Host { .. } => self.presentation.contains(v),
            Vertex::Contracted(d) => self.presentation.component_exists(d) && self.is_prime(d),
            Vertex::Inner { .. } => false,
        }
    }

    /// Adjacency in `K`, decided from the presentation and classification.
    pub fn adjacent(&self, a: &Vertex, b: &Vertex) -> bool {
        if a == b || !self.contains(a) || !self.contains(b) {
            return false;
        }
        match (a, b) {
            (Vertex::Host { .. }, Vertex::Host { .. }) => {
                self.presentation.adjacent(a, b)
                    || self.classes.double_prime_sets().any(|s| s.contains(a) && s.contains(b))
            }
            (Vertex::Contracted(d), h @ Vertex::Host { .. }) | (h @ Vertex::Host { .. }, Vertex::Contracted(d)) => {
                self.presentation.attach_targets(d).is_ok_and(|t| t.contains(h))
            }
            _ => false,
        }
    }

    /// Image of a truncation of `G` under `ϱ`.
    pub fn contract(&self, g: &FiniteTruncation) -> FiniteGraph<Vertex> {
        g.graph.map(|v| self.rho(v))
    }

    /// Host family of `K`'s presentation standing for a pattern's `V[D]`.
    pub fn family_for(&self, pattern: &str) -> Option<&str> {
        self.family_of.get(pattern).map(String::as_str)
    }

    /// `V[D]` to its host label in [`Torso::to_presentation`].
    pub fn to_host_label(&self, v: &Vertex) -> Vertex {
        match v {
            Vertex::Contracted(d) => match self.family_of.get(&d.pattern) {
                Some(f) => Vertex::host(f.clone(), d.copy()),
                None => v.clone(),
            },
            other => other.clone(),
        }
    }

    /// Inverse of [`Torso::to_host_label`].
    pub fn from_host_label(&self, v: &Vertex) -> Vertex {
        if let Vertex::Host { family, index } = v {
            if let Some((pattern, _)) = self.family_of.iter().find(|(_, f)| *f == family) {
                if let Some(q) = self.presentation.pattern(pattern) {
                    return Vertex::Contracted(q.copy_id(*index));
                }
            }
        }
        v.clone()
    }

    /// `K` as a host-only presentation: each pattern with prime copies
    /// becomes a host family `V_<pattern>`.
    pub fn to_presentation(&self) -> Result<GraphPresentation, TorsoError> {
        let p = &self.presentation;
        let mut out = GraphPresentation {
            families: p.families.clone(),
            host_edges: p.host_edges.clone(),
            patterns: Vec::new(),
        };
        for q in &p.patterns {
            let family = self.family_of[&q.name].clone();
            let count = p.copy_count(q);
            match q.kind {
                PatternKind::Replicated(m) => {
                    let Some(m) = m.finite().filter(|&m| m > 0) else { continue };
                    if !self.is_prime(&q.copy_id(0)) {
                        continue;
                    }
                    out.families.push(HostFamily { name: family.clone(), size: Cardinal::Finite(m) });
                    for k in 0..m {
                        for t in q.attach_terms() {
                            out.host_edges.push((HostTerm::ground(family.clone(), k), t.clone()));
                        }
                    }
                }
                PatternKind::Indexed => {
                    let dp = self.classes.double_prime_copies(&q.name);
                    if count == Cardinal::ZERO || count == Cardinal::Finite(dp.len() as u64) {
                        continue;
                    }
                    if !dp.is_empty() {
                        return Err(TorsoError::NotPresentable { pattern: q.name.clone(), copies: dp });
                    }
                    out.families.push(HostFamily { name: family.clone(), size: count });
                    for t in q.attach_terms() {
                        out.host_edges.push((HostTerm::affine(family.clone(), 0), t.clone()));
                    }
                }
            }
        }
        for a in self.classes.double_prime_sets() {
            for (x, y) in clique(a) {
                out.host_edges.push((ground_term(&x), ground_term(&y)));
            }
        }
        Ok(out)
    }

    /// `|V(H)|`, `|D'|` and `|V(K)| = |V(H)| + |D'|`.
    pub fn conservativity(&self) -> Conservativity {
        let p = &self.presentation;
        let host = p.host_cardinality();
        let mut prime = Cardinal::ZERO;
        for q in &p.patterns {
            let n = match q.kind {
                PatternKind::Replicated(m) if m > Cardinal::ZERO && self.is_prime(&q.copy_id(0)) => m,
                PatternKind::Replicated(_) => Cardinal::ZERO,
                PatternKind::Indexed => {
                    let dp = self.classes.double_prime_copies(&q.name).len() as u64;
                    match p.copy_count(q) {
                        Cardinal::Finite(c) => Cardinal::Finite(c - dp),
                        inf => inf,
                    }
                }
            };
            prime = prime + n;
        }
        let torso = host + prime;
        Conservativity { host, prime, torso, conservative: torso == host }
    }
}

fn copies_in(p: &GraphPresentation, q: &ComponentPattern, depth: u64, reps: u64) -> Vec<u64> {
    let count = p.copy_count(q);
    match q.kind {
        PatternKind::Indexed => (0..=depth).filter(|&i| count.admits(i)).collect(),
        PatternKind::Replicated(m) => (0..m.clamp_to(reps)).collect(),
    }
}

fn clique(a: &BTreeSet<Vertex>) -> Vec<(Vertex, Vertex)> {
    let a: Vec<&Vertex> = a.iter().collect();
    let mut out = Vec::new();
    for (i, x) in a.iter().enumerate() {
        for y in &a[i + 1..] {
            out.push(((*x).clone(), (*y).clone()));
        }
    }
    out
}

fn ground_term(v: &Vertex) -> HostTerm {
    match v {
        Vertex::Host { family, index } => HostTerm::ground(family.clone(), *index),
        _ => unreachable!("adhesion sets contain host vertices only"),
    }
}

pub fn conservativity_check(t: &Torso) -> Conservativity {
    t.conservativity()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conservativity {
    pub host: Cardinal,
    pub prime: Cardinal,
    pub torso: Cardinal,
    pub conservative: bool,
}

impl Conservativity {
    /// A finite host with prime components cannot be conservative, and the
    /// faithfulness argument assumes an infinite host anyway.
    pub fn finite_host_flag(&self) -> bool {
        self.host.is_finite() && self.prime > Cardinal::ZERO
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.push("V(H)", self.host)
            .push("D_prime", self.prime)
            .push("V(K)", self.torso)
            .push("conservative", self.conservative)
            .push("finite_host_flag", self.finite_host_flag());
        r
    }
}

impl fmt::Display for Conservativity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_report())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_presentation;
    use crate::presentation::tests::EXAMPLE4;

    fn v(s: &str) -> Vertex {
        Vertex::parse(s).unwrap()
    }

    fn ex4() -> Torso {
        torso_of(&parse_presentation(EXAMPLE4).unwrap())
    }

    #[test]
    fn eta_round_robin() {
        let t = ex4();
        let got: Vec<String> = (0..4).map(|k| t.rho(&v(&format!("Z#{k}.z"))).to_string()).collect();
        assert_eq!(got, ["X[1]", "X[2]", "X[3]", "X[1]"]);
        let a = BTreeSet::from([v("X[0]")]);
        let e = EtaAssignment { rule: EtaRule::RoundRobin };
        assert!((0..5).all(|k| e.apply(&ComponentId::replicate("Z", k), &a) == v("X[0]")));
        let a = BTreeSet::from([v("X[0]"), v("X[1]")]);
        let got: Vec<Vertex> = (0..4).map(|k| e.apply(&ComponentId::replicate("Z", k), &a)).collect();
        assert_eq!(got, [v("X[0]"), v("X[1]"), v("X[0]"), v("X[1]")]);
    }

    #[test]
    fn rho_cases() {
        let t = ex4();
        assert_eq!(rho_of(&t, &v("X[5]")).unwrap(), v("X[5]"));
        assert_eq!(rho_of(&t, &v("Y@3.y")).unwrap(), v("V[Y@3]"));
        assert_eq!(rho_of(&t, &v("Z#0.z")).unwrap(), v("X[1]"));
        assert!(rho_of(&t, &v("Y@3.w")).is_err());
    }

    #[test]
    fn example4_torso() {
        let t = ex4();
        let k = t.truncate(5, 2);
        assert_eq!(k.graph.vertex_count(), 6 + 5);
        assert!(k.graph.adjacent(&v("X[1]"), &v("X[3]")));
        assert!(k.graph.adjacent(&v("X[1]"), &v("X[2]")));
        assert_eq!(k.graph.neighbors_of(&v("V[Y@3]")), BTreeSet::from([v("X[3]"), v("X[4]")]));
        // 5 path + 10 ladder + x1-x3
        assert_eq!(k.graph.edge_count(), 16);
        let g = t.presentation.truncate(5, 3);
        assert_eq!(t.contract(&g), k.graph);
    }

    #[test]
    fn presentation_of_k() {
        let t = ex4();
        let kp = t.to_presentation().unwrap();
        assert!(kp.patterns.is_empty());
        let text = kp.to_string();
        assert!(text.contains("host family V_Y index nat"), "{text}");
        assert!(text.contains("host edge X[1] -- X[3]"), "{text}");
        let direct = t.truncate(7, 0).graph;
        // host-only truncation also keeps V_Y[7], whose neighbor X[8] is cut off
        let via = kp.truncate(7, 0).graph.map(|x| t.from_host_label(x));
        assert!(via.contains(&v("V[Y@7]")));
        assert_eq!(via.induced(direct.vertices().iter().cloned()), direct);
        assert_eq!(t.to_host_label(&v("V[Y@2]")), v("V_Y[2]"));
    }

    #[test]
    fn no_patterns_gives_h() {
        let p = parse_presentation("host family X index nat\nhost edge X[i] -- X[i+1]\n").unwrap();
        let t = torso_of(&p);
        assert_eq!(t.truncate(6, 3).graph, p.truncate(6, 3).graph);
        assert!(t.conservativity().conservative);
    }

    #[test]
    fn single_finite_replicate() {
        let p = parse_presentation(
            "host family X index nat\nhost edge X[i] -- X[i+1]\ncomponent D replicated 1\n  inner d\n  attach d -- X[0]\n",
        )
        .unwrap();
        let t = torso_of(&p);
        let k = t.truncate(4, 3);
        assert_eq!(k.graph.neighbors_of(&v("V[D#0]")), BTreeSet::from([v("X[0]")]));
        assert_eq!(k.graph, t.contract(&p.truncate(4, 3)));
        assert_eq!(k.graph.vertex_count(), 6);
    }

    #[test]
    fn conservativity() {
        let c = ex4().conservativity();
        assert_eq!((c.host, c.prime, c.torso), (Cardinal::Aleph0, Cardinal::Aleph0, Cardinal::Aleph0));
        assert!(c.conservative && !c.finite_host_flag());
        let p = parse_presentation("host family X size 3\nhost edge X[0] -- X[1]\nhost edge X[1] -- X[2]\ncomponent D replicated 1\n  inner d\n  attach d -- X[0]\n").unwrap();
        let c = torso_of(&p).conservativity();
        assert_eq!((c.host, c.torso), (Cardinal::Finite(3), Cardinal::Finite(4)));
        assert!(!c.conservative && c.finite_host_flag());
    }

    #[test]
    fn mixed_indexed_pattern_is_not_presentable() {
        let text = "host family X index nat\nhost edge X[i] -- X[i+1]\n\
                    component Y indexed\n  inner y\n  attach y -- X[i]\n\
                    component Z replicated aleph1\n  inner z\n  attach z -- X[5]\n";
        let t = torso_of(&parse_presentation(text).unwrap());
        assert_eq!(t.rho(&v("Y@5.y")), v("X[5]"));
        assert_eq!(t.rho(&v("Y@4.y")), v("V[Y@4]"));
        assert!(matches!(t.to_presentation(), Err(TorsoError::NotPresentable { .. })));
        let k = t.truncate(8, 2);
        assert!(!k.graph.contains(&v("V[Y@5]")));
        assert_eq!(t.contract(&t.presentation.truncate(8, 2)), k.graph);
    }

    #[test]
    fn template_adjacency_matches_truncation() {
        let t = ex4();
        let k = t.truncate(7, 3);
        for a in k.graph.vertices() {
            for b in k.graph.vertices() {
                assert_eq!(t.adjacent(a, b), k.graph.adjacent(a, b), "{a} {b}");
            }
        }
        assert!(!t.contains(&v("Z#0.z")));
        assert!(!t.contains(&v("V[Z#0]")));
    }
}
