//! Adhesion sets of the components of `G - H` and their classification.
//!
//! Components are grouped by adhesion set `A = N_G(D)`. A group with finitely
//! many components is *prime* (its components are contracted to new torso
//! vertices); a group with infinitely many is *double prime* (its components
//! are contracted onto vertices of `A`).
//!
//! Indexed copies are handled symbolically. Write the adhesion set of copy `i`
//! of an indexed pattern as `ground ∪ {F[i+c]}` and let the *anchor* be `i`
//! plus the smallest offset. Past the adhesion window (ground bound plus the
//! largest offset) the affine targets exceed every ground target, so two
//! copies share an adhesion set exactly when their patterns have the same
//! normalized shape and the copies share an anchor. Anchors inside the window
//! are enumerated concretely.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::address::{fmt_set, ComponentId, Name, Selector, Vertex};
use crate::cardinal::Cardinal;
use crate::presentation::{FiniteTruncation, GraphPresentation, PatternKind, PresentationError};
use crate::report::Report;

pub type AdhesionSet = BTreeSet<Vertex>;

/// The copies a pattern contributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectorDomain {
    /// Copies `0..count` (`count` is `Aleph0` for unbounded host families).
    Indexed(Cardinal),
    Replicated(Cardinal),
}

/// Every component of `G - H` is a copy of exactly one pattern.
pub fn enumerate_component_classes(p: &GraphPresentation) -> Vec<(Name, SelectorDomain)> {
    p.patterns
        .iter()
        .map(|pat| {
            let dom = match pat.kind {
                PatternKind::Indexed => SelectorDomain::Indexed(p.copy_count(pat)),
                PatternKind::Replicated(m) => SelectorDomain::Replicated(m),
            };
            (pat.name.clone(), dom)
        })
        .collect()
}

pub fn adhesion_set_of(p: &GraphPresentation, d: &ComponentId) -> Result<AdhesionSet, PresentationError> {
    p.attach_targets(d)
}

/// Connected components of `t - host`, each with its neighborhood in `host`.
/// Plain graph search; uses nothing from the presentation.
pub fn brute_force_components(t: &FiniteTruncation, host: &BTreeSet<Vertex>) -> Vec<(BTreeSet<Vertex>, AdhesionSet)> {
    let g = &t.graph;
    g.components_avoiding(host)
        .into_iter()
        .map(|comp| {
            let verts: BTreeSet<Vertex> = comp.iter().map(|&x| g.vertex(x).clone()).collect();
            let adhesion: AdhesionSet = comp
                .iter()
                .flat_map(|&x| g.neighbors(x).iter().map(|&y| g.vertex(y)))
                .filter(|v| host.contains(*v))
                .cloned()
                .collect();
            (verts, adhesion)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Prime,
    DoublePrime,
}

impl Side {
    fn of_count(c: Cardinal) -> Side {
        if c.is_finite() {
            Side::Prime
        } else {
            Side::DoublePrime
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Prime => "Prime",
            Side::DoublePrime => "DoublePrime",
        })
    }
}

/// Ground targets plus affine targets normalized so the smallest offset is 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Shape {
    pub ground: BTreeSet<Vertex>,
    pub affine: BTreeSet<(Name, u64)>,
}

impl Shape {
    pub fn at_anchor(&self, anchor: u64) -> AdhesionSet {
        let mut set = self.ground.clone();
        set.extend(self.affine.iter().map(|(f, c)| Vertex::host(f.clone(), anchor + c)));
        set
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Descriptor {
    Ground(AdhesionSet),
    /// One adhesion set per anchor `i`.
    Schema(Shape),
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Ground(set) => f.write_str(&fmt_set(set)),
            Descriptor::Schema(shape) => {
                let mut parts: Vec<String> = shape.ground.iter().map(ToString::to_string).collect();
                parts.extend(shape.affine.iter().map(|(fam, c)| match c {
                    0 => format!("{fam}[i]"),
                    c => format!("{fam}[i+{c}]"),
                }));
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Contribution {
    Replicated { pattern: Name, multiplicity: Cardinal },
    /// Concrete indexed copies (inside the adhesion window).
    IndexedCopies { pattern: Name, copies: Vec<u64> },
    /// Copy `anchor - min_offset` of the pattern, for every anchor of the class.
    IndexedFamily { pattern: Name, min_offset: u64, copies: Cardinal },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdhesionClass {
    pub descriptor: Descriptor,
    /// Components per adhesion set (the maximum over anchors for schemas).
    pub count: Cardinal,
    pub contributors: Vec<Contribution>,
    pub side: Side,
    /// Anchors whose adhesion set is owned by a ground class instead.
    pub excluded_anchors: BTreeSet<u64>,
}

impl AdhesionClass {
    /// Number of components sharing the adhesion set at `anchor` (schemas).
    fn count_at_anchor(&self, anchor: u64) -> Cardinal {
        let n = self
            .contributors
            .iter()
            .filter(|c| match c {
                Contribution::IndexedFamily { min_offset, copies, .. } => {
                    anchor >= *min_offset && copies.admits(anchor - min_offset)
                }
                _ => false,
            })
            .count();
        Cardinal::Finite(n as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdhesionClassification {
    pub classes: Vec<AdhesionClass>,
    pub window: u64,
    ground_lookup: BTreeMap<AdhesionSet, usize>,
    schema_of: BTreeMap<Name, (usize, u64)>,
    window_copies: BTreeMap<(Name, u64), usize>,
    replicated_of: BTreeMap<Name, usize>,
}

impl AdhesionClassification {
    pub fn class_index_of(&self, id: &ComponentId) -> Option<usize> {
        match id.sel {
            Selector::Replicate(_) => self.replicated_of.get(&id.pattern).copied(),
            Selector::Indexed(i) => {
                if let Some(&c) = self.window_copies.get(&(id.pattern.clone(), i)) {
                    return Some(c);
                }
                let &(class, m) = self.schema_of.get(&id.pattern)?;
                (i + m >= self.window).then_some(class)
            }
        }
    }

    pub fn class_of(&self, id: &ComponentId) -> Option<&AdhesionClass> {
        self.class_index_of(id).map(|c| &self.classes[c])
    }

    /// Whether `D` lies in the prime or double-prime family. Components that
    /// do not exist default to prime.
    pub fn side_of(&self, id: &ComponentId) -> Side {
        self.class_of(id).map_or(Side::Prime, |c| c.side)
    }

    /// `|D_A|` for the adhesion set `A` of `D`.
    pub fn count_of(&self, id: &ComponentId) -> Option<Cardinal> {
        let class = self.class_of(id)?;
        match (&class.descriptor, id.sel) {
            (Descriptor::Schema(_), Selector::Indexed(i)) => {
                let m = self.schema_of.get(&id.pattern)?.1;
                Some(class.count_at_anchor(i + m))
            }
            _ => Some(class.count),
        }
    }

    pub fn prime_classes(&self) -> impl Iterator<Item = &AdhesionClass> {
        self.classes.iter().filter(|c| c.side == Side::Prime)
    }

    pub fn double_prime_classes(&self) -> impl Iterator<Item = &AdhesionClass> {
        self.classes.iter().filter(|c| c.side == Side::DoublePrime)
    }

    /// Ground adhesion sets whose components are double prime.
    pub fn double_prime_sets(&self) -> impl Iterator<Item = &AdhesionSet> {
        self.double_prime_classes().filter_map(|c| match &c.descriptor {
            Descriptor::Ground(set) => Some(set),
            Descriptor::Schema(_) => None,
        })
    }

    /// Copies of an indexed pattern that fall in double-prime classes.
    pub fn double_prime_copies(&self, pattern: &str) -> Vec<u64> {
        self.window_copies
            .iter()
            .filter(|((p, _), &c)| p == pattern && self.classes[c].side == Side::DoublePrime)
            .map(|((_, i), _)| *i)
            .collect()
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.push("classes", self.classes.len());
        for (k, c) in self.classes.iter().enumerate() {
            r.push(format!("class.{k}.descriptor"), &c.descriptor)
                .push(format!("class.{k}.count"), c.count)
                .push(format!("class.{k}.side"), c.side);
            let contributors: Vec<String> = c
                .contributors
                .iter()
                .map(|x| match x {
                    Contribution::Replicated { pattern, multiplicity } => format!("{pattern}#*x{multiplicity}"),
                    Contribution::IndexedCopies { pattern, copies } => {
                        let cs: Vec<String> = copies.iter().map(ToString::to_string).collect();
                        format!("{pattern}@{}", cs.join("|"))
                    }
                    Contribution::IndexedFamily { pattern, min_offset, .. } => format!("{pattern}@(i-{min_offset})"),
                })
                .collect();
            r.push(format!("class.{k}.contributors"), contributors.join(","));
            if !c.excluded_anchors.is_empty() {
                let ex: Vec<String> = c.excluded_anchors.iter().map(ToString::to_string).collect();
                r.push(format!("class.{k}.excluded_anchors"), ex.join(","));
            }
        }
        r
    }
}

impl fmt::Display for AdhesionClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.classes {
            writeln!(f, "{} {} {}", c.descriptor, c.count, c.side)?;
        }
        Ok(())
    }
}

/// Groups components by adhesion set and splits the groups by count.
pub fn classify_adhesion(p: &GraphPresentation) -> AdhesionClassification {
    let window = p.adhesion_window();

    // Shape groups of indexed patterns.
    let mut groups: BTreeMap<Shape, Vec<(Name, u64, Cardinal)>> = BTreeMap::new();
    for pat in p.patterns.iter().filter(|x| x.is_indexed()) {
        let m = pat.min_offset().unwrap_or(0);
        let mut shape = Shape { ground: BTreeSet::new(), affine: BTreeSet::new() };
        for (_, t) in &pat.attach {
            match t.offset() {
                Some(c) => shape.affine.insert((t.family.clone(), c - m)),
                None => shape.ground.insert(t.at(0)),
            };
        }
        groups.entry(shape).or_default().push((pat.name.clone(), m, p.copy_count(pat)));
    }

    // Concrete adhesion sets inside the window.
    #[derive(Default)]
    struct Bucket {
        replicated: Vec<(Name, Cardinal)>,
        indexed: BTreeMap<Name, Vec<u64>>,
    }
    let mut buckets: BTreeMap<AdhesionSet, Bucket> = BTreeMap::new();
    for pat in &p.patterns {
        match pat.kind {
            PatternKind::Replicated(m) => {
                let set: AdhesionSet = pat.attach.iter().map(|(_, t)| t.at(0)).collect();
                buckets.entry(set).or_default().replicated.push((pat.name.clone(), m));
            }
            PatternKind::Indexed => {
                let m = pat.min_offset().unwrap_or(0);
                let count = p.copy_count(pat);
                for i in (0..window.saturating_sub(m)).filter(|&i| count.admits(i)) {
                    let set: AdhesionSet = pat.attach.iter().map(|(_, t)| t.at(i)).collect();
                    buckets.entry(set).or_default().indexed.entry(pat.name.clone()).or_default().push(i);
                }
            }
        }
    }

    let group_of: BTreeMap<&Name, (&Shape, u64)> = groups
        .iter()
        .flat_map(|(shape, members)| members.iter().map(move |(n, m, _)| (n, (shape, *m))))
        .collect();

    // A bucket is absorbed into a schema when it holds only indexed copies of
    // one shape group, all at the same anchor.
    let absorbed_anchor = |b: &Bucket| -> Option<(&Shape, u64)> {
        if !b.replicated.is_empty() {
            return None;
        }
        let mut found: Option<(&Shape, u64)> = None;
        for (name, copies) in &b.indexed {
            let (shape, m) = group_of[name];
            for &i in copies {
                let key = (shape, i + m);
                match found {
                    None => found = Some(key),
                    Some(prev) if prev == key => {}
                    Some(_) => return None,
                }
            }
        }
        found
    };

    let mut classes = Vec::new();
    let mut schema_of = BTreeMap::new();
    let mut window_copies = BTreeMap::new();
    let mut schema_index: BTreeMap<&Shape, usize> = BTreeMap::new();
    let mut absorbed: BTreeMap<&Shape, Vec<&Bucket>> = BTreeMap::new();
    let mut excluded: BTreeMap<&Shape, BTreeSet<u64>> = BTreeMap::new();
    for b in buckets.values() {
        if let Some((shape, _)) = absorbed_anchor(b) {
            absorbed.entry(shape).or_default().push(b);
        } else {
            for (name, copies) in &b.indexed {
                let (shape, m) = group_of[name];
                excluded.entry(shape).or_default().extend(copies.iter().map(|i| i + m));
            }
        }
    }
    for (shape, members) in &groups {
        let generic = members.iter().any(|(_, m, copies)| copies.admits(window.saturating_sub(*m)));
        if !generic && !absorbed.contains_key(shape) {
            continue;
        }
        let contributors: Vec<Contribution> = members
            .iter()
            .map(|(n, m, copies)| Contribution::IndexedFamily { pattern: n.clone(), min_offset: *m, copies: *copies })
            .collect();
        let mut class = AdhesionClass {
            descriptor: Descriptor::Schema(shape.clone()),
            count: Cardinal::ZERO,
            contributors,
            side: Side::Prime,
            excluded_anchors: excluded.get(shape).cloned().unwrap_or_default(),
        };
        let max_m = members.iter().map(|(_, m, _)| *m).max().unwrap_or(0);
        let horizon = members
            .iter()
            .map(|(_, m, c)| m + c.finite().unwrap_or(window + 1))
            .max()
            .unwrap_or(0)
            .max(window + max_m + 1);
        class.count = (0..=horizon)
            .filter(|a| !class.excluded_anchors.contains(a))
            .map(|a| class.count_at_anchor(a))
            .max()
            .unwrap_or(Cardinal::ZERO);
        let idx = classes.len();
        for (n, m, _) in members {
            schema_of.insert(n.clone(), (idx, *m));
        }
        schema_index.insert(shape, idx);
        classes.push(class);
    }

    let mut ground_lookup = BTreeMap::new();
    let mut replicated_of = BTreeMap::new();
    for (set, b) in &buckets {
        let idx = match absorbed_anchor(b) {
            Some((shape, _)) => schema_index[shape],
            None => {
                let mut contributors = Vec::new();
                let mut count = Cardinal::ZERO;
                for (name, m) in &b.replicated {
                    contributors.push(Contribution::Replicated { pattern: name.clone(), multiplicity: *m });
                    count = count + *m;
                }
                for (name, copies) in &b.indexed {
                    contributors.push(Contribution::IndexedCopies { pattern: name.clone(), copies: copies.clone() });
                    count = count + Cardinal::Finite(copies.len() as u64);
                }
                classes.push(AdhesionClass {
                    descriptor: Descriptor::Ground(set.clone()),
                    count,
                    contributors,
                    side: Side::of_count(count),
                    excluded_anchors: BTreeSet::new(),
                });
                ground_lookup.insert(set.clone(), classes.len() - 1);
                classes.len() - 1
            }
        };
        for (name, _) in &b.replicated {
            replicated_of.insert(name.clone(), idx);
        }
        for (name, copies) in &b.indexed {
            for &i in copies {
                window_copies.insert((name.clone(), i), idx);
            }
        }
    }

    AdhesionClassification { classes, window, ground_lookup, schema_of, window_copies, replicated_of }
}

impl AdhesionClassification {
    /// The class owning a concrete adhesion set, if any component has it.
    pub fn class_of_set(&self, set: &AdhesionSet) -> Option<&AdhesionClass> {
        if let Some(&c) = self.ground_lookup.get(set) {
            return Some(&self.classes[c]);
        }
        self.classes.iter().find(|c| match &c.descriptor {
            Descriptor::Schema(shape) => set
                .iter()
                .filter_map(|v| match v {
                    Vertex::Host { family, index } => shape
                        .affine
                        .iter()
                        .find(|(f, _)| f == family)
                        .and_then(|(_, off)| index.checked_sub(*off)),
                    _ => None,
                })
                .any(|a| shape.at_anchor(a) == *set),
            Descriptor::Ground(_) => false,
        })
    }
}
