//! Seeded random presentations, tendrils and source sets.
//!
//! Every trial draws from its own ChaCha8 stream: `seed_from_u64(seed)` then
//! `set_stream(trial)`, so trial `k` is reproducible on its own and the
//! order in which trials run does not matter.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::address::{ComponentId, Index, Selector, SymVertex, Vertex};
use crate::cardinal::Cardinal;
use crate::graph::FiniteGraph;
use crate::presentation::{ComponentPattern, GraphPresentation, HostFamily, HostTerm, PatternKind};
use crate::ray::{ground_bound, validate_ray, Lasso, RaySpec};

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    /// Finite host families and finite multiplicities only, so a deep enough
    /// truncation is the whole graph.
    pub finite_only: bool,
    pub max_patterns: usize,
    pub multiplicities: Vec<Cardinal>,
    /// Chance of planting a double-prime fan with a bypass into its adhesion.
    pub motif_prob: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            finite_only: false,
            max_patterns: 3,
            multiplicities: vec![
                Cardinal::Finite(1),
                Cardinal::Finite(2),
                Cardinal::Finite(3),
                Cardinal::Aleph0,
                Cardinal::Aleph1,
            ],
            motif_prob: 0.3,
        }
    }
}

impl GenConfig {
    pub fn finite() -> Self {
        GenConfig {
            finite_only: true,
            multiplicities: vec![Cardinal::Finite(1), Cardinal::Finite(2), Cardinal::Finite(3)],
            motif_prob: 0.0,
            ..GenConfig::default()
        }
    }
}

/// A generated presentation. `motif` records the planted fan as
/// `(pattern, anchor)`: it attaches to `X[a]`, `X[a+1]`, `X[a+2]` and `Q[0]`
/// is joined to `X[a+2]`.
#[derive(Debug, Clone)]
pub struct Generated {
    pub presentation: GraphPresentation,
    pub motif: Option<(String, u64)>,
}

fn term(family: &str, index: Index) -> HostTerm {
    HostTerm { family: family.to_owned(), index }
}

fn random_pattern(rng: &mut ChaCha8Rng, cfg: &GenConfig, name: String, spines: &[&str], ground_max: u64) -> ComponentPattern {
    let kind = if rng.gen_bool(0.5) {
        PatternKind::Indexed
    } else {
        PatternKind::Replicated(*cfg.multiplicities.choose(rng).expect("nonempty menu"))
    };
    let inner: Vec<String> = if rng.gen_bool(0.6) { vec!["a".into()] } else { vec!["a".into(), "b".into()] };
    let inner_edges = if inner.len() == 2 { vec![("a".to_owned(), "b".to_owned())] } else { Vec::new() };
    let mut attach = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let family = *spines.choose(rng).expect("a spine exists");
        let index = match kind {
            PatternKind::Indexed => Index::Affine(rng.gen_range(0..=2)),
            PatternKind::Replicated(_) => Index::Ground(rng.gen_range(0..=ground_max)),
        };
        let local = inner.choose(rng).expect("inner nonempty").clone();
        let t = term(family, index);
        if !attach.iter().any(|(l, u)| *l == local && *u == t) {
            attach.push((local, t));
        }
    }
    ComponentPattern { name, kind, inner, inner_edges, attach }
}

/// Draws presentations until one validates; returns `None` after 20 misses.
pub fn gen_presentation(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Option<Generated> {
    (0..20).find_map(|_| {
        let g = draw_presentation(rng, cfg);
        let depth = if cfg.finite_only { 12 } else { 20 };
        g.presentation.validate(depth).is_ok().then_some(g)
    })
}

fn draw_presentation(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Generated {
    let spine_size = if cfg.finite_only { Cardinal::Finite(rng.gen_range(4..=9)) } else { Cardinal::Aleph0 };
    let ground_max = spine_size.finite().map_or(6, |n| n - 1).min(6);
    let mut p = GraphPresentation::default();
    p.families.push(HostFamily { name: "X".into(), size: spine_size });
    p.host_edges.push((term("X", Index::Affine(0)), term("X", Index::Affine(1))));
    let mut spines = vec!["X"];
    if rng.gen_bool(0.35) {
        p.families.push(HostFamily { name: "W".into(), size: spine_size });
        p.host_edges.push((term("W", Index::Affine(0)), term("W", Index::Affine(1))));
        p.host_edges.push((term("X", Index::Affine(0)), term("W", Index::Affine(0))));
        spines.push("W");
    }
    for _ in 0..rng.gen_range(0..=2) {
        let a = rng.gen_range(0..ground_max.saturating_sub(1).max(1));
        let b = rng.gen_range(a + 2..=ground_max.max(a + 2));
        if spine_size.admits(b) {
            p.host_edges.push((term("X", Index::Ground(a)), term("X", Index::Ground(b))));
        }
    }
    let mut motif = None;
    if !cfg.finite_only && rng.gen_bool(cfg.motif_prob) {
        let a = rng.gen_range(1..=4);
        let m = if rng.gen_bool(0.5) { Cardinal::Aleph0 } else { Cardinal::Aleph1 };
        p.families.push(HostFamily { name: "Q".into(), size: Cardinal::Finite(1) });
        p.host_edges.push((term("Q", Index::Ground(0)), term("X", Index::Ground(a + 2))));
        p.patterns.push(ComponentPattern {
            name: "Z".into(),
            kind: PatternKind::Replicated(m),
            inner: vec!["z".into()],
            inner_edges: Vec::new(),
            attach: (a..a + 3).map(|j| ("z".to_owned(), term("X", Index::Ground(j)))).collect(),
        });
        motif = Some(("Z".to_owned(), a));
    } else if rng.gen_bool(0.3) {
        let size = rng.gen_range(1..=2);
        p.families.push(HostFamily { name: "Q".into(), size: Cardinal::Finite(size) });
        for j in 0..size {
            p.host_edges.push((term("Q", Index::Ground(j)), term("X", Index::Ground(rng.gen_range(0..=ground_max)))));
        }
    }
    let n = rng.gen_range(1..=cfg.max_patterns.max(1));
    for k in 0..n {
        p.patterns.push(random_pattern(rng, cfg, format!("P{k}"), &spines, ground_max));
    }
    if !cfg.finite_only && rng.gen_bool(0.5) && !p.patterns.iter().any(|q| matches!(q.kind, PatternKind::Replicated(m) if m.is_infinite())) {
        let m = if rng.gen_bool(0.5) { Cardinal::Aleph0 } else { Cardinal::Aleph1 };
        let mut q = random_pattern(rng, cfg, format!("P{n}"), &spines, ground_max);
        q.kind = PatternKind::Replicated(m);
        for (_, t) in &mut q.attach {
            if let Index::Affine(c) = t.index {
                t.index = Index::Ground(c + rng.gen_range(0..=3));
            }
        }
        p.patterns.push(q);
    }
    Generated { presentation: p, motif }
}

/// Largest host index a vertex depends on: its own index, or the largest
/// attachment index of its component.
fn reach_index(p: &GraphPresentation, v: &Vertex) -> u64 {
    match v {
        Vertex::Host { family, index } => {
            if p.family_size(family).is_some_and(Cardinal::is_infinite) {
                *index
            } else {
                0
            }
        }
        Vertex::Inner { component, .. } | Vertex::Contracted(component) => p
            .attach_targets(component)
            .unwrap_or_default()
            .iter()
            .map(|h| reach_index(p, h))
            .max()
            .unwrap_or(0),
    }
}

/// Randomized depth-first search for a path `from -> to` of at most
/// `max_len` vertices through allowed vertices.
fn random_path(
    rng: &mut ChaCha8Rng,
    g: &FiniteGraph<Vertex>,
    from: &Vertex,
    to: &Vertex,
    allowed: impl Fn(&Vertex) -> bool,
    max_len: usize,
) -> Option<Vec<Vertex>> {
    let (s, t) = (g.id(from)?, g.id(to)?);
    let mut on_path = vec![false; g.vertex_count()];
    let mut path = vec![s];
    on_path[s] = true;
    let mut options: Vec<Vec<usize>> = vec![shuffled(rng, g.neighbors(s))];
    let mut budget = 20_000;
    while let Some(top) = options.last_mut() {
        budget -= 1;
        if budget == 0 {
            return None;
        }
        let Some(next) = top.pop() else {
            options.pop();
            if let Some(x) = path.pop() {
                on_path[x] = false;
            }
            continue;
        };
        if next == t {
            path.push(t);
            return Some(path.into_iter().map(|x| g.vertex(x).clone()).collect());
        }
        if on_path[next] || path.len() + 1 >= max_len || !allowed(g.vertex(next)) {
            continue;
        }
        on_path[next] = true;
        path.push(next);
        options.push(shuffled(rng, g.neighbors(next)));
    }
    None
}

fn shuffled(rng: &mut ChaCha8Rng, xs: &[usize]) -> Vec<usize> {
    let mut v = xs.to_vec();
    v.shuffle(rng);
    v
}

/// Rewrites a vertex at index `>= n0` as a term in the loop variable.
fn shift(p: &GraphPresentation, v: &Vertex, n0: u64) -> Option<SymVertex> {
    match v {
        Vertex::Host { family, index } if *index >= n0 && p.family_size(family)?.is_infinite() => {
            Some(Vertex::host(family.clone(), Index::Affine(index - n0)))
        }
        Vertex::Inner { component: ComponentId { pattern, sel: Selector::Indexed(j) }, local } if *j >= n0 => {
            Some(Vertex::Inner {
                component: ComponentId { pattern: pattern.clone(), sel: Selector::Indexed(Index::Affine(j - n0)) },
                local: local.clone(),
            })
        }
        _ => None,
    }
}

/// Draws a tendril: a periodic part found between `X[n0]` and `X[n0+k]` and
/// shifted, behind a prefix that lives below `n0`. With `through` set, the
/// prefix starts by crossing that replicated component between two of its
/// attachment vertices.
pub fn gen_tendril(rng: &mut ChaCha8Rng, p: &GraphPresentation, through: Option<&ComponentId>) -> Option<RaySpec> {
    for _ in 0..12 {
        if let Some(r) = draw_tendril(rng, p, through) {
            if validate_ray(p, &r).is_ok() {
                return Some(r);
            }
        }
    }
    None
}

fn draw_tendril(rng: &mut ChaCha8Rng, p: &GraphPresentation, through: Option<&ComponentId>) -> Option<RaySpec> {
    if !p.family_size("X").is_some_and(Cardinal::is_infinite) {
        return None;
    }
    let n0 = ground_bound(p) + rng.gen_range(0..3);
    let k = rng.gen_range(1..=2);
    let window = p.adhesion_window() + 2;
    let hi = n0 + k + window;
    let g = p.truncate(hi + window, 2).graph;

    let period_path = if rng.gen_bool(0.4) {
        (n0..=n0 + k).map(|j| Vertex::host("X", j)).collect()
    } else {
        random_path(
            rng,
            &g,
            &Vertex::host("X", n0),
            &Vertex::host("X", n0 + k),
            |v| shift(p, v, n0).is_some() && reach_index(p, v) <= hi && floor_index(p, v) >= n0,
            2 + 4 * k as usize,
        )?
    };
    let period: Vec<SymVertex> = period_path[..period_path.len() - 1].iter().map(|v| shift(p, v, n0)).collect::<Option<_>>()?;

    let below = |v: &Vertex| reach_index(p, v) < n0;
    let target = Vertex::host("X", n0);
    let mut prefix: Vec<Vertex> = Vec::new();
    let start = match through {
        Some(d) => {
            let attach: Vec<Vertex> = p.attach_targets(d).ok()?.into_iter().collect();
            let a = attach.choose(rng)?.clone();
            let b = attach.iter().filter(|b| **b != a).collect::<Vec<_>>().choose(rng).map(|b| (*b).clone())?;
            let inside = |v: &Vertex| matches!(v, Vertex::Inner { component, .. } if component == d);
            let cross = random_path(rng, &g, &a, &b, inside, 8).filter(|c| c.len() > 2)?;
            prefix.extend(cross[..cross.len() - 1].iter().cloned());
            b
        }
        None => {
            let starts: Vec<&Vertex> = g.vertices().iter().filter(|v| below(v)).collect();
            (*starts.choose(rng)?).clone()
        }
    };
    let used: BTreeSet<Vertex> = prefix.iter().cloned().collect();
    let tail = random_path(rng, &g, &start, &target, |v| below(v) && !used.contains(v), 16)?;
    prefix.extend(tail[..tail.len() - 1].iter().cloned());
    Some(RaySpec { name: "S".into(), seq: Lasso { prefix, period, start: n0, step: k } })
}

/// One or two host vertices below the ray's start, off its prefix.
pub fn gen_sources(rng: &mut ChaCha8Rng, p: &GraphPresentation, ray: &RaySpec) -> Option<BTreeSet<Vertex>> {
    let on_ray: BTreeSet<&Vertex> = ray.seq.prefix.iter().collect();
    let candidates: Vec<Vertex> = p
        .truncate_host(ray.seq.start)
        .graph
        .vertices()
        .iter()
        .filter(|v| reach_index(p, v) < ray.seq.start && !on_ray.contains(v))
        .cloned()
        .collect();
    let n = if rng.gen_bool(0.5) { 1 } else { 2 };
    let u: BTreeSet<Vertex> = candidates.choose_multiple(rng, n).cloned().collect();
    (!u.is_empty()).then_some(u)
}

/// Smallest host index a vertex is or is attached to.
fn floor_index(p: &GraphPresentation, v: &Vertex) -> u64 {
    match v {
        Vertex::Host { .. } => reach_index(p, v),
        Vertex::Inner { component, .. } | Vertex::Contracted(component) => p
            .attach_targets(component)
            .unwrap_or_default()
            .iter()
            .map(|h| reach_index(p, h))
            .min()
            .unwrap_or(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::is_tendril;

    #[test]
    fn streams_are_reproducible() {
        let cfg = GenConfig::default();
        for trial in 0..10 {
            let a = gen_presentation(&mut trial_rng(5, trial), &cfg).unwrap();
            let b = gen_presentation(&mut trial_rng(5, trial), &cfg).unwrap();
            assert_eq!(a.presentation, b.presentation);
        }
    }

    #[test]
    fn tendrils_validate() {
        let cfg = GenConfig::default();
        let mut found = 0;
        for trial in 0..40 {
            let mut rng = trial_rng(11, trial);
            let g = gen_presentation(&mut rng, &cfg).unwrap();
            if let Some(r) = gen_tendril(&mut rng, &g.presentation, None) {
                assert!(validate_ray(&g.presentation, &r).is_ok(), "{r}");
                assert!(is_tendril(&r));
                if let Some(u) = gen_sources(&mut rng, &g.presentation, &r) {
                    assert!(u.iter().all(Vertex::is_host));
                    found += 1;
                }
            }
        }
        assert!(found >= 30, "{found}");
    }

    #[test]
    fn motif_ray_crosses_the_fan() {
        let cfg = GenConfig { motif_prob: 1.0, ..GenConfig::default() };
        let mut rng = trial_rng(3, 0);
        let g = gen_presentation(&mut rng, &cfg).unwrap();
        let (name, _) = g.motif.clone().unwrap();
        let d = ComponentId::replicate(name, 0);
        let r = gen_tendril(&mut rng, &g.presentation, Some(&d)).unwrap();
        assert!(matches!(&r.seq.prefix[1], Vertex::Inner { component, .. } if *component == d));
    }

    #[test]
    fn finite_mode_is_finite() {
        let cfg = GenConfig::finite();
        for trial in 0..20 {
            let g = gen_presentation(&mut trial_rng(2, trial), &cfg).unwrap();
            assert!(g.presentation.host_cardinality().is_finite());
            assert!(g.presentation.patterns.iter().all(|q| g.presentation.copy_count(q).is_finite()));
        }
    }
}
