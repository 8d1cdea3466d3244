use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;

use dtorso::address::Vertex;
use dtorso::generate::{gen_presentation, gen_sources, gen_tendril, trial_rng, GenConfig};
use dtorso::search::{run_trial, SearchConfig, TrialOutcome};
use dtorso::separation::{
    min_separator, pitz_x, s_modification, separates_at_depths, separates_finite, witness_is_valid, Arena, FiniteVerdict,
    Targets,
};
use dtorso::torso::{build_torso, EtaAssignment, EtaRule};
use dtorso::{parse_presentation, torso_of, Grid, GraphPresentation, LemmaOutcome, RaySpec, Torso};

fn presentation(seed: u64) -> Option<GraphPresentation> {
    gen_presentation(&mut trial_rng(seed, 0), &GenConfig::default()).map(|g| g.presentation)
}

struct Case {
    torso: Torso,
    ray: RaySpec,
    u: BTreeSet<Vertex>,
}

fn case(seed: u64) -> Option<Case> {
    let mut rng = trial_rng(seed, 1);
    let g = gen_presentation(&mut rng, &GenConfig::default())?;
    let ray = gen_tendril(&mut rng, &g.presentation, None)?;
    let u = gen_sources(&mut rng, &g.presentation, &ray)?;
    Some(Case { torso: torso_of(&g.presentation), ray, u })
}

fn pick(seed: u64, pool: &[Vertex], n: usize) -> BTreeSet<Vertex> {
    pool.choose_multiple(&mut trial_rng(seed, 2), n).cloned().collect()
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn presentation_round_trips(seed in any::<u64>()) {
        let Some(p) = presentation(seed) else { return Ok(()) };
        let back = parse_presentation(&p.to_string()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn truncations_nest(seed in any::<u64>(), d in 2u64..12, k in 0u64..6, r in 1u64..4) {
        let Some(p) = presentation(seed) else { return Ok(()) };
        let t = torso_of(&p);
        prop_assert!(p.truncate(d, r).graph.is_induced_subgraph_of(&p.truncate(d + k, r + 1).graph));
        prop_assert!(t.truncate(d, r).graph.is_induced_subgraph_of(&t.truncate(d + k, r + 1).graph));
    }

    #[test]
    fn truncation_edges_match_templates(seed in any::<u64>(), d in 1u64..9, r in 1u64..3) {
        let Some(p) = presentation(seed) else { return Ok(()) };
        let t = torso_of(&p);
        for (arena, tr) in [(Arena::G(&t), p.truncate(d, r)), (Arena::K(&t), t.truncate(d, r))] {
            let vs = tr.graph.vertices();
            for a in vs {
                for b in vs.iter().filter(|b| *b > a) {
                    prop_assert_eq!(tr.graph.adjacent(a, b), arena.adjacent(a, b), "{} {} {}", arena.name(), a, b);
                }
            }
        }
    }

    #[test]
    fn contraction_lands_in_k(seed in any::<u64>()) {
        let Some(p) = presentation(seed) else { return Ok(()) };
        let t = torso_of(&p);
        let k = t.truncate(8, 2).graph;
        let c = t.contract(&p.truncate(8, 2));
        for (a, b) in c.edges() {
            prop_assert!(k.adjacent(a, b), "{} -- {}", a, b);
        }
    }

    #[test]
    fn eta_choice_does_not_change_k(seed in any::<u64>()) {
        let Some(p) = presentation(seed) else { return Ok(()) };
        let t = torso_of(&p);
        let rev = build_torso(&p, &t.classes, &EtaAssignment { rule: EtaRule::Reversed });
        prop_assert_eq!(rev.truncate(10, 3).graph.edge_set(), t.truncate(10, 3).graph.edge_set());
    }

    #[test]
    fn ray_round_trips(seed in any::<u64>()) {
        let Some(c) = case(seed) else { return Ok(()) };
        prop_assert_eq!(RaySpec::parse(&c.ray.to_string()).unwrap(), c.ray);
    }

    #[test]
    fn x_inside_f_s(seed in any::<u64>(), n in 0usize..6) {
        let Some(c) = case(seed) else { return Ok(()) };
        let pool = c.torso.truncate(15, 3).graph.vertices().to_vec();
        let f = pick(seed, &pool, n);
        let fs = s_modification(&c.torso, &c.ray, &f).unwrap();
        prop_assert!(pitz_x(&c.torso, &f).is_subset(&fs));
    }

    #[test]
    fn supersets_of_separators_separate(seed in any::<u64>(), n in 1usize..4) {
        let Some(c) = case(seed) else { return Ok(()) };
        let grid = Grid { depths: vec![12], reps: 3 };
        let targets = Targets::Ray { seq: &c.ray.seq, from: 0 };
        let g = c.torso.presentation.truncate(12, 3).graph;
        let ws: BTreeSet<Vertex> = targets.at(12, 3).into_iter().filter(|v| g.contains(v)).collect();
        let cut = min_separator(&g, &c.u, &ws);
        let base = separates_at_depths(Arena::G(&c.torso), &cut, &c.u, targets, &grid).unwrap();
        prop_assert!(base.is_separated());
        let bigger: BTreeSet<Vertex> = cut.union(&pick(seed, g.vertices(), n)).cloned().collect();
        prop_assert!(separates_at_depths(Arena::G(&c.torso), &bigger, &c.u, targets, &grid).unwrap().is_separated());
    }

    #[test]
    fn min_cut_is_a_minimal_separator(seed in any::<u64>()) {
        let Some(c) = case(seed) else { return Ok(()) };
        let g = c.torso.truncate(10, 2).graph;
        let us: BTreeSet<Vertex> = c.u.iter().filter(|v| g.contains(v)).cloned().collect();
        let ws: BTreeSet<Vertex> =
            Targets::Ray { seq: &c.ray.seq, from: 0 }.at(10, 2).into_iter().filter(|v| g.contains(v) && !us.contains(v)).collect();
        if us.is_empty() || ws.is_empty() { return Ok(()) }
        let cut = min_separator(&g, &us, &ws);
        prop_assert_eq!(separates_finite(&g, &cut, &us, &ws).unwrap(), FiniteVerdict::Separated);
        for v in &cut {
            let mut smaller = cut.clone();
            smaller.remove(v);
            let is_sep = separates_finite(&g, &smaller, &us, &ws).unwrap() == FiniteVerdict::Separated;
            prop_assert!(!is_sep, "{} is redundant", v);
        }
    }

    #[test]
    fn witnesses_revalidate(seed in any::<u64>(), n in 0usize..5) {
        let Some(c) = case(seed) else { return Ok(()) };
        let grid = Grid { depths: vec![8, 16], reps: 3 };
        let targets = Targets::Ray { seq: &c.ray.seq, from: 0 };
        for arena in [Arena::G(&c.torso), Arena::K(&c.torso)] {
            let pool = arena.truncate(16, 3).graph.vertices().to_vec();
            let f = pick(seed, &pool, n);
            let cert = separates_at_depths(arena, &f, &c.u, targets, &grid).unwrap();
            if let Some(w) = cert.witness() {
                let ws = targets.at(grid.max_depth(), grid.reps);
                prop_assert!(witness_is_valid(arena, w, &f, &c.u, &ws), "{} {}", arena.name(), cert);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn f_s_never_fails_the_lemma(seed in any::<u64>(), trial in 0u64..1000) {
        let (outcome, _) = run_trial(&SearchConfig::new(seed, 0), trial);
        if let TrialOutcome::Checked { fs, .. } = outcome {
            prop_assert_ne!(fs, LemmaOutcome::Violation);
        }
    }
}
