//! Acceptance criteria. Runs as a plain binary so that every criterion prints
//! one PASS/FAIL line; exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use dtorso::address::{ComponentId, Vertex};
use dtorso::adhesion::{adhesion_set_of, brute_force_components, Side};
use dtorso::example4::{PRESENTATION, RAY_S};
use dtorso::generate::{gen_presentation, gen_sources, gen_tendril, trial_rng, GenConfig};
use dtorso::projection::{check_local_finiteness, check_projection_walk, LocalFiniteness};
use dtorso::search::{run_trial, SearchConfig, TrialOutcome};
use dtorso::separation::{
    d_hat_double_prime, d_hat_prime, min_separator, pitz_x, remark_tail_check, s_modification, separates_at_depths, Arena,
    Certificate, Grid, LemmaOutcome, Targets,
};
use dtorso::torso::{build_torso, EtaAssignment, EtaRule};
use dtorso::{classify_adhesion, parse_presentation, project_ray, torso_of, Cardinal, RaySpec, Torso};

const EXAMPLE4_LIMIT: Duration = Duration::from_secs(1);
const ORACLE_LIMIT: Duration = Duration::from_secs(30);
const ORACLE_TRIALS: u64 = 200;
const LEMMA_TRIALS: usize = 100;
const RANDOM_INSTANCES: u64 = 100;
const PROJECTION_SAMPLE: usize = 200;

type Verdict = Result<String, String>;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dtorso"))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn h(i: u64) -> Vertex {
    Vertex::host("X", i)
}

fn example4_golden() -> Verdict {
    let start = Instant::now();
    let out = bin().arg("example4").output().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let stdout = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.code() == Some(0), || format!("exit {:?}\n{stdout}", out.status.code()))?;
    let names = ["classification", "torso-edge-x1-x3", "projection", "F-separates-in-K", "X-fails", "F_S-separates"];
    for (k, name) in names.iter().enumerate() {
        let line = format!("{}.{name}=PASS", k + 1);
        ensure(stdout.lines().any(|l| l.starts_with(&line)), || format!("missing `{line}`"))?;
    }
    ensure(stdout.contains("witness=(X[0], X[1], Z#0.z)"), || "witness path differs".into())?;
    ensure(elapsed < EXAMPLE4_LIMIT, || format!("took {elapsed:?}"))?;
    let shallow = bin().args(["example4", "--depths", "10"]).output().map_err(|e| e.to_string())?;
    let verdicts = |s: &[u8]| -> Vec<String> {
        String::from_utf8_lossy(s).lines().map(|l| l.split(' ').next().unwrap_or("").to_owned()).collect()
    };
    ensure(verdicts(&shallow.stdout) == verdicts(&out.stdout), || "depth 10 verdicts differ".into())?;
    Ok(format!("6/6 assertions, {} ms", elapsed.as_millis()))
}

fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let cfg = GenConfig::finite();
    let mut mismatches = Vec::new();
    let mut components = 0usize;
    for trial in 0..ORACLE_TRIALS {
        let g = gen_presentation(&mut trial_rng(2002, trial), &cfg).ok_or("generator dead end")?;
        let p = &g.presentation;
        let c = classify_adhesion(p);
        let depth = p.adhesion_window() + 16;
        let full = p.truncate(depth, 8);
        let host: BTreeSet<Vertex> = full.graph.vertices().iter().filter(|v| v.is_host()).cloned().collect();
        let brute = brute_force_components(&full, &host);
        let mut per_set: BTreeMap<&BTreeSet<Vertex>, u64> = BTreeMap::new();
        for (_, a) in &brute {
            *per_set.entry(a).or_default() += 1;
        }
        let expected_total: u64 = p.patterns.iter().map(|q| p.copy_count(q).finite().unwrap_or(u64::MAX)).sum();
        if expected_total != brute.len() as u64 {
            mismatches.push(format!("trial {trial}: {} components, expected {expected_total}", brute.len()));
        }
        for (verts, a) in &brute {
            components += 1;
            let ids: BTreeSet<&ComponentId> = verts
                .iter()
                .map(|v| match v {
                    Vertex::Inner { component, .. } => Ok(component),
                    other => Err(other.clone()),
                })
                .collect::<Result<_, _>>()
                .map_err(|v| format!("trial {trial}: host vertex {v} inside a component"))?;
            let [id] = ids.into_iter().collect::<Vec<_>>()[..] else {
                mismatches.push(format!("trial {trial}: component spans several copies"));
                continue;
            };
            if adhesion_set_of(p, id).ok().as_ref() != Some(a) {
                mismatches.push(format!("trial {trial}: N({id}) differs"));
            }
            if c.count_of(id) != Some(Cardinal::Finite(per_set[a])) {
                mismatches.push(format!("trial {trial}: |D_A| for {id}: {:?} vs {}", c.count_of(id), per_set[a]));
            }
            if c.side_of(id) != Side::Prime {
                mismatches.push(format!("trial {trial}: {id} not prime"));
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(mismatches.is_empty(), || format!("{} mismatches, first: {}", mismatches.len(), mismatches[0]))?;
    ensure(elapsed < ORACLE_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("{ORACLE_TRIALS} presentations, {components} components, 0 mismatches, {} ms", elapsed.as_millis()))
}

fn lemma_suite() -> Verdict {
    let cfg = SearchConfig::new(3003, 0);
    let (mut checked, mut holds, mut trial) = (0usize, 0usize, 0u64);
    while checked < LEMMA_TRIALS && trial < 20 * LEMMA_TRIALS as u64 {
        if let (TrialOutcome::Checked { fs, .. }, _) = run_trial(&cfg, trial) {
            checked += 1;
            match fs {
                LemmaOutcome::Holds => holds += 1,
                LemmaOutcome::Violation => return Err(format!("LEMMA-VIOLATION in trial {trial}")),
                other => return Err(format!("trial {trial}: hypothesis {other}")),
            }
        }
        trial += 1;
    }
    ensure(checked == LEMMA_TRIALS, || format!("only {checked} trials reached the check"))?;
    Ok(format!("{holds}/{LEMMA_TRIALS} conclusions separated"))
}

struct RandomCase {
    torso: Torso,
    ray: RaySpec,
    u: BTreeSet<Vertex>,
}

fn random_cases(seed: u64, n: u64) -> Vec<RandomCase> {
    let cfg = GenConfig::default();
    let mut out = Vec::new();
    let mut trial = 0;
    while (out.len() as u64) < n && trial < 20 * n {
        let mut rng = trial_rng(seed, trial);
        trial += 1;
        let Some(g) = gen_presentation(&mut rng, &cfg) else { continue };
        let Some(ray) = gen_tendril(&mut rng, &g.presentation, None) else { continue };
        let Some(u) = gen_sources(&mut rng, &g.presentation, &ray) else { continue };
        out.push(RandomCase { torso: torso_of(&g.presentation), ray, u });
    }
    out
}

fn torso_invariants() -> Verdict {
    let (depth, reps) = (20, 3);
    let cases = random_cases(4004, RANDOM_INSTANCES);
    ensure(cases.len() as u64 == RANDOM_INSTANCES, || "not enough instances".into())?;
    let mut cliques = 0;
    for (k, case) in cases.iter().enumerate() {
        let t = &case.torso;
        let p = &t.presentation;
        let kt = t.truncate(depth, reps);
        for a in t.classes.double_prime_sets() {
            cliques += 1;
            for x in a {
                for y in a.iter().filter(|y| *y > x) {
                    ensure(t.adjacent(x, y) && kt.graph.adjacent(x, y), || format!("case {k}: {x} -- {y} missing"))?;
                }
            }
        }
        for v in kt.graph.vertices() {
            if let Vertex::Contracted(d) = v {
                let n = p.attach_targets(d).map_err(|e| e.to_string())?;
                ensure(kt.graph.neighbors_of(v) == n, || format!("case {k}: N_K({v}) differs from N_G({d})"))?;
            }
        }
        let g = p.truncate(depth, reps);
        let host: BTreeSet<Vertex> = g.graph.vertices().iter().filter(|v| v.is_host()).cloned().collect();
        for (verts, _) in brute_force_components(&g, &host) {
            let images: BTreeSet<Vertex> = verts.iter().map(|v| t.rho(v)).collect();
            ensure(images.len() == 1, || format!("case {k}: rho not constant on a component"))?;
        }
        let rev = build_torso(p, &t.classes, &EtaAssignment { rule: EtaRule::Reversed });
        ensure(rev.truncate(depth, reps).graph.edge_set() == kt.graph.edge_set(), || format!("case {k}: eta changes K"))?;
    }
    Ok(format!("{RANDOM_INSTANCES} instances, {cliques} A'' cliques complete"))
}

fn separator_algebra() -> Verdict {
    use rand::seq::SliceRandom;
    use rand::Rng;
    let grid = Grid { depths: vec![20], reps: 3 };
    let cases = random_cases(5005, RANDOM_INSTANCES);
    ensure(cases.len() as u64 == RANDOM_INSTANCES, || "not enough instances".into())?;
    let mut separated = 0;
    for (k, case) in cases.iter().enumerate() {
        let mut rng = trial_rng(5006, k as u64);
        let t = &case.torso;
        let kt = t.truncate(grid.max_depth(), grid.reps);
        let pool: Vec<Vertex> = kt.graph.vertices().to_vec();
        let size = rng.gen_range(0..=4);
        let f: BTreeSet<Vertex> = pool.choose_multiple(&mut rng, size).cloned().collect();
        let fs = s_modification(t, &case.ray, &f).map_err(|e| e.to_string())?;
        let x = pitz_x(t, &f);
        ensure(x.is_subset(&fs), || format!("case {k}: X not inside F_S"))?;
        let host_part = f.iter().filter(|v| v.is_host()).count();
        let ds: BTreeSet<ComponentId> =
            d_hat_prime(t, &f).into_iter().chain(d_hat_double_prime(t, &case.ray, &f).map_err(|e| e.to_string())?).collect();
        let bound: usize = host_part + ds.iter().map(|d| t.presentation.attach_targets(d).map_or(0, |n| n.len())).sum::<usize>();
        ensure(fs.len() <= bound, || format!("case {k}: |F_S| = {} > {bound}", fs.len()))?;
        let targets = Targets::Ray { seq: &case.ray.seq, from: 0 };
        let g = t.presentation.truncate(grid.max_depth(), grid.reps);
        let ws: BTreeSet<Vertex> = targets.at(grid.max_depth(), grid.reps).into_iter().filter(|v| g.graph.contains(v)).collect();
        let cut = min_separator(&g.graph, &case.u, &ws);
        for base_set in [fs, cut] {
            let base = separates_at_depths(Arena::G(t), &base_set, &case.u, targets, &grid).map_err(|e| e.to_string())?;
            let extra: BTreeSet<Vertex> = pool.choose_multiple(&mut rng, 3).filter(|v| v.is_host()).cloned().collect();
            let bigger: BTreeSet<Vertex> = base_set.union(&extra).cloned().collect();
            let sup = separates_at_depths(Arena::G(t), &bigger, &case.u, targets, &grid).map_err(|e| e.to_string())?;
            if base.is_separated() {
                separated += 1;
                ensure(sup.is_separated(), || format!("case {k}: superset of a separator fails"))?;
            }
        }
    }
    Ok(format!("{RANDOM_INSTANCES} triples, X inside F_S always, monotone on {separated} separated cases"))
}

fn conservativity() -> Verdict {
    let mut infinite = 0;
    let mut flagged = 0;
    for trial in 0..RANDOM_INSTANCES {
        let g = gen_presentation(&mut trial_rng(6006, trial), &GenConfig::default()).ok_or("dead end")?;
        let c = torso_of(&g.presentation).conservativity();
        ensure(c.conservative, || format!("infinite-host trial {trial} not conservative: {c}"))?;
        infinite += 1;
    }
    for trial in 0..RANDOM_INSTANCES {
        let g = gen_presentation(&mut trial_rng(6007, trial), &GenConfig::finite()).ok_or("dead end")?;
        let p = &g.presentation;
        let host: u64 = p.families.iter().map(|f| f.size.finite().unwrap_or(0)).sum();
        let prime: u64 = p.patterns.iter().map(|q| p.copy_count(q).finite().unwrap_or(0)).sum();
        let c = torso_of(p).conservativity();
        let expect_flag = prime > 0;
        ensure(c.conservative != expect_flag, || format!("finite trial {trial}: |H|={host} |D'|={prime} but {c}"))?;
        ensure(c.finite_host_flag() == expect_flag, || format!("finite trial {trial}: flag wrong"))?;
        flagged += usize::from(expect_flag);
    }
    Ok(format!("{infinite} infinite-host conservative, {flagged} finite-host instances flagged"))
}

fn projection_checks() -> Verdict {
    let grid = Grid::default();
    let cases = random_cases(7007, RANDOM_INSTANCES);
    ensure(cases.len() as u64 == RANDOM_INSTANCES, || "not enough instances".into())?;
    for (k, case) in cases.iter().enumerate() {
        let t = &case.torso;
        let proj = project_ray(t, &case.ray).map_err(|e| format!("case {k}: {e}"))?;
        for &d in &grid.depths {
            check_projection_walk(t, &proj, d, grid.reps)
                .map_err(|e| format!("case {k}: S' breaks at {} -- {} (depth {d})", e.0, e.1))?;
        }
        let lf = check_local_finiteness(&proj, 64);
        ensure(lf == LocalFiniteness::Definitive(true), || format!("case {k}: local finiteness {lf}"))?;
        for v in proj.sample(PROJECTION_SAMPLE) {
            let ok = match &v {
                Vertex::Host { .. } => true,
                Vertex::Contracted(d) => t.classes.side_of(d) == Side::Prime,
                Vertex::Inner { .. } => false,
            };
            ensure(ok, || format!("case {k}: S' contains {v}"))?;
        }
    }
    Ok(format!("{RANDOM_INSTANCES} tendrils, walks in K at all depths, no D'' terms"))
}

fn remark_example4() -> Verdict {
    let t = torso_of(&parse_presentation(PRESENTATION).map_err(|e| e.to_string())?);
    let s = RaySpec::parse(RAY_S).map_err(|e| e.to_string())?;
    let u = BTreeSet::from([h(0)]);
    let f = BTreeSet::from([h(2), h(3)]);
    let grid = Grid::default();
    let r = remark_tail_check(&t, &u, &s, &f, &grid).map_err(|e| e.to_string())?;
    ensure(r.x == f, || "X differs from {x2, x3}".into())?;
    ensure(r.last_meeting == Some(2), || format!("last meeting {:?}", r.last_meeting))?;
    let Certificate::Separated { checked } = &r.certificate else {
        return Err(r.certificate.to_string());
    };
    let depths: Vec<u64> = checked.iter().filter(|s| !s.vacuous).map(|s| s.depth).collect();
    ensure(depths == [10, 20, 40], || format!("depths {depths:?}"))?;
    // independent oracle: the component of x0 in G - X at depth 10
    let g = t.presentation.truncate(10, 3);
    let blocked: Vec<bool> = g.graph.vertices().iter().map(|v| f.contains(v)).collect();
    let reach: BTreeSet<Vertex> =
        g.graph.reachable(&[g.graph.id(&h(0)).unwrap()], &blocked).into_iter().map(|i| g.graph.vertex(i).clone()).collect();
    let mut expected: BTreeSet<Vertex> = [h(0), h(1)].into();
    expected.extend(["Y@0.y", "Y@1.y", "Z#0.z", "Z#1.z", "Z#2.z"].map(|a| Vertex::parse(a).unwrap()));
    ensure(reach == expected, || format!("reachable set {reach:?}"))?;
    let tail: BTreeSet<Vertex> = s.seq.terms_up_to(10).into_iter().skip(3).collect();
    ensure(reach.is_disjoint(&tail), || "oracle reaches the tail".into())?;
    Ok("tail after position 2 separated at depths 10,20,40".into())
}

fn search_determinism() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |sub: &str| {
        let out_dir = dir.path().join(sub);
        let out = bin()
            .args(["search", "--seed", "1", "--trials", "200", "--out"])
            .arg(&out_dir)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.success(), || format!("search exited {:?}", out.status.code()))?;
        Ok::<_, String>((out.stdout, out_dir))
    };
    let (a, dir_a) = run("a")?;
    let (b, _) = run("b")?;
    ensure(a == b, || "reports differ between runs".into())?;
    let files: Vec<_> = std::fs::read_dir(&dir_a).map_err(|e| e.to_string())?.filter_map(Result::ok).map(|e| e.path()).collect();
    let failures: Vec<&Path> = files
        .iter()
        .map(|p| p.as_path())
        .filter(|p| p.file_name().is_some_and(|n| n.to_string_lossy().starts_with("x-failure")))
        .collect();
    ensure(!failures.is_empty(), || "no X-failure scenario emitted".into())?;
    for f in &failures {
        let out = bin().arg("run").arg(f).output().map_err(|e| e.to_string())?;
        ensure(out.status.success(), || format!("replay of {} failed", f.display()))?;
    }
    Ok(format!("identical reports, {} X-failure scenarios replayed", failures.len()))
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 9] = [
        ("example4 golden run", example4_golden),
        ("oracle equivalence", oracle_equivalence),
        ("lemma property suite", lemma_suite),
        ("torso invariants", torso_invariants),
        ("separator algebra", separator_algebra),
        ("conservativity", conservativity),
        ("projection checks", projection_checks),
        ("remark check on example4", remark_example4),
        ("search determinism", search_determinism),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
