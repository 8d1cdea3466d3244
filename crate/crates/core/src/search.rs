//! Randomized hunt for presentations where `X` fails to separate but
//! the `S`-modification `F_S` succeeds.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use crate::address::{fmt_set, ComponentId, Vertex};
use crate::generate::{gen_presentation, gen_sources, gen_tendril, trial_rng, GenConfig};
use crate::presentation::PatternKind;
use crate::projection::project_ray;
use crate::report::Report;
use crate::scenario::{lemma_token, Check, CheckKind, Scenario};
use crate::separation::{lemma421_check_with, min_separator, path_string, Grid, LemmaOutcome, Modification, Targets};
use crate::torso::torso_of;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub seed: u64,
    pub trials: u64,
    pub generator: GenConfig,
    pub grid: Grid,
}

impl SearchConfig {
    pub fn new(seed: u64, trials: u64) -> Self {
        SearchConfig { seed, trials, generator: GenConfig::default(), grid: Grid::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DeadEnd {
    Presentation,
    Tendril,
    Sources,
    Projection,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrialOutcome {
    DeadEnd(DeadEnd),
    UMeetsW,
    Checked { fs: LemmaOutcome, x: LemmaOutcome },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FindingKind {
    XFailure,
    LemmaViolation,
}

impl fmt::Display for FindingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FindingKind::XFailure => "x-failure",
            FindingKind::LemmaViolation => "LEMMA-VIOLATION",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Finding {
    pub trial: u64,
    pub kind: FindingKind,
    pub f: BTreeSet<Vertex>,
    pub x: BTreeSet<Vertex>,
    pub f_s: BTreeSet<Vertex>,
    pub witness: Vec<Vertex>,
    pub scenario: Scenario,
}

impl Finding {
    pub fn file_name(&self) -> String {
        format!("{}_{:04}.scn", self.kind.to_string().to_lowercase(), self.trial)
    }
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub outcomes: Vec<TrialOutcome>,
    pub findings: Vec<Finding>,
}

impl SearchReport {
    pub fn count(&self, pred: impl Fn(&TrialOutcome) -> bool) -> usize {
        self.outcomes.iter().filter(|o| pred(o)).count()
    }

    pub fn violations(&self) -> usize {
        self.findings.iter().filter(|f| f.kind == FindingKind::LemmaViolation).count()
    }

    pub fn to_report(&self) -> Report {
        let c = &self.config;
        let mut r = Report::new();
        let depths: Vec<String> = c.grid.depths.iter().map(u64::to_string).collect();
        r.push("seed", c.seed)
            .push("trials", c.trials)
            .push("prng", "ChaCha8 seed_from_u64(seed) set_stream(trial)")
            .push("depths", depths.join(","))
            .push("reps", c.grid.reps);
        let mut dead: BTreeMap<DeadEnd, usize> = BTreeMap::new();
        for o in &self.outcomes {
            if let TrialOutcome::DeadEnd(d) = o {
                *dead.entry(*d).or_default() += 1;
            }
        }
        for (d, n) in dead {
            r.push(format!("dead_end.{}", format!("{d:?}").to_lowercase()), n);
        }
        r.push("u_meets_w", self.count(|o| *o == TrialOutcome::UMeetsW));
        r.push("checked", self.count(|o| matches!(o, TrialOutcome::Checked { .. })));
        for o in [LemmaOutcome::Holds, LemmaOutcome::HypothesisNotEstablished, LemmaOutcome::Violation] {
            r.push(
                format!("lemma.{}", lemma_token(o)),
                self.count(|t| matches!(t, TrialOutcome::Checked { fs, .. } if *fs == o)),
            );
        }
        r.push("x_failures", self.findings.iter().filter(|f| f.kind == FindingKind::XFailure).count());
        for f in &self.findings {
            let key = format!("finding.{}", f.trial);
            r.push(&key, f.kind);
            r.push(format!("{key}.file"), f.file_name());
            r.push(format!("{key}.F"), fmt_set(&f.f));
            r.push(format!("{key}.X"), fmt_set(&f.x));
            r.push(format!("{key}.F_S"), fmt_set(&f.f_s));
            r.push(format!("{key}.witness"), format!("({})", path_string(&f.witness)));
        }
        r
    }
}

fn comma_path(p: &[Vertex]) -> String {
    p.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// One trial: generate, pick a tendril and `U`, take `F` as a minimum cut in
/// the deepest `K`-truncation, and test both `F_S` and `X`.
pub fn run_trial(cfg: &SearchConfig, trial: u64) -> (TrialOutcome, Option<Finding>) {
    let mut rng = trial_rng(cfg.seed, trial);
    let Some(g) = gen_presentation(&mut rng, &cfg.generator) else {
        return (TrialOutcome::DeadEnd(DeadEnd::Presentation), None);
    };
    let p = &g.presentation;
    let fan = g.motif.as_ref().map(|(name, _)| ComponentId::replicate(name.clone(), 0)).filter(|_| rng.gen_bool(0.7));
    let through = fan.or_else(|| {
        let wide = p.patterns.iter().find(|q| {
            matches!(q.kind, PatternKind::Replicated(m) if m.is_infinite()) && q.attach_terms().len() >= 2
        })?;
        rng.gen_bool(0.3).then(|| wide.copy_id(0))
    });
    let Some(ray) = gen_tendril(&mut rng, p, through.as_ref()) else {
        return (TrialOutcome::DeadEnd(DeadEnd::Tendril), None);
    };
    let planted = g.motif.is_some() && rng.gen_bool(0.5);
    let u = if planted {
        Some(BTreeSet::from([Vertex::host("X", 0), Vertex::host("Q", 0)]))
    } else {
        gen_sources(&mut rng, p, &ray)
    };
    let Some(u) = u else {
        return (TrialOutcome::DeadEnd(DeadEnd::Sources), None);
    };
    let t = torso_of(p);
    let Ok(proj) = project_ray(&t, &ray) else {
        return (TrialOutcome::DeadEnd(DeadEnd::Projection), None);
    };
    let depth = cfg.grid.max_depth();
    let k = t.truncate(depth, cfg.grid.reps);
    let w: BTreeSet<Vertex> =
        Targets::Projection(&proj).at(depth, cfg.grid.reps).into_iter().filter(|v| k.graph.contains(v)).collect();
    if u.iter().any(|v| w.contains(v)) {
        return (TrialOutcome::UMeetsW, None);
    }
    let f = min_separator(&k.graph, &u, &w);
    let lemma = |m| lemma421_check_with(&t, &u, &ray, &f, &cfg.grid, m);
    let (Ok(fs), Ok(x)) = (lemma(Modification::FS), lemma(Modification::X)) else {
        return (TrialOutcome::DeadEnd(DeadEnd::Projection), None);
    };
    let outcome = TrialOutcome::Checked { fs: fs.outcome, x: x.outcome };
    let kind = match (fs.outcome, x.outcome) {
        (LemmaOutcome::Violation, _) => FindingKind::LemmaViolation,
        (LemmaOutcome::Holds, LemmaOutcome::XFails) => FindingKind::XFailure,
        _ => return (outcome, None),
    };
    let witness = match kind {
        FindingKind::XFailure => x.conclusion.witness(),
        FindingKind::LemmaViolation => fs.conclusion.witness(),
    }
    .unwrap_or_default()
    .to_vec();
    let sets = BTreeMap::from([
        ("U".to_owned(), u),
        ("F".to_owned(), f.clone()),
        ("X".to_owned(), x.separator.clone()),
        ("F_S".to_owned(), fs.separator.clone()),
    ]);
    let checks = vec![
        Check::new(CheckKind::Separate).arg("in", "K").arg("expect", "separated"),
        Check::new(CheckKind::Lemma).arg("expect", lemma_token(fs.outcome)),
        Check::new(CheckKind::Lemma).arg("with", "X").arg("expect", lemma_token(x.outcome)),
        Check::new(CheckKind::Separate)
            .arg("F", if kind == FindingKind::XFailure { "X" } else { "F_S" })
            .arg("witness", "1")
            .arg("expect", format!("not-separated:{}", comma_path(&witness))),
    ];
    let scenario = Scenario {
        presentation: p.clone(),
        sets,
        rays: BTreeMap::from([(ray.name.clone(), ray)]),
        grid: cfg.grid.clone(),
        checks,
    };
    let finding = Finding { trial, kind, f, x: x.separator, f_s: fs.separator, witness, scenario };
    (outcome, Some(finding))
}

/// Runs all trials in parallel and assembles results in trial order.
pub fn random_search(cfg: &SearchConfig) -> SearchReport {
    let results: Vec<(TrialOutcome, Option<Finding>)> = (0..cfg.trials).into_par_iter().map(|k| run_trial(cfg, k)).collect();
    let mut outcomes = Vec::with_capacity(results.len());
    let mut findings = Vec::new();
    for (o, f) in results {
        outcomes.push(o);
        findings.extend(f);
    }
    SearchReport { config: cfg.clone(), outcomes, findings }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::run_scenario;
    use std::path::Path;

    #[test]
    fn zero_trials() {
        let r = random_search(&SearchConfig::new(1, 0));
        assert!(r.findings.is_empty() && r.outcomes.is_empty());
    }

    #[test]
    fn deterministic_and_replayable() {
        let cfg = SearchConfig::new(1, 40);
        let a = random_search(&cfg);
        let b = random_search(&cfg);
        assert_eq!(a.to_report().to_string(), b.to_report().to_string());
        assert_eq!(a.violations(), 0, "{}", a.to_report());
        for f in &a.findings {
            let sc = Scenario::parse(&f.scenario.to_string(), Path::new(".")).unwrap();
            let run = run_scenario(&sc).unwrap();
            assert!(run.all_passed(), "{}\n{}", f.scenario, run.to_report());
        }
    }
}
