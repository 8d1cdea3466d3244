//! Eventually periodic sequences and symbolic rays.
//!
//! A [`Lasso`] is a finite ground prefix followed by a period block over the
//! loop variable `n`, unrolled at `n = start, start + step, ...`. An empty
//! period makes it a finite walk.

use std::collections::BTreeSet;
use std::fmt;

use crate::address::{Index, Name, Selector, SymVertex, Vertex};
use crate::cardinal::Cardinal;
use crate::parse::strip_comment;
use crate::presentation::GraphPresentation;

/// A term that denotes one ground value per loop index.
pub trait Symbolic: Clone + fmt::Debug + PartialEq {
    type Ground: Clone + fmt::Debug + PartialEq + Ord;
    fn at(&self, n: u64) -> Self::Ground;
    fn is_ground(&self) -> bool;
}

impl Symbolic for SymVertex {
    type Ground = Vertex;

    fn at(&self, n: u64) -> Vertex {
        SymVertex::at(self, n)
    }

    fn is_ground(&self) -> bool {
        SymVertex::is_ground(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lasso<S: Symbolic> {
    pub prefix: Vec<S::Ground>,
    pub period: Vec<S>,
    pub start: u64,
    pub step: u64,
}

impl<S: Symbolic> Lasso<S> {
    pub fn walk(prefix: Vec<S::Ground>) -> Self {
        Lasso { prefix, period: Vec::new(), start: 0, step: 1 }
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    /// Loop index of cycle `c`.
    pub fn cycle_index(&self, c: u64) -> u64 {
        self.start + c * self.step
    }

    /// Linear position of term `j` of cycle `c`.
    pub fn position(&self, c: u64, j: usize) -> usize {
        self.prefix.len() + c as usize * self.period.len() + j
    }

    pub fn term(&self, k: usize) -> Option<S::Ground> {
        if k < self.prefix.len() {
            return Some(self.prefix[k].clone());
        }
        if self.period.is_empty() {
            return None;
        }
        let r = k - self.prefix.len();
        let (c, j) = (r / self.period.len(), r % self.period.len());
        Some(self.period[j].at(self.cycle_index(c as u64)))
    }

    /// The first `len` terms (fewer for a short walk).
    pub fn sample(&self, len: usize) -> Vec<S::Ground> {
        (0..len).map_while(|k| self.term(k)).collect()
    }

    /// The prefix followed by `cycles` full cycles.
    pub fn unrolled_terms(&self, cycles: u64) -> Vec<S::Ground> {
        let mut out = self.prefix.clone();
        for c in 0..cycles {
            let n = self.cycle_index(c);
            out.extend(self.period.iter().map(|t| t.at(n)));
        }
        out
    }

    /// The same sequence with its first `cycles` cycles moved into the prefix.
    pub fn unroll(&self, cycles: u64) -> Self {
        if self.is_finite() {
            return self.clone();
        }
        Lasso {
            prefix: self.unrolled_terms(cycles),
            period: self.period.clone(),
            start: self.cycle_index(cycles),
            step: self.step,
        }
    }

    /// The prefix plus every cycle whose loop index is at most `bound`.
    pub fn terms_up_to(&self, bound: u64) -> Vec<S::Ground> {
        let cycles = if self.is_finite() || bound < self.start { 0 } else { (bound - self.start) / self.step + 1 };
        self.unrolled_terms(cycles)
    }
}

/// A named ray (or finite walk) of `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct RaySpec {
    pub name: Name,
    pub seq: Lasso<SymVertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RayError {
    #[error("ray syntax: {0}")]
    Syntax(String),
    #[error("ray `{0}` is empty")]
    Empty(Name),
    #[error("step must be positive")]
    ZeroStep,
    #[error("`{0}` is not a vertex of G")]
    NotInG(String),
    #[error("period term `{0}` does not depend on n")]
    GroundPeriodTerm(String),
    #[error("period term `{0}` runs out of vertices")]
    BoundedPeriodTerm(String),
    #[error("vertex repeats: {0}")]
    Repeated(String),
    #[error("`{a}` and `{b}` are consecutive but not adjacent")]
    NotAdjacent { a: String, b: String },
}

impl RaySpec {
    /// Parses `ray S prefix <addr>... [period <term>... start <n> [step <k>]]`.
    pub fn parse(line: &str) -> Result<RaySpec, RayError> {
        let words: Vec<&str> = strip_comment(line).split_whitespace().collect();
        let syntax = |m: &str| RayError::Syntax(m.to_owned());
        let (name, rest) = match words.as_slice() {
            ["ray", name, rest @ ..] => (*name, rest),
            _ => return Err(syntax("expected `ray <name> prefix ...`")),
        };
        let mut prefix = Vec::new();
        let mut period = Vec::new();
        let mut start = None;
        let mut step = None;
        let mut section = "";
        let mut it = rest.iter();
        while let Some(&w) = it.next() {
            match w {
                "prefix" | "period" => section = w,
                "start" | "step" => {
                    let v = it.next().ok_or_else(|| syntax(&format!("missing value after `{w}`")))?;
                    let v: u64 = v.parse().map_err(|_| syntax(&format!("bad number `{v}`")))?;
                    if w == "start" { start = Some(v) } else { step = Some(v) }
                    section = "";
                }
                _ if section == "prefix" => {
                    prefix.push(Vertex::parse(w).map_err(|e| RayError::Syntax(e.to_string()))?);
                }
                _ if section == "period" => {
                    period.push(SymVertex::parse_with(w, Some("n")).map_err(|e| RayError::Syntax(e.to_string()))?);
                }
                _ => return Err(syntax(&format!("unexpected `{w}`"))),
            }
        }
        if !period.is_empty() && start.is_none() {
            return Err(syntax("a period needs `start <n>`"));
        }
        let step = step.unwrap_or(1);
        if step == 0 {
            return Err(RayError::ZeroStep);
        }
        Ok(RaySpec { name: name.to_owned(), seq: Lasso { prefix, period, start: start.unwrap_or(0), step } })
    }

    pub fn is_finite(&self) -> bool {
        self.seq.is_finite()
    }
}

impl fmt::Display for RaySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ray {}", self.name)?;
        if !self.seq.prefix.is_empty() {
            f.write_str(" prefix")?;
            for v in &self.seq.prefix {
                write!(f, " {v}")?;
            }
        }
        if !self.seq.period.is_empty() {
            f.write_str(" period")?;
            for t in &self.seq.period {
                write!(f, " {t}")?;
            }
            write!(f, " start {}", self.seq.start)?;
            if self.seq.step != 1 {
                write!(f, " step {}", self.seq.step)?;
            }
        }
        Ok(())
    }
}

/// Checks that the spec denotes a path of `G`: every vertex exists, no vertex
/// repeats, and consecutive vertices are adjacent. Adjacency is checked on the
/// prefix plus two cycles and once more past every ground template index,
/// where the templates are shift-invariant.
pub fn validate_ray(p: &GraphPresentation, s: &RaySpec) -> Result<(), RayError> {
    let seq = &s.seq;
    if seq.prefix.is_empty() && seq.period.is_empty() {
        return Err(RayError::Empty(s.name.clone()));
    }
    if seq.step == 0 {
        return Err(RayError::ZeroStep);
    }
    for v in &seq.prefix {
        if !p.contains(v) {
            return Err(RayError::NotInG(v.to_string()));
        }
    }
    for t in &seq.period {
        if t.is_ground() {
            return Err(RayError::GroundPeriodTerm(t.to_string()));
        }
        if !unbounded(p, t) || !p.contains(&t.at(seq.start)) {
            return Err(RayError::BoundedPeriodTerm(t.to_string()));
        }
    }

    let mut seen = BTreeSet::new();
    for v in &seq.prefix {
        if !seen.insert(v) {
            return Err(RayError::Repeated(v.to_string()));
        }
    }
    for (j, a) in seq.period.iter().enumerate() {
        for b in &seq.period[j + 1..] {
            if a.kind_key() == b.kind_key() && offset(a) % seq.step == offset(b) % seq.step {
                return Err(RayError::Repeated(format!("{a} and {b}")));
            }
        }
        for v in &seq.prefix {
            if let crate::address::Solve::At(n) = a.solve(v) {
                if n >= seq.start && (n - seq.start).is_multiple_of(seq.step) {
                    return Err(RayError::Repeated(v.to_string()));
                }
            }
        }
    }

    let adjacent_run = |terms: &[Vertex]| -> Result<(), RayError> {
        for w in terms.windows(2) {
            if !p.adjacent(&w[0], &w[1]) {
                return Err(RayError::NotAdjacent { a: w[0].to_string(), b: w[1].to_string() });
            }
        }
        Ok(())
    };
    if seq.is_finite() {
        return adjacent_run(&seq.prefix);
    }
    adjacent_run(&seq.unrolled_terms(2))?;
    let bound = ground_bound(p);
    let far = bound.saturating_sub(seq.start).div_ceil(seq.step).max(2);
    let cycle = |c: u64| seq.period.iter().map(move |t| t.at(seq.cycle_index(c)));
    let terms: Vec<Vertex> = cycle(far).chain(cycle(far + 1).take(1)).collect();
    adjacent_run(&terms)
}

fn offset(t: &SymVertex) -> u64 {
    match t.index() {
        Index::Affine(c) | Index::Ground(c) => c,
    }
}

/// Whether an affine term denotes a vertex for every large `n`.
fn unbounded(p: &GraphPresentation, t: &SymVertex) -> bool {
    match t {
        Vertex::Host { family, .. } => p.family_size(family) == Some(Cardinal::Aleph0),
        Vertex::Inner { component, local } => p.pattern(&component.pattern).is_some_and(|q| {
            let kind_ok = matches!(
                (component.sel, q.is_indexed()),
                (Selector::Indexed(_), true) | (Selector::Replicate(_), false)
            );
            kind_ok && q.has_inner(local) && p.copy_count(q).is_infinite()
        }),
        Vertex::Contracted(_) => false,
    }
}

/// One past the largest ground index used by any template.
pub(crate) fn ground_bound(p: &GraphPresentation) -> u64 {
    let ground = p
        .host_edges
        .iter()
        .flat_map(|(a, b)| [a, b])
        .chain(p.patterns.iter().flat_map(|q| q.attach.iter().map(|(_, t)| t)))
        .filter_map(|t| match t.index {
            Index::Ground(g) => Some(g + 1),
            Index::Affine(_) => None,
        })
        .max()
        .unwrap_or(0);
    ground.max(p.adhesion_window())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_presentation;
    use crate::presentation::tests::EXAMPLE4;

    pub(crate) const RAY_S: &str = "ray S prefix X[2] Z#0.z X[3] period Y@n.y X[n+1] start 3";

    fn v(s: &str) -> Vertex {
        Vertex::parse(s).unwrap()
    }

    #[test]
    fn parse_and_sample() {
        let s = RaySpec::parse(RAY_S).unwrap();
        assert_eq!(s.to_string(), RAY_S);
        let got: Vec<String> = s.seq.sample(7).iter().map(ToString::to_string).collect();
        assert_eq!(got, ["X[2]", "Z#0.z", "X[3]", "Y@3.y", "X[4]", "Y@4.y", "X[5]"]);
        assert_eq!(s.seq.term(3), Some(v("Y@3.y")));
        assert_eq!(s.seq.terms_up_to(4).len(), 3 + 4);
        assert_eq!(s.seq.unroll(2).sample(9), s.seq.sample(9));
        let w = RaySpec::parse("ray W prefix X[0] Y@0.y X[1]").unwrap();
        assert!(w.is_finite());
        assert_eq!(w.seq.sample(10).len(), 3);
        assert!(RaySpec::parse("ray S period X[n] start").is_err());
        assert!(RaySpec::parse("ray S period X[n]").is_err());
        assert_eq!(RaySpec::parse("ray S period X[n] start 0 step 0"), Err(RayError::ZeroStep));
    }

    #[test]
    fn validation() {
        let p = parse_presentation(EXAMPLE4).unwrap();
        validate_ray(&p, &RaySpec::parse(RAY_S).unwrap()).unwrap();
        validate_ray(&p, &RaySpec::parse("ray W prefix X[0] Y@0.y X[1]").unwrap()).unwrap();
        validate_ray(&p, &RaySpec::parse("ray T period X[n] start 0").unwrap()).unwrap();
        validate_ray(&p, &RaySpec::parse("ray T period X[n] X[n+1] start 0 step 2").unwrap()).unwrap();
        let bad = [
            ("ray B prefix X[0] X[2]", "not adjacent"),
            ("ray B prefix X[0] X[1] X[0]", "repeats"),
            ("ray B period X[n] X[n+1] start 0", "repeats"),
            ("ray B prefix X[0] X[1] period X[n] start 1", "repeats"),
            ("ray B period X[n] X[n+2] start 0 step 2", "repeats"),
            ("ray B period X[3] start 0", "does not depend"),
            ("ray B period Z#n.z start 0", "not adjacent"),
            ("ray B prefix Q[0]", "not a vertex"),
            ("ray B prefix Y@0.w", "not a vertex"),
        ];
        for (text, msg) in bad {
            let e = validate_ray(&p, &RaySpec::parse(text).unwrap()).unwrap_err();
            assert!(e.to_string().contains(msg), "{text}: {e}");
        }
    }

    #[test]
    fn adjacency_past_ground_templates() {
        // X[n] -- X[n+5] holds for the first two cycles only, through ground edges.
        let p = parse_presentation(
            "host family X index nat\nhost edge X[i] -- X[i+1]\nhost edge X[0] -- X[5]\nhost edge X[10] -- X[15]\n",
        )
        .unwrap();
        let s = RaySpec::parse("ray B period X[n] X[n+5] X[n+6] X[n+7] X[n+8] X[n+9] start 0 step 10").unwrap();
        let e = validate_ray(&p, &s).unwrap_err();
        assert!(matches!(e, RayError::NotAdjacent { .. }), "{e}");
    }
}
