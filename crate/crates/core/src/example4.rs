//! The built-in golden scenario: a path on `X`, one pendant `y` per edge and
//! uncountably many `z` vertices each joined to `x1`, `x2`, `x3`.

use std::collections::BTreeSet;

use crate::address::{fmt_set, ComponentId, Vertex};
use crate::adhesion::Side;
use crate::parse::parse_presentation;
use crate::projection::project_ray;
use crate::ray::RaySpec;
use crate::report::Report;
use crate::separation::{
    path_string, pitz_x, s_modification, separates_at_depths, Arena, Grid, Modification, Targets,
};
use crate::torso::torso_of;

pub const PRESENTATION: &str = "\
host family X index nat
host edge X[i] -- X[i+1]
component Y indexed
  inner y
  attach y -- X[i]
  attach y -- X[i+1]
component Z replicated aleph1
  inner z
  attach z -- X[1]
  attach z -- X[2]
  attach z -- X[3]
";

pub const RAY_S: &str = "ray S prefix X[2] Z#0.z X[3] period Y@n.y X[n+1] start 3";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assertion {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example4Report {
    pub assertions: Vec<Assertion>,
}

impl Example4Report {
    pub fn all_passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn first_failure(&self) -> Option<&Assertion> {
        self.assertions.iter().find(|a| !a.passed)
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        for (k, a) in self.assertions.iter().enumerate() {
            r.push(format!("{}.{}", k + 1, a.name), format!("{} {}", if a.passed { "PASS" } else { "FAIL" }, a.detail));
        }
        r.push("result", if self.all_passed() { "PASS" } else { "FAIL" });
        r
    }
}

fn h(i: u64) -> Vertex {
    Vertex::host("X", i)
}

/// Runs the six golden assertions. With `Modification::X` the last one uses
/// the plain `X` instead of `F_S`, and fails.
pub fn run_example4(grid: &Grid, modification: Modification) -> Example4Report {
    let p = parse_presentation(PRESENTATION).expect("built-in presentation parses");
    let t = torso_of(&p);
    let s = RaySpec::parse(RAY_S).expect("built-in ray parses");
    let u = BTreeSet::from([h(0)]);
    let f = BTreeSet::from([h(2), h(3)]);
    let mut out = Vec::new();

    let horizon = p.adhesion_window() + grid.max_depth();
    let ys_prime = (0..horizon).all(|i| t.classes.side_of(&ComponentId::indexed("Y", i)) == Side::Prime);
    let zs_dp = (0..horizon).all(|k| t.classes.side_of(&ComponentId::replicate("Z", k)) == Side::DoublePrime);
    let dp_sets: Vec<String> = t.classes.double_prime_sets().map(fmt_set).collect();
    out.push(Assertion {
        name: "classification",
        passed: ys_prime && zs_dp && dp_sets == ["{X[1], X[2], X[3]}"],
        detail: format!("Y-copies prime={ys_prime} Z-copies double-prime={zs_dp} A''={}", dp_sets.join(" ")),
    });

    let edge = t.adjacent(&h(1), &h(3));
    out.push(Assertion { name: "torso-edge-x1-x3", passed: edge, detail: format!("adjacent={edge}") });

    let proj = project_ray(&t, &s);
    let expected = vec![h(2), h(3), Vertex::contracted(ComponentId::indexed("Y", 3)), h(4), Vertex::contracted(ComponentId::indexed("Y", 4))];
    let got = proj.as_ref().map(|q| q.sample(5)).unwrap_or_default();
    out.push(Assertion {
        name: "projection",
        passed: got == expected,
        detail: match &proj {
            Ok(_) => format!("S'=({}, ...)", path_string(&got)),
            Err(e) => e.to_string(),
        },
    });

    let hyp = proj.as_ref().ok().map(|q| separates_at_depths(Arena::K(&t), &f, &u, Targets::Projection(q), grid));
    out.push(match hyp {
        Some(Ok(c)) => Assertion { name: "F-separates-in-K", passed: c.is_separated(), detail: c.to_string() },
        Some(Err(e)) => Assertion { name: "F-separates-in-K", passed: false, detail: e.to_string() },
        None => Assertion { name: "F-separates-in-K", passed: false, detail: "no projection".into() },
    });

    let x = pitz_x(&t, &f);
    let ray = Targets::Ray { seq: &s.seq, from: 0 };
    let witness = [h(0), h(1), Vertex::inner(ComponentId::replicate("Z", 0), "z")];
    out.push(match separates_at_depths(Arena::G(&t), &x, &u, ray, grid) {
        Ok(c) => Assertion {
            name: "X-fails",
            passed: x == f && c.witness() == Some(&witness[..]),
            detail: format!("X={} {c}", fmt_set(&x)),
        },
        Err(e) => Assertion { name: "X-fails", passed: false, detail: e.to_string() },
    });

    let (name, sep) = match modification {
        Modification::FS => ("F_S-separates", s_modification(&t, &s, &f)),
        Modification::X => ("X-separates", Ok(x)),
    };
    out.push(match sep.and_then(|sep| Ok((separates_at_depths(Arena::G(&t), &sep, &u, ray, grid)?, sep))) {
        Ok((c, sep)) => {
            let exact = modification == Modification::X || sep == BTreeSet::from([h(1), h(2), h(3)]);
            Assertion { name, passed: exact && c.is_separated(), detail: format!("separator={} {c}", fmt_set(&sep)) }
        }
        Err(e) => Assertion { name, passed: false, detail: e.to_string() },
    });

    Example4Report { assertions: out }
}
