//! Graphviz export of truncations.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::address::Vertex;
use crate::graph::FiniteGraph;

/// Sets drawn with distinct styles: `F` boxed, `U` and targets coloured, the
/// witness path in bold green.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Highlights {
    pub f: BTreeSet<Vertex>,
    pub u: BTreeSet<Vertex>,
    pub targets: BTreeSet<Vertex>,
    pub path: Vec<Vertex>,
}

fn quote(v: &Vertex) -> String {
    format!("\"{v}\"")
}

pub fn export_dot(name: &str, g: &FiniteGraph<Vertex>, hl: &Highlights) -> String {
    let on_path: BTreeSet<&Vertex> = hl.path.iter().collect();
    let path_edges: BTreeSet<(&Vertex, &Vertex)> =
        hl.path.windows(2).map(|w| if w[0] <= w[1] { (&w[0], &w[1]) } else { (&w[1], &w[0]) }).collect();
    let mut out = String::new();
    let _ = writeln!(out, "graph \"{name}\" {{");
    let _ = writeln!(out, "  node [shape=circle, fontsize=10];");
    for v in g.vertices() {
        let mut attrs = Vec::new();
        if hl.f.contains(v) {
            attrs.push("shape=box, style=bold, color=blue".to_string());
        }
        if hl.u.contains(v) {
            attrs.push("style=filled, fillcolor=orange".to_string());
        } else if hl.targets.contains(v) {
            attrs.push("style=filled, fillcolor=lightpink".to_string());
        }
        if on_path.contains(v) {
            attrs.push("penwidth=2.5".to_string());
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  {};", quote(v));
        } else {
            let _ = writeln!(out, "  {} [{}];", quote(v), attrs.join(", "));
        }
    }
    for (a, b) in g.edges() {
        if path_edges.contains(&(a, b)) {
            let _ = writeln!(out, "  {} -- {} [color=green, penwidth=2.5];", quote(a), quote(b));
        } else {
            let _ = writeln!(out, "  {} -- {};", quote(a), quote(b));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example4::PRESENTATION;
    use crate::parse::parse_presentation;
    use crate::torso::torso_of;

    #[test]
    fn example4_torso_figure() {
        let t = torso_of(&parse_presentation(PRESENTATION).unwrap());
        let k = t.truncate(5, 1);
        let hl = Highlights { f: BTreeSet::from([Vertex::host("X", 2), Vertex::host("X", 3)]), ..Default::default() };
        let dot = export_dot("K", &k.graph, &hl);
        for i in 0..=5 {
            assert!(dot.contains(&format!("\"X[{i}]\"")));
        }
        for i in 0..5 {
            assert!(dot.contains(&format!("\"V[Y@{i}]\"")));
        }
        assert!(dot.contains("\"X[1]\" -- \"X[3]\";"));
        assert!(dot.contains("\"X[2]\" [shape=box"));
        assert_eq!(dot, export_dot("K", &k.graph, &hl));
    }

    #[test]
    fn plain_and_path() {
        let g = FiniteGraph::new(
            [Vertex::host("A", 0), Vertex::host("A", 1)],
            [(Vertex::host("A", 0), Vertex::host("A", 1))],
        );
        let plain = export_dot("G", &g, &Highlights::default());
        assert!(!plain.contains("color") && !plain.contains("box"));
        let hl = Highlights { path: vec![Vertex::host("A", 1), Vertex::host("A", 0)], ..Default::default() };
        assert!(export_dot("G", &g, &hl).contains("\"A[0]\" -- \"A[1]\" [color=green"));
    }
}
