//! Minimum vertex separators by vertex-split maximum flow.
//!
//! Every vertex, sources and targets included, gets capacity 1. The returned
//! cut is the minimum cut closest to the targets, which is unique, so the
//! result does not depend on augmentation order.

use std::collections::{BTreeSet, VecDeque};
use std::hash::Hash;

use crate::graph::FiniteGraph;

const INF: u32 = u32::MAX;

struct Network {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network { head: vec![Vec::new(); nodes], to: Vec::new(), cap: Vec::new() }
    }

    fn add(&mut self, a: usize, b: usize, c: u32) {
        self.head[a].push(self.to.len());
        self.to.push(b);
        self.cap.push(c);
        self.head[b].push(self.to.len());
        self.to.push(a);
        self.cap.push(0);
    }

    /// One shortest augmenting path; returns false when none is left.
    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut via: Vec<Option<usize>> = vec![None; self.head.len()];
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &e in &self.head[x] {
                let y = self.to[e];
                if !seen[y] && self.cap[e] > 0 {
                    seen[y] = true;
                    via[y] = Some(e);
                    queue.push_back(y);
                }
            }
        }
        if !seen[t] {
            return false;
        }
        // Unit split edges bound every path's capacity by 1.
        let mut x = t;
        while let Some(e) = via[x] {
            if self.cap[e] != INF {
                self.cap[e] -= 1;
            }
            if self.cap[e ^ 1] != INF {
                self.cap[e ^ 1] += 1;
            }
            x = self.to[e ^ 1];
        }
        true
    }

    /// Nodes that can still reach `t` in the residual network.
    fn reaching(&self, t: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[t] = true;
        let mut queue = VecDeque::from([t]);
        while let Some(y) = queue.pop_front() {
            for &e in &self.head[y] {
                // e runs y -> x; its partner e^1 runs x -> y.
                let x = self.to[e];
                if !seen[x] && self.cap[e ^ 1] > 0 {
                    seen[x] = true;
                    queue.push_back(x);
                }
            }
        }
        seen
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCut<V> {
    pub separator: BTreeSet<V>,
    pub flow: usize,
}

/// A minimum set of vertices meeting every path from `sources` to `targets`.
/// Labels missing from `g` are ignored.
pub fn min_vertex_separator<V: Ord + Clone + Hash>(
    g: &FiniteGraph<V>,
    sources: &BTreeSet<V>,
    targets: &BTreeSet<V>,
) -> MinCut<V> {
    let n = g.vertex_count();
    let (s, t) = (2 * n, 2 * n + 1);
    let mut net = Network::new(2 * n + 2);
    for x in 0..n {
        net.add(2 * x, 2 * x + 1, 1);
        for &y in g.neighbors(x) {
            net.add(2 * x + 1, 2 * y, INF);
        }
    }
    for u in sources.iter().filter_map(|v| g.id(v)) {
        net.add(s, 2 * u, INF);
    }
    for w in targets.iter().filter_map(|v| g.id(v)) {
        net.add(2 * w + 1, t, INF);
    }
    let mut flow = 0;
    while net.augment(s, t) {
        flow += 1;
    }
    let near_sink = net.reaching(t);
    let separator: BTreeSet<V> =
        (0..n).filter(|&x| !near_sink[2 * x] && near_sink[2 * x + 1]).map(|x| g.vertex(x).clone()).collect();
    debug_assert_eq!(separator.len(), flow);
    MinCut { separator, flow }
}
