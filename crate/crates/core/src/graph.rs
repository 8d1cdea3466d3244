//! Finite simple graphs over ordered vertex labels.
//!
//! Vertex ids follow the label order, so every traversal below visits
//! vertices and neighbors in canonical order.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::Hash;

#[derive(Debug, Clone)]
pub struct FiniteGraph<V> {
    vertices: Vec<V>,
    ids: HashMap<V, usize>,
    adj: Vec<Vec<usize>>,
}

impl<V: PartialEq> PartialEq for FiniteGraph<V> {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.adj == other.adj
    }
}

impl<V: Eq> Eq for FiniteGraph<V> {}

impl<V: Ord + Clone + Hash> FiniteGraph<V> {
    /// Builds a graph from labels and edges. Loops are dropped, parallel edges
    /// merged. Edges touching unknown labels are ignored.
    pub fn new(vertices: impl IntoIterator<Item = V>, edges: impl IntoIterator<Item = (V, V)>) -> Self {
        let set: BTreeSet<V> = vertices.into_iter().collect();
        let vertices: Vec<V> = set.into_iter().collect();
        let ids: HashMap<V, usize> = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let mut adj = vec![Vec::new(); vertices.len()];
        for (a, b) in edges {
            let (Some(&x), Some(&y)) = (ids.get(&a), ids.get(&b)) else { continue };
            if x != y {
                adj[x].push(y);
                adj[y].push(x);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        FiniteGraph { vertices, ids, adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> &[V] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &V {
        &self.vertices[id]
    }

    pub fn id(&self, v: &V) -> Option<usize> {
        self.ids.get(v).copied()
    }

    pub fn contains(&self, v: &V) -> bool {
        self.ids.contains_key(v)
    }

    pub fn neighbors(&self, id: usize) -> &[usize] {
        &self.adj[id]
    }

    pub fn neighbors_of(&self, v: &V) -> BTreeSet<V> {
        self.id(v)
            .map(|id| self.adj[id].iter().map(|&w| self.vertices[w].clone()).collect())
            .unwrap_or_default()
    }

    pub fn adjacent(&self, a: &V, b: &V) -> bool {
        match (self.id(a), self.id(b)) {
            (Some(x), Some(y)) => self.adj[x].binary_search(&y).is_ok(),
            _ => false,
        }
    }

    /// Edges `(a, b)` with `a < b`, in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (&V, &V)> + '_ {
        self.adj.iter().enumerate().flat_map(move |(x, list)| {
            list.iter().filter(move |&&y| x < y).map(move |&y| (&self.vertices[x], &self.vertices[y]))
        })
    }

    pub fn edge_set(&self) -> BTreeSet<(V, V)> {
        self.edges().map(|(a, b)| (a.clone(), b.clone())).collect()
    }

    /// Whether `self` is the subgraph of `other` induced by `self`'s vertices.
    pub fn is_induced_subgraph_of(&self, other: &FiniteGraph<V>) -> bool {
        if !self.vertices.iter().all(|v| other.contains(v)) {
            return false;
        }
        let induced = other.induced(self.vertices.iter().cloned());
        induced.edge_set() == self.edge_set()
    }

    pub fn induced(&self, keep: impl IntoIterator<Item = V>) -> FiniteGraph<V> {
        let keep: BTreeSet<V> = keep.into_iter().filter(|v| self.contains(v)).collect();
        let edges: Vec<(V, V)> = self
            .edges()
            .filter(|(a, b)| keep.contains(*a) && keep.contains(*b))
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect();
        FiniteGraph::new(keep, edges)
    }

    /// Relabels vertices through `f`, merging labels that collide and
    /// dropping edges that become loops.
    pub fn map<W: Ord + Clone + Hash>(&self, mut f: impl FnMut(&V) -> W) -> FiniteGraph<W> {
        let labels: Vec<W> = self.vertices.iter().map(&mut f).collect();
        let edges: Vec<(W, W)> = self.edges_by_id().map(|(x, y)| (labels[x].clone(), labels[y].clone())).collect();
        FiniteGraph::new(labels, edges)
    }

    fn edges_by_id(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(x, list)| list.iter().filter(move |&&y| x < y).map(move |&y| (x, y)))
    }

    /// Connected components of the graph minus `removed`, each sorted.
    pub fn components_avoiding(&self, removed: &BTreeSet<V>) -> Vec<Vec<usize>> {
        let blocked: Vec<bool> = self.vertices.iter().map(|v| removed.contains(v)).collect();
        let mut seen = blocked.clone();
        let mut out = Vec::new();
        for root in 0..self.vertices.len() {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut comp = vec![root];
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components_avoiding(&BTreeSet::new()).len() <= 1
    }

    /// Multi-source BFS that never enters `blocked` vertices. Returns the
    /// shortest path (as ids) from a source to the first target reached;
    /// ties go to the canonically smallest source and neighbor.
    pub fn bfs_path(&self, sources: &[usize], blocked: &[bool], is_target: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
        let mut parent: Vec<Option<usize>> = vec![None; self.vertices.len()];
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::new();
        let mut sorted: Vec<usize> = sources.iter().copied().filter(|&s| !blocked[s]).collect();
        sorted.sort_unstable();
        sorted.dedup();
        for s in sorted {
            seen[s] = true;
            queue.push_back(s);
        }
        while let Some(x) = queue.pop_front() {
            if is_target(x) {
                let mut path = vec![x];
                let mut cur = x;
                while let Some(p) = parent[cur] {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for &y in &self.adj[x] {
                if !seen[y] && !blocked[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// Vertices reachable from `sources` without entering `blocked`.
    pub fn reachable(&self, sources: &[usize], blocked: &[bool]) -> Vec<usize> {
        let mut seen = vec![false; self.vertices.len()];
        let mut queue: VecDeque<usize> = sources.iter().copied().filter(|&s| !blocked[s]).collect();
        for &s in &queue {
            seen[s] = true;
        }
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if !seen[y] && !blocked[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.vertices.len()).filter(|&x| seen[x]).collect()
    }

    /// Whether consecutive labels are adjacent and no label repeats.
    pub fn is_path(&self, walk: &[V]) -> bool {
        let distinct: BTreeSet<&V> = walk.iter().collect();
        distinct.len() == walk.len()
            && walk.iter().all(|v| self.contains(v))
            && walk.windows(2).all(|w| self.adjacent(&w[0], &w[1]))
    }
}
