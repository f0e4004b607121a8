//! Graphs, structures (a graph with partial labels and colors), component
//! decomposition, and the pinned small-component isomorphism search.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::error::Error;

/// A finite simple undirected graph over dense vertex ids `0..n`.
///
/// Neighbor sets are kept sorted so every iteration order is deterministic;
/// kernel reproducibility depends on that.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n],
        }
    }

    /// Builds a graph from an explicit edge list, rejecting self-loops,
    /// duplicates, and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, Error> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if !g.add_edge(u, v)? {
                let (a, b) = (u.min(v), u.max(v));
                return Err(Error::DuplicateEdge(a, b));
            }
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 1..n {
            g.add_edge(u - 1, u).unwrap();
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.add_edge(n - 1, 0).unwrap();
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Adds an edge; returns `false` if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool, Error> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let added = self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(added)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].contains(&v)
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    fn check_vertex(&self, v: usize) -> Result<(), Error> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                n: self.n(),
            })
        }
    }

    fn check_vertex_set(&self, s: &BTreeSet<usize>) -> Result<(), Error> {
        for &v in s {
            self.check_vertex(v)?;
        }
        Ok(())
    }

    /// Connected components of the graph after removing the vertex set `s`,
    /// ordered by their minimum vertex id.
    pub fn components_after_removal(&self, s: &BTreeSet<usize>) -> Result<Vec<Component>, Error> {
        self.check_vertex_set(s)?;
        let n = self.n();
        let mut blocked = vec![false; n];
        for &v in s {
            blocked[v] = true;
        }
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = Vec::new();
        for start in 0..n {
            if blocked[start] || seen[start] {
                continue;
            }
            let mut members = Vec::new();
            seen[start] = true;
            queue.push(start);
            while let Some(v) = queue.pop() {
                members.push(v);
                for &w in &self.adj[v] {
                    if !blocked[w] && !seen[w] {
                        seen[w] = true;
                        queue.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(Component { vertices: members });
        }
        Ok(out)
    }

    /// Size of the largest component of the graph after removing `s`;
    /// zero when nothing is left.
    pub fn max_component_size_after_removal(&self, s: &BTreeSet<usize>) -> Result<usize, Error> {
        Ok(self
            .components_after_removal(s)?
            .iter()
            .map(|c| c.len())
            .max()
            .unwrap_or(0))
    }

    /// Induced subgraph on the vertices outside `c`, with ids compacted.
    /// The returned vector maps new ids to the original ids, in order.
    pub fn delete_vertices(&self, c: &BTreeSet<usize>) -> Result<(Graph, Vec<usize>), Error> {
        self.check_vertex_set(c)?;
        let kept: Vec<usize> = (0..self.n()).filter(|v| !c.contains(v)).collect();
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &old) in kept.iter().enumerate() {
            new_id[old] = i;
        }
        let mut g = Graph::empty(kept.len());
        for (i, &old) in kept.iter().enumerate() {
            for &w in &self.adj[old] {
                if w > old && !c.contains(&w) {
                    g.add_edge(i, new_id[w]).unwrap();
                }
            }
        }
        Ok((g, kept))
    }

    /// Relabels vertices through the bijection `pi`: edge `(u, v)` maps to
    /// `(pi[u], pi[v])`.
    pub fn apply_permutation(&self, pi: &[usize]) -> Result<Graph, Error> {
        let n = self.n();
        if pi.len() != n {
            return Err(Error::NotBijection { n });
        }
        let mut seen = vec![false; n];
        for &v in pi {
            if v >= n || seen[v] {
                return Err(Error::NotBijection { n });
            }
            seen[v] = true;
        }
        let mut g = Graph::empty(n);
        for u in 0..n {
            for &v in &self.adj[u] {
                if u < v {
                    g.add_edge(pi[u], pi[v]).unwrap();
                }
            }
        }
        Ok(g)
    }
}

/// One connected component of `G \ S`, as a sorted vertex-id list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    vertices: Vec<usize>,
}

impl Component {
    /// Wraps an explicit vertex list; used by tests that pick components by hand.
    pub fn from_vertices(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Component { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn min_vertex(&self) -> usize {
        self.vertices[0]
    }
}

/// Searches for a bijection from `c1` to `c2` that preserves edges inside
/// the component and preserves every vertex's neighborhood in `s` exactly,
/// i.e. the two components have the same type relative to the separator.
///
/// The search is exhaustive over all orderings; components are assumed
/// small. Returns the first mapping found (pairs `(from, to)` in `c1`
/// order) or `None`.
pub fn type_isomorphic(
    g: &Graph,
    s: &BTreeSet<usize>,
    c1: &Component,
    c2: &Component,
) -> Result<Option<Vec<(usize, usize)>>, Error> {
    if c1.vertices().iter().any(|v| c2.contains(*v)) {
        return Err(Error::OverlappingComponents);
    }
    if c1.len() != c2.len() {
        return Ok(None);
    }
    let s_nbrs = |v: usize| -> BTreeSet<usize> { g.neighbors(v).intersection(s).copied().collect() };
    let a = c1.vertices();
    let s1: Vec<BTreeSet<usize>> = a.iter().map(|&v| s_nbrs(v)).collect();
    for perm in c2.vertices().iter().copied().permutations(c2.len()) {
        let s_match = (0..a.len()).all(|i| s1[i] == s_nbrs(perm[i]));
        if !s_match {
            continue;
        }
        let edges_match = (0..a.len()).all(|i| {
            (i + 1..a.len()).all(|j| g.has_edge(a[i], a[j]) == g.has_edge(perm[i], perm[j]))
        });
        if edges_match {
            return Ok(Some(a.iter().copied().zip(perm).collect()));
        }
    }
    Ok(None)
}

/// A graph together with a partial labeling of vertex constants and a
/// partial coloring of set constants. Both maps may be empty, which is the
/// plain-graph case used for sentences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    graph: Graph,
    labeling: BTreeMap<u32, usize>,
    coloring: BTreeMap<u32, BTreeSet<usize>>,
}

impl Structure {
    pub fn new(graph: Graph) -> Self {
        Structure {
            graph,
            labeling: BTreeMap::new(),
            coloring: BTreeMap::new(),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn set_label(&mut self, constant: u32, vertex: usize) -> Result<(), Error> {
        if vertex >= self.graph.n() {
            return Err(Error::InvalidVertex {
                vertex,
                n: self.graph.n(),
            });
        }
        self.labeling.insert(constant, vertex);
        Ok(())
    }

    pub fn set_color(&mut self, constant: u32, vertices: BTreeSet<usize>) -> Result<(), Error> {
        for &v in &vertices {
            if v >= self.graph.n() {
                return Err(Error::InvalidVertex {
                    vertex: v,
                    n: self.graph.n(),
                });
            }
        }
        self.coloring.insert(constant, vertices);
        Ok(())
    }

    pub fn label(&self, constant: u32) -> Option<usize> {
        self.labeling.get(&constant).copied()
    }

    pub fn color(&self, constant: u32) -> Option<&BTreeSet<usize>> {
        self.coloring.get(&constant)
    }

    pub fn labeling(&self) -> &BTreeMap<u32, usize> {
        &self.labeling
    }

    pub fn coloring(&self) -> &BTreeMap<u32, BTreeSet<usize>> {
        &self.coloring
    }
}
