//! Mutable simple undirected graph with stable vertex identifiers.
//!
//! Vertices are stored in a `BTreeMap`, so every enumeration (vertices,
//! neighbors, edges) runs in ascending id order. Ids are handed out by a
//! monotone counter and are never reused, which keeps journal records that
//! mention deleted vertices unambiguous.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} is not in the graph")]
    MissingVertex(VertexId),
    #[error("edge {0}-{1} is not in the graph")]
    MissingEdge(VertexId, VertexId),
    #[error("self-loop at {0} is not allowed")]
    SelfLoop(VertexId),
    #[error("operation requires a connected graph")]
    Disconnected,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
    edge_count: usize,
    next_id: u32,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with `n` isolated vertices `VertexId(0)..VertexId(n-1)`.
    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for _ in 0..n {
            g.add_vertex();
        }
        g
    }

    /// Builds a graph on `n` vertices from 0-based index pairs. Duplicate
    /// pairs are merged.
    ///
    /// Panics on a self-loop or an out-of-range index; intended for literals
    /// in tests and generators.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut g = Self::with_vertices(n);
        for &(a, b) in edges {
            g.add_edge(VertexId(a), VertexId(b)).expect("valid edge literal");
        }
        g
    }

    /// Edgeless graph on exactly the given ids; fresh ids start above the largest.
    pub fn on_vertices(ids: impl IntoIterator<Item = VertexId>) -> Self {
        let mut g = Self::new();
        for v in ids {
            g.adj.insert(v, BTreeSet::new());
            g.next_id = g.next_id.max(v.0 + 1);
        }
        g
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let id = VertexId(self.next_id);
        self.next_id += 1;
        self.adj.insert(id, BTreeSet::new());
        id
    }

    /// The id the next call to [`Graph::add_vertex`] will return.
    pub fn next_id(&self) -> VertexId {
        VertexId(self.next_id)
    }

    /// Inserts `uv`; returns `false` if it was already present.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.require(u)?;
        self.require(v)?;
        let fresh = self.adj.get_mut(&u).unwrap().insert(v);
        self.adj.get_mut(&v).unwrap().insert(u);
        if fresh {
            self.edge_count += 1;
        }
        Ok(fresh)
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if !self.has_edge(u, v) {
            return Err(GraphError::MissingEdge(u, v));
        }
        self.adj.get_mut(&u).unwrap().remove(&v);
        self.adj.get_mut(&v).unwrap().remove(&u);
        self.edge_count -= 1;
        Ok(())
    }

    /// Removes `v` and its incident edges, returning its former neighbors.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<BTreeSet<VertexId>, GraphError> {
        let nbrs = self.adj.remove(&v).ok_or(GraphError::MissingVertex(v))?;
        for w in &nbrs {
            self.adj.get_mut(w).unwrap().remove(&v);
        }
        self.edge_count -= nbrs.len();
        Ok(nbrs)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj.get(&u).is_some_and(|n| n.contains(&v))
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj.iter().flat_map(|(&u, n)| n.range(u..).map(move |&v| (u, v)))
    }

    /// Neighbors of `v` in ascending order. Panics if `v` is absent.
    pub fn neighbors(&self, v: VertexId) -> &BTreeSet<VertexId> {
        self.adj
            .get(&v)
            .unwrap_or_else(|| panic!("vertex {v} is not in the graph"))
    }

    /// Degree of `v`; 0 for an absent vertex.
    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn pendant_neighbors(&self, v: VertexId) -> BTreeSet<VertexId> {
        match self.adj.get(&v) {
            Some(n) => n.iter().copied().filter(|&w| self.degree(w) == 1).collect(),
            None => BTreeSet::new(),
        }
    }

    /// Replaces `a` and `b` by one fresh vertex adjacent to
    /// `(N(a) ∪ N(b)) \ {a, b}`. Parallel edges collapse and the `ab` edge,
    /// if any, disappears.
    pub fn merge_vertices(&mut self, a: VertexId, b: VertexId) -> Result<VertexId, GraphError> {
        self.require(a)?;
        self.require(b)?;
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        let mut nbrs = self.remove_vertex(a)?;
        nbrs.extend(self.remove_vertex(b)?);
        nbrs.remove(&a);
        nbrs.remove(&b);
        let c = self.add_vertex();
        for w in nbrs {
            self.add_edge(c, w)?;
        }
        self.debug_check();
        Ok(c)
    }

    pub fn contract_edge(&mut self, u: VertexId, w: VertexId) -> Result<VertexId, GraphError> {
        if !self.has_edge(u, w) {
            return Err(GraphError::MissingEdge(u, w));
        }
        self.merge_vertices(u, w)
    }

    /// Connected components in order of their smallest vertex; each is sorted.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        self.components_avoiding(&BTreeSet::new())
    }

    /// Components of the graph with `removed` deleted.
    pub fn components_avoiding(&self, removed: &BTreeSet<VertexId>) -> Vec<Vec<VertexId>> {
        let mut seen: BTreeSet<VertexId> = removed.clone();
        let mut out = Vec::new();
        for start in self.vertices() {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &y in self.neighbors(x) {
                    if seen.insert(y) {
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
        self.components().len() <= 1
    }

    pub fn is_cut_vertex(&self, v: VertexId) -> Result<bool, GraphError> {
        self.require(v)?;
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(self.components_avoiding(&BTreeSet::from([v])).len() > 1)
    }

    /// Whether the subgraph induced by `set` is connected (empty set counts
    /// as connected). Vertices of `set` outside the graph make it false.
    pub fn induces_connected(&self, set: &BTreeSet<VertexId>) -> bool {
        let Some(&start) = set.iter().next() else {
            return true;
        };
        if !set.iter().all(|&v| self.contains(v)) {
            return false;
        }
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in self.neighbors(x) {
                if set.contains(&y) && seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.len() == set.len()
    }

    /// Subgraph induced by `keep`, preserving ids and the id counter.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> Graph {
        let mut g = self.clone();
        let drop: Vec<_> = g.vertices().filter(|v| !keep.contains(v)).collect();
        for v in drop {
            g.remove_vertex(v).unwrap();
        }
        g
    }

    fn require(&self, v: VertexId) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::MissingVertex(v))
        }
    }

    /// Symmetric, loop-free adjacency with a consistent edge counter.
    pub fn check_invariants(&self) -> bool {
        let mut half = 0;
        for (&u, n) in &self.adj {
            if n.contains(&u) {
                return false;
            }
            for w in n {
                if !self.adj.get(w).is_some_and(|m| m.contains(&u)) {
                    return false;
                }
                if w.0 >= self.next_id {
                    return false;
                }
            }
            half += n.len();
        }
        half == 2 * self.edge_count
    }

    #[inline]
    fn debug_check(&self) {
        debug_assert!(self.check_invariants(), "graph invariants violated");
    }
}
