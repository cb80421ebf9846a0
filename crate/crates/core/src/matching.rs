//! Maximum cardinality matching in general graphs (Edmonds' blossom
//! algorithm, O(V^3)).

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching {
    edges: BTreeSet<(VertexId, VertexId)>,
}

impl Matching {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `uv` (stored with the smaller id first). Does not check disjointness.
    pub fn insert(&mut self, u: VertexId, v: VertexId) {
        self.edges.insert(if u < v { (u, v) } else { (v, u) });
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn contains(&self, u: VertexId, v: VertexId) -> bool {
        let e = if u < v { (u, v) } else { (v, u) };
        self.edges.contains(&e)
    }

    /// Pairwise disjoint edges, all present in `g`.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut used = BTreeSet::new();
        self.edges
            .iter()
            .all(|&(u, v)| g.has_edge(u, v) && used.insert(u) && used.insert(v))
    }
}

pub fn maximum_matching(g: &Graph) -> Matching {
    let verts: Vec<VertexId> = g.vertices().collect();
    let index: HashMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj: Vec<Vec<usize>> = verts
        .iter()
        .map(|&v| g.neighbors(v).iter().map(|w| index[w]).collect())
        .collect();

    let mut blossom = Blossom::new(adj);
    blossom.run();

    let mut m = Matching::new();
    for (i, &mate) in blossom.mate.iter().enumerate() {
        if mate != NONE && i < mate {
            m.insert(verts[i], verts[mate]);
        }
    }
    debug_assert!(m.is_valid_in(g));
    m
}

/// `3 * |maximum matching| >= n_{>=3}`, where `n_{>=3}` counts vertices of
/// degree at least 3. Holds for every simple planar graph.
pub fn lemma3_bound_holds(g: &Graph) -> bool {
    let n3 = g.vertices().filter(|&v| g.degree(v) >= 3).count();
    3 * maximum_matching(g).len() >= n3
}

const NONE: usize = usize::MAX;

struct Blossom {
    adj: Vec<Vec<usize>>,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
}

impl Blossom {
    fn new(adj: Vec<Vec<usize>>) -> Self {
        let n = adj.len();
        Self {
            adj,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
        }
    }

    fn run(&mut self) {
        let n = self.adj.len();
        // Greedy warm start.
        for v in 0..n {
            if self.mate[v] == NONE {
                if let Some(&w) = self.adj[v].iter().find(|&&w| self.mate[w] == NONE) {
                    self.mate[v] = w;
                    self.mate[w] = v;
                }
            }
        }
        for root in 0..n {
            if self.mate[root] != NONE {
                continue;
            }
            let mut v = self.find_augmenting(root);
            while v != NONE {
                let pv = self.parent[v];
                let next = self.mate[pv];
                self.mate[v] = pv;
                self.mate[pv] = v;
                v = next;
            }
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Grows an alternating tree from `root`; returns the free vertex ending
    /// an augmenting path, or `NONE`.
    fn find_augmenting(&mut self, root: usize) -> usize {
        let n = self.adj.len();
        self.used.fill(false);
        self.parent.fill(NONE);
        for i in 0..n {
            self.base[i] = i;
        }
        self.used[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for i in 0..self.adj[v].len() {
                let to = self.adj[v][i];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.fill(false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for j in 0..n {
                        if self.in_blossom[self.base[j]] {
                            self.base[j] = cur;
                            if !self.used[j] {
                                self.used[j] = true;
                                queue.push_back(j);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return to;
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    queue.push_back(next);
                }
            }
        }
        NONE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(
            maximum_matching(&Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)])).len(),
            2
        );
        assert_eq!(
            maximum_matching(&Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)])).len(),
            1
        );
        assert_eq!(maximum_matching(&Graph::new()).len(), 0);
    }

    #[test]
    fn odd_cycle_with_tail_needs_blossom() {
        // Pentagon 0..4 with pendant 5 on 0 and pendant 6 on 2.
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (2, 6)]);
        let m = maximum_matching(&g);
        assert_eq!(m.len(), 3);
        assert!(m.is_valid_in(&g));
    }

    #[test]
    fn petersen_has_perfect_matching() {
        let g = Graph::from_edges(
            10,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 0),
                (0, 5),
                (1, 6),
                (2, 7),
                (3, 8),
                (4, 9),
                (5, 7),
                (7, 9),
                (9, 6),
                (6, 8),
                (8, 5),
            ],
        );
        assert_eq!(maximum_matching(&g).len(), 5);
    }

    #[test]
    fn matching_bound_examples() {
        assert!(lemma3_bound_holds(&Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)])));
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert!(lemma3_bound_holds(&k4));
    }
}
