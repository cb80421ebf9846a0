//! Independent reference implementations and the shared test corpus.

#![allow(dead_code)]

use std::collections::BTreeSet;

use planar_cvc::generators::{gen_exception_graph, gen_random_planar};
use planar_cvc::{Graph, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Minimum connected vertex cover size by exhaustive subset search; `None`
/// when no connected cover exists. Only for small graphs.
pub fn brute_min_cvc(g: &Graph) -> Option<usize> {
    let vs: Vec<VertexId> = g.vertices().collect();
    let n = vs.len();
    assert!(n <= 20, "brute force on {n} vertices");
    if g.edge_count() == 0 {
        return Some(0);
    }
    let idx = |v: VertexId| vs.iter().position(|&w| w == v).unwrap();
    let edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (idx(u), idx(v))).collect();
    let mut adj = vec![0u32; n];
    for &(a, b) in &edges {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    let mut best = None;
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if best.is_some_and(|b| size >= b) {
            continue;
        }
        if !edges.iter().all(|&(a, b)| mask >> a & 1 == 1 || mask >> b & 1 == 1) {
            continue;
        }
        let mut seen = 1u32 << mask.trailing_zeros();
        loop {
            let mut grow = seen;
            for (i, &nb) in adj.iter().enumerate() {
                if seen >> i & 1 == 1 {
                    grow |= nb & mask;
                }
            }
            if grow == seen {
                break;
            }
            seen = grow;
        }
        if seen == mask {
            best = Some(size);
        }
    }
    best
}

/// Brute-force check of the connected vertex cover definition.
pub fn is_cvc(g: &Graph, s: &BTreeSet<VertexId>) -> bool {
    if !s.iter().all(|&v| g.contains(v)) {
        return false;
    }
    if !g.edges().all(|(u, v)| s.contains(&u) || s.contains(&v)) {
        return false;
    }
    let Some(&start) = s.iter().next() else {
        return g.edge_count() == 0;
    };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if s.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == s.len()
}

/// Maximum matching size by exhaustive branching on the lowest free vertex.
pub fn brute_max_matching(g: &Graph) -> usize {
    fn go(adj: &[Vec<usize>], free: &mut Vec<bool>, from: usize) -> usize {
        let Some(v) = (from..free.len()).find(|&i| free[i]) else {
            return 0;
        };
        free[v] = false;
        let mut best = go(adj, free, v + 1);
        for &w in &adj[v] {
            if free[w] {
                free[w] = false;
                best = best.max(1 + go(adj, free, v + 1));
                free[w] = true;
            }
        }
        free[v] = true;
        best
    }
    let vs: Vec<VertexId> = g.vertices().collect();
    let idx = |v: &VertexId| vs.iter().position(|w| w == v).unwrap();
    let adj: Vec<Vec<usize>> = vs.iter().map(|&v| g.neighbors(v).iter().map(idx).collect()).collect();
    go(&adj, &mut vec![true; vs.len()], 0)
}

pub const DENSITIES: [f64; 6] = [0.0, 0.3, 0.5, 0.7, 0.85, 1.0];

/// Seeded planar instances with at most 16 vertices, plus the exception graph.
pub fn small_planar_corpus(count: usize) -> Vec<Graph> {
    let mut out: Vec<Graph> = (0..count)
        .map(|i| {
            let n = 1 + i % 16;
            let d = DENSITIES[(i / 16) % DENSITIES.len()];
            gen_random_planar(n, d, 1000 + i as u64)
        })
        .collect();
    out.push(gen_exception_graph());
    out
}

/// Erdos-Renyi graph, not necessarily planar or connected.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            if rng.gen::<f64>() < p {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

pub fn complete(n: u32) -> Graph {
    let mut e = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            e.push((a, b));
        }
    }
    Graph::from_edges(n as usize, &e)
}

pub fn k33() -> Graph {
    let mut e = Vec::new();
    for a in 0..3 {
        for b in 3..6 {
            e.push((a, b));
        }
    }
    Graph::from_edges(6, &e)
}
