//! Exact Connected Vertex Cover by branch and bound.
//!
//! The search grows a connected set from a root vertex. Each step picks a
//! vertex on the frontier of the current set and branches on taking it or
//! excluding it; an excluded vertex forces all its neighbors into the cover.
//! Pruning uses the budget, a matching lower bound on still-uncovered edges,
//! and reachability of every forced vertex avoiding excluded ones.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{Graph, VertexId};

/// Largest component the bitmask search accepts.
pub const MAX_ORACLE_VERTICES: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("instance with {0} vertices in its edge component is too large for the exact solver")]
    TooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCertificate {
    pub vertices: BTreeSet<VertexId>,
}

impl CoverCertificate {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

/// Every edge has an endpoint in `s` and `g[s]` is connected. The empty set
/// is accepted exactly when `g` has no edges.
pub fn verify_cvc(g: &Graph, s: &BTreeSet<VertexId>) -> Result<bool, OracleError> {
    if let Some(&v) = s.iter().find(|&&v| !g.contains(v)) {
        return Err(OracleError::UnknownVertex(v));
    }
    let covers = g.edges().all(|(u, v)| s.contains(&u) || s.contains(&v));
    Ok(covers && g.induces_connected(s))
}

/// Whether a connected vertex cover of size at most `k` exists.
pub fn decide_cvc(g: &Graph, k: usize) -> Result<bool, OracleError> {
    Ok(minimum_cvc(g, k)?.is_some())
}

/// A minimum connected vertex cover if one of size at most `limit` exists.
/// Isolated vertices are ignored; two or more components with edges admit
/// no connected cover at all.
pub fn minimum_cvc(g: &Graph, limit: usize) -> Result<Option<CoverCertificate>, OracleError> {
    let edge_comps: Vec<Vec<VertexId>> = g.components().into_iter().filter(|c| c.len() >= 2).collect();
    let comp = match edge_comps.len() {
        0 => {
            return Ok(Some(CoverCertificate {
                vertices: BTreeSet::new(),
            }))
        }
        1 => &edge_comps[0],
        _ => return Ok(None),
    };
    if comp.len() > MAX_ORACLE_VERTICES {
        return Err(OracleError::TooLarge(comp.len()));
    }
    if comp.len() == 2 {
        return Ok((limit >= 1).then(|| CoverCertificate {
            vertices: BTreeSet::from([comp[0]]),
        }));
    }

    let index = |v: &VertexId| comp.binary_search(v).unwrap();
    let adj: Vec<u128> = comp
        .iter()
        .map(|&v| g.neighbors(v).iter().fold(0u128, |m, w| m | bit(index(w))))
        .collect();

    let mut search = Search {
        adj: &adj,
        best_size: limit + 1,
        best: None,
    };
    let n = comp.len();
    let mut required = 0u128;
    let mut out = 0u128;
    for (v, &nb) in adj.iter().enumerate() {
        if nb.count_ones() == 1 {
            out |= bit(v);
            required |= nb;
        }
    }
    if required != 0 {
        let root = required.trailing_zeros() as usize;
        search.run(bit(root), required, out);
    } else {
        let r = (0..n)
            .max_by_key(|&v| (adj[v].count_ones(), std::cmp::Reverse(v)))
            .unwrap();
        search.run(bit(r), 0, 0);
        let root = adj[r].trailing_zeros() as usize;
        search.run(bit(root), adj[r], bit(r));
    }

    Ok(search.best.map(|mask| CoverCertificate {
        vertices: (0..n).filter(|&i| mask & bit(i) != 0).map(|i| comp[i]).collect(),
    }))
}

#[inline]
fn bit(i: usize) -> u128 {
    1u128 << i
}

struct Search<'a> {
    adj: &'a [u128],
    best_size: usize,
    best: Option<u128>,
}

impl Search<'_> {
    fn all(&self) -> u128 {
        let n = self.adj.len();
        if n == 128 {
            u128::MAX
        } else {
            bit(n) - 1
        }
    }

    fn neighborhood(&self, set: u128) -> u128 {
        let mut m = 0;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            m |= self.adj[v];
        }
        m
    }

    /// Greedy matching on edges with no endpoint in `covered`.
    fn matching_bound(&self, covered: u128) -> usize {
        let mut free = self.all() & !covered;
        let mut size = 0;
        while free != 0 {
            let v = free.trailing_zeros() as usize;
            free &= !bit(v);
            let cand = self.adj[v] & free;
            if cand != 0 {
                free &= !bit(cand.trailing_zeros() as usize);
                size += 1;
            }
        }
        size
    }

    /// Vertices reachable from `from` without entering `blocked`.
    fn reach(&self, from: u128, blocked: u128) -> u128 {
        let mut seen = from;
        let mut layer = from;
        while layer != 0 {
            let next = self.neighborhood(layer) & !blocked & !seen;
            seen |= next;
            layer = next;
        }
        seen
    }

    fn run(&mut self, set: u128, required: u128, out: u128) {
        if set & out != 0 || required & out != 0 {
            return;
        }
        let covered = set | required;
        let lower = covered.count_ones() as usize + self.matching_bound(covered);
        if lower >= self.best_size {
            return;
        }
        let uncovered_exists = self.matching_bound(covered) > 0;
        if !uncovered_exists && required & !set == 0 {
            self.best_size = set.count_ones() as usize;
            self.best = Some(set);
            return;
        }
        if self.reach(set, out) & required != required {
            return;
        }
        let frontier = self.neighborhood(set) & !set & !out;
        if frontier == 0 {
            return;
        }
        let forced = frontier & required;
        if forced != 0 {
            let f = forced.trailing_zeros() as usize;
            self.run(set | bit(f), required, out);
            return;
        }
        let mut pick = None;
        let mut best_gain = 0;
        let mut rest = frontier;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let gain = (self.adj[v] & !covered).count_ones() as usize + 1;
            if gain > best_gain {
                best_gain = gain;
                pick = Some(v);
            }
        }
        let f = pick.expect("frontier is non-empty");
        self.run(set | bit(f), required, out);
        if self.adj[f] & out == 0 {
            self.run(set, required | self.adj[f], out | bit(f));
        }
    }
}
