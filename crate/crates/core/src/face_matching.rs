//! Phase 2: pair up pendant owners that share a face and merge their
//! pendants (Rule 8), as many times as a maximum matching allows.
//!
//! The auxiliary graph joins two pendant owners when some face of the
//! embedding contains both. A maximum matching of it is then rematched face by
//! face: the matched owners of one face are paired consecutively in the face's
//! walk order, so the new 2-vertices can all be drawn inside their faces
//! without crossings.

use std::collections::{BTreeMap, BTreeSet};

use crate::embedding::{embed, EmbedError, Embedding};
use crate::graph::{Graph, VertexId};
use crate::matching::{maximum_matching, Matching};
use crate::reductions::{apply_rule, ReductionStep, Site};

/// Pendant owners of `g` mapped to their (smallest) pendant neighbor.
/// Vertices that are themselves pendants are not owners.
pub fn pendant_owners(g: &Graph) -> BTreeMap<VertexId, VertexId> {
    g.vertices()
        .filter(|&v| g.degree(v) >= 2)
        .filter_map(|v| g.pendant_neighbors(v).into_iter().next().map(|p| (v, p)))
        .collect()
}

#[derive(Debug, Clone)]
pub struct AuxGraph {
    /// On the pendant owners of the host, with the host's ids.
    pub graph: Graph,
}

impl AuxGraph {
    pub fn owners(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.graph.vertices()
    }
}

pub fn build_aux_graph(g1: &Graph, emb: &Embedding) -> AuxGraph {
    let owners = pendant_owners(g1);
    let mut graph = Graph::on_vertices(owners.keys().copied());
    for face in emb.faces() {
        let on_face: Vec<VertexId> = face
            .incident_vertices
            .iter()
            .copied()
            .filter(|v| owners.contains_key(v))
            .collect();
        for (i, &a) in on_face.iter().enumerate() {
            for &b in &on_face[i + 1..] {
                graph.add_edge(a, b).expect("owners are distinct vertices");
            }
        }
    }
    AuxGraph { graph }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacePair {
    pub u: VertexId,
    pub v: VertexId,
    pub face: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PlanarizedMatching {
    pub pairs: Vec<FacePair>,
}

impl PlanarizedMatching {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Distributes the edges of `m0` over faces (each edge goes to the first
/// face containing both endpoints) and re-pairs the matched vertices of each
/// face consecutively in walk order.
pub fn planarize_matching(m0: &Matching, emb: &Embedding) -> PlanarizedMatching {
    let mut pool: BTreeSet<(VertexId, VertexId)> = m0.edges().collect();
    let mut pairs = Vec::new();
    for (fi, face) in emb.faces().iter().enumerate() {
        if pool.is_empty() {
            break;
        }
        let order: BTreeMap<VertexId, usize> = face
            .incident_vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let here: Vec<(VertexId, VertexId)> = pool
            .iter()
            .copied()
            .filter(|(a, b)| order.contains_key(a) && order.contains_key(b))
            .collect();
        if here.is_empty() {
            continue;
        }
        let mut matched: Vec<VertexId> = Vec::with_capacity(2 * here.len());
        for e in &here {
            pool.remove(e);
            matched.extend([e.0, e.1]);
        }
        matched.sort_by_key(|v| order[v]);
        for chunk in matched.chunks(2) {
            pairs.push(FacePair {
                u: chunk[0],
                v: chunk[1],
                face: fi,
            });
        }
    }
    assert!(pool.is_empty(), "matching edge with no common face");
    PlanarizedMatching { pairs }
}

#[derive(Debug, Clone)]
pub struct Phase2Output {
    pub graph: Graph,
    pub steps: Vec<ReductionStep>,
    /// Size of the maximum matching of the auxiliary graph.
    pub matching_size: usize,
    pub planarized: PlanarizedMatching,
}

/// Runs Phase 2 on a Phase-1 fixpoint. The budget is unchanged by Rule 8.
pub fn run_phase2(g1: Graph) -> Result<Phase2Output, EmbedError> {
    if g1.is_empty() {
        return Ok(Phase2Output {
            graph: g1,
            steps: Vec::new(),
            matching_size: 0,
            planarized: PlanarizedMatching::default(),
        });
    }
    let emb = embed(&g1)?;
    let aux = build_aux_graph(&g1, &emb);
    let m0 = maximum_matching(&aux.graph);
    let planarized = planarize_matching(&m0, &emb);
    assert_eq!(planarized.len(), m0.len());

    let owners = pendant_owners(&g1);
    let mut graph = g1;
    let mut steps = Vec::with_capacity(planarized.len());
    for pair in &planarized.pairs {
        let site = Site::R8 {
            u: pair.u,
            v: pair.v,
            xu: owners[&pair.u],
            xv: owners[&pair.v],
        };
        assert!(
            !graph.has_edge(pair.u, pair.v),
            "co-facial owners {} and {} are adjacent",
            pair.u,
            pair.v
        );
        let step = apply_rule(&mut graph, &site).expect("owners keep their pendants until paired");
        debug_assert!(!graph.is_cut_vertex(step.created[0]).unwrap_or(true));
        steps.push(step);
    }
    Ok(Phase2Output {
        graph,
        steps,
        matching_size: m0.len(),
        planarized,
    })
}
