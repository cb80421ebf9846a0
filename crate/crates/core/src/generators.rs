//! Instance generators: the tight family G_l, the six-vertex exception graph,
//! and seeded random planar graphs.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::embedding::embed;
use crate::face_matching::{build_aux_graph, run_phase2};
use crate::graph::{Graph, VertexId};
use crate::oracle::{minimum_cvc, verify_cvc};
use crate::pipeline::{kernelize, lemma2_check, partition_stats, Instance, KernelOutcome};
use crate::reductions::detect_rule;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("the tight family needs l >= 3, got {0}")]
    TooFewCopies(usize),
}

/// Vertex roles inside one copy of the gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Role {
    /// Shared hub above the ring.
    S,
    /// Shared hub below the ring.
    T,
    /// Ring vertex of this copy; it is the `V` of the previous copy.
    U,
    /// Ring vertex of the next copy.
    V,
    X,
    Y,
    PU,
    PV,
    PX,
    PY,
    /// One of the six degree-3 fillers.
    F(u8),
}

/// Adjacency template of one gadget copy. Copies are glued by identifying
/// `S`, `T`, and `V`/`PV` of copy `i` with `U`/`PU` of copy `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetSpec {
    pub edges: Vec<(Role, Role)>,
}

impl GadgetSpec {
    pub fn standard() -> Self {
        use Role::*;
        let fillers = [[S, U, X], [S, X, V], [U, V, X], [T, U, Y], [T, Y, V], [U, V, Y]];
        let mut edges = vec![
            (S, U),
            (S, V),
            (S, X),
            (T, U),
            (T, V),
            (T, Y),
            (U, PU),
            (V, PV),
            (X, PX),
            (Y, PY),
        ];
        for (i, nbrs) in fillers.iter().enumerate() {
            edges.extend(nbrs.iter().map(|&r| (F(i as u8), r)));
        }
        Self { edges }
    }

    /// Number of filler roles in the template.
    pub fn filler_count(&self) -> u8 {
        self.edges
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .filter_map(|r| if let Role::F(i) = r { Some(i + 1) } else { None })
            .max()
            .unwrap_or(0)
    }
}

/// The tight family member G_l built from [`GadgetSpec::standard`].
pub fn gen_tightness(l: usize) -> Result<Graph, GenError> {
    gen_tightness_from(&GadgetSpec::standard(), l)
}

pub fn gen_tightness_from(spec: &GadgetSpec, l: usize) -> Result<Graph, GenError> {
    if l < 3 {
        return Err(GenError::TooFewCopies(l));
    }
    let mut g = Graph::new();
    let s = g.add_vertex();
    let t = g.add_vertex();
    let fillers = spec.filler_count();
    let mut ring = Vec::with_capacity(l);
    let mut own = Vec::with_capacity(l);
    for _ in 0..l {
        let w = g.add_vertex();
        let pw = g.add_vertex();
        ring.push((w, pw));
        let mut roles = BTreeMap::new();
        for r in [Role::X, Role::PX, Role::Y, Role::PY] {
            roles.insert(r, g.add_vertex());
        }
        for f in 0..fillers {
            roles.insert(Role::F(f), g.add_vertex());
        }
        own.push(roles);
    }
    for i in 0..l {
        let resolve = |r: Role| match r {
            Role::S => s,
            Role::T => t,
            Role::U => ring[i].0,
            Role::PU => ring[i].1,
            Role::V => ring[(i + 1) % l].0,
            Role::PV => ring[(i + 1) % l].1,
            other => own[i][&other],
        };
        for &(a, b) in &spec.edges {
            g.add_edge(resolve(a), resolve(b)).expect("template roles are distinct");
        }
    }
    Ok(g)
}

/// Cover vertices of a G_l recovered from degrees: every non-pendant vertex
/// of degree at least 4.
pub fn canonical_cover(g: &Graph) -> BTreeSet<VertexId> {
    g.vertices().filter(|&v| g.degree(v) >= 4).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TightnessReport {
    pub checks: Vec<Check>,
}

impl TightnessReport {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn expect_eq(&mut self, name: impl Into<String>, found: usize, want: usize) {
        self.push(name, found == want, format!("found {found}, expected {want}"));
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Checks the claimed properties of G_l on `g`. The exact minimum cover is
/// computed only for `l <= 4`.
pub fn validate_tightness(g: &Graph, l: usize) -> TightnessReport {
    validate_tightness_with(g, l, l <= 4)
}

pub fn validate_tightness_with(g: &Graph, l: usize, with_oracle: bool) -> TightnessReport {
    let mut r = TightnessReport::default();
    r.push("l >= 3", l >= 3, format!("l = {l}"));
    r.expect_eq("|V| = 12l+2", g.vertex_count(), 12 * l + 2);
    r.push("connected", g.is_connected(), "");
    let emb = embed(g);
    r.push("planar", emb.is_ok(), format!("{:?}", emb.as_ref().err()));
    let site = detect_rule(g);
    r.push("rules 1-7 inapplicable", site.is_none(), format!("{site:?}"));

    let cover = canonical_cover(g);
    let is_cover = verify_cvc(g, &cover).unwrap_or(false);
    r.push("canonical cover is a CVC", is_cover, "");
    r.expect_eq("|S| = 3l+2", cover.len(), 3 * l + 2);
    let part = partition_stats(g, &cover).ok();
    let size = |f: fn(&crate::pipeline::Partition) -> usize| part.as_ref().map_or(usize::MAX, f);
    r.expect_eq("|S1| = 3l", size(|p| p.s1.len()), 3 * l);
    r.expect_eq("|S>=3| = 2", size(|p| p.s_ge3.len()), 2);
    r.expect_eq("|I1| = 3l", size(|p| p.i1.len()), 3 * l);
    r.expect_eq("|I3| = 6l", size(|p| p.i3.len()), 6 * l);
    r.expect_eq("|I>=4| = 0", size(|p| p.i_ge4.len()), 0);
    r.expect_eq("no other independent vertices", size(|p| p.i_other.len()), 0);

    if let (Some(p), Ok(emb)) = (&part, &emb) {
        // x/y-type owners miss one of the two hubs; ring vertices see both.
        let side: BTreeSet<VertexId> =
            p.s1.iter()
                .copied()
                .filter(|&v| !p.s_ge3.iter().all(|h| g.has_edge(v, *h)))
                .collect();
        let aux = build_aux_graph(g, emb);
        let bad: Vec<_> = aux
            .graph
            .edges()
            .filter(|(a, b)| side.contains(a) && side.contains(b))
            .collect();
        r.push("no two x/y vertices co-facial", bad.is_empty(), format!("{bad:?}"));
        let lonely = side.iter().filter(|&&v| aux.graph.degree(v) == 0).count();
        r.expect_eq("every x/y vertex shares a face with a ring vertex", lonely, 0);
    }

    let phase2 = run_phase2(g.clone()).ok();
    let m_star = phase2.as_ref().map_or(0, |o| o.steps.len());
    r.push(
        "|M*| = l",
        phase2.is_some() && m_star == l,
        format!("found {m_star}, expected {l}"),
    );
    let kernel_n = match kernelize(&Instance::new(g.clone(), 3 * l + 2)) {
        Ok(KernelOutcome::Kernel { instance, .. }) => instance.graph.vertex_count(),
        _ => usize::MAX,
    };
    r.expect_eq("kernel has 11l+2 vertices", kernel_n, 11 * l + 2);

    if with_oracle {
        match minimum_cvc(g, 3 * l + 2) {
            Ok(Some(c)) => r.expect_eq("minimum CVC = 3l+2", c.size(), 3 * l + 2),
            other => r.push("minimum CVC = 3l+2", false, format!("{other:?}")),
        }
    }
    if let Ok(rep) = lemma2_check(g, &cover, m_star) {
        r.push(
            "|S>=3|+|I>=4|+|M*| = (|S|+4)/3",
            rep.tight,
            format!("lhs {}, |S| {}", rep.lhs, rep.cover_size),
        );
    } else {
        r.push("|S>=3|+|I>=4|+|M*| = (|S|+4)/3", false, "cover rejected");
    }
    r
}

/// Vertices, in id order: v, q, a, b, x, y.
pub fn gen_exception_graph() -> Graph {
    let (v, q, a, b, x, y) = (0, 1, 2, 3, 4, 5);
    Graph::from_edges(
        6,
        &[(v, q), (v, a), (v, b), (v, x), (v, y), (a, x), (a, y), (b, x), (b, y)],
    )
}

/// A connected planar graph on `n` vertices: a random stacked triangulation
/// with each non-bridge edge then dropped with probability `1 - density`.
pub fn gen_random_planar(n: usize, density: f64, seed: u64) -> Graph {
    assert!(n >= 1, "need at least one vertex");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::with_vertices(n);
    let id = |i: usize| VertexId(i as u32);
    if n == 2 {
        g.add_edge(id(0), id(1)).unwrap();
    }
    if n >= 3 {
        let mut faces = vec![[id(0), id(1), id(2)], [id(0), id(2), id(1)]];
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            g.add_edge(id(a), id(b)).unwrap();
        }
        for i in 3..n {
            let v = id(i);
            let f = rng.gen_range(0..faces.len());
            let [a, b, c] = faces[f];
            for w in [a, b, c] {
                g.add_edge(v, w).unwrap();
            }
            faces[f] = [a, b, v];
            faces.push([b, c, v]);
            faces.push([c, a, v]);
        }
    }
    let keep = density.clamp(0.0, 1.0);
    let mut edges: Vec<(VertexId, VertexId)> = g.edges().collect();
    edges.shuffle(&mut rng);
    for (u, v) in edges {
        if rng.gen::<f64>() < keep {
            continue;
        }
        g.remove_edge(u, v).unwrap();
        if !g.is_connected() {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}
