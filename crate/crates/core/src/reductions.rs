//! Phase 1: Rules 1-7 applied exhaustively in strict priority order, plus the
//! shared step record (Rule 8 is driven by `face_matching` but its graph
//! surgery and lift map live here so that journals replay uniformly).
//!
//! Rules, with `k` the budget:
//!
//! * R1: a vertex with several pendant neighbors keeps only one.
//! * R2: a 2-vertex `v` with adjacent neighbors `u`, `w`: contract `uw`, `k -= 1`.
//! * R3: a 2-vertex `v` with non-adjacent neighbors `u`, `w`: if `v` is not a
//!   cut vertex, replace it by a fresh pendant on each of `u` and `w`;
//!   otherwise contract `uv`, `k -= 1`.
//! * R4: an edge `uv` whose endpoints both own a pendant: drop `u`'s pendant,
//!   contract `uv`, `k -= 1`.
//! * R5: a 3-vertex `v` with `N(v) = {x, y, z}`, `z` pendant: delete `v`, `z`,
//!   add `xy`, `k -= 1`.
//! * R6: 3-vertices `a`, `b` with `N(a) = N(b) = {x, v, y}` such that deleting
//!   any two of `x, v, y` disconnects the graph: delete `a`, hang a fresh
//!   pendant on each of `x`, `v`, `y`.
//! * R7: a 3-vertex `a` with `N(a) = {x, v, y}` and `N(v) = {x, a, y, q}`,
//!   `q` pendant: delete `a`, `v`, `q`, add `xy` and fresh pendants on `x`
//!   and `y`, `k -= 1`.
//! * R8: owners `u`, `v` of pendants `x_u`, `x_v`: identify `x_u` and `x_v`.
//!
//! When a rule matches at several sites the one with the smallest vertex ids
//! (in the role order of [`Site`]) is chosen, so runs are reproducible.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// The vertices matched by a rule pattern, by role.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", content = "site")]
pub enum Site {
    R1 {
        v: VertexId,
        kept: VertexId,
        dropped: Vec<VertexId>,
    },
    R2 {
        v: VertexId,
        u: VertexId,
        w: VertexId,
    },
    /// `u < w`; when `cut` is set the contracted edge is `uv`.
    R3 {
        v: VertexId,
        u: VertexId,
        w: VertexId,
        cut: bool,
    },
    R4 {
        u: VertexId,
        v: VertexId,
        pu: VertexId,
        pv: VertexId,
    },
    R5 {
        v: VertexId,
        x: VertexId,
        y: VertexId,
        z: VertexId,
    },
    R6 {
        a: VertexId,
        b: VertexId,
        x: VertexId,
        v: VertexId,
        y: VertexId,
    },
    R7 {
        a: VertexId,
        v: VertexId,
        x: VertexId,
        y: VertexId,
        q: VertexId,
    },
    R8 {
        u: VertexId,
        v: VertexId,
        xu: VertexId,
        xv: VertexId,
    },
}

impl Site {
    pub fn rule(&self) -> RuleId {
        match self {
            Site::R1 { .. } => RuleId::R1,
            Site::R2 { .. } => RuleId::R2,
            Site::R3 { .. } => RuleId::R3,
            Site::R4 { .. } => RuleId::R4,
            Site::R5 { .. } => RuleId::R5,
            Site::R6 { .. } => RuleId::R6,
            Site::R7 { .. } => RuleId::R7,
            Site::R8 { .. } => RuleId::R8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    #[serde(flatten)]
    pub site: Site,
    pub created: Vec<VertexId>,
    pub removed: Vec<VertexId>,
    pub k_delta: i64,
}

impl ReductionStep {
    pub fn rule(&self) -> RuleId {
        self.site.rule()
    }

    /// Maps a connected vertex cover of the graph after this step to one of
    /// the graph before it. `pre` is the graph the step was applied to.
    ///
    /// The result has at most `|cover| - k_delta` vertices whenever `cover`
    /// is a connected vertex cover of the post-step graph.
    pub fn lift(&self, pre: &Graph, cover: &BTreeSet<VertexId>) -> BTreeSet<VertexId> {
        let mut s = cover.clone();
        match (&self.site, self.created.as_slice()) {
            (Site::R1 { v, kept, .. }, _) => swap_pendant(&mut s, *kept, *v),
            (Site::R2 { v, u, w }, &[c]) => {
                swap_pendant(&mut s, *v, c);
                s.remove(&c);
                s.extend([*u, *w]);
            }
            (Site::R3 { u, w, cut: false, .. }, &[pu, pw]) => {
                swap_pendant(&mut s, pu, *u);
                swap_pendant(&mut s, pw, *w);
            }
            (Site::R3 { v, u, cut: true, .. }, &[c]) => {
                if s.remove(&c) {
                    s.insert(*u);
                }
                s.insert(*v);
            }
            (Site::R4 { u, v, pv, .. }, &[c]) => {
                swap_pendant(&mut s, *pv, c);
                s.remove(&c);
                s.extend([*u, *v]);
            }
            (Site::R5 { v, .. }, _) => {
                s.insert(*v);
            }
            (Site::R6 { x, v, y, .. }, &[xp, vp, yp]) => {
                swap_pendant(&mut s, xp, *x);
                swap_pendant(&mut s, vp, *v);
                swap_pendant(&mut s, yp, *y);
            }
            (Site::R7 { v, x, y, .. }, &[xp, yp]) => {
                swap_pendant(&mut s, xp, *x);
                swap_pendant(&mut s, yp, *y);
                s.insert(*v);
            }
            (Site::R8 { u, v, .. }, &[c]) => {
                if s.remove(&c) {
                    s.insert(*u);
                    s.insert(*v);
                    // Dropping a 2-vertex leaves at most two pieces; one vertex rejoins them.
                    reconnect(pre, &mut s);
                }
            }
            (site, created) => panic!("malformed step {site:?} with created {created:?}"),
        }
        s
    }
}

/// Replaces pendant `p` by its parent if `p` is in the set.
fn swap_pendant(s: &mut BTreeSet<VertexId>, p: VertexId, parent: VertexId) {
    if s.remove(&p) {
        s.insert(parent);
    }
}

/// Adds vertices joining components of `g[s]` until it is connected (or no
/// single vertex helps). Each vertex added merges at least two pieces.
pub(crate) fn reconnect(g: &Graph, s: &mut BTreeSet<VertexId>) {
    loop {
        let pieces = g.induced(s).components();
        if pieces.len() <= 1 {
            return;
        }
        let piece_of: BTreeMap<VertexId, usize> = pieces
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.iter().map(move |&v| (v, i)))
            .collect();
        let best = g
            .vertices()
            .filter(|z| !s.contains(z))
            .map(|z| {
                let touched: BTreeSet<usize> = g.neighbors(z).iter().filter_map(|w| piece_of.get(w).copied()).collect();
                (touched.len(), z)
            })
            .filter(|&(t, _)| t >= 2)
            .max_by_key(|&(t, z)| (t, std::cmp::Reverse(z)));
        match best {
            Some((_, z)) => {
                s.insert(z);
            }
            None => return,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("{0:?} does not match the graph")]
    SiteMismatch(Site),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn separates(g: &Graph, removed: &[VertexId]) -> bool {
    let base = g.components().len();
    let set: BTreeSet<VertexId> = removed.iter().copied().collect();
    g.components_avoiding(&set).len() > base
}

fn two_sorted(set: &BTreeSet<VertexId>) -> (VertexId, VertexId) {
    let mut it = set.iter().copied();
    (it.next().unwrap(), it.next().unwrap())
}

fn detect_r1(g: &Graph) -> Option<Site> {
    g.vertices().find_map(|v| {
        let pend = g.pendant_neighbors(v);
        (pend.len() > 1).then(|| {
            let mut it = pend.into_iter();
            let kept = it.next().unwrap();
            Site::R1 {
                v,
                kept,
                dropped: it.collect(),
            }
        })
    })
}

fn detect_r2(g: &Graph) -> Option<Site> {
    g.vertices().filter(|&v| g.degree(v) == 2).find_map(|v| {
        let (u, w) = two_sorted(g.neighbors(v));
        g.has_edge(u, w).then_some(Site::R2 { v, u, w })
    })
}

fn detect_r3(g: &Graph) -> Option<Site> {
    g.vertices().filter(|&v| g.degree(v) == 2).find_map(|v| {
        let (u, w) = two_sorted(g.neighbors(v));
        (!g.has_edge(u, w)).then(|| Site::R3 {
            v,
            u,
            w,
            cut: separates(g, &[v]),
        })
    })
}

/// Pendant neighbors of `u` other than `other`.
fn pendant_besides(g: &Graph, u: VertexId, other: VertexId) -> Option<VertexId> {
    g.neighbors(u).iter().copied().find(|&p| p != other && g.degree(p) == 1)
}

fn detect_r4(g: &Graph) -> Option<Site> {
    g.edges().find_map(|(u, v)| {
        let pu = pendant_besides(g, u, v)?;
        let pv = pendant_besides(g, v, u)?;
        Some(Site::R4 { u, v, pu, pv })
    })
}

fn detect_r5(g: &Graph) -> Option<Site> {
    g.vertices().filter(|&v| g.degree(v) == 3).find_map(|v| {
        let n = g.neighbors(v);
        let z = n.iter().copied().find(|&z| g.degree(z) == 1)?;
        let mut rest = n.iter().copied().filter(|&w| w != z);
        let (x, y) = (rest.next().unwrap(), rest.next().unwrap());
        Some(Site::R5 { v, x, y, z })
    })
}

fn r6_condition(g: &Graph, x: VertexId, v: VertexId, y: VertexId) -> bool {
    separates(g, &[x, v]) && separates(g, &[x, y]) && separates(g, &[v, y])
}

fn detect_r6(g: &Graph) -> Option<Site> {
    let mut by_nbhd: BTreeMap<Vec<VertexId>, Vec<VertexId>> = BTreeMap::new();
    for a in g.vertices().filter(|&a| g.degree(a) == 3) {
        by_nbhd
            .entry(g.neighbors(a).iter().copied().collect())
            .or_default()
            .push(a);
    }
    let mut best: Option<Site> = None;
    for (n, group) in by_nbhd {
        if group.len() < 2 {
            continue;
        }
        let (x, v, y) = (n[0], n[1], n[2]);
        if !r6_condition(g, x, v, y) {
            continue;
        }
        let site = Site::R6 {
            a: group[0],
            b: group[1],
            x,
            v,
            y,
        };
        let better = match &best {
            Some(Site::R6 { a, b, .. }) => (group[0], group[1]) < (*a, *b),
            _ => true,
        };
        if better {
            best = Some(site);
        }
    }
    best
}

fn r7_match(g: &Graph, a: VertexId, v: VertexId) -> Option<Site> {
    if g.degree(a) != 3 || g.degree(v) != 4 || !g.has_edge(a, v) {
        return None;
    }
    let mut others = g.neighbors(a).iter().copied().filter(|&w| w != v);
    let (x, y) = (others.next()?, others.next()?);
    let nv = g.neighbors(v);
    if !nv.contains(&x) || !nv.contains(&y) {
        return None;
    }
    let q = nv.iter().copied().find(|&q| q != x && q != y && q != a)?;
    (g.degree(q) == 1).then_some(Site::R7 { a, v, x, y, q })
}

fn detect_r7(g: &Graph) -> Option<Site> {
    g.vertices()
        .filter(|&a| g.degree(a) == 3)
        .find_map(|a| g.neighbors(a).iter().find_map(|&v| r7_match(g, a, v)))
}

/// The lowest-numbered rule among R1-R7 that applies, at its smallest site.
pub fn detect_rule(g: &Graph) -> Option<Site> {
    detect_r1(g)
        .or_else(|| detect_r2(g))
        .or_else(|| detect_r3(g))
        .or_else(|| detect_r4(g))
        .or_else(|| detect_r5(g))
        .or_else(|| detect_r6(g))
        .or_else(|| detect_r7(g))
}

/// Whether `site` is an occurrence of its rule's pattern in `g` (priority
/// among rules is not checked).
pub fn site_matches(g: &Graph, site: &Site) -> bool {
    let has = |v: &VertexId| g.contains(*v);
    match site {
        Site::R1 { v, kept, dropped } => {
            if !has(v) {
                return false;
            }
            let mut expect: BTreeSet<VertexId> = dropped.iter().copied().collect();
            expect.insert(*kept);
            !dropped.is_empty() && g.pendant_neighbors(*v) == expect && expect.len() == dropped.len() + 1
        }
        Site::R2 { v, u, w } => {
            has(v) && g.degree(*v) == 2 && g.has_edge(*v, *u) && g.has_edge(*v, *w) && g.has_edge(*u, *w)
        }
        Site::R3 { v, u, w, cut } => {
            has(v)
                && g.degree(*v) == 2
                && u < w
                && g.has_edge(*v, *u)
                && g.has_edge(*v, *w)
                && !g.has_edge(*u, *w)
                && separates(g, &[*v]) == *cut
        }
        Site::R4 { u, v, pu, pv } => {
            g.has_edge(*u, *v)
                && pu != v
                && pv != u
                && g.has_edge(*u, *pu)
                && g.has_edge(*v, *pv)
                && g.degree(*pu) == 1
                && g.degree(*pv) == 1
        }
        Site::R5 { v, x, y, z } => {
            has(v) && g.degree(*v) == 3 && [x, y, z].iter().all(|w| g.has_edge(*v, **w)) && x != y && g.degree(*z) == 1
        }
        Site::R6 { a, b, x, v, y } => {
            let n: BTreeSet<VertexId> = [*x, *v, *y].into();
            a != b
                && n.len() == 3
                && has(a)
                && has(b)
                && g.neighbors(*a) == &n
                && g.neighbors(*b) == &n
                && r6_condition(g, *x, *v, *y)
        }
        Site::R7 { a, v, x, y, q } => {
            let found = r7_match(g, *a, *v);
            matches!(found, Some(Site::R7 { x: fx, y: fy, q: fq, .. })
                if fq == *q && BTreeSet::from([fx, fy]) == BTreeSet::from([*x, *y]) && x != y)
        }
        Site::R8 { u, v, xu, xv } => {
            u != v
                && xu != xv
                && !g.has_edge(*u, *v)
                && g.has_edge(*u, *xu)
                && g.has_edge(*v, *xv)
                && g.degree(*xu) == 1
                && g.degree(*xv) == 1
        }
    }
}

/// Applies one rule occurrence to `g`, returning the step record. The
/// budget change is `step.k_delta`.
pub fn apply_rule(g: &mut Graph, site: &Site) -> Result<ReductionStep, RuleError> {
    if !site_matches(g, site) {
        return Err(RuleError::SiteMismatch(site.clone()));
    }
    let (created, removed, k_delta) = match site {
        Site::R1 { dropped, .. } => {
            for &p in dropped {
                g.remove_vertex(p)?;
            }
            (vec![], dropped.clone(), 0)
        }
        Site::R2 { u, w, .. } => {
            let c = g.contract_edge(*u, *w)?;
            (vec![c], vec![*u, *w], -1)
        }
        Site::R3 { v, u, w, cut: false } => {
            g.remove_vertex(*v)?;
            let pu = g.add_vertex();
            g.add_edge(*u, pu)?;
            let pw = g.add_vertex();
            g.add_edge(*w, pw)?;
            (vec![pu, pw], vec![*v], 0)
        }
        Site::R3 { v, u, cut: true, .. } => {
            let c = g.contract_edge(*u, *v)?;
            (vec![c], vec![*u, *v], -1)
        }
        Site::R4 { u, v, pu, .. } => {
            g.remove_vertex(*pu)?;
            let c = g.contract_edge(*u, *v)?;
            (vec![c], vec![*pu, *u, *v], -1)
        }
        Site::R5 { v, x, y, z } => {
            g.remove_vertex(*v)?;
            g.remove_vertex(*z)?;
            g.add_edge(*x, *y)?;
            (vec![], vec![*v, *z], -1)
        }
        Site::R6 { a, x, v, y, .. } => {
            g.remove_vertex(*a)?;
            let mut created = Vec::with_capacity(3);
            for &owner in [x, v, y] {
                let p = g.add_vertex();
                g.add_edge(owner, p)?;
                created.push(p);
            }
            (created, vec![*a], 0)
        }
        Site::R7 { a, v, x, y, q } => {
            g.remove_vertex(*a)?;
            g.remove_vertex(*v)?;
            g.remove_vertex(*q)?;
            g.add_edge(*x, *y)?;
            let xp = g.add_vertex();
            g.add_edge(*x, xp)?;
            let yp = g.add_vertex();
            g.add_edge(*y, yp)?;
            (vec![xp, yp], vec![*a, *v, *q], -1)
        }
        Site::R8 { xu, xv, .. } => {
            let c = g.merge_vertices(*xu, *xv)?;
            (vec![c], vec![*xu, *xv], 0)
        }
    };
    debug_assert!(g.check_invariants());
    Ok(ReductionStep {
        site: site.clone(),
        created,
        removed,
        k_delta,
    })
}

/// Progress measure for Rules 1-7: the number of vertices of degree at least
/// two, then `|V| + |E| + k`. Every R1-R7 application decreases it
/// lexicographically.
pub fn phase1_potential(g: &Graph, k: i64) -> (usize, i64) {
    let n2 = g.vertices().filter(|&v| g.degree(v) >= 2).count();
    (n2, (g.vertex_count() + g.edge_count()) as i64 + k)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Phase1Outcome {
    /// Fixpoint of Rules 1-7 with a non-negative budget.
    Reduced {
        graph: Graph,
        k: i64,
        steps: Vec<ReductionStep>,
    },
    /// The budget went negative after the recorded steps.
    EarlyNo { steps: Vec<ReductionStep> },
}

/// Applies Rules 1-7 until none matches, restarting the scan from R1 after
/// every application.
pub fn run_phase1(mut graph: Graph, mut k: i64) -> Phase1Outcome {
    let mut steps = Vec::new();
    if k < 0 {
        return Phase1Outcome::EarlyNo { steps };
    }
    while let Some(site) = detect_rule(&graph) {
        let step = apply_rule(&mut graph, &site).expect("detected site applies");
        k += step.k_delta;
        steps.push(step);
        if k < 0 {
            return Phase1Outcome::EarlyNo { steps };
        }
    }
    Phase1Outcome::Reduced { graph, k, steps }
}

/// No 2-vertices and at most one pendant per vertex.
pub fn is_phase1_structured(g: &Graph) -> bool {
    g.vertices()
        .all(|v| g.degree(v) != 2 && g.pendant_neighbors(v).len() <= 1)
}
