//! Planarity testing and combinatorial embeddings.
//!
//! Each biconnected block is embedded with the path-addition method of
//! Demoucron, Malgrange and Pertuiset, maintaining a rotation system as paths
//! are inserted into faces. Block rotations are then concatenated at cut
//! vertices, which keeps the genus at zero.
//!
//! Orientation convention used throughout the crate: a face is walked by
//! taking, after the dart `u -> v`, the dart `v -> succ_v(u)`, where
//! `succ_v` is the cyclic successor in the rotation at `v`. "Clockwise order
//! around a face" means the order of this walk.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("graph is not planar")]
    NonPlanar,
    #[error("embedding requires a connected graph")]
    Disconnected,
    #[error("embedding requires at least one vertex")]
    Empty,
    #[error("rotation system is inconsistent at {0}")]
    BadRotation(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// Closed walk of directed edges.
    pub boundary: Vec<(VertexId, VertexId)>,
    /// Vertices in order of first appearance on the walk.
    pub incident_vertices: Vec<VertexId>,
}

impl Face {
    pub fn contains(&self, v: VertexId) -> bool {
        self.incident_vertices.contains(&v)
    }
}

#[derive(Debug, Clone)]
pub struct Embedding {
    rotation: BTreeMap<VertexId, Vec<VertexId>>,
    faces: Vec<Face>,
    edge_count: usize,
}

impl Embedding {
    /// Wraps a rotation system after checking it is symmetric and simple.
    pub fn from_rotation(rotation: BTreeMap<VertexId, Vec<VertexId>>) -> Result<Self, EmbedError> {
        let mut half = 0;
        for (&v, rot) in &rotation {
            let distinct: BTreeSet<_> = rot.iter().collect();
            if distinct.len() != rot.len() || distinct.contains(&v) {
                return Err(EmbedError::BadRotation(v));
            }
            for w in rot {
                if !rotation.get(w).is_some_and(|r| r.contains(&v)) {
                    return Err(EmbedError::BadRotation(v));
                }
            }
            half += rot.len();
        }
        let faces = enumerate_faces(&rotation);
        Ok(Self {
            rotation,
            faces,
            edge_count: half / 2,
        })
    }

    pub fn rotation(&self, v: VertexId) -> &[VertexId] {
        self.rotation.get(&v).map_or(&[], Vec::as_slice)
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// `V - E + F`; equals 2 for a connected plane embedding.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count as i64 + self.faces.len() as i64
    }

    /// Every dart appears exactly once across all face boundaries.
    pub fn is_double_cover(&self) -> bool {
        let mut seen = HashSet::new();
        for f in &self.faces {
            for &d in &f.boundary {
                if !seen.insert(d) {
                    return false;
                }
            }
        }
        seen.len() == 2 * self.edge_count
    }

    /// Whether the rotation system describes exactly the edges of `g`.
    pub fn realizes(&self, g: &Graph) -> bool {
        g.vertex_count() == self.vertex_count()
            && g.vertices().all(|v| {
                let rot = self.rotation(v);
                rot.len() == g.degree(v) && rot.iter().all(|&w| g.has_edge(v, w))
            })
    }
}

/// Traces every face of a rotation system. A lone vertex yields one face
/// with an empty boundary.
pub fn enumerate_faces(rotation: &BTreeMap<VertexId, Vec<VertexId>>) -> Vec<Face> {
    let mut pos: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    for (&v, rot) in rotation {
        for (i, &w) in rot.iter().enumerate() {
            pos.insert((v, w), i);
        }
    }
    let succ = |v: VertexId, u: VertexId| -> VertexId {
        let rot = &rotation[&v];
        rot[(pos[&(v, u)] + 1) % rot.len()]
    };

    let mut faces = Vec::new();
    let mut used: HashSet<(VertexId, VertexId)> = HashSet::new();
    for (&u0, rot) in rotation {
        if rot.is_empty() {
            faces.push(Face {
                boundary: Vec::new(),
                incident_vertices: vec![u0],
            });
            continue;
        }
        for &v0 in rot {
            if used.contains(&(u0, v0)) {
                continue;
            }
            let mut boundary = Vec::new();
            let mut incident = Vec::new();
            let mut seen_v = HashSet::new();
            let (mut u, mut v) = (u0, v0);
            loop {
                used.insert((u, v));
                boundary.push((u, v));
                if seen_v.insert(u) {
                    incident.push(u);
                }
                let w = succ(v, u);
                u = v;
                v = w;
                if (u, v) == (u0, v0) {
                    break;
                }
            }
            faces.push(Face {
                boundary,
                incident_vertices: incident,
            });
        }
    }
    faces
}

/// Computes a planar embedding of a connected graph.
pub fn embed(g: &Graph) -> Result<Embedding, EmbedError> {
    if g.is_empty() {
        return Err(EmbedError::Empty);
    }
    if !g.is_connected() {
        return Err(EmbedError::Disconnected);
    }
    let n = g.vertex_count();
    if n >= 3 && g.edge_count() > 3 * n - 6 {
        return Err(EmbedError::NonPlanar);
    }

    let verts: Vec<VertexId> = g.vertices().collect();
    let index: HashMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj: Vec<Vec<usize>> = verts
        .iter()
        .map(|&v| g.neighbors(v).iter().map(|w| index[w]).collect())
        .collect();

    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); n];
    for block in biconnected_blocks(&adj) {
        if block.len() == 1 {
            let (a, b) = block[0];
            rotation[a].push(b);
            rotation[b].push(a);
            continue;
        }
        for (v, rot) in embed_block(&block)? {
            rotation[v].extend(rot);
        }
    }

    let rotation = rotation
        .into_iter()
        .enumerate()
        .map(|(i, rot)| (verts[i], rot.into_iter().map(|w| verts[w]).collect()))
        .collect();
    let emb = Embedding::from_rotation(rotation)?;
    debug_assert_eq!(emb.euler_characteristic(), 2);
    Ok(emb)
}

/// Edge sets of the biconnected blocks (iterative Hopcroft-Tarjan).
fn biconnected_blocks(adj: &[Vec<usize>]) -> Vec<Vec<(usize, usize)>> {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut blocks = Vec::new();

    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, parent, next neighbor index)
        let mut stack = vec![(root, UNSEEN, 0usize)];
        while let Some(top) = stack.last_mut() {
            let (v, parent, i) = *top;
            if i < adj[v].len() {
                top.2 += 1;
                let w = adj[v][i];
                if disc[w] == UNSEEN {
                    edges.push((v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, v, 0));
                } else if w != parent && disc[w] < disc[v] {
                    edges.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != UNSEEN {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] >= disc[parent] {
                        let mut block = Vec::new();
                        while let Some(e) = edges.pop() {
                            block.push(e);
                            if e == (parent, v) {
                                break;
                            }
                        }
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

fn norm(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Path-addition embedding of one 2-connected block with at least 3 vertices.
/// Returns the rotation at each block vertex (global indices).
fn embed_block(block: &[(usize, usize)]) -> Result<Vec<(usize, Vec<usize>)>, EmbedError> {
    // Local renumbering.
    let mut local: HashMap<usize, usize> = HashMap::new();
    let mut global: Vec<usize> = Vec::new();
    for &(a, b) in block {
        for x in [a, b] {
            local.entry(x).or_insert_with(|| {
                global.push(x);
                global.len() - 1
            });
        }
    }
    let nb = global.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nb];
    for &(a, b) in block {
        let (a, b) = (local[&a], local[&b]);
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }

    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); nb];
    let mut in_h = vec![false; nb];
    let mut placed: HashSet<(usize, usize)> = HashSet::new();

    let cycle = find_cycle(&adj);
    let len = cycle.len();
    for i in 0..len {
        let (p, c, s) = (cycle[(i + len - 1) % len], cycle[i], cycle[(i + 1) % len]);
        rot[c] = vec![p, s];
        in_h[c] = true;
        placed.insert(norm(c, s));
    }

    while placed.len() < block.len() {
        let faces = block_faces(&rot, &in_h);
        let fragments = fragments(&adj, &in_h, &placed);

        let mut choice: Option<(usize, usize)> = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, f)| frag.attachments.iter().all(|a| f.members.contains(a)))
                .map(|(i, _)| i)
                .collect();
            match admissible.len() {
                0 => return Err(EmbedError::NonPlanar),
                1 => {
                    choice = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face_idx) = choice.expect("at least one fragment remains");
        let path = fragment_path(&adj, &in_h, &fragments[fi]);
        insert_path(&mut rot, &faces[face_idx], &path);
        for w in path.windows(2) {
            placed.insert(norm(w[0], w[1]));
        }
        for &v in &path {
            in_h[v] = true;
        }
    }

    Ok(rot
        .into_iter()
        .enumerate()
        .map(|(i, r)| (global[i], r.into_iter().map(|w| global[w]).collect()))
        .collect())
}

/// A cycle found by DFS: the first back edge closes it.
fn find_cycle(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut stack = vec![(0usize, 0usize)];
    seen[0] = true;
    while let Some(top) = stack.last_mut() {
        let (v, i) = *top;
        if i == adj[v].len() {
            stack.pop();
            continue;
        }
        top.1 += 1;
        let w = adj[v][i];
        if !seen[w] {
            seen[w] = true;
            parent[w] = v;
            stack.push((w, 0));
        } else if w != parent[v] {
            let mut cycle = vec![v];
            let mut x = v;
            while x != w {
                x = parent[x];
                cycle.push(x);
            }
            return cycle;
        }
    }
    unreachable!("a 2-connected block with 3 or more vertices has a cycle")
}

struct BlockFace {
    /// Vertex cycle in walk order.
    cycle: Vec<usize>,
    members: HashSet<usize>,
}

fn block_faces(rot: &[Vec<usize>], in_h: &[bool]) -> Vec<BlockFace> {
    let succ = |v: usize, u: usize| -> usize {
        let r = &rot[v];
        let p = r.iter().position(|&x| x == u).expect("dart present");
        r[(p + 1) % r.len()]
    };
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    let mut faces = Vec::new();
    for u0 in 0..rot.len() {
        if !in_h[u0] {
            continue;
        }
        for &v0 in &rot[u0] {
            if used.contains(&(u0, v0)) {
                continue;
            }
            let mut cycle = Vec::new();
            let (mut u, mut v) = (u0, v0);
            loop {
                used.insert((u, v));
                cycle.push(u);
                let w = succ(v, u);
                u = v;
                v = w;
                if (u, v) == (u0, v0) {
                    break;
                }
            }
            let members = cycle.iter().copied().collect();
            faces.push(BlockFace { cycle, members });
        }
    }
    faces
}

struct Fragment {
    /// Unplaced edge between two placed vertices, or a component of unplaced vertices.
    chord: Option<(usize, usize)>,
    component: Vec<usize>,
    attachments: BTreeSet<usize>,
}

fn fragments(adj: &[Vec<usize>], in_h: &[bool], placed: &HashSet<(usize, usize)>) -> Vec<Fragment> {
    let mut out = Vec::new();
    for a in 0..adj.len() {
        if !in_h[a] {
            continue;
        }
        for &b in &adj[a] {
            if a < b && in_h[b] && !placed.contains(&(a, b)) {
                out.push(Fragment {
                    chord: Some((a, b)),
                    component: Vec::new(),
                    attachments: BTreeSet::from([a, b]),
                });
            }
        }
    }
    let mut seen = vec![false; adj.len()];
    for s in 0..adj.len() {
        if in_h[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut component = vec![s];
        let mut attachments = BTreeSet::new();
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if in_h[y] {
                    attachments.insert(y);
                } else if !seen[y] {
                    seen[y] = true;
                    component.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.push(Fragment {
            chord: None,
            component,
            attachments,
        });
    }
    out
}

/// A path through the fragment joining two distinct attachment vertices.
fn fragment_path(adj: &[Vec<usize>], in_h: &[bool], frag: &Fragment) -> Vec<usize> {
    if let Some((a, b)) = frag.chord {
        return vec![a, b];
    }
    let mut att = frag.attachments.iter().copied();
    let a1 = att.next().expect("fragment has an attachment");
    let a2 = att.next().expect("fragment of a 2-connected block has two attachments");
    let members: HashSet<usize> = frag.component.iter().copied().collect();

    let mut prev: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for &c in &adj[a1] {
        if members.contains(&c) && !prev.contains_key(&c) {
            prev.insert(c, a1);
            queue.push_back(c);
        }
    }
    while let Some(x) = queue.pop_front() {
        if adj[x].contains(&a2) {
            let mut path = vec![a2, x];
            let mut cur = x;
            while prev[&cur] != a1 {
                cur = prev[&cur];
                path.push(cur);
            }
            path.push(a1);
            path.reverse();
            return path;
        }
        for &y in &adj[x] {
            if !in_h[y] && !prev.contains_key(&y) {
                prev.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    unreachable!("fragment component connects its attachments")
}

/// Splits `face` by inserting `path` (endpoints on the face, interior new).
fn insert_path(rot: &mut [Vec<usize>], face: &BlockFace, path: &[usize]) {
    let corner_pred = |v: usize| -> usize {
        let len = face.cycle.len();
        let i = face.cycle.iter().position(|&x| x == v).expect("endpoint on face");
        face.cycle[(i + len - 1) % len]
    };
    let first = path[0];
    let last = *path.last().unwrap();
    let (pf, pl) = (corner_pred(first), corner_pred(last));

    let insert_after = |r: &mut Vec<usize>, anchor: usize, new: usize| {
        let p = r.iter().position(|&x| x == anchor).expect("anchor in rotation");
        r.insert(p + 1, new);
    };
    insert_after(&mut rot[first], pf, path[1]);
    insert_after(&mut rot[last], pl, path[path.len() - 2]);
    for i in 1..path.len() - 1 {
        rot[path[i]] = vec![path[i - 1], path[i + 1]];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: u32) -> Graph {
        let mut e = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                e.push((a, b));
            }
        }
        Graph::from_edges(n as usize, &e)
    }

    fn check(g: &Graph) -> Embedding {
        let e = embed(g).expect("planar");
        assert!(e.realizes(g));
        assert_eq!(e.euler_characteristic(), 2);
        assert!(e.is_double_cover());
        e
    }

    #[test]
    fn k4_has_four_triangles() {
        let e = check(&complete(4));
        assert_eq!(e.faces().len(), 4);
        assert!(e.faces().iter().all(|f| f.boundary.len() == 3));
    }

    #[test]
    fn k5_and_k33_are_nonplanar() {
        assert_eq!(embed(&complete(5)).unwrap_err(), EmbedError::NonPlanar);
        let mut e = Vec::new();
        for a in 0..3 {
            for b in 3..6 {
                e.push((a, b));
            }
        }
        assert_eq!(embed(&Graph::from_edges(6, &e)).unwrap_err(), EmbedError::NonPlanar);
    }

    #[test]
    fn trees_have_one_face() {
        let e = check(&Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]));
        assert_eq!(e.faces().len(), 1);
        assert_eq!(e.faces()[0].boundary.len(), 8);
        let e = check(&Graph::with_vertices(1));
        assert_eq!(e.faces().len(), 1);
    }

    #[test]
    fn cycle_has_two_faces() {
        let e = check(&Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]));
        assert_eq!(e.faces().len(), 2);
    }

    #[test]
    fn hand_traced_k4_rotation() {
        // Rotation of K4 drawn as triangle 0,1,2 with 3 in the middle.
        let rot: BTreeMap<VertexId, Vec<VertexId>> = [
            (0, vec![1, 3, 2]),
            (1, vec![2, 3, 0]),
            (2, vec![0, 3, 1]),
            (3, vec![0, 1, 2]),
        ]
        .into_iter()
        .map(|(v, r)| (VertexId(v), r.into_iter().map(VertexId).collect()))
        .collect();
        let e = Embedding::from_rotation(rot).unwrap();
        assert_eq!(e.faces().len(), 4);
        let mut sets: Vec<Vec<u32>> = e
            .faces()
            .iter()
            .map(|f| {
                let mut s: Vec<u32> = f.incident_vertices.iter().map(|v| v.0).collect();
                s.sort_unstable();
                s
            })
            .collect();
        sets.sort();
        assert_eq!(sets, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
    }

    #[test]
    fn blocks_glued_at_cut_vertices() {
        // Two triangles sharing vertex 2, plus a pendant path.
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4), (4, 5), (5, 6)]);
        let e = check(&g);
        assert_eq!(e.faces().len(), 3);
    }

    #[test]
    fn octahedron_and_cube() {
        let oct = Graph::from_edges(
            6,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (5, 1),
                (5, 2),
                (5, 3),
                (5, 4),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 1),
            ],
        );
        assert_eq!(check(&oct).faces().len(), 8);
        let cube = Graph::from_edges(
            8,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 4),
                (0, 4),
                (1, 5),
                (2, 6),
                (3, 7),
            ],
        );
        assert_eq!(check(&cube).faces().len(), 6);
    }

    #[test]
    fn petersen_is_nonplanar() {
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
        assert_eq!(embed(&g).unwrap_err(), EmbedError::NonPlanar);
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        assert_eq!(embed(&g).unwrap_err(), EmbedError::Disconnected);
        assert_eq!(embed(&Graph::new()).unwrap_err(), EmbedError::Empty);
    }
}
