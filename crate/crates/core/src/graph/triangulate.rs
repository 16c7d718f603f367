//! Completion of an embedded graph to a triangulation of the sphere.
//!
//! Every face walk of length `k > 3` is cut by a zig-zag of diagonals
//! (`c1-c(k-1)`, `c(k-1)-c2`, `c2-c(k-2)`, ...). All `k` starting corners are
//! tried. If each of them would create a loop or repeat an existing edge,
//! the face gets a ring of `k` Steiner vertices instead: `s_i` is joined to
//! `c_i`, `c(i+1)` and `s(i+1)`, and the inner ring is zig-zagged.
//!
//! Both constructions add at most two edges per face corner, and a vertex of
//! degree `d` has exactly `d` corners, so original vertices end with degree
//! at most `3d`. Steiner vertices end with degree at most 6.

use std::collections::{HashMap, HashSet};

use super::{Graph, PlanarGraph};
use crate::error::{Error, Result};

/// A planar graph all of whose faces are triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    graph: PlanarGraph,
    faces: Vec<[usize; 3]>,
    original_n: usize,
    added_edges: usize,
    source_max_degree: usize,
}

impl Triangulation {
    /// Wraps an embedded graph whose face walks all have length 3.
    pub fn from_planar(graph: PlanarGraph) -> Result<Self> {
        let source_max_degree = graph.max_degree();
        let original_n = graph.n();
        Self::assemble(graph, original_n, 0, source_max_degree)
    }

    fn assemble(
        graph: PlanarGraph,
        original_n: usize,
        added_edges: usize,
        source_max_degree: usize,
    ) -> Result<Self> {
        let mut faces = Vec::with_capacity(graph.face_count());
        for face in graph.faces() {
            if face.len() != 3 {
                return Err(Error::NotATriangulation(format!(
                    "face {face:?} has {} sides",
                    face.len()
                )));
            }
            faces.push([face[0], face[1], face[2]]);
        }
        if 2 * graph.edge_count() != 3 * faces.len() {
            return Err(Error::NotATriangulation("2|E| != 3|F|".into()));
        }
        Ok(Triangulation {
            graph,
            faces,
            original_n,
            added_edges,
            source_max_degree,
        })
    }

    pub fn graph(&self) -> &PlanarGraph {
        &self.graph
    }

    /// Oriented triangles; every one lists its vertices in face-walk order.
    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// Vertices `0..original_n()` are those of the source graph; the rest are
    /// Steiner vertices.
    pub fn original_n(&self) -> usize {
        self.original_n
    }

    pub fn steiner_vertices(&self) -> usize {
        self.graph.n() - self.original_n
    }

    pub fn added_edges(&self) -> usize {
        self.added_edges
    }

    pub fn max_degree(&self) -> usize {
        self.graph.max_degree()
    }

    /// Maximum degree of the graph that was triangulated.
    pub fn source_max_degree(&self) -> usize {
        self.source_max_degree
    }

    /// Whether the achieved maximum degree is at most three times the
    /// source maximum degree.
    pub fn within_degree_bound(&self) -> bool {
        self.max_degree() <= 3 * self.source_max_degree
    }

    /// Position of the face with vertex set `{a, b, c}`.
    pub fn face_index(&self, a: usize, b: usize, c: usize) -> Option<usize> {
        let mut key = [a, b, c];
        key.sort_unstable();
        self.faces.iter().position(|f| {
            let mut s = *f;
            s.sort_unstable();
            s == key
        })
    }

    pub fn is_face(&self, a: usize, b: usize, c: usize) -> bool {
        self.face_index(a, b, c).is_some()
    }
}

/// Adds edges, and Steiner vertices where needed, until every face is a
/// triangle. The input graph is a subgraph of the result, with vertex
/// indices preserved.
pub fn triangulate(g: &PlanarGraph) -> Result<Triangulation> {
    let n0 = g.n();
    if n0 < 3 {
        return Err(Error::TooSmall(n0));
    }
    let faces = g.faces();
    if faces.iter().all(|f| f.len() == 3) {
        return Triangulation::from_planar(g.clone());
    }

    let mut edge_set: HashSet<(usize, usize)> = g.edges().iter().copied().collect();
    let mut triangles: Vec<[usize; 3]> = Vec::new();
    let mut next_vertex = n0;

    for face in &faces {
        let k = face.len();
        if k == 3 {
            triangles.push([face[0], face[1], face[2]]);
            continue;
        }
        let mut done = false;
        for offset in 0..k {
            let corners: Vec<usize> = (0..k).map(|i| face[(i + offset) % k]).collect();
            let (tris, diagonals) = zigzag(&corners);
            if diagonals_ok(&diagonals, &edge_set) {
                edge_set.extend(diagonals.iter().map(|&(u, v)| (u.min(v), u.max(v))));
                triangles.extend(tris);
                done = true;
                break;
            }
        }
        if done {
            continue;
        }
        log::debug!("face of length {k} needs a Steiner ring");
        let ring: Vec<usize> = (next_vertex..next_vertex + k).collect();
        next_vertex += k;
        for i in 0..k {
            let (c, c_next) = (face[i], face[(i + 1) % k]);
            let (s, s_next) = (ring[i], ring[(i + 1) % k]);
            triangles.push([c, c_next, s]);
            triangles.push([s, c_next, s_next]);
            for (u, v) in [(s, c), (s, c_next), (s, s_next)] {
                edge_set.insert((u.min(v), u.max(v)));
            }
        }
        let (tris, diagonals) = zigzag(&ring);
        edge_set.extend(diagonals.iter().map(|&(u, v)| (u.min(v), u.max(v))));
        triangles.extend(tris);
    }

    let n = next_vertex;
    let mut edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
    edges.sort_unstable();
    let graph = Graph::new(n, &edges)?;

    let mut succ: Vec<HashMap<usize, usize>> = vec![HashMap::new(); n];
    for &[a, b, c] in &triangles {
        succ[b].insert(a, c);
        succ[c].insert(b, a);
        succ[a].insert(c, b);
    }
    let mut rotation = Vec::with_capacity(n);
    for (v, next) in succ.iter().enumerate() {
        let first = graph.neighbors(v)[0];
        let mut order = vec![first];
        let mut cur = next[&first];
        while cur != first && order.len() <= graph.degree(v) {
            order.push(cur);
            cur = next[&cur];
        }
        rotation.push(order);
    }
    let added_edges = graph.edge_count() - g.edge_count();
    let mut planar = PlanarGraph::with_rotation(graph, rotation)?;
    if let Some(labels) = g.labels() {
        let mut labels = labels.to_vec();
        labels.extend((n0..n).map(|v| format!("steiner{}", v - n0)));
        planar = planar.with_labels(labels)?;
    }
    Triangulation::assemble(planar, n0, added_edges, g.max_degree())
}

/// Zig-zag triangulation of a polygon walk. Returns the oriented triangles
/// and the diagonals they introduce.
fn zigzag(c: &[usize]) -> (Vec<[usize; 3]>, Vec<(usize, usize)>) {
    let k = c.len();
    let mut idx = vec![[0, 1, k - 1]];
    let (mut lo, mut hi) = (1, k - 1);
    let mut take_low = true;
    while hi - lo > 1 {
        if take_low {
            idx.push([lo, lo + 1, hi]);
            lo += 1;
        } else {
            idx.push([lo, hi - 1, hi]);
            hi -= 1;
        }
        take_low = !take_low;
    }
    let mut diagonals = Vec::new();
    let mut seen = HashSet::new();
    for t in &idx {
        for (i, j) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            let gap = j.abs_diff(i);
            if gap != 1 && gap != k - 1 && seen.insert((i.min(j), i.max(j))) {
                diagonals.push((c[i], c[j]));
            }
        }
    }
    let tris = idx.iter().map(|t| [c[t[0]], c[t[1]], c[t[2]]]).collect();
    (tris, diagonals)
}

fn diagonals_ok(diagonals: &[(usize, usize)], edges: &HashSet<(usize, usize)>) -> bool {
    let mut fresh = HashSet::new();
    diagonals.iter().all(|&(u, v)| {
        let key = (u.min(v), u.max(v));
        u != v && !edges.contains(&key) && fresh.insert(key)
    })
}
