//! Simple connected graphs, their planar embeddings (rotation systems) and
//! the test families used throughout the crate.
//!
//! Vertices are dense indices `0..n`. A [`Graph`] stores sorted adjacency
//! lists and the edge list with `u < v`. A [`PlanarGraph`] adds a rotation
//! system: for every vertex the cyclic order of its neighbours. Faces are
//! traced with the rule "after arriving at `v` from `u`, leave towards the
//! neighbour that follows `u` in the rotation of `v`".

mod embed;
pub mod enumerate;
mod generate;
mod triangulate;

use std::collections::VecDeque;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generate::{generate, grid_index, Family};
pub use triangulate::{triangulate, Triangulation};

/// A finite, simple, connected, undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph on `n` vertices, rejecting loops, repeated edges and
    /// disconnected inputs.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::MultiEdgeOrLoop(u, v));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        for pair in normalized.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::MultiEdgeOrLoop(pair[0].0, pair[0].1));
            }
        }
        for &(u, v) in &normalized {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let graph = Graph {
            adjacency,
            edges: normalized,
        };
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(graph)
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbours of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `2|E| / n`.
    pub fn average_degree(&self) -> f64 {
        2.0 * self.edge_count() as f64 / self.n() as f64
    }

    /// The same graph with one extra edge.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        let mut edges = self.edges.clone();
        edges.push((u, v));
        Graph::new(self.n(), &edges)
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        } else {
            Ok(())
        }
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n()
    }
}

/// Maximum and average degree of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreeStats {
    pub max_degree: usize,
    pub average_degree: f64,
}

/// Degree summary. Panics in debug builds if a planar graph reports an
/// average degree of 6 or more, which Euler's formula rules out.
pub fn degrees(g: &PlanarGraph) -> DegreeStats {
    let stats = DegreeStats {
        max_degree: g.max_degree(),
        average_degree: g.average_degree(),
    };
    debug_assert!(stats.average_degree < 6.0);
    stats
}

/// A graph together with a rotation system that embeds it in the sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarGraph {
    graph: Graph,
    rotation: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
    face_count: usize,
}

impl Deref for PlanarGraph {
    type Target = Graph;

    fn deref(&self) -> &Graph {
        &self.graph
    }
}

impl AsRef<Graph> for PlanarGraph {
    fn as_ref(&self) -> &Graph {
        &self.graph
    }
}

impl PlanarGraph {
    /// Attaches a rotation system to `graph` after checking that it is a
    /// permutation of every adjacency list and that its faces satisfy
    /// Euler's formula `V - E + F = 2`.
    pub fn with_rotation(graph: Graph, rotation: Vec<Vec<usize>>) -> Result<Self> {
        if rotation.len() != graph.n() {
            return Err(Error::InvalidRotation(format!(
                "{} rotation lists for {} vertices",
                rotation.len(),
                graph.n()
            )));
        }
        for (v, order) in rotation.iter().enumerate() {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted != graph.adjacency[v] {
                return Err(Error::InvalidRotation(format!(
                    "rotation at vertex {v} is not a permutation of its neighbours"
                )));
            }
        }
        let face_count = trace_faces(&rotation).len().max(1);
        let euler = graph.n() as i64 - graph.edge_count() as i64 + face_count as i64;
        if euler != 2 {
            return Err(Error::NonPlanar(format!(
                "rotation system has V - E + F = {euler}"
            )));
        }
        Ok(PlanarGraph {
            graph,
            rotation,
            labels: None,
            face_count,
        })
    }

    /// Computes a planar embedding for `graph`, failing with
    /// [`Error::NonPlanar`] when none exists.
    pub fn embed(graph: Graph) -> Result<Self> {
        let rotation = embed::planar_rotation(&graph)?;
        PlanarGraph::with_rotation(graph, rotation)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Cyclic order of the neighbours of `v`.
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn face_count(&self) -> usize {
        self.face_count
    }

    /// Face boundary walks. Each face is listed as the sequence of dart
    /// tails; a vertex may repeat when the face is not bounded by a simple
    /// cycle. Every directed edge appears in exactly one face.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        trace_faces(&self.rotation)
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            n: self.n(),
            edges: self.edges().iter().map(|&(u, v)| [u, v]).collect(),
            rotation: Some(self.rotation.clone()),
            labels: self.labels.clone(),
        }
    }
}

/// Builds a [`PlanarGraph`] from an edge list and an optional rotation
/// system. Without a rotation an embedding is computed.
pub fn build_graph(
    n: usize,
    edges: &[(usize, usize)],
    rotation: Option<Vec<Vec<usize>>>,
) -> Result<PlanarGraph> {
    let graph = Graph::new(n, edges)?;
    match rotation {
        Some(rotation) => PlanarGraph::with_rotation(graph, rotation),
        None => PlanarGraph::embed(graph),
    }
}

/// On-disk graph format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl GraphFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn into_planar(self) -> Result<PlanarGraph> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let g = build_graph(self.n, &edges, self.rotation)?;
        match self.labels {
            Some(labels) => g.with_labels(labels),
            None => Ok(g),
        }
    }
}

/// For every dart `(u, rotation[u][i])`, the index of `u` in the rotation
/// of the head.
pub(crate) fn twin_positions(rotation: &[Vec<usize>]) -> Vec<Vec<usize>> {
    rotation
        .iter()
        .enumerate()
        .map(|(u, order)| {
            order
                .iter()
                .map(|&v| {
                    rotation[v]
                        .iter()
                        .position(|&w| w == u)
                        .expect("rotation lists must be symmetric")
                })
                .collect()
        })
        .collect()
}

fn trace_faces(rotation: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let twins = twin_positions(rotation);
    let mut used: Vec<Vec<bool>> = rotation.iter().map(|r| vec![false; r.len()]).collect();
    let mut faces = Vec::new();
    for start in 0..rotation.len() {
        for start_slot in 0..rotation[start].len() {
            if used[start][start_slot] {
                continue;
            }
            let mut face = Vec::new();
            let (mut u, mut i) = (start, start_slot);
            while !used[u][i] {
                used[u][i] = true;
                face.push(u);
                let v = rotation[u][i];
                let j = (twins[u][i] + 1) % rotation[v].len();
                u = v;
                i = j;
            }
            faces.push(face);
        }
    }
    faces
}
