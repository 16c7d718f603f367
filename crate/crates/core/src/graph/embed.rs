//! Planar embedding by path addition (Demoucron, Malgrange and Pertuiset).
//!
//! The graph is split into biconnected blocks. Each block with a cycle is
//! embedded by growing a plane subgraph one path at a time, always placing
//! a fragment that has a single admissible face first. Block rotations are
//! then concatenated at cut vertices.

use std::collections::{HashMap, HashSet, VecDeque};

use super::Graph;
use crate::error::{Error, Result};

pub(super) fn planar_rotation(graph: &Graph) -> Result<Vec<Vec<usize>>> {
    let n = graph.n();
    if n >= 3 && graph.edge_count() > 3 * n - 6 {
        return Err(Error::NonPlanar(format!(
            "{} edges exceed the planar limit 3n - 6 = {}",
            graph.edge_count(),
            3 * n - 6
        )));
    }
    let mut rotation = vec![Vec::new(); n];
    for block in biconnected_blocks(graph) {
        for (v, order) in embed_block(&block)? {
            rotation[v].extend(order);
        }
    }
    Ok(rotation)
}

/// Edge sets of the biconnected blocks, in DFS completion order.
fn biconnected_blocks(graph: &Graph) -> Vec<Vec<(usize, usize)>> {
    let n = graph.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut blocks = Vec::new();
    // (vertex, parent, next neighbour slot)
    let mut frames: Vec<(usize, usize, usize)> = vec![(0, usize::MAX, 0)];
    disc[0] = 0;
    low[0] = 0;
    time += 1;
    while let Some(frame) = frames.last_mut() {
        let (v, parent, slot) = *frame;
        if slot < graph.degree(v) {
            frame.2 += 1;
            let w = graph.neighbors(v)[slot];
            if disc[w] == usize::MAX {
                edge_stack.push((v, w));
                disc[w] = time;
                low[w] = time;
                time += 1;
                frames.push((w, v, 0));
            } else if w != parent && disc[w] < disc[v] {
                edge_stack.push((v, w));
                low[v] = low[v].min(disc[w]);
            }
        } else {
            frames.pop();
            if parent != usize::MAX {
                low[parent] = low[parent].min(low[v]);
                if low[v] >= disc[parent] {
                    let mut block = Vec::new();
                    while let Some(e) = edge_stack.pop() {
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
    blocks
}

/// Embeds one block and returns the rotation of each of its vertices.
fn embed_block(block: &[(usize, usize)]) -> Result<Vec<(usize, Vec<usize>)>> {
    if block.len() == 1 {
        let (u, v) = block[0];
        return Ok(vec![(u, vec![v]), (v, vec![u])]);
    }
    let mut verts: Vec<usize> = block.iter().flat_map(|&(u, v)| [u, v]).collect();
    verts.sort_unstable();
    verts.dedup();
    let local: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let m = verts.len();
    let mut adj = vec![Vec::new(); m];
    let mut edges = Vec::with_capacity(block.len());
    for &(u, v) in block {
        let (a, b) = (local[&u], local[&v]);
        adj[a].push(b);
        adj[b].push(a);
        edges.push((a.min(b), a.max(b)));
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    edges.sort_unstable();

    let faces = PathAddition::new(&adj, &edges).run()?;

    let mut succ: Vec<HashMap<usize, usize>> = vec![HashMap::new(); m];
    for face in &faces {
        let k = face.len();
        for i in 0..k {
            let (u, v, w) = (face[i], face[(i + 1) % k], face[(i + 2) % k]);
            succ[v].insert(u, w);
        }
    }
    let mut out = Vec::with_capacity(m);
    for v in 0..m {
        let first = adj[v][0];
        let mut order = vec![first];
        let mut cur = succ[v][&first];
        while cur != first {
            order.push(cur);
            cur = succ[v][&cur];
            if order.len() > adj[v].len() {
                break;
            }
        }
        if order.len() != adj[v].len() {
            return Err(Error::NonPlanar(
                "path addition produced an inconsistent rotation".into(),
            ));
        }
        out.push((verts[v], order.into_iter().map(|w| verts[w]).collect()));
    }
    Ok(out)
}

struct Fragment {
    attachments: Vec<usize>,
    /// `Some` for a single chord between two embedded vertices.
    chord: Option<(usize, usize)>,
    component: Vec<usize>,
}

struct PathAddition<'a> {
    adj: &'a [Vec<usize>],
    edges: &'a [(usize, usize)],
    in_h: Vec<bool>,
    h_edges: HashSet<(usize, usize)>,
    faces: Vec<Vec<usize>>,
}

impl<'a> PathAddition<'a> {
    fn new(adj: &'a [Vec<usize>], edges: &'a [(usize, usize)]) -> Self {
        PathAddition {
            adj,
            edges,
            in_h: vec![false; adj.len()],
            h_edges: HashSet::new(),
            faces: Vec::new(),
        }
    }

    fn run(mut self) -> Result<Vec<Vec<usize>>> {
        let cycle = self.initial_cycle();
        for i in 0..cycle.len() {
            let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            self.in_h[u] = true;
            self.h_edges.insert((u.min(v), u.max(v)));
        }
        let mut reversed = cycle.clone();
        reversed.reverse();
        self.faces = vec![cycle, reversed];

        while self.h_edges.len() < self.edges.len() {
            let fragments = self.fragments();
            let face_sets: Vec<HashSet<usize>> = self
                .faces
                .iter()
                .map(|f| f.iter().copied().collect())
                .collect();
            let mut chosen: Option<(usize, usize)> = None;
            for (fi, frag) in fragments.iter().enumerate() {
                let admissible: Vec<usize> = face_sets
                    .iter()
                    .enumerate()
                    .filter(|(_, set)| frag.attachments.iter().all(|a| set.contains(a)))
                    .map(|(i, _)| i)
                    .collect();
                match admissible.len() {
                    0 => {
                        return Err(Error::NonPlanar(
                            "a fragment fits in no face of the partial embedding".into(),
                        ))
                    }
                    1 => {
                        chosen = Some((fi, admissible[0]));
                        break;
                    }
                    _ => {
                        if chosen.is_none() {
                            chosen = Some((fi, admissible[0]));
                        }
                    }
                }
            }
            let (fi, face) = chosen.expect("at least one fragment remains");
            let path = self.fragment_path(&fragments[fi]);
            self.embed_path(face, &path);
        }
        Ok(self.faces)
    }

    fn initial_cycle(&self) -> Vec<usize> {
        let start = 0;
        let first = self.adj[start][0];
        let mut parent = vec![usize::MAX; self.adj.len()];
        parent[first] = first;
        let mut queue = VecDeque::from([first]);
        'search: while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if x == first && y == start {
                    continue;
                }
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    if y == start {
                        break 'search;
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut path = vec![start];
        let mut cur = start;
        while cur != first {
            cur = parent[cur];
            path.push(cur);
        }
        // start -> ... -> first, closed by the edge first-start
        path
    }

    fn fragments(&self) -> Vec<Fragment> {
        let m = self.adj.len();
        let mut out = Vec::new();
        for &(u, v) in self.edges {
            if self.in_h[u] && self.in_h[v] && !self.h_edges.contains(&(u, v)) {
                out.push(Fragment {
                    attachments: vec![u, v],
                    chord: Some((u, v)),
                    component: Vec::new(),
                });
            }
        }
        let mut seen = vec![false; m];
        for s in 0..m {
            if self.in_h[s] || seen[s] {
                continue;
            }
            seen[s] = true;
            let mut component = vec![s];
            let mut attachments = Vec::new();
            let mut head = 0;
            while head < component.len() {
                let x = component[head];
                head += 1;
                for &y in &self.adj[x] {
                    if self.in_h[y] {
                        attachments.push(y);
                    } else if !seen[y] {
                        seen[y] = true;
                        component.push(y);
                    }
                }
            }
            attachments.sort_unstable();
            attachments.dedup();
            out.push(Fragment {
                attachments,
                chord: None,
                component,
            });
        }
        out
    }

    /// A path through the fragment joining two distinct attachments.
    fn fragment_path(&self, frag: &Fragment) -> Vec<usize> {
        if let Some((u, v)) = frag.chord {
            return vec![u, v];
        }
        let a = frag.attachments[0];
        let member: HashSet<usize> = frag.component.iter().copied().collect();
        let mut parent: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        for &x in &self.adj[a] {
            if member.contains(&x) && !parent.contains_key(&x) {
                parent.insert(x, a);
                queue.push_back(x);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if self.in_h[y] && y != a {
                    let mut path = vec![y, x];
                    let mut cur = x;
                    while parent[&cur] != a {
                        cur = parent[&cur];
                        path.push(cur);
                    }
                    path.push(a);
                    path.reverse();
                    return path;
                }
                if member.contains(&y) && !parent.contains_key(&y) {
                    parent.insert(y, x);
                    queue.push_back(y);
                }
            }
        }
        unreachable!("fragments of a biconnected block have two attachments")
    }

    fn embed_path(&mut self, face_index: usize, path: &[usize]) {
        let face = std::mem::take(&mut self.faces[face_index]);
        let a = path[0];
        let b = *path.last().unwrap();
        let k = face.len();
        let ia = face.iter().position(|&x| x == a).unwrap();
        let ib = face.iter().position(|&x| x == b).unwrap();
        let interior = &path[1..path.len() - 1];

        let mut first = Vec::new();
        let mut i = ia;
        loop {
            first.push(face[i]);
            if i == ib {
                break;
            }
            i = (i + 1) % k;
        }
        first.extend(interior.iter().rev());

        let mut second = Vec::new();
        let mut i = ib;
        loop {
            second.push(face[i]);
            if i == ia {
                break;
            }
            i = (i + 1) % k;
        }
        second.extend(interior.iter());

        self.faces[face_index] = first;
        self.faces.push(second);
        for w in path.windows(2) {
            self.in_h[w[0]] = true;
            self.in_h[w[1]] = true;
            self.h_edges.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PlanarGraph;

    #[test]
    fn blocks_of_bowtie() {
        // two triangles sharing vertex 2, plus a pendant edge
        let g = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4), (4, 5)]).unwrap();
        let mut sizes: Vec<usize> = biconnected_blocks(&g).iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 3, 3]);
        let p = PlanarGraph::embed(g).unwrap();
        assert_eq!(p.face_count(), 3);
    }

    #[test]
    fn embeds_octahedron_and_wheel() {
        let oct = Graph::new(
            6,
            &[
                (0, 1), (0, 2), (0, 3), (0, 4),
                (5, 1), (5, 2), (5, 3), (5, 4),
                (1, 2), (2, 3), (3, 4), (4, 1),
            ],
        )
        .unwrap();
        assert_eq!(PlanarGraph::embed(oct).unwrap().face_count(), 8);
        let mut wheel = vec![];
        for i in 1..=7 {
            wheel.push((0, i));
            wheel.push((i, i % 7 + 1));
        }
        let w = Graph::new(8, &wheel).unwrap();
        assert_eq!(PlanarGraph::embed(w).unwrap().face_count(), 8);
    }

    #[test]
    fn petersen_is_not_planar() {
        let mut edges = vec![];
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        let g = Graph::new(10, &edges).unwrap();
        assert!(matches!(PlanarGraph::embed(g), Err(Error::NonPlanar(_))));
    }
}
