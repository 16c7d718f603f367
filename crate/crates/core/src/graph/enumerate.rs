//! Small connected graphs for exhaustive and randomized checks. These need
//! not be planar; the electrical and walk routines accept any graph.

use rand::Rng;

use super::Graph;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn from_mask(n: usize, pairs: &[(usize, usize)], mask: u64) -> Option<Graph> {
    let edges: Vec<_> = (0..pairs.len())
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| pairs[i])
        .collect();
    Graph::new(n, &edges).ok()
}

/// Every connected graph on vertices `0..n`, labelled, so isomorphic copies
/// repeat. Practical for `n <= 6`.
pub fn labelled_connected_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 7, "labelled enumeration is limited to 7 vertices");
    let pairs = pairs(n);
    (0..1u64 << pairs.len())
        .filter_map(|mask| from_mask(n, &pairs, mask))
        .collect()
}

/// One representative of every isomorphism class of connected graphs on
/// `n` vertices. Practical for `n <= 6`.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 7, "isomorphism-class enumeration is limited to 7 vertices");
    let pairs = pairs(n);
    let mut index = vec![vec![0usize; n]; n];
    for (i, &(u, v)) in pairs.iter().enumerate() {
        index[u][v] = i;
        index[v][u] = i;
    }
    let perms = permutations(n);
    let canonical = |mask: u64| {
        perms
            .iter()
            .map(|p| {
                (0..pairs.len())
                    .filter(|&i| mask >> i & 1 == 1)
                    .fold(0u64, |acc, i| acc | 1 << index[p[pairs[i].0]][p[pairs[i].1]])
            })
            .min()
            .unwrap()
    };
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0..1u64 << pairs.len() {
        if mask.count_ones() as usize + 1 < n {
            continue;
        }
        let Some(g) = from_mask(n, &pairs, mask) else { continue };
        if seen.insert(canonical(mask)) {
            out.push(g);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut p, &mut out);
    out
}

fn heap_permute(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(p.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, p, out);
        let j = if k.is_multiple_of(2) { i } else { 0 };
        p.swap(j, k - 1);
    }
}

/// Random connected graph: a random recursive tree plus every other pair
/// independently with probability `p`.
pub fn random_connected<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    assert!(n >= 1);
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    let tree: std::collections::BTreeSet<_> = edges.iter().copied().collect();
    for (u, v) in pairs(n) {
        if !tree.contains(&(u, v)) && rng.random_bool(p) {
            edges.push((u, v));
        }
    }
    Graph::new(n, &edges).expect("a spanning tree plus extra pairs is simple and connected")
}
