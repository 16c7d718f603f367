//! Cover times: Monte Carlo estimation and an exact recursion over visited
//! sets for small graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest graph accepted by [`exact_cover_time`].
pub const EXACT_COVER_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverTimeEstimate {
    pub start_vertex: usize,
    pub trials: usize,
    pub mean: f64,
    /// Sample standard deviation over `sqrt(trials)`.
    pub std_error: f64,
    pub seed: u64,
    pub min_steps: u64,
    pub max_steps: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `t` under master seed `master`. Each trial owns its RNG, so
/// results do not depend on how trials are spread over threads.
pub fn trial_seed(master: u64, t: u64) -> u64 {
    splitmix64(master ^ splitmix64(t))
}

/// Compressed adjacency for the walk loop.
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Csr {
    fn new(g: &Graph) -> Self {
        let mut offsets = Vec::with_capacity(g.n() + 1);
        let mut targets = Vec::with_capacity(2 * g.edge_count());
        offsets.push(0);
        for v in 0..g.n() {
            targets.extend_from_slice(g.neighbors(v));
            offsets.push(targets.len());
        }
        Csr { offsets, targets }
    }

    fn walk<R: Rng>(&self, start: usize, rng: &mut R, visited: &mut [bool]) -> u64 {
        visited.fill(false);
        visited[start] = true;
        let mut remaining = visited.len() - 1;
        let mut v = start;
        let mut steps = 0u64;
        while remaining > 0 {
            let (lo, hi) = (self.offsets[v], self.offsets[v + 1]);
            v = self.targets[lo + rng.random_range(0..hi - lo)];
            steps += 1;
            if !visited[v] {
                visited[v] = true;
                remaining -= 1;
            }
        }
        steps
    }
}

/// Steps a simple random walk from `start` needs to visit every vertex.
pub fn cover_steps<R: Rng>(g: &Graph, start: usize, rng: &mut R) -> u64 {
    let mut visited = vec![false; g.n()];
    Csr::new(g).walk(start, rng, &mut visited)
}

/// Monte Carlo estimate of `E_start C`.
pub fn simulate_cover_time(g: &Graph, start: usize, trials: usize, seed: u64) -> Result<CoverTimeEstimate> {
    g.check_vertex(start)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let csr = Csr::new(g);
    let steps: Vec<u64> = (0..trials as u64)
        .into_par_iter()
        .map_init(
            || vec![false; g.n()],
            |visited, t| {
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, t));
                csr.walk(start, &mut rng, visited)
            },
        )
        .collect();
    let total: u128 = steps.iter().map(|&s| s as u128).sum();
    let mean = total as f64 / trials as f64;
    let std_error = if trials > 1 {
        let ss: f64 = steps.iter().map(|&s| (s as f64 - mean).powi(2)).sum();
        (ss / (trials - 1) as f64).sqrt() / (trials as f64).sqrt()
    } else {
        0.0
    };
    Ok(CoverTimeEstimate {
        start_vertex: start,
        trials,
        mean,
        std_error,
        seed,
        min_steps: steps.iter().copied().min().unwrap_or(0),
        max_steps: steps.iter().copied().max().unwrap_or(0),
    })
}

/// Exact `E_start C` by recursion over `(visited set, position)`.
///
/// For a visited set `S` and `v ∈ S`, the remaining time `T(S, v)` solves
/// `T(S, v) = 1 + (1/d_v) Σ_{w~v} T(S ∪ {w}, w)`; neighbours inside `S`
/// couple the unknowns of one set, so each set costs a small dense solve.
/// Sets are processed from the full set downwards.
pub fn exact_cover_time(g: &Graph, start: usize) -> Result<f64> {
    let n = g.n();
    g.check_vertex(start)?;
    if n > EXACT_COVER_LIMIT {
        return Err(Error::TooLargeForExact {
            got: n,
            max: EXACT_COVER_LIMIT,
        });
    }
    let full = (1usize << n) - 1;
    let mut table = vec![0.0f64; (full + 1) * n];
    for set in (1..full).rev() {
        let members: Vec<usize> = (0..n).filter(|&v| set >> v & 1 == 1).collect();
        let k = members.len();
        let mut slot = vec![usize::MAX; n];
        for (i, &v) in members.iter().enumerate() {
            slot[v] = i;
        }
        let mut a = vec![0.0; k * k];
        let mut b = vec![0.0; k];
        for (i, &v) in members.iter().enumerate() {
            let d = g.degree(v) as f64;
            a[i * k + i] = 1.0;
            b[i] = 1.0;
            for &w in g.neighbors(v) {
                if slot[w] != usize::MAX {
                    a[i * k + slot[w]] -= 1.0 / d;
                } else {
                    b[i] += table[(set | 1 << w) * n + w] / d;
                }
            }
        }
        let x = gauss_solve(a, b, k);
        for (i, &v) in members.iter().enumerate() {
            table[set * n + v] = x[i];
        }
    }
    Ok(table[(1 << start) * n + start])
}

fn gauss_solve(mut a: Vec<f64>, mut b: Vec<f64>, k: usize) -> Vec<f64> {
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| a[i * k + col].abs().total_cmp(&a[j * k + col].abs()))
            .unwrap();
        if pivot != col {
            for j in 0..k {
                a.swap(col * k + j, pivot * k + j);
            }
            b.swap(col, pivot);
        }
        let p = a[col * k + col];
        for row in col + 1..k {
            let f = a[row * k + col] / p;
            if f != 0.0 {
                for j in col..k {
                    a[row * k + j] -= f * a[col * k + j];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; k];
    for row in (0..k).rev() {
        let s: f64 = (row + 1..k).map(|j| a[row * k + j] * x[j]).sum();
        x[row] = (b[row] - s) / a[row * k + row];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    #[test]
    fn single_edge_covers_in_one_step() {
        let g = generate(Family::Path(2)).unwrap();
        let est = simulate_cover_time(&g, 0, 50, 7).unwrap();
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.std_error, 0.0);
        assert!((exact_cover_time(&g, 0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_small_cases() {
        let k3 = generate(Family::Cycle(3)).unwrap();
        assert!((exact_cover_time(&k3, 0).unwrap() - 3.0).abs() < 1e-12);
        let c4 = generate(Family::Cycle(4)).unwrap();
        assert!((exact_cover_time(&c4, 0).unwrap() - 6.0).abs() < 1e-12);
        // path 0-1-2 from the middle: reach an end in 1 step, then H(end, far end) = 4
        let p3 = generate(Family::Path(3)).unwrap();
        assert!((exact_cover_time(&p3, 1).unwrap() - 5.0).abs() < 1e-12);
        assert!((exact_cover_time(&p3, 0).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn simulation_is_reproducible() {
        let g = generate(Family::Grid(1)).unwrap();
        let a = simulate_cover_time(&g, 4, 500, 11).unwrap();
        let b = simulate_cover_time(&g, 4, 500, 11).unwrap();
        assert_eq!(a, b);
        let c = simulate_cover_time(&g, 4, 500, 12).unwrap();
        assert_ne!(a.mean, c.mean);
        assert!(a.mean >= (g.n() - 1) as f64);
    }

    #[test]
    fn rejects_zero_trials_and_large_exact() {
        let g = generate(Family::Path(4)).unwrap();
        assert!(simulate_cover_time(&g, 0, 0, 0).is_err());
        let big = generate(Family::Path(13)).unwrap();
        assert!(matches!(exact_cover_time(&big, 0), Err(Error::TooLargeForExact { .. })));
    }
}
