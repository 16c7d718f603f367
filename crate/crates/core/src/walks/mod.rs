//! Hitting, commute and difference times of the simple random walk.
//!
//! `H(u, v)` is obtained from the first-step equations
//! `h(v) = 0`, `h(u) = 1 + (1/d_u) Σ_{w~u} h(w)`, which is the Laplacian
//! grounded at `v` with the degree vector as right-hand side. The
//! resistance route `H(u, v) = ½ Σ_w d_w (R(u,v) + R(v,w) - R(u,w))` is
//! kept separate so the two can check each other.

mod cover;

use rayon::prelude::*;
use serde::Serialize;

use crate::electrical::{ElectricalSystem, ResistanceMatrix};
use crate::error::{Error, Result};
use crate::graph::Graph;

pub use cover::{cover_steps, exact_cover_time, simulate_cover_time, trial_seed, CoverTimeEstimate, EXACT_COVER_LIMIT};

/// `H(·, target)` for every start vertex.
pub fn hitting_times_exact(sys: &ElectricalSystem<'_>, target: usize) -> Result<Vec<f64>> {
    let g = sys.graph();
    g.check_vertex(target)?;
    let rhs: Vec<f64> = (0..g.n()).map(|u| g.degree(u) as f64).collect();
    sys.grounded(target)?.solve(&rhs)
}

/// Full matrix of exact hitting times.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkTimes {
    n: usize,
    /// Row-major, `hitting[u * n + v] = H(u, v)`.
    hitting: Vec<f64>,
}

impl WalkTimes {
    /// One grounded solve per target.
    pub fn exact(sys: &ElectricalSystem<'_>) -> Result<Self> {
        let n = sys.graph().n();
        let columns: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|v| hitting_times_exact(sys, v))
            .collect::<Result<_>>()?;
        let mut hitting = vec![0.0; n * n];
        for (v, col) in columns.iter().enumerate() {
            for (u, &h) in col.iter().enumerate() {
                hitting[u * n + v] = h;
            }
        }
        Ok(WalkTimes { n, hitting })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hitting(&self, u: usize, v: usize) -> f64 {
        self.hitting[u * self.n + v]
    }

    /// `C(u, v) = H(u, v) + H(v, u)`.
    pub fn commute(&self, u: usize, v: usize) -> f64 {
        self.hitting(u, v) + self.hitting(v, u)
    }

    /// `D(u, v) = H(u, v) - H(v, u)`.
    pub fn difference(&self, u: usize, v: usize) -> f64 {
        self.hitting(u, v) - self.hitting(v, u)
    }

    pub fn max_hitting(&self) -> f64 {
        self.hitting.iter().copied().fold(0.0, f64::max)
    }

    /// Smallest `H(u, v)` over distinct `u, v` in `subset`.
    pub fn min_hitting_among(&self, subset: &[usize]) -> Option<f64> {
        let mut best: Option<f64> = None;
        for &u in subset {
            for &v in subset {
                if u != v {
                    let h = self.hitting(u, v);
                    best = Some(best.map_or(h, |b| b.min(h)));
                }
            }
        }
        best
    }
}

/// `½ Σ_w d_w (R(u,v) + R(v,w) - R(u,w))` from a full resistance matrix.
pub fn tetali_hitting(g: &Graph, r: &ResistanceMatrix, u: usize, v: usize) -> f64 {
    let ruv = r.at(u, v);
    0.5 * (0..g.n())
        .map(|w| g.degree(w) as f64 * (ruv + r.at(v, w) - r.at(u, w)))
        .sum::<f64>()
}

/// `H(u, v)` through resistances only.
pub fn hitting_via_tetali(sys: &ElectricalSystem<'_>, u: usize, v: usize) -> Result<f64> {
    let g = sys.graph();
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Err(Error::SameVertex);
    }
    let r = sys.resistance_matrix()?;
    Ok(tetali_hitting(g, &r, u, v))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommuteDifference {
    /// `H(u, v) + H(v, u)` from the first-step equations.
    pub commute: f64,
    /// `2 |E| R(u, v)`.
    pub commute_from_resistance: f64,
    /// `H(u, v) - H(v, u)`.
    pub difference: f64,
}

pub fn commute_and_difference(sys: &ElectricalSystem<'_>, u: usize, v: usize) -> Result<CommuteDifference> {
    let g = sys.graph();
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Err(Error::SameVertex);
    }
    let huv = hitting_times_exact(sys, v)?[u];
    let hvu = hitting_times_exact(sys, u)?[v];
    let r = sys.effective_resistance(u, v)?;
    Ok(CommuteDifference {
        commute: huv + hvu,
        commute_from_resistance: 2.0 * g.edge_count() as f64 * r,
        difference: huv - hvu,
    })
}

/// Vertices sorted by `D(anchor, ·)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DifferenceOrdering {
    pub anchor: usize,
    pub order: Vec<usize>,
    /// `D(anchor, v)` indexed by vertex.
    pub differences: Vec<f64>,
    /// `min_{i <= j} D(v_i, v_j)`; non-negative up to rounding.
    pub min_forward_difference: f64,
}

/// Orders the vertices by ascending `D(anchor, ·)`, ties by index, and
/// records the smallest `D(v_i, v_j)` over `i <= j`, which additivity of
/// difference times makes non-negative.
pub fn difference_ordering(times: &WalkTimes, anchor: usize) -> Result<DifferenceOrdering> {
    let n = times.n();
    if anchor >= n {
        return Err(Error::VertexOutOfRange { vertex: anchor, n });
    }
    let differences: Vec<f64> = (0..n).map(|v| times.difference(anchor, v)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| differences[a].total_cmp(&differences[b]).then(a.cmp(&b)));
    // values within rounding of each other count as ties and go by index
    let tie_tol = 1e-9 * times.max_hitting().max(1.0);
    let mut start = 0;
    for i in 1..=n {
        if i == n || differences[order[i]] - differences[order[i - 1]] > tie_tol {
            order[start..i].sort_unstable();
            start = i;
        }
    }
    let mut min_forward = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            min_forward = min_forward.min(times.difference(order[i], order[j]));
        }
    }
    Ok(DifferenceOrdering {
        anchor,
        order,
        differences,
        min_forward_difference: min_forward,
    })
}

/// `h_k = Σ_{i=1}^k 1/i`.
pub fn harmonic(k: usize) -> f64 {
    (1..=k).map(|i| 1.0 / i as f64).sum()
}

/// Matthews' bracket on the expected cover time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatthewsBounds {
    /// `h_{n-1} max_{u,v} H(u, v)`, bounding `max_v E_v C`.
    pub upper: f64,
    /// `h_{|V0|-1} min_{u≠v ∈ V0} H(u, v)`, bounding `min_v E_v C`.
    pub lower: f64,
    pub subset: Vec<usize>,
}

impl MatthewsBounds {
    pub fn from_times(times: &WalkTimes, subset: Option<&[usize]>) -> Result<Self> {
        let n = times.n();
        let subset: Vec<usize> = match subset {
            Some(s) => {
                let mut s = s.to_vec();
                s.sort_unstable();
                s.dedup();
                if let Some(&bad) = s.iter().find(|&&v| v >= n) {
                    return Err(Error::VertexOutOfRange { vertex: bad, n });
                }
                s
            }
            None => (0..n).collect(),
        };
        if subset.len() < 2 {
            return Err(Error::SubsetTooSmall {
                got: subset.len(),
                min: 2,
            });
        }
        let lower = harmonic(subset.len() - 1) * times.min_hitting_among(&subset).unwrap_or(0.0);
        let upper = harmonic(n - 1) * times.max_hitting();
        Ok(MatthewsBounds { upper, lower, subset })
    }
}

pub fn matthews_bounds(sys: &ElectricalSystem<'_>, subset: Option<&[usize]>) -> Result<MatthewsBounds> {
    MatthewsBounds::from_times(&WalkTimes::exact(sys)?, subset)
}

/// `d̄ n (n - 1)` against `6 n^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UpperBoundCheck {
    pub bound: f64,
    pub six_n_squared: f64,
    pub passes: bool,
}

pub fn planar_upper_bound_check(g: &Graph) -> UpperBoundCheck {
    let n = g.n() as f64;
    let bound = g.average_degree() * n * (n - 1.0);
    let six_n_squared = 6.0 * n * n;
    UpperBoundCheck {
        bound,
        six_n_squared,
        passes: bound < six_n_squared,
    }
}
