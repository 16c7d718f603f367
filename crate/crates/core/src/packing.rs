//! Circle packings of triangulations.
//!
//! The three disks of a chosen outer face are held at a fixed radius
//! (1 by default) and every other radius is iterated until the angles of
//! the triangles around each interior vertex sum to `2π`. Each sweep applies
//! the uniform-neighbour update of Collins and Stephenson: a vertex of
//! degree `k` with angle sum `θ` is resized so that `k` equal neighbours
//! of the matching radius would give an angle sum of exactly `2π`. When
//! successive sweeps move the radii in nearly the same direction the update
//! is extrapolated geometrically.
//!
//! Centres are then laid out breadth-first, starting from the outer face
//! placed counter-clockwise, with every inner face clockwise.

use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{PlanarGraph, Triangulation};

pub const DEFAULT_ANGLE_TOL: f64 = 1e-10;
pub const DEFAULT_LAYOUT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_SWEEPS: usize = 1_000_000;
/// Tightest angle-sum tolerance tried when the layout misses its target;
/// close to the rounding noise of a sum of a dozen angles.
const ANGLE_TOL_FLOOR: f64 = 1e-14;
const STALL_SWEEPS: usize = 2000;
const REFINE_SWEEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PackingOptions {
    /// Tolerance on `|θ_v - 2π|` for interior vertices.
    pub angle_tol: f64,
    /// Tolerance on tangency and overlap after layout.
    pub layout_tol: f64,
    pub boundary_radius: f64,
    pub max_sweeps: usize,
    pub accelerate: bool,
}

impl Default for PackingOptions {
    fn default() -> Self {
        PackingOptions {
            angle_tol: DEFAULT_ANGLE_TOL,
            layout_tol: DEFAULT_LAYOUT_TOL,
            boundary_radius: 1.0,
            max_sweeps: DEFAULT_MAX_SWEEPS,
            accelerate: true,
        }
    }
}

/// Disk centres and radii realising the tangency pattern of a triangulation.
#[derive(Debug, Clone, PartialEq)]
pub struct CirclePacking {
    centers: Vec<[f64; 2]>,
    radii: Vec<f64>,
    outer_face: [usize; 3],
    residual: f64,
    iterations: usize,
    angle_error: f64,
}

impl CirclePacking {
    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn center(&self, v: usize) -> [f64; 2] {
        self.centers[v]
    }

    pub fn radius(&self, v: usize) -> f64 {
        self.radii[v]
    }

    pub fn centers(&self) -> &[[f64; 2]] {
        &self.centers
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn outer_face(&self) -> [usize; 3] {
        self.outer_face
    }

    /// Largest tangency error `| |z_u - z_v| - (r_u + r_v) |` over edges.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Largest `|θ_v - 2π|` over interior vertices at termination.
    pub fn angle_error(&self) -> f64 {
        self.angle_error
    }

    /// `max(0, |z_u - z_v| - r_u - r_v)`.
    pub fn disk_distance(&self, u: usize, v: usize) -> f64 {
        let (a, b) = (self.centers[u], self.centers[v]);
        ((a[0] - b[0]).hypot(a[1] - b[1]) - self.radii[u] - self.radii[v]).max(0.0)
    }

    /// Largest overlap `r_u + r_v - |z_u - z_v|` over non-adjacent pairs, or
    /// zero when all such disks are apart.
    pub fn max_overlap(&self, t: &Triangulation) -> f64 {
        let g = t.graph();
        let mut worst: f64 = 0.0;
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                if !g.has_edge(u, v) {
                    let (a, b) = (self.centers[u], self.centers[v]);
                    let d = (a[0] - b[0]).hypot(a[1] - b[1]);
                    worst = worst.max(self.radii[u] + self.radii[v] - d);
                }
            }
        }
        worst
    }

    pub fn to_file(&self) -> PackingFile {
        PackingFile {
            centers: self.centers.clone(),
            radii: self.radii.clone(),
            outer_face: self.outer_face,
            residual: self.residual,
        }
    }
}

/// On-disk packing format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingFile {
    pub centers: Vec<[f64; 2]>,
    pub radii: Vec<f64>,
    pub outer_face: [usize; 3],
    pub residual: f64,
}

impl PackingFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn into_packing(self) -> Result<CirclePacking> {
        if self.centers.len() != self.radii.len() {
            return Err(Error::LengthMismatch {
                expected: self.radii.len(),
                got: self.centers.len(),
            });
        }
        Ok(CirclePacking {
            centers: self.centers,
            radii: self.radii,
            outer_face: self.outer_face,
            residual: self.residual,
            iterations: 0,
            angle_error: 0.0,
        })
    }
}

/// Angle at the disk of radius `rv` in the triangle of centres formed with
/// tangent disks `ra` and `rb`.
fn corner_angle(rv: f64, ra: f64, rb: f64) -> f64 {
    let s = (ra * rb / ((rv + ra) * (rv + rb))).sqrt();
    2.0 * s.clamp(-1.0, 1.0).asin()
}

fn angle_sum(rotation: &[usize], radii: &[f64], v: usize) -> f64 {
    let k = rotation.len();
    (0..k)
        .map(|i| corner_angle(radii[v], radii[rotation[i]], radii[rotation[(i + 1) % k]]))
        .sum()
}

/// The outer face used when none is given: the first traced face.
pub fn default_outer_face(t: &Triangulation) -> [usize; 3] {
    t.faces()[0]
}

/// Packs `t` with the disks of `outer_face` at radius 1.
pub fn compute_packing(t: &Triangulation, outer_face: [usize; 3], tol: f64) -> Result<CirclePacking> {
    compute_packing_with(
        t,
        outer_face,
        &PackingOptions {
            angle_tol: tol,
            ..PackingOptions::default()
        },
    )
}

pub fn compute_packing_with(
    t: &Triangulation,
    outer_face: [usize; 3],
    opts: &PackingOptions,
) -> Result<CirclePacking> {
    if !(opts.angle_tol > 0.0) || !(opts.boundary_radius > 0.0) {
        return Err(Error::InvalidParameter(
            "tolerance and boundary radius must be positive".into(),
        ));
    }
    let g = t.graph();
    let n = g.n();
    let [a, b, c] = outer_face;
    for v in outer_face {
        g.check_vertex(v)?;
    }
    let face = t
        .face_index(a, b, c)
        .map(|i| t.faces()[i])
        .ok_or(Error::NotAFace(a, b, c))?;

    let mut is_outer = vec![false; n];
    for v in face {
        is_outer[v] = true;
    }
    let interior: Vec<usize> = (0..n).filter(|&v| !is_outer[v]).collect();
    let mut radii = vec![opts.boundary_radius; n];

    // Layout errors accumulate along the placement order, so the angle sums
    // are tightened until the tangency residual meets its own target.
    let mut angle_tol = opts.angle_tol;
    let mut iterations = 0;
    let (centers, residual, angle_error) = loop {
        let (sweeps, angle_error) = relax_radii(g.rotations(), &interior, &mut radii, angle_tol, opts)?;
        iterations += sweeps;
        let mut centers = layout(t, face, &radii);
        let residual = refine_layout(t, face, &radii, &mut centers);
        if residual <= opts.layout_tol || angle_tol <= ANGLE_TOL_FLOOR {
            break (centers, residual, angle_error);
        }
        log::debug!("tangency residual {residual:e} at angle tolerance {angle_tol:e}; tightening");
        angle_tol = (angle_tol / 10.0).max(ANGLE_TOL_FLOOR);
    };
    let packing = CirclePacking {
        centers,
        radii,
        outer_face: face,
        residual,
        iterations,
        angle_error,
    };
    if !(residual <= opts.layout_tol) {
        return Err(Error::NoConvergence {
            iterations,
            error: residual,
        });
    }
    let overlap = packing.max_overlap(t);
    if overlap > opts.layout_tol {
        return Err(Error::NoConvergence {
            iterations,
            error: overlap,
        });
    }
    Ok(packing)
}

fn tangency_residual(g: &PlanarGraph, centers: &[[f64; 2]], radii: &[f64]) -> f64 {
    g.edges()
        .iter()
        .map(|&(u, v)| {
            let (p, q) = (centers[u], centers[v]);
            ((p[0] - q[0]).hypot(p[1] - q[1]) - radii[u] - radii[v]).abs()
        })
        .fold(0.0, f64::max)
}

fn relax_radii(
    rotation: &[Vec<usize>],
    interior: &[usize],
    radii: &mut [f64],
    angle_tol: f64,
    opts: &PackingOptions,
) -> Result<(usize, f64)> {
    let max_error = |radii: &[f64]| {
        interior
            .iter()
            .map(|&v| (angle_sum(&rotation[v], radii, v) - TAU).abs())
            .fold(0.0, f64::max)
    };
    let mut error = max_error(radii);
    let mut prev_delta: Option<Vec<f64>> = None;
    let mut delta = vec![0.0; interior.len()];
    let mut sweeps = 0;
    let (mut best, mut best_at) = (error, 0);
    while error > angle_tol {
        // below the requested tolerance, stop once rounding noise stalls progress
        if error <= opts.angle_tol && sweeps - best_at > STALL_SWEEPS {
            break;
        }
        if error < 0.5 * best {
            best = error;
            best_at = sweeps;
        }
        if sweeps >= opts.max_sweeps {
            return Err(Error::NoConvergence {
                iterations: sweeps,
                error,
            });
        }
        sweeps += 1;
        for (slot, &v) in interior.iter().enumerate() {
            let k = rotation[v].len() as f64;
            let theta = angle_sum(&rotation[v], radii, v);
            let beta = (theta / (2.0 * k)).sin();
            let delta_k = (PI / k).sin();
            let neighbour = radii[v] * beta / (1.0 - beta);
            let updated = neighbour * (1.0 - delta_k) / delta_k;
            delta[slot] = updated - radii[v];
            radii[v] = updated;
        }
        error = max_error(radii);

        if opts.accelerate {
            if let Some(prev) = prev_delta.take() {
                if let Some(factor) = extrapolation_factor(&prev, &delta, interior, radii) {
                    let saved: Vec<f64> = interior.iter().map(|&v| radii[v]).collect();
                    for (slot, &v) in interior.iter().enumerate() {
                        radii[v] += factor * delta[slot];
                    }
                    let extrapolated = max_error(radii);
                    if extrapolated < error {
                        error = extrapolated;
                    } else {
                        for (slot, &v) in interior.iter().enumerate() {
                            radii[v] = saved[slot];
                        }
                    }
                    continue;
                }
            }
            prev_delta = Some(delta.clone());
        }
    }
    Ok((sweeps, error))
}

/// Geometric extrapolation `λ / (1 - λ)` when the last two updates are
/// nearly parallel and shrinking, capped so no radius drops below half its
/// value.
fn extrapolation_factor(prev: &[f64], delta: &[f64], interior: &[usize], radii: &[f64]) -> Option<f64> {
    let norm = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let (np, nd) = (norm(prev), norm(delta));
    if np == 0.0 || nd == 0.0 {
        return None;
    }
    let cos = prev.iter().zip(delta).map(|(a, b)| a * b).sum::<f64>() / (np * nd);
    let lambda = nd / np;
    if cos < 0.99 || lambda >= 1.0 {
        return None;
    }
    let mut factor = lambda / (1.0 - lambda);
    for (slot, &v) in interior.iter().enumerate() {
        if delta[slot] < 0.0 {
            factor = factor.min(0.5 * radii[v] / -delta[slot]);
        }
    }
    (factor > 0.0).then_some(factor)
}

/// Places `new` tangent to `p` and `q`, to the right of the direction
/// `p -> q`.
fn place_right(centers: &[[f64; 2]], radii: &[f64], p: usize, q: usize, new: usize) -> [f64; 2] {
    let alpha = corner_angle(radii[p], radii[q], radii[new]);
    let (zp, zq) = (centers[p], centers[q]);
    let (dx, dy) = (zq[0] - zp[0], zq[1] - zp[1]);
    let len = dx.hypot(dy);
    let (ux, uy) = (dx / len, dy / len);
    let (s, c) = (-alpha).sin_cos();
    let dist = radii[p] + radii[new];
    [
        zp[0] + dist * (ux * c - uy * s),
        zp[1] + dist * (ux * s + uy * c),
    ]
}

fn layout(t: &Triangulation, outer: [usize; 3], radii: &[f64]) -> Vec<[f64; 2]> {
    let g = t.graph();
    let n = g.n();
    let mut centers = vec![[0.0; 2]; n];
    let mut placed = vec![false; n];
    let [o0, o1, o2] = outer;
    centers[o1] = [radii[o0] + radii[o1], 0.0];
    placed[o0] = true;
    placed[o1] = true;
    // the outer face runs counter-clockwise, so o2 sits to the left of o0 -> o1
    centers[o2] = place_right(&centers, radii, o1, o0, o2);
    placed[o2] = true;
    let mut outer_key = outer;
    outer_key.sort_unstable();
    let is_outer = |a: usize, b: usize, c: usize| {
        let mut k = [a, b, c];
        k.sort_unstable();
        k == outer_key
    };

    let mut queue = VecDeque::from([o0, o1, o2]);
    while let Some(v) = queue.pop_front() {
        let rot = g.rotation(v);
        let k = rot.len();
        for i in 0..k {
            // the oriented face (x, v, y)
            let (x, y) = (rot[i], rot[(i + 1) % k]);
            if is_outer(x, v, y) || placed[x] == placed[y] {
                continue;
            }
            if placed[x] {
                centers[y] = place_right(&centers, radii, x, v, y);
                placed[y] = true;
                queue.push_back(y);
            } else {
                centers[x] = place_right(&centers, radii, v, y, x);
                placed[x] = true;
                queue.push_back(x);
            }
        }
    }
    centers
}

/// Moves every interior center to the mean of the positions its incident
/// faces imply, repeating while the tangency residual keeps falling.
/// Returns the final residual.
fn refine_layout(t: &Triangulation, outer: [usize; 3], radii: &[f64], centers: &mut [[f64; 2]]) -> f64 {
    let g = t.graph();
    let mut residual = tangency_residual(g, centers, radii);
    for _ in 0..REFINE_SWEEPS {
        let previous: Vec<[f64; 2]> = centers.to_vec();
        for v in (0..g.n()).filter(|v| !outer.contains(v)) {
            let rot = g.rotation(v);
            let k = rot.len();
            let mut sum = [0.0; 2];
            for i in 0..k {
                // the face (x, v, y) read from y gives v to the right of y -> x
                let z = place_right(centers, radii, rot[(i + 1) % k], rot[i], v);
                sum[0] += z[0];
                sum[1] += z[1];
            }
            centers[v] = [sum[0] / k as f64, sum[1] / k as f64];
        }
        let refined = tangency_residual(g, centers, radii);
        if !(refined < 0.9 * residual) {
            if !(refined < residual) {
                centers.copy_from_slice(&previous);
            } else {
                residual = refined;
            }
            break;
        }
        residual = refined;
    }
    residual
}

/// Empirical Ring Lemma and separation ratios of a packing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PackingDiagnostics {
    /// Largest radius ratio across an edge.
    pub ring_ratio: f64,
    /// Smallest `dist(C_u, C_v) / max(r_u, r_v)` over non-adjacent pairs;
    /// absent when every pair is adjacent.
    pub min_nonneighbor_gap_ratio: Option<f64>,
    pub iterations: usize,
    pub final_angle_error: f64,
}

pub fn diagnostics(p: &CirclePacking, t: &Triangulation) -> PackingDiagnostics {
    let g = t.graph();
    let ring_ratio = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (p.radius(u), p.radius(v));
            a.max(b) / a.min(b)
        })
        .fold(1.0, f64::max);
    let mut gap: Option<f64> = None;
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if !g.has_edge(u, v) {
                let ratio = p.disk_distance(u, v) / p.radius(u).max(p.radius(v));
                gap = Some(gap.map_or(ratio, |g| g.min(ratio)));
            }
        }
    }
    PackingDiagnostics {
        ring_ratio,
        min_nonneighbor_gap_ratio: gap,
        iterations: p.iterations,
        final_angle_error: p.angle_error,
    }
}
