//! Selection of a large vertex subset with pairwise resistance of order
//! `log |W|`, driven by the radii of a circle packing.
//!
//! Vertices of `W` are binned by radius on the scale `n^s` with `n = |W|`,
//! the heavier parity class of bins is kept, and inside each kept bin a
//! greedy maximal subset with disk distance at least `n^{s(j+1)}` is chosen.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::electrical::{ElectricalSystem, DEFAULT_SOLVER_TOL};
use crate::error::{Error, Result};
use crate::graph::Triangulation;
use crate::packing::{diagnostics, CirclePacking};

pub const DEFAULT_S: f64 = 1.0 / 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparationConfig {
    /// Bin exponent.
    pub s: f64,
    /// Tolerance of the exact resistance solves used for verification.
    pub resistance_tol: f64,
}

impl Default for SeparationConfig {
    fn default() -> Self {
        SeparationConfig {
            s: DEFAULT_S,
            resistance_tol: DEFAULT_SOLVER_TOL,
        }
    }
}

impl SeparationConfig {
    pub fn new(s: f64) -> Result<Self> {
        let cfg = SeparationConfig {
            s,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s > 0.0 && self.s < 0.2) {
            return Err(Error::InvalidParameter(format!("s = {} is outside (0, 1/5)", self.s)));
        }
        if !(self.resistance_tol > 0.0) {
            return Err(Error::InvalidParameter("resistance tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Bin of a radius: the unique `j` with `r ∈ (n^{s(j-1)}, n^{sj}]`.
pub fn bin_index(radius: f64, n: usize, s: f64) -> i64 {
    let scale = s * (n as f64).ln();
    let mut j = (radius.ln() / scale).ceil() as i64;
    let base = n as f64;
    while radius <= base.powf(s * (j - 1) as f64) {
        j -= 1;
    }
    while radius > base.powf(s * j as f64) {
        j += 1;
    }
    j
}

/// Partition of `w` into radius bins, with `n = |w|`.
pub fn radius_bins(p: &CirclePacking, w: &[usize], s: f64) -> Result<BTreeMap<i64, Vec<usize>>> {
    match w.len() {
        0 => return Err(Error::EmptyW),
        1 => return Err(Error::SubsetTooSmall { got: 1, min: 2 }),
        _ => {}
    }
    let mut bins: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for &v in w {
        if v >= p.len() {
            return Err(Error::VertexOutOfRange { vertex: v, n: p.len() });
        }
        bins.entry(bin_index(p.radius(v), w.len(), s)).or_default().push(v);
    }
    for members in bins.values_mut() {
        members.sort_unstable();
    }
    Ok(bins)
}

/// Greedy maximal subset whose members are pairwise at disk distance at
/// least `min_distance`. Candidates are taken by decreasing radius, ties by
/// ascending index.
pub fn greedy_separated_subset(p: &CirclePacking, members: &[usize], min_distance: f64) -> Vec<usize> {
    let mut order = members.to_vec();
    order.sort_by(|&a, &b| p.radius(b).total_cmp(&p.radius(a)).then(a.cmp(&b)));
    let mut chosen: Vec<usize> = Vec::new();
    for v in order {
        if chosen.iter().all(|&u| p.disk_distance(u, v) >= min_distance) {
            chosen.push(v);
        }
    }
    chosen
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn of(j: i64) -> Self {
        if j.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Greedy selection inside one kept bin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinSelection {
    pub bin: i64,
    pub size: usize,
    pub min_distance: f64,
    pub selected: Vec<usize>,
}

/// A pair of vertices two or more bins apart that are nevertheless adjacent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GapViolation {
    pub u: usize,
    pub v: usize,
    pub bin_u: i64,
    pub bin_v: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparatedSet {
    pub members: Vec<usize>,
    pub source_size: usize,
    pub s: f64,
    pub bins: BTreeMap<i64, Vec<usize>>,
    pub parity: Option<Parity>,
    pub selections: Vec<BinSelection>,
    /// `log |V'| / log |W|`.
    pub empirical_c: Option<f64>,
    /// `min R / log |W|` over distinct members.
    pub empirical_r: Option<f64>,
    pub min_pairwise_resistance: Option<f64>,
    pub ring_ratio: f64,
    /// Whether `n^s` dominates the ring ratio, the regime in which bins two
    /// apart cannot be adjacent.
    pub two_bin_gap_applicable: bool,
    pub two_bin_gap_violations: Vec<GapViolation>,
}

/// Runs the full selection on the packed triangulation `t` and measures the
/// result with exact resistances in `t`.
pub fn select_separated(
    p: &CirclePacking,
    t: &Triangulation,
    w: &[usize],
    config: &SeparationConfig,
) -> Result<SeparatedSet> {
    config.validate()?;
    let g = t.graph();
    if p.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: p.len(),
        });
    }
    let mut w = w.to_vec();
    w.sort_unstable();
    w.dedup();
    for &v in &w {
        g.check_vertex(v)?;
    }
    let ring_ratio = diagnostics(p, t).ring_ratio;
    if w.is_empty() {
        return Err(Error::EmptyW);
    }
    if w.len() == 1 {
        return Ok(SeparatedSet {
            members: w.clone(),
            source_size: 1,
            s: config.s,
            bins: BTreeMap::from([(0, w)]),
            parity: None,
            selections: Vec::new(),
            empirical_c: None,
            empirical_r: None,
            min_pairwise_resistance: None,
            ring_ratio,
            two_bin_gap_applicable: false,
            two_bin_gap_violations: Vec::new(),
        });
    }

    let n = w.len();
    let bins = radius_bins(p, &w, config.s)?;
    let mut bin_of = vec![None; g.n()];
    for (&j, members) in &bins {
        for &v in members {
            bin_of[v] = Some(j);
        }
    }
    let mut violations = Vec::new();
    for &(u, v) in g.edges() {
        if let (Some(bu), Some(bv)) = (bin_of[u], bin_of[v]) {
            if (bu - bv).abs() >= 2 {
                violations.push(GapViolation {
                    u,
                    v,
                    bin_u: bu,
                    bin_v: bv,
                });
            }
        }
    }
    let two_bin_gap_applicable = (n as f64).powf(config.s) >= ring_ratio;
    if two_bin_gap_applicable && !violations.is_empty() {
        log::warn!("{} adjacent pairs lie two or more bins apart", violations.len());
    }

    let even: usize = bins.iter().filter(|(&j, _)| Parity::of(j) == Parity::Even).map(|(_, m)| m.len()).sum();
    let parity = if 2 * even >= n { Parity::Even } else { Parity::Odd };

    let mut selections = Vec::new();
    let mut members = Vec::new();
    for (&j, bin) in bins.iter().filter(|(&j, _)| Parity::of(j) == parity) {
        let min_distance = (n as f64).powf(config.s * (j + 1) as f64);
        let selected = greedy_separated_subset(p, bin, min_distance);
        members.extend_from_slice(&selected);
        selections.push(BinSelection {
            bin: j,
            size: bin.len(),
            min_distance,
            selected,
        });
    }
    members.sort_unstable();

    let log_w = (n as f64).ln();
    let (min_r, empirical_r) = if members.len() >= 2 {
        let report = verify_separation(
            &ElectricalSystem::new(g).with_tolerance(config.resistance_tol),
            &members,
            0.0,
        )?;
        (Some(report.min_resistance), Some(report.min_resistance / log_w))
    } else {
        (None, None)
    };
    Ok(SeparatedSet {
        empirical_c: Some((members.len() as f64).ln() / log_w),
        members,
        source_size: n,
        s: config.s,
        bins,
        parity: Some(parity),
        selections,
        empirical_r,
        min_pairwise_resistance: min_r,
        ring_ratio,
        two_bin_gap_applicable,
        two_bin_gap_violations: violations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationReport {
    pub min_resistance: f64,
    pub argmin: (usize, usize),
    pub threshold: f64,
    pub passes: bool,
}

/// Exact pairwise resistances over `members` against `threshold`.
pub fn verify_separation(sys: &ElectricalSystem<'_>, members: &[usize], threshold: f64) -> Result<SeparationReport> {
    if members.len() < 2 {
        return Err(Error::SubsetTooSmall {
            got: members.len(),
            min: 2,
        });
    }
    let matrix = sys.resistances_among(members)?;
    let mut best = (f64::INFINITY, (members[0], members[1]));
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let r = matrix.at(i, j);
            if r < best.0 {
                best = (r, (members[i], members[j]));
            }
        }
    }
    Ok(SeparationReport {
        min_resistance: best.0,
        argmin: best.1,
        threshold,
        passes: best.0 >= threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, triangulate, Family};
    use crate::packing::{compute_packing, default_outer_face};

    fn packed(family: Family) -> (Triangulation, CirclePacking) {
        let t = triangulate(&generate(family).unwrap()).unwrap();
        let p = compute_packing(&t, default_outer_face(&t), 1e-10).unwrap();
        (t, p)
    }

    #[test]
    fn bin_boundaries() {
        let s = 1.0 / 6.0;
        assert_eq!(bin_index(1.0, 9, s), 0);
        assert_eq!(bin_index(9f64.powf(2.0 * s), 9, s), 2);
        assert_eq!(bin_index(9f64.powf(2.0 * s) * 1.000001, 9, s), 3);
        assert_eq!(bin_index((2.0 * 3f64.sqrt() - 3.0) / 3.0, 4, s), -8);
    }

    #[test]
    fn k4_bins() {
        let (t, p) = packed(Family::Tetrahedron);
        let bins = radius_bins(&p, &[0, 1, 2, 3], 1.0 / 6.0).unwrap();
        let inner: Vec<usize> = (0..4).filter(|v| !p.outer_face().contains(v)).collect();
        assert_eq!(bins[&-8], inner);
        assert_eq!(bins[&0].len(), 3);
        assert!(radius_bins(&p, &[], 0.1).is_err());
        let sel = select_separated(&p, &t, &[2], &SeparationConfig::default()).unwrap();
        assert_eq!(sel.members, vec![2]);
        assert!(sel.empirical_r.is_none());
    }

    #[test]
    fn greedy_keeps_larger_disk() {
        let (_, p) = packed(Family::Tetrahedron);
        let inner = (0..4).find(|v| !p.outer_face().contains(v)).unwrap();
        let a = p.outer_face()[0];
        assert_eq!(greedy_separated_subset(&p, &[inner, a], 0.5), vec![a]);
        assert_eq!(greedy_separated_subset(&p, &[inner], 0.5), vec![inner]);
        let mut outer = p.outer_face().to_vec();
        outer.sort_unstable();
        assert_eq!(greedy_separated_subset(&p, &outer, 0.5), vec![outer[0]]);
    }

    #[test]
    fn grid_pipeline_separates() {
        let (t, p) = packed(Family::Grid(4));
        let w: Vec<usize> = (0..t.original_n()).collect();
        let sel = select_separated(&p, &t, &w, &SeparationConfig::default()).unwrap();
        assert!(sel.members.iter().all(|v| w.contains(v)));
        let total: usize = sel.bins.values().map(Vec::len).sum();
        assert_eq!(total, w.len());
        assert!(sel.members.len() as f64 >= (w.len() as f64).powf(1.0 / 6.0) / 2.0);
        assert!(sel.empirical_r.unwrap() > 0.0);
        for sel_j in &sel.selections {
            let bound = sel_j.size as f64 * (w.len() as f64).powf(-4.0 / 6.0) / 9.0;
            assert!(sel_j.selected.len() as f64 >= bound);
        }
    }

    #[test]
    fn verify_examples() {
        let path = generate(Family::Path(9)).unwrap();
        let sys = ElectricalSystem::new(&path);
        let rep = verify_separation(&sys, &[0, 8], 5.0).unwrap();
        assert!((rep.min_resistance - 8.0).abs() < 1e-9);
        assert!(rep.passes);
        let (t, _) = packed(Family::Grid(1));
        let sys = ElectricalSystem::new(t.graph());
        let (u, v) = t.graph().edges()[0];
        let rep = verify_separation(&sys, &[u, v], 2.0).unwrap();
        assert!(rep.min_resistance <= 1.0);
        assert!(!rep.passes);
    }

    #[test]
    fn config_bounds() {
        assert!(SeparationConfig::new(0.2).is_err());
        assert!(SeparationConfig::new(0.0).is_err());
        assert!(SeparationConfig::new(0.1).is_ok());
    }
}
