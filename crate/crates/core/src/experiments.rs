//! End-to-end runs: cover-time scaling against the planar bounds, the
//! separated-set pipeline and the identity checks between walk and
//! resistance quantities.

use serde::{Deserialize, Serialize};

use crate::electrical::{ElectricalSystem, DEFAULT_SOLVER_TOL};
use crate::error::{Error, Result};
use crate::graph::{generate, triangulate, Family, Graph};
use crate::packing::{compute_packing_with, default_outer_face, diagnostics, PackingOptions};
use crate::separation::{select_separated, verify_separation, Parity, SeparationConfig, DEFAULT_S};
use crate::walks::{difference_ordering, simulate_cover_time, tetali_hitting, MatthewsBounds, WalkTimes};
use crate::VERSION;

pub const DEFAULT_TRIALS: usize = 10_000;

/// Parameters shared by the experiment drivers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    /// Family template; its size is replaced by each entry of `sizes`.
    pub family: Family,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub solver_tol: f64,
    pub packing_tol: f64,
    pub s: f64,
    pub start: usize,
    /// Skip the all-pairs hitting computation behind the Matthews bounds.
    pub skip_matthews: bool,
}

impl ExperimentSpec {
    pub fn new(family: Family, sizes: Vec<usize>) -> Self {
        ExperimentSpec {
            family,
            sizes,
            trials: DEFAULT_TRIALS,
            seed: 0,
            solver_tol: DEFAULT_SOLVER_TOL,
            packing_tol: crate::packing::DEFAULT_ANGLE_TOL,
            s: DEFAULT_S,
            start: 0,
            skip_matthews: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("sizes must be strictly ascending".into()));
        }
        if !(self.solver_tol > 0.0 && self.packing_tol > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        Ok(())
    }

    fn families(&self) -> Vec<Family> {
        if self.family.size().is_none() {
            vec![self.family]
        } else {
            self.sizes.iter().map(|&k| self.family.with_size(k)).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub family: String,
    pub size: Option<usize>,
    pub n: usize,
    pub edges: usize,
    pub average_degree: f64,
    pub start: usize,
    pub trials: usize,
    pub seed: u64,
    pub mean: f64,
    pub std_error: f64,
    pub n_log_n_sq: f64,
    pub n_sq: f64,
    pub six_n_sq: f64,
    /// `d̄ n (n - 1)`.
    pub degree_bound: f64,
    pub matthews_lower: Option<f64>,
    pub matthews_upper: Option<f64>,
    /// `mean / (n (log n)^2)`.
    pub ratio_n_log_n_sq: f64,
    /// `mean / n^2`.
    pub ratio_n_sq: f64,
    /// `mean < 6 n^2 + 3 se` and `mean < d̄ n (n - 1) + 3 se`.
    pub upper_ok: bool,
    /// `mean` inside the Matthews bracket widened by `3 se`.
    pub matthews_ok: Option<bool>,
    pub solver_tol: f64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub version: String,
    pub seed: u64,
    pub trials: usize,
    pub solver_tol: f64,
    pub rows: Vec<ScalingRow>,
    /// `max / min` of the `n (log n)^2` ratios.
    pub spread_n_log_n_sq: f64,
    /// `max / min` of the `n^2` ratios.
    pub spread_n_sq: f64,
}

impl ScalingReport {
    pub fn all_upper_ok(&self) -> bool {
        self.rows.iter().all(|r| r.upper_ok)
    }

    pub fn all_matthews_ok(&self) -> bool {
        self.rows.iter().all(|r| r.matthews_ok != Some(false))
    }
}

fn spread(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo > 0.0 && lo.is_finite() {
        hi / lo
    } else {
        f64::NAN
    }
}

/// One cover-time row for an explicit graph.
pub fn scaling_row(g: &Graph, family: &Family, spec: &ExperimentSpec) -> Result<ScalingRow> {
    let est = simulate_cover_time(g, spec.start, spec.trials, spec.seed)?;
    let n = g.n() as f64;
    let ln = n.ln();
    let matthews = if spec.skip_matthews || g.n() < 2 {
        None
    } else {
        let sys = ElectricalSystem::new(g).with_tolerance(spec.solver_tol);
        Some(MatthewsBounds::from_times(&WalkTimes::exact(&sys)?, None)?)
    };
    let degree_bound = g.average_degree() * n * (n - 1.0);
    let slack = 3.0 * est.std_error;
    let upper_ok = est.mean < 6.0 * n * n + slack && est.mean < degree_bound + slack;
    Ok(ScalingRow {
        family: family.name().to_string(),
        size: family.size(),
        n: g.n(),
        edges: g.edge_count(),
        average_degree: g.average_degree(),
        start: spec.start,
        trials: spec.trials,
        seed: spec.seed,
        mean: est.mean,
        std_error: est.std_error,
        n_log_n_sq: n * ln * ln,
        n_sq: n * n,
        six_n_sq: 6.0 * n * n,
        degree_bound,
        matthews_lower: matthews.as_ref().map(|m| m.lower),
        matthews_upper: matthews.as_ref().map(|m| m.upper),
        ratio_n_log_n_sq: est.mean / (n * ln * ln),
        ratio_n_sq: est.mean / (n * n),
        upper_ok,
        matthews_ok: matthews.map(|m| est.mean >= m.lower - slack && est.mean <= m.upper + slack),
        solver_tol: spec.solver_tol,
        version: VERSION.to_string(),
    })
}

/// Monte Carlo cover times across the sizes of `spec`, with the planar
/// upper bounds and the Matthews bracket for each size.
pub fn run_grid_scaling(spec: &ExperimentSpec) -> Result<ScalingReport> {
    spec.validate()?;
    let mut rows = Vec::new();
    for family in spec.families() {
        let g = generate(family)?;
        log::info!("scaling {family}: n = {}", g.n());
        rows.push(scaling_row(&g, &family, spec)?);
    }
    Ok(ScalingReport {
        version: VERSION.to_string(),
        seed: spec.seed,
        trials: spec.trials,
        solver_tol: spec.solver_tol,
        spread_n_log_n_sq: spread(rows.iter().map(|r| r.ratio_n_log_n_sq)),
        spread_n_sq: spread(rows.iter().map(|r| r.ratio_n_sq)),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineRow {
    pub family: String,
    pub size: Option<usize>,
    pub n: usize,
    pub triangulated_n: usize,
    pub max_degree: usize,
    pub within_degree_bound: bool,
    pub packing_residual: f64,
    pub ring_ratio: f64,
    pub w_size: usize,
    pub selected: Vec<usize>,
    pub selected_size: usize,
    /// `|W|^{1-5s} / 2`.
    pub size_floor: f64,
    pub parity: Option<Parity>,
    pub empirical_c: Option<f64>,
    pub empirical_r: Option<f64>,
    pub min_resistance: Option<f64>,
    /// Minimum resistance among the selected vertices in the untriangulated
    /// graph, which can only be larger.
    pub min_resistance_original: Option<f64>,
    pub two_bin_gap_applicable: bool,
    pub two_bin_gap_violations: usize,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    pub version: String,
    pub s: f64,
    pub solver_tol: f64,
    pub packing_tol: f64,
    pub rows: Vec<PipelineRow>,
}

impl PipelineReport {
    pub fn all_verified(&self) -> bool {
        self.rows.iter().all(|r| r.verified)
    }
}

/// Triangulate, pack, select and verify, with `W` the vertices of the
/// untriangulated graph.
pub fn run_separation_pipeline(spec: &ExperimentSpec) -> Result<PipelineReport> {
    spec.validate()?;
    let config = SeparationConfig {
        s: spec.s,
        resistance_tol: spec.solver_tol,
    };
    config.validate()?;
    let options = PackingOptions {
        angle_tol: spec.packing_tol,
        ..Default::default()
    };
    let mut rows = Vec::new();
    for family in spec.families() {
        let g = generate(family)?;
        let t = triangulate(&g)?;
        let p = compute_packing_with(&t, default_outer_face(&t), &options)?;
        let w: Vec<usize> = (0..g.n()).collect();
        let sel = select_separated(&p, &t, &w, &config)?;
        let log_w = (w.len() as f64).ln();
        let verified = match sel.empirical_r {
            Some(r) => {
                let sys = ElectricalSystem::new(t.graph()).with_tolerance(spec.solver_tol);
                let threshold = r * log_w * (1.0 - 1e-9);
                verify_separation(&sys, &sel.members, threshold)?.passes && r > 0.0
            }
            None => !sel.members.is_empty(),
        };
        let min_resistance_original = if sel.members.len() >= 2 {
            let sys = ElectricalSystem::new(&g).with_tolerance(spec.solver_tol);
            Some(verify_separation(&sys, &sel.members, 0.0)?.min_resistance)
        } else {
            None
        };
        log::info!("pipeline {family}: |W| = {}, |V'| = {}", w.len(), sel.members.len());
        rows.push(PipelineRow {
            family: family.name().to_string(),
            size: family.size(),
            n: g.n(),
            triangulated_n: t.graph().n(),
            max_degree: t.max_degree(),
            within_degree_bound: t.within_degree_bound(),
            packing_residual: p.residual(),
            ring_ratio: diagnostics(&p, &t).ring_ratio,
            w_size: w.len(),
            selected_size: sel.members.len(),
            size_floor: (w.len() as f64).powf(1.0 - 5.0 * spec.s) / 2.0,
            selected: sel.members,
            parity: sel.parity,
            empirical_c: sel.empirical_c,
            empirical_r: sel.empirical_r,
            min_resistance: sel.min_pairwise_resistance,
            min_resistance_original,
            two_bin_gap_applicable: sel.two_bin_gap_applicable,
            two_bin_gap_violations: sel.two_bin_gap_violations.len(),
            verified,
        });
    }
    Ok(PipelineReport {
        version: VERSION.to_string(),
        s: spec.s,
        solver_tol: spec.solver_tol,
        packing_tol: spec.packing_tol,
        rows,
    })
}

/// Largest violation of each identity on one graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityRow {
    pub name: String,
    pub n: usize,
    pub edges: usize,
    /// `max |D(u,v) + D(v,w) - D(u,w)|`.
    pub additivity: f64,
    /// `max |C(u,v) - 2|E| R(u,v)|`.
    pub commute: f64,
    /// `max |H(u,v) - ½ Σ_w d_w (R(u,v) + R(v,w) - R(u,w))|`.
    pub tetali: f64,
    /// `max (R(u,w) - R(u,v) - R(v,w))^+`.
    pub triangle: f64,
    /// `max (-D(v_i, v_j))^+` over `i <= j` in the difference ordering from
    /// vertex 0.
    pub ordering: f64,
}

impl IdentityRow {
    pub fn max_violation(&self) -> f64 {
        [self.additivity, self.commute, self.tetali, self.triangle, self.ordering]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub version: String,
    pub solver_tol: f64,
    pub tolerance: f64,
    pub rows: Vec<IdentityRow>,
}

impl IdentityReport {
    pub fn passes(&self) -> bool {
        self.rows.iter().all(|r| r.max_violation() <= self.tolerance)
    }
}

/// All identity checks on one graph.
pub fn identity_row(name: &str, g: &Graph, solver_tol: f64) -> Result<IdentityRow> {
    let n = g.n();
    let sys = ElectricalSystem::new(g).with_tolerance(solver_tol);
    let times = WalkTimes::exact(&sys)?;
    let r = sys.resistance_matrix()?;
    let two_e = 2.0 * g.edge_count() as f64;
    let (mut additivity, mut commute, mut tetali, mut triangle) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for u in 0..n {
        for v in 0..n {
            if u != v {
                commute = commute.max((times.commute(u, v) - two_e * r.at(u, v)).abs());
                tetali = tetali.max((times.hitting(u, v) - tetali_hitting(g, &r, u, v)).abs());
            }
            for w in 0..n {
                let d = times.difference(u, v) + times.difference(v, w) - times.difference(u, w);
                additivity = additivity.max(d.abs());
                triangle = triangle.max(r.at(u, w) - r.at(u, v) - r.at(v, w));
            }
        }
    }
    let ordering = (-difference_ordering(&times, 0)?.min_forward_difference).max(0.0);
    Ok(IdentityRow {
        name: name.to_string(),
        n,
        edges: g.edge_count(),
        additivity,
        commute,
        tetali,
        triangle,
        ordering,
    })
}

/// Identity checks on every family member of `spec`.
pub fn run_identity_suite(spec: &ExperimentSpec, tolerance: f64) -> Result<IdentityReport> {
    spec.validate()?;
    let rows = spec
        .families()
        .into_iter()
        .map(|family| identity_row(&family.to_string(), generate(family)?.graph(), spec.solver_tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(IdentityReport {
        version: VERSION.to_string(),
        solver_tol: spec.solver_tol,
        tolerance,
        rows,
    })
}
