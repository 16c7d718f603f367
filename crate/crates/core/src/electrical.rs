//! Effective resistance with every edge a unit resistor.
//!
//! `R(u, v)` is computed by grounding `v` and solving `L f = e_u`; the
//! potential at `u` is the resistance. Any test function `f` gives the
//! lower bound `(f(v) - f(u))^2 / D(f)`, where `D` is the Dirichlet energy,
//! and the harmonic potential attains it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{conjugate_gradient, grounded_residual, DenseGrounded};
use crate::packing::CirclePacking;

pub const DEFAULT_SOLVER_TOL: f64 = 1e-10;

/// Graphs up to this size use dense elimination under [`SolveMethod::Auto`].
pub const DENSE_LIMIT: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveMethod {
    #[default]
    Auto,
    Dense,
    ConjugateGradient,
}

/// Unit-resistor network on a graph plus the linear-solver settings.
#[derive(Debug, Clone, Copy)]
pub struct ElectricalSystem<'g> {
    graph: &'g Graph,
    solver_tol: f64,
    method: SolveMethod,
}

/// Factored or iterative solver for the Laplacian grounded at one vertex.
pub struct GroundedSolver<'g> {
    graph: &'g Graph,
    ground: usize,
    tol: f64,
    dense: Option<DenseGrounded>,
}

impl GroundedSolver<'_> {
    pub fn ground(&self) -> usize {
        self.ground
    }

    /// Solves `L x = b` on all rows except the ground, with `x = 0` at the
    /// ground. The entry of `b` at the ground is ignored.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.graph.n() {
            return Err(Error::LengthMismatch {
                expected: self.graph.n(),
                got: b.len(),
            });
        }
        let x = match &self.dense {
            Some(d) => d.solve(b),
            None => conjugate_gradient(self.graph, self.ground, b, self.tol),
        };
        let residual = grounded_residual(self.graph, self.ground, &x, b);
        if !(residual <= self.tol) {
            return Err(Error::SolveFailure {
                residual,
                tol: self.tol,
            });
        }
        Ok(x)
    }
}

impl<'g> ElectricalSystem<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        ElectricalSystem {
            graph,
            solver_tol: DEFAULT_SOLVER_TOL,
            method: SolveMethod::Auto,
        }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.solver_tol = tol;
        self
    }

    pub fn with_method(mut self, method: SolveMethod) -> Self {
        self.method = method;
        self
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn solver_tol(&self) -> f64 {
        self.solver_tol
    }

    fn use_dense(&self) -> bool {
        match self.method {
            SolveMethod::Auto => self.graph.n() <= DENSE_LIMIT,
            SolveMethod::Dense => true,
            SolveMethod::ConjugateGradient => false,
        }
    }

    pub fn grounded(&self, ground: usize) -> Result<GroundedSolver<'g>> {
        self.graph.check_vertex(ground)?;
        let dense = if self.use_dense() {
            Some(DenseGrounded::factor(self.graph, ground)?)
        } else {
            None
        };
        Ok(GroundedSolver {
            graph: self.graph,
            ground,
            tol: self.solver_tol,
            dense,
        })
    }

    pub fn effective_resistance(&self, u: usize, v: usize) -> Result<f64> {
        self.graph.check_vertex(u)?;
        self.graph.check_vertex(v)?;
        if u == v {
            return Err(Error::SameVertex);
        }
        let mut b = vec![0.0; self.graph.n()];
        b[u] = 1.0;
        Ok(self.grounded(v)?.solve(&b)?[u])
    }

    /// Pairwise resistances among `vertices`, from one grounded factorization:
    /// with `G` the inverse of the Laplacian grounded at `vertices[0]`,
    /// `R(a, b) = G_aa + G_bb - G_ab - G_ba`.
    pub fn resistances_among(&self, vertices: &[usize]) -> Result<ResistanceMatrix> {
        for &v in vertices {
            self.graph.check_vertex(v)?;
        }
        let k = vertices.len();
        let mut values = vec![0.0; k * k];
        if k >= 2 {
            let solver = self.grounded(vertices[0])?;
            let n = self.graph.n();
            let columns: Vec<Vec<f64>> = vertices
                .iter()
                .map(|&a| {
                    if a == solver.ground() {
                        Ok(vec![0.0; n])
                    } else {
                        let mut b = vec![0.0; n];
                        b[a] = 1.0;
                        solver.solve(&b)
                    }
                })
                .collect::<Result<_>>()?;
            for i in 0..k {
                for j in i + 1..k {
                    let (a, b) = (vertices[i], vertices[j]);
                    let r = columns[i][a] + columns[j][b] - columns[i][b] - columns[j][a];
                    values[i * k + j] = r;
                    values[j * k + i] = r;
                }
            }
        }
        Ok(ResistanceMatrix {
            vertices: vertices.to_vec(),
            values,
        })
    }

    /// All-pairs resistance matrix.
    pub fn resistance_matrix(&self) -> Result<ResistanceMatrix> {
        let all: Vec<usize> = (0..self.graph.n()).collect();
        self.resistances_among(&all)
    }

    pub fn triangle_check(&self, u: usize, v: usize, w: usize) -> Result<TriangleWitness> {
        let r = self.resistances_among(&[u, v, w])?;
        let (r_uv, r_vw, r_uw) = (r.at(0, 1), r.at(1, 2), r.at(0, 2));
        Ok(TriangleWitness {
            r_uw,
            r_uv,
            r_vw,
            holds: r_uw <= r_uv + r_vw + 2.0 * self.solver_tol,
        })
    }
}

/// Resistances among a list of vertices, indexed by position in that list.
#[derive(Debug, Clone, PartialEq)]
pub struct ResistanceMatrix {
    vertices: Vec<usize>,
    values: Vec<f64>,
}

impl ResistanceMatrix {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Resistance between the `i`-th and `j`-th listed vertices.
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.vertices.len() + j]
    }

    /// Smallest off-diagonal entry.
    pub fn min_pairwise(&self) -> Option<f64> {
        let k = self.len();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .map(|(i, j)| self.at(i, j))
            .min_by(f64::total_cmp)
    }
}

/// Outcome of `R(u, w) <= R(u, v) + R(v, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleWitness {
    pub r_uw: f64,
    pub r_uv: f64,
    pub r_vw: f64,
    pub holds: bool,
}

/// A real function on the vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialFunction(Vec<f64>);

impl PotentialFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "potential at vertex {bad} is not finite"
            )));
        }
        Ok(PotentialFunction(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// `D(f) = sum over edges {a, b} of (f(a) - f(b))^2`.
pub fn dirichlet_energy(g: &Graph, f: &PotentialFunction) -> Result<f64> {
    let f = f.values();
    if f.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: f.len(),
        });
    }
    Ok(g.edges().iter().map(|&(a, b)| (f[a] - f[b]).powi(2)).sum())
}

/// `(f(v) - f(u))^2 / D(f)`, a lower bound on `R(u, v)` for every `f`.
pub fn resistance_lower_bound_variational(
    g: &Graph,
    f: &PotentialFunction,
    u: usize,
    v: usize,
) -> Result<f64> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let energy = dirichlet_energy(g, f)?;
    if energy <= 0.0 {
        return Err(Error::ZeroEnergy);
    }
    Ok((f.values()[v] - f.values()[u]).powi(2) / energy)
}

/// Lower bound on `R(u, w)` from the logarithmic map centred at the disk of `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogMapBound {
    /// The certified bound `(b - a)^2 / D(f)`; zero when `b <= a`.
    pub value: f64,
    /// `log r_u`.
    pub a: f64,
    /// `log |z_w - z_u|`.
    pub b: f64,
    pub energy: f64,
    /// `log(dist(C_w, C_u) / r_u)` when the disks are apart.
    pub log_gap_ratio: Option<f64>,
}

/// Evaluates the test function `f(v) = min(log |z_v - z_u|, b)` for
/// `v != u`, `f(u) = log r_u`, with `b = log |z_w - z_u|`, and returns the
/// variational bound it certifies.
pub fn log_map_lower_bound(
    p: &CirclePacking,
    g: &Graph,
    u: usize,
    w: usize,
) -> Result<LogMapBound> {
    g.check_vertex(u)?;
    g.check_vertex(w)?;
    if u == w {
        return Err(Error::SameVertex);
    }
    if p.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: p.len(),
        });
    }
    let zu = p.center(u);
    let modulus = |v: usize| {
        let z = p.center(v);
        (z[0] - zu[0]).hypot(z[1] - zu[1])
    };
    let a = p.radius(u).ln();
    let b = modulus(w).ln();
    let gap = (modulus(w) - p.radius(u) - p.radius(w)).max(0.0);
    let log_gap_ratio = (gap > 0.0).then(|| (gap / p.radius(u)).ln());
    if b <= a {
        log::debug!("log-map bound for ({u}, {w}) is degenerate: b <= a");
        return Ok(LogMapBound {
            value: 0.0,
            a,
            b,
            energy: 0.0,
            log_gap_ratio,
        });
    }
    let mut f = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        if v == u {
            f.push(a);
            continue;
        }
        let d = modulus(v);
        if d == 0.0 {
            return Err(Error::CoincidentCenters(u, v));
        }
        f.push(d.ln().min(b));
    }
    let f = PotentialFunction::new(f)?;
    let energy = dirichlet_energy(g, &f)?;
    if energy <= 0.0 {
        return Err(Error::ZeroEnergy);
    }
    Ok(LogMapBound {
        value: (b - a).powi(2) / energy,
        a,
        b,
        energy,
        log_gap_ratio,
    })
}
