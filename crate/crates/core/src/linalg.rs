//! Grounded Laplacian solves: dense Cholesky for small graphs, Jacobi
//! preconditioned conjugate gradients otherwise.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// `(L x)_u = d_u x_u - sum_{w ~ u} x_w`.
pub(crate) fn laplacian_apply(g: &Graph, x: &[f64], out: &mut [f64]) {
    for (u, o) in out.iter_mut().enumerate() {
        let s: f64 = g.neighbors(u).iter().map(|&w| x[w]).sum();
        *o = g.degree(u) as f64 * x[u] - s;
    }
}

/// Relative residual of `L x = b` over the non-ground rows.
pub(crate) fn grounded_residual(g: &Graph, ground: usize, x: &[f64], b: &[f64]) -> f64 {
    let mut lx = vec![0.0; g.n()];
    laplacian_apply(g, x, &mut lx);
    let (mut num, mut den) = (0.0, 0.0);
    for u in (0..g.n()).filter(|&u| u != ground) {
        num += (lx[u] - b[u]).powi(2);
        den += b[u] * b[u];
    }
    if den == 0.0 {
        num.sqrt()
    } else {
        (num / den).sqrt()
    }
}

/// Lower-triangular Cholesky factor of the Laplacian with one row and
/// column removed.
pub(crate) struct DenseGrounded {
    ground: usize,
    m: usize,
    factor: Vec<f64>,
}

impl DenseGrounded {
    pub(crate) fn factor(g: &Graph, ground: usize) -> Result<Self> {
        let n = g.n();
        let m = n - 1;
        let slot = |v: usize| if v < ground { v } else { v - 1 };
        let mut a = vec![0.0; m * m];
        for u in (0..n).filter(|&u| u != ground) {
            let i = slot(u);
            a[i * m + i] = g.degree(u) as f64;
            for &w in g.neighbors(u) {
                if w != ground {
                    a[i * m + slot(w)] = -1.0;
                }
            }
        }
        for j in 0..m {
            let mut d = a[j * m + j];
            for k in 0..j {
                d -= a[j * m + k] * a[j * m + k];
            }
            if d <= 0.0 {
                return Err(Error::SolveFailure {
                    residual: f64::INFINITY,
                    tol: 0.0,
                });
            }
            let d = d.sqrt();
            a[j * m + j] = d;
            for i in j + 1..m {
                let mut s = a[i * m + j];
                for k in 0..j {
                    s -= a[i * m + k] * a[j * m + k];
                }
                a[i * m + j] = s / d;
            }
        }
        Ok(DenseGrounded { ground, m, factor: a })
    }

    pub(crate) fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (m, l) = (self.m, &self.factor);
        let mut y: Vec<f64> = (0..b.len()).filter(|&u| u != self.ground).map(|u| b[u]).collect();
        for i in 0..m {
            let mut s = y[i];
            for k in 0..i {
                s -= l[i * m + k] * y[k];
            }
            y[i] = s / l[i * m + i];
        }
        for i in (0..m).rev() {
            let mut s = y[i];
            for k in i + 1..m {
                s -= l[k * m + i] * y[k];
            }
            y[i] = s / l[i * m + i];
        }
        let mut x = Vec::with_capacity(m + 1);
        x.extend_from_slice(&y[..self.ground]);
        x.push(0.0);
        x.extend_from_slice(&y[self.ground..]);
        x
    }
}

/// Preconditioned conjugate gradients on the grounded Laplacian.
pub(crate) fn conjugate_gradient(g: &Graph, ground: usize, b: &[f64], tol: f64) -> Vec<f64> {
    let n = g.n();
    let mut b = b.to_vec();
    b[ground] = 0.0;
    let bnorm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return x;
    }
    let inv_diag: Vec<f64> = (0..n)
        .map(|u| if u == ground { 0.0 } else { 1.0 / g.degree(u) as f64 })
        .collect();
    let mut r = b;
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut ap = vec![0.0; n];
    let max_iter = 20 * n + 1000;
    for _ in 0..max_iter {
        laplacian_apply(g, &p, &mut ap);
        ap[ground] = 0.0;
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 {
            break;
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rnorm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rnorm <= 0.25 * tol * bnorm {
            break;
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    x[ground] = 0.0;
    x
}
