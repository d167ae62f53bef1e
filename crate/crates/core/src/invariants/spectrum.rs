//! Dense symmetric eigenvalues by cyclic Jacobi rotations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Tolerance on reported eigenvalues.
pub const EIGEN_TOL: f64 = 1e-9;

/// Stopping rule for the Jacobi sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Stop once the off-diagonal Frobenius norm drops below this, scaled by `max(1, ||A||_F)`.
    pub off_diagonal_tol: f64,
    pub max_sweeps: usize,
}

impl EigenOptions {
    pub const STANDARD: Self = Self { off_diagonal_tol: 1e-12, max_sweeps: 64 };
    /// Used to re-verify counterexample candidates.
    pub const TIGHT: Self = Self { off_diagonal_tol: 1e-15, max_sweeps: 128 };
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self::STANDARD
    }
}

/// Eigenvalues in non-increasing order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn largest(&self) -> f64 {
        self.0.first().copied().unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Sum of the `t` largest eigenvalues.
    pub fn top_sum(&self, t: usize) -> f64 {
        self.0.iter().take(t).sum()
    }
}

/// Eigenvalues of the symmetric `n x n` row-major matrix `a`, destroyed in the process.
///
/// Each sweep visits every `(p, q)` pair above the diagonal and applies the
/// rotation that zeroes `a[p][q]`. Sweeps stop on the off-diagonal threshold,
/// on the sweep cap, or when a full sweep fails to shrink the off-diagonal mass.
pub fn symmetric_eigenvalues(a: &mut [f64], n: usize, opts: EigenOptions) -> Vec<f64> {
    assert_eq!(a.len(), n * n, "matrix must be n x n");
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    let threshold = opts.off_diagonal_tol * scale;
    let mut previous = f64::INFINITY;
    for _ in 0..opts.max_sweeps {
        let off = off_diagonal_norm(a, n);
        if off <= threshold || off >= previous {
            break;
        }
        previous = off;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                a[p * n + p] -= t * apq;
                a[q * n + q] += t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let new_rp = c * arp - s * arq;
                    let new_rq = s * arp + c * arq;
                    a[r * n + p] = new_rp;
                    a[p * n + r] = new_rp;
                    a[r * n + q] = new_rq;
                    a[q * n + r] = new_rq;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                sum += a[p * n + q] * a[p * n + q];
            }
        }
    }
    sum.sqrt()
}

fn adjacency_dense(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let mut a = vec![0.0; n * n];
    for (i, j) in g.edges() {
        a[i * n + j] = 1.0;
        a[j * n + i] = 1.0;
    }
    a
}

/// Laplacian `D - A` as a dense row-major matrix. Self-loops are rejected.
pub fn laplacian_matrix(g: &Graph) -> Result<Vec<f64>> {
    if g.has_self_loops() {
        return Err(Error::Unsupported("Laplacian is defined here for graphs without self-loops".into()));
    }
    let n = g.n();
    let mut l = adjacency_dense(g);
    for x in l.iter_mut() {
        *x = -*x;
    }
    for i in 0..n {
        l[i * n + i] = g.degree(i) as f64;
    }
    Ok(l)
}

pub fn laplacian_spectrum(g: &Graph) -> Result<Spectrum> {
    laplacian_spectrum_with(g, EigenOptions::STANDARD)
}

pub fn laplacian_spectrum_with(g: &Graph, opts: EigenOptions) -> Result<Spectrum> {
    let mut l = laplacian_matrix(g)?;
    Ok(Spectrum::from_unsorted(symmetric_eigenvalues(&mut l, g.n(), opts)))
}

/// Adjacency spectrum; a self-loop contributes 1 on the diagonal.
pub fn adjacency_spectrum_with(g: &Graph, opts: EigenOptions) -> Spectrum {
    let mut a = adjacency_dense(g);
    Spectrum::from_unsorted(symmetric_eigenvalues(&mut a, g.n(), opts))
}

pub fn adjacency_spectral_radius(g: &Graph) -> f64 {
    adjacency_spectral_radius_with(g, EigenOptions::STANDARD)
}

pub fn adjacency_spectral_radius_with(g: &Graph, opts: EigenOptions) -> f64 {
    if g.edge_count() == 0 {
        return 0.0;
    }
    adjacency_spectrum_with(g, opts).largest()
}
