//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use serde::{Deserialize, Serialize};

use super::matrix::{DMatrix, SymMatrix};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-15;
const MAX_DIM: usize = 64;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in non-increasing order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Bound on `|λ_i - values[i]|` from the residual off-diagonal mass.
    pub residual_bound: f64,
}

impl Spectrum {
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values, residual_bound: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// One-based access, matching `λ_1 ≥ … ≥ λ_n`.
    pub fn lambda(&self, position: usize) -> f64 {
        self.values[position - 1]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Groups eigenvalues whose relative gap is below `rel_gap`; returns
    /// `(value, multiplicity)` pairs in order.
    pub fn clusters(&self, rel_gap: f64) -> Vec<(f64, usize)> {
        let scale = self.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &v in &self.values {
            match out.last_mut() {
                Some((c, k)) if (*c - v).abs() <= rel_gap * scale => {
                    *c = (*c * *k as f64 + v) / (*k as f64 + 1.0);
                    *k += 1;
                }
                _ => out.push((v, 1)),
            }
        }
        out
    }
}

pub struct EigenDecomposition {
    pub spectrum: Spectrum,
    /// Column `k` is the unit eigenvector for `spectrum.values[k]`.
    pub vectors: DMatrix,
}

pub fn eigen_sym(m: &SymMatrix<f64>, tol: f64) -> Result<Spectrum> {
    Ok(jacobi(m, tol, false)?.0)
}

pub fn eigh(m: &SymMatrix<f64>, tol: f64) -> Result<EigenDecomposition> {
    let (spectrum, vectors) = jacobi(m, tol, true)?;
    Ok(EigenDecomposition { spectrum, vectors: vectors.expect("vectors requested") })
}

/// `‖M v - λ v‖₂`
pub fn residual(m: &SymMatrix<f64>, lambda: f64, v: &[f64]) -> f64 {
    m.mul_vec(v).iter().zip(v).map(|(mv, vi)| (mv - lambda * vi).powi(2)).sum::<f64>().sqrt()
}

fn jacobi(m: &SymMatrix<f64>, tol: f64, want_vectors: bool) -> Result<(Spectrum, Option<DMatrix>)> {
    let n = m.dim();
    if n > MAX_DIM {
        return Err(Error::Precondition(format!("eigen_sym supports n <= {MAX_DIM}, got {n}")));
    }
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let v = *m.get(i, j);
            if !v.is_finite() {
                return Err(Error::NonFinite(i, j));
            }
            a[i * n + j] = v;
        }
    }
    let mut v = want_vectors.then(|| DMatrix::identity(n).data);
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut off = off_norm(&a, n);

    if norm > 0.0 {
        for _ in 0..MAX_SWEEPS {
            if off <= tol * norm {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    if apq == 0.0 {
                        continue;
                    }
                    let app = a[p * n + p];
                    let aqq = a[q * n + q];
                    let theta = (aqq - app) / (2.0 * apq);
                    let t = if theta.abs() > 1e150 {
                        0.5 / theta
                    } else {
                        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                    };
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    a[p * n + p] = app - t * apq;
                    a[q * n + q] = aqq + t * apq;
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    for r in 0..n {
                        if r == p || r == q {
                            continue;
                        }
                        let arp = a[r * n + p];
                        let arq = a[r * n + q];
                        let np = c * arp - s * arq;
                        let nq = s * arp + c * arq;
                        a[r * n + p] = np;
                        a[p * n + r] = np;
                        a[r * n + q] = nq;
                        a[q * n + r] = nq;
                    }
                    if let Some(v) = v.as_mut() {
                        for r in 0..n {
                            let vrp = v[r * n + p];
                            let vrq = v[r * n + q];
                            v[r * n + p] = c * vrp - s * vrq;
                            v[r * n + q] = s * vrp + c * vrq;
                        }
                    }
                }
            }
            off = off_norm(&a, n);
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let residual_bound = off + 4.0 * n as f64 * f64::EPSILON * norm;
    let vectors = v.map(|v| DMatrix::from_fn(n, n, |r, k| v[r * n + order[k]]));
    Ok((Spectrum { values, residual_bound }, vectors))
}

fn off_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            s += 2.0 * a[p * n + q] * a[p * n + q];
        }
    }
    s.sqrt()
}
