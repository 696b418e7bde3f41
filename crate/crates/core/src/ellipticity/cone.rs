//! The cone `K = K_λ*` dual to `K_λ = {λ : λᵢ ∈ [C/λ̂, Cλ̂] for some C > 0}`,
//! its support function `e` along the diagonal, and the `(z, s)` coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolicity::c_delta;

/// `x·y ≥ 0` for all `y ∈ K_λ` iff `Σx⁺ ≥ λ̂² Σx⁻`, so
/// `K = {x : φ(x) > 0}` with `φ(x) = Σx⁺ − λ̂² Σx⁻`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaCone {
    pub dim: usize,
    pub lambda_hat: f64,
}

impl LambdaCone {
    pub fn new(dim: usize, lambda_hat: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Domain(format!("cone dimension {dim} is below 2")));
        }
        if !(lambda_hat >= 1.0) {
            return Err(Error::Domain(format!("cone ratio {lambda_hat} is below 1")));
        }
        Ok(LambdaCone { dim, lambda_hat })
    }

    /// `λ̂ = C_δ` in dimension 12 and `24` on a hyperplane.
    pub fn for_delta(dim: usize, delta: f64) -> Result<Self> {
        match dim {
            12 => Self::new(12, c_delta(delta)),
            11 => Self::new(11, 24.0),
            d => Err(Error::Domain(format!("dimension {d} is not 12 or 11"))),
        }
    }

    pub fn rho(&self) -> f64 {
        self.lambda_hat * self.lambda_hat
    }

    pub fn phi(&self, x: &[f64]) -> f64 {
        let rho = self.rho();
        x.iter().map(|&v| if v > 0.0 { v } else { rho * v }).sum()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.phi(x) > 0.0
    }

    /// `|e(z)| ≤ √n |z|`.
    pub fn lipschitz(&self) -> f64 {
        (self.dim as f64).sqrt()
    }

    /// `x ↦ (z, s)`: `z` in the Helmert basis of the hyperplane `Σxᵢ = 0`,
    /// `s = x·u` with `u = (1, …, 1)/√n`.
    pub fn to_axis(&self, x: &[f64]) -> (Vec<f64>, f64) {
        let n = self.dim;
        let s = x.iter().sum::<f64>() / (n as f64).sqrt();
        let mut z = Vec::with_capacity(n - 1);
        let mut prefix = 0.0;
        for k in 1..n {
            prefix += x[k - 1];
            let kf = k as f64;
            z.push((prefix - kf * x[k]) / (kf * (kf + 1.0)).sqrt());
        }
        (z, s)
    }

    /// Inverse of `to_axis`.
    pub fn from_axis(&self, z: &[f64], s: f64) -> Vec<f64> {
        let n = self.dim;
        let mut x = vec![s / (n as f64).sqrt(); n];
        for (k0, zk) in z.iter().enumerate() {
            let k = (k0 + 1) as f64;
            let c = zk / (k * (k + 1.0)).sqrt();
            for xi in x.iter_mut().take(k0 + 1) {
                *xi += c;
            }
            x[k0 + 1] -= k * c;
        }
        x
    }

    /// `e(z) = inf{c : z + c·u ∈ K}`. Along `c` the function `φ(z + cu)` is
    /// increasing and piecewise linear, so the root is found segment by segment.
    pub fn support_e(&self, z: &[f64]) -> f64 {
        let n = self.dim;
        let v = self.from_axis(z, 0.0);
        let sq = (n as f64).sqrt();
        let rho = self.rho();
        // coordinate i turns positive for c > bᵢ
        let mut order: Vec<usize> = (0..n).collect();
        let b: Vec<f64> = v.iter().map(|vi| -sq * vi).collect();
        order.sort_by(|&i, &j| b[i].total_cmp(&b[j]));
        let total: f64 = v.iter().sum();
        let mut pos_sum = 0.0;
        for k in 0..=n {
            // the first k coordinates in `order` are positive
            let a = pos_sum + rho * (total - pos_sum);
            let slope = (k as f64 + rho * (n - k) as f64) / sq;
            let c = -a / slope;
            let lo = if k == 0 { f64::NEG_INFINITY } else { b[order[k - 1]] };
            let hi = if k == n { f64::INFINITY } else { b[order[k]] };
            if c >= lo && c <= hi {
                return c;
            }
            if k < n {
                pos_sum += v[order[k]];
            }
        }
        // rounding can skip the exact segment; fall back to the membership oracle
        self.support_e_bisect(z, 1e-15)
    }

    /// `e(z)` by bisection on the membership test `z + cu ∈ K`.
    pub fn support_e_bisect(&self, z: &[f64], tol: f64) -> f64 {
        let v = self.from_axis(z, 0.0);
        let n = self.dim as f64;
        let u = 1.0 / n.sqrt();
        let span = n.sqrt() * v.iter().fold(0.0f64, |m, x| m.max(x.abs())) + 1.0;
        let (mut lo, mut hi) = (-span, span);
        let inside = |c: f64| self.contains(&v.iter().map(|x| x + c * u).collect::<Vec<_>>());
        for _ in 0..200 {
            if hi - lo <= tol * span {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if inside(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// `a − b ∉ K ∪ −K`, i.e. `s_a − s_b ≤ e(z_a − z_b)` and `s_b − s_a ≤ e(z_b − z_a)`.
    pub fn cone_condition(&self, a: &[f64], b: &[f64], slack: f64) -> bool {
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        let neg: Vec<f64> = d.iter().map(|x| -x).collect();
        let scale = d.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
        self.phi(&d) <= slack * scale && self.phi(&neg) <= slack * scale
    }
}
