//! The functional `F(S) = f(Λ(S))` with `f = s − g̃(z)` on sorted spectra,
//! certification of graph points, and the ellipticity estimate.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::graph::{spectrum_of, SampledGraph, R_MIN};
use crate::error::{Error, Result};
use crate::hyperbolicity::Space;
use crate::report::{Check, Status};
use crate::rng::{gaussian_vec, sample_rng, stream_id};
use crate::spectra::{eigen_sym, SymMatrix, DEFAULT_TOL};

/// Spectra within this distance of a computed graph spectrum count as on the graph.
pub const ON_GRAPH_TOL: f64 = 1e-9;
const LM_MAX_ITER: usize = 200;
/// Nearest samples tried in turn; near-coincident eigenvalues make the sorted
/// spectrum nonsmooth and trap some starts in spurious minima.
const LM_STARTS: usize = 32;

/// A point of the graph found by refinement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphPoint {
    pub z: Vec<f64>,
    pub s: f64,
    pub params: Vec<f64>,
    /// Distance between the queried and the refined spectrum.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FValue {
    pub value: f64,
    pub on_graph: bool,
    pub residual: Option<f64>,
}

pub struct HessianFunctional {
    pub graph: SampledGraph,
    pub space: Space,
}

impl HessianFunctional {
    pub fn new(graph: SampledGraph, space: Space) -> Result<Self> {
        if graph.dim != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), got: graph.dim });
        }
        if graph.is_empty() {
            return Err(Error::Domain("empty graph".into()));
        }
        Ok(HessianFunctional { graph, space })
    }

    pub fn delta(&self) -> f64 {
        self.graph.delta
    }

    /// Sorted spectrum of a symmetric matrix in the space's dimension.
    pub fn spectrum(&self, s: &SymMatrix<f64>) -> Result<Vec<f64>> {
        if s.dim() != self.graph.dim {
            return Err(Error::DimensionMismatch { expected: self.graph.dim, got: s.dim() });
        }
        Ok(eigen_sym(s, DEFAULT_TOL)?.values)
    }

    /// Searches for a site whose Hessian has spectrum `x`, starting from the
    /// nearest samples.
    pub fn certify(&self, x: &[f64]) -> Option<GraphPoint> {
        let cone = self.graph.cone();
        let (z, s) = cone.to_axis(x);
        let mut near: Vec<(f64, usize)> = (0..self.graph.len())
            .map(|i| {
                let d: f64 = self.graph.z[i].iter().zip(&z).map(|(a, b)| (a - b).powi(2)).sum::<f64>() + (self.graph.g[i] - s).powi(2);
                (d, i)
            })
            .collect();
        let starts = LM_STARTS.min(near.len());
        near.select_nth_unstable_by(starts - 1, |a, b| a.0.total_cmp(&b.0));
        near.truncate(starts);
        near.sort_by(|a, b| a.0.total_cmp(&b.0));
        for &(_, i) in &near {
            let (params, res) = refine(&self.space, self.delta(), x, &self.graph.params[i]);
            if res <= ON_GRAPH_TOL {
                let spec = spectrum_of(&self.space, self.delta(), &params).ok()?;
                let (zh, sh) = cone.to_axis(&spec);
                return Some(GraphPoint { z: zh, s: sh, params, residual: res });
            }
        }
        None
    }

    /// Certified lower bound `s − g̃(z)` using the samples and extra graph points.
    pub fn lower(&self, x: &[f64], anchors: &[(Vec<f64>, f64)]) -> f64 {
        let (z, s) = self.graph.cone().to_axis(x);
        s - self.graph.extend_g_with(&z, anchors)
    }

    /// Upper bound `s − ĝ + e(ẑ − z)` from a graph point `(ẑ, ĝ)`.
    pub fn upper(&self, x: &[f64], anchor: &GraphPoint) -> f64 {
        let cone = self.graph.cone();
        let (z, s) = cone.to_axis(x);
        let d: Vec<f64> = anchor.z.iter().zip(&z).map(|(a, b)| a - b).collect();
        s - anchor.s + cone.support_e(&d)
    }

    /// `F(S)`: exact on the graph, otherwise the inf-convolution over samples.
    pub fn eval(&self, s: &SymMatrix<f64>) -> Result<FValue> {
        let x = self.spectrum(s)?;
        Ok(self.eval_spectrum(&x))
    }

    pub fn eval_spectrum(&self, x: &[f64]) -> FValue {
        match self.certify(x) {
            Some(p) => {
                let (_, s) = self.graph.cone().to_axis(x);
                FValue { value: s - p.s, on_graph: true, residual: Some(p.residual) }
            }
            None => FValue { value: self.lower(x, &[]), on_graph: false, residual: None },
        }
    }
}

/// Levenberg–Marquardt fit of `spectrum(params) = target`; returns the best
/// parameters and the Euclidean residual.
pub fn refine(space: &Space, delta: f64, target: &[f64], init: &[f64]) -> (Vec<f64>, f64) {
    let n_par = init.len();
    // the radius only matters for δ ≠ 0
    let free: Vec<usize> = (0..n_par).filter(|&j| j + 1 < n_par || delta != 0.0).collect();
    let residual = |p: &[f64]| -> Option<Vec<f64>> {
        let spec = spectrum_of(space, delta, p).ok()?;
        Some(spec.iter().zip(target).map(|(a, b)| a - b).collect())
    };
    let norm = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut p = init.to_vec();
    let Some(mut r) = residual(&p) else { return (p, f64::INFINITY) };
    let mut cost = norm(&r);
    let mut mu = 1e-3;
    for _ in 0..LM_MAX_ITER {
        if cost <= 1e-13 {
            break;
        }
        let mut jac = vec![vec![0.0; free.len()]; r.len()];
        for (c, &j) in free.iter().enumerate() {
            let h = 1e-6 * p[j].abs().max(1e-2);
            let mut plus = p.clone();
            let mut minus = p.clone();
            plus[j] += h;
            minus[j] -= h;
            let (Some(rp), Some(rm)) = (residual(&plus), residual(&minus)) else { return (p, cost) };
            for (row, (a, b)) in jac.iter_mut().zip(rp.iter().zip(&rm)) {
                row[c] = (a - b) / (2.0 * h);
            }
        }
        let k = free.len();
        let mut jtj = vec![vec![0.0; k]; k];
        let mut jtr = vec![0.0; k];
        for (row, ri) in jac.iter().zip(&r) {
            for a in 0..k {
                jtr[a] += row[a] * ri;
                for b in 0..k {
                    jtj[a][b] += row[a] * row[b];
                }
            }
        }
        let mut improved = false;
        while mu < 1e12 {
            let mut m = jtj.clone();
            for (a, row) in m.iter_mut().enumerate() {
                row[a] += mu * (jtj[a][a] + 1e-12);
            }
            let rhs: Vec<f64> = jtr.iter().map(|v| -v).collect();
            if let Some(step) = solve(m, rhs) {
                let mut trial = p.clone();
                for (c, &j) in free.iter().enumerate() {
                    trial[j] += step[c];
                }
                if let Some(rt) = residual(&trial) {
                    let ct = norm(&rt);
                    if ct < cost {
                        p = trial;
                        r = rt;
                        cost = ct;
                        mu = (mu / 3.0).max(1e-15);
                        improved = true;
                        break;
                    }
                }
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    (p, cost)
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// A held-out site and its Hessian.
pub fn heldout_site(func: &HessianFunctional, seed: u64, index: u64) -> Result<SymMatrix<f64>> {
    let mut rng = sample_rng(seed, stream_id("heldout"), index);
    let x = func.space.random_unit(&mut rng);
    let delta = func.delta();
    let r = if delta == 0.0 { 1.0 } else { rng.random_range(R_MIN..=1.0) };
    let h = func.space.hessian(&x, delta)?;
    let h = if delta == 0.0 { h } else { h.scale(&r.powf(-delta)) };
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeldOutSummary {
    pub sites: usize,
    pub certified: usize,
    pub max_abs_f: f64,
    pub max_residual: f64,
    /// Largest `g̃(z) − s` from samples alone, a measure of sampling density.
    pub max_sample_gap: f64,
}

/// `F(D²w_δ(a)) = 0` at sites not among the samples.
pub fn heldout_zero(func: &HessianFunctional, sites: usize, seed: u64) -> Result<HeldOutSummary> {
    let rows: Vec<(Option<(f64, f64)>, f64)> = (0..sites as u64)
        .into_par_iter()
        .map(|i| {
            let h = heldout_site(func, seed, i)?;
            let x = func.spectrum(&h)?;
            let gap = -func.lower(&x, &[]);
            let v = func.eval_spectrum(&x);
            Ok((v.on_graph.then(|| (v.value.abs(), v.residual.unwrap_or(0.0))), gap))
        })
        .collect::<Result<_>>()?;
    let certified: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.0).collect();
    Ok(HeldOutSummary {
        sites,
        certified: certified.len(),
        max_abs_f: certified.iter().map(|c| c.0).fold(0.0, f64::max),
        max_residual: certified.iter().map(|c| c.1).fold(0.0, f64::max),
        max_sample_gap: rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max),
    })
}

pub fn heldout_check(func: &HessianFunctional, sites: usize, seed: u64, tol: f64) -> Result<Check> {
    let s = heldout_zero(func, sites, seed)?;
    let pass = s.certified == s.sites && s.max_abs_f <= tol;
    Ok(Check::new(format!("ellipticity/heldout/dim{}/delta={}", func.graph.dim, func.delta()), Status::from_bool(pass))
        .inputs(serde_json::json!({"delta": func.delta(), "dim": func.graph.dim, "samples": func.graph.len(), "sites": sites, "seed": seed}))
        .expected(serde_json::json!({"max_abs_f": format!("<= {tol:e}"), "certified": sites}))
        .observed(serde_json::to_value(&s)?)
        .residual(s.max_abs_f))
}

/// Ratios `(F(S + N) − F(S))/‖N‖` bracketed at graph points `S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipticityEstimate {
    pub dim: usize,
    pub delta: f64,
    pub trials: usize,
    pub certified: usize,
    pub monotone_failures: usize,
    pub min_lower_ratio: f64,
    pub max_upper_ratio: f64,
    /// `max(max upper, 1/min lower)` for `f` on sorted spectra.
    pub c_hat: f64,
    /// The same constant for the sum over all coordinate permutations.
    pub c_hat_symmetrized: f64,
    /// `4 λ̂² √n`.
    pub bound: f64,
}

/// Perturbations are positive semidefinite with operator norm in `[10⁻², 1]`;
/// every eighth is a multiple of the identity.
pub fn estimate_ellipticity(func: &HessianFunctional, trials: usize, seed: u64) -> Result<EllipticityEstimate> {
    let dim = func.graph.dim;
    let stream = stream_id("ellipticity-perturbation");
    let rows: Vec<Option<(f64, f64)>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let h = heldout_site(func, seed, i)?;
            let x = func.spectrum(&h)?;
            let Some(anchor) = func.certify(&x) else { return Ok(None) };
            let mut rng = sample_rng(seed, stream, i);
            let scale = 10f64.powf(rng.random_range(-2.0..=0.0));
            let n_mat = if i % 8 == 7 {
                SymMatrix::identity(dim).scale(&scale)
            } else {
                let rank = 1 + (i as usize % dim);
                let vs: Vec<Vec<f64>> = (0..rank).map(|_| gaussian_vec(&mut rng, dim)).collect();
                let m = SymMatrix::from_fn(dim, |a, b| vs.iter().map(|v| v[a] * v[b]).sum::<f64>());
                let top = eigen_sym(&m, DEFAULT_TOL)?.max();
                m.scale(&(scale / top))
            };
            let norm = eigen_sym(&n_mat, DEFAULT_TOL)?.max();
            let xp = func.spectrum(&h.add(&n_mat)?)?;
            let lo = func.lower(&xp, &[(anchor.z.clone(), anchor.s)]);
            let hi = func.upper(&xp, &anchor);
            Ok(Some((lo / norm, hi / norm)))
        })
        .collect::<Result<_>>()?;
    let done: Vec<(f64, f64)> = rows.iter().flatten().copied().collect();
    let min_lo = done.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let max_hi = done.iter().map(|r| r.1).fold(0.0, f64::max);
    let nf = factorial(dim);
    let cone = func.graph.cone();
    Ok(EllipticityEstimate {
        dim,
        delta: func.delta(),
        trials,
        certified: done.len(),
        monotone_failures: done.iter().filter(|r| r.0 <= 0.0).count(),
        min_lower_ratio: min_lo,
        max_upper_ratio: max_hi,
        c_hat: max_hi.max(1.0 / min_lo),
        c_hat_symmetrized: (nf * max_hi).max(1.0 / (nf * min_lo)),
        bound: 4.0 * cone.rho() * (dim as f64).sqrt(),
    })
}

/// Passes when every trial is certified and monotone and `Ĉ` stays below
/// both `4λ̂²√n` and `ceiling`.
pub fn ellipticity_check(func: &HessianFunctional, trials: usize, seed: u64, ceiling: f64) -> Result<Check> {
    let e = estimate_ellipticity(func, trials, seed)?;
    let pass = e.certified == trials && e.monotone_failures == 0 && e.c_hat <= e.bound && e.c_hat < ceiling;
    Ok(Check::new(format!("ellipticity/constant/dim{}/delta={}", e.dim, e.delta), Status::from_bool(pass))
        .inputs(serde_json::json!({"delta": e.delta, "dim": e.dim, "samples": func.graph.len(), "trials": trials, "seed": seed}))
        .expected(serde_json::json!({"c_hat": format!("<= {} and < {ceiling:e}", e.bound), "monotone_failures": 0}))
        .observed(serde_json::to_value(&e)?)
        .residual(e.c_hat))
}
