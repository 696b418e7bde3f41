//! Viscosity tests for `w_δ`: quadratics touching from below or above away
//! from the origin, and sign changes of `w_δ − p` in every ball around `0`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::functional::HessianFunctional;
use crate::error::{Error, Result};
use crate::hessian::{cubic_form, gradient_w_delta, hessian_f64, w_delta, Point12};
use crate::hyperbolicity::Space;
use crate::report::{Check, Status};
use crate::rng::{gaussian_vec, normalize, sample_rng, stream_id, unit_vector};
use crate::spectra::{eigen_sym, SymMatrix, DEFAULT_TOL};

const MESH_DIRECTIONS: usize = 48;
const MESH_LEVELS: i32 = 12;
/// Tolerance on the sign of `F` at touching quadratics.
pub const TOUCH_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TouchSummary {
    pub quadratics: usize,
    /// Quadratics that stay on the correct side of `w_δ` on the whole mesh.
    pub touching: usize,
    pub wrong_sign: usize,
    /// Largest certified upper bound of `F(D²p)` over quadratics touching from below.
    pub max_below: f64,
    /// Smallest certified lower bound of `F(D²p)` over quadratics touching from above.
    pub min_above: f64,
    /// `|F|` at the second-order jet of `w_δ` at `x0`.
    pub jet_value: f64,
}

/// `p(x) = w(x0) + ∇w(x0)·(x − x0) + ½(x − x0)ᵀ(D²w(x0) ∓ N)(x − x0)` with
/// `N ≻ 0`; even indices touch from below, odd from above.
pub fn viscosity_touch_test(func: &HessianFunctional, x0: &Point12<f64>, quadratics: usize, seed: u64) -> Result<TouchSummary> {
    if !matches!(func.space, Space::Full) {
        return Err(Error::Domain("touching quadratics are tested on R¹²".into()));
    }
    let r0 = x0.norm();
    if !(r0 > 0.0 && r0 < 1.0) {
        return Err(Error::Domain(format!("|x0| = {r0} is not in (0, 1)")));
    }
    let delta = func.delta();
    let c0 = x0.coords();
    let w0 = w_delta(x0, delta)?;
    let g0 = gradient_w_delta(x0, delta)?;
    let h0 = hessian_f64(x0, delta)?;
    let x = func.spectrum(&h0)?;
    let anchor = func.certify(&x).ok_or_else(|| Error::Precondition("the jet at x0 is not on the sampled graph".into()))?;
    let jet_value = (func.graph.cone().to_axis(&x).1 - anchor.s).abs();
    let anchors = [(anchor.z.clone(), anchor.s)];

    let mut rng = sample_rng(seed, stream_id("viscosity-mesh"), 0);
    let mesh: Vec<Vec<f64>> = (0..MESH_DIRECTIONS)
        .flat_map(|_| {
            let dir = unit_vector(&mut rng, 12);
            (0..=MESH_LEVELS).map(move |k| dir.iter().map(|d| d * 0.5 * r0 * 2f64.powi(-k)).collect::<Vec<f64>>())
        })
        .collect();

    let stream = stream_id("viscosity-quadratic");
    let mut out = TouchSummary {
        quadratics,
        touching: 0,
        wrong_sign: 0,
        max_below: f64::NEG_INFINITY,
        min_above: f64::INFINITY,
        jet_value,
    };
    for j in 0..quadratics as u64 {
        let mut rng = sample_rng(seed, stream, j);
        let below = j % 2 == 0;
        let c = 10f64.powf(rng.random_range(0.0..=2.0));
        let v = gaussian_vec(&mut rng, 12);
        let n_mat = SymMatrix::from_fn(12, |a, b| c * (if a == b { 0.5 } else { 0.0 } + v[a] * v[b] / 12.0));
        let q = if below { h0.sub(&n_mat)? } else { h0.add(&n_mat)? };
        let touches = mesh.iter().all(|d| {
            let y: Vec<f64> = c0.iter().zip(d).map(|(a, b)| a + b).collect();
            let Ok(py) = Point12::from_coords(&y) else { return false };
            let Ok(wy) = w_delta(&py, delta) else { return false };
            let lin: f64 = g0.iter().zip(d).map(|(a, b)| a * b).sum();
            let p = w0 + lin + 0.5 * q.quadratic_form(d);
            let gap = wy - p;
            let tol = 1e-12 * (1.0 + wy.abs());
            if below { gap >= -tol } else { gap <= tol }
        });
        if !touches {
            continue;
        }
        out.touching += 1;
        let xq = eigen_sym(&q, DEFAULT_TOL)?.values;
        if below {
            let f = func.upper(&xq, &anchor);
            out.max_below = out.max_below.max(f);
            if f > TOUCH_TOL {
                out.wrong_sign += 1;
            }
        } else {
            let f = func.lower(&xq, &anchors);
            out.min_above = out.min_above.min(f);
            if f < -TOUCH_TOL {
                out.wrong_sign += 1;
            }
        }
    }
    Ok(out)
}

pub fn touch_check(func: &HessianFunctional, x0: &Point12<f64>, quadratics: usize, seed: u64) -> Result<Check> {
    let t = viscosity_touch_test(func, x0, quadratics, seed)?;
    let pass = t.touching > 0 && t.wrong_sign == 0 && t.jet_value <= 1e-7;
    Ok(Check::new(format!("ellipticity/touch/delta={}", func.delta()), Status::from_bool(pass))
        .inputs(serde_json::json!({"delta": func.delta(), "x0": x0.coords(), "quadratics": quadratics, "seed": seed, "samples": func.graph.len()}))
        .expected(serde_json::json!({"below": "F <= 0", "above": "F >= 0", "jet": "|F| <= 1e-7"}))
        .observed(serde_json::to_value(&t)?)
        .residual(t.max_below.max(-t.min_above).max(0.0)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignChangeSummary {
    pub delta: f64,
    pub quadratics: usize,
    pub witnessed: usize,
    /// Largest `k` with no sign change on the pair `±2⁻ᵏ x̂` before the change persists.
    pub max_onset: u32,
}

/// For `p(x) = b·x + ½xᵀQx` (so `p(0) = w_δ(0)`), a direction `x̂ ⊥ b` with
/// `P(x̂) ≠ 0` gives `w_δ(±r x̂) − p(±r x̂) = ±r^{2−δ}P(x̂) − r²Q(x̂)/2`, whose
/// signs differ for all small `r` when `δ > 0`.
pub fn sign_change_witness(delta: f64, quadratics: usize, seed: u64) -> Result<SignChangeSummary> {
    const LEVELS: u32 = 60;
    const PERSIST: u32 = 20;
    let stream = stream_id("viscosity-sign");
    let mut out = SignChangeSummary { delta, quadratics, witnessed: 0, max_onset: 0 };
    for j in 0..quadratics as u64 {
        let mut rng = sample_rng(seed, stream, j);
        let b = gaussian_vec(&mut rng, 12);
        let gq = gaussian_vec(&mut rng, 144);
        let q = SymMatrix::from_fn(12, |i, k| 0.5 * (gq[i * 12 + k] + gq[k * 12 + i]));
        let bb: f64 = b.iter().map(|v| v * v).sum();
        let dir = loop {
            let mut v = gaussian_vec(&mut rng, 12);
            let t = v.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>() / bb;
            v.iter_mut().zip(&b).for_each(|(x, y)| *x -= t * y);
            normalize(&mut v);
            if cubic_form(&Point12::from_coords(&v)?).abs() > 1e-3 {
                break v;
            }
        };
        let gap = |r: f64| -> Result<f64> {
            let y: Vec<f64> = dir.iter().map(|d| d * r).collect();
            let w = w_delta(&Point12::from_coords(&y)?, delta)?;
            let p = b.iter().zip(&y).map(|(a, c)| a * c).sum::<f64>() + 0.5 * q.quadratic_form(&y);
            Ok(w - p)
        };
        let changes = (1..=LEVELS + PERSIST)
            .map(|k| {
                let r = 2f64.powi(-(k as i32));
                Ok(gap(r)? * gap(-r)? < 0.0)
            })
            .collect::<Result<Vec<bool>>>()?;
        // onset: first level from which the sign change persists to the end
        let onset = (0..=LEVELS as usize).find(|&k| changes[k..].iter().all(|&c| c));
        if let Some(k) = onset {
            out.witnessed += 1;
            out.max_onset = out.max_onset.max(k as u32 + 1);
        }
    }
    Ok(out)
}

pub fn sign_change_check(delta: f64, quadratics: usize, seed: u64) -> Result<Check> {
    let s = sign_change_witness(delta, quadratics, seed)?;
    let status = if delta <= 0.0 {
        Status::Inconclusive
    } else {
        Status::from_bool(s.witnessed == quadratics)
    };
    Ok(Check::new(format!("ellipticity/sign-change/delta={delta}"), status)
        .inputs(serde_json::json!({"delta": delta, "quadratics": quadratics, "seed": seed}))
        .expected(serde_json::json!({"witnessed": quadratics}))
        .observed(serde_json::to_value(&s)?))
}
