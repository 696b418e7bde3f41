//! Strict hyperbolicity of matrix pencils and the positive quadratic form
//! orthogonal to two Hessians, which represents the equation as an Isaacs
//! (sup-inf of linear operators) equation.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::hessian::Point12;
use crate::hyperbolicity::Space;
use crate::report::{Check, Status};
use crate::rng::{sample_rng, stream_id};
use crate::spectra::{eigen_sym, eigh, SymMatrix, DEFAULT_TOL};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicityCertificate {
    pub m_bound: f64,
    pub lambda_first: f64,
    pub lambda_last: f64,
    /// `−λ₁/λₙ`
    pub ratio: f64,
    pub pass: bool,
}

/// `1/M < −λ₁/λₙ < M` with `λ₁ > 0 > λₙ`.
pub fn strict_hyperbolicity(a: &SymMatrix<f64>, m: f64) -> Result<HyperbolicityCertificate> {
    if !(m > 1.0) {
        return Err(Error::Precondition(format!("M = {m} must exceed 1")));
    }
    if a.max_abs() == 0.0 {
        return Err(Error::Precondition("zero matrix".into()));
    }
    let spec = eigen_sym(a, DEFAULT_TOL)?;
    let (first, last) = (spec.max(), spec.min());
    let ratio = -first / last;
    let pass = first > 0.0 && last < 0.0 && ratio > 1.0 / m && ratio < m;
    Ok(HyperbolicityCertificate { m_bound: m, lambda_first: first, lambda_last: last, ratio, pass })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PencilReport {
    pub m_bound: f64,
    /// `max(r, 1/r)` over the circle, or infinity where hyperbolicity is lost.
    pub worst_ratio: f64,
    pub worst_theta: f64,
    pub pass: bool,
}

fn pencil_badness(f1: &SymMatrix<f64>, f2: &SymMatrix<f64>, theta: f64) -> Result<f64> {
    let p = f1.scale(&theta.cos()).add(&f2.scale(&theta.sin()))?;
    let scale = f1.max_abs().max(f2.max_abs());
    if p.max_abs() <= 1e-12 * scale {
        return Ok(f64::INFINITY);
    }
    let spec = eigen_sym(&p, DEFAULT_TOL)?;
    let (first, last) = (spec.max(), spec.min());
    if !(first > 0.0 && last < 0.0) {
        return Ok(f64::INFINITY);
    }
    let r = -first / last;
    Ok(r.max(1.0 / r))
}

/// Strict hyperbolicity of `cos θ F₁ + sin θ F₂` on a grid of `θ ∈ [0, π)`
/// (negation inverts the ratio, so half the circle suffices), refined by
/// golden-section search around the worst grid point.
pub fn pencil_hyperbolic(f1: &SymMatrix<f64>, f2: &SymMatrix<f64>, m: f64, grid: usize) -> Result<PencilReport> {
    if f1.dim() != f2.dim() {
        return Err(Error::DimensionMismatch { expected: f1.dim(), got: f2.dim() });
    }
    let grid = grid.max(4);
    let h = std::f64::consts::PI / grid as f64;
    let mut worst = (0.0, f64::NEG_INFINITY);
    for k in 0..grid {
        let th = k as f64 * h;
        let b = pencil_badness(f1, f2, th)?;
        if b > worst.1 {
            worst = (th, b);
        }
    }
    if worst.1.is_finite() {
        // maximize badness on [θ − h, θ + h]
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let (mut lo, mut hi) = (worst.0 - h, worst.0 + h);
        for _ in 0..60 {
            let x1 = hi - g * (hi - lo);
            let x2 = lo + g * (hi - lo);
            let (b1, b2) = (pencil_badness(f1, f2, x1)?, pencil_badness(f1, f2, x2)?);
            for (x, b) in [(x1, b1), (x2, b2)] {
                if b > worst.1 {
                    worst = (x, b);
                }
            }
            if b1 > b2 {
                hi = x2;
            } else {
                lo = x1;
            }
        }
    }
    let theta = worst.0.rem_euclid(std::f64::consts::PI);
    Ok(PencilReport { m_bound: m, worst_ratio: worst.1, worst_theta: theta, pass: worst.1 < m })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositiveWitness {
    pub q: Vec<Vec<f64>>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// `|Tr(Q Fᵢ)| / (‖Q‖ ‖Fᵢ‖)`
    pub pairing_residuals: [f64; 2],
    pub restarts: usize,
    pub found: bool,
}

impl PositiveWitness {
    /// Ellipticity ratio `λ_max/λ_min` of the witness.
    pub fn conditioning(&self) -> f64 {
        self.lambda_max / self.lambda_min
    }
}

const WITNESS_RESTARTS: usize = 16;
const WITNESS_ITERS: usize = 200;

/// Frobenius-orthonormal basis of `span{F₁, F₂, I}`, with the `I` direction last.
struct ConstraintBasis {
    basis: Vec<SymMatrix<f64>>,
    start: Option<SymMatrix<f64>>,
}

fn frob(a: &SymMatrix<f64>, b: &SymMatrix<f64>) -> f64 {
    a.trace_product(b).expect("equal dimensions")
}

fn constraint_basis(f1: &SymMatrix<f64>, f2: &SymMatrix<f64>) -> ConstraintBasis {
    let n = f1.dim();
    let mut basis: Vec<SymMatrix<f64>> = Vec::new();
    let orth = |x: &SymMatrix<f64>, basis: &[SymMatrix<f64>]| {
        let mut y = x.clone();
        for _ in 0..2 {
            for e in basis {
                y = y.sub(&e.scale(&frob(&y, e))).expect("equal dimensions");
            }
        }
        y
    };
    for f in [f1, f2] {
        let scale = frob(f, f).sqrt();
        let y = orth(f, &basis);
        let norm = frob(&y, &y).sqrt();
        if norm > 1e-10 * scale {
            basis.push(y.scale(&(1.0 / norm)));
        }
    }
    let i_perp = orth(&SymMatrix::identity(n), &basis);
    let norm = frob(&i_perp, &i_perp).sqrt();
    // Tr(Q) = n on the start; Tr(i_perp) = ‖i_perp‖²
    let start = (norm > 1e-10 * (n as f64).sqrt()).then(|| i_perp.scale(&(n as f64 / (norm * norm))));
    if norm > 0.0 {
        basis.push(i_perp.scale(&(1.0 / norm)));
    }
    ConstraintBasis { basis, start }
}

fn project_tangent(x: &SymMatrix<f64>, cb: &ConstraintBasis) -> SymMatrix<f64> {
    let mut y = x.clone();
    for e in &cb.basis {
        y = y.sub(&e.scale(&frob(&y, e))).expect("equal dimensions");
    }
    y
}

/// `−τ log Σ exp(−λᵢ/τ)` and its gradient `Σ wᵢ vᵢvᵢᵀ`.
fn softmin(q: &SymMatrix<f64>, tau: f64) -> Result<(f64, f64, SymMatrix<f64>)> {
    let e = eigh(q, DEFAULT_TOL)?;
    let vals = &e.spectrum.values;
    let lmin = e.spectrum.min();
    let weights: Vec<f64> = vals.iter().map(|l| (-(l - lmin) / tau).exp()).collect();
    let z: f64 = weights.iter().sum();
    let value = lmin - tau * z.ln();
    let n = q.dim();
    let grad = SymMatrix::from_fn(n, |i, j| {
        (0..vals.len()).map(|k| weights[k] / z * e.vectors.get(i, k) * e.vectors.get(j, k)).sum()
    });
    Ok((value, lmin, grad))
}

fn ascend(q0: SymMatrix<f64>, cb: &ConstraintBasis) -> Result<SymMatrix<f64>> {
    let mut q = q0;
    let mut tau = 0.1;
    let (mut value, mut lmin, mut grad) = softmin(&q, tau)?;
    for _ in 0..WITNESS_ITERS {
        let before = value;
        let g = project_tangent(&grad, cb);
        let gnorm = frob(&g, &g).sqrt();
        if gnorm < 1e-12 {
            if tau < 1e-4 {
                break;
            }
            tau *= 0.5;
            (value, lmin, grad) = softmin(&q, tau)?;
            continue;
        }
        let mut step = 1.0 / gnorm;
        let mut moved = false;
        while step > 1e-10 {
            let cand = q.add(&g.scale(&step))?;
            let (v, lm, gr) = softmin(&cand, tau)?;
            if v > value {
                q = cand;
                value = v;
                lmin = lm;
                grad = gr;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            if tau < 1e-4 {
                break;
            }
            tau *= 0.5;
            (value, lmin, grad) = softmin(&q, tau)?;
        } else if lmin > 0.0 && value - before < 1e-4 * value.abs() {
            // a witness is in hand and the margin has stopped growing
            break;
        }
    }
    Ok(q)
}

fn witness_of(q: &SymMatrix<f64>, f1: &SymMatrix<f64>, f2: &SymMatrix<f64>, restarts: usize) -> Result<PositiveWitness> {
    let spec = eigen_sym(q, DEFAULT_TOL)?;
    let qn = q.frobenius();
    let res = |f: &SymMatrix<f64>| {
        let fnorm = f.frobenius();
        if fnorm == 0.0 {
            0.0
        } else {
            frob(q, f).abs() / (qn * fnorm)
        }
    };
    let pairing_residuals = [res(f1), res(f2)];
    let dense = q.to_dense();
    let rows = (0..q.dim()).map(|i| (0..q.dim()).map(|j| dense.get(i, j)).collect()).collect();
    let found = spec.min() > 0.0 && pairing_residuals.iter().all(|r| *r <= 1e-9);
    Ok(PositiveWitness { q: rows, lambda_min: spec.min(), lambda_max: spec.max(), pairing_residuals, restarts, found })
}

/// Maximizes `λ_min(Q)` over `{Tr(QF₁) = Tr(QF₂) = 0, Tr Q = n}` by projected
/// ascent on a softened minimum, restarting from perturbed starts if needed.
pub fn find_positive_witness(f1: &SymMatrix<f64>, f2: &SymMatrix<f64>, seed: u64) -> Result<PositiveWitness> {
    if f1.dim() != f2.dim() {
        return Err(Error::DimensionMismatch { expected: f1.dim(), got: f2.dim() });
    }
    let cb = constraint_basis(f1, f2);
    let Some(start) = cb.start.clone() else {
        // I ∈ span{F₁, F₂}: no trace-n form is orthogonal to both
        let q = SymMatrix::identity(f1.dim());
        let mut w = witness_of(&q, f1, f2, 0)?;
        w.found = false;
        return Ok(w);
    };
    let mut best = witness_of(&ascend(start.clone(), &cb)?, f1, f2, 0)?;
    let mut rng = sample_rng(seed, stream_id("witness"), 0);
    let n = f1.dim();
    for r in 1..=WITNESS_RESTARTS {
        if best.found {
            break;
        }
        let noise = SymMatrix::from_fn(n, |_, _| rng.random_range(-0.5..0.5));
        let q0 = start.add(&project_tangent(&noise, &cb))?;
        let cand = witness_of(&ascend(q0, &cb)?, f1, f2, r)?;
        if cand.lambda_min > best.lambda_min {
            best = cand;
        }
        best.restarts = r;
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsaacsPair {
    pub index: u64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub found: bool,
    pub conditioning: f64,
    pub pairing_residuals: [f64; 2],
}

/// Witnesses for `(D²w_δ(x), D²w_δ(y))` at one pair of nonzero points.
pub fn isaacs_pair(x: &Point12<f64>, y: &Point12<f64>, delta: f64, space: &Space, seed: u64) -> Result<PositiveWitness> {
    let hx = hessian_at(space, x, delta)?;
    let hy = hessian_at(space, y, delta)?;
    find_positive_witness(&hx, &hy, seed)
}

fn hessian_at(space: &Space, x: &Point12<f64>, delta: f64) -> Result<SymMatrix<f64>> {
    let norm = x.norm();
    if norm == 0.0 {
        return Err(Error::Domain("the Hessian is undefined at the origin".into()));
    }
    // H(cx) = c^{−δ} H(x)
    Ok(space.hessian(&x.normalized()?, delta)?.scale(&norm.powf(-delta)))
}

/// Random pairs with `0 < |x|, |y| ≤ 1`; records the worst witness conditioning.
pub fn isaacs_check(delta: f64, space: &Space, n_pairs: u64, seed: u64) -> Result<Check> {
    let stream = stream_id(&format!("isaacs/{}/{delta}", space.dim()));
    let pairs: Vec<IsaacsPair> = (0..n_pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, stream, i);
            let x = space.random_unit(&mut rng).scale(&rng.random_range(0.05..=1.0));
            let y = match i % 10 {
                0 => x.clone(),
                1 => x.neg(),
                _ => space.random_unit(&mut rng).scale(&rng.random_range(0.05..=1.0)),
            };
            let w = isaacs_pair(&x, &y, delta, space, seed ^ i)?;
            Ok(IsaacsPair {
                index: i,
                x: x.coords(),
                y: y.coords(),
                found: w.found,
                conditioning: w.conditioning(),
                pairing_residuals: w.pairing_residuals,
            })
        })
        .collect::<Result<_>>()?;
    let missing: Vec<&IsaacsPair> = pairs.iter().filter(|p| !p.found).collect();
    let worst = pairs.iter().filter(|p| p.found).map(|p| p.conditioning).fold(0.0, f64::max);
    let max_pairing = pairs.iter().flat_map(|p| p.pairing_residuals).fold(0.0, f64::max);
    let status = if missing.is_empty() { Status::Pass } else { Status::Inconclusive };
    Ok(Check::new(format!("isaacs/dim{}/delta{delta}", space.dim()), status)
        .inputs(json!({"delta": delta, "dim": space.dim(), "pairs": n_pairs, "seed": seed}))
        .expected(json!({"witness_found": n_pairs, "pairing_residual_at_most": 1e-9}))
        .observed(json!({"found": pairs.len() - missing.len(), "worst_conditioning": worst,
            "max_pairing_residual": max_pairing, "missing": missing.iter().take(20).collect::<Vec<_>>()}))
        .residual(max_pairing))
}

fn toy(a: f64, b: f64, c: f64) -> SymMatrix<f64> {
    SymMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) => a,
        (0, 1) | (1, 0) => b,
        _ => c,
    })
}

/// Small pencils with known answers: `diag(1, −1)` and the swap matrix are
/// hyperbolic with ratio 1 and witness `I`; `diag(2, −1, −1)` and
/// `diag(0, 1, −1)` have witness `I`; `F₂ = −F₁` is degenerate.
pub fn toy_pencils_check() -> Result<Check> {
    let (f1, f2) = (toy(1.0, 0.0, -1.0), toy(0.0, 1.0, 0.0));
    let pencil = pencil_hyperbolic(&f1, &f2, 1.0001, 64)?;
    let degenerate = pencil_hyperbolic(&f1, &f1.scale(&-1.0), 10.0, 64)?;
    let w2 = find_positive_witness(&f1, &f2, 0)?;
    let d1 = SymMatrix::diagonal(&[2.0, -1.0, -1.0]);
    let d2 = SymMatrix::diagonal(&[0.0, 1.0, -1.0]);
    let w3 = find_positive_witness(&d1, &d2, 0)?;
    let identity_dev = |w: &PositiveWitness| {
        let n = w.q.len();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (w.q[i][j] - if i == j { 1.0 } else { 0.0 }).abs()).fold(0.0, f64::max)
    };
    let (dev2, dev3) = (identity_dev(&w2), identity_dev(&w3));
    let ok = pencil.pass && (pencil.worst_ratio - 1.0).abs() < 1e-12 && !degenerate.pass && w2.found && w3.found && dev2 < 1e-6 && dev3 < 1e-6;
    Ok(Check::new("isaacs/toy-pencils", Status::from_bool(ok))
        .inputs(json!({"pencils": ["diag(1,-1), [[0,1],[1,0]]", "diag(2,-1,-1), diag(0,1,-1)", "F, -F"]}))
        .expected(json!({"ratio": 1.0, "witness": "I", "degenerate_pass": false}))
        .observed(json!({"ratio": pencil.worst_ratio, "witness_deviation": [dev2, dev3], "degenerate_pass": degenerate.pass}))
        .residual(dev2.max(dev3)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hessian::hessian_f64;
    use crate::hyperbolicity::c_delta;

    fn m2(a: f64, b: f64, c: f64) -> SymMatrix<f64> {
        SymMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => a,
            (0, 1) => b,
            _ => c,
        })
    }

    #[test]
    fn strict_hyperbolicity_examples() {
        let c = strict_hyperbolicity(&SymMatrix::diagonal(&[1.0, -1.0]), 2.0).unwrap();
        assert!(c.pass && c.ratio == 1.0);
        assert!(!strict_hyperbolicity(&SymMatrix::diagonal(&[1.0, 1.0]), 100.0).unwrap().pass);
        assert!(strict_hyperbolicity(&SymMatrix::zeros(3), 2.0).is_err());
    }

    #[test]
    fn toy_pencils() {
        assert!(toy_pencils_check().unwrap().passed());
    }

    #[test]
    fn pencil_examples() {
        let f1 = m2(1.0, 0.0, -1.0);
        let f2 = m2(0.0, 1.0, 0.0);
        let r = pencil_hyperbolic(&f1, &f2, 1.0001, 64).unwrap();
        assert!(r.pass && (r.worst_ratio - 1.0).abs() < 1e-12);
        let r = pencil_hyperbolic(&f1, &f1.scale(&-1.0), 10.0, 64).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn hessian_pencil_is_hyperbolic() {
        let mut rng = sample_rng(100, 0, 0);
        for delta in [0.0, 0.5] {
            let x = Point12::random_unit(&mut rng);
            let y = Point12::random_unit(&mut rng);
            let f1 = hessian_f64(&x, delta).unwrap();
            let f2 = hessian_f64(&y, delta).unwrap().scale(&-1.0);
            let r = pencil_hyperbolic(&f1, &f2, c_delta(delta) + 1.0, 180).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn witness_examples() {
        let w = find_positive_witness(&m2(1.0, 0.0, -1.0), &m2(0.0, 1.0, 0.0), 0).unwrap();
        assert!(w.found);
        assert!((w.q[0][0] - 1.0).abs() < 1e-9 && w.q[0][1].abs() < 1e-9 && (w.q[1][1] - 1.0).abs() < 1e-9);
        let w = find_positive_witness(&SymMatrix::diagonal(&[2.0, -1.0, -1.0]), &SymMatrix::diagonal(&[0.0, 1.0, -1.0]), 0).unwrap();
        assert!(w.found);
        for i in 0..3 {
            assert!((w.q[i][i] - 1.0).abs() < 1e-6, "{:?}", w.q);
        }
        let w = find_positive_witness(&SymMatrix::identity(3), &SymMatrix::diagonal(&[0.0, 1.0, -1.0]), 0).unwrap();
        assert!(!w.found);
    }

    #[test]
    fn witness_scaling_invariance() {
        let mut rng = sample_rng(101, 0, 0);
        let f1 = hessian_f64(&Point12::random_unit(&mut rng), 0.0).unwrap();
        let f2 = hessian_f64(&Point12::random_unit(&mut rng), 0.0).unwrap();
        let w = find_positive_witness(&f1, &f2, 0).unwrap();
        assert!(w.found);
        let q = SymMatrix::from_fn(12, |i, j| w.q[i][j]);
        for (c1, c2) in [(3.0, -0.5), (-2.0, 7.0)] {
            let r1 = q.trace_product(&f1.scale(&c1)).unwrap().abs() / (q.frobenius() * f1.frobenius() * c1.abs());
            let r2 = q.trace_product(&f2.scale(&c2)).unwrap().abs() / (q.frobenius() * f2.frobenius() * c2.abs());
            assert!(r1 <= 1e-9 && r2 <= 1e-9);
        }
    }

    #[test]
    fn isaacs_small_sweep() {
        for delta in [0.0, 0.5] {
            let c = isaacs_check(delta, &Space::Full, 40, 9).unwrap();
            assert!(c.passed(), "{:?}", c.observed);
        }
        let c = isaacs_check(0.0, &Space::hyperplane_default(), 20, 9).unwrap();
        assert!(c.passed(), "{:?}", c.observed);
    }
}
