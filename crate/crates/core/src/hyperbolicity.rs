//! Monte Carlo certification of the two-sided ratio bound for extreme
//! eigenvalues of Hessian differences, with the trace identities and the
//! elementary bounds used along the way.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::factorization::site_json;
use crate::hessian::{
    cubic_form, hessian, hessian_f64, hessian_restricted, hessian_restricted_coordinate, restricted_lambda6,
    restricted_trace_closed_form, Hyperplane, Point12,
};
use crate::poly::{depressed_cubic_roots, W_MAX};
use crate::report::{Check, Status};
use crate::rng::{sample_rng, stream_id};
use crate::scalar::{format_rational, Rational, Scalar};
use crate::spectra::{eigen_sym, haar_orthogonal_with, near_identity_orthogonal, weyl_check, DMatrix, SymMatrix, DEFAULT_TOL};

/// Slack on the ratio bounds and sign conditions.
pub const RATIO_SLACK: f64 = 1e-9;
/// Float tolerance on trace identities.
pub const TRACE_TOL: f64 = 1e-10;
/// Differences with all entries below this are treated as the zero matrix.
pub const ZERO_DIFF: f64 = 1e-13;
/// Violations kept verbatim in a report.
const MAX_LISTED: usize = 20;

/// `C_δ = (26 + 3δ − δ²)/(1 − δ)`
pub fn c_delta(delta: f64) -> f64 {
    (26.0 + 3.0 * delta - delta * delta) / (1.0 - delta)
}

/// Where the Hessians live: all of `R¹²` or a hyperplane through the origin.
#[derive(Clone, Debug)]
pub enum Space {
    Full,
    Restricted(Hyperplane),
}

impl Space {
    /// The default 11-dimensional space `{r0 = 0}`.
    pub fn hyperplane_default() -> Self {
        Space::Restricted(Hyperplane::coordinate(0).expect("valid coordinate"))
    }

    pub fn for_dim(dim: usize) -> Result<Self> {
        match dim {
            12 => Ok(Space::Full),
            11 => Ok(Space::hyperplane_default()),
            d => Err(Error::Domain(format!("dimension {d} is not 12 or 11"))),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Space::Full => 12,
            Space::Restricted(_) => 11,
        }
    }

    pub fn bound(&self, delta: f64) -> f64 {
        match self {
            Space::Full => c_delta(delta),
            Space::Restricted(_) => 24.0,
        }
    }

    pub fn hessian(&self, x: &Point12<f64>, delta: f64) -> Result<SymMatrix<f64>> {
        match self {
            Space::Full => hessian_f64(x, delta),
            Space::Restricted(h) => hessian_restricted(x, h),
        }
    }

    pub fn random_unit<R: Rng>(&self, rng: &mut R) -> Point12<f64> {
        match self {
            Space::Full => Point12::random_unit(rng),
            Space::Restricted(h) => h.random_unit_point(rng),
        }
    }

    /// Closed form of the trace of the Hessian at a unit site.
    pub fn trace_closed_form(&self, x: &Point12<f64>, delta: f64) -> f64 {
        match self {
            Space::Full => -(1.0 + delta) * (15.0 - delta) * cubic_form(x),
            Space::Restricted(h) => restricted_trace_closed_form(x, h),
        }
    }

    fn perturb<R: Rng>(&self, rng: &mut R, x: &Point12<f64>, eta: f64) -> Point12<f64> {
        let g = self.random_unit(rng);
        let c: Vec<f64> = x.coords().iter().zip(g.coords()).map(|(a, b)| a + eta * b).collect();
        Point12::from_coords(&c).and_then(|p| p.normalized()).expect("twelve finite coordinates")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    /// Independent `a`, `b̄`, Haar `O`, `K = |b|^{-δ}` with `|b|` log-uniform.
    Generic,
    /// `b̄` a small perturbation of `a`.
    NearPair,
    /// `O` close to the identity, which stabilizes `H(a)`.
    NearStabilizer,
    /// `K = 1 ± 10^{-k}` with `b̄` at or near `a`.
    KGrid,
}

const KINDS: [SampleKind; 4] = [SampleKind::Generic, SampleKind::NearPair, SampleKind::NearStabilizer, SampleKind::KGrid];

/// `H_δ(a) − K · Oᵀ H_δ(b̄) O` for unit `a`, `b̄`.
#[derive(Clone, Debug)]
pub struct DifferenceSample {
    pub a: Point12<f64>,
    pub b: Point12<f64>,
    pub o: DMatrix,
    pub k: f64,
    pub delta: f64,
    pub kind: SampleKind,
}

/// Deterministic in `(seed, δ, dimension, index)`.
pub fn sample_difference(space: &Space, delta: f64, seed: u64, index: u64) -> DifferenceSample {
    let stream = stream_id(&format!("hyperbolicity/{}/{delta}", space.dim()));
    let mut rng = sample_rng(seed, stream, index);
    let kind = KINDS[(index % 4) as usize];
    let n = space.dim();
    let a = space.random_unit(&mut rng);
    let log_uniform = |rng: &mut crate::rng::SampleRng, lo: f64, hi: f64| 10f64.powf(rng.random_range(lo..hi));
    let k_of_norm = |norm: f64| norm.powf(-delta);
    match kind {
        SampleKind::Generic => {
            let b = space.random_unit(&mut rng);
            let o = haar_orthogonal_with(&mut rng, n);
            let k = k_of_norm(log_uniform(&mut rng, -3.0, 3.0));
            DifferenceSample { a, b, o, k, delta, kind }
        }
        SampleKind::NearPair => {
            let eta = log_uniform(&mut rng, -6.0, 0.0);
            let b = space.perturb(&mut rng, &a, eta);
            let o = if rng.random_bool(0.5) { DMatrix::identity(n) } else { haar_orthogonal_with(&mut rng, n) };
            let k = k_of_norm(log_uniform(&mut rng, -1.0, 1.0));
            DifferenceSample { a, b, o, k, delta, kind }
        }
        SampleKind::NearStabilizer => {
            let b = if rng.random_bool(0.5) { a.clone() } else { space.random_unit(&mut rng) };
            let eta = log_uniform(&mut rng, -6.0, -1.0);
            let o = near_identity_orthogonal(&mut rng, n, eta);
            let k = k_of_norm(log_uniform(&mut rng, -1.0, 1.0));
            DifferenceSample { a, b, o, k, delta, kind }
        }
        SampleKind::KGrid => {
            let step = 10f64.powi(-rng.random_range(1..=6));
            let k = if delta == 0.0 { 1.0 } else if rng.random_bool(0.5) { 1.0 + step } else { 1.0 - step };
            // at δ = 0 the perturbation carries the smallness instead of K
            let b = if delta > 0.0 && rng.random_bool(0.5) { a.clone() } else { space.perturb(&mut rng, &a, step) };
            DifferenceSample { a, b, o: DMatrix::identity(n), k, delta, kind }
        }
    }
}

pub struct Difference {
    pub matrix: SymMatrix<f64>,
    pub zero: bool,
    pub hessian_a: SymMatrix<f64>,
    pub hessian_b: SymMatrix<f64>,
}

pub fn difference_matrix(s: &DifferenceSample, space: &Space) -> Result<Difference> {
    let ha = space.hessian(&s.a, s.delta)?;
    let hb = space.hessian(&s.b, s.delta)?;
    let rotated = hb.congruence(&s.o).scale(&s.k);
    let matrix = ha.sub(&rotated)?;
    let zero = matrix.max_abs() <= ZERO_DIFF;
    Ok(Difference { matrix, zero, hessian_a: ha, hessian_b: hb })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRecord {
    pub lambda_first: f64,
    pub lambda_last: f64,
    pub ratio: f64,
    pub bound: f64,
    pub zero: bool,
    pub trace: f64,
    pub trace_expected: f64,
    pub weyl: bool,
    /// `Tr ≥ 0 ⇒ 11Λ₁ ≥ −Λ_last` (and the mirror statement).
    pub proof_path: bool,
    pub pass: bool,
}

pub fn ratio_record(s: &DifferenceSample, space: &Space) -> Result<RatioRecord> {
    let d = difference_matrix(s, space)?;
    let bound = space.bound(s.delta);
    let spec = eigen_sym(&d.matrix, DEFAULT_TOL)?;
    let (first, last) = (spec.max(), spec.min());
    let trace = d.matrix.trace();
    let trace_expected = space.trace_closed_form(&s.a, s.delta) - s.k * space.trace_closed_form(&s.b, s.delta);
    let sa = eigen_sym(&d.hessian_a, DEFAULT_TOL)?;
    let sb = eigen_sym(&d.hessian_b.scale(&s.k), DEFAULT_TOL)?;
    let weyl = weyl_check(&sa, &sb, &spec)?;
    let others = (space.dim() - 1) as f64;
    let proof_path = if trace >= 0.0 {
        others * first >= -last - RATIO_SLACK
    } else {
        others * -last >= first - RATIO_SLACK
    };
    let ratio = first / -last;
    let in_bounds = first > 0.0 && last < 0.0 && ratio <= bound + RATIO_SLACK && ratio >= 1.0 / bound - RATIO_SLACK;
    let pass = d.zero || (in_bounds && weyl && (trace - trace_expected).abs() <= TRACE_TOL && proof_path);
    Ok(RatioRecord {
        lambda_first: first,
        lambda_last: last,
        ratio,
        bound,
        zero: d.zero,
        trace,
        trace_expected,
        weyl,
        proof_path,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub index: u64,
    pub kind: SampleKind,
    pub record: RatioRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub delta: f64,
    pub dim: usize,
    pub bound: f64,
    pub samples: u64,
    pub zero: u64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub max_trace_residual: f64,
    pub weyl_failures: u64,
    pub proof_path_failures: u64,
    pub violations: u64,
    pub listed: Vec<Violation>,
}

impl CellSummary {
    fn empty(delta: f64, space: &Space) -> Self {
        CellSummary {
            delta,
            dim: space.dim(),
            bound: space.bound(delta),
            samples: 0,
            zero: 0,
            min_ratio: f64::INFINITY,
            max_ratio: 0.0,
            max_trace_residual: 0.0,
            weyl_failures: 0,
            proof_path_failures: 0,
            violations: 0,
            listed: Vec::new(),
        }
    }

    fn absorb(mut self, index: u64, kind: SampleKind, r: RatioRecord) -> Self {
        self.samples += 1;
        if r.zero {
            self.zero += 1;
            return self;
        }
        self.min_ratio = self.min_ratio.min(r.ratio);
        self.max_ratio = self.max_ratio.max(r.ratio);
        self.max_trace_residual = self.max_trace_residual.max((r.trace - r.trace_expected).abs());
        self.weyl_failures += (!r.weyl) as u64;
        self.proof_path_failures += (!r.proof_path) as u64;
        if !r.pass {
            self.violations += 1;
            self.listed.push(Violation { index, kind, record: r });
        }
        self
    }

    fn merge(mut self, other: Self) -> Self {
        self.samples += other.samples;
        self.zero += other.zero;
        self.min_ratio = self.min_ratio.min(other.min_ratio);
        self.max_ratio = self.max_ratio.max(other.max_ratio);
        self.max_trace_residual = self.max_trace_residual.max(other.max_trace_residual);
        self.weyl_failures += other.weyl_failures;
        self.proof_path_failures += other.proof_path_failures;
        self.violations += other.violations;
        self.listed.extend(other.listed);
        self.listed.sort_by_key(|v| v.index);
        self.listed.truncate(MAX_LISTED);
        self
    }
}

/// Runs `n_samples` differences; the summary does not depend on the thread count.
pub fn certify_cell(space: &Space, delta: f64, n_samples: u64, seed: u64) -> Result<CellSummary> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::Domain(format!("δ = {delta} is outside [0, 1)")));
    }
    if matches!(space, Space::Restricted(_)) && delta != 0.0 {
        return Err(Error::Domain("the restricted certification is stated for δ = 0".into()));
    }
    (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let s = sample_difference(space, delta, seed, i);
            ratio_record(&s, space).map(|r| CellSummary::empty(delta, space).absorb(i, s.kind, r))
        })
        .try_reduce(|| CellSummary::empty(delta, space), |x, y| Ok(x.merge(y)))
}

pub fn certify_ratio(delta: f64, dim: usize, n_samples: u64, seed: u64) -> Result<Check> {
    let space = Space::for_dim(dim)?;
    let cell = certify_cell(&space, delta, n_samples, seed)?;
    Ok(cell_check(&cell, seed))
}

pub fn cell_check(cell: &CellSummary, seed: u64) -> Check {
    let ok = cell.violations == 0;
    Check::new(format!("ratio/dim{}/delta{}", cell.dim, cell.delta), Status::from_bool(ok))
        .inputs(json!({"delta": cell.delta, "dim": cell.dim, "samples": cell.samples, "seed": seed}))
        .expected(json!({"ratio_within": [1.0 / cell.bound, cell.bound]}))
        .observed(serde_json::to_value(cell).unwrap_or_default())
        .residual((cell.max_ratio - cell.bound).max(1.0 / cell.bound - cell.min_ratio))
}

/// At `δ = 0` the bound is only claimed for `K = 1`; this sweeps
/// `K ∈ [10⁻³, 10³]` anyway. Violations are outside the hypotheses and are
/// reported as INCONCLUSIVE, never FAIL.
pub fn k_stress(n_samples: u64, seed: u64) -> Result<Check> {
    let space = Space::Full;
    let stream = stream_id("hyperbolicity/k-stress");
    let out: Vec<(u64, f64, f64)> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, stream, i);
            let a = Point12::random_unit(&mut rng);
            let b = Point12::random_unit(&mut rng);
            let o = haar_orthogonal_with(&mut rng, 12);
            let k = 10f64.powf(rng.random_range(-3.0..3.0));
            let s = DifferenceSample { a, b, o, k, delta: 0.0, kind: SampleKind::Generic };
            ratio_record(&s, &space).map(|r| (i, k, r.ratio))
        })
        .collect::<Result<_>>()?;
    let bad: Vec<&(u64, f64, f64)> = out.iter().filter(|(_, _, r)| !(*r <= 26.0 && *r >= 1.0 / 26.0)).collect();
    let status = if bad.is_empty() { Status::Pass } else { Status::Inconclusive };
    let worst = out.iter().map(|t| t.2.max(1.0 / t.2)).fold(0.0, f64::max);
    Ok(Check::new("k-stress/dim12/delta0", status)
        .inputs(json!({"samples": n_samples, "seed": seed, "k_range": [1e-3, 1e3]}))
        .expected(json!({"ratio_within": [1.0 / 26.0, 26.0], "hypothesis": "K = 1 only"}))
        .observed(json!({"out_of_hypothesis_violations": bad.len(), "worst_ratio": worst,
            "first": bad.iter().take(MAX_LISTED).collect::<Vec<_>>()}))
        .residual(worst - 26.0))
}

/// Exact `Tr H_δ(a) = −(1+δ)(15−δ) P(a)` at a rational unit site.
pub fn trace_identity_exact(a: &Point12<Rational>, delta: &Rational) -> Result<Check> {
    let tr = hessian(a, delta)?.matrix.trace();
    let one = Rational::from_int(1);
    let expected = -(&one + delta) * (Rational::from_int(15) - delta) * cubic_form(a);
    Ok(Check::new("trace-exact", Status::from_bool(tr == expected))
        .inputs(json!({"site": site_json(a), "delta": format_rational(delta)}))
        .expected(json!(format_rational(&expected)))
        .observed(json!(format_rational(&tr)))
        .residual((tr - expected).to_f64().abs()))
}

/// Exact `Tr = −14 P(a)` for the Hessian restricted to `{x_k = 0}`.
pub fn restricted_trace_exact(a: &Point12<Rational>, k: usize) -> Result<Check> {
    let tr = hessian_restricted_coordinate(a, k)?.trace();
    let expected = Rational::from_int(-14) * cubic_form(a);
    Ok(Check::new("restricted-trace-exact", Status::from_bool(tr == expected))
        .inputs(json!({"site": site_json(a), "coordinate": k}))
        .expected(json!(format_rational(&expected)))
        .observed(json!(format_rational(&tr)))
        .residual((tr - expected).to_f64().abs()))
}

/// Float trace identity for a sampled difference.
pub fn trace_identity(s: &DifferenceSample, space: &Space) -> Result<Check> {
    let d = difference_matrix(s, space)?;
    let tr = d.matrix.trace();
    let expected = space.trace_closed_form(&s.a, s.delta) - s.k * space.trace_closed_form(&s.b, s.delta);
    let res = (tr - expected).abs();
    Ok(Check::new("trace", Status::from_bool(res <= TRACE_TOL))
        .inputs(json!({"a": s.a.coords(), "b": s.b.coords(), "k": s.k, "delta": s.delta, "dim": space.dim()}))
        .expected(json!(expected))
        .observed(json!(tr))
        .residual(res))
}

/// At `δ = 0`, `A = H(a)`, `B = OᵀH(b)O`: `Tr(B − A) = 15(P(a) − P(b))`, which is
/// `≤ 15Λ₁` when `P(a) ≥ P(b)` and `≥ 15Λ₁₂` otherwise; also
/// `Λ₁ ≥ λ₆(A) − λ₆(B) ≥ P(a) − P(b)` in the first case.
pub fn main_lemma_check(a: &Point12<f64>, b: &Point12<f64>, o: &DMatrix) -> Result<Check> {
    let s = DifferenceSample { a: a.clone(), b: b.clone(), o: o.clone(), k: 1.0, delta: 0.0, kind: SampleKind::Generic };
    let d = difference_matrix(&s, &Space::Full)?;
    let spec = eigen_sym(&d.matrix, DEFAULT_TOL)?;
    let (pa, pb) = (cubic_form(a), cubic_form(b));
    let tr_ba = -d.matrix.trace();
    let gap = pa - pb;
    let identity = (tr_ba - 15.0 * gap).abs();
    let (inequality, chain) = if gap >= 0.0 {
        let l6 = restricted_lambda6(pa) - restricted_lambda6(pb);
        (tr_ba <= 15.0 * spec.max() + RATIO_SLACK, spec.max() >= l6 - RATIO_SLACK && l6 >= gap - RATIO_SLACK)
    } else {
        let l6 = restricted_lambda6(pa) - restricted_lambda6(pb);
        (tr_ba >= 15.0 * spec.min() - RATIO_SLACK, spec.min() <= l6 + RATIO_SLACK && l6 <= gap + RATIO_SLACK)
    };
    let ok = identity <= TRACE_TOL && inequality && chain;
    Ok(Check::new("main-lemma", Status::from_bool(ok))
        .inputs(json!({"a": a.coords(), "b": b.coords()}))
        .expected(json!({"trace": 15.0 * gap}))
        .observed(json!({"trace": tr_ba, "lambda_first": spec.max(), "lambda_last": spec.min(),
            "inequality": inequality, "lambda6_chain": chain}))
        .residual(identity))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuDifference {
    pub diffs: [f64; 3],
    pub mu_plus: f64,
    pub mu_minus: f64,
    pub ratio: f64,
    pub epsilon: f64,
    pub pass: bool,
}

/// `ε = (1−δ)/(5+δ) ≤ μ₊(K)/(−μ₋(K)) ≤ 1/ε` for the differences `μᵢ − K μ̄ᵢ`.
pub fn mu_difference_bound(w: f64, wbar: f64, k: f64, delta: f64) -> Result<MuDifference> {
    if !(k > 0.0) {
        return Err(Error::Precondition(format!("K = {k} must be positive")));
    }
    if (k - 1.0).abs() + (wbar - w).abs() == 0.0 {
        return Err(Error::Precondition("K = 1 and W = W̄: all differences vanish".into()));
    }
    let mu = depressed_cubic_roots(w, delta)?.as_array();
    let mubar = depressed_cubic_roots(wbar, delta)?.as_array();
    let diffs = [mu[0] - k * mubar[0], mu[1] - k * mubar[1], mu[2] - k * mubar[2]];
    let mu_plus = diffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mu_minus = diffs.iter().copied().fold(f64::INFINITY, f64::min);
    let ratio = mu_plus / -mu_minus;
    let epsilon = (1.0 - delta) / (5.0 + delta);
    let pass = mu_plus > 0.0 && mu_minus < 0.0 && ratio >= epsilon - RATIO_SLACK && ratio <= 1.0 / epsilon + RATIO_SLACK;
    Ok(MuDifference { diffs, mu_plus, mu_minus, ratio, epsilon, pass })
}

/// Random `(W, W̄, K, δ)` tuples, including the special cases `K = 1` and `W = K W̄`.
pub fn mu_difference_sweep(n: u64, seed: u64) -> Result<Check> {
    let stream = stream_id("mu-difference");
    let results: Vec<(u64, [f64; 4], MuDifference)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, stream, i);
            let delta = rng.random_range(0.0..0.99);
            let mut w = rng.random_range(-W_MAX..=W_MAX);
            let mut k = 10f64.powf(rng.random_range(-3.0..3.0));
            let mut wbar = rng.random_range(-W_MAX..=W_MAX);
            match i % 4 {
                1 => k = 1.0,
                2 => {
                    // W = K W̄ with |W| ≤ W_MAX
                    k = rng.random_range(0.05..1.0);
                    w = k * wbar;
                }
                3 => k = 1.0 + 10f64.powi(-rng.random_range(1..=8)) * if rng.random_bool(0.5) { 1.0 } else { -1.0 },
                _ => {}
            }
            if k == 1.0 && w == wbar {
                wbar = -wbar;
                if w == wbar {
                    w = W_MAX / 2.0;
                }
            }
            mu_difference_bound(w, wbar, k, delta).map(|m| (i, [w, wbar, k, delta], m))
        })
        .collect::<Result<_>>()?;
    let bad: Vec<_> = results.iter().filter(|r| !r.2.pass).take(MAX_LISTED).collect();
    let failures = results.iter().filter(|r| !r.2.pass).count();
    let (lo, hi) = results.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
        (lo.min(r.2.ratio / r.2.epsilon), hi.max(r.2.ratio * r.2.epsilon))
    });
    Ok(Check::new("mu-difference", Status::from_bool(failures == 0))
        .inputs(json!({"samples": n, "seed": seed}))
        .expected(json!({"ratio_over_epsilon_at_least": 1.0, "ratio_times_epsilon_at_most": 1.0}))
        .observed(json!({"failures": failures, "min_ratio_over_epsilon": lo, "max_ratio_times_epsilon": hi,
            "first": bad.iter().map(|r| json!({"index": r.0, "w_wbar_k_delta": r.1, "result": r.2})).collect::<Vec<_>>()}))
        .residual((1.0 - lo).max(hi - 1.0)))
}

/// For `l₁ ≥ l₂ ≥ l₃`, `t = l₁ + l₂ + l₃ ≥ 0`, `l₃ ≤ −ht`:
/// `−l₁/l₃ ∈ [h/(2h+1), (2h+1)/h]` (and `[1/2, 2]` when `t = 0`).
pub fn claim_check(l: [f64; 3], h: f64) -> Result<bool> {
    let [l1, l2, l3] = l;
    let mut t = l1 + l2 + l3;
    // a sum that cancels to rounding level is the t = 0 case
    if t.abs() <= 1e-12 * (l1.abs() + l2.abs() + l3.abs()) {
        t = 0.0;
    }
    if !(l1 >= l2 && l2 >= l3) || t < 0.0 || !(h > 0.0) || l3 > -h * t || l3 >= 0.0 {
        return Err(Error::Precondition(format!("inadmissible triple {l:?} with h = {h}")));
    }
    let q = -l1 / l3;
    let (lo, hi) = if t == 0.0 { (0.5, 2.0) } else { (h / (2.0 * h + 1.0), (2.0 * h + 1.0) / h) };
    Ok(q >= lo * (1.0 - 1e-12) && q <= hi * (1.0 + 1e-12))
}

pub fn claim_sweep(n: u64, seed: u64) -> Result<Check> {
    let stream = stream_id("claim");
    let failures: Vec<(u64, [f64; 3], f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, stream, i);
            let l3 = -rng.random_range(1e-3..10.0);
            let t = if i % 5 == 0 { 0.0 } else { rng.random_range(0.0..1.0) * -l3 * 10.0 };
            let rest = t - l3;
            // l₂ ∈ [l₃, rest/2] keeps l₁ = rest − l₂ ≥ l₂
            let l2 = rng.random_range(l3..=rest / 2.0);
            let l1 = rest - l2;
            let hmax = if t == 0.0 { 100.0 } else { -l3 / t };
            let h = rng.random_range(0.0..1.0f64).max(1e-9) * hmax;
            claim_check([l1, l2, l3], h).map(|ok| (i, [l1, l2, l3], h, ok))
        })
        .filter_map(|r| match r {
            Ok((_, _, _, true)) => None,
            Ok((i, l, h, false)) => Some(Ok((i, l, h))),
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<_>>()?;
    Ok(Check::new("claim", Status::from_bool(failures.is_empty()))
        .inputs(json!({"samples": n, "seed": seed}))
        .expected(json!({"failures": 0}))
        .observed(json!({"failures": failures.len(), "first": failures.iter().take(MAX_LISTED).collect::<Vec<_>>()})))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hessian::random_rational_sphere_point;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn c_delta_values() {
        assert_eq!(c_delta(0.0), 26.0);
        assert!((c_delta(0.5) - 54.5).abs() < 1e-12);
        assert_eq!(Space::hyperplane_default().bound(0.0), 24.0);
    }

    fn fixed(a: &Point12<f64>, b: &Point12<f64>, k: f64, delta: f64) -> DifferenceSample {
        DifferenceSample { a: a.clone(), b: b.clone(), o: DMatrix::identity(12), k, delta, kind: SampleKind::Generic }
    }

    #[test]
    fn difference_examples() {
        let mut rng = sample_rng(90, 0, 0);
        let a = Point12::random_unit(&mut rng);
        assert!(difference_matrix(&fixed(&a, &a, 1.0, 0.0), &Space::Full).unwrap().zero);
        let d = difference_matrix(&fixed(&a, &a, 2.0, 0.0), &Space::Full).unwrap();
        let h = hessian_f64(&a, 0.0).unwrap();
        assert!(d.matrix.add(&h).unwrap().max_abs() < 1e-14);
        let r = ratio_record(&fixed(&a, &a, 2.0, 0.0), &Space::Full).unwrap();
        let mu = depressed_cubic_roots(cubic_form(&a), 0.0).unwrap();
        assert!((r.ratio - (-mu.mu3) / mu.mu1).abs() < 1e-9);
        let d = difference_matrix(&fixed(&a, &a.neg(), 1.0, 0.0), &Space::Full).unwrap();
        assert!(d.matrix.sub(&h.scale(&2.0)).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn sampling_is_deterministic() {
        let s1 = sample_difference(&Space::Full, 0.3, 7, 11);
        let s2 = sample_difference(&Space::Full, 0.3, 7, 11);
        assert_eq!(s1.a, s2.a);
        assert_eq!(s1.o, s2.o);
        assert_eq!(s1.k, s2.k);
        for i in 0..8 {
            let s = sample_difference(&Space::hyperplane_default(), 0.0, 7, i);
            assert_eq!(s.o.rows, 11);
            assert_eq!(s.k, 1.0);
        }
    }

    #[test]
    fn small_cells_pass() {
        for delta in [0.0, 0.5, 0.9] {
            let cell = certify_cell(&Space::Full, delta, 400, 1).unwrap();
            assert_eq!(cell.violations, 0, "{cell:?}");
            assert!(cell.max_ratio <= c_delta(delta));
        }
        let cell = certify_cell(&Space::hyperplane_default(), 0.0, 400, 1).unwrap();
        assert_eq!(cell.violations, 0, "{cell:?}");
        assert!(certify_cell(&Space::hyperplane_default(), 0.5, 1, 1).is_err());
    }

    #[test]
    fn cell_is_independent_of_thread_count() {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let a = pool.install(|| certify_cell(&Space::Full, 0.2, 200, 5).unwrap());
        let b = certify_cell(&Space::Full, 0.2, 200, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exact_traces() {
        let mut rng = sample_rng(91, 0, 0);
        for d in [rat_int(0), rat(1, 3)] {
            let a = random_rational_sphere_point(&mut rng, 5, 4);
            assert!(trace_identity_exact(&a, &d).unwrap().passed());
        }
        let v = crate::hessian::random_rational_sphere_vector(&mut rng, 11, 5, 4);
        let mut c = vec![rat_int(0)];
        c.extend(v);
        let a = Point12::from_coords(&c).unwrap();
        assert!(restricted_trace_exact(&a, 0).unwrap().passed());
    }

    #[test]
    fn main_lemma_samples() {
        let mut rng = sample_rng(92, 0, 0);
        for _ in 0..100 {
            let a = Point12::random_unit(&mut rng);
            let b = Point12::random_unit(&mut rng);
            let o = haar_orthogonal_with(&mut rng, 12);
            assert!(main_lemma_check(&a, &b, &o).unwrap().passed());
        }
    }

    #[test]
    fn mu_difference_examples() {
        assert_eq!(mu_difference_bound(0.1, 0.05, 1.0, 0.0).unwrap().epsilon, 0.2);
        let (w, wb) = (0.15, -0.05);
        for delta in [0.0, 0.5] {
            let m = mu_difference_bound(w, wb, 1.0, delta).unwrap();
            assert!(m.diffs[1] >= (1.0 - delta) * (w - wb) - 1e-12);
            assert!(m.pass);
        }
        let m = mu_difference_bound(0.05, 0.1, 0.5, 0.3).unwrap();
        assert!(m.diffs.iter().sum::<f64>().abs() < 1e-12);
        assert!((0.5..=2.0).contains(&m.ratio));
        assert!(mu_difference_bound(0.1, 0.1, 1.0, 0.0).is_err());
        assert!(mu_difference_sweep(2000, 3).unwrap().passed());
    }

    #[test]
    fn claim_examples() {
        assert!(claim_check([1.0, 0.0, -1.0], 1.0).unwrap());
        assert!(claim_check([2.0, 1.0, -2.0], 1.0).unwrap());
        assert!(claim_check([1.0, 2.0, -1.0], 1.0).is_err());
        assert!(claim_sweep(2000, 4).unwrap().passed());
    }

    #[test]
    fn k_stress_is_never_fail() {
        assert_ne!(k_stress(200, 2).unwrap().status, Status::Fail);
    }
}
