//! Machine checks of the characteristic-polynomial factorization, the
//! interlacing of its roots, the position of the double eigenvalue `μ₂`,
//! the resultant closed forms and the separation inequality.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hessian::{block_decomposition, hessian, hessian_f64, invariants, l_value, m_value, site_from_invariants, Point12};
use crate::poly::{
    charpoly_exact, depressed_cubic_roots, expand_multiplicities, p1_delta, p2_delta, r_closed, real_roots_hinted, resultant,
    CubicRoots, UniPoly, DEFAULT_ROOT_TOL,
};
use crate::report::{Check, Status};
use crate::scalar::{format_rational, sign_of, Rational, Scalar};
use crate::spectra::{eigen_sym, eigh, orthonormal_complement, DEFAULT_TOL};

/// Bits kept when float invariants are snapped to dyadic rationals.
pub const SNAP_BITS: u32 = 30;
/// Chain and position slack for float comparisons.
pub const ORDER_SLACK: f64 = 1e-10;
/// Agreement between the predicted and computed spectra.
pub const SPECTRUM_TOL: f64 = 1e-9;
/// Half-width of the exact sign-change brackets placed around eigenvalue hints.
const HINT_RADIUS: f64 = 1e-11;

pub(crate) fn site_json<T: Scalar>(a: &Point12<T>) -> Value {
    Value::Array(a.coords().iter().map(Scalar::to_json).collect())
}

fn poly_json(p: &UniPoly) -> Value {
    json!(p.coeffs().iter().map(format_rational).collect::<Vec<_>>())
}

/// Exact check of `charpoly(H_δ(a)) = P₁,δ(T)² · P₂,δ(T)`.
pub fn verify_factorization(a: &Point12<Rational>, delta: &Rational) -> Result<Check> {
    let h = hessian(a, delta)?;
    let inv = invariants(a)?;
    let cp = charpoly_exact(&h.matrix);
    let p1 = p1_delta(&inv.w, delta);
    let product = &(&p1 * &p1) * &p2_delta(&inv.w, &inv.l, &inv.big_m, delta);
    let diff = &cp - &product;
    let residual: Vec<String> = (0..=12).map(|k| format_rational(&diff.coeff(k))).collect();
    Ok(Check::new("factorization", Status::from_bool(diff.is_zero()))
        .inputs(json!({"site": site_json(a), "delta": format_rational(delta)}))
        .expected(poly_json(&product))
        .observed(json!({"charpoly": poly_json(&cp), "coefficient_residuals": residual}))
        .residual(cp.max_coeff_diff(&product).to_f64()))
}

/// For a site in `C³` the Hessian splits into two 6×6 blocks; their
/// characteristic polynomials multiply to the full one.
pub fn verify_block_factorization(a: &Point12<Rational>) -> Result<Check> {
    let zero = Rational::zero();
    let blocks = block_decomposition(a)?;
    let full = charpoly_exact(&hessian(a, &zero)?.matrix);
    let product = &charpoly_exact(&blocks.a6) * &charpoly_exact(&blocks.m6);
    let ok = blocks.off_block.iter().all(Zero::is_zero) && product == full;
    Ok(Check::new("block-factorization", Status::from_bool(ok))
        .inputs(json!({"site": site_json(a)}))
        .expected(poly_json(&full))
        .observed(json!({"product": poly_json(&product), "off_block_zero": blocks.off_block.iter().all(Zero::is_zero)}))
        .residual(full.max_coeff_diff(&product).to_f64()))
}

/// The gcd of `charpoly` and its derivative contains `P₁,δ`, so every `μᵢ`
/// (in particular `μ₂`) is an exact double root.
pub fn verify_double_root(a: &Point12<Rational>, delta: &Rational) -> Result<Check> {
    let cp = charpoly_exact(&hessian(a, delta)?.matrix);
    let g = cp.gcd(&cp.derivative());
    let p1 = p1_delta(&invariants(a)?.w, delta);
    let divides = g.rem(&p1)?.is_zero();
    Ok(Check::new("double-root", Status::from_bool(divides))
        .inputs(json!({"site": site_json(a), "delta": format_rational(delta)}))
        .expected(json!({"p1_divides_gcd": true}))
        .observed(json!({"p1_divides_gcd": divides, "gcd_degree": g.degree()})))
}

/// Truncation toward zero onto the grid `2^-bits`.
pub fn snap_dyadic(x: f64, bits: u32) -> Rational {
    let scale = 2f64.powi(bits as i32);
    let num = (x * scale).trunc();
    Rational::from_f64(num) / Rational::from_f64(scale)
}

/// Invariants `(r0, m, n)` of a float site snapped to dyadic rationals with
/// `r0² + m² + n² ≤ 1` preserved.
pub fn snapped_invariants(a: &Point12<f64>) -> Result<[Rational; 3]> {
    let inv = invariants(a)?;
    let r0 = inv.r0.unwrap_or(a.r.q0);
    Ok([snap_dyadic(r0, SNAP_BITS), snap_dyadic(inv.m, SNAP_BITS), snap_dyadic(inv.n, SNAP_BITS)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    BPlus,
    BMinus,
    BZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionLabel {
    pub region: Region,
    pub w_sign: i32,
}

impl RegionLabel {
    /// 1-based positions that the double eigenvalue `μ₂` must occupy.
    pub fn mu2_positions(&self) -> Option<(usize, usize)> {
        match (self.region, self.w_sign) {
            (Region::BMinus, _) => Some((6, 7)),
            (Region::BPlus, s) if s > 0 => Some((5, 6)),
            (Region::BPlus, s) if s < 0 => Some((7, 8)),
            _ => None,
        }
    }
}

/// `B₊` and `B₋` are separated by `|W| = W₀(δ)`, i.e. by the sign of `R(W, δ)`,
/// which is decided exactly. The boundary `R = 0` is assigned to `B̄₊`.
pub fn classify_region(r0: &Rational, m: &Rational, n: &Rational, delta: &Rational) -> RegionLabel {
    let w = r0 * m * n;
    let rho = r0 * r0 + m * m + n * n;
    let region = if m.is_zero() || n.is_zero() || rho.is_one() {
        Region::BZero
    } else if r_closed(&w, delta).is_negative() {
        Region::BMinus
    } else {
        Region::BPlus
    };
    RegionLabel { region, w_sign: sign_of(&w) }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderingReport {
    pub site: Vec<f64>,
    pub delta: f64,
    /// Snapped `(r0, m, n)`; the spectrum is computed at the site they define.
    pub invariants: [String; 3],
    pub mu: [f64; 3],
    pub nu: Vec<f64>,
    pub expected: Vec<f64>,
    pub observed: Vec<f64>,
    pub max_deviation: f64,
    /// Smallest gap in `μ₁ ≥ ν₁ ≥ ν₂ ≥ ν₃ ≥ μ₂ ≥ ν₄ ≥ ν₅ ≥ ν₆ ≥ μ₃`.
    pub chain_slack: f64,
    pub mu2_positions: (usize, usize),
    pub label: RegionLabel,
    pub pass: bool,
}

impl OrderingReport {
    pub fn to_check(&self, id: &str) -> Check {
        Check::new(id, Status::from_bool(self.pass))
            .inputs(json!({"site": self.site, "delta": self.delta, "snapped_invariants": self.invariants}))
            .expected(json!({"spectrum": self.expected, "mu2_positions": self.label.mu2_positions()}))
            .observed(serde_json::to_value(self).unwrap_or(Value::Null))
            .residual(self.max_deviation)
    }
}

struct Roots {
    mu: CubicRoots,
    nu: Vec<f64>,
}

/// `ν` roots are isolated exactly; the hints only speed up the isolation.
fn exact_roots(r0: &Rational, m: &Rational, n: &Rational, delta: &Rational, hints: &[f64]) -> Result<Roots> {
    let w = r0 * m * n;
    let (m_sq, n_sq) = (m * m, n * n);
    let p2 = p2_delta(&w, &l_value(&m_sq, &n_sq), &m_value(&m_sq, &n_sq), delta);
    let nu = expand_multiplicities(&real_roots_hinted(&p2, hints, HINT_RADIUS, DEFAULT_ROOT_TOL)?);
    if nu.len() != 6 {
        return Err(Error::Precondition(format!("sextic has {} real roots", nu.len())));
    }
    let mu = depressed_cubic_roots(w.to_f64(), delta.to_f64())?;
    Ok(Roots { mu, nu })
}

fn ordering_report(a: &Point12<f64>, delta: &Rational) -> Result<OrderingReport> {
    let [r0, m, n] = snapped_invariants(a)?;
    let site = site_from_invariants(r0.to_f64(), m.to_f64(), n.to_f64())?;
    let d = delta.to_f64();
    let observed = eigen_sym(&hessian_f64(&site, d)?, DEFAULT_TOL)?.values;
    let roots = exact_roots(&r0, &m, &n, delta, &observed)?;
    let (mu, nu) = (roots.mu, roots.nu);

    // merged prediction, tagging the μ₂ copies
    let mut tagged: Vec<(f64, bool)> = nu.iter().map(|&v| (v, false)).collect();
    for v in [mu.mu1, mu.mu3] {
        tagged.extend([(v, false), (v, false)]);
    }
    tagged.extend([(mu.mu2, true), (mu.mu2, true)]);
    tagged.sort_by(|x, y| y.0.total_cmp(&x.0).then(y.1.cmp(&x.1)));
    let expected: Vec<f64> = tagged.iter().map(|t| t.0).collect();
    let pos: Vec<usize> = tagged.iter().enumerate().filter(|(_, t)| t.1).map(|(i, _)| i + 1).collect();
    let max_deviation = expected.iter().zip(&observed).map(|(e, o)| (e - o).abs()).fold(0.0, f64::max);

    let chain = [mu.mu1, nu[0], nu[1], nu[2], mu.mu2, nu[3], nu[4], nu[5], mu.mu3];
    let chain_slack = chain.windows(2).map(|p| p[0] - p[1]).fold(f64::INFINITY, f64::min);
    Ok(OrderingReport {
        site: a.coords(),
        delta: d,
        invariants: [format_rational(&r0), format_rational(&m), format_rational(&n)],
        mu: mu.as_array(),
        nu,
        expected,
        observed,
        max_deviation,
        chain_slack,
        mu2_positions: (pos[0], pos[1]),
        label: classify_region(&r0, &m, &n, delta),
        pass: false,
    })
}

/// At `δ = 0`: the `μ/ν` chain holds and the merged roots reproduce the spectrum,
/// so `λ₆ = λ₇ = μ₂`.
pub fn verify_interlacing(a: &Point12<f64>) -> Result<OrderingReport> {
    let mut r = ordering_report(a, &Rational::zero())?;
    // with ties (n = 0, say) the sorted position of μ₂ is not unique, so test values
    let at = |k: usize| (r.observed[k - 1] - r.mu[1]).abs() <= SPECTRUM_TOL;
    r.pass = r.chain_slack >= -ORDER_SLACK && r.max_deviation <= SPECTRUM_TOL && at(6) && at(7);
    Ok(r)
}

/// Classifies the site and checks that `μ₂` sits where the region dictates,
/// with `λ₁ = λ₂ = μ₁` and `λ₁₁ = λ₁₂ = μ₃` everywhere.
pub fn classify_and_verify_position(a: &Point12<f64>, delta: &Rational) -> Result<OrderingReport> {
    if delta.is_negative() || *delta >= Rational::one() {
        return Err(Error::Domain(format!("δ = {} is outside [0, 1)", format_rational(delta))));
    }
    let mut r = ordering_report(a, delta)?;
    let o = &r.observed;
    let close = |x: f64, y: f64| (x - y).abs() <= SPECTRUM_TOL;
    let outer = close(o[0], r.mu[0]) && close(o[1], r.mu[0]) && close(o[10], r.mu[2]) && close(o[11], r.mu[2]);
    let placed = match r.label.mu2_positions() {
        Some((i, j)) => close(o[i - 1], r.mu[1]) && close(o[j - 1], r.mu[1]),
        None => o.iter().filter(|&&v| close(v, r.mu[1])).count() >= 2,
    };
    r.pass = outer && placed && r.max_deviation <= SPECTRUM_TOL;
    Ok(r)
}

/// Shifted roots `μ′ = μ + W`, `ν′ = ν + W` at `(r0, m, n) = (1/2, 1/2, 1/2)`
/// against the intervals `[lo, hi]` of width `10⁻²`. The fifth and sixth `ν′`
/// intervals are the negative ones; the printed signs are typos.
pub const HALF_SITE_INTERVALS: [(f64, f64); 9] = [
    (0.83, 0.84),
    (0.26, 0.27),
    (-1.11, -1.1),
    (0.7, 0.71),
    (0.54, 0.55),
    (0.42, 0.43),
    (-0.39, -0.38),
    (-0.71, -0.7),
    (-0.96, -0.95),
];

pub fn half_site_intervals_check() -> Result<Check> {
    let a = site_from_invariants(0.5, 0.5, 0.5)?;
    let r = verify_interlacing(&a)?;
    let w = 0.125;
    let shifted: Vec<f64> = r.mu.iter().chain(&r.nu).map(|v| v + w).collect();
    let inside: Vec<bool> = shifted.iter().zip(HALF_SITE_INTERVALS).map(|(v, (lo, hi))| (lo..=hi).contains(v)).collect();
    let ok = r.pass && inside.iter().all(|&b| b);
    Ok(Check::new("half-site-intervals", Status::from_bool(ok))
        .inputs(json!({"r0": "1/2", "m": "1/2", "n": "1/2"}))
        .expected(json!(HALF_SITE_INTERVALS))
        .observed(json!({"mu_shifted": &shifted[..3], "nu_shifted": &shifted[3..], "inside": inside, "chain_slack": r.chain_slack}))
        .residual(r.chain_slack.min(0.0).abs()))
}

/// `λ₆ = λ₇ = (2/√3) cos((arccos(3√3 P) + π)/3) − P` at `δ = 0`.
pub fn lambda67_closed_form(w: f64) -> f64 {
    let alpha = (3.0 * 3f64.sqrt() * w).clamp(-1.0, 1.0).acos();
    2.0 / 3f64.sqrt() * ((alpha + std::f64::consts::PI) / 3.0).cos() - w
}

pub fn verify_lambda67(a: &Point12<f64>, tol: f64) -> Result<Check> {
    let a = a.normalized()?;
    let w = crate::hessian::cubic_form(&a);
    let spec = eigen_sym(&hessian_f64(&a, 0.0)?, DEFAULT_TOL)?;
    let predicted = lambda67_closed_form(w);
    let dev = (spec.lambda(6) - predicted).abs().max((spec.lambda(7) - predicted).abs());
    Ok(Check::new("lambda67", Status::from_bool(dev <= tol))
        .inputs(json!({"site": a.coords()}))
        .expected(json!(predicted))
        .observed(json!([spec.lambda(6), spec.lambda(7)]))
        .residual(dev))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResultantForm {
    /// `16(W² − M)³ (27W² + 4)(1 − 27W²)` extended to `16(M − W²)³ R(W, δ)`.
    Bracket,
    /// `16 m² n² (1 − ρ)³ R(W, δ)`.
    MixedSquares,
    /// `16 m⁴ n⁴ (1 − ρ)³ R(W, δ)`.
    QuarticSquares,
}

pub const RESULTANT_FORMS: [ResultantForm; 3] =
    [ResultantForm::Bracket, ResultantForm::MixedSquares, ResultantForm::QuarticSquares];

pub fn resultant_closed_form(form: ResultantForm, r0: &Rational, m: &Rational, n: &Rational, delta: &Rational) -> Rational {
    let w = r0 * m * n;
    let (m_sq, n_sq) = (m * m, n * n);
    let r = r_closed(&w, delta);
    let sixteen = Rational::from_int(16);
    let cube = |x: Rational| &x * &x * &x;
    let gap = Rational::one() - r0 * r0 - &m_sq - &n_sq;
    match form {
        ResultantForm::Bracket => sixteen * cube(m_value(&m_sq, &n_sq) - &w * &w) * r,
        ResultantForm::MixedSquares => sixteen * &m_sq * &n_sq * cube(gap) * r,
        ResultantForm::QuarticSquares => sixteen * &m_sq * &m_sq * &n_sq * &n_sq * cube(gap) * r,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultantReport {
    pub exact: String,
    pub forms: Vec<(ResultantForm, String)>,
    pub matching: Vec<ResultantForm>,
    pub sign: i32,
    pub expected_sign: i32,
    pub region: RegionLabel,
}

/// Exact `Res(P₁,δ, P₂,δ)` (Sylvester, `P₁` rows first) against the closed forms.
/// The expected sign is 0 on the sphere and coordinate disks, otherwise the sign
/// of `R(W, δ)`: negative on `B₋`, positive on `B₊`.
pub fn verify_resultant_identity(r0: &Rational, m: &Rational, n: &Rational, delta: &Rational) -> Result<(Check, ResultantReport)> {
    if m.is_negative() || n.is_negative() {
        return Err(Error::Domain("m and n must be non-negative".into()));
    }
    let w = r0 * m * n;
    let (m_sq, n_sq) = (m * m, n * n);
    let exact = resultant(&p1_delta(&w, delta), &p2_delta(&w, &l_value(&m_sq, &n_sq), &m_value(&m_sq, &n_sq), delta))?;
    let forms: Vec<(ResultantForm, Rational)> =
        RESULTANT_FORMS.iter().map(|&f| (f, resultant_closed_form(f, r0, m, n, delta))).collect();
    let matching: Vec<ResultantForm> = forms.iter().filter(|(_, v)| *v == exact).map(|(f, _)| *f).collect();
    let region = classify_region(r0, m, n, delta);
    let expected_sign = match region.region {
        Region::BZero => 0,
        _ => sign_of(&r_closed(&w, delta)),
    };
    let sign = sign_of(&exact);
    let report = ResultantReport {
        exact: format_rational(&exact),
        forms: forms.iter().map(|(f, v)| (*f, format_rational(v))).collect(),
        matching: matching.clone(),
        sign,
        expected_sign,
        region,
    };
    let ok = matching.contains(&ResultantForm::Bracket) && sign == expected_sign;
    let check = Check::new("resultant", Status::from_bool(ok))
        .inputs(json!({"r0": format_rational(r0), "m": format_rational(m), "n": format_rational(n), "delta": format_rational(delta)}))
        .expected(json!({"form": ResultantForm::Bracket, "sign": expected_sign}))
        .observed(serde_json::to_value(&report)?)
        .residual((&exact - &forms[0].1).abs().to_f64());
    Ok((check, report))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationWitness {
    pub direction: Vec<f64>,
    pub value: f64,
    pub bound: f64,
}

/// The largest `|eᵀ(H_δ(a) − H_δ(b))e|` over unit `e ⊥ {a, b}` is the spectral
/// radius of the compression onto `span{a, b}^⊥`; the maximizer is the witness.
pub fn separation_witness(a: &Point12<f64>, b: &Point12<f64>, delta: f64) -> Result<SeparationWitness> {
    let (a, b) = (a.normalized()?, b.normalized()?);
    let dist = a.distance(&b);
    if dist == 0.0 {
        return Err(Error::Precondition("a = b".into()));
    }
    let diff = hessian_f64(&a, delta)?.sub(&hessian_f64(&b, delta)?)?;
    let frame = orthonormal_complement(&[a.coords(), b.coords()], 12);
    let eig = eigh(&diff.congruence(&frame), DEFAULT_TOL)?;
    let last = eig.spectrum.len() - 1;
    let k = if eig.spectrum.values[0].abs() >= eig.spectrum.values[last].abs() { 0 } else { last };
    let direction = frame.mul_vec(&eig.vectors.column(k));
    let value = diff.quadratic_form(&direction).abs();
    Ok(SeparationWitness { direction, value, bound: dist / 3f64.sqrt() })
}

/// PASS when a witness reaches `|a − b|/√3`; otherwise INCONCLUSIVE, since the
/// claim only asserts existence of suitable directions.
pub fn separation_check(a: &Point12<f64>, b: &Point12<f64>, delta: f64) -> Result<Check> {
    let wit = separation_witness(a, b, delta)?;
    let status = if wit.value >= wit.bound - 1e-9 { Status::Pass } else { Status::Inconclusive };
    Ok(Check::new("separation", status)
        .inputs(json!({"a": a.coords(), "b": b.coords(), "delta": delta}))
        .expected(json!({"at_least": wit.bound}))
        .observed(serde_json::to_value(&wit)?)
        .residual(wit.value - wit.bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hessian::{cubic_form, random_rational_sphere_point};
    use crate::quaternion::Quaternion;
    use crate::rng::sample_rng;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn factorization_exact_on_random_sites() {
        let mut rng = sample_rng(80, 0, 0);
        for d in [rat_int(0), rat(1, 4), rat(1, 2), rat(3, 4)] {
            for _ in 0..4 {
                let a = random_rational_sphere_point(&mut rng, 5, 4);
                let c = verify_factorization(&a, &d).unwrap();
                assert!(c.passed(), "{:?}", c.observed);
                assert_eq!(c.residual, Some(0.0));
            }
        }
    }

    #[test]
    fn factorization_detects_wrong_delta() {
        let mut rng = sample_rng(81, 0, 0);
        let a = random_rational_sphere_point(&mut rng, 5, 4);
        let h = hessian(&a, &rat(1, 2)).unwrap();
        let inv = invariants(&a).unwrap();
        let p1 = p1_delta(&inv.w, &rat(1, 4));
        let wrong = &(&p1 * &p1) * &p2_delta(&inv.w, &inv.l, &inv.big_m, &rat(1, 4));
        assert_ne!(charpoly_exact(&h.matrix), wrong);
    }

    #[test]
    fn complex_site_blocks() {
        let b = Point12::new(
            Quaternion::new(rat(1, 3), rat(2, 3), rat_int(0), rat_int(0)),
            Quaternion::new(rat(2, 3), rat_int(0), rat_int(0), rat_int(0)),
            Quaternion::new(rat_int(0), rat_int(0), rat_int(0), rat_int(0)),
        );
        assert!(verify_block_factorization(&b).unwrap().passed());
        let c = Point12::new(
            Quaternion::new(rat(1, 2), rat(1, 2), rat_int(0), rat_int(0)),
            Quaternion::new(rat(1, 2), rat_int(0), rat_int(0), rat_int(0)),
            Quaternion::new(rat_int(0), rat(-1, 2), rat_int(0), rat_int(0)),
        );
        assert!(verify_block_factorization(&c).unwrap().passed());
    }

    #[test]
    fn double_root_on_random_sites() {
        let mut rng = sample_rng(82, 0, 0);
        for d in [rat_int(0), rat(1, 2)] {
            let a = random_rational_sphere_point(&mut rng, 5, 4);
            assert!(verify_double_root(&a, &d).unwrap().passed());
        }
    }

    #[test]
    fn snapping_truncates_toward_zero() {
        assert_eq!(snap_dyadic(0.75, 4), rat(3, 4));
        assert_eq!(snap_dyadic(-0.3, 2), rat(-1, 4));
        assert!(snap_dyadic(0.3, 2) <= rat(3, 10));
    }

    #[test]
    fn half_half_half_printed_intervals() {
        let c = half_site_intervals_check().unwrap();
        assert!(c.passed(), "{:?}", c.observed);
    }

    #[test]
    fn n_zero_roots() {
        let m = 0.625;
        let a = site_from_invariants(0.25, m, 0.0).unwrap();
        let r = verify_interlacing(&a).unwrap();
        assert!(r.pass);
        let root = (1.0 - 3.0 * m * m + 3.0 * m.powi(4)).sqrt();
        assert!((r.nu[1] - root).abs() < 1e-12);
        assert!(r.nu[2].abs() < 1e-12 && r.nu[3].abs() < 1e-12 && r.mu[1].abs() < 1e-12);
    }

    #[test]
    fn sphere_sites_have_triple_top() {
        let a = site_from_invariants(0.6, 0.0, 0.8).unwrap();
        assert!(verify_interlacing(&a).unwrap().pass);
        // ρ = 1 with mn ≠ 0
        let a = site_from_invariants(0.5, 0.5, 0.5f64.sqrt()).unwrap();
        let r = verify_interlacing(&a).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn interlacing_random_float_sites() {
        let mut rng = sample_rng(83, 0, 0);
        for _ in 0..200 {
            let a = Point12::random_unit(&mut rng);
            let r = verify_interlacing(&a).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn region_probes() {
        let d = rat(1, 2);
        let eps = 0.05;
        let minus = classify_and_verify_position(&site_from_invariants(eps, eps, eps).unwrap(), &d).unwrap();
        assert_eq!(minus.label.region, Region::BMinus);
        assert_eq!(minus.mu2_positions, (6, 7));
        assert!(minus.pass);
        let s = 1.0 / 3f64.sqrt();
        let plus = classify_and_verify_position(&site_from_invariants(s, s, s - 0.01).unwrap(), &d).unwrap();
        assert_eq!(plus.label, RegionLabel { region: Region::BPlus, w_sign: 1 });
        assert_eq!(plus.mu2_positions, (5, 6));
        assert!(plus.pass, "{plus:?}");
        let refl = classify_and_verify_position(&site_from_invariants(-s, s, s - 0.01).unwrap(), &d).unwrap();
        assert_eq!(refl.label, RegionLabel { region: Region::BPlus, w_sign: -1 });
        assert_eq!(refl.mu2_positions, (7, 8));
        assert!(refl.pass);
    }

    #[test]
    fn lambda67_examples() {
        assert!(lambda67_closed_form(0.0).abs() < 1e-15);
        let q = 1.0 / 27f64.sqrt();
        assert!((lambda67_closed_form(q) - 2.0 * q).abs() < 1e-12);
        let mut rng = sample_rng(84, 0, 0);
        for _ in 0..100 {
            let a = Point12::random_unit(&mut rng);
            assert!(verify_lambda67(&a, 1e-9).unwrap().passed());
        }
        let a = site_from_invariants(0.0, 0.6, 0.8).unwrap();
        assert_eq!(cubic_form(&a), 0.0);
        assert!(verify_lambda67(&a, 1e-12).unwrap().passed());
    }

    #[test]
    fn resultant_at_half_half_half() {
        let h = rat(1, 2);
        let (check, rep) = verify_resultant_identity(&h, &h, &h, &rat_int(0)).unwrap();
        assert!(check.passed());
        assert_eq!(rep.exact, "-10471/67108864");
        assert_eq!(rep.matching, vec![ResultantForm::Bracket]);
        assert_eq!(resultant_closed_form(ResultantForm::MixedSquares, &h, &h, &h, &rat_int(0)), rat(-10471, 262144));
        assert_eq!(rep.sign, -1);
    }

    #[test]
    fn resultant_vanishes_on_sphere() {
        let (check, rep) = verify_resultant_identity(&rat(3, 5), &rat(0, 1), &rat(4, 5), &rat(1, 4)).unwrap();
        assert!(check.passed());
        assert_eq!(rep.sign, 0);
        let (check, rep) = verify_resultant_identity(&rat(2, 3), &rat(2, 3), &rat(1, 3), &rat(1, 2)).unwrap();
        assert!(check.passed());
        assert_eq!((rep.sign, rep.matching.len()), (0, 3));
    }

    #[test]
    fn resultant_positive_on_b_plus() {
        let (r0, m, n, d) = (rat(57, 100), rat(57, 100), rat(57, 100), rat(1, 2));
        let (check, rep) = verify_resultant_identity(&r0, &m, &n, &d).unwrap();
        assert_eq!(rep.region.region, Region::BPlus);
        assert_eq!(rep.sign, 1);
        assert!(check.passed());
    }

    #[test]
    fn separation_examples() {
        let mut rng = sample_rng(85, 0, 0);
        let a = Point12::random_unit(&mut rng);
        let w = separation_witness(&a, &a.neg(), 0.0).unwrap();
        assert!((w.bound - 2.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!(w.direction.iter().zip(a.coords()).map(|(x, y)| x * y).sum::<f64>().abs() < 1e-12);
        assert!(separation_witness(&a, &a, 0.0).is_err());
        let mut pass = 0;
        for _ in 0..100 {
            let a = Point12::random_unit(&mut rng);
            let b = Point12::random_unit(&mut rng);
            let c = separation_check(&a, &b, 0.5).unwrap();
            assert_ne!(c.status, Status::Fail);
            pass += c.passed() as usize;
        }
        assert!(pass >= 99, "{pass}");
    }
}
