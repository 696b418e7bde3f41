//! Real root isolation with Sturm chains and rational bisection.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::unipoly::UniPoly;
use crate::error::{domain, Result};
use crate::scalar::Rational;

pub const DEFAULT_ROOT_TOL: f64 = 1e-13;

/// A real root bracketed by `lo ≤ root ≤ hi` with `hi − lo ≤ tol`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealRoot {
    pub value: f64,
    #[serde(skip)]
    pub lo: Rational,
    #[serde(skip)]
    pub hi: Rational,
    pub multiplicity: usize,
}

/// Yun's algorithm: `p = c · ∏ fᵢ^i` with squarefree, pairwise coprime `fᵢ`.
pub fn squarefree_decomposition(p: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.div_rem(&a0).expect("gcd divides").0;
    let c = dp.div_rem(&a0).expect("gcd divides").0;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_rem(&a).expect("gcd divides").0;
        let c = d.div_rem(&a).expect("gcd divides").0;
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

pub fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    while let [.., a, b] = chain.as_slice() {
        if b.is_zero() {
            chain.pop();
            break;
        }
        let r = a.rem(b).expect("nonzero divisor");
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    chain
}

pub fn sign_variations(chain: &[UniPoly], x: &Rational) -> usize {
    let mut last = 0;
    let mut count = 0;
    for q in chain {
        let s = q.sign_at(x);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct roots in `(lo, hi]`.
pub fn count_roots(chain: &[UniPoly], lo: &Rational, hi: &Rational) -> usize {
    sign_variations(chain, lo).saturating_sub(sign_variations(chain, hi))
}

/// Power of two bounding every root's absolute value (Cauchy).
pub fn root_bound(p: &UniPoly) -> Rational {
    let lc = p.leading().expect("nonzero polynomial").abs();
    let max = p.coeffs().iter().map(|c| c.abs() / &lc).fold(Rational::zero(), |a, b| if b > a { b } else { a });
    let bound = Rational::one() + max;
    let mut pow = Rational::one();
    while pow < bound {
        pow *= Rational::from_integer(BigInt::from(2));
    }
    pow
}

/// All real roots of `p` in `[lo, hi]`, descending, each with its multiplicity.
pub fn sturm_real_roots(p: &UniPoly, lo: &Rational, hi: &Rational, tol: f64) -> Result<Vec<RealRoot>> {
    if p.is_zero() {
        return domain("the zero polynomial has no isolated roots");
    }
    if lo > hi {
        return domain("empty search interval");
    }
    let tol = Rational::from_float(tol.max(1e-300)).expect("finite tolerance");
    let mut roots = Vec::new();
    for (factor, mult) in squarefree_decomposition(p) {
        let chain = sturm_chain(&factor);
        if factor.sign_at(lo) == 0 {
            roots.push(exact_root(lo.clone(), mult));
        }
        isolate(&factor, &chain, lo.clone(), hi.clone(), &tol, mult, &mut roots);
    }
    roots.sort_by(|a, b| b.value.total_cmp(&a.value));
    Ok(roots)
}

/// All real roots of `p`, using a Cauchy bound for the search interval.
pub fn real_roots(p: &UniPoly, tol: f64) -> Result<Vec<RealRoot>> {
    if p.is_zero() {
        return domain("the zero polynomial has no isolated roots");
    }
    let b = root_bound(p);
    sturm_real_roots(p, &-b.clone(), &b, tol)
}

/// Exact isolation from approximate locations: if `p` changes sign across
/// `deg p` disjoint brackets `[h − eps, h + eps]` around the hints, each bracket
/// holds exactly one simple root. Returns `None` when that fails (multiple or
/// clustered roots, poor hints), leaving the caller to fall back to Sturm.
pub fn certify_simple_roots(p: &UniPoly, hints: &[f64], eps: f64, tol: f64) -> Option<Vec<RealRoot>> {
    let deg = p.degree()?;
    let mut hs: Vec<f64> = hints.iter().copied().filter(|h| h.is_finite()).collect();
    hs.sort_by(|a, b| b.total_cmp(a));
    hs.dedup_by(|a, b| (*b - *a).abs() <= 2.0 * eps);
    let tol = Rational::from_float(tol.max(1e-300))?;
    let mut roots: Vec<RealRoot> = Vec::with_capacity(deg);
    let mut floor = f64::INFINITY;
    for h in hs {
        let (lo_f, hi_f) = (h - eps, (h + eps).min(floor));
        if lo_f >= hi_f {
            continue;
        }
        let lo = Rational::from_float(lo_f)?;
        let hi = Rational::from_float(hi_f)?;
        let (s_lo, s_hi) = (p.sign_at(&lo), p.sign_at(&hi));
        if s_lo * s_hi < 0 {
            roots.push(refine(p, lo, hi, &tol, 1));
            floor = lo_f;
        }
    }
    (roots.len() == deg).then_some(roots)
}

/// `certify_simple_roots` with a Sturm fallback.
pub fn real_roots_hinted(p: &UniPoly, hints: &[f64], eps: f64, tol: f64) -> Result<Vec<RealRoot>> {
    match certify_simple_roots(p, hints, eps, tol) {
        Some(r) => Ok(r),
        None => real_roots(p, tol),
    }
}

/// Roots listed with repetition, descending.
pub fn expand_multiplicities(roots: &[RealRoot]) -> Vec<f64> {
    roots.iter().flat_map(|r| std::iter::repeat(r.value).take(r.multiplicity)).collect()
}

fn exact_root(x: Rational, multiplicity: usize) -> RealRoot {
    RealRoot { value: x.to_f64().unwrap_or(f64::NAN), lo: x.clone(), hi: x, multiplicity }
}

fn isolate(
    p: &UniPoly,
    chain: &[UniPoly],
    lo: Rational,
    hi: Rational,
    tol: &Rational,
    mult: usize,
    out: &mut Vec<RealRoot>,
) {
    let mut stack = vec![(lo, hi)];
    let two = Rational::from_integer(BigInt::from(2));
    while let Some((lo, hi)) = stack.pop() {
        match count_roots(chain, &lo, &hi) {
            0 => {}
            1 => out.push(refine(p, lo, hi, tol, mult)),
            _ => {
                let mid = (&lo + &hi) / &two;
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
}

/// Shrinks `(lo, hi]`, known to hold exactly one simple root, to width `tol`.
fn refine(p: &UniPoly, mut lo: Rational, mut hi: Rational, tol: &Rational, mult: usize) -> RealRoot {
    let two = Rational::from_integer(BigInt::from(2));
    let s_hi = p.sign_at(&hi);
    if s_hi == 0 {
        return exact_root(hi, mult);
    }
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / &two;
        let s_mid = p.sign_at(&mid);
        if s_mid == 0 {
            return exact_root(mid, mult);
        }
        // p keeps the sign of p(hi) on (root, hi]
        if s_mid != s_hi {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // a rational root need not be dyadic, so try the simplest rational in the bracket
    let guess = simplest_between(&lo, &hi);
    if p.sign_at(&guess) == 0 {
        return exact_root(guess, mult);
    }
    let value = ((&lo + &hi) / &two).to_f64().unwrap_or(f64::NAN);
    RealRoot { value, lo, hi, multiplicity: mult }
}

/// The rational of least denominator in `[lo, hi]`, by continued fractions.
fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + Rational::one();
    if &next <= hi {
        return next;
    }
    let tail = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + tail.recip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn values(roots: &[RealRoot]) -> Vec<f64> {
        expand_multiplicities(roots)
    }

    #[test]
    fn cubic_with_integer_roots() {
        let p = UniPoly::from_ints(&[0, -1, 0, 1]);
        let r = sturm_real_roots(&p, &rat_int(-2), &rat_int(2), DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(values(&r), vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn repeated_roots_carry_multiplicity() {
        // (T − 1/2)² (T + 1)³
        let p = &UniPoly::linear_root(&rat(1, 2)).pow(2) * &UniPoly::linear_root(&rat(-1, 1)).pow(3);
        let r = real_roots(&p, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!((r[0].value, r[0].multiplicity), (0.5, 2));
        assert_eq!((r[1].value, r[1].multiplicity), (-1.0, 3));
    }

    #[test]
    fn boundary_cubic_square() {
        // (T³ − T + 2W)² at W = 1/(3√3) equals ((T − 1/√3)²(T + 2/√3))²; use the
        // rational surrogate T = √3·U: (U − 1)⁴ (U + 2)²
        let p = &UniPoly::linear_root(&rat(1, 1)).pow(4) * &UniPoly::linear_root(&rat(-2, 1)).pow(2);
        let r = real_roots(&p, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(r.iter().map(|x| (x.value, x.multiplicity)).collect::<Vec<_>>(), vec![(1.0, 4), (-2.0, 2)]);
    }

    #[test]
    fn quarter_cubic_brackets() {
        let p = UniPoly::new(vec![rat(1, 4), rat(-1, 1), rat(0, 1), rat(1, 1)]);
        let r = real_roots(&p, DEFAULT_ROOT_TOL).unwrap();
        let v = values(&r);
        assert!((0.83..=0.84).contains(&v[0]));
        assert!((0.26..=0.27).contains(&v[1]));
        assert!((-1.11..=-1.10).contains(&v[2]));
        for x in &r {
            assert!(&x.hi - &x.lo <= Rational::from_float(DEFAULT_ROOT_TOL).unwrap());
        }
    }

    #[test]
    fn hinted_isolation() {
        // (x − 1)(x − 2)(x + 1/2)
        let p = &(&UniPoly::linear_root(&rat_int(1)) * &UniPoly::linear_root(&rat_int(2))) * &UniPoly::linear_root(&rat(-1, 2));
        let r = certify_simple_roots(&p, &[2.0 + 1e-14, 0.9999999999999, -0.5, 7.0], 1e-11, 1e-13).unwrap();
        assert_eq!(values(&r), vec![2.0, 1.0, -0.5]);
        assert!(certify_simple_roots(&p, &[2.0, 1.0], 1e-11, 1e-13).is_none());
        let double = &p * &UniPoly::linear_root(&rat_int(1));
        assert!(certify_simple_roots(&double, &[2.0, 1.0, 1.0, -0.5], 1e-11, 1e-13).is_none());
        assert_eq!(values(&real_roots_hinted(&double, &[2.0, 1.0, -0.5], 1e-11, 1e-13).unwrap()), vec![2.0, 1.0, 1.0, -0.5]);
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(simplest_between(&rat(3, 10), &rat(4, 10)), rat(1, 3));
        assert_eq!(simplest_between(&rat(-7, 5), &rat(-6, 5)), rat(-4, 3));
        assert_eq!(simplest_between(&rat(-1, 5), &rat(1, 5)), rat_int(0));
    }

    #[test]
    fn interval_restriction_and_errors() {
        let p = UniPoly::from_ints(&[0, -1, 0, 1]);
        let r = sturm_real_roots(&p, &rat(1, 2), &rat_int(3), DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(values(&r), vec![1.0]);
        let r = sturm_real_roots(&p, &rat_int(-1), &rat_int(0), DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(values(&r), vec![0.0, -1.0]);
        assert!(sturm_real_roots(&UniPoly::zero(), &rat_int(0), &rat_int(1), 1e-3).is_err());
    }

    #[test]
    fn irrational_roots_refined() {
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        let r = real_roots(&p, DEFAULT_ROOT_TOL).unwrap();
        assert!((r[0].value - 2f64.sqrt()).abs() < 1e-13);
        assert!((r[1].value + 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn yun_decomposition() {
        let f1 = UniPoly::from_ints(&[1, 0, 1]);
        let f2 = UniPoly::from_ints(&[-3, 1]);
        let p = &f1 * &f2.pow(3);
        let d = squarefree_decomposition(&p);
        assert_eq!(d, vec![(f1, 1), (f2, 3)]);
    }
}
