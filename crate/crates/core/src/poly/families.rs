//! The explicit polynomial families attached to a unit site: the cubic and
//! sextic factors of the Hessian's characteristic polynomial, their shifted
//! forms, the quartic `R(W, δ)` and its positive root `W₀(δ)`.

use std::f64::consts::PI;

use serde::Serialize;

use super::unipoly::UniPoly;
use crate::error::{domain, Result};
use crate::scalar::{Rational, Scalar};

fn c<T: Scalar>(v: i64) -> T {
    T::from_int(v)
}

/// Coefficients (ascending) of
/// `T³ + 3W(1+δ)T² + (3W²(1+δ)² − 1)T + W(1−δ) + W³(1+δ)³`.
pub fn p1_delta_coeffs<T: Scalar>(w: &T, d: &T) -> [T; 4] {
    let k = T::one() + d.clone();
    let wk = w.clone() * k;
    [
        w.clone() * (T::one() - d.clone()) + wk.clone() * wk.clone() * wk.clone(),
        c::<T>(3) * wk.clone() * wk.clone() - T::one(),
        c::<T>(3) * wk,
        T::one(),
    ]
}

/// Coefficients (ascending, `a₀ … a₅, 1`) of the sextic factor.
pub fn p2_delta_coeffs<T: Scalar>(w: &T, l: &T, m: &T, d: &T) -> [T; 7] {
    let one = T::one();
    let (w, l, m, d) = (w.clone(), l.clone(), m.clone(), d.clone());
    let dp = d.clone() + one.clone();
    let w2 = w.clone() * w.clone();
    let w4 = w2.clone() * w2.clone();
    let w6 = w4.clone() * w2.clone();
    let d2 = d.clone() * d.clone();
    let d3 = d2.clone() * d.clone();
    let dp3 = dp.clone() * dp.clone() * dp.clone();
    let dp5 = dp3.clone() * dp.clone() * dp.clone();

    let a5 = w.clone() * dp.clone() * (c::<T>(9) - d.clone());
    let a4 = w2.clone() * dp.clone() * (c::<T>(21) + c::<T>(28) * d.clone() - c::<T>(5) * d2.clone())
        + l.clone() * dp.clone() * (c::<T>(3) - d.clone())
        - c::<T>(2);
    let a3 = -(c::<T>(2) * w.clone() * dp.clone())
        * (w2.clone() * dp.clone() * (c::<T>(5) * d2.clone() - c::<T>(26) * d.clone() - c::<T>(7))
            - l.clone() * (c::<T>(2) * d.clone() + one.clone()) * (c::<T>(3) - d.clone())
            + c::<T>(4));
    let a2 = -(w4.clone() * (c::<T>(10) * d2.clone() - c::<T>(53) * d.clone() + c::<T>(9)) * dp3.clone())
        - c::<T>(2)
            * w2.clone()
            * dp.clone()
            * (c::<T>(3) * l.clone() * d3.clone() - c::<T>(6) * l.clone() * d2.clone() - c::<T>(9) * l.clone() * d.clone()
                + c::<T>(7) * d.clone()
                + c::<T>(3))
        + l.clone() * d2.clone()
        - c::<T>(3) * m.clone() * d2.clone()
        - c::<T>(2) * l.clone() * d.clone()
        + c::<T>(6) * m.clone() * d.clone()
        - c::<T>(3) * l.clone()
        + c::<T>(9) * m.clone()
        + one.clone();
    let a1 = -dp.clone()
        * (w4.clone() * (c::<T>(5) * d.clone() - c::<T>(3)) * (d.clone() - c::<T>(5)) * dp3.clone()
            - c::<T>(2)
                * dp.clone()
                * (-(c::<T>(2) * l.clone() * d3.clone()) + c::<T>(5) * l.clone() * d2.clone() + c::<T>(4) * l.clone() * d.clone()
                    - c::<T>(6) * d.clone()
                    - c::<T>(3) * l.clone()
                    + c::<T>(2))
                * w2.clone()
            + c::<T>(2) * (c::<T>(3) - d.clone()) * (-(c::<T>(3) * d.clone() * m.clone()) + l.clone() * d.clone() - l.clone())
            + one.clone()
            - d.clone())
        * w.clone();
    let a0 = (one.clone() - d.clone())
        * (w6 * (d.clone() - c::<T>(5)) * dp5
            + w4 * dp3 * (l.clone() * d2.clone() - c::<T>(2) * l.clone() * d.clone() - c::<T>(3) * l.clone() + c::<T>(4))
            - w2 * dp
                * (l.clone() * d2.clone() - c::<T>(3) * m.clone() * d2 + d.clone() + c::<T>(6) * m.clone() * d.clone()
                    - c::<T>(4) * l.clone() * d.clone()
                    - one.clone()
                    + c::<T>(3) * l
                    + c::<T>(9) * m.clone())
            - m * (one.clone() - d));
    [a0, a1, a2, a3, a4, a5, one]
}

pub fn p1_delta(w: &Rational, d: &Rational) -> UniPoly {
    UniPoly::new(p1_delta_coeffs(w, d).to_vec())
}

pub fn p2_delta(w: &Rational, l: &Rational, m: &Rational, d: &Rational) -> UniPoly {
    UniPoly::new(p2_delta_coeffs(w, l, m, d).to_vec())
}

/// `T³ + 3WT² + 3W²T − T + W + W³`
pub fn p1_base(w: &Rational) -> UniPoly {
    let w2 = w * w;
    UniPoly::new(vec![w + &w2 * w, Rational::from_int(3) * &w2 - Rational::from_int(1), Rational::from_int(3) * w, Rational::from_int(1)])
}

/// The sextic of the `δ = 0` factorization, as displayed there.
pub fn p2_base(w: &Rational, l: &Rational, m: &Rational) -> UniPoly {
    let i = |v: i64| Rational::from_int(v);
    let w2 = w * w;
    let w4 = &w2 * &w2;
    let w6 = &w4 * &w2;
    UniPoly::new(vec![
        -i(5) * &w6 - i(3) * l * &w4 + i(4) * &w4 - i(3) * (i(3) * m + l) * &w2 + &w2 - m,
        -(i(15) * &w4 + i(6) * &w2 * l - i(4) * &w2 - i(6) * l + i(1)) * w,
        i(1) - i(6) * &w2 - i(9) * &w4 - i(3) * l + i(9) * m,
        i(2) * w * (i(7) * &w2 + i(3) * l - i(4)),
        i(21) * &w2 + i(3) * l - i(2),
        i(9) * w,
        i(1),
    ])
}

/// `Q₁(X) = X³ − X + 2W`
pub fn q1(w: &Rational) -> UniPoly {
    UniPoly::new(vec![Rational::from_int(2) * w, Rational::from_int(-1), Rational::from_int(0), Rational::from_int(1)])
}

/// The displayed shifted sextic `Q₂(X)`, expected to equal `P₂(X − W)`.
pub fn q2_display(w: &Rational, l: &Rational, m: &Rational) -> UniPoly {
    let i = |v: i64| Rational::from_int(v);
    let w2 = w * w;
    UniPoly::new(vec![
        i(3) * &w2 - i(12) * l * &w2 - m,
        -i(3) * (i(6) * m - i(4) * l + i(1)) * w,
        i(6) * &w2 - i(3) * l + i(9) * m + i(1),
        -i(6) * w * l,
        -(i(9) * &w2 - i(3) * l + i(2)),
        i(3) * w,
        i(1),
    ])
}

/// On the sphere `r0² + m² + n² = 1`:
/// `Q₂(X) = (X³ − X + 2W)(X³ + 3WX² − 9W²X − X + 3LX + W − 6WL)`.
pub fn q2_sphere_split(w: &Rational, l: &Rational) -> UniPoly {
    let i = |v: i64| Rational::from_int(v);
    let second = UniPoly::new(vec![w - i(6) * w * l, -i(9) * w * w - i(1) + i(3) * l, i(3) * w, i(1)]);
    &q1(w) * &second
}

/// `R(W, δ) = 27(δ+1)³(3−δ)³W⁴ + 9(δ−1)²(δ−3)²(δ+1)²W² − (δ−1)²(δ²−2δ−2)²`
pub fn r_closed<T: Scalar>(w: &T, d: &T) -> T {
    let (a, b, cc) = r_quadratic_coeffs(d);
    let u = w.clone() * w.clone();
    a * u.clone() * u.clone() + b * u - cc
}

/// `R = A·u² + B·u − C` with `u = W²`.
fn r_quadratic_coeffs<T: Scalar>(d: &T) -> (T, T, T) {
    let dp = d.clone() + T::one();
    let dm = d.clone() - T::one();
    let three_m = c::<T>(3) - d.clone();
    let q = d.clone() * d.clone() - c::<T>(2) * d.clone() - c::<T>(2);
    let cube = |x: T| x.clone() * x.clone() * x;
    let sq = |x: T| x.clone() * x;
    (
        c::<T>(27) * cube(dp.clone()) * cube(three_m.clone()),
        c::<T>(9) * sq(dm.clone()) * sq(three_m) * sq(dp),
        sq(dm) * sq(q),
    )
}

/// The unique positive root of `R(·, δ)`, from the quadratic formula in `W²`
/// and polished by Newton steps until the update is below `tol`.
pub fn w0_root(d: f64, tol: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&d) {
        return domain(format!("δ = {d} is outside [0, 1)"));
    }
    let (a, b, cc) = r_quadratic_coeffs(&d);
    // stable form of (−B + √(B² + 4AC)) / 2A
    let u = 2.0 * cc / (b + (b * b + 4.0 * a * cc).sqrt());
    let mut w = u.sqrt();
    for _ in 0..8 {
        let f = r_closed(&w, &d);
        let df = 4.0 * a * w.powi(3) + 2.0 * b * w;
        if df == 0.0 {
            break;
        }
        let step = f / df;
        w -= step;
        if step.abs() <= tol {
            break;
        }
    }
    Ok(w)
}

/// `μ₁ ≥ μ₂ ≥ μ₃`, the roots of `X³ − X + 2W` shifted by `−(1+δ)W`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CubicRoots {
    pub mu1: f64,
    pub mu2: f64,
    pub mu3: f64,
}

impl CubicRoots {
    pub fn as_array(&self) -> [f64; 3] {
        [self.mu1, self.mu2, self.mu3]
    }

    pub fn sum(&self) -> f64 {
        self.mu1 + self.mu2 + self.mu3
    }
}

pub const W_MAX: f64 = 0.19245008972987526; // 1/(3√3)

/// Trigonometric solution with `X = (2/√3) cos β`, `cos 3β = 3√3 W`.
pub fn depressed_cubic_roots(w: f64, d: f64) -> Result<CubicRoots> {
    let arg = 3.0 * 3f64.sqrt() * w;
    if !(arg.abs() <= 1.0 + 1e-12) {
        return domain(format!("|W| = {} exceeds 1/(3√3): complex roots", w.abs()));
    }
    let alpha = arg.clamp(-1.0, 1.0).acos();
    let k = 2.0 / 3f64.sqrt();
    let shift = w * (1.0 + d);
    let mut r = [
        k * ((alpha - PI) / 3.0).cos() - shift,
        k * ((alpha + PI) / 3.0).cos() - shift,
        k * ((alpha + 3.0 * PI) / 3.0).cos() - shift,
    ];
    r.sort_by(|a, b| b.total_cmp(a));
    Ok(CubicRoots { mu1: r[0], mu2: r[1], mu3: r[2] })
}

/// The two printed assignments of trigonometric branches to `μ₁, μ₂, μ₃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TrigLabels {
    /// `μ₁ ↔ (α − π)/3`, `μ₂ ↔ (α + π)/3`, `μ₃ ↔ (α + 3π)/3`.
    MinusFirst,
    /// `μ₁ ↔ (α + π)/3`, `μ₂ ↔ (α − π)/3`, `μ₃ ↔ −cos(α/3)`.
    PlusFirst,
}

/// Roots in the order a printed labelling assigns them (not sorted).
pub fn labelled_roots(w: f64, d: f64, labels: TrigLabels) -> [f64; 3] {
    let alpha = (3.0 * 3f64.sqrt() * w).clamp(-1.0, 1.0).acos();
    let k = 2.0 / 3f64.sqrt();
    let shift = w * (1.0 + d);
    let minus = k * ((alpha - PI) / 3.0).cos() - shift;
    let plus = k * ((alpha + PI) / 3.0).cos() - shift;
    let third = -k * (alpha / 3.0).cos() - shift;
    match labels {
        TrigLabels::MinusFirst => [minus, plus, third],
        TrigLabels::PlusFirst => [plus, minus, third],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::sturm::{expand_multiplicities, real_roots, DEFAULT_ROOT_TOL};
    use crate::rng::sample_rng;
    use crate::scalar::{rat, rat_int};
    use rand::Rng;

    #[test]
    fn p1_delta_at_zero_w() {
        assert_eq!(p1_delta(&rat_int(0), &rat(1, 3)), UniPoly::from_ints(&[0, -1, 0, 1]));
    }

    #[test]
    fn p1_shift_gives_q1() {
        let w = rat(2, 17);
        assert_eq!(p1_delta(&w, &rat_int(0)).shift(&-w.clone()), q1(&w));
        assert_eq!(p1_delta(&w, &rat_int(0)), p1_base(&w));
    }

    #[test]
    fn p1_delta_is_shifted_q1() {
        let (w, d) = (rat(-3, 29), rat(2, 5));
        let shift = &w * (rat_int(1) + &d);
        assert_eq!(q1(&w).shift(&shift), p1_delta(&w, &d));
    }

    #[test]
    fn p2_delta_reduces_to_base() {
        let mut rng = sample_rng(70, 0, 0);
        for _ in 0..100 {
            let w = rat(rng.random_range(-50..=50), rng.random_range(1..=300));
            let l = rat(rng.random_range(0..=50), rng.random_range(1..=150));
            let m = rat(rng.random_range(0..=50), rng.random_range(1..=1350));
            let p = p2_delta(&w, &l, &m, &rat_int(0));
            assert_eq!(p, p2_base(&w, &l, &m));
            assert_eq!(p.coeff(5), rat_int(9) * &w);
        }
    }

    #[test]
    fn degenerate_site_sextic() {
        let z = rat_int(0);
        assert_eq!(p2_delta(&z, &z, &z, &z), UniPoly::from_ints(&[0, 0, 1, 0, -2, 0, 1]));
    }

    #[test]
    fn q2_display_is_shifted_p2() {
        let mut rng = sample_rng(71, 0, 0);
        for _ in 0..50 {
            let w = rat(rng.random_range(-50..=50), rng.random_range(1..=300));
            let l = rat(rng.random_range(0..=50), rng.random_range(1..=150));
            let m = rat(rng.random_range(0..=50), rng.random_range(1..=1350));
            assert_eq!(p2_base(&w, &l, &m).shift(&-w.clone()), q2_display(&w, &l, &m));
        }
    }

    #[test]
    fn r_closed_examples() {
        let w = rat(1, 7);
        let w2 = &w * &w;
        let expected = rat_int(729) * &w2 * &w2 + rat_int(81) * &w2 - rat_int(4);
        assert_eq!(r_closed(&w, &rat_int(0)), expected.clone());
        assert_eq!(expected, (rat_int(27) * &w2 + rat_int(4)) * (rat_int(27) * &w2 - rat_int(1)));
        assert_eq!(r_closed(&rat_int(0), &rat(1, 2)), rat(-121, 64));
        assert!(r_closed(&W_MAX, &0.0).abs() < 1e-13);
    }

    #[test]
    fn w0_properties() {
        assert!((w0_root(0.0, 1e-15).unwrap() - 1.0 / 27f64.sqrt()).abs() < 1e-12);
        for k in 1..100 {
            let d = k as f64 / 100.0;
            let w0 = w0_root(d, 1e-15).unwrap();
            assert!(w0 > 0.0 && w0 <= W_MAX + 1e-15);
            if k % 10 == 0 {
                assert!(r_closed(&(w0 - 1e-6), &d) < 0.0 && r_closed(&(w0 + 1e-6), &d) > 0.0);
            }
        }
        assert!(w0_root(1.0, 1e-15).is_err());
    }

    #[test]
    fn trig_roots_examples() {
        let r = depressed_cubic_roots(0.0, 0.0).unwrap();
        assert!((r.mu1 - 1.0).abs() < 1e-15 && r.mu2.abs() < 1e-15 && (r.mu3 + 1.0).abs() < 1e-15);
        let q = W_MAX;
        let r = depressed_cubic_roots(q, 0.0).unwrap();
        assert!((r.mu1 - 2.0 * q).abs() < 1e-7 && (r.mu2 - 2.0 * q).abs() < 1e-7);
        assert!((r.mu3 + 7.0 * q).abs() < 1e-12);
        assert!(depressed_cubic_roots(0.2, 0.0).is_err());
    }

    #[test]
    fn trig_roots_match_sturm() {
        let mut rng = sample_rng(72, 0, 0);
        for _ in 0..100 {
            let w = rat(rng.random_range(-190..=190), 1000);
            let d = rat(rng.random_range(0..=99), 100);
            let exact = expand_multiplicities(&real_roots(&p1_delta(&w, &d), DEFAULT_ROOT_TOL).unwrap());
            let trig = depressed_cubic_roots(w.to_f64(), d.to_f64()).unwrap();
            assert_eq!(exact.len(), 3);
            for (a, b) in exact.iter().zip(trig.as_array()) {
                assert!((a - b).abs() < 1e-12);
            }
            assert!((trig.sum() + 3.0 * (1.0 + d.to_f64()) * w.to_f64()).abs() < 1e-12);
        }
    }

    #[test]
    fn minus_first_labels_are_sorted_and_plus_first_are_not() {
        for w in [-0.15, -0.05, 0.05, 0.1, 0.18] {
            let c = labelled_roots(w, 0.3, TrigLabels::MinusFirst);
            assert!(c[0] >= c[1] && c[1] >= c[2]);
            let s = labelled_roots(w, 0.3, TrigLabels::PlusFirst);
            assert!(s[0] < s[1]);
        }
    }
}
