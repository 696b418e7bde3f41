//! Sylvester resultants by fraction-free (Bareiss) elimination.
//!
//! Convention: the Sylvester matrix lists the `deg q` shifted rows of `p`
//! first, then the `deg p` rows of `q`, so `Res(T − a, T − b) = a − b` and
//! `Res(p, q) = lc(p)^{deg q} ∏_{p(α)=0} q(α)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::unipoly::UniPoly;
use crate::error::{domain, Result};
use crate::scalar::{common_denominator, Rational};

pub fn resultant(p: &UniPoly, q: &UniPoly) -> Result<Rational> {
    let (Some(m), Some(n)) = (p.degree(), q.degree()) else {
        return domain("resultant of the zero polynomial is undefined");
    };
    if m == 0 && n == 0 {
        return domain("resultant needs at least one non-constant polynomial");
    }
    let dp = common_denominator(p.coeffs());
    let dq = common_denominator(q.coeffs());
    let ip = integer_coeffs(p, &dp);
    let iq = integer_coeffs(q, &dq);
    let size = m + n;
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    // descending coefficients, shifted
    for r in 0..n {
        for (k, c) in ip.iter().rev().enumerate() {
            rows[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in iq.iter().rev().enumerate() {
            rows[n + r][r + k] = c.clone();
        }
    }
    let det = bareiss_det(rows);
    // scaling p by dp multiplies the determinant by dp^n, q by dq^m
    let scale = num_traits::pow(Rational::from_integer(dp), n) * num_traits::pow(Rational::from_integer(dq), m);
    Ok(Rational::from_integer(det) / scale)
}

fn integer_coeffs(p: &UniPoly, d: &BigInt) -> Vec<BigInt> {
    p.coeffs().iter().map(|c| (c * Rational::from_integer(d.clone())).to_integer()).collect()
}

/// Determinant of an integer matrix; every intermediate division is exact.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::sample_rng;
    use crate::scalar::rat;
    use rand::Rng;

    #[test]
    fn common_root_gives_zero() {
        let p = UniPoly::from_ints(&[-1, 1]);
        assert!(resultant(&p, &p).unwrap().is_zero());
    }

    #[test]
    fn linear_convention() {
        let (a, b) = (rat(3, 4), rat(-2, 5));
        let r = resultant(&UniPoly::linear_root(&a), &UniPoly::linear_root(&b)).unwrap();
        assert_eq!(r, a - b);
    }

    #[test]
    fn product_formula() {
        // Res(p, q) = lc(p)^{deg q} ∏ q(α) over the roots α of p
        let p = &UniPoly::linear_root(&rat(1, 2)) * &UniPoly::linear_root(&rat(-3, 1));
        let p = p.scale(&rat(5, 1));
        let q = UniPoly::from_ints(&[7, -1, 2, 1]);
        let expected = rat(125, 1) * q.eval(&rat(1, 2)) * q.eval(&rat(-3, 1));
        assert_eq!(resultant(&p, &q).unwrap(), expected);
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        assert!(resultant(&UniPoly::zero(), &UniPoly::from_ints(&[1, 1])).is_err());
    }

    #[test]
    fn determinant_small_cases() {
        let m = vec![
            vec![BigInt::from(0), BigInt::from(2), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(3), BigInt::from(0), BigInt::from(1)],
        ];
        assert_eq!(bareiss_det(m), BigInt::from(-5));
    }

    #[test]
    fn vanishes_iff_planted_common_factor() {
        let mut rng = sample_rng(61, 0, 0);
        let random_poly = |deg: usize, rng: &mut crate::rng::SampleRng| {
            let mut c: Vec<Rational> = (0..deg).map(|_| rat(rng.random_range(-9..=9), rng.random_range(1..=4))).collect();
            c.push(rat(rng.random_range(1..=5), 1));
            UniPoly::new(c)
        };
        for trial in 0..1000 {
            let a = random_poly(rng.random_range(1..=4), &mut rng);
            let b = random_poly(rng.random_range(1..=4), &mut rng);
            let (p, q) = if trial % 2 == 0 {
                let f = random_poly(rng.random_range(1..=2), &mut rng);
                (&a * &f, &b * &f)
            } else {
                (a, b)
            };
            let r = resultant(&p, &q).unwrap();
            let g = p.gcd(&q);
            assert_eq!(r.is_zero(), g.degree().unwrap_or(0) > 0, "trial {trial}");
        }
    }
}
