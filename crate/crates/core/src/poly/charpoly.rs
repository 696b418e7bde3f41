//! Exact characteristic polynomials by Faddeev–LeVerrier over the integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::unipoly::UniPoly;
use crate::error::{Error, Result};
use crate::scalar::{common_denominator, Rational};
use crate::spectra::SymMatrix;

/// `det(T·I − M)` for a symmetric rational matrix.
pub fn charpoly_exact(m: &SymMatrix<Rational>) -> UniPoly {
    let n = m.dim();
    let rows: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    charpoly_square(&rows).expect("symmetric matrices are square")
}

/// `det(T·I − M)` for a square rational matrix given by rows.
pub fn charpoly_square(rows: &[Vec<Rational>]) -> Result<UniPoly> {
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
    }
    let d = common_denominator(rows.iter().flatten());
    // A = d·M has integer entries; det(T − M) = d^{−n} det(dT − A).
    let a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|v| (v * Rational::from_integer(d.clone())).to_integer()).collect())
        .collect();
    let c = faddeev_leverrier(&a);
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut dpow = Rational::one();
    // coefficient k of the result is c_k · d^{k − n}
    let dn = num_traits::pow(Rational::from_integer(d.clone()), n);
    for ck in &c {
        coeffs.push(Rational::from_integer(ck.clone()) * &dpow / &dn);
        dpow *= Rational::from_integer(d.clone());
    }
    Ok(UniPoly::new(coeffs))
}

/// Integer characteristic polynomial coefficients `c_0, …, c_n` (`c_n = 1`).
fn faddeev_leverrier(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    // M_k = A·M_{k−1} + c_{n−k+1} I, c_{n−k} = −tr(A·M_k)/k
    let mut mk = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        let mut next = mat_mul(a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        mk = next;
        let am = mat_mul(a, &mk);
        let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        c[n - k] = -tr / BigInt::from(k);
    }
    c
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for l in 0..n {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[l][j].is_zero() {
                    out[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::sample_rng;
    use crate::scalar::{rat, rat_int};
    use crate::spectra::{eigen_sym, DEFAULT_TOL};
    use rand::Rng;

    #[test]
    fn identity_three() {
        let p = charpoly_exact(&SymMatrix::identity(3));
        assert_eq!(p, UniPoly::from_ints(&[-1, 3, -3, 1]));
    }

    #[test]
    fn diagonal_two() {
        let (a, b) = (rat(2, 3), rat(-5, 7));
        let p = charpoly_exact(&SymMatrix::diagonal(&[a.clone(), b.clone()]));
        assert_eq!(p, UniPoly::new(vec![&a * &b, -(&a + &b), rat_int(1)]));
    }

    #[test]
    fn non_square_rejected() {
        assert!(charpoly_square(&[vec![rat_int(1)], vec![rat_int(1), rat_int(2)]]).is_err());
    }

    #[test]
    fn float_eigenvalues_are_roots() {
        let mut rng = sample_rng(60, 0, 0);
        for _ in 0..100 {
            let n = rng.random_range(2..=8);
            let m = SymMatrix::from_fn(n, |_, _| rat(rng.random_range(-20..=20), rng.random_range(1..=6)));
            let p = charpoly_exact(&m);
            assert_eq!(p.degree(), Some(n));
            let s = eigen_sym(&m.to_f64(), DEFAULT_TOL).unwrap();
            let scale = m.to_f64().frobenius().max(1.0);
            for &lambda in &s.values {
                let d = p.derivative().eval_f64(lambda).abs().max(1.0);
                assert!(p.eval_f64(lambda).abs() / d <= 1e-8 * scale, "residual at {lambda}");
            }
        }
    }
}
