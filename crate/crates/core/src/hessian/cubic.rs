use super::point::Point12;
use crate::error::{domain, Result};
use crate::quaternion::Quaternion;
use crate::scalar::Scalar;
use crate::spectra::SymMatrix;

/// `P(r, s, t) = Re(r·s·t)`, written out term by term.
pub fn cubic_form<T: Scalar>(x: &Point12<T>) -> T {
    let [r0, r1, r2, r3] = x.r.to_array();
    let [s0, s1, s2, s3] = x.s.to_array();
    let [t0, t1, t2, t3] = x.t.to_array();
    let m = |a: &T, b: &T, c: &T| a.clone() * b.clone() * c.clone();
    m(&r0, &s0, &t0) - m(&r0, &s1, &t1) - m(&r0, &s2, &t2) - m(&r0, &s3, &t3)
        - m(&r1, &s0, &t1) - m(&r1, &s1, &t0) - m(&r1, &s2, &t3) + m(&r1, &s3, &t2)
        - m(&r2, &s0, &t2) + m(&r2, &s1, &t3) - m(&r2, &s2, &t0) - m(&r2, &s3, &t1)
        - m(&r3, &s0, &t3) - m(&r3, &s1, &t2) + m(&r3, &s2, &t1) - m(&r3, &s3, &t0)
}

/// `Re(r·s·t)` through the Hamilton product.
pub fn cubic_form_via_product<T: Scalar>(x: &Point12<T>) -> T {
    (&(&x.r * &x.s) * &x.t).re()
}

/// `∇P = (conj(s·t), conj(t·r), conj(r·s))`.
pub fn gradient<T: Scalar>(x: &Point12<T>) -> Vec<T> {
    let (r, s, t) = (&x.r, &x.s, &x.t);
    let mut g = Vec::with_capacity(12);
    g.extend((s * t).conj().to_array());
    g.extend((t * r).conj().to_array());
    g.extend((r * s).conj().to_array());
    g
}

/// `D²P`: off-diagonal 4×4 blocks `Re(e_a e_b t)`, `Re(e_a s e_b)`, `Re(r e_a e_b)`.
pub fn second_derivatives<T: Scalar>(x: &Point12<T>) -> SymMatrix<T> {
    let e: [Quaternion<T>; 4] = std::array::from_fn(Quaternion::basis);
    let mut rs = Vec::with_capacity(16);
    let mut rt = Vec::with_capacity(16);
    let mut st = Vec::with_capacity(16);
    for a in 0..4 {
        let e_a_s = &e[a] * &x.s;
        let r_e_a = &x.r * &e[a];
        for b in 0..4 {
            rs.push((&(&e[a] * &e[b]) * &x.t).re());
            rt.push((&e_a_s * &e[b]).re());
            st.push((&r_e_a * &e[b]).re());
        }
    }
    SymMatrix::from_fn(12, |i, j| {
        let (bi, bj) = (i / 4, j / 4);
        let (a, b) = (i % 4, j % 4);
        match (bi, bj) {
            (0, 1) => rs[a * 4 + b].clone(),
            (0, 2) => rt[a * 4 + b].clone(),
            (1, 2) => st[a * 4 + b].clone(),
            _ => T::zero(),
        }
    })
}

/// `w_δ(X) = P(X) / |X|^{1+δ}`.
pub fn w_delta(x: &Point12<f64>, delta: f64) -> Result<f64> {
    let norm = x.norm();
    if norm == 0.0 {
        return domain("w_δ is undefined at the origin");
    }
    Ok(cubic_form(x) / norm.powf(1.0 + delta))
}

/// `∇w_δ(X) = |X|^{−1−δ} (∇P − (1 + δ) P X / |X|²)`.
pub fn gradient_w_delta(x: &Point12<f64>, delta: f64) -> Result<Vec<f64>> {
    let norm_sq = x.norm_sq();
    if norm_sq == 0.0 {
        return domain("w_δ is undefined at the origin");
    }
    let k = 1.0 + delta;
    let p = cubic_form(x);
    let scale = norm_sq.powf(-k / 2.0);
    Ok(gradient(x).iter().zip(x.coords()).map(|(g, c)| scale * (g - k * p * c / norm_sq)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hessian::point::random_rational_sphere_point;
    use crate::rng::sample_rng;
    use crate::scalar::{rat, Rational};
    use num_traits::Zero;

    fn basis_point(r: usize, s: usize, t: usize) -> Point12<f64> {
        Point12::new(Quaternion::basis(r), Quaternion::basis(s), Quaternion::basis(t))
    }

    #[test]
    fn unit_triple_gives_one() {
        assert_eq!(cubic_form(&basis_point(0, 0, 0)), 1.0);
    }

    #[test]
    fn ijk_gives_minus_one() {
        // the r1·s2·t3 term carries a minus sign in the expansion
        assert_eq!(cubic_form(&basis_point(1, 2, 3)), -1.0);
        assert_eq!(cubic_form_via_product(&basis_point(1, 2, 3)), -1.0);
    }

    #[test]
    fn diagonal_point_attains_bound() {
        let c = 1.0 / 3f64.sqrt();
        let x = basis_point(0, 0, 0).scale(&c);
        assert!((cubic_form(&x) - 1.0 / (3.0 * 3f64.sqrt())).abs() < 1e-15);
        assert!((w_delta(&x, 0.4).unwrap() - 1.0 / (3.0 * 3f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn expansion_matches_product_exactly() {
        let mut rng = sample_rng(3, 0, 0);
        for _ in 0..200 {
            let x = random_rational_sphere_point(&mut rng, 9, 4);
            assert_eq!(cubic_form(&x), cubic_form_via_product(&x));
        }
    }

    #[test]
    fn euler_identity_and_harmonicity_exact() {
        let mut rng = sample_rng(4, 0, 0);
        for _ in 0..50 {
            let x = random_rational_sphere_point(&mut rng, 7, 3).scale(&rat(5, 2));
            let g = gradient(&x);
            let euler: Rational = x.coords().iter().zip(&g).map(|(a, b)| a * b).sum();
            assert_eq!(euler, cubic_form(&x) * rat(3, 1));
            assert!(second_derivatives(&x).trace().is_zero());
        }
    }

    #[test]
    fn homogeneity_and_oddness() {
        let mut rng = sample_rng(5, 0, 0);
        for _ in 0..200 {
            let x = Point12::random_unit(&mut rng);
            for delta in [0.0, 0.3, 0.9] {
                let w = w_delta(&x, delta).unwrap();
                let c = 0.2 + 3.0 * rand::Rng::random::<f64>(&mut rng);
                let wc = w_delta(&x.scale(&c), delta).unwrap();
                assert!((wc - c.powf(2.0 - delta) * w).abs() < 1e-12);
                assert_eq!(w_delta(&x.neg(), delta).unwrap(), -w);
            }
        }
        // degree 3 over degree 1: doubling the site quadruples w
        let x = Point12::random_unit(&mut rng);
        assert!((w_delta(&x.scale(&2.0), 0.0).unwrap() - 4.0 * w_delta(&x, 0.0).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn origin_is_a_domain_error() {
        assert!(w_delta(&Point12::from_coords(&[0.0; 12]).unwrap(), 0.0).is_err());
    }

    #[test]
    fn gradient_matches_central_differences() {
        let mut rng = sample_rng(6, 0, 0);
        let x = Point12::random_unit(&mut rng);
        let g = gradient(&x);
        let c = x.coords();
        for i in 0..12 {
            let mut p = c.clone();
            let mut m = c.clone();
            p[i] += 1e-6;
            m[i] -= 1e-6;
            let fd = (cubic_form(&Point12::from_coords(&p).unwrap())
                - cubic_form(&Point12::from_coords(&m).unwrap()))
                / 2e-6;
            assert!((fd - g[i]).abs() < 1e-9);
        }
    }
}
