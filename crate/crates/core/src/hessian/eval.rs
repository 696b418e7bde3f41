use super::cubic::{cubic_form, gradient, second_derivatives};
use super::point::Point12;
use crate::error::{domain, Result};
use crate::scalar::Scalar;
use crate::spectra::SymMatrix;

/// `H_δ(X) = D²w_δ(X)` together with its evaluation site.
#[derive(Clone, Debug)]
pub struct HessianEval<T> {
    pub site: Point12<T>,
    pub delta: T,
    pub matrix: SymMatrix<T>,
}

/// Closed form at a unit site, with `k = 1 + δ`:
/// `D²P − k(∇P xᵀ + x ∇Pᵀ + P I) + k(k + 2) P x xᵀ`.
///
/// The unit-norm precondition is not checked.
pub fn hessian_at_unit<T: Scalar>(x: &Point12<T>, delta: &T) -> SymMatrix<T> {
    let p = cubic_form(x);
    let g = gradient(x);
    let d2 = second_derivatives(x);
    let c = x.coords();
    let k = T::one() + delta.clone();
    let kp = k.clone() * p.clone();
    let kkp = k.clone() * (k.clone() + T::from_int(2)) * p;
    SymMatrix::from_fn(12, |i, j| {
        let h = d2.get(i, j).clone() - k.clone() * (g[i].clone() * c[j].clone() + g[j].clone() * c[i].clone())
            + kkp.clone() * c[i].clone() * c[j].clone();
        if i == j {
            h - kp.clone()
        } else {
            h
        }
    })
}

/// Hessian of `w_δ` at any nonzero site. Exact scalars require a unit site;
/// floats are rescaled through `H_δ(X) = |X|^{−δ} H_δ(X/|X|)`.
pub fn hessian<T: Scalar>(x: &Point12<T>, delta: &T) -> Result<HessianEval<T>> {
    if x.is_zero() {
        return domain("the Hessian of w_δ is undefined at the origin");
    }
    let matrix = if x.is_unit() {
        hessian_at_unit(x, delta)
    } else if T::EXACT {
        return domain("exact Hessian evaluation requires a unit site");
    } else {
        hessian_f64(&x.to_f64(), delta.to_f64())?.map(|v| T::from_f64(*v))
    };
    Ok(HessianEval { site: x.clone(), delta: delta.clone(), matrix })
}

/// Float Hessian at any nonzero site.
pub fn hessian_f64(x: &Point12<f64>, delta: f64) -> Result<SymMatrix<f64>> {
    let norm = x.norm();
    if norm == 0.0 {
        return domain("the Hessian of w_δ is undefined at the origin");
    }
    if (norm - 1.0).abs() <= 1e-15 {
        return Ok(hessian_at_unit(x, &delta));
    }
    let h = hessian_at_unit(&x.scale(&(1.0 / norm)), &delta);
    Ok(if delta == 0.0 { h } else { h.scale(&norm.powf(-delta)) })
}

/// `−(1 + δ)(15 − δ) P(a)`, the trace of `H_δ` at a unit site.
pub fn trace_closed_form<T: Scalar>(w: &T, delta: &T) -> T {
    -(T::one() + delta.clone()) * (T::from_int(15) - delta.clone()) * w.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hessian::cubic::{gradient_w_delta, w_delta};
    use crate::hessian::point::random_rational_sphere_point;
    use crate::rng::sample_rng;
    use crate::scalar::{rat, Rational};
    use crate::spectra::{eigen_sym, DEFAULT_TOL};
    use rand::Rng;

    #[test]
    fn exact_trace_identity() {
        let mut rng = sample_rng(10, 0, 0);
        for delta in [rat(0, 1), rat(1, 4), rat(1, 2), rat(3, 4), rat(2, 7)] {
            for _ in 0..10 {
                let a = random_rational_sphere_point(&mut rng, 6, 5);
                let h = hessian(&a, &delta).unwrap();
                assert_eq!(h.matrix.trace(), trace_closed_form(&cubic_form(&a), &delta));
            }
        }
    }

    #[test]
    fn delta_zero_trace_is_minus_fifteen_p() {
        let a = random_rational_sphere_point(&mut sample_rng(11, 0, 0), 5, 3);
        let h = hessian(&a, &Rational::from_int(0)).unwrap();
        assert_eq!(h.matrix.trace(), cubic_form(&a) * rat(-15, 1));
    }

    #[test]
    fn exact_path_rejects_non_unit_sites() {
        let a = random_rational_sphere_point(&mut sample_rng(12, 0, 0), 5, 3).scale(&rat(2, 1));
        assert!(hessian(&a, &rat(0, 1)).is_err());
        assert!(hessian(&Point12::<f64>::from_coords(&[0.0; 12]).unwrap(), &0.0).is_err());
    }

    #[test]
    fn odd_and_homogeneous() {
        let mut rng = sample_rng(13, 0, 0);
        for _ in 0..100 {
            let a = Point12::random_unit(&mut rng);
            let delta: f64 = rng.random_range(0.0..0.95);
            let h = hessian_f64(&a, delta).unwrap();
            let hm = hessian_f64(&a.neg(), delta).unwrap();
            assert!(h.add(&hm).unwrap().max_abs() < 1e-14);
            let c: f64 = rng.random_range(0.1..5.0);
            let hc = hessian_f64(&a.scale(&c), delta).unwrap();
            assert!(hc.sub(&h.scale(&c.powf(-delta))).unwrap().max_abs() < 1e-12);
            let s = eigen_sym(&h, DEFAULT_TOL).unwrap();
            let sm = eigen_sym(&hm, DEFAULT_TOL).unwrap();
            for (x, y) in s.values.iter().zip(sm.values.iter().rev()) {
                assert!((x + y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn matches_finite_differences() {
        let mut rng = sample_rng(14, 0, 0);
        let step = 1e-5;
        for _ in 0..100 {
            let a = Point12::random_unit(&mut rng);
            let delta: f64 = rng.random_range(0.0..0.9);
            let h = hessian_f64(&a, delta).unwrap();
            let g = gradient_w_delta(&a, delta).unwrap();
            let c = a.coords();
            let at = |i: usize, d: f64| {
                let mut v = c.clone();
                v[i] += d;
                Point12::from_coords(&v).unwrap()
            };
            let gscale = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let hscale = h.max_abs();
            for i in 0..12 {
                let fd = (w_delta(&at(i, step), delta).unwrap() - w_delta(&at(i, -step), delta).unwrap()) / (2.0 * step);
                assert!((fd - g[i]).abs() <= 1e-6 * gscale);
                let gp = gradient_w_delta(&at(i, step), delta).unwrap();
                let gm = gradient_w_delta(&at(i, -step), delta).unwrap();
                for j in 0..12 {
                    let fd = (gp[j] - gm[j]) / (2.0 * step);
                    assert!((fd - h.get(i, j)).abs() <= 1e-6 * hscale, "entry ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn boundary_site_extreme_eigenvalues() {
        let c = 1.0 / 3f64.sqrt();
        let mut coords = [0.0; 12];
        coords[0] = c;
        coords[4] = c;
        coords[8] = c;
        let h = hessian_f64(&Point12::from_coords(&coords).unwrap(), 0.0).unwrap();
        let s = eigen_sym(&h, DEFAULT_TOL).unwrap();
        let q = 1.0 / (3.0 * 3f64.sqrt());
        assert!((s.max() - 2.0 * q).abs() < 1e-12);
        assert!((s.min() + 7.0 * q).abs() < 1e-12);
    }
}
