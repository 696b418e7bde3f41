use super::cubic::cubic_form;
use super::point::Point12;
use crate::error::{domain, Result};
use crate::quaternion::Quaternion;
use crate::scalar::Scalar;

/// `W = P(a)`, `m = |s|`, `n = |t|`, `r0 = W/(mn)`, and the symmetric
/// functions `L`, `M` of `(m², n²)`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantData<T> {
    pub w: T,
    pub m_sq: T,
    pub n_sq: T,
    pub m: f64,
    pub n: f64,
    /// `None` when `mn = 0`.
    pub r0: Option<f64>,
    pub l: T,
    pub big_m: T,
}

/// `L = m² + n² − m²n² − n⁴ − m⁴`
pub fn l_value<T: Scalar>(m_sq: &T, n_sq: &T) -> T {
    m_sq.clone() + n_sq.clone() - m_sq.clone() * n_sq.clone() - n_sq.clone() * n_sq.clone() - m_sq.clone() * m_sq.clone()
}

/// `M = m²n²(1 − m² − n²)`
pub fn m_value<T: Scalar>(m_sq: &T, n_sq: &T) -> T {
    m_sq.clone() * n_sq.clone() * (T::one() - m_sq.clone() - n_sq.clone())
}

pub fn invariants<T: Scalar>(a: &Point12<T>) -> Result<InvariantData<T>> {
    a.require_unit()?;
    let w = cubic_form(a);
    let m_sq = a.s.norm_sq();
    let n_sq = a.t.norm_sq();
    let m = m_sq.to_f64().sqrt();
    let n = n_sq.to_f64().sqrt();
    let r0 = (m * n > 0.0).then(|| w.to_f64() / (m * n));
    let l = l_value(&m_sq, &n_sq);
    let big_m = m_value(&m_sq, &n_sq);
    Ok(InvariantData { w, m_sq, n_sq, m, n, r0, l, big_m })
}

/// A unit site with invariants `(r0, m, n)`: `r = (r0, √(1 − r0² − m² − n²), 0, 0)`,
/// `s = m`, `t = n`.
pub fn site_from_invariants(r0: f64, m: f64, n: f64) -> Result<Point12<f64>> {
    if m < 0.0 || n < 0.0 {
        return domain("m and n must be non-negative");
    }
    let rho = r0 * r0 + m * m + n * n;
    if rho > 1.0 + 1e-15 {
        return domain(format!("r0² + m² + n² = {rho} exceeds 1"));
    }
    let r1 = (1.0 - rho).max(0.0).sqrt();
    Ok(Point12::new(
        Quaternion::new(r0, r1, 0.0, 0.0),
        Quaternion::new(m, 0.0, 0.0, 0.0),
        Quaternion::new(n, 0.0, 0.0, 0.0),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hessian::point::random_rational_sphere_point;
    use crate::rng::sample_rng;
    use crate::scalar::{rat, Rational};

    #[test]
    fn diagonal_point() {
        let c = 1.0 / 3f64.sqrt();
        let a = site_from_invariants(c, c, c).unwrap();
        let inv = invariants(&a).unwrap();
        assert!((inv.w - 1.0 / (3.0 * 3f64.sqrt())).abs() < 1e-15);
        assert!((inv.m - c).abs() < 1e-15 && (inv.n - c).abs() < 1e-15);
        assert!((inv.r0.unwrap() - c).abs() < 1e-14);
    }

    #[test]
    fn vanishing_t_leaves_r0_undefined() {
        let mut rng = sample_rng(20, 0, 0);
        let mut c = crate::rng::unit_vector(&mut rng, 12);
        c[8..].iter_mut().for_each(|v| *v = 0.0);
        let a = Point12::from_coords(&c).unwrap().normalized().unwrap();
        let inv = invariants(&a).unwrap();
        assert_eq!(inv.n, 0.0);
        assert_eq!(inv.w, 0.0);
        assert!(inv.r0.is_none());
    }

    #[test]
    fn exact_bounds_at_rational_sites() {
        let mut rng = sample_rng(21, 0, 0);
        let third = rat(1, 3);
        let cap = rat(1, 27);
        for _ in 0..300 {
            let a = random_rational_sphere_point(&mut rng, 9, 4);
            let inv: InvariantData<Rational> = invariants(&a).unwrap();
            assert!(inv.big_m >= &inv.w * &inv.w);
            assert!(inv.big_m <= cap);
            assert!(inv.l >= inv.big_m && inv.l <= third);
        }
    }

    #[test]
    fn m_dominates_w_squared_on_random_sites() {
        let mut rng = sample_rng(22, 0, 0);
        for _ in 0..10_000 {
            let a = Point12::random_unit(&mut rng);
            let inv = invariants(&a).unwrap();
            assert!(inv.big_m - inv.w * inv.w >= -1e-15);
            assert!(inv.w.abs() <= 1.0 / 27f64.sqrt() + 1e-15);
            if let Some(r0) = inv.r0 {
                assert!(r0 * r0 + inv.m_sq + inv.n_sq <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn rejects_non_unit() {
        let a = Point12::from_coords(&[0.5; 12]).unwrap();
        assert!(invariants(&a).is_err());
        assert!(site_from_invariants(0.9, 0.9, 0.9).is_err());
    }
}
