use rand::Rng;

use super::point::Point12;
use crate::error::Result;
use crate::quaternion::Quaternion;
use crate::scalar::Scalar;

/// The `Sp₁³` action `(r, s, t) ↦ (g₁ r ḡ₂, g₂ s ḡ₃, g₃ t ḡ₁)`, which
/// preserves both `P` and the norm.
pub fn group_act<T: Scalar>(g: &[Quaternion<T>; 3], a: &Point12<T>) -> Result<Point12<T>> {
    for gi in g {
        gi.require_unit()?;
    }
    let [g1, g2, g3] = g;
    Ok(Point12::new(
        &(g1 * &a.r) * &g2.conj(),
        &(g2 * &a.s) * &g3.conj(),
        &(g3 * &a.t) * &g1.conj(),
    ))
}

/// The action as stated in the literature: conjugation on each factor
/// separately. Kept for comparison; it does not preserve `P` in general.
pub fn factorwise_conjugation<T: Scalar>(g: &[Quaternion<T>; 3], a: &Point12<T>) -> Result<Point12<T>> {
    for gi in g {
        gi.require_unit()?;
    }
    let [g1, g2, g3] = g;
    Ok(Point12::new(&(g1 * &a.r) * &g1.conj(), &(g2 * &a.s) * &g2.conj(), &(g3 * &a.t) * &g3.conj()))
}

pub fn random_unit_quaternion<R: Rng>(rng: &mut R) -> Quaternion<f64> {
    let v = crate::rng::unit_vector(rng, 4);
    Quaternion::new(v[0], v[1], v[2], v[3])
}
