//! Hamilton quaternions over either scalar kind.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{domain, Result};
use crate::scalar::Scalar;

/// `q0 + q1·i + q2·j + q3·k`
#[derive(Clone, Debug, PartialEq)]
pub struct Quaternion<T> {
    pub q0: T,
    pub q1: T,
    pub q2: T,
    pub q3: T,
}

impl<T: Scalar> Quaternion<T> {
    pub fn new(q0: T, q1: T, q2: T, q3: T) -> Self {
        Self { q0, q1, q2, q3 }
    }

    pub fn from_array(c: [T; 4]) -> Self {
        let [q0, q1, q2, q3] = c;
        Self { q0, q1, q2, q3 }
    }

    pub fn to_array(&self) -> [T; 4] {
        [self.q0.clone(), self.q1.clone(), self.q2.clone(), self.q3.clone()]
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn one() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::zero())
    }

    /// Basis element `e_k` for `k` in `0..4` (1, i, j, k).
    pub fn basis(k: usize) -> Self {
        let mut c = [T::zero(), T::zero(), T::zero(), T::zero()];
        c[k] = T::one();
        Self::from_array(c)
    }

    pub fn re(&self) -> T {
        self.q0.clone()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.q0.clone(), -self.q1.clone(), -self.q2.clone(), -self.q3.clone())
    }

    pub fn norm_sq(&self) -> T {
        self.q0.clone() * self.q0.clone()
            + self.q1.clone() * self.q1.clone()
            + self.q2.clone() * self.q2.clone()
            + self.q3.clone() * self.q3.clone()
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(
            self.q0.clone() * c.clone(),
            self.q1.clone() * c.clone(),
            self.q2.clone() * c.clone(),
            self.q3.clone() * c.clone(),
        )
    }

    /// Hamilton product `self · rhs`.
    pub fn mul_q(&self, rhs: &Self) -> Self {
        let (a0, a1, a2, a3) = (&self.q0, &self.q1, &self.q2, &self.q3);
        let (b0, b1, b2, b3) = (&rhs.q0, &rhs.q1, &rhs.q2, &rhs.q3);
        let m = |x: &T, y: &T| x.clone() * y.clone();
        Self::new(
            m(a0, b0) - m(a1, b1) - m(a2, b2) - m(a3, b3),
            m(a0, b1) + m(a1, b0) + m(a2, b3) - m(a3, b2),
            m(a0, b2) - m(a1, b3) + m(a2, b0) + m(a3, b1),
            m(a0, b3) + m(a1, b2) - m(a2, b1) + m(a3, b0),
        )
    }

    /// Fails unless `|self| = 1` (exactly for rationals).
    pub fn require_unit(&self) -> Result<()> {
        if self.norm_sq().is_unit_norm_sq() {
            Ok(())
        } else {
            domain(format!("quaternion {:?} is not a unit", self.to_array()))
        }
    }
}

pub fn quat_mul<T: Scalar>(p: &Quaternion<T>, q: &Quaternion<T>) -> Quaternion<T> {
    p.mul_q(q)
}

impl<T: Scalar> Mul for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn mul(self, rhs: Self) -> Quaternion<T> {
        self.mul_q(rhs)
    }
}

impl<T: Scalar> Add for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn add(self, rhs: Self) -> Quaternion<T> {
        Quaternion::new(
            self.q0.clone() + rhs.q0.clone(),
            self.q1.clone() + rhs.q1.clone(),
            self.q2.clone() + rhs.q2.clone(),
            self.q3.clone() + rhs.q3.clone(),
        )
    }
}

impl<T: Scalar> Sub for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn sub(self, rhs: Self) -> Quaternion<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Neg for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn neg(self) -> Quaternion<T> {
        Quaternion::new(-self.q0.clone(), -self.q1.clone(), -self.q2.clone(), -self.q3.clone())
    }
}

impl<T: Scalar> Quaternion<T> {
    pub fn is_zero(&self) -> bool {
        self.q0.is_zero() && self.q1.is_zero() && self.q2.is_zero() && self.q3.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use proptest::prelude::*;

    fn q(c: [f64; 4]) -> Quaternion<f64> {
        Quaternion::from_array(c)
    }

    #[test]
    fn hamilton_table() {
        let (i, j, k) = (Quaternion::<f64>::basis(1), Quaternion::basis(2), Quaternion::basis(3));
        assert_eq!(&i * &j, k);
        assert_eq!(&j * &k, i);
        assert_eq!(&k * &i, j);
        assert_eq!(&j * &i, -&k);
        assert_eq!(&i * &i, -&Quaternion::one());
        // Re(i·j·k) = Re(k·k) = -1
        assert_eq!((&(&i * &j) * &k).re(), -1.0);
    }

    #[test]
    fn identity_is_neutral() {
        let x = q([0.3, -1.2, 2.0, 0.5]);
        assert_eq!(&Quaternion::one() * &x, x);
        assert_eq!(&x * &Quaternion::one(), x);
    }

    #[test]
    fn rational_norm_is_multiplicative_exactly() {
        let p = Quaternion::new(rat(1, 3), rat(-2, 5), rat(7, 2), rat(0, 1));
        let r = Quaternion::new(rat(3, 7), rat(1, 1), rat(-1, 9), rat(5, 4));
        let pr = &p * &r;
        assert_eq!(pr.norm_sq(), p.norm_sq() * r.norm_sq());
        let unit: Quaternion<Rational> = Quaternion::new(rat(3, 5), rat(4, 5), rat(0, 1), rat(0, 1));
        assert!(unit.require_unit().is_ok());
        assert!(p.require_unit().is_err());
    }

    proptest! {
        #[test]
        fn norm_multiplicative_and_associative(
            a in prop::array::uniform4(-3.0f64..3.0),
            b in prop::array::uniform4(-3.0f64..3.0),
            c in prop::array::uniform4(-3.0f64..3.0),
        ) {
            let (a, b, c) = (q(a), q(b), q(c));
            let ab = &a * &b;
            prop_assert!((ab.norm_sq().sqrt() - a.norm_sq().sqrt() * b.norm_sq().sqrt()).abs() < 1e-12);
            let l = &ab * &c;
            let r = &a * &(&b * &c);
            for (x, y) in l.to_array().iter().zip(r.to_array().iter()) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
    }
}
