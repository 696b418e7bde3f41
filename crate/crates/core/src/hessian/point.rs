use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{domain, Error, Result};
use crate::quaternion::Quaternion;
use crate::scalar::{rat, Rational, Scalar};

/// `X = (r, s, t) ∈ R¹²` with each component a quaternion.
#[derive(Clone, Debug, PartialEq)]
pub struct Point12<T> {
    pub r: Quaternion<T>,
    pub s: Quaternion<T>,
    pub t: Quaternion<T>,
}

impl<T: Scalar> Point12<T> {
    pub fn new(r: Quaternion<T>, s: Quaternion<T>, t: Quaternion<T>) -> Self {
        Self { r, s, t }
    }

    pub fn from_coords(c: &[T]) -> Result<Self> {
        if c.len() != 12 {
            return Err(Error::DimensionMismatch { expected: 12, got: c.len() });
        }
        let q = |k: usize| Quaternion::new(c[k].clone(), c[k + 1].clone(), c[k + 2].clone(), c[k + 3].clone());
        Ok(Self::new(q(0), q(4), q(8)))
    }

    /// Coordinates in the order `r0..r3, s0..s3, t0..t3`.
    pub fn coords(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(12);
        for q in [&self.r, &self.s, &self.t] {
            out.extend(q.to_array());
        }
        out
    }

    pub fn norm_sq(&self) -> T {
        self.r.norm_sq() + self.s.norm_sq() + self.t.norm_sq()
    }

    pub fn is_unit(&self) -> bool {
        self.norm_sq().is_unit_norm_sq()
    }

    pub fn require_unit(&self) -> Result<()> {
        if self.is_unit() {
            Ok(())
        } else {
            domain(format!("site is not on the unit sphere (|X|² = {:?})", self.norm_sq().to_f64()))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero() && self.t.is_zero()
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.r, -&self.s, -&self.t)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.r.scale(c), self.s.scale(c), self.t.scale(c))
    }

    pub fn to_f64(&self) -> Point12<f64> {
        let c: Vec<f64> = self.coords().iter().map(Scalar::to_f64).collect();
        Point12::from_coords(&c).expect("twelve coordinates")
    }

    /// True when `r, s, t` all lie in `C = span{1, i}`.
    pub fn is_complex(&self) -> bool {
        [&self.r, &self.s, &self.t].iter().all(|q| q.q2.is_zero() && q.q3.is_zero())
    }
}

impl Point12<f64> {
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return domain("cannot normalize the zero vector");
        }
        Ok(self.scale(&(1.0 / n)))
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.coords().iter().zip(other.coords()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }

    pub fn random_unit<R: Rng>(rng: &mut R) -> Self {
        Self::from_coords(&crate::rng::unit_vector(rng, 12)).expect("twelve coordinates")
    }
}

/// Inverse stereographic projection `Qⁿ → Sⁿ ⊂ Qⁿ⁺¹` from the pole
/// `(−1, 0, …, 0)`: `u ↦ ((1 − |u|²), 2u) / (1 + |u|²)`.
pub fn rational_sphere_vector(u: &[Rational]) -> Vec<Rational> {
    let q: Rational = u.iter().map(|x| x * x).sum();
    let den = Rational::one() + &q;
    let mut out = Vec::with_capacity(u.len() + 1);
    out.push((Rational::one() - &q) / &den);
    let two = Rational::from_integer(2.into());
    out.extend(u.iter().map(|x| &two * x / &den));
    out
}

/// Exact rational point of `S¹¹` from eleven rational parameters.
pub fn rational_sphere_point(u: &[Rational]) -> Result<Point12<Rational>> {
    if u.len() != 11 {
        return Err(Error::DimensionMismatch { expected: 11, got: u.len() });
    }
    Point12::from_coords(&rational_sphere_vector(u))
}

/// Random rational unit vector in `R^{dim}` with parameters `k/den`, `|k| ≤ span`.
pub fn random_rational_sphere_vector<R: Rng>(rng: &mut R, dim: usize, span: i64, den: i64) -> Vec<Rational> {
    let u: Vec<Rational> = (0..dim - 1).map(|_| rat(rng.random_range(-span..=span), den)).collect();
    let mut v = rational_sphere_vector(&u);
    // rotate the pole coordinate to a random slot so no axis is special
    let slot = rng.random_range(0..dim);
    v.swap(0, slot);
    v
}

pub fn random_rational_sphere_point<R: Rng>(rng: &mut R, span: i64, den: i64) -> Point12<Rational> {
    Point12::from_coords(&random_rational_sphere_vector(rng, 12, span, den)).expect("twelve coordinates")
}

impl Point12<Rational> {
    pub fn zero() -> Self {
        let z = Quaternion::new(Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero());
        Self::new(z.clone(), z.clone(), z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::sample_rng;

    #[test]
    fn zero_parameter_gives_pole() {
        let p = rational_sphere_point(&vec![Rational::zero(); 11]).unwrap();
        let mut expected = vec![Rational::zero(); 12];
        expected[0] = Rational::one();
        assert_eq!(p.coords(), expected);
    }

    #[test]
    fn stereographic_points_are_exact_units() {
        let mut rng = sample_rng(1, 0, 0);
        for _ in 0..50 {
            let u: Vec<Rational> = (0..11).map(|_| rat(rng.random_range(-9..=9), rng.random_range(1..=7))).collect();
            assert!(rational_sphere_point(&u).unwrap().norm_sq().is_one());
        }
    }

    #[test]
    fn integer_parameters_share_the_denominator() {
        let u: Vec<Rational> = (0..11).map(|k| rat(k - 5, 1)).collect();
        let den = Rational::one() + u.iter().map(|x| x * x).sum::<Rational>();
        for c in rational_sphere_point(&u).unwrap().coords() {
            assert!((c * &den).denom().is_one());
        }
    }

    #[test]
    fn stereographic_map_is_injective_on_samples() {
        let a = rational_sphere_point(&vec![rat(1, 2); 11]).unwrap();
        let mut u = vec![rat(1, 2); 11];
        u[3] = rat(1, 3);
        let b = rational_sphere_point(&u).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(rational_sphere_point(&vec![rat(1, 2); 10]).is_err());
        assert!(Point12::<f64>::from_coords(&[0.0; 11]).is_err());
    }
}
