//! The Hessian of `w` restricted to a hyperplane `H ≅ R¹¹` through the origin.
//!
//! For a linear isometric embedding `ι: R¹¹ → H` the Hessian of `w ∘ ι` at `y`
//! is exactly `ιᵀ H(ιy) ι`, so the intrinsic Hessian is the frame compression.

use rand::Rng;

use super::cubic::{cubic_form, second_derivatives};
use super::eval::{hessian_at_unit, hessian_f64};
use super::point::Point12;
use crate::error::{domain, Error, Result};
use crate::scalar::Scalar;
use crate::spectra::{DMatrix, SymMatrix};

const MEMBERSHIP_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Hyperplane {
    normal: Vec<f64>,
    /// 12×11, orthonormal columns spanning the hyperplane.
    frame: DMatrix,
    coordinate: Option<usize>,
}

impl Hyperplane {
    /// `{x : x_k = 0}`.
    pub fn coordinate(k: usize) -> Result<Self> {
        if k >= 12 {
            return Err(Error::DimensionMismatch { expected: 12, got: k });
        }
        let mut normal = vec![0.0; 12];
        normal[k] = 1.0;
        let cols: Vec<usize> = (0..12).filter(|&j| j != k).collect();
        let frame = DMatrix::from_fn(12, 11, |i, c| if i == cols[c] { 1.0 } else { 0.0 });
        Ok(Self { normal, frame, coordinate: Some(k) })
    }

    /// The hyperplane orthogonal to `normal`, framed by a Householder reflection.
    pub fn from_normal(normal: &[f64]) -> Result<Self> {
        if normal.len() != 12 {
            return Err(Error::DimensionMismatch { expected: 12, got: normal.len() });
        }
        let norm = normal.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return domain("hyperplane normal must be a nonzero finite vector");
        }
        let nu: Vec<f64> = normal.iter().map(|v| v / norm).collect();
        if let Some(k) = nu.iter().position(|v| (v.abs() - 1.0).abs() < 1e-15) {
            return Self::coordinate(k);
        }
        let k = (0..12).max_by(|&i, &j| nu[i].abs().total_cmp(&nu[j].abs())).expect("nonempty");
        let mut v = nu.clone();
        v[k] += nu[k].signum();
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let cols: Vec<usize> = (0..12).filter(|&j| j != k).collect();
        let frame = DMatrix::from_fn(12, 11, |i, c| {
            let j = cols[c];
            (if i == j { 1.0 } else { 0.0 }) - 2.0 * v[i] * v[j] / vv
        });
        Ok(Self { normal: nu, frame, coordinate: None })
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn frame(&self) -> &DMatrix {
        &self.frame
    }

    pub fn coordinate_index(&self) -> Option<usize> {
        self.coordinate
    }

    /// True when the normal lies in a single quaternion factor, which makes the
    /// second normal derivative of `P` vanish identically on the hyperplane.
    pub fn is_block_aligned(&self) -> bool {
        (0..3).any(|b| {
            self.normal.iter().enumerate().all(|(i, v)| i / 4 == b || v.abs() < 1e-15)
        })
    }

    pub fn contains(&self, x: &Point12<f64>, tol: f64) -> bool {
        self.normal.iter().zip(x.coords()).map(|(a, b)| a * b).sum::<f64>().abs() <= tol
    }

    /// `ι(y)` for `y ∈ R¹¹`.
    pub fn embed(&self, y: &[f64]) -> Result<Point12<f64>> {
        if y.len() != 11 {
            return Err(Error::DimensionMismatch { expected: 11, got: y.len() });
        }
        Point12::from_coords(&self.frame.mul_vec(y))
    }

    /// Frame coordinates `ιᵀx`.
    pub fn coordinates_of(&self, x: &Point12<f64>) -> Vec<f64> {
        self.frame.transpose().mul_vec(&x.coords())
    }

    pub fn random_unit_point<R: Rng>(&self, rng: &mut R) -> Point12<f64> {
        self.embed(&crate::rng::unit_vector(rng, 11)).expect("eleven coordinates")
    }
}

/// 11×11 Hessian of `w|_H` at a unit site of `H` (δ = 0).
pub fn hessian_restricted(x: &Point12<f64>, h: &Hyperplane) -> Result<SymMatrix<f64>> {
    if (x.norm() - 1.0).abs() > MEMBERSHIP_TOL {
        return domain("restricted Hessian requires a unit site");
    }
    if !h.contains(x, MEMBERSHIP_TOL) {
        return domain("site does not lie in the hyperplane");
    }
    Ok(hessian_f64(x, 0.0)?.congruence(h.frame()))
}

/// Exact restricted Hessian for the coordinate hyperplane `{x_k = 0}`.
pub fn hessian_restricted_coordinate<T: Scalar>(x: &Point12<T>, k: usize) -> Result<SymMatrix<T>> {
    x.require_unit()?;
    let c = x.coords();
    if k >= 12 {
        return Err(Error::DimensionMismatch { expected: 12, got: k });
    }
    if !c[k].is_zero() {
        return domain(format!("site has nonzero coordinate {k}"));
    }
    let keep: Vec<usize> = (0..12).filter(|&j| j != k).collect();
    Ok(hessian_at_unit(x, &T::zero()).permuted(&keep))
}

/// `λ₆ = (2/√3) cos((arccos(3√3 W) + π)/3) − W` with `W = P(a)`.
pub fn restricted_lambda6(w: f64) -> f64 {
    let arg = (3.0 * 3f64.sqrt() * w).clamp(-1.0, 1.0);
    2.0 / 3f64.sqrt() * ((arg.acos() + std::f64::consts::PI) / 3.0).cos() - w
}

/// `P_νν(a)`: with it, `Tr(restricted Hessian) = −14 P(a) − P_νν(a)`.
pub fn restricted_trace_correction(x: &Point12<f64>, h: &Hyperplane) -> f64 {
    second_derivatives(x).quadratic_form(h.normal())
}

/// `−14 P(a) − P_νν(a)`
pub fn restricted_trace_closed_form(x: &Point12<f64>, h: &Hyperplane) -> f64 {
    -14.0 * cubic_form(x) - restricted_trace_correction(x, h)
}
