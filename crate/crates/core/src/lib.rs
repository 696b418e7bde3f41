//! Verification library for the singular solutions `w_δ(X) = P(X)/|X|^{1+δ}`
//! of uniformly elliptic Hessian and Isaacs equations built from the
//! quaternionic cubic form `P(r, s, t) = Re(r·s·t)`.
//!
//! Algebraic identities are checked in exact rational arithmetic; inequalities
//! are swept in `f64` with explicit tolerances.

pub mod ellipticity;
pub mod error;
pub mod hessian;
pub mod hyperbolicity;
pub mod isaacs;
pub mod poly;
pub mod factorization;
pub mod quaternion;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod spectra;
pub mod suite;

pub use error::{Error, Result};
pub use hessian::{HessianEval, Hyperplane, InvariantData, Point12};
pub use poly::{CubicRoots, UniPoly};
pub use quaternion::{quat_mul, Quaternion};
pub use report::{Check, Status, VerificationReport};
pub use scalar::{Rational, Scalar};
pub use spectra::{DMatrix, Spectrum, SymMatrix};
