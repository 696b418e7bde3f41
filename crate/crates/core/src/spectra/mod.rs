//! Symmetric matrices, ordered spectra and related utilities.

mod haar;
mod jacobi;
mod matrix;
mod radial;
mod weyl;

pub use haar::{haar_orthogonal, haar_orthogonal_with, near_identity_orthogonal};
pub use jacobi::{eigen_sym, eigh, residual, EigenDecomposition, Spectrum, DEFAULT_TOL};
pub use matrix::{orthonormal_complement, DMatrix, SymMatrix};
pub use radial::radial_spectrum;
pub use weyl::{weyl_check, WEYL_SLACK};
