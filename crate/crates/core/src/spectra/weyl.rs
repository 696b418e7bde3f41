use super::jacobi::Spectrum;
use crate::error::{Error, Result};

pub const WEYL_SLACK: f64 = 1e-9;

/// Checks `Λ₁ ≥ maxᵢ(λᵢ − λ′ᵢ)` and `Λ_n ≤ minᵢ(λᵢ − λ′ᵢ)` for the spectra of
/// `A`, `B` and `A − B`.
pub fn weyl_check(a: &Spectrum, b: &Spectrum, diff: &Spectrum) -> Result<bool> {
    let n = a.len();
    for other in [b.len(), diff.len()] {
        if other != n {
            return Err(Error::DimensionMismatch { expected: n, got: other });
        }
    }
    if n == 0 {
        return Ok(true);
    }
    let gaps = a.values.iter().zip(&b.values).map(|(x, y)| x - y);
    let (lo, hi) = gaps.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), g| (lo.min(g), hi.max(g)));
    Ok(diff.max() >= hi - WEYL_SLACK && diff.min() <= lo + WEYL_SLACK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{eigen_sym, SymMatrix, DEFAULT_TOL};

    #[test]
    fn diagonal_swap() {
        let a = Spectrum::from_values(vec![1.0, 0.0]);
        let b = Spectrum::from_values(vec![0.0, 1.0]);
        let d = Spectrum::from_values(vec![1.0, -1.0]);
        assert!(weyl_check(&a, &b, &d).unwrap());
    }

    #[test]
    fn equal_matrices() {
        let a = Spectrum::from_values(vec![2.0, -1.0, 0.5]);
        let d = Spectrum::from_values(vec![0.0; 3]);
        assert!(weyl_check(&a, &a, &d).unwrap());
    }

    #[test]
    fn violated_bound_detected() {
        let a = Spectrum::from_values(vec![3.0, 0.0]);
        let b = Spectrum::from_values(vec![0.0, 0.0]);
        let d = Spectrum::from_values(vec![1.0, -1.0]);
        assert!(!weyl_check(&a, &b, &d).unwrap());
    }

    #[test]
    fn mismatch_is_error() {
        let a = Spectrum::from_values(vec![1.0]);
        let b = Spectrum::from_values(vec![1.0, 2.0]);
        assert!(weyl_check(&a, &b, &a).is_err());
    }

    #[test]
    fn random_pairs_satisfy_weyl() {
        use crate::rng::{gaussian_vec, sample_rng};
        for k in 0..200 {
            let mut rng = sample_rng(5, 0, k);
            let mut va = gaussian_vec(&mut rng, 78).into_iter();
            let mut vb = gaussian_vec(&mut rng, 78).into_iter();
            let a = SymMatrix::from_fn(12, |_, _| va.next().unwrap());
            let b = SymMatrix::from_fn(12, |_, _| vb.next().unwrap());
            let sa = eigen_sym(&a, DEFAULT_TOL).unwrap();
            let sb = eigen_sym(&b, DEFAULT_TOL).unwrap();
            let sd = eigen_sym(&a.sub(&b).unwrap(), DEFAULT_TOL).unwrap();
            assert!(weyl_check(&sa, &sb, &sd).unwrap());
        }
    }
}
