use super::jacobi::Spectrum;
use crate::error::{Error, Result};

/// Spectrum of `D²h(|x|)` at `|x| = r` in `Rⁿ`: `h''` once and `h'/r` with
/// multiplicity `n − 1`.
pub fn radial_spectrum(h_second: f64, h_prime: f64, r: f64, n: usize) -> Result<Spectrum> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    if n == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    let mut values = vec![h_prime / r; n - 1];
    values.push(h_second);
    Ok(Spectrum::from_values(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_profile() {
        let s = radial_spectrum(2.0, 2.0 * 0.7, 0.7, 5).unwrap();
        assert!(s.values.iter().all(|v| (v - 2.0).abs() < 1e-15));
    }

    #[test]
    fn linear_profile() {
        assert_eq!(radial_spectrum(0.0, 1.0, 0.5, 3).unwrap().values, vec![2.0, 2.0, 0.0]);
    }

    #[test]
    fn sublinear_power_is_concave_increasing() {
        let d = 0.3;
        let r: f64 = 0.4;
        let hp = (1.0 - d) * r.powf(-d);
        let hpp = -(1.0 - d) * d * r.powf(-d - 1.0);
        let s = radial_spectrum(hpp, hp, r, 12).unwrap();
        assert!(s.min() < 0.0 && s.max() > 0.0);
        assert_eq!(s.min(), hpp);
    }

    #[test]
    fn non_positive_radius_rejected() {
        assert!(radial_spectrum(1.0, 1.0, 0.0, 3).is_err());
        assert!(radial_spectrum(1.0, 1.0, -1.0, 3).is_err());
    }

    #[test]
    fn matches_eigensolver_on_explicit_hessian() {
        use crate::spectra::{eigen_sym, SymMatrix, DEFAULT_TOL};
        // h(r) = r³ at x = (0.3, -0.4, 0.5): D²h = 3(r I + x xᵀ / r)
        let x = [0.3, -0.4, 0.5];
        let r = (x.iter().map(|v| v * v).sum::<f64>()).sqrt();
        let m = SymMatrix::from_fn(3, |i, j| 3.0 * ((i == j) as u8 as f64 * r + x[i] * x[j] / r));
        let direct = eigen_sym(&m, DEFAULT_TOL).unwrap();
        let closed = radial_spectrum(6.0 * r, 3.0 * r * r, r, 3).unwrap();
        for (a, b) in direct.values.iter().zip(&closed.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
