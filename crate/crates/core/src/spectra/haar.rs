use rand::Rng;

use super::matrix::DMatrix;
use crate::rng::{gaussian_vec, sample_rng, stream_id};

/// Haar-distributed `O ∈ O(n)`, deterministic in `seed`.
pub fn haar_orthogonal(n: usize, seed: u64) -> DMatrix {
    haar_orthogonal_with(&mut sample_rng(seed, stream_id("haar"), 0), n)
}

/// Gram–Schmidt QR of a Gaussian matrix (orthogonalized twice for stability).
/// The implied `R` has a positive diagonal, which makes `Q` exactly Haar.
pub fn haar_orthogonal_with<R: Rng>(rng: &mut R, n: usize) -> DMatrix {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    while cols.len() < n {
        push_orthonormal(&mut cols, gaussian_vec(rng, n));
    }
    DMatrix::from_columns(&cols)
}

/// Orthogonal factor of `I + ηG` for Gaussian `G`: an orthogonal matrix at
/// distance `O(η)` from the identity.
pub fn near_identity_orthogonal<R: Rng>(rng: &mut R, n: usize, eta: f64) -> DMatrix {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut j = 0;
    while cols.len() < n {
        let mut v: Vec<f64> = gaussian_vec(rng, n).into_iter().map(|g| eta * g).collect();
        if j < n {
            v[j] += 1.0;
            j += 1;
        }
        push_orthonormal(&mut cols, v);
    }
    DMatrix::from_columns(&cols)
}

fn push_orthonormal(cols: &mut Vec<Vec<f64>>, mut v: Vec<f64>) {
    for _ in 0..2 {
        for q in cols.iter() {
            let dot: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(q).for_each(|(x, qi)| *x -= dot * qi);
        }
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm >= 1e-8 {
        v.iter_mut().for_each(|x| *x /= norm);
        cols.push(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_and_deterministic() {
        for seed in 0..20 {
            let o = haar_orthogonal(12, seed);
            assert!(o.orthogonality_defect() < 1e-12);
            assert_eq!(o, haar_orthogonal(12, seed));
        }
        assert_ne!(haar_orthogonal(12, 1), haar_orthogonal(12, 2));
    }

    #[test]
    fn near_identity_is_close() {
        let mut rng = sample_rng(5, 0, 0);
        let o = near_identity_orthogonal(&mut rng, 12, 1e-6);
        assert!(o.orthogonality_defect() < 1e-14);
        let dist = (0..12).flat_map(|i| (0..12).map(move |j| (i, j))).map(|(i, j)| {
            (o.get(i, j) - if i == j { 1.0 } else { 0.0 }).abs()
        });
        assert!(dist.fold(0.0, f64::max) < 1e-4);
    }

    #[test]
    fn columns_are_isotropic() {
        let draws = 10_000;
        let n = 4;
        let mut sum = vec![0.0; n * n];
        for seed in 0..draws {
            let o = haar_orthogonal(n, seed);
            sum.iter_mut().zip(&o.data).for_each(|(s, x)| *s += x);
        }
        // each entry has variance 1/n
        let stderr = (1.0 / n as f64 / draws as f64).sqrt();
        for s in sum {
            assert!((s / draws as f64).abs() <= 4.0 * stderr);
        }
    }
}
