use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense symmetric matrix; only the upper triangle is stored.
#[derive(Clone, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    upper: Vec<T>,
}

#[inline]
fn packed_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * (2 * n - i + 1) / 2 + (j - i)
}

impl<T: Clone> SymMatrix<T> {
    /// Builds the matrix from `f(i, j)` evaluated for `i <= j` only.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut upper = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                upper.push(f(i, j));
            }
        }
        Self { n, upper }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.upper[packed_index(self.n, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let idx = packed_index(self.n, i, j);
        self.upper[idx] = v;
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> SymMatrix<U> {
        SymMatrix { n: self.n, upper: self.upper.iter().map(f).collect() }
    }

    /// `P^T S P` for the permutation taking new index `k` to old index `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self::from_fn(order.len(), |i, j| self.get(order[i], order[j]).clone())
    }

    pub fn entries_upper(&self) -> &[T] {
        &self.upper
    }
}

impl<T: Scalar> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(d: &[T]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a.clone() - b.clone())
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: rhs.n });
        }
        Ok(Self { n: self.n, upper: self.upper.iter().zip(&rhs.upper).map(|(a, b)| f(a, b)).collect() })
    }

    pub fn to_f64(&self) -> SymMatrix<f64> {
        self.map(|v| v.to_f64())
    }

    /// Trace of the product `self · rhs` (Frobenius pairing).
    pub fn trace_product(&self, rhs: &Self) -> Result<T> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: rhs.n });
        }
        let mut acc = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                acc = acc + self.get(i, j).clone() * rhs.get(i, j).clone();
            }
        }
        Ok(acc)
    }
}

impl SymMatrix<f64> {
    pub fn max_abs(&self) -> f64 {
        self.upper.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                s += self.get(i, j).powi(2);
            }
        }
        s.sqrt()
    }

    pub fn to_dense(&self) -> DMatrix {
        DMatrix::from_fn(self.n, self.n, |i, j| *self.get(i, j))
    }

    /// Symmetric part of a dense square matrix; fails if the asymmetry exceeds `tol`.
    pub fn from_dense(m: &DMatrix, tol: f64) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::DimensionMismatch { expected: m.rows, got: m.cols });
        }
        for i in 0..m.rows {
            for j in 0..i {
                if (m.get(i, j) - m.get(j, i)).abs() > tol {
                    return Err(Error::Precondition(format!("matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self::from_fn(m.rows, |i, j| 0.5 * (m.get(i, j) + m.get(j, i))))
    }

    /// `O^T S O` for an `n × k` matrix `O`.
    pub fn congruence(&self, o: &DMatrix) -> Self {
        assert_eq!(o.rows, self.n);
        let n = self.n;
        let k = o.cols;
        // so = S·O (n × k)
        let mut so = vec![0.0; n * k];
        for i in 0..n {
            for l in 0..n {
                let s = *self.get(i, l);
                if s == 0.0 {
                    continue;
                }
                let orow = &o.data[l * k..(l + 1) * k];
                let dst = &mut so[i * k..(i + 1) * k];
                for (d, ov) in dst.iter_mut().zip(orow) {
                    *d += s * ov;
                }
            }
        }
        Self::from_fn(k, |a, b| (0..n).map(|i| o.data[i * k + a] * so[i * k + b]).sum())
    }

    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                acc += v[i] * self.get(i, j) * v[j];
            }
        }
        acc
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }
}

impl<T: fmt::Debug> fmt::Debug for SymMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymMatrix({}×{})", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<&T> = (0..self.n).map(|j| &self.upper[packed_index(self.n, i, j)]).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

/// Row-major dense `f64` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl DMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_columns(cols: &[Vec<f64>]) -> Self {
        let rows = cols.first().map_or(0, Vec::len);
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i])
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, rhs: &DMatrix) -> DMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = DMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(l, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    /// `max |(A^T A - I)_{ij}|`
    pub fn orthogonality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..self.cols {
            for b in 0..self.cols {
                let dot: f64 = (0..self.rows).map(|i| self.get(i, a) * self.get(i, b)).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Orthonormal basis (as columns) of the orthogonal complement of `span(vs)` in `R^n`.
/// Linearly dependent inputs are tolerated.
pub fn orthonormal_complement(vs: &[Vec<f64>], n: usize) -> DMatrix {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    let add = |v: &[f64], basis: &mut Vec<Vec<f64>>, tol: f64| {
        let mut w = v.to_vec();
        let scale = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for b in basis.iter() {
                let dot: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
            }
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > tol * scale.max(f64::MIN_POSITIVE) {
            w.iter_mut().for_each(|x| *x /= norm);
            basis.push(w);
            true
        } else {
            false
        }
    };
    for v in vs {
        add(v, &mut basis, 1e-10);
    }
    let k = basis.len();
    let mut unit = vec![0.0; n];
    for i in 0..n {
        if basis.len() == n {
            break;
        }
        unit.fill(0.0);
        unit[i] = 1.0;
        // a coordinate vector whose residual is tiny would be badly conditioned
        add(&unit, &mut basis, 1e-3);
    }
    DMatrix::from_columns(&basis[k..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_is_orthonormal_and_orthogonal() {
        let a = vec![1.0, 2.0, 0.0, -1.0, 0.5];
        let b = vec![0.0, 1.0, 1.0, 0.0, 0.0];
        let q = orthonormal_complement(&[a.clone(), b.clone(), a.iter().map(|x| 2.0 * x).collect()], 5);
        assert_eq!(q.cols, 3);
        assert!(q.orthogonality_defect() < 1e-14);
        for j in 0..3 {
            let c = q.column(j);
            for v in [&a, &b] {
                assert!(c.iter().zip(v.iter()).map(|(x, y)| x * y).sum::<f64>().abs() < 1e-14);
            }
        }
    }

    #[test]
    fn packed_storage_is_symmetric() {
        let m = SymMatrix::from_fn(4, |i, j| (10 * i + j) as f64);
        assert_eq!(*m.get(1, 3), 13.0);
        assert_eq!(*m.get(3, 1), 13.0);
        assert_eq!(m.trace(), 0.0 + 11.0 + 22.0 + 33.0);
    }

    #[test]
    fn congruence_matches_dense_product() {
        let s = SymMatrix::from_fn(3, |i, j| 1.0 + i as f64 * 2.0 - j as f64 * 0.5);
        let o = DMatrix::from_fn(3, 2, |i, j| (i + 2 * j) as f64 * 0.3 - 0.1);
        let dense = o.transpose().mul(&s.to_dense()).mul(&o);
        let c = s.congruence(&o);
        for i in 0..2 {
            for j in 0..2 {
                assert!((c.get(i, j) - dense.get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn from_dense_rejects_asymmetric() {
        let mut d = DMatrix::identity(3);
        d.set(0, 2, 1.0);
        assert!(SymMatrix::from_dense(&d, 1e-12).is_err());
    }
}
