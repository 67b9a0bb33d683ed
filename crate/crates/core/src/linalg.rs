//! Small dense matrices: products, LU determinants and a one-sided Jacobi SVD.
//!
//! Every system in this crate is at most a few dozen unknowns, so the
//! routines favour accuracy and simplicity over blocking or BLAS.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::scalar::Real;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row arrays. Panics on ragged input.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Self { rows: rows.len(), cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        let c = self.cols;
        &mut self.data[i * c..(i + 1) * c]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + rhs[(i, j)])
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - rhs[(i, j)])
    }

    pub fn scale(&self, s: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * s).collect() }
    }

    /// Horizontal concatenation `(self | rhs)`.
    pub fn hcat(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows);
        Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                rhs[(i, j - self.cols)]
            }
        })
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    pub fn row_norm(&self, i: usize) -> T {
        self.row(i).iter().map(|&x| x * x).sum::<T>().sqrt()
    }

    /// Divides each row by its Euclidean norm.
    ///
    /// Returns the indices of rows whose norm is at most `floor`; those rows
    /// are left untouched.
    pub fn normalize_rows(&mut self, floor: T) -> Vec<usize> {
        let mut degenerate = Vec::new();
        for i in 0..self.rows {
            let n = self.row_norm(i);
            if n <= floor {
                degenerate.push(i);
                continue;
            }
            for x in self.row_mut(i) {
                *x = *x / n;
            }
        }
        degenerate
    }

    /// Determinant by LU factorisation with partial pivoting.
    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = T::one();
        for col in 0..n {
            let mut piv = col;
            let mut best = a[col * n + col].abs();
            for r in col + 1..n {
                let v = a[r * n + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == T::zero() {
                return T::zero();
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det = det * p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                if f == T::zero() {
                    continue;
                }
                for j in col + 1..n {
                    a[r * n + j] = a[r * n + j] - f * a[col * n + j];
                }
            }
        }
        det
    }

    /// Singular value decomposition by one-sided (Hestenes) Jacobi rotations.
    pub fn svd(&self) -> Svd<T> {
        jacobi_svd(self)
    }

    /// Number of singular values above `rel_tol` times the largest one.
    pub fn numerical_rank(&self, rel_tol: T) -> usize {
        self.svd().rank(rel_tol)
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

/// Singular values (descending) and the matching right singular vectors.
#[derive(Clone, Debug)]
pub struct Svd<T> {
    pub singular_values: Vec<T>,
    /// Column `j` is the right singular vector for `singular_values[j]`.
    pub right: Mat<T>,
}

impl<T: Real> Svd<T> {
    pub fn largest(&self) -> T {
        self.singular_values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn smallest(&self) -> T {
        self.singular_values.last().copied().unwrap_or_else(T::zero)
    }

    pub fn rank(&self, rel_tol: T) -> usize {
        let cut = self.largest() * rel_tol;
        if self.largest() == T::zero() {
            return 0;
        }
        self.singular_values.iter().filter(|&&s| s > cut).count()
    }

    /// Orthonormal basis (Euclidean) of the numerical null space.
    pub fn null_space(&self, rel_tol: T) -> Vec<Vec<T>> {
        let r = self.rank(rel_tol);
        (r..self.singular_values.len()).map(|j| self.right.column(j)).collect()
    }
}

fn jacobi_svd<T: Real>(m: &Mat<T>) -> Svd<T> {
    let rows = m.rows();
    let n = m.cols();
    let mut w = m.clone();
    let mut v = Mat::<T>::identity(n);
    let eps = T::epsilon();

    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = T::zero();
                let mut beta = T::zero();
                let mut gamma = T::zero();
                for i in 0..rows {
                    let a = w[(i, p)];
                    let b = w[(i, q)];
                    alpha = alpha + a * a;
                    beta = beta + b * b;
                    gamma = gamma + a * b;
                }
                if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::two() * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let a = w[(i, p)];
                    let b = w[(i, q)];
                    w[(i, p)] = c * a - s * b;
                    w[(i, q)] = s * a + c * b;
                }
                for i in 0..n {
                    let a = v[(i, p)];
                    let b = v[(i, q)];
                    v[(i, p)] = c * a - s * b;
                    v[(i, q)] = s * a + c * b;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<T> = (0..n)
        .map(|j| (0..rows).map(|i| w[(i, j)] * w[(i, j)]).sum::<T>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap_or(std::cmp::Ordering::Equal));
    let singular_values = order.iter().map(|&j| norms[j]).collect();
    let right = Mat::from_fn(n, n, |i, j| v[(i, order[j])]);
    Svd { singular_values, right }
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_det(m: &Mat<f64>) -> f64 {
        // Leibniz expansion over all permutations.
        let n = m.rows();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0.0;
        permute(&mut perm, 0, &mut |p| {
            let mut sign = 1.0;
            for i in 0..n {
                for j in i + 1..n {
                    if p[i] > p[j] {
                        sign = -sign;
                    }
                }
            }
            total += sign * (0..n).map(|i| m[(i, p[i])]).product::<f64>();
        });
        total
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn determinant_matches_leibniz_expansion() {
        let m = Mat::from_rows(&[
            [2.0, -1.0, 0.5, 3.0],
            [0.0, 4.0, -2.0, 1.0],
            [1.5, 0.25, 1.0, -1.0],
            [-3.0, 2.0, 0.0, 0.75],
        ]);
        assert!((m.determinant() - brute_det(&m)).abs() < 1e-12);
        let singular = Mat::from_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        assert_eq!(singular.determinant(), 0.0);
    }

    #[test]
    fn svd_reconstructs_and_orders() {
        let m: Mat<f64> = Mat::from_rows(&[[3.0, 1.0, 0.0], [1.0, 3.0, 0.0], [0.0, 0.0, 0.5]]);
        let svd = m.svd();
        let expect = [4.0_f64, 2.0, 0.5];
        for (s, e) in svd.singular_values.iter().zip(expect) {
            assert!((s - e).abs() < 1e-13, "{s} vs {e}");
        }
        let vtv = svd.right.transpose().matmul(&svd.right);
        assert!(vtv.sub(&Mat::identity(3)).max_abs() < 1e-14);
    }

    #[test]
    fn rank_and_null_space_of_deficient_matrix() {
        let m: Mat<f64> = Mat::from_rows(&[
            [1.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 1.0],
            [1.0, 1.0, 1.0, 1.0],
            [0.0, 0.0, 0.0, 0.0],
        ]);
        let svd = m.svd();
        assert_eq!(svd.rank(1e-10), 2);
        let null = svd.null_space(1e-10);
        assert_eq!(null.len(), 2);
        for v in &null {
            let r = m.mul_vec(v);
            assert!(r.iter().all(|x: &f64| x.abs() < 1e-13));
        }
    }

    #[test]
    fn wide_matrix_rank() {
        let ab = Mat::from_rows(&[[0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 0.0]]);
        assert_eq!(ab.numerical_rank(1e-12), 1);
        assert_eq!(Mat::<f64>::zeros(3, 5).numerical_rank(1e-12), 0);
    }

    #[test]
    fn normalize_rows_reports_zero_rows() {
        let mut m: Mat<f64> = Mat::from_rows(&[[3.0, 4.0], [0.0, 0.0]]);
        let bad = m.normalize_rows(1e-300);
        assert_eq!(bad, vec![1]);
        assert!((m[(0, 0)] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn single_precision_determinant() {
        let m: Mat<f32> = Mat::from_rows(&[[1.0, 2.0], [3.0, 4.0]]);
        assert!((m.determinant() + 2.0).abs() < 1e-6);
    }
}
