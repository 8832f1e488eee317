//! Dense complex matrices in row-major order.
//!
//! `CMatrix` is the workhorse container for density matrices, derivatives,
//! propagators and the small-N dense superoperator. Entrywise operations are
//! data-parallel over rows; every output element is produced by exactly one
//! worker from a fixed-order expression, so results are bitwise independent
//! of the worker count.

use num_complex::Complex;
use rayon::prelude::*;

use crate::scalar::Scalar;

/// Row split below which parallel dispatch is not worth the overhead.
const PAR_MIN_LEN: usize = 4096;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::new(T::zero(), T::zero()); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from a row-major buffer; length must equal rows·cols.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Self {
        assert_eq!(data.len(), rows * cols, "buffer length must match dimensions");
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Dimension of a square matrix.
    pub fn n(&self) -> usize {
        debug_assert_eq!(self.rows, self.cols);
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        let data = self.data.iter().map(|&z| z * c).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale_in_place(&mut self, c: Complex<T>) {
        for z in &mut self.data {
            *z *= c;
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// self + Σ cᵢ·mᵢ, entrywise, parallel over rows for large matrices.
    pub fn add_scaled(&self, terms: &[(T, &Self)]) -> Self {
        for (_, m) in terms {
            assert_eq!((self.rows, self.cols), (m.rows, m.cols));
        }
        let mut out = self.clone();
        let cols = self.cols;
        let apply = |(start, chunk): (usize, &mut [Complex<T>])| {
            for (off, z) in chunk.iter_mut().enumerate() {
                let idx = start + off;
                let mut acc = *z;
                for &(c, m) in terms {
                    acc += m.data[idx] * Complex::new(c, T::zero());
                }
                *z = acc;
            }
        };
        if self.data.len() >= PAR_MIN_LEN {
            out.data
                .par_chunks_mut(cols)
                .enumerate()
                .for_each(|(r, chunk)| apply((r * cols, chunk)));
        } else {
            apply((0, &mut out.data));
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.data[i * self.cols + i]).fold(
            Complex::new(T::zero(), T::zero()),
            |acc, z| acc + z,
        )
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.data[i * self.cols + i]).collect()
    }

    /// Frobenius norm. Sequential reduction in a fixed order.
    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt()
    }

    /// Largest entrywise modulus of self − other.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// max |m[i][j] − conj(m[j][i])| over all entries.
    pub fn hermiticity_defect(&self) -> T {
        debug_assert!(self.is_square());
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// General dense product; oracle-scale only (no blocking, sequential).
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.norm_sqr() == T::zero() {
                    continue;
                }
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &x)| a * x)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
            })
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<T: Scalar> std::ops::Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> std::ops::IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matmul_against_hand_product() {
        let a = CMatrix::from_fn(2, 2, |i, j| c((2 * i + j) as f64 + 1.0, 0.0));
        let b = CMatrix::from_fn(2, 2, |i, j| c(if i == j { 0.0 } else { 1.0 }, 0.0));
        let ab = a.matmul(&b);
        // [[1,2],[3,4]] * [[0,1],[1,0]] = [[2,1],[4,3]]
        assert_eq!(ab.get(0, 0), c(2.0, 0.0));
        assert_eq!(ab.get(0, 1), c(1.0, 0.0));
        assert_eq!(ab.get(1, 0), c(4.0, 0.0));
        assert_eq!(ab.get(1, 1), c(3.0, 0.0));
    }

    #[test]
    fn conj_transpose_and_hermiticity() {
        let mut m = CMatrix::<f64>::zeros(2, 2);
        m.set(0, 1, c(1.0, 2.0));
        m.set(1, 0, c(1.0, -2.0));
        assert_eq!(m.hermiticity_defect(), 0.0);
        let t = m.conj_transpose();
        assert_eq!(t.get(0, 1), c(1.0, 2.0));
    }

    #[test]
    fn add_scaled_matches_sequential_reference() {
        let a = CMatrix::from_fn(17, 17, |i, j| c(i as f64, j as f64));
        let b = CMatrix::from_fn(17, 17, |i, j| c(j as f64, -(i as f64)));
        let got = a.add_scaled(&[(2.0, &b), (-0.5, &a)]);
        for i in 0..17 {
            for j in 0..17 {
                let want = a.get(i, j) + b.get(i, j) * 2.0 - a.get(i, j) * 0.5;
                assert!((got.get(i, j) - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn trace_and_frobenius() {
        let m = CMatrix::from_fn(3, 3, |i, j| if i == j { c(1.0, 1.0) } else { c(0.0, 0.0) });
        assert_eq!(m.trace(), c(3.0, 3.0));
        assert!((m.frobenius_norm() - (6.0_f64).sqrt()).abs() < 1e-15);
    }
}
