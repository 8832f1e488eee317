//! Minimal compressed-sparse-row matrices over real scalars.
//!
//! Only what the matrix-free Lindblad evaluation needs: construction from
//! triplets, column sums, max-symmetrization, and left/right products against
//! dense complex matrices. Products are parallel over output rows with
//! fixed-order inner reductions, so results do not depend on the worker count.

use num_complex::Complex;
use rayon::prelude::*;

use crate::matrix::CMatrix;
use crate::scalar::Scalar;

/// Minimum dimension before products dispatch to the thread pool.
const PAR_MIN_DIM: usize = 64;

/// Square sparse matrix in CSR form.
#[derive(Debug, Clone)]
pub struct Csr<T> {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> Csr<T> {
    /// Builds an n×n matrix from (row, col, value) triplets.
    ///
    /// Triplets are sorted internally; duplicate positions must not occur.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, T)>) -> Self {
        triplets.sort_by_key(|a| (a.0, a.1));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        for &(r, c, v) in &triplets {
            assert!(r < n && c < n, "triplet ({r},{c}) out of range for n={n}");
            row_ptr[r + 1] += 1;
            col_idx.push(c);
            values.push(v);
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        debug_assert!(
            col_idx.windows(2).enumerate().all(|(k, w)| {
                // within one row, columns strictly increase
                let row_of = |idx: usize| row_ptr.partition_point(|&p| p <= idx) - 1;
                row_of(k) != row_of(k + 1) || w[0] < w[1]
            }),
            "duplicate triplet position"
        );
        Self { n, row_ptr, col_idx, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[a..b], &self.values[a..b])
    }

    pub fn col_sums(&self) -> Vec<T> {
        let mut sums = vec![T::zero(); self.n];
        for (c, v) in self.col_idx.iter().zip(&self.values) {
            sums[*c] += *v;
        }
        sums
    }

    pub fn transpose(&self) -> Self {
        let mut triplets = Vec::with_capacity(self.nnz());
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                triplets.push((j, i, v));
            }
        }
        Self::from_triplets(self.n, triplets)
    }

    /// Entrywise max(self[i][j], self[j][i]) on the union pattern.
    pub fn max_symmetrize(&self) -> Self {
        let t = self.transpose();
        let mut triplets = Vec::with_capacity(2 * self.nnz());
        for i in 0..self.n {
            let (ca, va) = self.row(i);
            let (cb, vb) = t.row(i);
            let (mut p, mut q) = (0, 0);
            while p < ca.len() || q < cb.len() {
                let ja = ca.get(p).copied().unwrap_or(usize::MAX);
                let jb = cb.get(q).copied().unwrap_or(usize::MAX);
                if ja < jb {
                    triplets.push((i, ja, va[p]));
                    p += 1;
                } else if jb < ja {
                    triplets.push((i, jb, vb[q]));
                    q += 1;
                } else {
                    triplets.push((i, ja, va[p].max(vb[q])));
                    p += 1;
                    q += 1;
                }
            }
        }
        Self::from_triplets(self.n, triplets)
    }

    /// A·v for a complex vector v.
    pub fn matvec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let (cols, vals) = self.row(i);
                let mut acc = Complex::new(T::zero(), T::zero());
                for (&j, &a) in cols.iter().zip(vals) {
                    acc += v[j] * a;
                }
                acc
            })
            .collect()
    }

    /// out = A·X for a dense complex X; parallel over output rows.
    pub fn left_mul(&self, x: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(x.rows(), self.n, "dimension mismatch in sparse·dense");
        let n = self.n;
        let cols = x.cols();
        let mut out = CMatrix::zeros(n, cols);
        let fill = |i: usize, orow: &mut [Complex<T>]| {
            let (cidx, vals) = self.row(i);
            for (&k, &a) in cidx.iter().zip(vals) {
                let xrow = x.row(k);
                for (o, &xv) in orow.iter_mut().zip(xrow) {
                    *o += xv * a;
                }
            }
        };
        if n >= PAR_MIN_DIM {
            out.data_mut()
                .par_chunks_mut(cols)
                .enumerate()
                .for_each(|(i, orow)| fill(i, orow));
        } else {
            for i in 0..n {
                let mut row = vec![Complex::new(T::zero(), T::zero()); cols];
                fill(i, &mut row);
                for (j, v) in row.into_iter().enumerate() {
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// out = X·A for a dense complex X; parallel over output rows.
    pub fn right_mul(&self, x: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(x.cols(), self.n, "dimension mismatch in dense·sparse");
        let n = self.n;
        let rows = x.rows();
        let mut out = CMatrix::zeros(rows, n);
        let fill = |i: usize, orow: &mut [Complex<T>]| {
            let xrow = x.row(i);
            for (k, &xv) in xrow.iter().enumerate() {
                let (cidx, vals) = self.row(k);
                for (&j, &a) in cidx.iter().zip(vals) {
                    orow[j] += xv * a;
                }
            }
        };
        if rows >= PAR_MIN_DIM {
            out.data_mut()
                .par_chunks_mut(n)
                .enumerate()
                .for_each(|(i, orow)| fill(i, orow));
        } else {
            for i in 0..rows {
                let mut row = vec![Complex::new(T::zero(), T::zero()); n];
                fill(i, &mut row);
                for (j, v) in row.into_iter().enumerate() {
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Dense copy, for small-N comparisons.
    pub fn to_dense(&self) -> Vec<T> {
        let mut d = vec![T::zero(); self.n * self.n];
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                d[i * self.n + j] = v;
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn sample() -> Csr<f64> {
        // [[0, 2, 0], [1, 0, 0], [0, 3, 4]]
        Csr::from_triplets(3, vec![(0, 1, 2.0), (1, 0, 1.0), (2, 1, 3.0), (2, 2, 4.0)])
    }

    #[test]
    fn col_sums_match_dense() {
        assert_eq!(sample().col_sums(), vec![1.0, 5.0, 4.0]);
    }

    #[test]
    fn transpose_roundtrip() {
        let a = sample();
        let tt = a.transpose().transpose();
        assert_eq!(a.to_dense(), tt.to_dense());
    }

    #[test]
    fn max_symmetrize_takes_entrywise_max() {
        let s = sample().max_symmetrize();
        let d = s.to_dense();
        // max of [[0,2,0],[1,0,0],[0,3,4]] with its transpose
        assert_eq!(d, vec![0.0, 2.0, 0.0, 2.0, 0.0, 3.0, 0.0, 3.0, 4.0]);
    }

    #[test]
    fn left_and_right_products_match_dense_reference() {
        let a = sample();
        let x = CMatrix::from_fn(3, 3, |i, j| Complex64::new(i as f64 + 1.0, j as f64));
        let ax = a.left_mul(&x);
        let xa = a.right_mul(&x);
        let ad = a.to_dense();
        for i in 0..3 {
            for j in 0..3 {
                let mut want_l = Complex64::new(0.0, 0.0);
                let mut want_r = Complex64::new(0.0, 0.0);
                for k in 0..3 {
                    want_l += x.get(k, j) * ad[i * 3 + k];
                    want_r += x.get(i, k) * ad[k * 3 + j];
                }
                assert!((ax.get(i, j) - want_l).norm() < 1e-14);
                assert!((xa.get(i, j) - want_r).norm() < 1e-14);
            }
        }
    }
}
