//! Walk operators built from a directed network's adjacency structure.
//!
//! The pipeline is: binary adjacency → column-normalized transition rates
//! (dangling columns patched to the uniform hopping distribution) → damped
//! mix with the long-distance hopping matrix → symmetrized Hamiltonian for
//! the coherent part and one scattering channel per positive rate for the
//! dissipative part.
//!
//! Every step preserves column-stochasticity, so Σ_k L_k†L_k = I and the
//! walk conserves probability.

use thiserror::Error;

use crate::net::AdjacencyMatrix;
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error("network too small: need at least 2 nodes, got {0}")]
    TooSmall(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("parameter out of range: {0}")]
    InvalidParameter(String),
}

/// Interpolation and damping parameters of the walk.
///
/// `omega` weighs the dissipative part against the coherent part (1 = purely
/// classical, 0 = purely coherent). `q` is the damping of the mix with the
/// uniform hopping matrix. `c` is the hub-classification constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParameters<T> {
    pub omega: T,
    pub q: T,
    pub c: T,
}

impl<T: Scalar> Default for WalkParameters<T> {
    fn default() -> Self {
        Self { omega: T::lit(0.9), q: T::lit(0.9), c: T::lit(10.0) }
    }
}

impl<T: Scalar> WalkParameters<T> {
    pub fn validate(&self) -> Result<(), OperatorError> {
        let unit = |v: T, name: &str| {
            if v < T::zero() || v > T::one() || !v.is_finite() {
                Err(OperatorError::InvalidParameter(format!("{name}={v} not in [0,1]")))
            } else {
                Ok(())
            }
        };
        unit(self.omega, "omega")?;
        unit(self.q, "q")?;
        if self.c <= T::one() || !self.c.is_finite() {
            return Err(OperatorError::InvalidParameter(format!("c={} must exceed 1", self.c)));
        }
        Ok(())
    }
}

/// Column-stochastic nonnegative transition rates, zero diagonal.
/// `w[i][j]` is the rate from node j to node i.
#[derive(Debug, Clone, PartialEq)]
pub struct RateMatrix<T> {
    n: usize,
    w: Vec<T>,
}

impl<T: Scalar> RateMatrix<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.w[i * self.n + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.w
    }

    pub fn column_sums(&self) -> Vec<T> {
        let n = self.n;
        let mut sums = vec![T::zero(); n];
        for i in 0..n {
            for j in 0..n {
                sums[j] += self.w[i * n + j];
            }
        }
        sums
    }

    /// Checks nonnegativity, zero diagonal and column sums within `tol` of 1.
    pub fn validate(&self, tol: T) -> Result<(), OperatorError> {
        for i in 0..self.n {
            if self.get(i, i) != T::zero() {
                return Err(OperatorError::InvalidParameter(format!(
                    "nonzero diagonal at {i}"
                )));
            }
        }
        if self.w.iter().any(|&v| v < T::zero()) {
            return Err(OperatorError::InvalidParameter("negative rate".into()));
        }
        for (j, s) in self.column_sums().into_iter().enumerate() {
            if (s - T::one()).abs() > tol {
                return Err(OperatorError::InvalidParameter(format!(
                    "column {j} sums to {s}, expected 1"
                )));
            }
        }
        Ok(())
    }
}

/// Uniform long-distance hopping: 1/(n−1) off the diagonal, 0 on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoppingMatrix<T> {
    n: usize,
    off_diagonal: T,
}

impl<T: Scalar> HoppingMatrix<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        if i == j {
            T::zero()
        } else {
            self.off_diagonal
        }
    }

    pub fn off_diagonal(&self) -> T {
        self.off_diagonal
    }
}

/// Real symmetric coherent-hopping operator.
///
/// Off-diagonal entries are −max of the opposing rates, so the matrix is
/// symmetric by construction (bitwise, not just within tolerance). Diagonal
/// entries are minus the off-diagonal column sums of the rate matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian<T> {
    n: usize,
    h: Vec<T>,
}

impl<T: Scalar> Hamiltonian<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.h[i * self.n + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.h
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.h[i * self.n..(i + 1) * self.n]
    }

    /// Test/oracle constructor from raw entries.
    pub fn from_entries(n: usize, h: Vec<T>) -> Self {
        assert_eq!(h.len(), n * n);
        Self { n, h }
    }
}

/// One scattering channel per positive rate: √w |target⟩⟨source|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel<T> {
    pub target: usize,
    pub source: usize,
    pub rate: T,
}

/// Sparse channel set with cached per-source rate sums.
#[derive(Debug, Clone)]
pub struct LindbladChannels<T> {
    n: usize,
    channels: Vec<Channel<T>>,
    col_sums: Vec<T>,
}

impl<T: Scalar> LindbladChannels<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn channels(&self) -> &[Channel<T>] {
        &self.channels
    }

    /// Σ over channels with the given source node; equals the rate-matrix
    /// column sum.
    pub fn col_sums(&self) -> &[T] {
        &self.col_sums
    }
}

/// Column-normalized transition rates from binary adjacency.
///
/// Columns with outgoing connections are normalized by out-degree; dangling
/// columns are patched to the uniform distribution 1/(n−1) over the other
/// nodes, which keeps every column stochastic.
pub fn normalized_transition<T: Scalar>(
    a: &AdjacencyMatrix,
) -> Result<RateMatrix<T>, OperatorError> {
    let n = a.n();
    if n < 2 {
        return Err(OperatorError::TooSmall(n));
    }
    let deg = crate::net::out_degrees(a);
    let uniform = T::one() / T::of_usize(n - 1);
    let mut w = vec![T::zero(); n * n];
    for j in 0..n {
        if deg[j] > 0 {
            let inv = T::one() / T::of_usize(deg[j]);
            for i in 0..n {
                if a.get(i, j) != 0 {
                    w[i * n + j] = inv;
                }
            }
        } else {
            for i in 0..n {
                if i != j {
                    w[i * n + j] = uniform;
                }
            }
        }
    }
    Ok(RateMatrix { n, w })
}

/// The uniform hopping matrix for n nodes.
pub fn hopping_matrix<T: Scalar>(n: usize) -> Result<HoppingMatrix<T>, OperatorError> {
    if n < 2 {
        return Err(OperatorError::TooSmall(n));
    }
    Ok(HoppingMatrix { n, off_diagonal: T::one() / T::of_usize(n - 1) })
}

/// Damped mix q·W + (1−q)·F; stays column-stochastic for q in [0,1].
pub fn google_weights<T: Scalar>(
    w: &RateMatrix<T>,
    f: &HoppingMatrix<T>,
    q: T,
) -> Result<RateMatrix<T>, OperatorError> {
    if w.n != f.n() {
        return Err(OperatorError::DimensionMismatch(w.n, f.n()));
    }
    if q < T::zero() || q > T::one() || !q.is_finite() {
        return Err(OperatorError::InvalidParameter(format!("q={q} not in [0,1]")));
    }
    let n = w.n;
    let one_minus_q = T::one() - q;
    let mut mixed = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                mixed[i * n + j] = q * w.w[i * n + j] + one_minus_q * f.off_diagonal();
            }
        }
    }
    Ok(RateMatrix { n, w: mixed })
}

/// Symmetrized Hamiltonian of the mixed rates.
///
/// h[i][j] = −max(w[i][j], w[j][i]) off the diagonal; h[j][j] is minus the
/// off-diagonal column sum of the rates (−1 for column-stochastic input).
pub fn hamiltonian<T: Scalar>(w: &RateMatrix<T>) -> Hamiltonian<T> {
    let n = w.n;
    let mut h = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                h[i * n + j] = -w.w[i * n + j].max(w.w[j * n + i]);
            }
        }
    }
    for j in 0..n {
        let mut col = T::zero();
        for i in 0..n {
            if i != j {
                col += w.w[i * n + j];
            }
        }
        h[j * n + j] = -col;
    }
    Hamiltonian { n, h }
}

/// Enumerates one channel per strictly positive rate and caches the
/// per-source sums.
pub fn lindblad_channels<T: Scalar>(w: &RateMatrix<T>) -> LindbladChannels<T> {
    let n = w.n;
    let mut channels = Vec::new();
    let mut col_sums = vec![T::zero(); n];
    for i in 0..n {
        for j in 0..n {
            let rate = w.w[i * n + j];
            if rate > T::zero() {
                channels.push(Channel { target: i, source: j, rate });
                col_sums[j] += rate;
            }
        }
    }
    LindbladChannels { n, channels, col_sums }
}
