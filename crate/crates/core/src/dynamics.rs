//! Lindblad dynamics of the quantum stochastic walk.
//!
//! The master equation evolved here is
//!
//! ```text
//! dρ/dt = −(1−ω)·i·[H, ρ] + ω·Σ_k ( L_k ρ L_k† − ½{L_k†L_k, ρ} )
//! ```
//!
//! with rank-one channels L_k = √w |i⟩⟨j|. For such channels the dissipator
//! collapses to closed form: the gain term Σ_k L_kρL_k† is the diagonal
//! matrix of W·diag(ρ) and Σ_k L_k†L_k is the diagonal of the per-source rate
//! sums. That identity is what lets [`lindblad_rhs`] and [`Liouvillian`]
//! evaluate the right-hand side without ever forming an N²×N² object.
//!
//! Two independent routes compute the same derivative:
//!
//! * [`Liouvillian`] — the production path. Keeps the rate matrix in sparse
//!   form plus the rank-structured uniform-hopping part, so one evaluation
//!   costs O((E+N)·N) time and O(N²) memory; O(N²) time for bounded-degree
//!   graphs.
//! * [`lindblad_rhs`] — the dense reference route over the explicit
//!   [`Hamiltonian`] and channel list (the commutator costs O(N³)).
//! * [`dense_superoperator`] — the explicit N²×N² matrix acting on the
//!   row-major vectorization, guarded to small N; the test oracle both
//!   routes are checked against.

use num_complex::Complex;
use rayon::prelude::*;
use thiserror::Error;

use crate::matrix::CMatrix;
use crate::net::Network;
use crate::operators::{Hamiltonian, LindbladChannels, OperatorError, WalkParameters};
use crate::scalar::Scalar;
use crate::sparse::Csr;

/// Default dimension cap for the dense superoperator (≈ 41 MiB at the cap).
pub const DENSE_GUARD_DEFAULT: usize = 40;

/// Dimension cap for [`expm`]; reference propagators only.
pub const EXPM_MAX_DIM: usize = 256;

/// Row split below which the assembly loop stays sequential.
const PAR_MIN_DIM: usize = 64;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("omega={0} outside [0,1]")]
    InvalidOmega(f64),
    #[error(
        "dense superoperator for n={n} would hold 2·n⁴ ≈ {scalars:.2e} scalars \
         (~{mib:.0} MiB); refusing above the guard limit {guard}"
    )]
    GuardExceeded { n: usize, guard: usize, scalars: f64, mib: f64 },
    #[error("matrix exponential limited to dimension {max}, got {dim}")]
    ExpmTooLarge { dim: usize, max: usize },
    #[error("index ({i},{j}) out of range for a {dim}×{dim} Kronecker product")]
    IndexOutOfRange { i: usize, j: usize, dim: usize },
    #[error("vector length {0} is not a perfect square")]
    NotSquare(usize),
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
}

/// Complex Hermitian state with unit trace; the diagonal holds the node
/// occupation probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    mat: CMatrix<T>,
}

impl<T: Scalar> DensityMatrix<T> {
    /// The uniform classical mixture I/n.
    pub fn maximally_mixed(n: usize) -> Self {
        let inv = T::one() / T::of_usize(n);
        let mut mat = CMatrix::zeros(n, n);
        for i in 0..n {
            mat.set(i, i, Complex::new(inv, T::zero()));
        }
        Self { mat }
    }

    /// The uniform coherent superposition |s⟩⟨s|, every entry 1/n.
    pub fn uniform_superposition(n: usize) -> Self {
        let inv = T::one() / T::of_usize(n);
        let mat = CMatrix::from_fn(n, n, |_, _| Complex::new(inv, T::zero()));
        Self { mat }
    }

    /// Validates Hermiticity (within 1e-12) and unit trace (within 1e-10).
    pub fn from_matrix(mat: CMatrix<T>) -> Result<Self, DynamicsError> {
        if !mat.is_square() {
            return Err(DynamicsError::InvalidDensity("matrix is not square".into()));
        }
        let herm = mat.hermiticity_defect();
        if herm > T::lit(1e-12) {
            return Err(DynamicsError::InvalidDensity(format!(
                "hermiticity defect {herm} exceeds 1e-12"
            )));
        }
        let tr = mat.trace();
        let drift = (tr - Complex::new(T::one(), T::zero())).norm();
        if drift > T::lit(1e-10) {
            return Err(DynamicsError::InvalidDensity(format!(
                "trace {tr} differs from 1 by {drift} (> 1e-10)"
            )));
        }
        Ok(Self { mat })
    }

    /// Wraps a matrix the caller already knows is a valid state (integration
    /// output; invariants are asserted in tests rather than per call).
    pub fn from_matrix_unchecked(mat: CMatrix<T>) -> Self {
        debug_assert!(mat.is_square());
        Self { mat }
    }

    pub fn n(&self) -> usize {
        self.mat.n()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.mat
    }

    /// Real parts of the diagonal: the occupation probabilities.
    pub fn occupation_probabilities(&self) -> Vec<T> {
        self.mat.diagonal().into_iter().map(|z| z.re).collect()
    }
}

/// Row-major flattening of a square matrix.
pub fn vectorize<T: Scalar>(m: &CMatrix<T>) -> Vec<Complex<T>> {
    debug_assert!(m.is_square());
    m.data().to_vec()
}

/// Inverse of [`vectorize`]; the length must be a perfect square.
pub fn devectorize<T: Scalar>(v: &[Complex<T>]) -> Result<CMatrix<T>, DynamicsError> {
    let n = (v.len() as f64).sqrt().round() as usize;
    if n * n != v.len() {
        return Err(DynamicsError::NotSquare(v.len()));
    }
    Ok(CMatrix::from_vec(n, n, v.to_vec()))
}

/// One element of A ⊗ B without forming the product.
///
/// A is p×p, B is m×m; `i`, `j` are 0-based indices into the (p·m)×(p·m)
/// product: the element is `A[i/m][j/m] · B[i%m][j%m]`.
pub fn kron_element<T: Scalar>(
    a: &CMatrix<T>,
    b: &CMatrix<T>,
    i: usize,
    j: usize,
) -> Result<Complex<T>, DynamicsError> {
    debug_assert!(a.is_square() && b.is_square());
    let m = b.n();
    let dim = a.n() * m;
    if i >= dim || j >= dim {
        return Err(DynamicsError::IndexOutOfRange { i, j, dim });
    }
    Ok(a.get(i / m, j / m) * b.get(i % m, j % m))
}

/// Dense A ⊗ B assembled element by element; oracle-scale only.
pub fn kron<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    let dim = a.n() * b.n();
    CMatrix::from_fn(dim, dim, |i, j| {
        kron_element(a, b, i, j).expect("indices generated in range")
    })
}

/// Lindblad right-hand side over the explicit dense operators.
///
/// Returns dρ/dt = −(1−ω)·i·(Hρ − ρH) + ω·(Γ(ρ) − ½(Sρ + ρS)) where Γ is the
/// diagonal gain matrix of the channel rates applied to diag(ρ) and S is the
/// diagonal of the cached per-source rate sums. Never forms an N²×N² object;
/// the dense commutator makes a call O(N³) time, O(N²) memory.
pub fn lindblad_rhs<T: Scalar>(
    h: &Hamiltonian<T>,
    channels: &LindbladChannels<T>,
    omega: T,
    rho: &CMatrix<T>,
) -> Result<CMatrix<T>, DynamicsError> {
    let n = h.n();
    if rho.rows() != n || rho.cols() != n {
        return Err(DynamicsError::DimensionMismatch(n, rho.rows()));
    }
    if channels.n() != n {
        return Err(DynamicsError::DimensionMismatch(n, channels.n()));
    }
    if omega < T::zero() || omega > T::one() || !omega.is_finite() {
        return Err(DynamicsError::InvalidOmega(omega.to_f64().unwrap_or(f64::NAN)));
    }

    let h_rho = real_left_mul(h, rho);
    let rho_h = real_right_mul(h, rho);

    // gain: Γ_i = Σ_(i,j,w) w·ρ[j][j]
    let diag = rho.diagonal();
    let mut gain = vec![Complex::new(T::zero(), T::zero()); n];
    for ch in channels.channels() {
        gain[ch.target] += diag[ch.source] * ch.rate;
    }
    let s = channels.col_sums();

    let iu = Complex::new(T::zero(), T::one() - omega);
    let half = T::lit(0.5);
    let out = CMatrix::from_fn(n, n, |i, j| {
        let comm = h_rho.get(i, j) - rho_h.get(i, j);
        let loss = rho.get(i, j) * (half * (s[i] + s[j]));
        let mut v = -iu * comm - loss * omega;
        if i == j {
            v += gain[i] * omega;
        }
        v
    });
    Ok(out)
}

/// H·X for real H and complex X, parallel over output rows.
fn real_left_mul<T: Scalar>(h: &Hamiltonian<T>, x: &CMatrix<T>) -> CMatrix<T> {
    let n = h.n();
    let mut out = CMatrix::zeros(n, n);
    let fill = |i: usize, orow: &mut [Complex<T>]| {
        let hrow = h.row(i);
        for (k, &hv) in hrow.iter().enumerate() {
            if hv == T::zero() {
                continue;
            }
            for (o, &xv) in orow.iter_mut().zip(x.row(k)) {
                *o += xv * hv;
            }
        }
    };
    if n >= PAR_MIN_DIM {
        out.data_mut().par_chunks_mut(n).enumerate().for_each(|(i, row)| fill(i, row));
    } else {
        let mut buf = vec![Complex::new(T::zero(), T::zero()); n];
        for i in 0..n {
            buf.iter_mut().for_each(|z| *z = Complex::new(T::zero(), T::zero()));
            fill(i, &mut buf);
            for (j, &v) in buf.iter().enumerate() {
                out.set(i, j, v);
            }
        }
    }
    out
}

/// X·H for real H and complex X, parallel over output rows.
fn real_right_mul<T: Scalar>(h: &Hamiltonian<T>, x: &CMatrix<T>) -> CMatrix<T> {
    let n = h.n();
    let mut out = CMatrix::zeros(n, n);
    let fill = |i: usize, orow: &mut [Complex<T>]| {
        let xrow = x.row(i);
        for (k, &xv) in xrow.iter().enumerate() {
            let hrow = h.row(k);
            for (o, &hv) in orow.iter_mut().zip(hrow) {
                if hv != T::zero() {
                    *o += xv * hv;
                }
            }
        }
    };
    if n >= PAR_MIN_DIM {
        out.data_mut().par_chunks_mut(n).enumerate().for_each(|(i, row)| fill(i, row));
    } else {
        let mut buf = vec![Complex::new(T::zero(), T::zero()); n];
        for i in 0..n {
            buf.iter_mut().for_each(|z| *z = Complex::new(T::zero(), T::zero()));
            fill(i, &mut buf);
            for (j, &v) in buf.iter().enumerate() {
                out.set(i, j, v);
            }
        }
    }
    out
}

/// Matrix-free generator of the walk dynamics.
///
/// Holds the normalized transition rates in sparse form; the uniform-hopping
/// admixture and the dangling-column patch enter through closed-form
/// broadcasts instead of dense storage. One [`Liouvillian::apply`] costs
/// O((E+N)·N) time and O(N²) auxiliary memory, so for bounded-degree graphs
/// the evaluation is O(N²).
#[derive(Debug, Clone)]
pub struct Liouvillian<T> {
    n: usize,
    omega: T,
    q: T,
    /// Uniform hopping weight 1/(n−1).
    hop: T,
    /// Normalized, dangling-patched transition rates (sparse).
    rates: Csr<T>,
    /// max(rates[i][j], rates[j][i]) — the sparse part of the symmetrized
    /// Hamiltonian couplings.
    coupling: Csr<T>,
    /// Per-source sums of the mixed rates (column sums of q·W + (1−q)·F).
    source_sums: Vec<T>,
}

impl<T: Scalar> Liouvillian<T> {
    pub fn new(net: &Network, params: &WalkParameters<T>) -> Result<Self, OperatorError> {
        params.validate()?;
        let n = net.n();
        if n < 2 {
            return Err(OperatorError::TooSmall(n));
        }
        let deg = net.out_degrees();
        let hop = T::one() / T::of_usize(n - 1);
        let mut triplets: Vec<(usize, usize, T)> = Vec::with_capacity(net.edges().len());
        for &(src, dst) in net.edges() {
            triplets.push((dst, src, T::one() / T::of_usize(deg[src])));
        }
        for (j, &d) in deg.iter().enumerate() {
            if d == 0 {
                for i in 0..n {
                    if i != j {
                        triplets.push((i, j, hop));
                    }
                }
            }
        }
        let rates = Csr::from_triplets(n, triplets);
        let coupling = rates.max_symmetrize();
        let w_sums = rates.col_sums();
        let uniform_sum = hop * T::of_usize(n - 1);
        let source_sums = w_sums
            .iter()
            .map(|&s| params.q * s + (T::one() - params.q) * uniform_sum)
            .collect();
        Ok(Self { n, omega: params.omega, q: params.q, hop, rates, coupling, source_sums })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    /// dρ/dt for the current parameters. Panics on dimension mismatch.
    pub fn apply(&self, x: &CMatrix<T>) -> CMatrix<T> {
        let n = self.n;
        assert_eq!(x.rows(), n, "state dimension mismatch");
        assert_eq!(x.cols(), n, "state dimension mismatch");

        let cx = self.coupling.left_mul(x);
        let xc = self.coupling.right_mul(x);

        let zero = Complex::new(T::zero(), T::zero());
        let mut col_sums = vec![zero; n];
        let mut row_sums = vec![zero; n];
        for i in 0..n {
            let row = x.row(i);
            let mut rs = zero;
            for (j, &v) in row.iter().enumerate() {
                rs += v;
                col_sums[j] += v;
            }
            row_sums[i] = rs;
        }

        let diag = x.diagonal();
        let diag_total = diag.iter().fold(zero, |a, &b| a + b);
        let w_diag = self.rates.matvec(&diag);
        let one_minus_q_hop = (T::one() - self.q) * self.hop;
        let gain: Vec<Complex<T>> = (0..n)
            .map(|i| w_diag[i] * self.q + (diag_total - diag[i]) * one_minus_q_hop)
            .collect();

        let iu = Complex::new(T::zero(), T::one() - self.omega);
        let omega = self.omega;
        let q = self.q;
        let half = T::lit(0.5);
        let s = &self.source_sums;

        let mut out = CMatrix::zeros(n, n);
        let fill = |i: usize, orow: &mut [Complex<T>]| {
            let xrow = x.row(i);
            let cxrow = cx.row(i);
            let xcrow = xc.row(i);
            let rs_i = row_sums[i];
            let s_i = s[i];
            for j in 0..n {
                let coherent = (cxrow[j] - xcrow[j]) * q
                    + (col_sums[j] - rs_i) * one_minus_q_hop
                    + xrow[j] * (s_i - s[j]);
                let mut v = iu * coherent - xrow[j] * (omega * half * (s_i + s[j]));
                if i == j {
                    v += gain[i] * omega;
                }
                orow[j] = v;
            }
        };
        if n >= PAR_MIN_DIM {
            out.data_mut().par_chunks_mut(n).enumerate().for_each(|(i, row)| fill(i, row));
        } else {
            let mut buf = vec![zero; n];
            for i in 0..n {
                fill(i, &mut buf);
                for (j, &v) in buf.iter().enumerate() {
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Closure view of [`Liouvillian::apply`] for the integrator.
    pub fn rhs_fn(&self) -> impl Fn(&CMatrix<T>) -> CMatrix<T> + Sync + '_ {
        move |x| self.apply(x)
    }
}

/// Explicit superoperator on row-major vectorized states.
#[derive(Debug, Clone)]
pub struct DenseSuperoperator<T> {
    n: usize,
    mat: CMatrix<T>,
}

impl<T: Scalar> DenseSuperoperator<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The n²×n² matrix itself.
    pub fn matrix(&self) -> &CMatrix<T> {
        &self.mat
    }

    pub fn apply_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        self.mat.matvec(v)
    }

    /// 𝓛 acting on a matrix state through vectorize/devectorize.
    pub fn apply_density(&self, x: &CMatrix<T>) -> CMatrix<T> {
        devectorize(&self.apply_vec(&vectorize(x))).expect("product length is n²")
    }
}

/// Builds the explicit superoperator; refuses above the guard limit.
///
/// Under the row-major vectorization used here, vec(AXB) = (A ⊗ Bᵀ)·vec(X),
/// so the commutator contributes −(1−ω)·i·(H⊗I − I⊗Hᵀ) and each rank-one
/// channel contributes its gain entry and two diagonal loss families.
pub fn dense_superoperator<T: Scalar>(
    h: &Hamiltonian<T>,
    channels: &LindbladChannels<T>,
    omega: T,
) -> Result<DenseSuperoperator<T>, DynamicsError> {
    dense_superoperator_with_guard(h, channels, omega, DENSE_GUARD_DEFAULT)
}

/// [`dense_superoperator`] with an explicit guard limit.
pub fn dense_superoperator_with_guard<T: Scalar>(
    h: &Hamiltonian<T>,
    channels: &LindbladChannels<T>,
    omega: T,
    guard: usize,
) -> Result<DenseSuperoperator<T>, DynamicsError> {
    let n = h.n();
    if n > guard {
        let scalars = 2.0 * (n as f64).powi(4);
        return Err(DynamicsError::GuardExceeded {
            n,
            guard,
            scalars,
            mib: scalars * 8.0 / (1024.0 * 1024.0),
        });
    }
    if channels.n() != n {
        return Err(DynamicsError::DimensionMismatch(n, channels.n()));
    }
    if omega < T::zero() || omega > T::one() || !omega.is_finite() {
        return Err(DynamicsError::InvalidOmega(omega.to_f64().unwrap_or(f64::NAN)));
    }

    let hc = CMatrix::from_fn(n, n, |i, j| Complex::new(h.get(i, j), T::zero()));
    let ht = CMatrix::from_fn(n, n, |i, j| Complex::new(h.get(j, i), T::zero()));
    let eye = CMatrix::identity(n);

    let commutator = kron(&hc, &eye).sub(&kron(&eye, &ht));
    let iu = Complex::new(T::zero(), -(T::one() - omega));
    let mut mat = commutator.scale(iu);

    let half = T::lit(0.5);
    for ch in channels.channels() {
        let (t, s, w) = (ch.target, ch.source, ch.rate);
        // gain  L ⊗ L*  →  single entry at ((t,t),(s,s))
        let g = mat.get(t * n + t, s * n + s) + Complex::new(omega * w, T::zero());
        mat.set(t * n + t, s * n + s, g);
        // loss  ½((L†L) ⊗ I + I ⊗ (L†L)ᵀ)  →  diagonal families
        let d = Complex::new(omega * w * half, T::zero());
        for b in 0..n {
            let r1 = s * n + b;
            mat.set(r1, r1, mat.get(r1, r1) - d);
            let r2 = b * n + s;
            mat.set(r2, r2, mat.get(r2, r2) - d);
        }
    }
    Ok(DenseSuperoperator { n, mat })
}

/// exp(A·t) by scaling and squaring with a Taylor series.
///
/// Reference-propagator use only; dimension capped at [`EXPM_MAX_DIM`].
pub fn expm<T: Scalar>(a: &CMatrix<T>, t: T) -> Result<CMatrix<T>, DynamicsError> {
    let dim = a.n();
    if dim > EXPM_MAX_DIM {
        return Err(DynamicsError::ExpmTooLarge { dim, max: EXPM_MAX_DIM });
    }
    let b = a.scale(Complex::new(t, T::zero()));
    // 1-norm: max column sum of moduli
    let mut norm1 = T::zero();
    for j in 0..dim {
        let mut col = T::zero();
        for i in 0..dim {
            col += b.get(i, j).norm();
        }
        norm1 = norm1.max(col);
    }
    let mut squarings = 0u32;
    let half = T::lit(0.5);
    let mut scale = T::one();
    while norm1 * scale > half && squarings < 64 {
        scale *= half;
        squarings += 1;
    }
    let c = b.scale(Complex::new(scale, T::zero()));

    let mut result = CMatrix::identity(dim);
    let mut term = CMatrix::identity(dim);
    for k in 1..=24usize {
        term = term.matmul(&c).scale(Complex::new(T::one() / T::of_usize(k), T::zero()));
        result = result.add(&term);
    }
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    Ok(result)
}
