//! Shared brute-force oracles for the integration and acceptance suites.
//!
//! Everything here recomputes results along routes that are independent of
//! the solver paths under test: a cyclic Jacobi eigensolver, a from-scratch
//! dense stationary-distribution iteration, and a quadruple-loop Kronecker
//! product. The eigensolver asserts its own residual so a broken oracle
//! fails loudly instead of blessing wrong answers.

#![allow(dead_code)]

use num_complex::Complex64;
use qswrank_core::matrix::CMatrix;
use qswrank_core::net::Network;
use qswrank_core::synth::SplitMix64;

pub type C64 = Complex64;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense A ⊗ B by four nested loops.
pub fn dense_kron(a: &CMatrix<f64>, b: &CMatrix<f64>) -> CMatrix<f64> {
    let (p, m) = (a.n(), b.n());
    let dim = p * m;
    let mut out = CMatrix::zeros(dim, dim);
    for ai in 0..p {
        for aj in 0..p {
            for bi in 0..m {
                for bj in 0..m {
                    out.set(ai * m + bi, aj * m + bj, a.get(ai, aj) * b.get(bi, bj));
                }
            }
        }
    }
    out
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns (eigenvalues, eigenvectors-as-columns) and asserts the residual
/// ‖A·V − V·Λ‖∞ stays below 1e-10.
pub fn jacobi_hermitian(a: &CMatrix<f64>) -> (Vec<f64>, CMatrix<f64>) {
    let n = a.n();
    let mut m = a.clone();
    let mut v = CMatrix::<f64>::identity(n);
    let scale = a.frobenius_norm().max(1e-300);

    for _sweep in 0..200 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m.get(p, q).norm_sqr();
            }
        }
        if off.sqrt() < 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = m.get(p, q);
                let abs_b = beta.norm();
                if abs_b < 1e-300 {
                    continue;
                }
                let phase = beta / abs_b; // e^{iφ}
                let alpha = m.get(p, p).re;
                let gamma = m.get(q, q).re;
                let tau = (gamma - alpha) / (2.0 * abs_b);
                // small-magnitude root of t² − 2τt − 1 = 0
                let t = if tau == 0.0 {
                    1.0
                } else {
                    -tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let cth = 1.0 / (1.0 + t * t).sqrt();
                let sth = t * cth;

                // block of J = diag(1, conj(phase)) · [[c, −s],[s, c]]
                let jpp = c(cth, 0.0);
                let jpq = c(-sth, 0.0);
                let jqp = phase.conj() * sth;
                let jqq = phase.conj() * cth;

                // columns: A ← A·J
                for k in 0..n {
                    let akp = m.get(k, p);
                    let akq = m.get(k, q);
                    m.set(k, p, akp * jpp + akq * jqp);
                    m.set(k, q, akp * jpq + akq * jqq);
                }
                // rows: A ← J†·A
                for k in 0..n {
                    let apk = m.get(p, k);
                    let aqk = m.get(q, k);
                    m.set(p, k, apk * jpp.conj() + aqk * jqp.conj());
                    m.set(q, k, apk * jpq.conj() + aqk * jqq.conj());
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * jpp + vkq * jqp);
                    v.set(k, q, vkp * jpq + vkq * jqq);
                }
            }
        }
    }

    let eigenvalues: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();

    // self-check: A·V ≈ V·Λ
    let av = a.matmul(&v);
    let mut lam = CMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        lam.set(i, i, c(eigenvalues[i], 0.0));
    }
    let vl = v.matmul(&lam);
    let resid = av.max_abs_diff(&vl);
    assert!(resid < 1e-10 * scale.max(1.0), "jacobi residual {resid}");

    (eigenvalues, v)
}

/// Unitary propagator exp(−i·H·t) of a real symmetric H via the Jacobi
/// eigendecomposition: V · diag(e^{−iλt}) · V†.
pub fn unitary_propagator(h: &CMatrix<f64>, t: f64) -> CMatrix<f64> {
    let (lambda, v) = jacobi_hermitian(h);
    let n = h.n();
    let mut phase = CMatrix::<f64>::zeros(n, n);
    for (i, &l) in lambda.iter().enumerate() {
        phase.set(i, i, C64::from_polar(1.0, -l * t));
    }
    v.matmul(&phase).matmul(&v.conj_transpose())
}

/// Stationary distribution of the damped walk rates, rebuilt from the edge
/// list without the operators module: normalize columns, patch dangling
/// columns uniformly, mix with the uniform hopping weight, and iterate
/// p ← ¼p + ¾Gp until max|Gp − p| ≤ 1e-13.
pub fn reference_pagerank(net: &Network, q: f64) -> Vec<f64> {
    let n = net.n();
    let mut deg = vec![0usize; n];
    for &(s, _) in net.edges() {
        deg[s] += 1;
    }
    let hop = 1.0 / (n - 1) as f64;
    let mut g = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let w = if deg[j] == 0 { hop } else { 0.0 };
            g[i * n + j] = q * w + (1.0 - q) * hop;
        }
    }
    for &(s, d) in net.edges() {
        g[d * n + s] += q / deg[s] as f64;
    }

    let mut p = vec![1.0 / n as f64; n];
    for _ in 0..2_000_000 {
        let mut gp = vec![0.0f64; n];
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += g[i * n + j] * p[j];
            }
            gp[i] = acc;
        }
        let residual = gp.iter().zip(&p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if residual <= 1e-13 {
            let sum: f64 = p.iter().sum();
            return p.into_iter().map(|v| v / sum).collect();
        }
        for i in 0..n {
            p[i] = 0.25 * p[i] + 0.75 * gp[i];
        }
    }
    panic!("reference stationary iteration did not converge");
}

/// Random Hermitian, positive semidefinite, unit-trace state.
pub fn random_density(rng: &mut SplitMix64, n: usize) -> CMatrix<f64> {
    let a = CMatrix::from_fn(n, n, |_, _| c(rng.next_f64() - 0.5, rng.next_f64() - 0.5));
    let prod = a.matmul(&a.conj_transpose());
    let tr = prod.trace().re;
    prod.scale(c(1.0 / tr, 0.0))
}

/// Random Hermitian matrix (not necessarily positive or unit-trace).
pub fn random_hermitian(rng: &mut SplitMix64, n: usize) -> CMatrix<f64> {
    let a = CMatrix::from_fn(n, n, |_, _| c(rng.next_f64() - 0.5, rng.next_f64() - 0.5));
    a.add(&a.conj_transpose()).scale(c(0.5, 0.0))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(a: &CMatrix<f64>) -> f64 {
    let (lambda, _) = jacobi_hermitian(a);
    lambda.into_iter().fold(f64::INFINITY, f64::min)
}

/// Least-squares slope of ln(y) against ln(x).
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
