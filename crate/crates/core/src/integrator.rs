//! Adaptive Fehlberg 4(5) time integration.
//!
//! Each step evaluates the six-stage Fehlberg tableau, forms the embedded
//! 4th- and 5th-order solutions, and accepts the step when the local error
//! ‖z₅ − y₄‖ stays below tol·h. Accepted steps propagate the 5th-order
//! solution. The step factor is safety·(tol·h/err)^¼ with safety ≈ 0.84,
//! clamped to the configured bounds; zero error resets to the maximum step.
//!
//! Evolution stops at a steady state (‖f(y)‖ below the threshold), at the
//! time horizon, or at the iteration guard. A step pinned at the minimum
//! size that keeps failing is reported as stiffness instead of looping
//! forever.

use num_traits::{Float, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::dynamics::DensityMatrix;
use crate::matrix::CMatrix;
use crate::scalar::Scalar;

/// Fehlberg 4(5) tableau. Stage weights for k₄/k₅ use the 4104 denominators
/// of the standard tableau.
mod tableau {
    pub const A21: f64 = 1.0 / 4.0;
    pub const A31: f64 = 3.0 / 32.0;
    pub const A32: f64 = 9.0 / 32.0;
    pub const A41: f64 = 1932.0 / 2197.0;
    pub const A42: f64 = -7200.0 / 2197.0;
    pub const A43: f64 = 7296.0 / 2197.0;
    pub const A51: f64 = 439.0 / 216.0;
    pub const A52: f64 = -8.0;
    pub const A53: f64 = 3680.0 / 513.0;
    pub const A54: f64 = -845.0 / 4104.0;
    pub const A61: f64 = -8.0 / 27.0;
    pub const A62: f64 = 2.0;
    pub const A63: f64 = -3544.0 / 2565.0;
    pub const A64: f64 = 1859.0 / 4104.0;
    pub const A65: f64 = -11.0 / 40.0;
    pub const B41: f64 = 25.0 / 216.0;
    pub const B43: f64 = 1408.0 / 2565.0;
    pub const B44: f64 = 2197.0 / 4104.0;
    pub const B45: f64 = -1.0 / 5.0;
    pub const B51: f64 = 16.0 / 135.0;
    pub const B53: f64 = 6656.0 / 12825.0;
    pub const B54: f64 = 28561.0 / 56430.0;
    pub const B55: f64 = -9.0 / 50.0;
    pub const B56: f64 = 2.0 / 55.0;
}

/// Consecutive failures at the minimum step before giving up as stiff.
const STIFF_LIMIT: usize = 100;

/// Trace drift above which an accepted state is renormalized.
const RENORM_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum IntegratorError {
    #[error("invalid integrator config: {0}")]
    InvalidConfig(String),
    #[error(
        "stiffness: step pinned at h_min={h:.3e} with local error {err:.3e} > tol·h \
         for {limit} consecutive attempts at t={t:.6}"
    )]
    Stiff { t: f64, h: f64, err: f64, limit: usize },
}

/// Step-size control and termination thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rkf45Config<T> {
    /// Per-step error tolerance; a step is accepted when err ≤ tol·h.
    pub tol: T,
    /// Initial step size.
    pub h0: T,
    pub h_min: T,
    pub h_max: T,
    /// Walk-time horizon.
    pub t_max: T,
    /// Step factor applied to (tol·h/err)^¼.
    pub safety: T,
    /// Steady-state threshold on ‖f(y)‖; zero disables the check.
    pub ss_eps: T,
    /// Attempt guard (accepted + rejected).
    pub max_steps: usize,
}

impl<T: Scalar> Default for Rkf45Config<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(1e-6),
            h0: T::lit(0.01),
            h_min: T::lit(1e-8),
            h_max: T::one(),
            t_max: T::lit(1000.0),
            safety: T::lit(0.84),
            ss_eps: T::lit(1e-8),
            max_steps: 10_000_000,
        }
    }
}

impl<T: Scalar> Rkf45Config<T> {
    pub fn validate(&self) -> Result<(), IntegratorError> {
        if !(self.h_min > T::zero() && self.h_min <= self.h0 && self.h0 <= self.h_max) {
            return Err(IntegratorError::InvalidConfig(format!(
                "need 0 < h_min ≤ h0 ≤ h_max, got h_min={} h0={} h_max={}",
                self.h_min, self.h0, self.h_max
            )));
        }
        if !(self.tol > T::zero()) {
            return Err(IntegratorError::InvalidConfig(format!("tol={} must be > 0", self.tol)));
        }
        if self.ss_eps < T::zero() {
            return Err(IntegratorError::InvalidConfig(format!(
                "ss_eps={} must be ≥ 0",
                self.ss_eps
            )));
        }
        if self.t_max < T::zero() {
            return Err(IntegratorError::InvalidConfig(format!(
                "t_max={} must be ≥ 0",
                self.t_max
            )));
        }
        if !(self.safety > T::zero() && self.safety <= T::one()) {
            return Err(IntegratorError::InvalidConfig(format!(
                "safety={} must be in (0,1]",
                self.safety
            )));
        }
        Ok(())
    }
}

/// State the tableau can integrate: linear combinations plus a norm.
pub trait RkState: Clone + Send + Sync {
    type Field: Scalar;

    /// self + Σ cᵢ·termᵢ.
    fn add_scaled(&self, terms: &[(Self::Field, &Self)]) -> Self;
    fn scaled(&self, c: Self::Field) -> Self;
    /// ‖self − other‖ (Frobenius for matrix states).
    fn diff_norm(&self, other: &Self) -> Self::Field;
    fn norm(&self) -> Self::Field;
    fn is_finite(&self) -> bool;
}

impl<T: Scalar> RkState for CMatrix<T> {
    type Field = T;

    fn add_scaled(&self, terms: &[(T, &Self)]) -> Self {
        CMatrix::add_scaled(self, terms)
    }

    fn scaled(&self, c: T) -> Self {
        self.scale(num_complex::Complex::new(c, T::zero()))
    }

    fn diff_norm(&self, other: &Self) -> T {
        self.sub(other).frobenius_norm()
    }

    fn norm(&self) -> T {
        self.frobenius_norm()
    }

    fn is_finite(&self) -> bool {
        CMatrix::is_finite(self)
    }
}

macro_rules! scalar_rk_state {
    ($t:ty) => {
        impl RkState for $t {
            type Field = $t;

            fn add_scaled(&self, terms: &[($t, &Self)]) -> Self {
                terms.iter().fold(*self, |acc, &(c, k)| acc + c * *k)
            }

            fn scaled(&self, c: $t) -> Self {
                self * c
            }

            fn diff_norm(&self, other: &Self) -> $t {
                (self - other).abs()
            }

            fn norm(&self) -> $t {
                self.abs()
            }

            fn is_finite(&self) -> bool {
                <$t>::is_finite(*self)
            }
        }
    };
}

scalar_rk_state!(f32);
scalar_rk_state!(f64);

/// Embedded solutions of one attempted step.
#[derive(Debug, Clone)]
pub struct RkStep<S: RkState> {
    /// 4th-order solution.
    pub y4: S,
    /// 5th-order solution (the one propagated on acceptance).
    pub z5: S,
    /// ‖z5 − y4‖.
    pub err: S::Field,
}

/// A stage produced a non-finite value; the caller halves the step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonFiniteStep;

/// One Fehlberg 4(5) step of size `h` from `y`.
pub fn rkf45_step<S, F>(f: &F, y: &S, h: S::Field) -> Result<RkStep<S>, NonFiniteStep>
where
    S: RkState,
    F: Fn(&S) -> S,
{
    let fy = f(y);
    rkf45_step_with(f, y, &fy, h)
}

/// [`rkf45_step`] reusing a precomputed f(y) as the first stage.
pub fn rkf45_step_with<S, F>(
    f: &F,
    y: &S,
    fy: &S,
    h: S::Field,
) -> Result<RkStep<S>, NonFiniteStep>
where
    S: RkState,
    F: Fn(&S) -> S,
{
    use tableau::*;
    type Fl<S> = <S as RkState>::Field;
    let lit = |v: f64| Fl::<S>::lit(v);

    let check = |k: &S| if k.is_finite() { Ok(()) } else { Err(NonFiniteStep) };

    let k1 = fy.scaled(h);
    check(&k1)?;
    let k2 = f(&y.add_scaled(&[(lit(A21), &k1)])).scaled(h);
    check(&k2)?;
    let k3 = f(&y.add_scaled(&[(lit(A31), &k1), (lit(A32), &k2)])).scaled(h);
    check(&k3)?;
    let k4 = f(&y.add_scaled(&[(lit(A41), &k1), (lit(A42), &k2), (lit(A43), &k3)])).scaled(h);
    check(&k4)?;
    let k5 = f(&y.add_scaled(&[
        (lit(A51), &k1),
        (lit(A52), &k2),
        (lit(A53), &k3),
        (lit(A54), &k4),
    ]))
    .scaled(h);
    check(&k5)?;
    let k6 = f(&y.add_scaled(&[
        (lit(A61), &k1),
        (lit(A62), &k2),
        (lit(A63), &k3),
        (lit(A64), &k4),
        (lit(A65), &k5),
    ]))
    .scaled(h);
    check(&k6)?;

    let y4 = y.add_scaled(&[
        (lit(B41), &k1),
        (lit(B43), &k3),
        (lit(B44), &k4),
        (lit(B45), &k5),
    ]);
    let z5 = y.add_scaled(&[
        (lit(B51), &k1),
        (lit(B53), &k3),
        (lit(B54), &k4),
        (lit(B55), &k5),
        (lit(B56), &k6),
    ]);
    let err = z5.diff_norm(&y4);
    if !err.is_finite() {
        return Err(NonFiniteStep);
    }
    Ok(RkStep { y4, z5, err })
}

/// Next step size from the current one and the observed local error.
///
/// h' = clamp(safety·(tol·h/err)^¼ · h); zero error resets to h_max.
pub fn adapt_step<T: Scalar>(h: T, err: T, tol: T, safety: T, h_min: T, h_max: T) -> T {
    if err == T::zero() {
        return h_max;
    }
    if !err.is_finite() {
        return h_min;
    }
    let quarter = T::lit(0.25);
    let s = safety * (tol * h / err).powf(quarter);
    (s * h).max(h_min).min(h_max)
}

/// Why the evolution loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminatedBy {
    SteadyState,
    TMax,
    MaxSteps,
}

/// Raw integration outcome for a generic state.
#[derive(Debug, Clone)]
pub struct Integration<S: RkState> {
    pub state: S,
    pub t: S::Field,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
    pub terminated_by: TerminatedBy,
    /// ‖f(y)‖ at the final state.
    pub residual: S::Field,
    pub rhs_evals: usize,
}

/// Integrates dy/dt = f(y) from `y0`, invoking `post_accept` on each accepted
/// state before the next residual evaluation.
pub fn integrate_with<S, F>(
    f: &F,
    y0: S,
    config: &Rkf45Config<S::Field>,
    mut post_accept: impl FnMut(&mut S),
) -> Result<Integration<S>, IntegratorError>
where
    S: RkState,
    F: Fn(&S) -> S,
{
    config.validate()?;
    type Fl<S> = <S as RkState>::Field;

    let mut y = y0;
    let mut t = Fl::<S>::zero();
    let mut h = config.h0;
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut rhs_evals = 1usize;
    let mut fy = f(&y);
    let mut residual = fy.norm();
    let mut pinned_failures = 0usize;

    let tiny = config.t_max * Fl::<S>::epsilon() * Fl::<S>::lit(8.0);

    loop {
        if config.ss_eps > Fl::<S>::zero() && residual < config.ss_eps {
            return Ok(Integration {
                state: y,
                t,
                steps_accepted: accepted,
                steps_rejected: rejected,
                terminated_by: TerminatedBy::SteadyState,
                residual,
                rhs_evals,
            });
        }
        if config.t_max - t <= tiny {
            return Ok(Integration {
                state: y,
                t,
                steps_accepted: accepted,
                steps_rejected: rejected,
                terminated_by: TerminatedBy::TMax,
                residual,
                rhs_evals,
            });
        }
        if accepted + rejected >= config.max_steps {
            return Ok(Integration {
                state: y,
                t,
                steps_accepted: accepted,
                steps_rejected: rejected,
                terminated_by: TerminatedBy::MaxSteps,
                residual,
                rhs_evals,
            });
        }

        let h_attempt = h.min(config.t_max - t);
        match rkf45_step_with(f, &y, &fy, h_attempt) {
            Err(NonFiniteStep) => {
                rhs_evals += 5;
                rejected += 1;
                if h_attempt <= config.h_min {
                    pinned_failures += 1;
                    if pinned_failures >= STIFF_LIMIT {
                        return Err(IntegratorError::Stiff {
                            t: t.to_f64().unwrap_or(f64::NAN),
                            h: h_attempt.to_f64().unwrap_or(f64::NAN),
                            err: f64::NAN,
                            limit: STIFF_LIMIT,
                        });
                    }
                } else {
                    pinned_failures = 0;
                }
                h = (h_attempt * Fl::<S>::lit(0.5)).max(config.h_min);
            }
            Ok(step) => {
                rhs_evals += 5;
                if step.err <= config.tol * h_attempt {
                    y = step.z5;
                    t += h_attempt;
                    accepted += 1;
                    pinned_failures = 0;
                    post_accept(&mut y);
                    fy = f(&y);
                    rhs_evals += 1;
                    residual = fy.norm();
                    h = adapt_step(
                        h_attempt,
                        step.err,
                        config.tol,
                        config.safety,
                        config.h_min,
                        config.h_max,
                    );
                } else {
                    rejected += 1;
                    if h_attempt <= config.h_min {
                        pinned_failures += 1;
                        if pinned_failures >= STIFF_LIMIT {
                            return Err(IntegratorError::Stiff {
                                t: t.to_f64().unwrap_or(f64::NAN),
                                h: h_attempt.to_f64().unwrap_or(f64::NAN),
                                err: step.err.to_f64().unwrap_or(f64::NAN),
                                limit: STIFF_LIMIT,
                            });
                        }
                    } else {
                        pinned_failures = 0;
                    }
                    h = adapt_step(
                        h_attempt,
                        step.err,
                        config.tol,
                        config.safety,
                        config.h_min,
                        config.h_max,
                    );
                }
            }
        }
    }
}

/// [`integrate_with`] without a post-acceptance hook.
pub fn integrate<S, F>(
    f: &F,
    y0: S,
    config: &Rkf45Config<S::Field>,
) -> Result<Integration<S>, IntegratorError>
where
    S: RkState,
    F: Fn(&S) -> S,
{
    integrate_with(f, y0, config, |_| {})
}

/// Evolution outcome for a density-matrix state, with trace diagnostics.
#[derive(Debug, Clone)]
pub struct EvolutionResult<T> {
    pub rho_final: DensityMatrix<T>,
    pub t_reached: T,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
    pub terminated_by: TerminatedBy,
    /// ‖f(ρ)‖_F at the final state.
    pub residual: T,
    pub rhs_evals: usize,
    /// Accepted steps whose trace drifted enough to renormalize.
    pub trace_renormalizations: usize,
    /// Largest |tr(ρ)−1| seen before renormalization.
    pub max_trace_drift: T,
    /// Sum of |tr(ρ)−1| over accepted steps, before renormalization.
    pub total_trace_drift: T,
}

/// Integrates the Lindblad dynamics of a density matrix.
///
/// After each accepted step the trace is measured; drift beyond 1e-12 is
/// renormalized away and recorded. The drift diagnostics stay available so
/// tests can assert the integrator respected the trace-free right-hand side
/// before any renormalization happened.
pub fn evolve<T, F>(
    f: &F,
    rho0: &DensityMatrix<T>,
    config: &Rkf45Config<T>,
) -> Result<EvolutionResult<T>, IntegratorError>
where
    T: Scalar,
    F: Fn(&CMatrix<T>) -> CMatrix<T>,
{
    let mut renorms = 0usize;
    let mut max_drift = T::zero();
    let mut total_drift = T::zero();
    let threshold = T::lit(RENORM_THRESHOLD);
    let one = num_complex::Complex::new(T::one(), T::zero());

    let outcome = integrate_with(f, rho0.matrix().clone(), config, |rho| {
        let tr = rho.trace();
        let drift = (tr - one).norm();
        max_drift = max_drift.max(drift);
        total_drift += drift;
        if drift > threshold && tr.re > T::zero() {
            rho.scale_in_place(num_complex::Complex::new(T::one() / tr.re, T::zero()));
            renorms += 1;
        }
    })?;

    Ok(EvolutionResult {
        rho_final: DensityMatrix::from_matrix_unchecked(outcome.state),
        t_reached: outcome.t,
        steps_accepted: outcome.steps_accepted,
        steps_rejected: outcome.steps_rejected,
        terminated_by: outcome.terminated_by,
        residual: outcome.residual,
        rhs_evals: outcome.rhs_evals,
        trace_renormalizations: renorms,
        max_trace_drift: max_drift,
        total_trace_drift: total_drift,
    })
}
