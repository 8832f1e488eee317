//! Quantum stochastic walk ranking for directed networks.
//!
//! The crate builds the coherent (Hamiltonian) and dissipative (Lindblad
//! channel) generators of a quantum stochastic walk from a directed graph,
//! integrates the Lindblad master equation with an adaptive Fehlberg 4(5)
//! scheme, and ranks nodes by the stationary occupation probabilities. The
//! right-hand side is evaluated matrix-free in O(N²) memory; the explicit
//! N²×N² superoperator exists only as a small-N test oracle.
//!
//! Numerical kernels are generic over the real scalar type via [`Scalar`];
//! double precision is the intended default and the only precision at which
//! the documented tolerances are reachable.

pub mod dynamics;
pub mod integrator;
pub mod matrix;
pub mod mem;
pub mod net;
pub mod operators;
pub mod rank;
pub mod scalar;
pub mod sparse;
pub mod synth;

pub use scalar::Scalar;

/// Complex double precision, the default scalar for states.
pub type C64 = num_complex::Complex<f64>;

/// Double-precision aliases for the main solver types.
pub type Matrix64 = matrix::CMatrix<f64>;
pub type Density64 = dynamics::DensityMatrix<f64>;
pub type Liouvillian64 = dynamics::Liouvillian<f64>;
pub type Rate64 = operators::RateMatrix<f64>;
pub type Hamiltonian64 = operators::Hamiltonian<f64>;
pub type Channels64 = operators::LindbladChannels<f64>;
pub type Params64 = operators::WalkParameters<f64>;
pub type Config64 = integrator::Rkf45Config<f64>;
