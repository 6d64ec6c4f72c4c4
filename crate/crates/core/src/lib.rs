//! Analysis and evaluation of generalized Euler integrals
//! ∫ f₁^{−s₁}⋯f_ℓ^{−s_ℓ} x^ν dx/x over the positive orthant.
//!
//! The crate decides absolute convergence from Newton-polytope data,
//! evaluates the integral numerically by sector decomposition, solves
//! the critical-point equations of the log-likelihood by homotopy
//! continuation, computes the two physical limits of the δ-rescaled
//! integral, and emits the difference and differential operator systems
//! the integral satisfies.

pub mod dd;
pub mod error;
pub mod laurent;
pub mod polytope;
pub mod rng;
pub mod spec;
pub mod convergence;
pub mod critpoints;
pub mod integrate;
pub mod limits;
pub mod params;
pub mod gkz;
pub mod shiftops;

pub use error::{Error, Result};
