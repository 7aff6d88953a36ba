//! Numerical laboratory for GL(2) exponential sums on the critical line.
//!
//! The crate provides the building blocks needed to evaluate and cross-check
//! the explicit transformations that arise in subconvexity work for degree-two
//! L-functions:
//!
//! - [`forms`]: exact Hecke eigenvalue tables (Ramanujan tau, divisor function)
//!   with unit normalisation.
//! - [`weights`] / [`quad`] / [`bessel`]: smooth compactly supported test
//!   functions with certified derivative bounds, an adaptive oscillatory
//!   quadrature oracle, and Bessel functions with an oscillatory split.
//! - [`phase`]: first-order stationary phase, the quadratic-phase asymptotic
//!   expansion, and the cubic-in-sqrt phase asymptotics used for Bessel
//!   transforms, all testable against the quadrature oracle.
//! - [`summation`] / [`chain`]: the delta-symbol identity, both sides of the
//!   GL(2) Voronoi and GL(1) Poisson summation formulas, and the fully
//!   explicit transformation chain for the smoothed sum S(N).
//! - [`dioph`]: Dirichlet approximation of rbar/p, dyadic families, and
//!   brute-force counting oracles.
//! - [`expsum`]: direct exponential sums and the van der Corput k-th
//!   derivative test.
//! - [`lfunc`]: zeta and holomorphic-form L-values on the critical line plus
//!   the exponent-envelope scanner.
//!
//! Phases are everywhere expressed in *turns*: `e(x) = exp(2 pi i x)`.

pub mod arith;
pub mod bessel;
pub mod chain;
pub mod dd;
pub mod dioph;
pub mod error;
pub mod expsum;
pub mod forms;
pub mod jet;
pub mod kahan;
pub mod lfunc;
pub mod phase;
pub mod quad;
pub mod special;
pub mod summation;
pub mod weights;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// e(x) = exp(2 pi i x), the additive character used throughout.
#[inline]
pub fn e(x: f64) -> Complex64 {
    let (s, c) = (2.0 * std::f64::consts::PI * x).sin_cos();
    Complex64::new(c, s)
}
