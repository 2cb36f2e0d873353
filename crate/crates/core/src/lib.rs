//! Quadrature on the real line for functions analytic in a strip, together with
//! computable lower and upper bounds on their worst-case error in weighted Hardy
//! spaces `H∞(D_d, ω)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: reference integrator, log-domain sums, recurrence root finding.
//! * [`weights`]: single- and double-exponential weight functions and their tails.
//! * [`rules`]: truncated trapezoidal, scaled Gauss–Legendre, scaled
//!   Clenshaw–Curtis and Gauss–Hermite rules.
//! * [`bounds`]: every lower/upper bound, evaluated in natural-log scale.
//! * [`harness`]: sweeps over `n`, empirical errors and decay-rate fits.
//! * [`cli`]: the `hardy-quad` command line front end.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod harness;
pub mod numerics;
pub mod rules;
pub mod weights;

pub use error::{Error, Result};
