//! Exact and numerical machinery for generalized Dedekind sums attached to
//! Eisenstein series of `Γ(N)`, their completed L-values and period
//! polynomials, Eichler integrals and their radial limits, and the genus-2
//! `SU(2)`-TQFT signature `σ₂`.
//!
//! The level-2 ("odd") family is computed in exact rational arithmetic
//! end-to-end; general levels are evaluated in complex floating point with
//! cross-validating evaluation routes.

pub mod bernoulli;
pub mod cotangent;
pub mod dedekind;
pub mod periodic;
pub mod qseries;
pub mod rational;
pub mod suites;
pub mod tqft;

pub use dedekind::{EisensteinSpec, GammaMatrix, PeriodPolynomial};
pub use periodic::PeriodicMap;
pub use rational::{Rational, ReducedFraction};
pub use tqft::Sigma2Argument;

use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A summand of a trigonometric kernel lands on a pole.
    #[error("pole encountered: {0}")]
    Pole(String),
    /// Exact rational evaluation is not available for these inputs.
    #[error("exact path unavailable: {0}")]
    NotExact(String),
    /// Formula gated behind an experimental flag (nonzero map values at 0).
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A regression fit was requested with too little or degenerate data.
    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),
    /// An exact value that must be an integer was not one.
    #[error("integrality violation: {0}")]
    Integrality(String),
    /// A matrix argument fails determinant or congruence requirements.
    #[error("invalid matrix: {0}")]
    Matrix(String),
    /// Evaluation requested below the configured precision floor.
    #[error("precision floor: {0}")]
    Precision(String),
    /// Malformed serialized input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
