//! Distributions of realized and implied variance.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`] – log-gamma, beta, regularized incomplete gamma/beta and the
//!   Tricomi confluent hypergeometric function `U(a, b, z)`.
//! * [`distributions`] – the heavy-tailed families used for fitting (stable,
//!   GB2, beta prime, (generalized) inverse gamma, (generalized) gamma,
//!   normal, generalized Student's t and the Tricomi-U mixture), with pdf,
//!   cdf, sampling, power-law exponents and the `x -> x^r` transform.
//! * [`volseries`] – log returns, n-day annualized realized variance,
//!   mean-ratio rescaling, difference series and autocorrelation.
//! * [`fitting`] – maximum likelihood, Kolmogorov–Smirnov scoring, tail
//!   regressions, the autocorrelation-decay fit and the window-length sweep.
//! * [`sdelab`] – simulation of the stochastic volatility SDE and its
//!   analytic steady state.

// `!(x > 0.0)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod distributions;
pub mod error;
pub mod fitting;
pub mod quad;
pub mod rng;
pub mod sdelab;
pub mod specfun;
pub mod volseries;

pub use distributions::{DistributionSpec, ExponentReport, Family};
pub use error::{Error, Result};
