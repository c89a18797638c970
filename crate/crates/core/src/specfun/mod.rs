//! Special functions used by the densities.
//!
//! Everything here is a pure function of its arguments.

pub(crate) mod gamma;
pub(crate) mod incomplete;
mod tricomi;

pub use gamma::{beta_fn, erfc, ln_beta, ln_gamma};
pub use incomplete::{reg_inc_beta, reg_inc_beta_pair, reg_inc_gamma_lower, reg_inc_gamma_upper};
pub use tricomi::{ln_tricomi_u, tricomi_u};
