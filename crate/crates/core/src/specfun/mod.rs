//! Scalar special functions: gamma, Bessel, confluent hypergeometric, error functions.

mod bessel;
pub(crate) mod dd;
mod error_fn;
mod gamma;
mod hypergeometric;

pub use bessel::{bessel_j, normalized_bessel, normalized_bessel_i, BESSEL_J_MAX_Z};
pub use error_fn::{erf_fn, erfc_fn, lower_incomplete_gamma};
pub use gamma::{beta, gamma_fn, ln_gamma, pochhammer, rgamma};
pub use hypergeometric::{kummer_1f1, kummer_1f1_direct};
