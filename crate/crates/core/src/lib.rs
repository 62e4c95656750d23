//! Rank-one Dunkl harmonic analysis: special functions, the Dunkl kernel and transform,
//! translation, and numerical tests for Dunkl complete monotonicity and positive definiteness.

// `!(x > 0.0)` guards are written that way so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod kernel;
pub mod kummer;
pub mod linalg;
pub mod monotonicity;
pub mod quadrature;
pub mod spec;
pub mod specfun;
pub mod transform;

pub use error::{DunklError, Result};
pub use kernel::{dunkl_kernel, dunkl_kernel_osc, MultiplicityParam};
pub use monotonicity::{CMReport, GramReport};
pub use num_complex::Complex64;
pub use quadrature::{Envelope, QuadratureConfig};
pub use spec::{FunctionSpec, MeasureSpec, NamedFunction, Parity, SpectralProfile};
pub use transform::TransformConfig;
