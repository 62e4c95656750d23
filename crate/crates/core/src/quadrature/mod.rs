//! Gauss rules and adaptive integration over finite and semi-infinite ranges.

mod adaptive;
mod gauss;

pub use adaptive::{
    integrate_finite, integrate_fixed, integrate_semi_infinite, truncation_radius, try_integrate_finite, try_integrate_semi_infinite, Estimate, QuadValue,
};
pub(crate) use gauss::pairwise_sum;
pub use gauss::{gauss_jacobi_rule, gauss_legendre_rule, QuadratureRule, RuleFamily};

use serde::{Deserialize, Serialize};

/// Tolerances and sizes shared by every integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub legendre_order: usize,
    /// `None` picks the radius from the declared envelope.
    pub truncation_radius: Option<f64>,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-11, rel_tol: 1e-10, legendre_order: 80, truncation_radius: None, max_subdivisions: 60 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> crate::Result<()> {
        use crate::DunklError::Parameter;
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Parameter("quadrature tolerances must be positive".into()));
        }
        if self.legendre_order < 2 {
            return Err(Parameter("legendre_order must be at least 2".into()));
        }
        if let Some(t) = self.truncation_radius {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Parameter(format!("truncation radius {t}")));
            }
        }
        if self.max_subdivisions < 2 {
            return Err(Parameter("max_subdivisions must be at least 2".into()));
        }
        Ok(())
    }

    pub fn with_abs_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self
    }
}

/// Declared bound |f(t)| ≤ scale · e^{σt − pt²} · t^ρ on [0, ∞).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub sigma: f64,
    pub p: f64,
    pub rho: f64,
    pub scale: f64,
}

impl Envelope {
    pub fn gaussian(p: f64) -> Self {
        Self { sigma: 0.0, p, rho: 0.0, scale: 1.0 }
    }

    pub(crate) fn log_at(&self, t: f64) -> f64 {
        self.sigma * t - self.p * t * t + if self.rho == 0.0 { 0.0 } else { self.rho * t.ln() }
    }
}
