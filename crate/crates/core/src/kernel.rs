//! Rank-one Dunkl kernel, the operator T_k and the intertwining operator V_k.

use crate::error::{DunklError, Result};
use crate::quadrature::{gauss_jacobi_rule, QuadratureConfig, QuadratureRule};
use crate::spec::FunctionSpec;
use crate::specfun::{gamma_fn, kummer_1f1, ln_gamma, normalized_bessel, normalized_bessel_i};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// The multiplicity parameter k ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct MultiplicityParam(f64);

impl MultiplicityParam {
    pub fn new(k: f64) -> Result<Self> {
        if k.is_finite() && k >= 0.0 {
            Ok(Self(k))
        } else {
            Err(DunklError::Parameter(format!("multiplicity k = {k} must be finite and nonnegative")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_classical(self) -> bool {
        self.0 == 0.0
    }
}

impl TryFrom<f64> for MultiplicityParam {
    type Error = DunklError;
    fn try_from(k: f64) -> Result<Self> {
        Self::new(k)
    }
}

impl From<MultiplicityParam> for f64 {
    fn from(k: MultiplicityParam) -> f64 {
        k.0
    }
}

/// E_k(x, y) through the two normalized Bessel functions j_{k-1/2}(ixy), j_{k+1/2}(ixy).
///
/// Loses accuracy for xy ≪ 0 when k is small; [`dunkl_kernel`] avoids that region.
pub fn dunkl_kernel_bessel_form(k: MultiplicityParam, x: f64, y: f64) -> Result<f64> {
    let k = k.value();
    let u = x * y;
    let even = normalized_bessel_i(k - 0.5, u)?;
    let odd = normalized_bessel_i(k + 0.5, u)?;
    Ok(even + u / (2.0 * k + 1.0) * odd)
}

/// The Dunkl kernel E_k(x, y), real arguments.
///
/// For xy < -1 the equivalent form e^{xy} ₁F₁(k; 2k+1; -2xy) is used, whose series has
/// positive terms. The result is checked to be positive.
pub fn dunkl_kernel(k: MultiplicityParam, x: f64, y: f64) -> Result<f64> {
    let kv = k.value();
    let u = x * y;
    if !u.is_finite() {
        return Err(DunklError::NonFinite(format!("kernel argument {x}·{y}")));
    }
    let v = if kv == 0.0 {
        u.exp()
    } else if u >= -1.0 {
        dunkl_kernel_bessel_form(k, x, y)?
    } else if u > -300.0 {
        u.exp() * kummer_1f1(kv, 2.0 * kv + 1.0, -2.0 * u)?
    } else {
        // leading asymptotics of e^u M(k, 2k+1, 2|u|) with the exponentials combined
        let w = -u;
        let log = ln_gamma(2.0 * kv + 1.0)? - ln_gamma(kv)? + w - (kv + 1.0) * (2.0 * w).ln();
        let mut s: f64 = 1.0;
        let mut t: f64 = 1.0;
        for j in 0..40 {
            let jf = j as f64;
            let next = t * (kv + 1.0 + jf) * (1.0 - kv + jf) / ((jf + 1.0) * 2.0 * w);
            if next.abs() > t.abs() || next.abs() < 1e-17 * s.abs() {
                break;
            }
            t = next;
            s += t;
        }
        log.exp() * s
    };
    if v.is_nan() {
        return Err(DunklError::NonFinite(format!("E_{kv}({x}, {y})")));
    }
    if !(v > 0.0) && !(kv == 0.0 && u < -700.0) {
        return Err(DunklError::NonFinite(format!("E_{kv}({x}, {y}) = {v} is not positive")));
    }
    Ok(v)
}

/// E_k(−ix, y) = j_{k−1/2}(xy) − i (xy/(2k+1)) j_{k+1/2}(xy).
pub fn dunkl_kernel_osc(k: MultiplicityParam, x: f64, y: f64) -> Result<Complex64> {
    let kv = k.value();
    let u = x * y;
    if kv == 0.0 {
        return Ok(Complex64::new(u.cos(), -u.sin()));
    }
    let re = normalized_bessel(kv - 0.5, u)?;
    let im = -u / (2.0 * kv + 1.0) * normalized_bessel(kv + 0.5, u)?;
    Ok(Complex64::new(re, im))
}

/// Even and odd real parts (A(u), B(u)) with E_k(−ix, y) = A(xy) − i B(xy).
pub(crate) fn osc_parts(k: f64, u: f64) -> Result<(f64, f64)> {
    if k == 0.0 {
        return Ok((u.cos(), u.sin()));
    }
    Ok((normalized_bessel(k - 0.5, u)?, u / (2.0 * k + 1.0) * normalized_bessel(k + 0.5, u)?))
}

/// Result of a numerical T_k evaluation together with the difference step used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericDerivative {
    pub value: f64,
    pub step: f64,
}

fn auto_step(order: usize, x: f64) -> f64 {
    f64::EPSILON.powf(1.0 / (order as f64 + 2.0)) * x.abs().max(1.0)
}

fn richardson_derivative(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    let h2 = 0.5 * h;
    let d2 = (f(x + h2) - f(x - h2)) / (2.0 * h2);
    (4.0 * d2 - d1) / 3.0
}

fn apply_t(k: f64, f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d = richardson_derivative(f, x, h);
    if k == 0.0 {
        return d;
    }
    if x == 0.0 {
        return (1.0 + 2.0 * k) * d;
    }
    if x.abs() < h {
        // (f(x) − f(−x))/x ≈ f'(x) + f'(−x) near the removable singularity
        let dm = richardson_derivative(f, -x, h);
        return d + k * (d + dm);
    }
    d + k * (f(x) - f(-x)) / x
}

/// T_k f(x) = f'(x) + k (f(x) − f(−x))/x by central differences with Richardson extrapolation.
pub fn dunkl_operator_numeric(k: MultiplicityParam, f: &dyn Fn(f64) -> f64, x: f64, step: Option<f64>) -> NumericDerivative {
    let h = step.unwrap_or_else(|| f64::EPSILON.cbrt() * x.abs().max(1.0));
    NumericDerivative { value: apply_t(k.value(), f, x, h), step: h }
}

/// Largest n accepted by [`dunkl_operator_power_numeric`].
pub const NUMERIC_ORDER_CAP: usize = 4;

/// T_kⁿ f(x) by nesting the numerical operator; n ≤ 4.
pub fn dunkl_operator_power_numeric(k: MultiplicityParam, f: &dyn Fn(f64) -> f64, n: usize, x: f64) -> Result<NumericDerivative> {
    if n > NUMERIC_ORDER_CAP {
        return Err(DunklError::Mode(format!("numeric T_k^n needs n ≤ {NUMERIC_ORDER_CAP}, got {n}")));
    }
    if n == 0 {
        return Ok(NumericDerivative { value: f(x), step: 0.0 });
    }
    let h = auto_step(n, x);
    Ok(NumericDerivative { value: nest(k.value(), f, n, x, h), step: h })
}

fn nest(k: f64, f: &dyn Fn(f64) -> f64, n: usize, x: f64, h: f64) -> f64 {
    if n == 0 {
        return f(x);
    }
    let inner = |t: f64| nest(k, f, n - 1, t, h);
    apply_t(k, &inner, x, h)
}

/// T_kⁿφ(x) through the eigenrelation, for kernel and Laplace–Dunkl specs and their combinations.
pub fn dunkl_operator_power_exact(k: MultiplicityParam, spec: &FunctionSpec, n: usize, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if n > 0 && !spec.is_structured() {
        return Err(DunklError::Structure(format!("no exact T_k^n for {}", spec.kind())));
    }
    spec.exact_power(k, n, x, cfg)
}

/// Gauss–Jacobi evaluation of V_k f(x) = C_k ∫₋₁¹ f(xt)(1−t)^{k−1}(1+t)^k dt.
#[derive(Debug, Clone)]
pub struct Intertwiner {
    k: f64,
    rule: Option<QuadratureRule>,
    constant: f64,
}

impl Intertwiner {
    pub const DEFAULT_NODES: usize = 64;

    /// Builds the rule; at k = 0 the operator is the identity.
    pub fn new(k: MultiplicityParam, n_nodes: usize) -> Result<Self> {
        let kv = k.value();
        if kv == 0.0 {
            return Ok(Self { k: 0.0, rule: None, constant: 1.0 });
        }
        let rule = gauss_jacobi_rule(n_nodes, kv - 1.0, kv)?;
        Ok(Self { k: kv, rule: Some(rule), constant: intertwiner_constant(kv)? })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn rule(&self) -> Option<&QuadratureRule> {
        self.rule.as_ref()
    }

    /// Normalizing constant Γ(k+1/2)/(√π Γ(k)).
    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn apply(&self, f: impl Fn(f64) -> f64, x: f64) -> f64 {
        match &self.rule {
            None => f(x),
            Some(r) => self.constant * r.apply(|t| f(x * t)),
        }
    }

    pub fn try_apply(&self, f: impl Fn(f64) -> Result<f64>, x: f64) -> Result<f64> {
        match &self.rule {
            None => f(x),
            Some(r) => {
                let mut terms = Vec::with_capacity(r.nodes.len());
                for (&t, &w) in r.nodes.iter().zip(&r.weights) {
                    terms.push(w * f(x * t)?);
                }
                Ok(self.constant * crate::quadrature::pairwise_sum(&terms))
            }
        }
    }
}

pub(crate) fn intertwiner_constant(k: f64) -> Result<f64> {
    if k < 20.0 {
        Ok(gamma_fn(k + 0.5)? / (PI.sqrt() * gamma_fn(k)?))
    } else {
        Ok((ln_gamma(k + 0.5)? - ln_gamma(k)?).exp() / PI.sqrt())
    }
}

/// V_k f(x) for k > 0 with an `n_nodes`-point Gauss–Jacobi rule.
pub fn intertwine(k: MultiplicityParam, f: impl Fn(f64) -> f64, x: f64, n_nodes: usize) -> Result<f64> {
    if !(k.value() > 0.0) {
        return Err(DunklError::Parameter("intertwine needs k > 0; V_0 is the identity".into()));
    }
    Ok(Intertwiner::new(k, n_nodes)?.apply(f, x))
}
