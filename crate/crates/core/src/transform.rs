//! Dunkl transform, its inverse, Dunkl translation and the inverse intertwining operator.

use crate::error::{DunklError, Result};
use crate::kernel::{dunkl_kernel_osc, osc_parts, Intertwiner, MultiplicityParam};
use crate::quadrature::{gauss_jacobi_rule, try_integrate_semi_infinite, Envelope, QuadratureConfig};
use crate::spec::{transform_constant, FunctionSpec, Parity};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Imaginary parts below this are treated as quadrature residue for even real input.
pub const REALNESS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformConfig {
    pub k: MultiplicityParam,
    /// c_k = 1/(2^{k+1/2} Γ(k+1/2))
    pub c_k: f64,
    /// exponent of the weight |y|^{2k}
    pub weight_exponent: f64,
    pub quad: QuadratureConfig,
    /// Decay of the weighted transform D_kf(ξ)|ξ|^{2k}, for specs without a closed-form transform.
    pub spectral_envelope: Option<Envelope>,
}

impl TransformConfig {
    pub fn new(k: MultiplicityParam, quad: QuadratureConfig) -> Result<Self> {
        quad.validate()?;
        Ok(Self { k, c_k: transform_constant(k.value())?, weight_exponent: 2.0 * k.value(), quad, spectral_envelope: None })
    }

    pub fn with_spectral_envelope(mut self, env: Envelope) -> Self {
        self.spectral_envelope = Some(env);
        self
    }

    fn weight(&self, y: f64) -> f64 {
        if self.weight_exponent == 0.0 {
            1.0
        } else {
            y.abs().powf(self.weight_exponent)
        }
    }
}

/// A transform value; `discarded_imag` records the imaginary residue dropped for even real input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformValue {
    pub value: Complex64,
    pub discarded_imag: f64,
}

fn require_envelope(f: &FunctionSpec) -> Result<Envelope> {
    f.envelope().ok_or_else(|| DunklError::Envelope(format!("{} has no declared Gaussian-type decay", f.kind())))
}

/// D_k f(ξ) = c_k ∫ f(y) E_k(−iξ, y) |y|^{2k} dy.
pub fn dunkl_transform(f: &FunctionSpec, xi: f64, cfg: &TransformConfig) -> Result<TransformValue> {
    let env = require_envelope(f)?;
    let k = cfg.k;
    let kv = k.value();
    let env = Envelope { rho: env.rho + cfg.weight_exponent, ..env };
    // even part pairs with A, odd part with B, where E_k(−iξ, y) = A(ξy) − i B(ξy)
    let integrand = |y: f64| -> Result<Complex64> {
        let fp = f.eval(k, y, &cfg.quad)?;
        let fm = f.eval(k, -y, &cfg.quad)?;
        let (a, b) = osc_parts(kv, xi * y)?;
        let w = cfg.weight(y);
        Ok(Complex64::new(0.5 * (fp + fm) * a * w, -0.5 * (fp - fm) * b * w))
    };
    let v = try_integrate_semi_infinite(integrand, &env, &cfg.quad)?.value * (2.0 * cfg.c_k);
    if f.parity() == Parity::Even {
        if v.im.abs() > REALNESS_TOL * v.re.abs().max(1.0) {
            return Err(DunklError::ToleranceNotMet(format!("even input gave imaginary part {:e}", v.im)));
        }
        return Ok(TransformValue { value: Complex64::new(v.re, 0.0), discarded_imag: v.im });
    }
    Ok(TransformValue { value: v, discarded_imag: 0.0 })
}

/// D_k⁻¹ g(x) = c_k ∫ g(y) E_k(ix, y) |y|^{2k} dy = D_k g(−x).
pub fn dunkl_inverse_transform(g: &FunctionSpec, x: f64, cfg: &TransformConfig) -> Result<TransformValue> {
    dunkl_transform(g, -x, cfg)
}

enum Spectrum {
    // weighted transform, real and even
    Known(crate::spec::KnownTransform, Envelope),
    // computed by quadrature; envelope supplied by the caller
    Numeric(Envelope),
}

fn spectrum(f: &FunctionSpec, cfg: &TransformConfig) -> Result<Spectrum> {
    if let Some(t) = f.known_transform(cfg.k) {
        let env = t.envelope()?;
        return Ok(Spectrum::Known(t, env));
    }
    match cfg.spectral_envelope {
        Some(env) => {
            require_envelope(f)?;
            Ok(Spectrum::Numeric(env))
        }
        None => Err(DunklError::Envelope(format!("the transform of {} is not known in closed form and no spectral envelope was declared", f.kind()))),
    }
}

/// τ_y f(x), defined by D_k(τ_y f)(ξ) = E_k(−iy, ξ) D_k f(ξ) and computed by inverting the transform.
///
/// At k = 0 this is f(x − y).
pub fn dunkl_translate(f: &FunctionSpec, y: f64, x: f64, cfg: &TransformConfig) -> Result<Complex64> {
    let kv = cfg.k.value();
    match spectrum(f, cfg)? {
        Spectrum::Known(t, env) => {
            // integrand over ℝ reduces to 2∫₀^∞ (A_x A_y + B_x B_y) D_kf |ξ|^{2k}
            let integrand = |xi: f64| -> Result<f64> {
                let (ax, bx) = osc_parts(kv, x * xi)?;
                let (ay, by) = osc_parts(kv, y * xi)?;
                Ok((ax * ay + bx * by) * t.weighted(xi))
            };
            let v = try_integrate_semi_infinite(integrand, &env, &cfg.quad)?.value;
            Ok(Complex64::new(2.0 * cfg.c_k * v, 0.0))
        }
        Spectrum::Numeric(env) => {
            let inner = TransformConfig { spectral_envelope: None, ..*cfg };
            let integrand = |xi: f64| -> Result<Complex64> {
                let mut s = Complex64::new(0.0, 0.0);
                for z in [xi, -xi] {
                    let df = dunkl_transform(f, z, &inner)?.value;
                    let ex = dunkl_kernel_osc(cfg.k, -x, z)?;
                    let ey = dunkl_kernel_osc(cfg.k, y, z)?;
                    s += ex * ey * df * cfg.weight(z);
                }
                Ok(s)
            };
            Ok(try_integrate_semi_infinite(integrand, &env, &cfg.quad)?.value * cfg.c_k)
        }
    }
}

/// τ_y f(x) for even f, asserting the result is real.
pub fn dunkl_translate_real(f: &FunctionSpec, y: f64, x: f64, cfg: &TransformConfig) -> Result<f64> {
    let v = dunkl_translate(f, y, x, cfg)?;
    if f.parity() == Parity::Even && v.im.abs() > 1e-8 * v.re.abs().max(1.0) {
        return Err(DunklError::ToleranceNotMet(format!("translate of an even function left imaginary part {:e}", v.im)));
    }
    Ok(v.re)
}

/// Translation of even functions through the product formula
/// τ_y φ(x) = ∫₋₁¹ φ(√(x² + y² − 2xyt)) dν_k(t), ν_k the V_k Beta measure.
///
/// Needs only pointwise values of φ, so it also covers even functions without a transform.
#[derive(Debug, Clone)]
pub struct ProductTranslator {
    v: Intertwiner,
}

impl ProductTranslator {
    pub const DEFAULT_NODES: usize = 96;

    pub fn new(k: MultiplicityParam, n_nodes: usize) -> Result<Self> {
        Ok(Self { v: Intertwiner::new(k, n_nodes)? })
    }

    pub fn translate(&self, f: &FunctionSpec, y: f64, x: f64, quad: &QuadratureConfig) -> Result<f64> {
        if f.parity() != Parity::Even {
            return Err(DunklError::Parameter(format!("product formula needs an even function, got {}", f.kind())));
        }
        let k = MultiplicityParam::new(self.v.k())?;
        if k.is_classical() {
            return f.eval(k, x - y, quad);
        }
        self.v.try_apply(
            |xt| {
                // xt runs over x·t; the radius is √(x² + y² − 2 y (x t))
                let r2 = (x * x + y * y - 2.0 * y * xt).max(0.0);
                f.eval(k, r2.sqrt(), quad)
            },
            x,
        )
    }
}

/// τ_y φ(x) for even φ by the product formula with the default rule size.
pub fn dunkl_translate_even(f: &FunctionSpec, y: f64, x: f64, cfg: &TransformConfig) -> Result<f64> {
    ProductTranslator::new(cfg.k, ProductTranslator::DEFAULT_NODES)?.translate(f, y, x, &cfg.quad)
}

/// W_k φ(x) = c_k ∫ e^{ixy} D_kφ(y) |y|^{2k} dy, the inverse of V_k.
pub fn inverse_intertwine(phi: &FunctionSpec, x: f64, cfg: &TransformConfig) -> Result<Complex64> {
    match spectrum(phi, cfg)? {
        Spectrum::Known(t, env) => {
            let v = try_integrate_semi_infinite(|y: f64| Ok((x * y).cos() * t.weighted(y)), &env, &cfg.quad)?.value;
            Ok(Complex64::new(2.0 * cfg.c_k * v, 0.0))
        }
        Spectrum::Numeric(env) => {
            let inner = TransformConfig { spectral_envelope: None, ..*cfg };
            let integrand = |y: f64| -> Result<Complex64> {
                let mut s = Complex64::new(0.0, 0.0);
                for z in [y, -y] {
                    let d = dunkl_transform(phi, z, &inner)?.value;
                    s += Complex64::new(0.0, x * z).exp() * d * cfg.weight(z);
                }
                Ok(s)
            };
            Ok(try_integrate_semi_infinite(integrand, &env, &cfg.quad)?.value * cfg.c_k)
        }
    }
}

/// Complex samples on a symmetric Gauss–Jacobi grid whose weights already contain |x|^{2k}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledFunction {
    pub grid: Vec<f64>,
    pub values: Vec<Complex64>,
    pub weights: Vec<f64>,
    /// Largest frequency the grid resolves, roughly n/half_width.
    pub band_limit_hint: f64,
}

impl SampledFunction {
    /// Samples `f` on `n` nodes in each of (−L, 0) and (0, L).
    pub fn sample(k: MultiplicityParam, half_width: f64, n: usize, f: impl Fn(f64) -> Result<Complex64>) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(DunklError::Parameter(format!("half width {half_width} must be positive")));
        }
        let two_k = 2.0 * k.value();
        // ∫₀^L g(x) x^{2k} dx = (L/2)^{2k+1} ∫₋₁¹ g(L(1+s)/2) (1+s)^{2k} ds
        let rule = gauss_jacobi_rule(n, 0.0, two_k)?;
        let scale = (0.5 * half_width).powf(two_k + 1.0);
        let mut grid = Vec::with_capacity(2 * n);
        let mut weights = Vec::with_capacity(2 * n);
        for (&s, &w) in rule.nodes.iter().zip(&rule.weights).rev() {
            grid.push(-0.5 * half_width * (1.0 + s));
            weights.push(w * scale);
        }
        for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
            grid.push(0.5 * half_width * (1.0 + s));
            weights.push(w * scale);
        }
        let values = grid.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
        Ok(Self { grid, values, weights, band_limit_hint: n as f64 / half_width })
    }

    /// c_k Σ wᵢ vᵢ E_k(−iξ, xᵢ).
    pub fn dunkl_transform(&self, k: MultiplicityParam, xi: f64) -> Result<Complex64> {
        let c = transform_constant(k.value())?;
        let mut re = Vec::with_capacity(self.grid.len());
        let mut im = Vec::with_capacity(self.grid.len());
        for ((&x, &v), &w) in self.grid.iter().zip(&self.values).zip(&self.weights) {
            let t = v * dunkl_kernel_osc(k, xi, x)? * w;
            re.push(t.re);
            im.push(t.im);
        }
        Ok(Complex64::new(crate::quadrature::pairwise_sum(&re), crate::quadrature::pairwise_sum(&im)) * c)
    }
}
