//! Symbolic descriptions of test functions and measures.

use crate::error::{DunklError, Result};
use crate::kernel::{dunkl_kernel, MultiplicityParam};
use crate::kummer::{phi_kp_paper, psi_kp, KummerParams};
use crate::quadrature::{gauss_legendre_rule, pairwise_sum, truncation_radius, try_integrate_semi_infinite, Envelope, QuadratureConfig};
use crate::specfun::{gamma_fn, kummer_1f1, normalized_bessel};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    None,
}

/// A point mass `w` at location `t ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub t: f64,
    pub w: f64,
}

/// Density `scale · e^{−p t²} t^ρ` on [0, ∞).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensitySpec {
    pub p: f64,
    pub rho: f64,
    pub scale: f64,
}

/// Nonnegative measure on [0, ∞): point masses plus an optional Gaussian-type density.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub atoms: Vec<Atom>,
    pub density: Option<DensitySpec>,
}

impl MeasureSpec {
    pub fn new(atoms: Vec<Atom>, density: Option<DensitySpec>) -> Result<Self> {
        let m = Self { atoms, density };
        m.validate()?;
        Ok(m)
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn atom(t: f64, w: f64) -> Self {
        Self { atoms: vec![Atom { t, w }], density: None }
    }

    pub fn density(p: f64, rho: f64, scale: f64) -> Self {
        Self { atoms: Vec::new(), density: Some(DensitySpec { p, rho, scale }) }
    }

    pub fn validate(&self) -> Result<()> {
        for a in &self.atoms {
            if !(a.t >= 0.0 && a.w >= 0.0 && a.t.is_finite() && a.w.is_finite()) {
                return Err(DunklError::Parameter(format!("atom ({}, {}) must have t ≥ 0 and w ≥ 0", a.t, a.w)));
            }
        }
        if let Some(d) = &self.density {
            if !(d.p > 0.0 && d.rho >= 0.0 && d.scale >= 0.0) || !(d.p.is_finite() && d.rho.is_finite() && d.scale.is_finite()) {
                return Err(DunklError::Parameter(format!("density needs p > 0, rho ≥ 0, scale ≥ 0; got {d:?}")));
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.iter().all(|a| a.w == 0.0) && self.density.is_none_or(|d| d.scale == 0.0)
    }

    /// ∫ tⁿ E_k(−x, t) dμ(t).
    pub fn moment_kernel(&self, k: MultiplicityParam, n: usize, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        let mut total = 0.0;
        for a in &self.atoms {
            if a.w != 0.0 {
                total += a.w * a.t.powi(n as i32) * dunkl_kernel(k, -x, a.t)?;
            }
        }
        if let Some(d) = self.density {
            if d.scale != 0.0 {
                let rho = d.rho + n as f64;
                let env = Envelope { sigma: x.abs(), p: d.p, rho, scale: d.scale };
                let integrand = |t: f64| -> Result<f64> {
                    if t == 0.0 {
                        return Ok(if rho == 0.0 { d.scale } else { 0.0 });
                    }
                    Ok(d.scale * (-d.p * t * t + rho * t.ln()).exp() * dunkl_kernel(k, -x, t)?)
                };
                total += try_integrate_semi_infinite(integrand, &env, cfg)?.value;
            }
        }
        Ok(total)
    }
}

/// Closed-form spectral profiles g(y) = D_kφ(y)·|y|^{2k} for y ≥ 0 (even φ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpectralProfile {
    /// g(y) = e^{−a y − b y²}
    ExpQuadratic { a: f64, b: f64 },
}

impl SpectralProfile {
    pub fn eval(&self, y: f64) -> f64 {
        match *self {
            SpectralProfile::ExpQuadratic { a, b } => (-a * y - b * y * y).exp(),
        }
    }

    pub fn envelope(&self) -> Result<Envelope> {
        match *self {
            SpectralProfile::ExpQuadratic { a, b } => {
                if !(b > 0.0) {
                    return Err(DunklError::Envelope(format!("profile needs b > 0, got {b}")));
                }
                Ok(Envelope { sigma: (-a).max(0.0), p: b, rho: 0.0, scale: 1.0 })
            }
        }
    }
}

/// Closed forms identified by name.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum NamedFunction {
    /// Ψ_{k,p} = I_{k,p} − J_{k,p}, the Laplace–Dunkl transform of e^{−pt²}t^{2k}.
    KummerPsi { p: f64 },
    /// I_{k,p} + J_{k,p}, equal to Ψ_{k,p}(−x).
    KummerPhiPaper { p: f64 },
    /// ₁F₁(1/2; k+1/2; −t²x²), the image of e^{−t²x²} under V_k.
    IntertwinedGaussian { t: f64 },
    /// E_k(−t², x²).
    KernelOfSquare { t: f64 },
}

/// A function given by a closure, with declared parity and optional decay bound.
#[derive(Clone)]
pub struct RawFunction {
    pub label: String,
    pub f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub parity: Parity,
    pub envelope: Option<Envelope>,
}

impl fmt::Debug for RawFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RawFunction").field("label", &self.label).field("parity", &self.parity).finish()
    }
}

/// Test functions φ: ℝ → ℝ that the operators act on.
#[derive(Debug, Clone)]
pub enum FunctionSpec {
    /// x ↦ E_k(−x, y), y ≥ 0
    KernelDecaying {
        y: f64,
    },
    /// x ↦ ∫ E_k(−x, t) dμ(t)
    LaplaceDunkl(MeasureSpec),
    /// x ↦ e^{−p x²}
    Gaussian {
        p: f64,
    },
    Named(NamedFunction),
    /// Σ cᵢ φᵢ
    Combination(Vec<(f64, FunctionSpec)>),
    /// x ↦ φ(−x)
    Reflected(Box<FunctionSpec>),
    /// x ↦ φ(x²)
    SquaredArgument(Box<FunctionSpec>),
    /// x ↦ φ(√|x|)
    SqrtAbsArgument(Box<FunctionSpec>),
    /// The even φ whose weighted transform D_kφ(y)|y|^{2k} is the profile.
    FromTransform(SpectralProfile),
    /// Piecewise-linear interpolation of (x, value) pairs, increasing x.
    Table(Vec<(f64, f64)>),
    Raw(RawFunction),
}

/// Evaluator for the weighted transform ξ ↦ D_kφ(ξ)|ξ|^{2k} when it is known in closed form.
#[derive(Debug, Clone)]
pub struct KnownTransform {
    terms: Vec<(f64, KnownTerm)>,
    k: f64,
}

#[derive(Debug, Clone, Copy)]
enum KnownTerm {
    Gaussian { p: f64 },
    Profile(SpectralProfile),
}

impl KnownTransform {
    /// D_kφ(ξ)·|ξ|^{2k}; the result is even in ξ.
    pub fn weighted(&self, xi: f64) -> f64 {
        let a = xi.abs();
        let w = if self.k == 0.0 { 1.0 } else { a.powf(2.0 * self.k) };
        self.terms
            .iter()
            .map(|(c, t)| {
                c * match *t {
                    KnownTerm::Gaussian { p } => w * (2.0 * p).powf(-(self.k + 0.5)) * (-a * a / (4.0 * p)).exp(),
                    KnownTerm::Profile(g) => g.eval(a),
                }
            })
            .sum()
    }

    /// D_kφ(ξ); infinite at ξ = 0 for profiles that do not vanish there when k > 0.
    pub fn plain(&self, xi: f64) -> f64 {
        let a = xi.abs();
        let w = if self.k == 0.0 { 1.0 } else { a.powf(2.0 * self.k) };
        self.terms
            .iter()
            .map(|(c, t)| {
                c * match *t {
                    KnownTerm::Gaussian { p } => (2.0 * p).powf(-(self.k + 0.5)) * (-a * a / (4.0 * p)).exp(),
                    KnownTerm::Profile(g) => g.eval(a) / w,
                }
            })
            .sum()
    }

    /// Bound on |weighted(ξ)| for ξ ≥ 0.
    pub fn envelope(&self) -> Result<Envelope> {
        let mut out: Option<Envelope> = None;
        for (c, t) in &self.terms {
            let e = match *t {
                KnownTerm::Gaussian { p } => Envelope { sigma: 0.0, p: 1.0 / (4.0 * p), rho: 2.0 * self.k, scale: (2.0 * p).powf(-(self.k + 0.5)) },
                KnownTerm::Profile(g) => g.envelope()?,
            };
            let e = Envelope { scale: e.scale * c.abs(), ..e };
            out = Some(match out {
                None => e,
                Some(o) => merge_envelopes(&o, &e),
            });
        }
        Ok(out.unwrap_or(Envelope::gaussian(1.0)).clamped())
    }
}

impl Envelope {
    fn clamped(self) -> Self {
        Envelope { scale: self.scale.max(0.0), ..self }
    }
}

fn merge_envelopes(a: &Envelope, b: &Envelope) -> Envelope {
    Envelope { sigma: a.sigma.max(b.sigma), p: a.p.min(b.p), rho: a.rho.max(b.rho), scale: a.scale + b.scale }
}

fn table_eval(points: &[(f64, f64)], x: f64) -> Result<f64> {
    let n = points.len();
    if n == 0 {
        return Err(DunklError::Parameter("empty table".into()));
    }
    if n == 1 {
        return if x == points[0].0 { Ok(points[0].1) } else { Err(DunklError::Domain(format!("{x} outside table"))) };
    }
    if x < points[0].0 || x > points[n - 1].0 {
        return Err(DunklError::Domain(format!("{x} outside table range [{}, {}]", points[0].0, points[n - 1].0)));
    }
    let i = points.partition_point(|p| p.0 <= x).clamp(1, n - 1);
    let (x0, y0) = points[i - 1];
    let (x1, y1) = points[i];
    Ok(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
}

/// The normalization c_k = 1/(2^{k+1/2} Γ(k+1/2)) of the transform.
pub fn transform_constant(k: f64) -> Result<f64> {
    Ok(1.0 / (2f64.powf(k + 0.5) * gamma_fn(k + 0.5)?))
}

impl FunctionSpec {
    pub fn gaussian(p: f64) -> Self {
        FunctionSpec::Gaussian { p }
    }

    pub fn raw(label: &str, parity: Parity, envelope: Option<Envelope>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        FunctionSpec::Raw(RawFunction { label: label.to_string(), f: Arc::new(f), parity, envelope })
    }

    pub fn scaled(self, c: f64) -> Self {
        FunctionSpec::Combination(vec![(c, self)])
    }

    /// Checks parameters that can be checked without evaluating.
    pub fn validate(&self) -> Result<()> {
        use FunctionSpec::*;
        match self {
            KernelDecaying { y } if !(*y >= 0.0 && y.is_finite()) => Err(DunklError::Parameter(format!("kernel y = {y} must be ≥ 0"))),
            LaplaceDunkl(m) => m.validate(),
            Gaussian { p } if !(*p > 0.0 && p.is_finite()) => Err(DunklError::Parameter(format!("gaussian p = {p} must be > 0"))),
            Named(NamedFunction::KummerPsi { p } | NamedFunction::KummerPhiPaper { p }) if !(*p > 0.0) => {
                Err(DunklError::Parameter(format!("p = {p} must be > 0")))
            }
            Combination(parts) => parts.iter().try_for_each(|(_, s)| s.validate()),
            Reflected(s) | SquaredArgument(s) | SqrtAbsArgument(s) => s.validate(),
            FromTransform(g) => g.envelope().map(|_| ()),
            Table(points) => {
                if points.is_empty() || points.windows(2).any(|w| !(w[0].0 < w[1].0)) {
                    return Err(DunklError::Parameter("table abscissae must be nonempty and strictly increasing".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// φ(x).
    pub fn eval(&self, k: MultiplicityParam, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        use FunctionSpec::*;
        let kv = k.value();
        match self {
            KernelDecaying { y } => dunkl_kernel(k, -x, *y),
            LaplaceDunkl(m) => m.moment_kernel(k, 0, x, cfg),
            Gaussian { p } => Ok((-p * x * x).exp()),
            Named(n) => match *n {
                NamedFunction::KummerPsi { p } => psi_kp(KummerParams::new(kv, p)?, x),
                NamedFunction::KummerPhiPaper { p } => phi_kp_paper(KummerParams::new(kv, p)?, x),
                NamedFunction::IntertwinedGaussian { t } => kummer_1f1(0.5, kv + 0.5, -t * t * x * x),
                NamedFunction::KernelOfSquare { t } => dunkl_kernel(k, -t * t, x * x),
            },
            Combination(parts) => {
                let mut s = 0.0;
                for (c, f) in parts {
                    s += c * f.eval(k, x, cfg)?;
                }
                Ok(s)
            }
            Reflected(f) => f.eval(k, -x, cfg),
            SquaredArgument(f) => f.eval(k, x * x, cfg),
            SqrtAbsArgument(f) => f.eval(k, x.abs().sqrt(), cfg),
            FromTransform(g) => {
                // fixed nodes keep the result a smooth function of x, which numerical T_k relies on
                let env = g.envelope()?;
                let c = transform_constant(kv)?;
                let t = truncation_radius(&env, cfg)?;
                let panels = (t * x.abs().max(1.0) / 8.0).ceil().max(1.0) as usize;
                let rule = gauss_legendre_rule(cfg.legendre_order)?;
                let width = t / panels as f64;
                let mut parts = Vec::with_capacity(panels);
                for i in 0..panels {
                    let a = i as f64 * width;
                    let bad = std::cell::Cell::new(None);
                    let v = rule.apply_on(a, a + width, |xi| match normalized_bessel(kv - 0.5, x * xi) {
                        Ok(j) => g.eval(xi) * j,
                        Err(e) => {
                            bad.set(Some(e));
                            f64::NAN
                        }
                    });
                    if let Some(e) = bad.take() {
                        return Err(e);
                    }
                    parts.push(v);
                }
                Ok(2.0 * c * pairwise_sum(&parts))
            }
            Table(points) => table_eval(points, x),
            Raw(r) => Ok((r.f)(x)),
        }
    }

    pub fn parity(&self) -> Parity {
        use FunctionSpec::*;
        match self {
            KernelDecaying { y } if *y == 0.0 => Parity::Even,
            Gaussian { .. } | SquaredArgument(_) | SqrtAbsArgument(_) | FromTransform(_) => Parity::Even,
            Named(NamedFunction::IntertwinedGaussian { .. } | NamedFunction::KernelOfSquare { .. }) => Parity::Even,
            LaplaceDunkl(m) if m.is_zero() => Parity::Even,
            Combination(parts) => {
                let ps: Vec<Parity> = parts.iter().map(|(_, s)| s.parity()).collect();
                if ps.iter().all(|&p| p == Parity::Even) {
                    Parity::Even
                } else if ps.iter().all(|&p| p == Parity::Odd) {
                    Parity::Odd
                } else {
                    Parity::None
                }
            }
            Reflected(s) => s.parity(),
            Raw(r) => r.parity,
            _ => Parity::None,
        }
    }

    /// Declared bound on |φ(y)| on [0, ∞) and, by parity, on ℝ, when one is known.
    pub fn envelope(&self) -> Option<Envelope> {
        use FunctionSpec::*;
        match self {
            Gaussian { p } => Some(Envelope::gaussian(*p)),
            Combination(parts) => {
                let mut out: Option<Envelope> = None;
                for (c, s) in parts {
                    let e = s.envelope()?;
                    let e = Envelope { scale: e.scale * c.abs(), ..e };
                    out = Some(match out {
                        None => e,
                        Some(o) => merge_envelopes(&o, &e),
                    });
                }
                out
            }
            Reflected(s) if s.parity() == Parity::Even => s.envelope(),
            Raw(r) => r.envelope,
            _ => None,
        }
    }

    /// Closed-form transform, when this spec is an (even) combination of Gaussians and profiles.
    pub fn known_transform(&self, k: MultiplicityParam) -> Option<KnownTransform> {
        let mut terms = Vec::new();
        if self.collect_known(1.0, &mut terms) {
            Some(KnownTransform { terms, k: k.value() })
        } else {
            None
        }
    }

    fn collect_known(&self, scale: f64, out: &mut Vec<(f64, KnownTerm)>) -> bool {
        match self {
            FunctionSpec::Gaussian { p } => {
                out.push((scale, KnownTerm::Gaussian { p: *p }));
                true
            }
            FunctionSpec::FromTransform(g) => {
                out.push((scale, KnownTerm::Profile(*g)));
                true
            }
            FunctionSpec::Reflected(s) if s.parity() == Parity::Even => s.collect_known(scale, out),
            FunctionSpec::Combination(parts) => parts.iter().all(|(c, s)| s.collect_known(scale * c, out)),
            _ => false,
        }
    }

    /// True when T_kⁿφ is available through the eigenrelation.
    pub fn is_structured(&self) -> bool {
        use FunctionSpec::*;
        match self {
            KernelDecaying { .. } | LaplaceDunkl(_) => true,
            Named(NamedFunction::KummerPsi { .. } | NamedFunction::KummerPhiPaper { .. }) => true,
            Combination(parts) => parts.iter().all(|(_, s)| s.is_structured()),
            Reflected(s) => s.is_structured(),
            _ => false,
        }
    }

    /// T_kⁿφ(x) from the eigenrelation T_k E_k(·, λ) = λ E_k(·, λ).
    pub fn exact_power(&self, k: MultiplicityParam, n: usize, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        use FunctionSpec::*;
        if n == 0 {
            return self.eval(k, x, cfg);
        }
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        match self {
            KernelDecaying { y } => Ok((-y).powi(n as i32) * dunkl_kernel(k, -x, *y)?),
            LaplaceDunkl(m) => Ok(sign * m.moment_kernel(k, n, x, cfg)?),
            Named(NamedFunction::KummerPsi { p }) => psi_measure(k, *p).exact_power(k, n, x, cfg),
            Named(NamedFunction::KummerPhiPaper { p }) => Reflected(Box::new(psi_measure(k, *p))).exact_power(k, n, x, cfg),
            Combination(parts) => {
                let mut s = 0.0;
                for (c, f) in parts {
                    s += c * f.exact_power(k, n, x, cfg)?;
                }
                Ok(s)
            }
            // T_k(φ∘R) = −(T_kφ)∘R
            Reflected(f) => Ok(sign * f.exact_power(k, n, -x, cfg)?),
            other => Err(DunklError::Structure(format!("no exact T_k^n for {}", other.kind()))),
        }
    }

    /// Short variant name used in messages and reports.
    pub fn kind(&self) -> &'static str {
        use FunctionSpec::*;
        match self {
            KernelDecaying { .. } => "kernel",
            LaplaceDunkl(_) => "laplace-dunkl",
            Gaussian { .. } => "gauss",
            Named(_) => "named",
            Combination(_) => "combination",
            Reflected(_) => "reflected",
            SquaredArgument(_) => "squared-argument",
            SqrtAbsArgument(_) => "sqrt-abs-argument",
            FromTransform(_) => "from-transform",
            Table(_) => "raw-table",
            Raw(_) => "raw",
        }
    }
}

/// The measure e^{−pt²} t^{2k} dt behind Ψ_{k,p}.
pub fn psi_measure(k: MultiplicityParam, p: f64) -> FunctionSpec {
    FunctionSpec::LaplaceDunkl(MeasureSpec::density(p, 2.0 * k.value(), 1.0))
}
