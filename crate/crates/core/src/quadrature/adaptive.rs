use super::gauss::gauss_legendre_rule;
use super::{Envelope, QuadratureConfig};
use crate::error::{DunklError, Result};
use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

const INITIAL_PANELS: usize = 8;
const MIN_DEPTH: usize = 2;

/// Values that adaptive integration can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn norm(&self) -> f64;
    fn is_finite_value(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Integral estimate together with its certified error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<V> {
    pub value: V,
    pub error: f64,
    pub evaluations: usize,
}

struct Simpson<'a, V, F> {
    f: &'a mut F,
    max_depth: usize,
    evaluations: usize,
    capped: bool,
    _v: std::marker::PhantomData<V>,
}

impl<V: QuadValue, F: FnMut(f64) -> Result<V>> Simpson<'_, V, F> {
    fn eval(&mut self, x: f64) -> Result<V> {
        self.evaluations += 1;
        let v = (self.f)(x)?;
        if !v.is_finite_value() {
            return Err(DunklError::NonFinite(format!("integrand at {x}")));
        }
        Ok(v)
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(&mut self, a: f64, b: f64, fa: V, fm: V, fb: V, whole: V, tol: f64, depth: usize) -> Result<(V, f64)> {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = self.eval(lm)?;
        let frm = self.eval(rm)?;
        let h = (b - a) / 12.0;
        let left = (fa + flm * 4.0 + fm) * h;
        let right = (fm + frm * 4.0 + fb) * h;
        let halves = left + right;
        let delta = halves - whole;
        let err = delta.norm() / 15.0;
        if depth >= MIN_DEPTH && err <= tol {
            return Ok((halves + delta * (1.0 / 15.0), err));
        }
        if depth >= self.max_depth || m <= a || m >= b {
            self.capped = true;
            return Ok((halves + delta * (1.0 / 15.0), err));
        }
        let (l, el) = self.refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?;
        let (r, er) = self.refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?;
        Ok((l + r, el + er))
    }
}

fn adaptive<V: QuadValue, F: FnMut(f64) -> Result<V>>(f: &mut F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate<V>> {
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(DunklError::Domain(format!("integration limits [{a}, {b}]")));
    }
    if a == b {
        return Ok(Estimate { value: V::zero(), error: 0.0, evaluations: 0 });
    }
    if b < a {
        let e = adaptive(f, b, a, cfg)?;
        return Ok(Estimate { value: e.value * -1.0, ..e });
    }
    let mut s = Simpson { f, max_depth: cfg.max_subdivisions, evaluations: 0, capped: false, _v: std::marker::PhantomData };
    let n = INITIAL_PANELS;
    let width = (b - a) / n as f64;
    let xs: Vec<f64> = (0..=2 * n).map(|i| if i == 2 * n { b } else { a + 0.5 * width * i as f64 }).collect();
    let mut fx = Vec::with_capacity(xs.len());
    for &x in &xs {
        fx.push(s.eval(x)?);
    }
    let mut coarse = V::zero();
    let mut panels = Vec::with_capacity(n);
    for i in 0..n {
        let whole = (fx[2 * i] + fx[2 * i + 1] * 4.0 + fx[2 * i + 2]) * (width / 6.0);
        coarse = coarse + whole;
        panels.push(whole);
    }
    let tol = cfg.abs_tol.max(cfg.rel_tol * coarse.norm());
    let mut parts = Vec::with_capacity(n);
    let mut error = 0.0;
    for i in 0..n {
        let (v, e) = s.refine(xs[2 * i], xs[2 * i + 2], fx[2 * i], fx[2 * i + 1], fx[2 * i + 2], panels[i], tol / n as f64, 0)?;
        parts.push(v);
        error += e;
    }
    let value = pairwise(&parts);
    if s.capped && error > tol {
        return Err(DunklError::SubdivisionCap { estimate: value.norm(), error_bound: error });
    }
    Ok(Estimate { value, error, evaluations: s.evaluations })
}

fn pairwise<V: QuadValue>(v: &[V]) -> V {
    match v.len() {
        0 => V::zero(),
        1 => v[0],
        n => {
            let (l, r) = v.split_at(n / 2);
            pairwise(l) + pairwise(r)
        }
    }
}

/// Adaptive Simpson with Richardson correction on [a, b] for a fallible integrand.
pub fn try_integrate_finite<V: QuadValue>(mut f: impl FnMut(f64) -> Result<V>, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate<V>> {
    adaptive(&mut f, a, b, cfg)
}

/// ∫_a^b f with error ≤ max(abs_tol, rel_tol·|result|).
pub fn integrate_finite(f: impl Fn(f64) -> f64, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    try_integrate_finite(|x| Ok(f(x)), a, b, cfg).map(|e| e.value)
}

/// Composite-free Gauss–Legendre of order `cfg.legendre_order` on [a, b].
pub fn integrate_fixed(f: impl Fn(f64) -> f64, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    Ok(gauss_legendre_rule(cfg.legendre_order)?.apply_on(a, b, f))
}

/// Radius T with scale·∫_T^∞ e^{σt−pt²}t^ρ dt < abs_tol / 10.
pub fn truncation_radius(env: &Envelope, cfg: &QuadratureConfig) -> Result<f64> {
    if !(env.p > 0.0) || !env.p.is_finite() {
        return Err(DunklError::Envelope(format!("Gaussian rate p = {} must be positive", env.p)));
    }
    if env.sigma < 0.0 || env.rho < 0.0 || env.scale < 0.0 {
        return Err(DunklError::Envelope(format!("negative envelope parameter in {env:?}")));
    }
    if let Some(t) = cfg.truncation_radius {
        return Ok(t);
    }
    let target = cfg.abs_tol / 10.0;
    if env.scale == 0.0 {
        return Ok(1.0);
    }
    let c = env.scale.max(1.0);
    let s = env.sigma;
    let p = env.p;
    let mut t = s / (2.0 * p) + (s * s / (4.0 * p * p) + (c / cfg.abs_tol).ln().max(0.0) / p).max(0.0).sqrt();
    t = t.max(1.0);
    for _ in 0..200 {
        let slope = s - 2.0 * p * t + env.rho / t;
        if slope < 0.0 {
            let bound = env.scale * (env.log_at(t)).exp() / slope.abs();
            if bound < target {
                return Ok(t);
            }
        }
        t *= 1.05;
    }
    Err(DunklError::Envelope(format!("could not bound the tail of {env:?}")))
}

/// ∫_0^∞ f for a fallible integrand bounded by `env`.
pub fn try_integrate_semi_infinite<V: QuadValue>(f: impl FnMut(f64) -> Result<V>, env: &Envelope, cfg: &QuadratureConfig) -> Result<Estimate<V>> {
    let t = truncation_radius(env, cfg)?;
    try_integrate_finite(f, 0.0, t, cfg)
}

/// ∫_0^∞ f, truncated where the declared envelope tail drops below abs_tol / 10.
pub fn integrate_semi_infinite(f: impl Fn(f64) -> f64, env: &Envelope, cfg: &QuadratureConfig) -> Result<f64> {
    try_integrate_semi_infinite(|x| Ok(f(x)), env, cfg).map(|e| e.value)
}
