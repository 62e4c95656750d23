use crate::report::{num, Outcome, Verdict};
use anyhow::{bail, Context};
use dunklkit::kernel::{dunkl_kernel, dunkl_kernel_osc, MultiplicityParam};
use dunklkit::kummer::{adjudicate_theorem6, sonine_classical, sonine_quadrature, KummerParams};
use dunklkit::monotonicity::{check_convexity_theorem, check_dunkl_cm, check_dunkl_pd, check_schoenberg, CmMode, CmOptions, ConvexityOutcome};
use dunklkit::quadrature::QuadratureConfig;
use dunklkit::spec::{FunctionSpec, MeasureSpec, Parity};
use dunklkit::transform::{dunkl_transform, dunkl_translate, dunkl_translate_even, TransformConfig};
use serde::Serialize;
use serde_json::json;
use std::str::FromStr;

/// `lo:hi:count`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, count] = parts.as_slice() else {
            return Err(format!("grid '{s}' is not lo:hi:count"));
        };
        let lo: f64 = lo.trim().parse().map_err(|_| format!("bad grid start '{lo}'"))?;
        let hi: f64 = hi.trim().parse().map_err(|_| format!("bad grid end '{hi}'"))?;
        let count: usize = count.trim().parse().map_err(|_| format!("bad grid count '{count}'"))?;
        if count == 0 || !lo.is_finite() || !hi.is_finite() || (count > 1 && lo >= hi) {
            return Err(format!("grid '{s}' needs count ≥ 1 and lo < hi"));
        }
        Ok(Grid { lo, hi, count })
    }
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let m = (self.count - 1) as f64;
        (0..self.count).map(|i| if i + 1 == self.count { self.hi } else { self.lo + (self.hi - self.lo) * i as f64 / m }).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Auto,
    Exact,
    Numeric,
}

impl From<ModeArg> for CmMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Auto => CmMode::Auto,
            ModeArg::Exact => CmMode::Exact,
            ModeArg::Numeric => CmMode::Numeric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RouteArg {
    Auto,
    Transform,
    Product,
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn tcfg(k: MultiplicityParam, quad: &QuadratureConfig) -> anyhow::Result<TransformConfig> {
    Ok(TransformConfig::new(k, *quad)?)
}

pub fn eval_kernel(k: MultiplicityParam, y: f64, grid: &Grid) -> anyhow::Result<Outcome> {
    let mut points = Vec::new();
    let mut rows = Vec::new();
    for x in grid.points() {
        let e = dunkl_kernel(k, x, y)?;
        let z = dunkl_kernel_osc(k, x, y)?;
        points.push(json!({ "x": x, "kernel": e, "osc": [z.re, z.im] }));
        rows.push(vec![num(x), num(e), num(z.re), num(z.im)]);
    }
    Ok(Outcome { verdict: Verdict::Ok, report: json!({ "y": y, "points": points }), header: vec!["x", "kernel", "osc_re", "osc_im"], rows })
}

pub fn transform(k: MultiplicityParam, phi: &FunctionSpec, grid: &Grid, quad: &QuadratureConfig) -> anyhow::Result<Outcome> {
    let cfg = tcfg(k, quad)?;
    let mut points = Vec::new();
    let mut rows = Vec::new();
    for xi in grid.points() {
        let v = dunkl_transform(phi, xi, &cfg)?;
        points.push(json!({ "xi": xi, "value": [v.value.re, v.value.im], "discarded_imag": v.discarded_imag }));
        rows.push(vec![num(xi), num(v.value.re), num(v.value.im), num(v.discarded_imag)]);
    }
    Ok(Outcome { verdict: Verdict::Ok, report: json!({ "c_k": cfg.c_k, "points": points }), header: vec!["xi", "re", "im", "discarded_imag"], rows })
}

pub fn translate(k: MultiplicityParam, phi: &FunctionSpec, y: f64, grid: &Grid, route: RouteArg, quad: &QuadratureConfig) -> anyhow::Result<Outcome> {
    let cfg = tcfg(k, quad)?;
    let route = match route {
        RouteArg::Auto if phi.known_transform(k).is_some() => RouteArg::Transform,
        RouteArg::Auto => RouteArg::Product,
        r => r,
    };
    if route == RouteArg::Product && phi.parity() != Parity::Even {
        bail!("the product formula needs an even function; {} is not", phi.kind());
    }
    let mut points = Vec::new();
    let mut rows = Vec::new();
    for x in grid.points() {
        let v = match route {
            RouteArg::Product => dunklkit::Complex64::new(dunkl_translate_even(phi, y, x, &cfg)?, 0.0),
            _ => dunkl_translate(phi, y, x, &cfg)?,
        };
        points.push(json!({ "x": x, "value": [v.re, v.im] }));
        rows.push(vec![num(x), num(v.re), num(v.im)]);
    }
    Ok(Outcome { verdict: Verdict::Ok, report: json!({ "y": y, "route": route, "points": points }), header: vec!["x", "re", "im"], rows })
}

pub fn check_cm(
    k: MultiplicityParam,
    phi: &FunctionSpec,
    sigma: f64,
    orders: usize,
    grid_size: usize,
    mode: ModeArg,
    quad: &QuadratureConfig,
) -> anyhow::Result<Outcome> {
    let r = check_dunkl_cm(k, phi, sigma, orders, &CmOptions { grid_size, mode: mode.into(), quad: *quad })?;
    let rows = (0..=r.orders_checked)
        .map(|n| {
            vec![n.to_string(), num(r.per_order_min[n]), num(r.per_order_scale[n]), num(r.tolerances[n]), (r.per_order_min[n] >= -r.tolerances[n]).to_string()]
        })
        .collect();
    Ok(Outcome { verdict: verdict(r.verdict), report: serde_json::to_value(&r)?, header: vec!["order", "min", "scale", "tolerance", "pass"], rows })
}

fn gram_rows(r: &dunklkit::GramReport) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (j, row) in r.gram.iter().enumerate() {
        for (l, z) in row.iter().enumerate() {
            rows.push(vec![j.to_string(), l.to_string(), num(r.points[j]), num(r.points[l]), num(z.re), num(z.im)]);
        }
    }
    rows
}

pub fn check_pd(k: MultiplicityParam, phi: &FunctionSpec, points: &[f64], quad: &QuadratureConfig) -> anyhow::Result<Outcome> {
    let r = check_dunkl_pd(phi, points, &tcfg(k, quad)?)?;
    let rows = gram_rows(&r);
    Ok(Outcome { verdict: verdict(r.is_psd()), report: serde_json::to_value(&r)?, header: vec!["j", "l", "x_j", "x_l", "re", "im"], rows })
}

pub fn schoenberg(k: MultiplicityParam, mu: &MeasureSpec, sigma: f64, orders: usize, points: &[f64], quad: &QuadratureConfig) -> anyhow::Result<Outcome> {
    let opts = CmOptions { quad: *quad, ..CmOptions::default() };
    let r = check_schoenberg(mu, sigma, orders, points, &opts, &tcfg(k, quad)?)?;
    let rows = gram_rows(&r.pd);
    Ok(Outcome { verdict: verdict(r.consistent), report: serde_json::to_value(&r)?, header: vec!["j", "l", "x_j", "x_l", "re", "im"], rows })
}

pub fn sonine(k: f64, p: f64, grid: &Grid, quad: &QuadratureConfig) -> anyhow::Result<Outcome> {
    let params = KummerParams::new(k, p)?;
    let mut worst = 0.0f64;
    let mut points = Vec::new();
    let mut rows = Vec::new();
    for x in grid.points() {
        let c = sonine_classical(params, x)?;
        let q = sonine_quadrature(params, x, quad)?;
        let e = if c == 0.0 { q.abs() } else { (c - q).abs() / c.abs() };
        worst = worst.max(e);
        points.push(json!({ "x": x, "closed_form": c, "quadrature": q, "rel_error": e }));
        rows.push(vec![num(x), num(c), num(q), num(e)]);
    }
    let report = json!({ "k": k, "p": p, "tolerance": 1e-8, "max_rel_error": worst, "points": points });
    Ok(Outcome { verdict: verdict(worst <= 1e-8), report, header: vec!["x", "closed_form", "quadrature", "rel_error"], rows })
}

pub fn theorem6(ks: &[f64], ps: &[f64], grid: &Grid, sigma: f64, orders: usize, quad: &QuadratureConfig) -> anyhow::Result<Outcome> {
    let r = adjudicate_theorem6(ks, ps, &grid.points(), sigma, orders, quad)?;
    let ok = r.exactly_one && r.matched_combination.is_some() && r.cases.iter().all(|c| c.cm_verdict == Some(true));
    let mut rows = Vec::new();
    for c in &r.cases {
        for e in &c.errors {
            let cb = e.combination;
            rows.push(vec![num(c.k), num(c.p), tag(&cb.form), tag(&cb.rho), cb.sign.to_string(), num(e.max_rel_error), c.matches.contains(&cb).to_string()]);
        }
    }
    Ok(Outcome { verdict: verdict(ok), report: serde_json::to_value(&r)?, header: vec!["k", "p", "form", "rho", "sign", "max_rel_error", "matched"], rows })
}

fn tag<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

pub fn convexity(k: MultiplicityParam, phi: &FunctionSpec, grid: &Grid, orders: usize, quad: &QuadratureConfig) -> anyhow::Result<Outcome> {
    let r = check_convexity_theorem(phi, &grid.points(), orders, &tcfg(k, quad)?)?;
    let w = match &r.outcome {
        ConvexityOutcome::Checked { w_values, .. } => Some(w_values.clone()),
        ConvexityOutcome::TheoremSilent => None,
    };
    let rows = r
        .hypothesis
        .grid
        .iter()
        .enumerate()
        .map(|(i, &y)| vec![num(y), num(r.hypothesis.values[i]), w.as_ref().map(|w| num(w[i])).unwrap_or_default()])
        .collect();
    let ok = match &r.outcome {
        ConvexityOutcome::TheoremSilent => true,
        ConvexityOutcome::Checked { .. } => r.conclusions_hold(),
    };
    Ok(Outcome { verdict: verdict(ok), report: serde_json::to_value(&r)?, header: vec!["x", "weighted_transform", "w_k"], rows })
}

pub fn quad_config(abs_tol: Option<f64>, rel_tol: Option<f64>, legendre_order: Option<usize>) -> anyhow::Result<QuadratureConfig> {
    let mut q = QuadratureConfig::default();
    if let Ok(v) = std::env::var("DUNKLKIT_QUAD_TOL") {
        q.abs_tol = v.trim().parse().with_context(|| format!("DUNKLKIT_QUAD_TOL = '{v}' is not a number"))?;
    }
    if let Some(t) = abs_tol {
        q.abs_tol = t;
    }
    if let Some(t) = rel_tol {
        q.rel_tol = t;
    }
    if let Some(n) = legendre_order {
        q.legendre_order = n;
    }
    q.validate()?;
    Ok(q)
}
