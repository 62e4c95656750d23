//! Gaussian-weighted Laplace–Dunkl closed forms and the quadrature oracle that checks them.

use crate::error::{DunklError, Result};
use crate::kernel::{dunkl_kernel, MultiplicityParam};
use crate::monotonicity::{check_dunkl_cm, CmOptions};
use crate::quadrature::{try_integrate_semi_infinite, Envelope, QuadratureConfig};
use crate::spec::{FunctionSpec, MeasureSpec};
use crate::specfun::{bessel_j, gamma_fn, kummer_1f1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Parameters (k, p) with k > −1 and p > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KummerParams {
    pub k: f64,
    pub p: f64,
}

impl KummerParams {
    pub fn new(k: f64, p: f64) -> Result<Self> {
        if !(k > -1.0 && k.is_finite()) {
            return Err(DunklError::Parameter(format!("k = {k} must exceed -1")));
        }
        if !(p > 0.0 && p.is_finite()) {
            return Err(DunklError::Parameter(format!("p = {p} must be positive")));
        }
        Ok(Self { k, p })
    }

    fn needs_half(&self) -> Result<()> {
        if self.k > -0.5 {
            Ok(())
        } else {
            Err(DunklError::Parameter(format!("k = {} must exceed -1/2 here", self.k)))
        }
    }
}

/// x^k e^{−x²/4p} / (2p)^{k+1}, the closed form of ∫₀^∞ J_k(xt) e^{−pt²} t^{k+1} dt.
pub fn sonine_classical(params: KummerParams, x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(DunklError::Domain(format!("Sonine integral needs x ≥ 0, got {x}")));
    }
    let KummerParams { k, p } = params;
    let xk = if k == 0.0 { 1.0 } else { x.powf(k) };
    Ok(xk * (-x * x / (4.0 * p)).exp() / (2.0 * p).powf(k + 1.0))
}

/// ∫₀^∞ J_k(xt) e^{−pt²} t^{k+1} dt by quadrature.
pub fn sonine_quadrature(params: KummerParams, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if x < 0.0 {
        return Err(DunklError::Domain(format!("Sonine integral needs x ≥ 0, got {x}")));
    }
    let KummerParams { k, p } = params;
    let env = Envelope { sigma: 0.0, p, rho: k + 1.0, scale: 1.0 };
    let f = |t: f64| -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        Ok(bessel_j(k, x * t)? * (-p * t * t + (k + 1.0) * t.ln()).exp())
    };
    Ok(try_integrate_semi_infinite(f, &env, cfg)?.value)
}

/// I_{k,p}(x) = Γ(k+1/2) e^{x²/4p} / (2 p^{k+1/2}).
pub fn i_kp(params: KummerParams, x: f64) -> Result<f64> {
    params.needs_half()?;
    let KummerParams { k, p } = params;
    Ok(gamma_fn(k + 0.5)? * (x * x / (4.0 * p)).exp() / (2.0 * p.powf(k + 0.5)))
}

/// J_{k,p}(x) = Γ(k+1) x / (2(2k+1) p^{k+1}) · ₁F₁(k+1; k+3/2; x²/4p).
pub fn j_kp(params: KummerParams, x: f64) -> Result<f64> {
    params.needs_half()?;
    let KummerParams { k, p } = params;
    if x == 0.0 {
        return Ok(0.0);
    }
    let lead = gamma_fn(k + 1.0)? * x / (2.0 * (2.0 * k + 1.0) * p.powf(k + 1.0));
    Ok(lead * kummer_1f1(k + 1.0, k + 1.5, x * x / (4.0 * p))?)
}

/// Ψ_{k,p} = I_{k,p} − J_{k,p} = ∫₀^∞ E_k(−x, t) e^{−pt²} t^{2k} dt.
pub fn psi_kp(params: KummerParams, x: f64) -> Result<f64> {
    Ok(i_kp(params, x)? - j_kp(params, x)?)
}

/// I_{k,p} + J_{k,p}: the sum with a plus sign, equal to Ψ_{k,p}(−x).
pub fn phi_kp_paper(params: KummerParams, x: f64) -> Result<f64> {
    Ok(i_kp(params, x)? + j_kp(params, x)?)
}

/// ∫₀^∞ E_k(sign·x, t) e^{−pt²} t^ρ dt by quadrature.
pub fn laplace_dunkl_oracle(k: MultiplicityParam, p: f64, rho: f64, sign: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(p > 0.0) {
        return Err(DunklError::Envelope(format!("oracle needs p > 0, got {p}")));
    }
    if !(rho >= 0.0) {
        return Err(DunklError::Parameter(format!("rho = {rho} must be ≥ 0")));
    }
    let s = if sign < 0.0 { -1.0 } else { 1.0 };
    let env = Envelope { sigma: x.abs(), p, rho, scale: 1.0 };
    let f = |t: f64| -> Result<f64> {
        if t == 0.0 {
            return Ok(if rho == 0.0 { 1.0 } else { 0.0 });
        }
        Ok((-p * t * t + rho * t.ln()).exp() * dunkl_kernel(k, s * x, t)?)
    };
    Ok(try_integrate_semi_infinite(f, &env, cfg)?.value)
}

/// The closed forms under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedForm {
    Psi,
    PhiPaper,
}

/// Density exponent of the oracle measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RhoChoice {
    #[serde(rename = "2k")]
    TwoK,
    #[serde(rename = "2k+1")]
    TwoKPlusOne,
}

impl RhoChoice {
    pub fn value(self, k: f64) -> f64 {
        match self {
            RhoChoice::TwoK => 2.0 * k,
            RhoChoice::TwoKPlusOne => 2.0 * k + 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Combination {
    pub form: ClosedForm,
    pub rho: RhoChoice,
    /// sign in E_k(sign·x, t)
    pub sign: i8,
}

impl Combination {
    /// All eight (form, ρ, sign) choices in a fixed order.
    pub fn all() -> Vec<Combination> {
        let mut v = Vec::with_capacity(8);
        for form in [ClosedForm::Psi, ClosedForm::PhiPaper] {
            for rho in [RhoChoice::TwoK, RhoChoice::TwoKPlusOne] {
                for sign in [-1, 1] {
                    v.push(Combination { form, rho, sign });
                }
            }
        }
        v
    }

    /// Same statement written for Ψ, using I + J at x = (I − J) at −x.
    pub fn canonical(self) -> Combination {
        match self.form {
            ClosedForm::Psi => self,
            ClosedForm::PhiPaper => Combination { form: ClosedForm::Psi, rho: self.rho, sign: -self.sign },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CombinationError {
    pub combination: Combination,
    /// max over the x-grid of |closed form − oracle| / |oracle|
    pub max_rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdjudicationCase {
    pub k: f64,
    pub p: f64,
    pub errors: Vec<CombinationError>,
    pub matches: Vec<Combination>,
    /// CM verdict of the matched Laplace–Dunkl function, when exactly one distinct match exists
    pub cm_verdict: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdjudicationRecord {
    pub x_grid: Vec<f64>,
    pub tolerance: f64,
    pub cases: Vec<AdjudicationCase>,
    /// true when every case has exactly one match up to the reflection I ± J ↔ x ↦ −x
    pub exactly_one: bool,
    /// the common canonical match of all cases
    pub matched_combination: Option<Combination>,
    pub cm_sigma: f64,
    pub cm_orders: usize,
}

/// Relative error threshold for a match.
pub const MATCH_TOL: f64 = 1e-7;

fn closed_form(form: ClosedForm, params: KummerParams, x: f64) -> Result<f64> {
    match form {
        ClosedForm::Psi => psi_kp(params, x),
        ClosedForm::PhiPaper => phi_kp_paper(params, x),
    }
}

/// Compares the closed forms with the quadrature oracle for every (form, ρ, sign) and runs the
/// CM test on the matched function.
pub fn adjudicate_theorem6(ks: &[f64], ps: &[f64], xs: &[f64], cm_sigma: f64, cm_orders: usize, cfg: &QuadratureConfig) -> Result<AdjudicationRecord> {
    if ks.is_empty() || ps.is_empty() || xs.is_empty() {
        return Err(DunklError::Parameter("adjudication grids must be nonempty".into()));
    }
    let quad = cfg.with_abs_tol(cfg.abs_tol.min(1e-13));
    let combos = Combination::all();
    let mut cases = Vec::new();
    for &k in ks {
        for &p in ps {
            let params = KummerParams::new(k, p)?;
            let kp = MultiplicityParam::new(k)?;
            let jobs: Vec<(usize, f64)> = (0..combos.len()).flat_map(|c| xs.iter().map(move |&x| (c, x))).collect();
            let rel: Vec<f64> = jobs
                .par_iter()
                .map(|&(c, x)| {
                    let cb = combos[c];
                    let oracle = laplace_dunkl_oracle(kp, p, cb.rho.value(k), cb.sign as f64, x, &quad)?;
                    let closed = closed_form(cb.form, params, x)?;
                    Ok((closed - oracle).abs() / oracle.abs().max(f64::MIN_POSITIVE))
                })
                .collect::<Result<_>>()?;
            let errors: Vec<CombinationError> = combos
                .iter()
                .zip(rel.chunks(xs.len()))
                .map(|(&combination, r)| CombinationError { combination, max_rel_error: r.iter().copied().fold(0.0, f64::max) })
                .collect();
            let matches: Vec<Combination> = errors.iter().filter(|e| e.max_rel_error <= MATCH_TOL).map(|e| e.combination).collect();
            let distinct = distinct_canonical(&matches);
            let cm_verdict = match distinct.as_slice() {
                [m] => {
                    let phi = matched_function(kp, p, *m);
                    Some(check_dunkl_cm(kp, &phi, cm_sigma, cm_orders, &CmOptions { quad: *cfg, ..CmOptions::default() })?.verdict)
                }
                _ => None,
            };
            cases.push(AdjudicationCase { k, p, errors, matches, cm_verdict });
        }
    }
    let canon: Vec<Option<Combination>> = cases
        .iter()
        .map(|c| match distinct_canonical(&c.matches).as_slice() {
            [m] => Some(*m),
            _ => None,
        })
        .collect();
    let exactly_one = canon.iter().all(Option::is_some);
    let matched_combination = match canon.first() {
        Some(Some(first)) if canon.iter().all(|c| *c == Some(*first)) => Some(*first),
        _ => None,
    };
    Ok(AdjudicationRecord { x_grid: xs.to_vec(), tolerance: MATCH_TOL, cases, exactly_one, matched_combination, cm_sigma, cm_orders })
}

fn distinct_canonical(matches: &[Combination]) -> Vec<Combination> {
    let mut out: Vec<Combination> = Vec::new();
    for c in matches.iter().map(|m| m.canonical()) {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// x ↦ ∫₀^∞ E_k(sign·x, t) e^{−pt²} t^ρ dt as a spec.
fn matched_function(k: MultiplicityParam, p: f64, c: Combination) -> FunctionSpec {
    let f = FunctionSpec::LaplaceDunkl(MeasureSpec::density(p, c.rho.value(k.value()), 1.0));
    if c.sign < 0 {
        f
    } else {
        FunctionSpec::Reflected(Box::new(f))
    }
}
