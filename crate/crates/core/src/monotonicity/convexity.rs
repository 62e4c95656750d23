use super::cm::{check_dunkl_cm_on_grid, cm_grid, CMReport, CmMode, CmOptions, DEFAULT_GRID_SIZE};
use crate::error::{DunklError, Result};
use crate::kernel::NUMERIC_ORDER_CAP;
use crate::spec::{FunctionSpec, Parity};
use crate::transform::{dunkl_transform, inverse_intertwine, TransformConfig};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisCheck {
    /// nonnegative abscissae, ascending
    pub grid: Vec<f64>,
    /// h(y) = D_kφ(y)·|y|^{2k}
    pub values: Vec<f64>,
    /// min over consecutive pairs of (h(a) + h(b))/2 − h((a + b)/2)
    pub min_midpoint_gap: f64,
    pub convex: bool,
    /// |h| at 2R, 4R, 8R with R the largest grid point
    pub tail: Vec<f64>,
    pub decays: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum ConvexityOutcome {
    /// hypotheses not met; nothing is asserted
    TheoremSilent,
    Checked {
        /// W_kφ on the grid
        w_values: Vec<f64>,
        w_min: f64,
        w_nonnegative: bool,
        /// x ↦ φ(√|x|) on the positive half of (−R, R)
        sqrt_cm: Box<CMReport>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub k: f64,
    pub hypothesis: HypothesisCheck,
    pub outcome: ConvexityOutcome,
}

impl ConvexityReport {
    /// True when the hypotheses hold and both conclusions were observed.
    pub fn conclusions_hold(&self) -> bool {
        matches!(&self.outcome, ConvexityOutcome::Checked { w_nonnegative: true, sqrt_cm, .. } if sqrt_cm.verdict)
    }
}

fn weighted_transform(phi: &FunctionSpec, y: f64, cfg: &TransformConfig) -> Result<f64> {
    if let Some(t) = phi.known_transform(cfg.k) {
        return Ok(t.weighted(y));
    }
    let w = if cfg.weight_exponent == 0.0 { 1.0 } else { y.abs().powf(cfg.weight_exponent) };
    Ok(dunkl_transform(phi, y, cfg)?.value.re * w)
}

/// Checks the convexity criterion: if h = D_kφ·|y|^{2k} is convex on [0, ∞) and tends to 0,
/// then W_kφ ≥ 0 and φ(√|x|) is Dunkl completely monotonic.
///
/// `grid` holds nonnegative points; `cm_orders` ≤ 3 bounds the numeric CM test of φ(√|x|).
pub fn check_convexity_theorem(phi: &FunctionSpec, grid: &[f64], cm_orders: usize, cfg: &TransformConfig) -> Result<ConvexityReport> {
    phi.validate()?;
    if phi.parity() != Parity::Even {
        return Err(DunklError::Parameter(format!("convexity criterion needs an even function, got {}", phi.kind())));
    }
    if grid.len() < 2 || grid.iter().any(|&x| !(x >= 0.0 && x.is_finite())) || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(DunklError::Parameter("grid must hold at least two increasing nonnegative points".into()));
    }
    if cm_orders > NUMERIC_ORDER_CAP - 1 {
        return Err(DunklError::Mode(format!("the φ(√|x|) test runs in numeric mode with N ≤ 3, got {cm_orders}")));
    }
    let r = *grid.last().unwrap_or(&1.0);
    let mids: Vec<f64> = grid.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let tail_pts = [2.0 * r, 4.0 * r, 8.0 * r];
    let eval_all = |xs: &[f64]| xs.par_iter().map(|&y| weighted_transform(phi, y, cfg)).collect::<Result<Vec<f64>>>();
    let values = eval_all(grid)?;
    let mid_values = eval_all(&mids)?;
    let tail: Vec<f64> = eval_all(&tail_pts)?.into_iter().map(f64::abs).collect();

    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-10 * scale.max(f64::MIN_POSITIVE);
    let min_midpoint_gap = mid_values.iter().enumerate().map(|(i, &m)| 0.5 * (values[i] + values[i + 1]) - m).fold(f64::INFINITY, f64::min);
    let convex = min_midpoint_gap >= -tol;
    let decays = tail.windows(2).all(|w| w[1] <= w[0] + tol) && tail[2] <= 1e-8 * scale.max(f64::MIN_POSITIVE);
    let hypothesis = HypothesisCheck { grid: grid.to_vec(), values, min_midpoint_gap, convex, tail, decays };

    if !(convex && decays) {
        return Ok(ConvexityReport { k: cfg.k.value(), hypothesis, outcome: ConvexityOutcome::TheoremSilent });
    }

    let w_values = grid.par_iter().map(|&x| inverse_intertwine(phi, x, cfg).map(|z| z.re)).collect::<Result<Vec<f64>>>()?;
    let w_min = w_values.iter().copied().fold(f64::INFINITY, f64::min);
    let w_scale = w_values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let w_nonnegative = w_min >= -1e-10 * w_scale.max(1.0);

    // φ(√|x|) has a kink at 0; the test runs on the positive half of the interval
    let sqrt_phi = FunctionSpec::SqrtAbsArgument(Box::new(phi.clone()));
    let cm_pts: Vec<f64> = cm_grid(r, DEFAULT_GRID_SIZE)?.into_iter().filter(|&x| x >= 0.05 * r).collect();
    let opts = CmOptions { mode: CmMode::Numeric, quad: cfg.quad, ..CmOptions::default() };
    let sqrt_cm = check_dunkl_cm_on_grid(cfg.k, &sqrt_phi, r, cm_orders, cm_pts, &opts)?;

    Ok(ConvexityReport { k: cfg.k.value(), hypothesis, outcome: ConvexityOutcome::Checked { w_values, w_min, w_nonnegative, sqrt_cm: Box::new(sqrt_cm) } })
}
