use crate::error::{DunklError, Result};
use crate::kernel::{dunkl_operator_power_numeric, MultiplicityParam, NUMERIC_ORDER_CAP};
use crate::quadrature::QuadratureConfig;
use crate::spec::FunctionSpec;
use rayon::prelude::*;
use serde::Serialize;

pub const DEFAULT_GRID_SIZE: usize = 41;
/// Largest order accepted in exact mode.
pub const EXACT_ORDER_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CmMode {
    /// T_kⁿ through the eigenrelation; needs a structured spec.
    Exact,
    /// Nested finite differences, n ≤ 4.
    Numeric,
    /// Exact when the spec is structured, numeric otherwise.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CmOptions {
    pub grid_size: usize,
    pub mode: CmMode,
    pub quad: QuadratureConfig,
}

impl Default for CmOptions {
    fn default() -> Self {
        Self { grid_size: DEFAULT_GRID_SIZE, mode: CmMode::Auto, quad: QuadratureConfig::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub n: usize,
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CMReport {
    pub k: f64,
    pub sigma: f64,
    pub orders_checked: usize,
    pub grid: Vec<f64>,
    /// min over the grid of (−1)ⁿ T_kⁿ φ, n = 0..=N
    pub per_order_min: Vec<f64>,
    /// max over the grid of |T_kⁿ φ|
    pub per_order_scale: Vec<f64>,
    pub tolerances: Vec<f64>,
    pub verdict: bool,
    pub first_violation: Option<Violation>,
    pub mode: CmMode,
}

impl CMReport {
    pub fn passed(&self) -> bool {
        self.verdict
    }
}

/// Chebyshev–Lobatto points on [−σ+δ, σ−δ], δ = 10⁻³σ, with 0 included.
pub fn cm_grid(sigma: f64, size: usize) -> Result<Vec<f64>> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(DunklError::Parameter(format!("sigma = {sigma} must be positive")));
    }
    if size < 2 {
        return Err(DunklError::Parameter(format!("grid size {size} must be at least 2")));
    }
    let c = sigma * (1.0 - 1e-3);
    let m = (size - 1) as f64;
    let mut g: Vec<f64> = (0..size)
        .map(|i| {
            let v = -c * (std::f64::consts::PI * i as f64 / m).cos();
            if v.abs() < 1e-14 * c {
                0.0
            } else {
                v
            }
        })
        .collect();
    if !g.contains(&0.0) {
        g.push(0.0);
        g.sort_by(f64::total_cmp);
    }
    Ok(g)
}

fn resolve_mode(phi: &FunctionSpec, n: usize, mode: CmMode) -> Result<CmMode> {
    let mode = match mode {
        CmMode::Auto if phi.is_structured() => CmMode::Exact,
        CmMode::Auto => CmMode::Numeric,
        m => m,
    };
    match mode {
        CmMode::Exact if !phi.is_structured() => Err(DunklError::Structure(format!("exact mode needs a structured spec, got {}", phi.kind()))),
        CmMode::Exact if n > EXACT_ORDER_CAP => Err(DunklError::OrderCap { requested: n, cap: EXACT_ORDER_CAP }),
        CmMode::Numeric if n > NUMERIC_ORDER_CAP => Err(DunklError::Mode(format!("numeric mode allows N ≤ {NUMERIC_ORDER_CAP}, got {n}"))),
        m => Ok(m),
    }
}

/// T_kⁿφ(x) for n = 0..=N at every grid point, row per order.
fn powers(k: MultiplicityParam, phi: &FunctionSpec, n_max: usize, grid: &[f64], mode: CmMode, quad: &QuadratureConfig) -> Result<Vec<Vec<f64>>> {
    let jobs: Vec<(usize, f64)> = (0..=n_max).flat_map(|n| grid.iter().map(move |&x| (n, x))).collect();
    let flat: Vec<f64> = jobs
        .par_iter()
        .map(|&(n, x)| {
            let v = match mode {
                CmMode::Exact => phi.exact_power(k, n, x, quad)?,
                _ => {
                    let f = |t: f64| phi.eval(k, t, quad).unwrap_or(f64::NAN);
                    dunkl_operator_power_numeric(k, &f, n, x)?.value
                }
            };
            if v.is_finite() {
                Ok(v)
            } else {
                Err(DunklError::NonFinite(format!("T_k^{n} {} at x = {x}", phi.kind())))
            }
        })
        .collect::<Result<_>>()?;
    Ok(flat.chunks(grid.len()).map(<[f64]>::to_vec).collect())
}

fn tolerance(mode: CmMode, n: usize, scale: f64) -> f64 {
    match mode {
        CmMode::Exact => 1e-10 * scale.max(1.0),
        _ => 1e-6 * 10f64.powi(n as i32) * scale.max(1.0),
    }
}

fn build_report(k: MultiplicityParam, sigma: f64, grid: Vec<f64>, rows: Vec<Vec<f64>>, mode: CmMode, alternate: bool) -> CMReport {
    let mut per_order_min = Vec::with_capacity(rows.len());
    let mut per_order_scale = Vec::with_capacity(rows.len());
    let mut tolerances = Vec::with_capacity(rows.len());
    let mut first_violation = None;
    for (n, row) in rows.iter().enumerate() {
        let sign = if alternate && n % 2 == 1 { -1.0 } else { 1.0 };
        let scale = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = tolerance(mode, n, scale);
        let mut min = f64::INFINITY;
        for (&x, &v) in grid.iter().zip(row) {
            let s = sign * v;
            min = min.min(s);
            if first_violation.is_none() && s < -tol {
                first_violation = Some(Violation { n, x, value: s });
            }
        }
        per_order_min.push(min);
        per_order_scale.push(scale);
        tolerances.push(tol);
    }
    CMReport {
        k: k.value(),
        sigma,
        orders_checked: rows.len() - 1,
        grid,
        per_order_min,
        per_order_scale,
        tolerances,
        verdict: first_violation.is_none(),
        first_violation,
        mode,
    }
}

pub(super) fn build_report_for(k: MultiplicityParam, sigma: f64, grid: Vec<f64>, rows: Vec<Vec<f64>>, mode: CmMode) -> CMReport {
    build_report(k, sigma, grid, rows, mode, true)
}

/// Tests (−1)ⁿ T_kⁿ φ ≥ −tol(n) for n = 0..=N on a caller-supplied grid inside (−σ, σ).
pub fn check_dunkl_cm_on_grid(k: MultiplicityParam, phi: &FunctionSpec, sigma: f64, n: usize, grid: Vec<f64>, opts: &CmOptions) -> Result<CMReport> {
    phi.validate()?;
    if grid.is_empty() || grid.iter().any(|x| !(x.abs() < sigma)) {
        return Err(DunklError::Parameter(format!("grid must be nonempty and inside the open interval (−{sigma}, {sigma})")));
    }
    let mode = resolve_mode(phi, n, opts.mode)?;
    let rows = powers(k, phi, n, &grid, mode, &opts.quad)?;
    Ok(build_report(k, sigma, grid, rows, mode, true))
}

/// Dunkl complete monotonicity up to order N on the default grid of (−σ, σ).
pub fn check_dunkl_cm(k: MultiplicityParam, phi: &FunctionSpec, sigma: f64, n: usize, opts: &CmOptions) -> Result<CMReport> {
    let grid = cm_grid(sigma, opts.grid_size)?;
    check_dunkl_cm_on_grid(k, phi, sigma, n, grid, opts)
}

/// The same test without sign alternation: T_kⁿ φ ≥ −tol(n) for all n.
pub fn check_dunkl_am(k: MultiplicityParam, phi: &FunctionSpec, sigma: f64, n: usize, opts: &CmOptions) -> Result<CMReport> {
    phi.validate()?;
    let grid = cm_grid(sigma, opts.grid_size)?;
    let mode = resolve_mode(phi, n, opts.mode)?;
    let rows = powers(k, phi, n, &grid, mode, &opts.quad)?;
    Ok(build_report(k, sigma, grid, rows, mode, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{MeasureSpec, Parity};

    fn kp(k: f64) -> MultiplicityParam {
        MultiplicityParam::new(k).unwrap()
    }

    #[test]
    fn grid_shape() {
        let g = cm_grid(5.0, 41).unwrap();
        assert_eq!(g.len(), 41);
        assert!(g.contains(&0.0));
        assert!((g[0] + 4.995).abs() < 1e-12 && (g[40] - 4.995).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(cm_grid(1.0, 4).unwrap().len(), 5);
    }

    #[test]
    fn kernel_example_passes() {
        let r = check_dunkl_cm(kp(1.0), &FunctionSpec::KernelDecaying { y: 2.0 }, 5.0, 10, &CmOptions::default()).unwrap();
        assert!(r.verdict);
        assert_eq!(r.mode, CmMode::Exact);
        assert!(r.per_order_min.iter().all(|&m| m > 0.0));
    }

    #[test]
    fn identity_fails_with_certificate() {
        let phi = FunctionSpec::raw("x", Parity::Odd, None, |x| x);
        let r = check_dunkl_cm(kp(1.0), &phi, 2.0, 2, &CmOptions::default()).unwrap();
        assert!(!r.verdict);
        let v = r.first_violation.unwrap();
        assert_eq!(v.n, 0);
        assert!(v.x < 0.0 && v.value < 0.0);
    }

    #[test]
    fn mills_ratio_passes() {
        let phi = FunctionSpec::LaplaceDunkl(MeasureSpec::density(0.25, 0.0, 1.0));
        let r = check_dunkl_cm(kp(0.0), &phi, 2.0, 8, &CmOptions::default()).unwrap();
        assert!(r.verdict, "{:?}", r.per_order_min);
    }

    #[test]
    fn mode_limits() {
        let phi = FunctionSpec::gaussian(1.0);
        assert!(matches!(check_dunkl_cm(kp(1.0), &phi, 1.0, 5, &CmOptions::default()), Err(DunklError::Mode(_))));
        let exact = CmOptions { mode: CmMode::Exact, ..CmOptions::default() };
        assert!(matches!(check_dunkl_cm(kp(1.0), &phi, 1.0, 2, &exact), Err(DunklError::Structure(_))));
        let kern = FunctionSpec::KernelDecaying { y: 1.0 };
        assert!(matches!(check_dunkl_cm(kp(1.0), &kern, 1.0, 13, &exact), Err(DunklError::OrderCap { .. })));
    }

    #[test]
    fn numeric_mode_agrees_on_kernel() {
        let kern = FunctionSpec::KernelDecaying { y: 1.5 };
        let num = CmOptions { mode: CmMode::Numeric, ..CmOptions::default() };
        let a = check_dunkl_cm(kp(0.7), &kern, 2.0, 3, &num).unwrap();
        let b = check_dunkl_cm(kp(0.7), &kern, 2.0, 3, &CmOptions::default()).unwrap();
        assert!(a.verdict && b.verdict);
        for (x, y) in a.per_order_min.iter().zip(&b.per_order_min) {
            assert!((x - y).abs() < 1e-4 * y.abs().max(1.0), "{x} {y}");
        }
    }

    #[test]
    fn gaussian_is_not_cm() {
        // e^{−x²} increases on x < 0
        let r = check_dunkl_cm(kp(0.5), &FunctionSpec::gaussian(1.0), 1.0, 2, &CmOptions::default()).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.first_violation.unwrap().n, 1);
    }
}
