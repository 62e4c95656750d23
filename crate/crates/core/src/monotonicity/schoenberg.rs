use super::cm::{build_report_for, check_dunkl_cm, cm_grid, CMReport, CmMode, CmOptions};
use super::pd::{check_dunkl_pd, GramReport};
use crate::error::{DunklError, Result};
use crate::kernel::{Intertwiner, MultiplicityParam};
use crate::spec::{FunctionSpec, MeasureSpec};
use crate::transform::TransformConfig;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchoenbergReport {
    pub cm: CMReport,
    pub pd: GramReport,
    /// both halves pass, as the equivalence predicts for representable φ
    pub consistent: bool,
}

/// Runs the CM test on φ(x) = ∫E_k(−x, y)dμ(y) and the PD test on x ↦ φ(x²).
pub fn check_schoenberg(mu: &MeasureSpec, sigma: f64, n: usize, points: &[f64], cm: &CmOptions, cfg: &TransformConfig) -> Result<SchoenbergReport> {
    mu.validate()?;
    let phi = FunctionSpec::LaplaceDunkl(mu.clone());
    let cm = check_dunkl_cm(cfg.k, &phi, sigma, n, cm)?;
    let pd = check_dunkl_pd(&FunctionSpec::SquaredArgument(Box::new(phi)), points, cfg)?;
    let consistent = cm.verdict && pd.is_psd();
    Ok(SchoenbergReport { cm, pd, consistent })
}

/// A classical function with analytic derivatives ψ⁽ⁿ⁾.
pub trait DerivativeProvider: Sync {
    /// ψ⁽ⁿ⁾(x), or None when order n is not supplied.
    fn derivative(&self, n: usize, x: f64) -> Option<f64>;
}

/// ψ(x) = a·e^{−cx}; c = 0 gives the constant a.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpDecay {
    pub a: f64,
    pub c: f64,
}

impl DerivativeProvider for ExpDecay {
    fn derivative(&self, n: usize, x: f64) -> Option<f64> {
        Some(self.a * (-self.c).powi(n as i32) * (-self.c * x).exp())
    }
}

/// Checks (−1)ⁿ T_kⁿ(V_kψ) ≥ 0 on (−σ, σ) for n ≤ N, computing T_kⁿ V_kψ as V_k(ψ⁽ⁿ⁾).
pub fn check_vk_preserves_cm(k: MultiplicityParam, psi: &dyn DerivativeProvider, sigma: f64, n: usize, opts: &CmOptions) -> Result<CMReport> {
    let grid = cm_grid(sigma, opts.grid_size)?;
    let v = Intertwiner::new(k, Intertwiner::DEFAULT_NODES)?;
    let jobs: Vec<(usize, f64)> = (0..=n).flat_map(|m| grid.iter().map(move |&x| (m, x))).collect();
    let flat: Vec<f64> =
        jobs.par_iter().map(|&(m, x)| v.try_apply(|t| psi.derivative(m, t).ok_or(DunklError::MissingDerivative(m)), x)).collect::<Result<_>>()?;
    let rows = flat.chunks(grid.len()).map(<[f64]>::to_vec).collect();
    Ok(build_report_for(k, sigma, grid, rows, CmMode::Exact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::dunkl_kernel;
    use crate::quadrature::QuadratureConfig;

    fn kp(k: f64) -> MultiplicityParam {
        MultiplicityParam::new(k).unwrap()
    }

    #[test]
    fn single_atom() {
        let cfg = TransformConfig::new(kp(1.0), QuadratureConfig::default()).unwrap();
        let r = check_schoenberg(&MeasureSpec::atom(1.0, 1.0), 2.0, 6, &[-0.5, 0.0, 0.7], &CmOptions::default(), &cfg).unwrap();
        assert!(r.cm.verdict);
        assert!(r.pd.gram.iter().flatten().all(|z| z.re.is_finite()));
    }

    #[test]
    fn zero_measure() {
        let cfg = TransformConfig::new(kp(1.0), QuadratureConfig::default()).unwrap();
        let r = check_schoenberg(&MeasureSpec::zero(), 2.0, 4, &[-1.0, 1.0], &CmOptions::default(), &cfg).unwrap();
        assert!(r.consistent);
        assert!(r.pd.gram.iter().flatten().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn vk_of_exponential_is_kernel() {
        let k = kp(1.0);
        let psi = ExpDecay { a: 1.0, c: 1.0 };
        let r = check_vk_preserves_cm(k, &psi, 2.0, 6, &CmOptions::default()).unwrap();
        assert!(r.verdict);
        let v = Intertwiner::new(k, 64).unwrap();
        for x in [-1.5, 0.3, 1.9] {
            let a = v.apply(|t| (-t).exp(), x);
            assert!((a - dunkl_kernel(k, -x, 1.0).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn constant_and_steeper_exponential() {
        let one = check_vk_preserves_cm(kp(1.0), &ExpDecay { a: 1.0, c: 0.0 }, 2.0, 4, &CmOptions::default()).unwrap();
        assert!(one.verdict);
        assert!((one.per_order_min[0] - 1.0).abs() < 1e-14);
        assert!(one.per_order_min[1..].iter().all(|&m| m.abs() < 1e-14));
        let r = check_vk_preserves_cm(kp(0.5), &ExpDecay { a: 1.0, c: 3.0 }, 2.0, 4, &CmOptions::default()).unwrap();
        assert!(r.verdict);
    }

    struct FirstOnly;
    impl DerivativeProvider for FirstOnly {
        fn derivative(&self, n: usize, x: f64) -> Option<f64> {
            (n <= 1).then(|| if n == 0 { (-x).exp() } else { -(-x).exp() })
        }
    }

    #[test]
    fn missing_derivative() {
        assert_eq!(check_vk_preserves_cm(kp(1.0), &FirstOnly, 1.0, 3, &CmOptions::default()), Err(DunklError::MissingDerivative(2)));
    }
}
