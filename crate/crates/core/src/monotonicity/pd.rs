use crate::error::{DunklError, Result};
use crate::linalg::{hermitian_defect, hermitian_eigenvalues, symmetrize, HERM_TOL};
use crate::spec::{FunctionSpec, Parity};
use crate::transform::{dunkl_translate, ProductTranslator, TransformConfig};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

pub const MAX_POINTS: usize = 12;
/// min eigenvalue ≥ −PSD_TOL·max diagonal counts as positive semidefinite.
pub const PSD_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TranslationRoute {
    /// inverse transform of E_k(−iy, ·) D_kφ
    Transform,
    /// Beta-weighted average over the product formula
    ProductFormula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GramVerdict {
    Psd,
    Indefinite,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramReport {
    pub k: f64,
    pub points: Vec<f64>,
    /// G[j][l] = τ_{x_j}φ(x_l), row-major
    pub gram: Vec<Vec<Complex64>>,
    /// ascending
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub max_diagonal: f64,
    pub hermitian_defect: f64,
    pub route: TranslationRoute,
    pub verdict: GramVerdict,
}

impl GramReport {
    pub fn is_psd(&self) -> bool {
        self.verdict == GramVerdict::Psd
    }

    /// min eigenvalue over max diagonal entry.
    pub fn relative_min(&self) -> f64 {
        if self.max_diagonal > 0.0 {
            self.min_eigenvalue / self.max_diagonal
        } else {
            self.min_eigenvalue
        }
    }
}

/// Dunkl positive definiteness of an even real φ at the given points.
///
/// Uses the transform route when φ has a closed-form or declared spectrum, the product
/// formula otherwise.
pub fn check_dunkl_pd(phi: &FunctionSpec, points: &[f64], cfg: &TransformConfig) -> Result<GramReport> {
    phi.validate()?;
    let n = points.len();
    if n == 0 || n > MAX_POINTS {
        return Err(DunklError::Parameter(format!("need 1..={MAX_POINTS} points, got {n}")));
    }
    if let Some(&x) = points.iter().find(|x| !x.is_finite()) {
        return Err(DunklError::NonFinite(format!("point {x}")));
    }
    for (i, &a) in points.iter().enumerate() {
        if points[..i].contains(&a) {
            return Err(DunklError::DuplicatePoint(a));
        }
    }
    if phi.parity() != Parity::Even {
        return Err(DunklError::Parameter(format!("positive definiteness is checked for even real functions only, got {}", phi.kind())));
    }
    let route = if phi.known_transform(cfg.k).is_some() || (cfg.spectral_envelope.is_some() && phi.envelope().is_some()) {
        TranslationRoute::Transform
    } else {
        TranslationRoute::ProductFormula
    };
    let product = match route {
        TranslationRoute::ProductFormula => Some(ProductTranslator::new(cfg.k, ProductTranslator::DEFAULT_NODES)?),
        TranslationRoute::Transform => None,
    };
    let pairs: Vec<(f64, f64)> = points.iter().flat_map(|&y| points.iter().map(move |&x| (y, x))).collect();
    let flat: Vec<Complex64> = pairs
        .par_iter()
        .map(|&(y, x)| match &product {
            Some(t) => t.translate(phi, y, x, &cfg.quad).map(|v| Complex64::new(v, 0.0)),
            None => dunkl_translate(phi, y, x, cfg),
        })
        .collect::<Result<_>>()?;
    let gram: Vec<Vec<Complex64>> = flat.chunks(n).map(<[Complex64]>::to_vec).collect();
    let defect = hermitian_defect(&gram);
    let eigenvalues = hermitian_eigenvalues(&symmetrize(&gram))?;
    let min_eigenvalue = eigenvalues[0];
    let max_diagonal = (0..n).map(|i| gram[i][i].re).fold(f64::NEG_INFINITY, f64::max);
    let psd = min_eigenvalue >= -PSD_TOL * max_diagonal.max(0.0) && defect <= HERM_TOL;
    Ok(GramReport {
        k: cfg.k.value(),
        points: points.to_vec(),
        gram,
        eigenvalues,
        min_eigenvalue,
        max_diagonal,
        hermitian_defect: defect,
        route,
        verdict: if psd { GramVerdict::Psd } else { GramVerdict::Indefinite },
    })
}
