//! Small dense Hermitian eigenvalue problems.

use crate::error::{DunklError, Result};
use num_complex::Complex64;

/// Largest accepted matrix dimension.
pub const MAX_DIM: usize = 16;
/// Relative Hermitian defect accepted before symmetrization.
pub const HERM_TOL: f64 = 1e-8;

fn square_dim(m: &[Vec<Complex64>]) -> Result<usize> {
    let n = m.len();
    if n == 0 || n > MAX_DIM {
        return Err(DunklError::Parameter(format!("matrix dimension {n} outside 1..={MAX_DIM}")));
    }
    if m.iter().any(|r| r.len() != n) {
        return Err(DunklError::Parameter("matrix is not square".into()));
    }
    if m.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(DunklError::NonFinite("matrix entry".into()));
    }
    Ok(n)
}

/// max |M − M*| relative to max |M| (0 for the zero matrix).
pub fn hermitian_defect(m: &[Vec<Complex64>]) -> f64 {
    let n = m.len();
    let mut scale = 0.0f64;
    let mut d = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            scale = scale.max(m[i][j].norm());
            d = d.max((m[i][j] - m[j][i].conj()).norm());
        }
    }
    if scale == 0.0 {
        0.0
    } else {
        d / scale
    }
}

/// (M + M*)/2.
pub fn symmetrize(m: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| (m[i][j] + m[j][i].conj()) * 0.5).collect()).collect()
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    let norm = a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return vec![0.0; n];
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off.sqrt() <= 1e-15 * norm {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..n {
                    let arp = a[r][p];
                    let arq = a[r][q];
                    a[r][p] = c * arp - s * arq;
                    a[r][q] = s * arp + c * arq;
                }
                for r in 0..n {
                    let apr = a[p][r];
                    let aqr = a[q][r];
                    a[p][r] = c * apr - s * aqr;
                    a[q][r] = s * apr + c * aqr;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Works on the real embedding [[A, −B], [B, A]] of A + iB, whose spectrum is that of the
/// matrix with every eigenvalue doubled.
pub fn hermitian_eigenvalues(m: &[Vec<Complex64>]) -> Result<Vec<f64>> {
    let n = square_dim(m)?;
    let defect = hermitian_defect(m);
    if defect > HERM_TOL {
        return Err(DunklError::NonHermitian { defect });
    }
    let h = symmetrize(m);
    let mut e = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let z = h[i][j];
            e[i][j] = z.re;
            e[i + n][j + n] = z.re;
            e[i][j + n] = -z.im;
            e[i + n][j] = z.im;
        }
    }
    let all = symmetric_eigenvalues(e);
    Ok(all.into_iter().step_by(2).collect())
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn hermitian_eigen_min(m: &[Vec<Complex64>]) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?[0])
}
