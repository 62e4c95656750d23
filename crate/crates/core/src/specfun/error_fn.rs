use super::gamma::gamma_fn;
use crate::error::{DunklError, Result};
use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 2.5;

// erf(x) = (2/√π) e^{-x²} Σ 2^n x^{2n+1} / (1·3···(2n+1)), all terms positive.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..500 {
        term *= 2.0 * x2 / (2.0 * n as f64 + 1.0);
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    2.0 / PI.sqrt() * (-x2).exp() * sum
}

// Modified Lentz evaluation of erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), x > 0.
fn erfc_cf(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..500 {
        let a = 0.5 * n as f64;
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

/// Error function.
pub fn erf_fn(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.abs() <= SERIES_LIMIT {
        erf_series(x.abs()).copysign(x)
    } else {
        (1.0 - erfc_cf(x.abs())).copysign(x)
    }
}

/// Complementary error function, computed without cancellation for large positive x.
pub fn erfc_fn(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.abs() <= SERIES_LIMIT {
        1.0 - erf_fn(x)
    } else if x > 0.0 {
        erfc_cf(x)
    } else {
        2.0 - erfc_cf(-x)
    }
}

/// Lower incomplete gamma γ(a, z) for a > 0, z ≥ 0.
pub fn lower_incomplete_gamma(a: f64, z: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(DunklError::Domain(format!("incomplete gamma with a = {a}")));
    }
    if !(z >= 0.0) {
        return Err(DunklError::Domain(format!("incomplete gamma with z = {z}")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let prefactor = (a * z.ln() - z).exp();
    if z < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = term;
        for n in 1..1000 {
            term *= z / (a + n as f64);
            sum += term;
            if term <= 1e-17 * sum {
                return Ok(prefactor * sum);
            }
        }
        return Err(DunklError::NonConvergence(format!("γ({a}, {z}) series")));
    }
    // Γ(a, z) by Lentz on the Legendre continued fraction
    let tiny = 1e-300;
    let mut b = z + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..1000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            return Ok(gamma_fn(a)? - prefactor * h);
        }
    }
    Err(DunklError::NonConvergence(format!("Γ({a}, {z}) continued fraction")))
}
