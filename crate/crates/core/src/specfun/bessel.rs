use super::gamma::{ln_gamma, rgamma};
use crate::error::{DunklError, Result};
use std::f64::consts::PI;

/// Largest |z| accepted by [`bessel_j`].
pub const BESSEL_J_MAX_Z: f64 = 1.0e4;

const SERIES_LIMIT: f64 = 5.0;
const HANKEL_CROSSOVER: f64 = 25.0;
const MAX_TERMS: usize = 500;
const STOP: f64 = 1e-17;

/// Bessel function of the first kind J_ν(z) for ν ≥ -1.
///
/// Supported domain: 0 ≤ z ≤ 1e4, and negative z when ν is an integer.
/// Ascending series up to z = 5, Miller backward recurrence between 5 and 25,
/// Hankel expansion from 25 on (when z ≥ 2ν², otherwise Miller).
pub fn bessel_j(nu: f64, z: f64) -> Result<f64> {
    if !(nu >= -1.0) || !nu.is_finite() {
        return Err(DunklError::Domain(format!("bessel_j order {nu} < -1")));
    }
    if !z.is_finite() || z.abs() > BESSEL_J_MAX_Z {
        return Err(DunklError::Domain(format!("bessel_j argument {z} outside [0, 1e4]")));
    }
    if z < 0.0 {
        if nu != nu.floor() {
            return Err(DunklError::Domain(format!("bessel_j of non-integer order {nu} at negative argument {z}")));
        }
        let v = bessel_j(nu, -z)?;
        return Ok(if (nu as i64) % 2 == 0 { v } else { -v });
    }
    if nu == -1.0 {
        return bessel_j(1.0, z).map(|v| -v);
    }
    if z == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if z <= SERIES_LIMIT {
        series(nu, z)
    } else if z >= HANKEL_CROSSOVER && z >= 2.0 * nu * nu {
        hankel(nu, z)
    } else {
        miller(nu, z)
    }
}

fn series(nu: f64, z: f64) -> Result<f64> {
    let q = -0.25 * z * z;
    // leading coefficient (z/2)^ν / Γ(ν+1); for ν+1 ≤ 0 only ν = -1 reaches here and is handled above
    let lead = (0.5 * z).powf(nu) * rgamma(nu + 1.0);
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..MAX_TERMS {
        let mf = m as f64;
        term *= q / (mf * (nu + mf));
        sum += term;
        if term.abs() <= STOP * sum.abs() {
            return Ok(lead * sum);
        }
    }
    Err(DunklError::NonConvergence(format!("bessel_j series nu={nu} z={z}")))
}

// Backward recurrence J_{μ-1} = (2μ/z) J_μ - J_{μ+1}, normalized with
// (z/2)^ν / Γ(ν+1) = Σ_k c_k J_{ν+2k}, c_0 = 1, c_k = (ν+2k)(ν+1)_{k-1}/k!.
fn miller(nu: f64, z: f64) -> Result<f64> {
    let start = (z + 30.0 + 3.0 * z.sqrt()).ceil() as usize + (nu.max(0.0).ceil() as usize);
    let start = start + (start % 2);
    let mut j_next = 0.0_f64; // J_{ν+n+1}
    let mut j_cur = 1e-300_f64; // J_{ν+n}
    let mut norm = 0.0_f64;
    // c_k for the current even index, computed downward requires a table: build upward first
    let half = start / 2;
    let mut c = Vec::with_capacity(half + 1);
    c.push(1.0);
    let mut poch = 1.0; // (ν+1)_{k-1}
    let mut fact = 1.0;
    for k in 1..=half {
        let kf = k as f64;
        if k >= 2 {
            poch *= nu + kf - 1.0;
        }
        fact *= kf;
        c.push((nu + 2.0 * kf) * poch / fact);
    }
    let mut n = start;
    loop {
        if n.is_multiple_of(2) {
            norm += c[n / 2] * j_cur;
        }
        if n == 0 {
            break;
        }
        let mu = nu + n as f64;
        let j_prev = 2.0 * mu / z * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        n -= 1;
        if j_cur.abs() > 1e250 {
            j_cur *= 1e-250;
            j_next *= 1e-250;
            norm *= 1e-250;
        }
    }
    let lhs = ((0.5 * z).ln() * nu - ln_gamma(nu + 1.0)?).exp();
    let v = j_cur * lhs / norm;
    if !v.is_finite() {
        return Err(DunklError::NonConvergence(format!("bessel_j Miller nu={nu} z={z}")));
    }
    Ok(v)
}

fn hankel(nu: f64, z: f64) -> Result<f64> {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (kf * 8.0 * z);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        // terms alternate between Q (odd k) and P (even k) with signs (-1)^{floor(k/2)}
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = z - (0.5 * nu + 0.25) * PI;
    Ok((2.0 / (PI * z)).sqrt() * (p * chi.cos() - q * chi.sin()))
}

/// Normalized Bessel function j_α(z) = Γ(α+1)(2/z)^α J_α(z), with j_α(0) = 1.
pub fn normalized_bessel(alpha: f64, z: f64) -> Result<f64> {
    if !(alpha >= -0.5) {
        return Err(DunklError::Domain(format!("normalized_bessel order {alpha} < -1/2")));
    }
    let z = z.abs();
    if z <= 6.0 {
        let q = -0.25 * z * z;
        let mut term = 1.0;
        let mut sum = 1.0;
        for m in 1..MAX_TERMS {
            let mf = m as f64;
            term *= q / (mf * (alpha + mf));
            sum += term;
            if term.abs() <= STOP * sum.abs() {
                return Ok(sum);
            }
        }
        return Err(DunklError::NonConvergence(format!("j_{alpha}({z})")));
    }
    let j = bessel_j(alpha, z)?;
    let scale = (ln_gamma(alpha + 1.0)? + alpha * (2.0 / z).ln()).exp();
    Ok(scale * j)
}

/// j_α(iz) = Σ (z²/4)^m / (m! (α+1)_m), real and ≥ 1.
pub fn normalized_bessel_i(alpha: f64, z: f64) -> Result<f64> {
    if !(alpha >= -0.5) {
        return Err(DunklError::Domain(format!("normalized_bessel_i order {alpha} < -1/2")));
    }
    let z = z.abs();
    let q = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..MAX_TERMS {
        let mf = m as f64;
        term *= q / (mf * (alpha + mf));
        sum += term;
        if term <= STOP * sum {
            return Ok(sum);
        }
        if !sum.is_finite() {
            break;
        }
    }
    // large z: Γ(α+1)(2/z)^α e^z / √(2πz) Σ_s (-1)^s a_s(α) / z^s
    let mu = 4.0 * alpha * alpha;
    let mut s = 1.0;
    let mut t = 1.0;
    for k in 1..40 {
        let odd = 2.0 * k as f64 - 1.0;
        let next = -t * (mu - odd * odd) / (k as f64 * 8.0 * z);
        if next.abs() > t.abs() {
            break;
        }
        t = next;
        s += t;
        if t.abs() < 1e-17 {
            break;
        }
    }
    let log = ln_gamma(alpha + 1.0)? + alpha * (2.0 / z).ln() + z - 0.5 * (2.0 * PI * z).ln();
    Ok(log.exp() * s)
}
