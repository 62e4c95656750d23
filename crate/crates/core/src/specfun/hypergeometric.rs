use super::dd::Dd;
use super::gamma::{gamma_fn, ln_gamma};
use crate::error::{DunklError, Result};

const MAX_TERMS: usize = 500;
const STOP: f64 = 1e-17;
const ASYMPTOTIC_Z: f64 = 50.0;

fn check_b(b: f64) -> Result<()> {
    if b <= 0.0 && b == b.floor() {
        return Err(DunklError::Parameter(format!("1F1 with b = {b}")));
    }
    Ok(())
}

/// Confluent hypergeometric function ₁F₁(a; b; z).
///
/// Negative z goes through the Kummer transformation e^z ₁F₁(b−a; b; −z).
/// Accuracy target is 1e-10 relative for |z| ≤ 50.
pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    check_b(b)?;
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(DunklError::NonFinite(format!("1F1({a}; {b}; {z})")));
    }
    if z < 0.0 {
        return Ok(z.exp() * positive_z(b - a, b, -z)?);
    }
    positive_z(a, b, z)
}

fn positive_z(a: f64, b: f64, z: f64) -> Result<f64> {
    if z == 0.0 || a == 0.0 {
        return Ok(1.0);
    }
    if a == b {
        return Ok(z.exp());
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * z / ((b + nf) * (nf + 1.0));
        sum += term;
        if term == 0.0 || term.abs() <= STOP * sum.abs() {
            return Ok(sum);
        }
    }
    if z > ASYMPTOTIC_Z {
        return asymptotic(a, b, z);
    }
    Err(DunklError::NonConvergence(format!("1F1({a}; {b}; {z}) after {MAX_TERMS} terms")))
}

// Γ(b)/Γ(a) e^z z^{a-b} Σ_s (b-a)_s (1-a)_s / (s! z^s), valid for large positive z.
fn asymptotic(a: f64, b: f64, z: f64) -> Result<f64> {
    let mut sum = 1.0;
    let mut term = 1.0;
    for s in 0..60 {
        let sf = s as f64;
        let next = term * (b - a + sf) * (1.0 - a + sf) / ((sf + 1.0) * z);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < STOP * sum.abs() {
            break;
        }
    }
    let sign_gb = gamma_fn(b)?.signum();
    let sign_ga = gamma_fn(a)?.signum();
    let log = ln_gamma(b)? - ln_gamma(a)? + z + (a - b) * z.ln();
    Ok(sign_gb * sign_ga * log.exp() * sum)
}

/// ₁F₁ by the plain power series at any sign of z, summed in double-double.
///
/// Independent of [`kummer_1f1`]; intended as a cross-check oracle for moderate |z|.
pub fn kummer_1f1_direct(a: f64, b: f64, z: f64) -> Result<f64> {
    check_b(b)?;
    let zd = Dd::from_f64(z);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut max_term = 1.0_f64;
    for n in 0..4 * MAX_TERMS {
        let nf = Dd::from_f64(n as f64);
        let num = Dd::from_f64(a).add(nf).mul(zd);
        let den = Dd::from_f64(b).add(nf).mul(nf.add(Dd::ONE));
        term = term.mul(num).div(den);
        sum = sum.add(term);
        max_term = max_term.max(term.hi.abs());
        if term.hi == 0.0 || term.abs().hi <= 1e-32 * sum.abs().hi.max(1e-300) {
            if max_term * 1e-30 > sum.hi.abs() {
                return Err(DunklError::NonConvergence(format!("direct 1F1({a}; {b}; {z}) lost all digits")));
            }
            return Ok(sum.to_f64());
        }
    }
    Err(DunklError::NonConvergence(format!("direct 1F1({a}; {b}; {z})")))
}
