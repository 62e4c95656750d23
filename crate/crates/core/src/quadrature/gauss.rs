use crate::error::{DunklError, Result};
use crate::specfun::beta;
use serde::{Deserialize, Serialize};

const MAX_LEGENDRE: usize = 512;
const MAX_JACOBI: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RuleFamily {
    Legendre,
    Jacobi { alpha: f64, beta: f64 },
    AdaptiveSimpson,
    SemiInfinite,
}

/// Nodes in increasing order with positive weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub family: RuleFamily,
}

impl QuadratureRule {
    /// Σ wᵢ f(xᵢ), summed pairwise.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).collect();
        pairwise_sum(&terms)
    }

    /// Rule applied on [a, b] by the affine map (Legendre only makes sense here).
    pub fn apply_on(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self.apply(|t| f(mid + half * t))
    }

    pub fn weight_sum(&self) -> f64 {
        pairwise_sum(&self.weights)
    }
}

pub(crate) fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let (l, r) = v.split_at(v.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

/// n-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre_rule(n: usize) -> Result<QuadratureRule> {
    if !(2..=MAX_LEGENDRE).contains(&n) {
        return Err(DunklError::OrderCap { requested: n, cap: MAX_LEGENDRE });
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut converged = false;
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let z1 = z;
            z = z1 - p / d;
            if (z - z1).abs() <= 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(DunklError::NewtonStall { index: i });
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d.is_finite() { d } else { dp };
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights, family: RuleFamily::Legendre })
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
    }
    let nf = n as f64;
    (p1, nf * (z * p1 - p2) / (z * z - 1.0))
}

// A point of [-1, 1] carried together with its distance to the nearer endpoint,
// so that 1 − z and 1 + z stay accurate for nodes crowding against ±1.
#[derive(Clone, Copy)]
enum Pt {
    Upper(f64), // z = 1 − u
    Lower(f64), // z = −1 + v
}

impl Pt {
    fn from_z(z: f64) -> Pt {
        if z >= 0.0 {
            Pt::Upper(1.0 - z)
        } else {
            Pt::Lower(1.0 + z)
        }
    }

    fn z(self) -> f64 {
        match self {
            Pt::Upper(u) => 1.0 - u,
            Pt::Lower(v) => v - 1.0,
        }
    }

    // c0 + c1 z without losing the small offset
    fn lin(self, c0: f64, c1: f64) -> f64 {
        match self {
            Pt::Upper(u) => (c0 + c1) - c1 * u,
            Pt::Lower(v) => (c0 - c1) + c1 * v,
        }
    }

    fn one_minus_z2(self) -> f64 {
        match self {
            Pt::Upper(u) => u * (2.0 - u),
            Pt::Lower(v) => v * (2.0 - v),
        }
    }

    // Newton update z ← z − δ
    fn step(self, delta: f64) -> Pt {
        match self {
            Pt::Upper(u) => Pt::Upper(u + delta),
            Pt::Lower(v) => Pt::Lower(v - delta),
        }
    }

    fn offset(self) -> f64 {
        match self {
            Pt::Upper(u) | Pt::Lower(u) => u,
        }
    }
}

// P_n^{(α,β)}, P_{n-1}^{(α,β)} and the derivative of P_n at the point.
fn jacobi_eval(n: usize, a: f64, b: f64, x: Pt) -> (f64, f64, f64) {
    let ab = a + b;
    let mut p1 = 0.5 * x.lin(a - b, 2.0 + ab);
    let mut p2 = 1.0;
    for j in 2..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        let t = 2.0 * jf + ab;
        let a1 = 2.0 * jf * (jf + ab) * (t - 2.0);
        let b1 = (t - 1.0) * x.lin(a * a - b * b, t * (t - 2.0));
        let c1 = 2.0 * (jf - 1.0 + a) * (jf - 1.0 + b) * t;
        p1 = (b1 * p2 - c1 * p3) / a1;
    }
    let nf = n as f64;
    let t = 2.0 * nf + ab;
    let dp = (nf * x.lin(a - b, -t) * p1 + 2.0 * (nf + a) * (nf + b) * p2) / (t * x.one_minus_z2());
    (p1, p2, dp)
}

// Christoffel number 1 / Σ_{j<n} p̂_j(x)² from the orthonormal three-term recurrence.
fn christoffel_weight(n: usize, a: f64, b: f64, mass: f64, x: Pt) -> f64 {
    let ab = a + b;
    let alpha_j = |j: usize| -> f64 {
        if j == 0 {
            (b - a) / (ab + 2.0)
        } else {
            let t = 2.0 * j as f64 + ab;
            (b * b - a * a) / (t * (t + 2.0))
        }
    };
    let beta_j = |j: usize| -> f64 {
        let jf = j as f64;
        let t = 2.0 * jf + ab;
        if j == 1 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
        } else {
            4.0 * jf * (jf + a) * (jf + b) * (jf + ab) / (t * t * (t + 1.0) * (t - 1.0))
        }
    };
    let mut prev = 0.0;
    let mut cur = 1.0 / mass.sqrt();
    let mut sum = cur * cur;
    let mut sqrt_beta_prev = 0.0;
    for j in 0..n - 1 {
        let sb = beta_j(j + 1).sqrt();
        let next = (x.lin(-alpha_j(j), 1.0) * cur - sqrt_beta_prev * prev) / sb;
        prev = cur;
        cur = next;
        sqrt_beta_prev = sb;
        sum += cur * cur;
    }
    1.0 / sum
}

/// n-point Gauss–Jacobi rule for the weight (1−t)^α (1+t)^β on [-1, 1].
#[allow(clippy::approx_constant)] // the initial-guess fit uses 6.28 as a plain coefficient
pub fn gauss_jacobi_rule(n: usize, alpha: f64, beta_: f64) -> Result<QuadratureRule> {
    if n == 0 || n > MAX_JACOBI {
        return Err(DunklError::OrderCap { requested: n, cap: MAX_JACOBI });
    }
    if !(alpha > -1.0 && beta_ > -1.0) {
        return Err(DunklError::Parameter(format!("Jacobi exponents ({alpha}, {beta_}) must exceed -1")));
    }
    let family = RuleFamily::Jacobi { alpha, beta: beta_ };
    let mass = 2f64.powf(alpha + beta_ + 1.0) * beta(alpha + 1.0, beta_ + 1.0)?;
    if n == 1 {
        let node = (beta_ - alpha) / (alpha + beta_ + 2.0);
        return Ok(QuadratureRule { nodes: vec![node], weights: vec![mass], family });
    }
    let (a, b) = (alpha, beta_);
    let nf = n as f64;
    // nodes are produced from the largest down
    let mut x: Vec<f64> = Vec::with_capacity(n);
    let mut w: Vec<f64> = Vec::with_capacity(n);
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => {
                let an = a / nf;
                let bn = b / nf;
                let r1 = (1.0 + a) * (2.78 / (4.0 + nf * nf) + 0.768 * an / nf);
                let r2 = 1.0 + 1.48 * an + 0.96 * bn + 0.452 * an * an + 0.83 * an * bn;
                1.0 - r1 / r2
            }
            1 => {
                let r1 = (4.1 + a) / ((1.0 + a) * (1.0 + 0.156 * a));
                let r2 = 1.0 + 0.06 * (nf - 8.0) * (1.0 + 0.12 * a) / nf;
                let r3 = 1.0 + 0.012 * b * (1.0 + 0.25 * a.abs()) / nf;
                z - (1.0 - z) * r1 * r2 * r3
            }
            2 => {
                let r1 = (1.67 + 0.28 * a) / (1.0 + 0.37 * a);
                let r2 = 1.0 + 0.22 * (nf - 8.0) / nf;
                let r3 = 1.0 + 8.0 * b / ((6.28 + b) * nf * nf);
                z - (x[0] - z) * r1 * r2 * r3
            }
            _ if i == n - 2 => {
                let r1 = (1.0 + 0.235 * b) / (0.766 + 0.119 * b);
                let r2 = 1.0 / (1.0 + 0.639 * (nf - 4.0) / (1.0 + 0.71 * (nf - 4.0)));
                let r3 = 1.0 / (1.0 + 20.0 * a / ((7.5 + a) * nf * nf));
                z + (z - x[i - 2]) * r1 * r2 * r3
            }
            _ if i == n - 1 => {
                let r1 = (1.0 + 0.37 * b) / (1.67 + 0.28 * b);
                let r2 = 1.0 / (1.0 + 0.22 * (nf - 8.0) / nf);
                let r3 = 1.0 / (1.0 + 8.0 * a / ((6.28 + a) * nf * nf));
                z + (z - x[i - 2]) * r1 * r2 * r3
            }
            _ => 3.0 * x[i - 1] - 3.0 * x[i - 2] + x[i - 3],
        };
        let mut pt = Pt::from_z(z);
        let mut converged = false;
        for _ in 0..200 {
            let (p, _, dp) = jacobi_eval(n, a, b, pt);
            let delta = p / dp;
            pt = pt.step(delta);
            if !pt.offset().is_finite() {
                break;
            }
            if delta.abs() <= 1e-15 * pt.offset().abs().max(1.0) {
                converged = true;
                break;
            }
        }
        // polish: the absolute stop above leaves nodes near ±1 short of full relative accuracy
        for _ in 0..3 {
            let (p, _, dp) = jacobi_eval(n, a, b, pt);
            let next = pt.step(p / dp);
            if next.offset().is_finite() && next.offset() > 0.0 {
                pt = next;
            }
        }
        z = pt.z();
        if !converged || !(pt.offset() > 0.0) || (i > 0 && z >= x[i - 1]) {
            return Err(DunklError::NewtonStall { index: i });
        }
        x.push(z);
        w.push(christoffel_weight(n, a, b, mass, pt));
    }
    x.reverse();
    w.reverse();
    if w.iter().any(|&v| !(v > 0.0)) {
        return Err(DunklError::NonConvergence("Gauss-Jacobi produced a non-positive weight".into()));
    }
    Ok(QuadratureRule { nodes: x, weights: w, family })
}
