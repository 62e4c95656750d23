//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any criterion fails.

use dunklkit::kernel::{
    dunkl_kernel, dunkl_kernel_bessel_form, dunkl_kernel_osc, dunkl_operator_numeric, dunkl_operator_power_exact, intertwine, Intertwiner, MultiplicityParam,
};
use dunklkit::kummer::{adjudicate_theorem6, psi_kp, sonine_classical, sonine_quadrature, ClosedForm, Combination, KummerParams, RhoChoice};
use dunklkit::monotonicity::{check_dunkl_cm, check_dunkl_pd, check_schoenberg, CmMode, CmOptions};
use dunklkit::quadrature::{integrate_semi_infinite, Envelope, QuadratureConfig};
use dunklkit::spec::{psi_measure, Atom, FunctionSpec, MeasureSpec, NamedFunction, Parity};
use dunklkit::specfun::{bessel_j, erf_fn, erfc_fn, kummer_1f1, kummer_1f1_direct, normalized_bessel_i};
use dunklkit::transform::{dunkl_transform, dunkl_translate_real, inverse_intertwine, SampledFunction, TransformConfig};
use dunklkit::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn kp(k: f64) -> MultiplicityParam {
    MultiplicityParam::new(k).unwrap()
}

fn tc(k: f64) -> TransformConfig {
    TransformConfig::new(kp(k), QuadratureConfig::default()).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn triples(seed: u64, n: usize, kmax: f64, r: f64) -> Vec<(f64, f64, f64)> {
    let mut g = rng(seed);
    (0..n).map(|_| (g.gen_range(0.0..kmax), g.gen_range(-r..r), g.gen_range(-r..r))).collect()
}

fn kernel_bound() -> Outcome {
    let mut worst = 0.0f64;
    for (k, x, y) in triples(1, 200, 3.0, 5.0) {
        worst = worst.max(dunkl_kernel_osc(kp(k), x, y).map_err(|e| e.to_string())?.norm());
    }
    check(worst <= 1.0 + 1e-10, format!("max |E_k(-ix,y)| = {worst:.15}"))
}

fn kernel_growth() -> Outcome {
    let mut worst = 0.0f64;
    let mut min = f64::INFINITY;
    for (k, x, y) in triples(1, 200, 3.0, 5.0) {
        let e = dunkl_kernel(kp(k), x, y).map_err(|e| e.to_string())?;
        worst = worst.max(e / (x.abs() * y.abs()).exp());
        min = min.min(e);
    }
    check(worst <= 1.0 + 1e-12 && min > 0.0, format!("max E/e^(|x||y|) = {worst:.15}, min E = {min:e}"))
}

fn eigenrelation() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut exact = 0.0f64;
    let mut analytic = 0.0f64;
    let mut numeric = 0.0f64;
    for (k, x, y) in triples(3, 50, 3.0, 2.0) {
        let kk = kp(k);
        // x ↦ E_k(−x, |y|) through the structured route
        let t = y.abs();
        let want = -t * dunkl_kernel(kk, -x, t).unwrap();
        let got = dunkl_operator_power_exact(kk, &FunctionSpec::KernelDecaying { y: t }, 1, x, &cfg).unwrap();
        exact = exact.max((got - want).abs() / want.abs().max(1.0));
        // T_k of E_k(·, y) from the derivative rule for normalized Bessel functions
        let u = x * y;
        let m = normalized_bessel_i(k + 0.5, u).unwrap();
        let l = u * u / ((2.0 * k + 1.0) * (2.0 * k + 3.0)) * normalized_bessel_i(k + 1.5, u).unwrap();
        let o = u / (2.0 * k + 1.0) * m;
        let te = y * (m + l + o);
        let ye = y * dunkl_kernel(kk, x, y).unwrap();
        analytic = analytic.max((te - ye).abs() / (y.abs() * (m.abs() + l.abs() + o.abs())).max(1.0));
        let f = |s: f64| dunkl_kernel(kk, s, y).unwrap();
        numeric = numeric.max((dunkl_operator_numeric(kk, &f, x, None).value - ye).abs());
    }
    check(exact <= 1e-12 && analytic <= 1e-12 && numeric <= 1e-6, format!("exact {exact:e}, bessel-rule {analytic:e}, numeric {numeric:e}"))
}

fn two_representations() -> Outcome {
    let mut worst = 0.0f64;
    for k in [0.3, 1.0, 2.5] {
        for x in linspace(-2.0, 2.0, 9) {
            for y in linspace(-2.0, 2.0, 9) {
                let b = dunkl_kernel_bessel_form(kp(k), x, y).unwrap();
                let v = intertwine(kp(k), |s| (s * y).exp(), x, 64).unwrap();
                worst = worst.max(rel(v, b));
            }
        }
    }
    check(worst <= 1e-9, format!("max relative difference {worst:e}"))
}

fn fixed_point() -> Outcome {
    let g = FunctionSpec::gaussian(0.5);
    let mut worst = 0.0f64;
    for k in [0.0, 0.5, 1.0, 2.5] {
        let cfg = tc(k);
        for xi in linspace(-4.0, 4.0, 41) {
            let v = dunkl_transform(&g, xi, &cfg).map_err(|e| e.to_string())?.value;
            worst = worst.max((v - Complex64::new((-0.5 * xi * xi).exp(), 0.0)).norm());
        }
    }
    check(worst <= 1e-8, format!("sup error {worst:e}"))
}

fn plancherel() -> Outcome {
    let mut worst = 0.0f64;
    for k in [0.0, 0.5, 1.0, 2.5] {
        let cfg = tc(k);
        let w = 2.0 * k;
        // ∫ D_k(e^{−a·²}) e^{−b·²} |y|^{2k} on ℝ
        let pair = |a: f64, b: f64| {
            let env = Envelope { sigma: 0.0, p: b, rho: w, scale: (2.0 * a).powf(-(k + 0.5)) };
            let fa = FunctionSpec::gaussian(a);
            2.0 * integrate_semi_infinite(|y| dunkl_transform(&fa, y, &cfg).unwrap().value.re * (-b * y * y).exp() * y.powf(w), &env, &cfg.quad).unwrap()
        };
        for (a, b) in [(0.5, 0.5), (0.3, 1.7), (1.0, 0.25)] {
            worst = worst.max(rel(pair(a, b), pair(b, a)));
        }
        // ‖D_k f‖² = ‖f‖² for f = e^{−·²/2}·e^{−·²/4}
        let f = FunctionSpec::gaussian(0.75);
        let env = Envelope { sigma: 0.0, p: 0.0, rho: w, scale: 1.0 };
        let norm_t = 2.0
            * integrate_semi_infinite(|y| dunkl_transform(&f, y, &cfg).unwrap().value.re.powi(2) * y.powf(w), &Envelope { p: 1.0 / 3.0, ..env }, &cfg.quad)
                .unwrap();
        let norm_f = 2.0 * integrate_semi_infinite(|y| (-1.5 * y * y).exp() * y.powf(w), &Envelope { p: 1.5, ..env }, &cfg.quad).unwrap();
        worst = worst.max(rel(norm_t, norm_f));
    }
    check(worst <= 1e-8, format!("max relative error {worst:e}"))
}

fn translation() -> Outcome {
    let g = FunctionSpec::gaussian(0.5);
    let mut spectral = 0.0f64;
    for (k, y) in [(0.5, 0.7), (1.5, -1.2)] {
        let cfg = tc(k);
        let s =
            SampledFunction::sample(kp(k), 14.0, 100, |x| dunkl_translate_real(&g, y, x, &cfg).map(|v| Complex64::new(v, 0.0))).map_err(|e| e.to_string())?;
        for xi in linspace(-3.0, 3.0, 21) {
            let lhs = s.dunkl_transform(kp(k), xi).unwrap();
            let rhs = dunkl_kernel_osc(kp(k), y, xi).unwrap() * (-0.5 * xi * xi).exp();
            spectral = spectral.max((lhs - rhs).norm());
        }
    }
    let mut product = 0.0f64;
    for (k, x, y) in triples(7, 20, 3.0, 3.0) {
        let v = dunkl_translate_real(&g, y, x, &tc(k)).map_err(|e| e.to_string())?;
        let want = (-0.5 * (x * x + y * y)).exp() * dunkl_kernel(kp(k), x, y).unwrap();
        product = product.max((v - want).abs() / want.abs().max(1.0));
    }
    check(spectral <= 1e-6 && product <= 1e-7, format!("spectral side {spectral:e}, product identity {product:e}"))
}

fn round_trip() -> Outcome {
    let g = FunctionSpec::gaussian(1.0);
    let mut worst = 0.0f64;
    for k in [0.5, 1.5] {
        let cfg = tc(k);
        let v = Intertwiner::new(kp(k), 64).unwrap();
        for x in linspace(-1.0, 1.0, 11) {
            let back = v.try_apply(|s| inverse_intertwine(&g, s, &cfg).map(|z| z.re), x).map_err(|e| e.to_string())?;
            worst = worst.max((back - (-x * x).exp()).abs());
        }
    }
    check(worst <= 1e-6, format!("max |V_k W_k g - g| = {worst:e}"))
}

fn random_measure(g: &mut ChaCha8Rng, tmax: f64) -> MeasureSpec {
    let n = g.gen_range(1..=4);
    let atoms = (0..n).map(|_| Atom { t: g.gen_range(0.0..tmax), w: g.gen_range(0.05..2.0) }).collect();
    MeasureSpec::new(atoms, None).unwrap()
}

fn cm_suite() -> Outcome {
    let exact = CmOptions { mode: CmMode::Exact, ..CmOptions::default() };
    let mut g = rng(9);
    let mut cases = Vec::new();
    for _ in 0..20 {
        let k = g.gen_range(0.0..2.5);
        cases.push((k, FunctionSpec::LaplaceDunkl(random_measure(&mut g, 3.0))));
    }
    for (k, p) in [(0.0, 0.25), (0.5, 1.0), (1.0, 4.0), (2.3, 0.5)] {
        cases.push((k, psi_measure(kp(k), p)));
    }
    let mut passed = 0;
    let mut scale_ok = true;
    for (k, phi) in &cases {
        let r = check_dunkl_cm(kp(*k), phi, 2.0, 10, &exact).map_err(|e| e.to_string())?;
        passed += r.verdict as usize;
        for c in [1e-3, 7.5, 1e3] {
            scale_ok &= check_dunkl_cm(kp(*k), &phi.clone().scaled(c), 2.0, 10, &exact).map_err(|e| e.to_string())?.verdict == r.verdict;
        }
    }
    let line = FunctionSpec::raw("x", Parity::Odd, None, |x| x);
    let mut certificates = 0;
    for k in [0.0, 1.0] {
        let r = check_dunkl_cm(kp(k), &line, 1.0, 4, &CmOptions::default()).map_err(|e| e.to_string())?;
        certificates += (!r.verdict && r.first_violation.is_some()) as usize;
        for c in [1e-3, 7.5, 1e3] {
            scale_ok &= check_dunkl_cm(kp(k), &line.clone().scaled(c), 1.0, 4, &CmOptions::default()).map_err(|e| e.to_string())?.verdict == r.verdict;
        }
    }
    check(
        passed == cases.len() && certificates == 2 && scale_ok,
        format!("{passed}/{} measures CM to N=10, {certificates}/2 certificates for x, scaling invariant: {scale_ok}", cases.len()),
    )
}

fn distinct_points(g: &mut ChaCha8Rng, max: usize, r: f64) -> Vec<f64> {
    let n = g.gen_range(2..=max);
    let mut pts: Vec<f64> = Vec::new();
    while pts.len() < n {
        let x = g.gen_range(-r..r);
        if pts.iter().all(|&p| (p - x).abs() > 1e-3) {
            pts.push(x);
        }
    }
    pts
}

fn pd_suite() -> Outcome {
    let mut g = rng(10);
    let mut lines = Vec::new();
    let mut ok = true;
    for k in [0.0, 1.0] {
        let cfg = tc(k);
        for t in [0.5, 1.0, 2.0] {
            let phi = FunctionSpec::Named(NamedFunction::KernelOfSquare { t });
            let mut worst = f64::INFINITY;
            let mut bad = 0;
            for _ in 0..20 {
                let pts = distinct_points(&mut g, 6, 2.0);
                let r = check_dunkl_pd(&phi, &pts, &cfg).map_err(|e| e.to_string())?;
                worst = worst.min(r.relative_min());
                bad += !r.is_psd() as usize;
                if k == 0.0 {
                    // classical translates are ordinary shifts
                    for (j, &a) in pts.iter().enumerate() {
                        for (l, &b) in pts.iter().enumerate() {
                            let want = (-t * t * (a - b) * (a - b)).exp();
                            ok &= (r.gram[j][l] - Complex64::new(want, 0.0)).norm() <= 1e-12;
                        }
                    }
                }
            }
            let single = check_dunkl_pd(&phi, &[g.gen_range(-2.0..2.0)], &cfg).map_err(|e| e.to_string())?;
            ok &= single.is_psd() && single.eigenvalues[0] == single.gram[0][0].re;
            ok &= bad == 0;
            lines.push(format!("k={k} t={t}: {bad}/20 indefinite, min eig/max diag {worst:.3e}"));
        }
    }
    check(ok, lines.join("; "))
}

fn schoenberg() -> Outcome {
    let mut g = rng(11);
    let mut lines = Vec::new();
    let mut all = true;
    for k in [0.5, 2.0] {
        let cfg = tc(k);
        let (mut cm_pass, mut pd_pass) = (0, 0);
        for _ in 0..20 {
            let mu = random_measure(&mut g, 2.0);
            let pts = distinct_points(&mut g, 5, 1.5);
            let r = check_schoenberg(&mu, 2.0, 8, &pts, &CmOptions::default(), &cfg).map_err(|e| e.to_string())?;
            cm_pass += r.cm.verdict as usize;
            pd_pass += r.pd.is_psd() as usize;
            all &= r.consistent;
        }
        lines.push(format!("k={k}: CM {cm_pass}/20, PD of phi(x^2) {pd_pass}/20"));
    }
    check(all, lines.join("; "))
}

fn adjudication() -> Outcome {
    let cfg = QuadratureConfig::default();
    let xs = linspace(-3.0, 3.0, 25);
    let r = adjudicate_theorem6(&[0.5, 1.0, 2.3], &[0.25, 1.0, 4.0], &xs, 3.0, 8, &cfg).map_err(|e| e.to_string())?;
    let psi = Combination { form: ClosedForm::Psi, rho: RhoChoice::TwoK, sign: -1 };
    let cm_all = r.cases.iter().all(|c| c.cm_verdict == Some(true));
    let mut classical = 0.0f64;
    let q = KummerParams::new(0.0, 0.25).unwrap();
    for x in linspace(-2.0, 2.0, 41) {
        let want = PI.sqrt() * (x * x).exp() * erfc_fn(x);
        classical = classical.max((psi_kp(q, x).unwrap() - want).abs() / want.max(1.0));
    }
    check(
        r.exactly_one && r.matched_combination == Some(psi) && cm_all && classical <= 1e-10,
        format!(
            "one distinct match per case: {}, matched {:?}, CM N=8 on all 9 cases: {cm_all}, k=0 erfc identity {classical:e}",
            r.exactly_one, r.matched_combination
        ),
    )
}

fn sonine() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut worst = 0.0f64;
    for k in [0.0, 0.5, 1.0, 2.0] {
        for p in [0.25, 1.0] {
            let q = KummerParams::new(k, p).unwrap();
            for x in linspace(0.0, 3.0, 13) {
                let c = sonine_classical(q, x).unwrap();
                let n = sonine_quadrature(q, x, &cfg).map_err(|e| e.to_string())?;
                worst = worst.max(if c == 0.0 { n.abs() } else { rel(n, c) });
            }
        }
    }
    check(worst <= 1e-8, format!("max relative error {worst:e}"))
}

fn special_functions() -> Outcome {
    let mut erf_err = 0.0f64;
    for x in linspace(-3.0, 3.0, 61) {
        erf_err = erf_err.max((erf_fn(x) - 2.0 * x / PI.sqrt() * kummer_1f1(0.5, 1.5, -x * x).unwrap()).abs());
    }
    let mut g = rng(14);
    let mut kummer_err = 0.0f64;
    for _ in 0..200 {
        let (a, b, z): (f64, f64, f64) = (g.gen_range(0.1..5.0), g.gen_range(0.5..6.0), g.gen_range(-20.0..-0.1));
        let t = z.exp() * kummer_1f1_direct(b - a, b, -z).unwrap();
        kummer_err = kummer_err.max(rel(kummer_1f1(a, b, z).unwrap(), t));
    }
    let mut bessel_err = 0.0f64;
    for z in linspace(0.1, 60.0, 120) {
        let c = (2.0 / (PI * z)).sqrt();
        for (nu, want) in
            [(0.5, c * z.sin()), (-0.5, c * z.cos()), (1.5, c * (z.sin() / z - z.cos())), (2.5, c * ((3.0 / (z * z) - 1.0) * z.sin() - 3.0 * z.cos() / z))]
        {
            // relative to the envelope √(2/πz), since the zeros make pointwise relative error meaningless
            bessel_err = bessel_err.max((bessel_j(nu, z).unwrap() - want).abs() / c);
        }
    }
    check(
        erf_err <= 1e-10 && kummer_err <= 1e-10 && bessel_err <= 1e-10,
        format!("erf {erf_err:e}, kummer transform {kummer_err:e}, half-integer J {bessel_err:e}"),
    )
}

fn cli_examples() -> Outcome {
    let schema: Value = serde_json::from_str(include_str!("../schemas/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).map_err(|e| e.to_string())?;
    let cases: [(&[&str], i32); 3] = [
        (&["check-cm", "--k", "1", "--spec", "kernel(k=1,y=2)", "--sigma", "5", "--orders", "10", "--no-timestamp"], 0),
        (&["theorem6", "--k", "0", "--p", "0.25", "--grid", "-2:2:41", "--no-timestamp"], 0),
        (&["check-cm", "--spec", "raw-table(points=[(-5,-5),(5,5)])", "--no-timestamp"], 2),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for (args, code) in cases {
        let run = || Command::new(env!("CARGO_BIN_EXE_dunklkit")).args(args).env_remove("DUNKLKIT_QUAD_TOL").output().unwrap();
        let (a, b) = (run(), run());
        let valid = serde_json::from_slice::<Value>(&a.stdout).map(|v| validator.is_valid(&v)).unwrap_or(false);
        let same = a.stdout == b.stdout && a.status.code() == b.status.code();
        ok &= a.status.code() == Some(code) && valid && same;
        lines.push(format!("{} exit {:?} (want {code}), schema-valid {valid}, identical {same}", args[0], a.status.code()));
    }
    check(ok, lines.join("; "))
}

fn main() {
    let criteria: [Criterion; 15] = [
        ("oscillatory kernel bound", kernel_bound),
        ("kernel growth bound", kernel_growth),
        ("eigenrelation", eigenrelation),
        ("two kernel representations", two_representations),
        ("transform fixed point", fixed_point),
        ("plancherel pairing", plancherel),
        ("translation", translation),
        ("W_k/V_k round trip", round_trip),
        ("CM suite", cm_suite),
        ("PD suite", pd_suite),
        ("Schoenberg harness", schoenberg),
        ("Kummer closed-form adjudication", adjudication),
        ("Sonine integral", sonine),
        ("special-function identities", special_functions),
        ("CLI examples", cli_examples),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match std::panic::catch_unwind(f) {
            Ok(Ok(d)) => ("PASS", d),
            Ok(Err(d)) => ("FAIL", d),
            Err(_) => ("FAIL", "panicked".to_string()),
        };
        if tag == "FAIL" {
            failed.push(i + 1);
        }
        println!("{tag} {:>2}. {name} [{:.1}s]: {detail}", i + 1, start.elapsed().as_secs_f64());
    }
    if failed.is_empty() {
        println!("all 15 criteria pass");
    } else {
        println!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
