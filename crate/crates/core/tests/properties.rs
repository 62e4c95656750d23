use dunklkit::kernel::{dunkl_kernel, dunkl_kernel_osc, dunkl_operator_numeric, dunkl_operator_power_exact, MultiplicityParam};
use dunklkit::kummer::{i_kp, psi_kp, KummerParams};
use dunklkit::monotonicity::{check_dunkl_cm, check_dunkl_pd, CmOptions};
use dunklkit::quadrature::{gauss_jacobi_rule, gauss_legendre_rule, integrate_finite, integrate_fixed, integrate_semi_infinite, Envelope, QuadratureConfig};
use dunklkit::spec::{Atom, FunctionSpec, MeasureSpec};
use dunklkit::specfun::{erf_fn, gamma_fn, kummer_1f1, kummer_1f1_direct, normalized_bessel, normalized_bessel_i};
use dunklkit::transform::{dunkl_transform, TransformConfig};
use proptest::prelude::*;
use std::f64::consts::PI;

fn kp(k: f64) -> MultiplicityParam {
    MultiplicityParam::new(k).unwrap()
}

fn tc(k: f64) -> TransformConfig {
    TransformConfig::new(kp(k), QuadratureConfig::default()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normalized_bessel_is_even(alpha in -0.5f64..5.0, z in -30.0f64..30.0) {
        let d = normalized_bessel(alpha, z).unwrap() - normalized_bessel(alpha, -z).unwrap();
        prop_assert!(d.abs() <= 1e-14);
    }

    #[test]
    fn erf_through_kummer(x in -3.0f64..3.0) {
        let via = 2.0 * x / PI.sqrt() * kummer_1f1(0.5, 1.5, -x * x).unwrap();
        prop_assert!((erf_fn(x) - via).abs() <= 1e-10);
    }

    #[test]
    fn modified_normalized_bessel_at_least_one(alpha in -0.5f64..6.0, z in -40.0f64..40.0) {
        prop_assert!(normalized_bessel_i(alpha, z).unwrap() >= 1.0);
    }

    #[test]
    fn kummer_direct_and_transformed_agree(a in 0.5f64..5.0, b in 0.5f64..5.0, z in -20.0f64..20.0) {
        let d = kummer_1f1_direct(a, b, z).unwrap();
        let t = kummer_1f1(a, b, z).unwrap();
        prop_assert!((d - t).abs() <= 1e-9 * t.abs() + 1e-300, "{a} {b} {z}: {d} {t}");
    }

    #[test]
    fn gamma_recurrence(x in 0.1f64..20.0) {
        prop_assert!(rel(gamma_fn(x + 1.0).unwrap(), x * gamma_fn(x).unwrap()) <= 1e-12);
    }

    #[test]
    fn gauss_weights_positive(n in 1usize..160, alpha in -0.99f64..5.0, beta in -0.99f64..5.0) {
        let r = gauss_jacobi_rule(n, alpha, beta).unwrap();
        prop_assert!(r.weights.iter().all(|&w| w > 0.0));
        if n >= 2 {
            prop_assert!(gauss_legendre_rule(n).unwrap().weights.iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn integration_is_linear_on_polynomials(c in prop::array::uniform4(-3.0f64..3.0), al in -2.0f64..2.0, be in -2.0f64..2.0) {
        let cfg = QuadratureConfig::default();
        let f = move |x: f64| c[0] + c[1] * x + c[2] * x * x;
        let g = move |x: f64| c[3] * x * x * x - c[0];
        let lhs = integrate_finite(|x| al * f(x) + be * g(x), -1.0, 2.0, &cfg).unwrap();
        let rhs = al * integrate_finite(f, -1.0, 2.0, &cfg).unwrap() + be * integrate_finite(g, -1.0, 2.0, &cfg).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + lhs.abs()));
    }

    #[test]
    fn legendre_order_converged(a in 0.0f64..4.0, b in 0.5f64..3.0) {
        let cfg = QuadratureConfig { legendre_order: 40, ..QuadratureConfig::default() };
        let f = |x: f64| (-x * x).exp() * (a * x).cos();
        let lo = integrate_fixed(f, 0.0, b, &cfg).unwrap();
        let hi = integrate_fixed(f, 0.0, b, &QuadratureConfig { legendre_order: 80, ..cfg }).unwrap();
        prop_assert!((lo - hi).abs() <= cfg.abs_tol);
    }

    #[test]
    fn kernel_symmetry_homogeneity_bounds(k in 0.0f64..3.0, x in -5.0f64..5.0, y in -5.0f64..5.0, lam in -3.0f64..3.0) {
        let k = kp(k);
        let e = dunkl_kernel(k, x, y).unwrap();
        prop_assert!(rel(dunkl_kernel(k, y, x).unwrap(), e) <= 1e-13);
        prop_assert!(rel(dunkl_kernel(k, lam * x, y).unwrap(), dunkl_kernel(k, x, lam * y).unwrap()) <= 1e-12);
        prop_assert!(e > 0.0);
        prop_assert!(e <= (x.abs() * y.abs()).exp() * (1.0 + 1e-12));
    }

    #[test]
    fn oscillatory_kernel_bound_and_conjugation(k in 0.0f64..3.0, x in -5.0f64..5.0, y in -5.0f64..5.0) {
        let z = dunkl_kernel_osc(kp(k), x, y).unwrap();
        prop_assert!(z.norm() <= 1.0 + 1e-10);
        let w = dunkl_kernel_osc(kp(k), -x, y).unwrap().conj();
        prop_assert!((z.re - w.re).abs() <= 1e-13 && (z.im - w.im).abs() <= 1e-13);
    }

    #[test]
    fn eigenrelation(k in 0.0f64..3.0, x in -2.0f64..2.0, y in 0.0f64..2.0) {
        let k = kp(k);
        let cfg = QuadratureConfig::default();
        let want = -y * dunkl_kernel(k, -x, y).unwrap();
        let spec = FunctionSpec::KernelDecaying { y };
        prop_assert!((dunkl_operator_power_exact(k, &spec, 1, x, &cfg).unwrap() - want).abs() <= 1e-12 * want.abs().max(1.0));
        let f = |t: f64| dunkl_kernel(k, -t, y).unwrap();
        prop_assert!((dunkl_operator_numeric(k, &f, x, None).value - want).abs() <= 1e-6);
    }

    #[test]
    fn psi_even_part(k in 0.0f64..3.0, p in 0.2f64..4.0, x in -3.0f64..3.0) {
        let q = KummerParams::new(k, p).unwrap();
        let s = psi_kp(q, x).unwrap() + psi_kp(q, -x).unwrap();
        prop_assert!(rel(s, 2.0 * i_kp(q, x).unwrap()) <= 1e-14);
        prop_assert!(psi_kp(q, x).unwrap() > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transform_of_even_function_is_even(k in 0.0f64..2.5, p1 in 0.2f64..2.0, p2 in 0.2f64..2.0, c in 0.1f64..2.0, xi in 0.0f64..4.0) {
        let f = FunctionSpec::Combination(vec![(1.0, FunctionSpec::gaussian(p1)), (c, FunctionSpec::gaussian(p2))]);
        let cfg = tc(k);
        let a = dunkl_transform(&f, xi, &cfg).unwrap().value;
        let b = dunkl_transform(&f, -xi, &cfg).unwrap().value;
        prop_assert!((a - b).norm() <= 1e-10);
    }

    #[test]
    fn gaussian_transform_decays(k in 0.0f64..3.0, p in 0.5f64..3.0, xi in 4.0f64..6.0) {
        let v = dunkl_transform(&FunctionSpec::gaussian(p), xi, &tc(k)).unwrap().value;
        prop_assert!(v.norm() <= (-xi * xi / (8.0 * p)).exp() + 1e-10);
    }

    #[test]
    fn cm_verdict_scale_invariant(k in 0.0f64..2.0, y in 0.0f64..3.0, c in 0.01f64..100.0) {
        let opts = CmOptions { grid_size: 17, ..CmOptions::default() };
        let phi = FunctionSpec::KernelDecaying { y };
        let a = check_dunkl_cm(kp(k), &phi, 2.0, 6, &opts).unwrap();
        let b = check_dunkl_cm(kp(k), &phi.clone().scaled(c), 2.0, 6, &opts).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        let nope = FunctionSpec::raw("x", dunklkit::Parity::Odd, None, |x| x);
        let a = check_dunkl_cm(kp(k), &nope, 2.0, 2, &opts).unwrap();
        let b = check_dunkl_cm(kp(k), &nope.clone().scaled(c), 2.0, 2, &opts).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
    }

    #[test]
    fn cm_cone(k in 0.0f64..2.0, t1 in 0.0f64..3.0, t2 in 0.0f64..3.0, w1 in 0.1f64..2.0, w2 in 0.1f64..2.0, p in 0.3f64..2.0) {
        let opts = CmOptions { grid_size: 17, ..CmOptions::default() };
        let a = FunctionSpec::LaplaceDunkl(MeasureSpec::new(vec![Atom { t: t1, w: w1 }, Atom { t: t2, w: w2 }], None).unwrap());
        let b = FunctionSpec::LaplaceDunkl(MeasureSpec::density(p, 2.0 * k, 1.0));
        let ra = check_dunkl_cm(kp(k), &a, 2.0, 6, &opts).unwrap();
        let rb = check_dunkl_cm(kp(k), &b, 2.0, 6, &opts).unwrap();
        let sum = FunctionSpec::Combination(vec![(1.0, a), (1.0, b)]);
        let rs = check_dunkl_cm(kp(k), &sum, 2.0, 6, &opts).unwrap();
        prop_assert!(ra.verdict && rb.verdict && rs.verdict);
        for n in 0..=6 {
            // min of a sum is at least the sum of mins
            prop_assert!(rs.per_order_min[n] >= ra.per_order_min[n] + rb.per_order_min[n] - 1e-10 * rs.per_order_scale[n].max(1.0));
            prop_assert!(ra.per_order_min[n] >= -1e-12 * ra.per_order_scale[n].max(1.0));
            prop_assert!(rb.per_order_min[n] >= -1e-12 * rb.per_order_scale[n].max(1.0));
        }
    }

    #[test]
    fn gram_is_hermitian_for_even_functions(k in 0.0f64..2.0, p1 in 0.2f64..2.0, p2 in 0.2f64..2.0, c in 0.0f64..2.0, pts in prop::collection::btree_set(-30i32..30, 1..6)) {
        let phi = FunctionSpec::Combination(vec![(1.0, FunctionSpec::gaussian(p1)), (c, FunctionSpec::gaussian(p2))]);
        let points: Vec<f64> = pts.into_iter().map(|i| i as f64 / 10.0).collect();
        let r = check_dunkl_pd(&phi, &points, &tc(k)).unwrap();
        prop_assert!(r.hermitian_defect <= 1e-8);
        prop_assert!(r.is_psd(), "{:?}", r.eigenvalues);
    }

    #[test]
    fn classical_pd_matches_ordinary_shifts(p1 in 0.2f64..2.0, p2 in 0.2f64..2.0, c in 0.0f64..2.0, pts in prop::collection::btree_set(-30i32..30, 2..6)) {
        let phi = FunctionSpec::Combination(vec![(1.0, FunctionSpec::gaussian(p1)), (c, FunctionSpec::gaussian(p2))]);
        let points: Vec<f64> = pts.into_iter().map(|i| i as f64 / 10.0).collect();
        let cfg = tc(0.0);
        let r = check_dunkl_pd(&phi, &points, &cfg).unwrap();
        for (j, &y) in points.iter().enumerate() {
            for (l, &x) in points.iter().enumerate() {
                let direct = phi.eval(cfg.k, x - y, &cfg.quad).unwrap();
                prop_assert!((r.gram[j][l].re - direct).abs() <= 1e-10);
            }
        }
        prop_assert!(r.is_psd());
    }

    #[test]
    fn classical_strictness(t in 0.0f64..3.0, p in 0.3f64..2.0, pts in prop::collection::btree_set(-15i32..15, 2..5)) {
        // φ(x²) with φ a Laplace transform of a measure with a positive density
        let mu = MeasureSpec::new(vec![Atom { t, w: 1.0 }], Some(dunklkit::spec::DensitySpec { p, rho: 0.0, scale: 1.0 })).unwrap();
        let phi = FunctionSpec::SquaredArgument(Box::new(FunctionSpec::LaplaceDunkl(mu)));
        let points: Vec<f64> = pts.into_iter().map(|i| i as f64 / 10.0).collect();
        let r = check_dunkl_pd(&phi, &points, &tc(0.0)).unwrap();
        prop_assert!(r.min_eigenvalue > 0.0, "{:?}", r.eigenvalues);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn plancherel(k in 0.0f64..2.5, p in 0.2f64..2.0, q in 0.2f64..2.0) {
        // ∫ D_kf · g |y|^{2k} = ∫ f · D_kg |y|^{2k}, both sides by quadrature of the computed transforms
        let cfg = tc(k);
        let w = 2.0 * k;
        // |D_k e^{−a·²}| ≤ (2a)^{−(k+1/2)}, and e^{−b y²} supplies the decay
        let side = |a: f64, b: f64| {
            let env = Envelope { sigma: 0.0, p: b, rho: w, scale: (2.0 * a).powf(-(k + 0.5)) };
            let fa = FunctionSpec::gaussian(a);
            2.0 * integrate_semi_infinite(|y| dunkl_transform(&fa, y, &cfg).unwrap().value.re * (-b * y * y).exp() * y.powf(w), &env, &cfg.quad).unwrap()
        };
        let l = side(p, q);
        let r = side(q, p);
        prop_assert!(rel(l, r) <= 1e-8, "{l} {r}");
    }
}
