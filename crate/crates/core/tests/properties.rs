use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use krein_enclosure::geometry::{
    hull_height_sq, hull_membership, hull_tangency, phi, phi_extrema, DiskFamilyRegion, PhiBranch, RelBound,
    SpectrumModel,
};
use krein_enclosure::io::{parse_config, save_config, to_canonical_json};
use krein_enclosure::lab::{
    assemble_block, generate_block, generate_krein, k_set_membership, min_relative_bound, spectral_projections,
    BlockGenParams, KreinGenParams,
};
use krein_enclosure::linalg::{self, c, CMat};
use krein_enclosure::sl::{sl_constants, tau0_hilbert_form, Tau0Probe};
use krein_enclosure::Complex64;

fn bound() -> impl Strategy<Value = RelBound> {
    (0.0..50.0f64, 0.0..0.98f64).prop_map(|(a, b)| RelBound::new(a, b).unwrap())
}

fn nonreal() -> impl Strategy<Value = Complex64> {
    (-20.0..20.0f64, prop_oneof![-20.0..-0.05f64, 0.05..20.0f64]).prop_map(|(x, y)| Complex64::new(x, y))
}

fn centers() -> impl Strategy<Value = SpectrumModel> {
    prop_oneof![
        (0.0..10.0f64).prop_map(|g| SpectrumModel::interval(-g, g).unwrap()),
        prop::collection::vec(-10.0..10.0f64, 1..6).prop_map(|p| SpectrumModel::points(&p).unwrap()),
        (-5.0..5.0f64, 0.0..5.0f64).prop_map(|(lo, w)| SpectrumModel::new(&[(lo, lo + w)], &[lo - 3.0]).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn phi_is_nonnegative_with_limit_b(bd in bound(), l in nonreal(), t in -100.0..100.0f64) {
        prop_assert!(phi(&bd, l, t).unwrap() >= 0.0);
        let far = 1e6 * (1.0 + l.norm()) * 10.0;
        prop_assert!((phi(&bd, l, far).unwrap() - bd.b()).abs() < 1e-6);
        prop_assert!((phi(&bd, l, -far).unwrap() - bd.b()).abs() < 1e-6);
    }

    #[test]
    fn phi_at_m_lambda_is_b(bd in bound(), l in nonreal()) {
        let p = phi_extrema(&bd, l).unwrap();
        if p.branch == PhiBranch::ReNonzero {
            let m = p.m_lambda.unwrap();
            prop_assert!((phi(&bd, l, m).unwrap() - bd.b()).abs() <= 1e-10 * (1.0 + bd.b()));
        }
    }

    #[test]
    fn t_max_beats_dense_grid(bd in bound(), l in nonreal()) {
        let p = phi_extrema(&bd, l).unwrap();
        let Some(t_max) = p.t_max else { return Ok(()) };
        let best = phi(&bd, l, t_max).unwrap();
        prop_assert!((best - p.sup_over_reals).abs() <= 1e-12 * best.max(1.0));
        let lo = l.re - 50.0 - 5.0 * l.norm();
        let grid = (0..=20_000).map(|k| lo + (2.0 * (l.re - lo)) * k as f64 / 20_000.0);
        let grid_max = grid.map(|t| phi(&bd, l, t).unwrap()).fold(0.0, f64::max);
        prop_assert!(grid_max <= best * (1.0 + 1e-8));
    }

    #[test]
    fn disks_lie_in_hull_and_touch_it(bd in bound(), t0 in -30.0..30.0f64, angle in 0.0..std::f64::consts::TAU, frac in 0.0..1.0f64) {
        let r = bd.radius_sq(t0).sqrt();
        let z = Complex64::new(t0, 0.0) + Complex64::from_polar(frac * r * (1.0 - 1e-12), angle);
        prop_assert!(hull_membership(&bd, z));
        let t1 = hull_tangency(&bd, t0);
        let h = hull_height_sq(&bd, t1);
        let on_disk = (t1 - t0).powi(2) + h;
        prop_assert!((on_disk - bd.radius_sq(t0)).abs() <= 1e-10 * bd.radius_sq(t0).max(1.0));
    }

    #[test]
    fn regions_grow_with_a(bd in bound(), extra in 0.0..10.0f64, cs in centers(), l in nonreal()) {
        let small = DiskFamilyRegion::new(bd, cs.clone(), 1.0).unwrap();
        let big = DiskFamilyRegion::new(RelBound::new(bd.a() + extra, bd.b()).unwrap(), cs, 1.0).unwrap();
        if small.contains(l) {
            prop_assert!(big.contains(l));
        }
    }

    #[test]
    fn membership_symmetries(bd in bound(), g in 0.0..10.0f64, cs in centers(), l in nonreal()) {
        let r = DiskFamilyRegion::new(bd, cs, 1.0).unwrap();
        prop_assert_eq!(r.contains(l), r.contains(l.conj()));
        let sym = DiskFamilyRegion::bone(bd, g).unwrap();
        prop_assert_eq!(sym.contains(l), sym.contains(-l));
        prop_assert_eq!(sym.contains(l), sym.contains(-l.conj()));
    }

    #[test]
    fn margin_sign_matches_membership(bd in bound(), cs in centers(), l in nonreal()) {
        let r = DiskFamilyRegion::new(bd, cs, 1.0).unwrap();
        let m = r.membership(l);
        prop_assert_eq!(m.inside, m.margin <= 0.0);
    }
}

fn small_block(seed: u64) -> CMat {
    let p = BlockGenParams {
        max_dim: 12,
        ..BlockGenParams::default()
    };
    assemble_block(&generate_block(&p, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn js_is_hermitian(seed in any::<u64>()) {
        let block = generate_block(&BlockGenParams { max_dim: 12, ..BlockGenParams::default() }, seed).unwrap();
        let s = assemble_block(&block);
        let js = linalg::row_signs(&block.signature(), &s);
        prop_assert!(linalg::hermitian_defect(&js) <= 1e-12 * linalg::frobenius(&js).max(1.0));
    }

    #[test]
    fn spectrum_is_conjugation_symmetric(seed in any::<u64>()) {
        let s = small_block(seed);
        let (vals, _) = linalg::eigen(&s).unwrap();
        let tol = 1e-8 * linalg::spectral_norm(&s).unwrap().max(1.0);
        let mut used = vec![false; vals.len()];
        for z in &vals {
            let partner = (0..vals.len())
                .filter(|&j| !used[j])
                .min_by(|&i, &j| (vals[i] - z.conj()).norm().total_cmp(&(vals[j] - z.conj()).norm()))
                .unwrap();
            prop_assert!((vals[partner] - z.conj()).norm() <= tol, "{} has no partner", z);
            used[partner] = true;
        }
    }

    #[test]
    fn projection_identities(seed in any::<u64>()) {
        let prob = generate_krein(&KreinGenParams { max_dim: 10, ..KreinGenParams::default() }, seed).unwrap();
        let d = spectral_projections(&prob).unwrap();
        let n = prob.dim();
        let tol = 1e-8 * n as f64;
        let close = |a: &CMat, b: &CMat| linalg::max_abs(&(a - b)) <= tol * linalg::max_abs(b).max(1.0);
        prop_assert!(close(&(&d.e_plus * &d.e_plus), &d.e_plus));
        prop_assert!(close(&(&d.e_minus * &d.e_minus), &d.e_minus));
        prop_assert!(linalg::max_abs(&(&d.e_plus * &d.e_minus)) <= tol * linalg::max_abs(&d.e_plus).max(1.0));
        prop_assert!(close(&(&d.j0 * &d.j0), &linalg::identity(n)));
        prop_assert!(d.tau0 >= 1.0 - tol);
    }

    #[test]
    fn relative_bound_monotone_and_dominates(seed in any::<u64>(), n in 1usize..7, m in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = linalg::complex_gaussian(&mut rng, m, n);
        let d: Vec<f64> = (0..n).map(|k| k as f64 - 2.0).collect();
        let s = linalg::random_hermitian_with_spectrum(&mut rng, &d);
        let mut prev = f64::INFINITY;
        for k in 0..10 {
            let b = k as f64 / 10.0;
            let a = min_relative_bound(&t, &s, b).unwrap();
            prop_assert!(a <= prev * (1.0 + 1e-12) + 1e-12);
            prev = a;
            for _ in 0..200 {
                let f = linalg::complex_gaussian(&mut rng, n, 1);
                let nf = linalg::frobenius(&f);
                let f = linalg::scale(&f, c(1.0 / nf, 0.0));
                let tf = linalg::frobenius(&(&t * &f)).powi(2);
                let sf = linalg::frobenius(&(&s * &f)).powi(2);
                prop_assert!(tf - b * sf <= a + 1e-8 * (1.0 + a));
            }
        }
    }

    #[test]
    fn k_set_conjugation_symmetric(seed in any::<u64>(), l in nonreal()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = [-3.0, 0.5, 2.0, 7.0];
        let s = linalg::random_hermitian_with_spectrum(&mut rng, &d);
        let t = linalg::scale(&linalg::complex_gaussian(&mut rng, 3, 4), c(2.0, 0.0));
        prop_assert_eq!(k_set_membership(&t, &s, l).unwrap(), k_set_membership(&t, &s, l.conj()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constants_monotone_in_p(p in 2.0..1e4f64, s1 in 1.0001..3.0f64, s2 in 1.0001..3.0f64) {
        let k: Vec<_> = [p, p * s1, p * s1 * s2].iter().map(|&q| sl_constants(q).unwrap()).collect();
        let monotone = |f: &dyn Fn(usize) -> f64| {
            let (d1, d2) = (f(1) - f(0), f(2) - f(1));
            d1 * d2 >= -1e-24 * f(0) * f(0)
        };
        prop_assert!(monotone(&|i| k[i].im_coef));
        prop_assert!(monotone(&|i| k[i].half_diagonal()));
    }

    #[test]
    fn hilbert_form_without_f2_at_most_three(vals in prop::collection::vec(-1.0..1.0f64, 6..12)) {
        let n = vals.len();
        let x: Vec<f64> = (0..n).map(|k| 0.2 * 2f64.powf(k as f64 * 0.8)).collect();
        if vals.iter().all(|v| v.abs() < 1e-3) {
            return Ok(());
        }
        let e = tau0_hilbert_form(&Tau0Probe::Tabulated { x, f1: vals, f2: vec![0.0; n] }).unwrap();
        prop_assert!(e.quotient <= 3.0 + 1e-4, "{}", e.quotient);
        prop_assert!(e.within_upper_bound);
    }
}

fn config_text() -> impl Strategy<Value = String> {
    let region = (
        prop::sample::select(vec!["disks", "hull", "bone", "halfline"]),
        0.0..20.0f64,
        0.0..0.9f64,
        0.0..10.0f64,
        16usize..2000,
        any::<bool>(),
    )
        .prop_map(|(k, a, b, g, res, prior)| {
            format!(r#"{{"kind":"{k}","a":{a},"b":{b},"gamma":{g},"resolution":{res},"prior":{prior}}}"#)
        });
    let lab = (1usize..1000, any::<u64>(), 2usize..5, 5usize..30, 1e-12..1e-3f64)
        .prop_map(|(t, s, lo, hi, tol)| {
            format!(r#"{{"trials":{t},"seed":{s},"minDim":{lo},"maxDim":{hi},"nonrealTol":{tol}}}"#)
        });
    let perturb = (1usize..100, any::<u64>(), prop_oneof![Just("\"auto\"".to_string()), (1.0..20.0f64).prop_map(|t| t.to_string())], any::<bool>())
        .prop_map(|(t, s, tau, bounded)| {
            format!(r#"{{"command":"perturb","trials":{t},"seed":{s},"tau":{tau},"bounded":{bounded}}}"#)
        });
    let sl = (prop::sample::select(vec!["step", "gaussian", "lorentzian"]), 0.0..50.0f64, 0.1..5.0f64, 2.0..100.0f64, 8usize..3000)
        .prop_map(|(k, d, w, p, half)| {
            format!(r#"{{"kind":"{k}","depth":{d},"width":{w},"p":{p},"n":{}}}"#, 2 * half)
        });
    let tau0 = prop_oneof![
        (1.0001..1e8f64).prop_map(|x| format!(r#"{{"kind":"extremizer","X":{x}}}"#)),
        (0.01..10.0f64, 0.01..10.0f64).prop_map(|(lo, w)| format!(r#"{{"kind":"indicator","lo":{lo},"hi":{}}}"#, lo + w)),
    ];
    prop_oneof![region, lab, perturb, sl, tau0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn config_save_load_round_trip(text in config_text()) {
        let c = parse_config(&text).unwrap();
        let saved = save_config(&c).unwrap();
        let back = parse_config(&saved).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(save_config(&back).unwrap(), saved);
    }

    #[test]
    fn canonical_floats_round_trip(v in prop::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 0..20)) {
        let text = to_canonical_json(&v).unwrap();
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, v);
    }
}
