//! The ten acceptance criteria at their stated tolerances. Each test prints one
//! `criterion N: PASS|FAIL` line directly to stdout, bypassing output capture.

use std::io::Write;
use std::time::{Duration, Instant};

use krein_enclosure::geometry::{
    hull_height_sq, hull_tangency, phi, phi_extrema, DiskFamilyRegion, PhiBranch, RelBound, SpectrumModel,
};
use krein_enclosure::lab::{
    bounded_v_reduction, generate_krein, j0_consistency, run_block_suite, run_krein_suite, spectral_projections,
    BlockGenParams, BlockVerifyOptions, KreinGenParams, TmainOptions,
};
use krein_enclosure::linalg;
use krein_enclosure::sl::constants::log_space;
use krein_enclosure::sl::discretize::has_parity_symmetry;
use krein_enclosure::sl::product_bound::random_pairs;
use krein_enclosure::sl::{
    bst_constants, bst_region, containment_report, product_bound_check, sl_box, sl_constants, tau0_hilbert_form,
    Potential, SlDiscretization, SlOptions, SlRun, Tau0Probe, TAU_SL,
};
use krein_enclosure::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(n: u32, title: &str, pass: bool, detail: String, elapsed: Duration) {
    let line = format!(
        "criterion {n:>2}: {} | {title} | {detail} | {:.2}s\n",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
    assert!(pass, "criterion {n} failed: {detail}");
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(f)
}

#[test]
fn criterion_01_constants_limits() {
    let t = Instant::now();
    let k = sl_constants(1e6).unwrap();
    let im_err = (k.im_coef - 3.414214).abs();
    let diag_err = (k.half_diagonal() - 7.630335).abs();
    let elapsed = t.elapsed();
    let pass = im_err < 1e-2 && diag_err < 2e-2 && elapsed < Duration::from_secs(1);
    verdict(
        1,
        "constants limits at p = 1e6",
        pass,
        format!("imCoef {:.9} (err {im_err:.2e}), halfDiag {:.9} (err {diag_err:.2e})", k.im_coef, k.half_diagonal()),
        elapsed,
    );
}

#[test]
fn criterion_02_competitor_limits() {
    let t = Instant::now();
    let k = bst_constants(1e6).unwrap();
    let im_err = (k.im_coef - 10.3923).abs();
    let abs_err = (k.abs_coef - 14.8923).abs();
    verdict(
        2,
        "competitor limits at p = 1e6",
        im_err < 1e-2 && abs_err < 1e-2,
        format!("imCoef {:.9} (err {im_err:.2e}), absCoef {:.9} (err {abs_err:.2e})", k.im_coef, k.abs_coef),
        t.elapsed(),
    );
}

#[test]
fn criterion_03_strict_containment() {
    let t = Instant::now();
    let mut exceptions = Vec::new();
    for p in log_space(2.0, 100.0, 200) {
        let ours = sl_box(p, 1.0).unwrap();
        let theirs = bst_region(p, 1.0).unwrap();
        let corner = Complex64::new(ours.re_half_width, ours.im_half_height);
        if !(ours.im_half_height < theirs.im_bound && theirs.margin(corner) < 0.0) {
            exceptions.push(p);
        }
    }
    verdict(
        3,
        "box strictly inside the competing region for 200 p in [2, 100]",
        exceptions.is_empty(),
        format!("{} exceptions {:?}", exceptions.len(), exceptions),
        t.elapsed(),
    );
}

#[test]
fn criterion_04_block_suite() {
    let t = Instant::now();
    let params = BlockGenParams {
        max_dim: 20,
        ..BlockGenParams::default()
    };
    let opts = BlockVerifyOptions {
        lambda_samples: 1000,
        ..BlockVerifyOptions::default()
    };
    let s = single_threaded(|| run_block_suite(&params, &opts, 42, 500)).unwrap();
    let elapsed = t.elapsed();
    let pass = s.containment_failures == 0
        && s.sign_type_failures == 0
        && s.resolvent_check_failures == 0
        && s.verified + s.rejected == 500
        && elapsed < Duration::from_secs(300);
    verdict(
        4,
        "block operator suite, 500 instances, seed 42",
        pass,
        format!(
            "verified {}, rejected {}, containment {}, sign {} ({} tested, {} indeterminate), resolvent {} ({} samples, max ratio {:.4}), non-real {}, failed seeds {:?}",
            s.verified,
            s.rejected,
            s.containment_failures,
            s.sign_type_failures,
            s.sign_tested,
            s.sign_indeterminate,
            s.resolvent_check_failures,
            s.resolvent_samples,
            s.max_resolvent_ratio,
            s.nonreal_eigenvalues,
            s.failed_seeds
        ),
        elapsed,
    );
}

#[test]
fn criterion_05_perturbation_suite() {
    let t = Instant::now();
    let params = KreinGenParams::default();
    let opts = TmainOptions::default();
    let seed = 42;
    let s = single_threaded(|| run_krein_suite(&params, &opts, seed, 200)).unwrap();

    let (mut real_checked, mut real_violations, mut reduction_err) = (0, 0, 0.0f64);
    for d in &s.details {
        let problem = generate_krein(&params, d.seed).unwrap();
        let v = problem.lower_bound_jv().unwrap();
        if v >= 0.0 {
            real_checked += 1;
            let a = problem.a0() + problem.v();
            let scale = linalg::frobenius(&a);
            let (vals, _) = linalg::eigen(&a).unwrap();
            if vals.iter().any(|z| z.im.abs() >= 1e-8 * scale) {
                real_violations += 1;
            }
        }
        let tau = spectral_projections(&problem).unwrap().tau0;
        let (r, dd) = bounded_v_reduction(&problem, tau).unwrap();
        let vn = linalg::spectral_norm(problem.v()).unwrap();
        let r_ref = (1.0 + tau) * vn / 2.0;
        let d_ref = -(1.0 + tau) * v / 2.0;
        reduction_err = reduction_err
            .max((r - r_ref).abs() / r_ref.max(1.0))
            .max((dd - d_ref).abs() / d_ref.abs().max(1.0));
    }
    let pass = s.passed() && s.rejected == 0 && real_violations == 0 && reduction_err < 1e-10;
    verdict(
        5,
        "perturbation suite, 200 problems",
        pass,
        format!(
            "verified {}, failed {}, rejected {}, non-real {}, sign {} tested / {} indeterminate, v >= 0 instances {real_checked} with {real_violations} non-real, bounded reduction err {reduction_err:.2e}",
            s.verified, s.failed, s.rejected, s.nonreal_eigenvalues, s.sign_tested, s.sign_indeterminate
        ),
        t.elapsed(),
    );
}

fn rel_err(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(f64::MIN_POSITIVE)
}

/// Grid oracle for `min_t g(t) ≤ 0` with `g(t) = |λ - t|² - r(t)²` on `[lo, hi]`.
/// `Some(inside)` when the grid resolves the question, `None` in the ambiguous band.
fn grid_inside(r: &DiskFamilyRegion, lambda: Complex64, lo: f64, hi: f64, n: usize) -> Option<bool> {
    let s = r.radius_scale();
    let g = |t: f64| (lambda - t).norm_sqr() - s * r.bound().radius_sq(t);
    let step = (hi - lo) / n as f64;
    let min = (0..=n).map(|k| g(lo + step * k as f64)).fold(f64::INFINITY, f64::min);
    // g'' = 2(1 - s b) ≤ 2, so the grid overestimates the minimum by at most step²/4.
    if min <= 0.0 {
        Some(true)
    } else if min > step * step / 4.0 {
        Some(false)
    } else {
        None
    }
}

#[test]
fn criterion_06_geometry_identities() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst, mut violations, mut extremum_violations) = (0.0f64, 0usize, 0usize);
    let mut check = |err: f64| {
        worst = worst.max(err);
        if err > 1e-10 {
            violations += 1;
        }
    };
    for _ in 0..10_000 {
        let a = rng.random_range(0.0..20.0);
        let b = rng.random_range(0.01..0.95);
        let bound = RelBound::new(a, b).unwrap();
        let lambda = Complex64::new(
            rng.random_range(0.1..10.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 },
            rng.random_range(0.1..10.0),
        );
        let prof = phi_extrema(&bound, lambda).unwrap();
        assert_eq!(prof.branch, PhiBranch::ReNonzero);
        check(rel_err(phi(&bound, lambda, prof.m_lambda.unwrap()).unwrap(), b));
        check(rel_err(phi(&bound, lambda, f64::INFINITY).unwrap(), b));

        let t0 = rng.random_range(-20.0..20.0);
        let t1 = hull_tangency(&bound, t0);
        let touch = Complex64::new(t1, hull_height_sq(&bound, t1).sqrt());
        check(rel_err(phi(&bound, touch, t0).unwrap(), 1.0));
        if t1 != 0.0 {
            let p = phi_extrema(&bound, touch).unwrap();
            check(rel_err(p.sup_over_reals, 1.0));
        }
        for _ in 0..4 {
            let s = rng.random_range(-50.0..50.0);
            let f = phi(&bound, lambda, s).unwrap();
            if f > prof.sup_over_reals * (1.0 + 1e-10)
                || f < phi(&bound, lambda, prof.t_min.unwrap()).unwrap() * (1.0 - 1e-10)
            {
                extremum_violations += 1;
            }
        }
    }

    let (mut agree, mut disagree, mut ambiguous) = (0usize, 0usize, 0usize);
    for _ in 0..10_000 {
        let a = rng.random_range(0.0..20.0);
        let b = rng.random_range(0.0..0.9);
        let bound = RelBound::new(a, b).unwrap();
        let (centers, lo, hi, scale) = match rng.random_range(0..3) {
            0 => {
                let g = rng.random_range(0.0..15.0);
                (SpectrumModel::interval(-g, g).unwrap(), -g, g, rng.random_range(0.5..2.0))
            }
            1 => {
                let g = rng.random_range(-5.0..5.0);
                (SpectrumModel::new(&[(g, f64::INFINITY)], &[]).unwrap(), g, 400.0, rng.random_range(0.5..1.0))
            }
            _ => (SpectrumModel::real_line(), -400.0, 400.0, rng.random_range(0.5..1.0)),
        };
        let region = DiskFamilyRegion::new(bound, centers, scale).unwrap();
        let lambda = Complex64::new(rng.random_range(-30.0..30.0), rng.random_range(-30.0..30.0));
        match grid_inside(&region, lambda, lo, hi, 40_000) {
            Some(inside) if inside == region.contains(lambda) => agree += 1,
            Some(_) => disagree += 1,
            None => ambiguous += 1,
        }
    }
    let violations = violations + extremum_violations;
    let pass = violations == 0 && disagree == 0;
    verdict(
        6,
        "geometry identities and disk membership oracle",
        pass,
        format!(
            "identities: worst rel err {worst:.2e}, {violations} violations; membership: {agree} agree, {disagree} disagree, {ambiguous} unresolved by the grid"
        ),
        t.elapsed(),
    );
}

fn sl_run(depth: f64, l: f64, n: usize, sign_test: bool) -> (SlRun, bool) {
    let pot = Potential::Step { depth, width: 1.0 };
    let disc = SlDiscretization::new(&pot, l, n).unwrap();
    let opts = SlOptions {
        sign_test,
        ..SlOptions::default()
    };
    let run = containment_report(&disc, &pot, 2.0, &opts).unwrap();
    let zs: Vec<Complex64> = run.rows.iter().map(|r| Complex64::new(r.re, r.im)).collect();
    let symmetric = has_parity_symmetry(&zs, 1e-7);
    (run, symmetric)
}

#[test]
fn criterion_07_sturm_liouville_containment() {
    let t = Instant::now();
    let (mut detected, mut with_nonreal, mut failures) = (0usize, Vec::new(), Vec::new());
    let mut worst_change = 0.0f64;
    for c in 1..=40 {
        let depth = c as f64;
        let (coarse, sym) = sl_run(depth, 30.0, 4000, true);
        if !coarse.report.verified || !sym {
            failures.push(format!("c={c}: {:?}", coarse.report.containment_failures));
        }
        if coarse.rows.is_empty() {
            continue;
        }
        detected += coarse.rows.len();
        with_nonreal.push(c);
        let (fine, fine_sym) = sl_run(depth, 45.0, 9000, false);
        if !fine.report.verified || !fine_sym {
            failures.push(format!("c={c} refined: {:?}", fine.report.containment_failures));
        }
        for r in &coarse.rows {
            let z = Complex64::new(r.re, r.im);
            let Some(m) = fine
                .rows
                .iter()
                .min_by(|x, y| {
                    (Complex64::new(x.re, x.im) - z)
                        .norm()
                        .total_cmp(&(Complex64::new(y.re, y.im) - z).norm())
                })
            else {
                failures.push(format!("c={c}: {z} vanished under refinement"));
                continue;
            };
            let change = ((m.margin_paper - r.margin_paper) / r.margin_paper).abs()
                .max(((m.margin_bst - r.margin_bst) / r.margin_bst).abs());
            worst_change = worst_change.max(change);
        }
    }
    let elapsed = t.elapsed();
    let pass = failures.is_empty()
        && detected > 0
        && worst_change < 0.01
        && elapsed < Duration::from_secs(600);
    verdict(
        7,
        "step potential depth sweep c = 1..40, p = 2",
        pass,
        format!(
            "{detected} non-real eigenvalues at depths {with_nonreal:?}, max margin change under refinement {:.3}%, failures {failures:?}",
            100.0 * worst_change
        ),
        elapsed,
    );
}

#[test]
fn criterion_08_product_bound_sweep() {
    let t = Instant::now();
    let (mut cases, mut violations, mut tightest) = (0usize, Vec::new(), f64::INFINITY);
    let rs = log_space(0.05, 20.0, 20);
    for (f, g) in random_pairs(8, 20) {
        for &r in &rs {
            for p in [2.0, 3.0, 10.0, 1e3] {
                let c = product_bound_check(&f, &g, p, r).unwrap();
                cases += 1;
                if c.lhs > 0.0 {
                    tightest = tightest.min(c.rhs / c.lhs);
                }
                if !c.holds {
                    violations.push((r, p, c.lhs, c.rhs));
                }
            }
        }
    }
    verdict(
        8,
        "product inequality, 20 pairs x 20 r x 4 p",
        cases == 1600 && violations.is_empty(),
        format!("{cases} cases, min rhs/lhs {tightest:.4}, violations {violations:?}"),
        t.elapsed(),
    );
}

#[test]
fn criterion_09_tau0_bounds() {
    let t = Instant::now();
    let cap = 5.8285;
    let mut probes = vec![Tau0Probe::Indicator { lo: 1.0, hi: 2.0 }, Tau0Probe::Indicator { lo: 0.1, hi: 50.0 }];
    for k in 1..=6 {
        probes.push(Tau0Probe::Extremizer { x_max: 10f64.powi(k) });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let x: Vec<f64> = log_space(0.05, 200.0, 40);
        let f1: Vec<f64> = x.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
        let f2: Vec<f64> = x.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
        probes.push(Tau0Probe::Tabulated { x, f1, f2 });
    }
    let mut worst = 0.0f64;
    for p in &probes {
        worst = worst.max(tau0_hilbert_form(p).unwrap().quotient);
    }
    let ext = tau0_hilbert_form(&Tau0Probe::Extremizer { x_max: 1e6 }).unwrap().quotient;
    let ind = tau0_hilbert_form(&Tau0Probe::Indicator { lo: 1.0, hi: 2.0 }).unwrap().quotient;
    let closed = 1.0 + 2.0 / std::f64::consts::PI * (10.0 * 2f64.ln() - 6.0 * 3f64.ln());
    let ind_err = (ind - closed).abs();
    let pass = worst <= cap && ext >= 4.5 && ind_err < 1e-6 && worst <= TAU_SL + 1e-4;
    verdict(
        9,
        "Hilbert-form quotients",
        pass,
        format!(
            "{} probes, max quotient {worst:.6} (cap {cap}), extremizer X=1e6 {ext:.6}, indicator {ind:.12} (err {ind_err:.2e})",
            probes.len()
        ),
        t.elapsed(),
    );
}

#[test]
fn criterion_10_j0_quadrature() {
    let t = Instant::now();
    let params = KreinGenParams::default();
    let mut worst = 0.0f64;
    for seed in 0..20 {
        let problem = generate_krein(&params, 1000 + seed).unwrap();
        worst = worst.max(j0_consistency(&problem, 1e6).unwrap());
    }
    verdict(
        10,
        "J0 by quadrature vs eigen-construction, 20 matrices",
        worst < 1e-4,
        format!("max entrywise error {worst:.3e}"),
        t.elapsed(),
    );
}
