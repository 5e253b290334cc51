use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::eig::Spectrum;
use super::report::{fmt_point, Bounds, EigenRecord, VerificationReport};
use super::resolvent::min_relative_bound;
use super::verify::b_grid;
use crate::geometry::{tmain_regions, DiskFamilyRegion, TmainRegions};
use crate::linalg::{self, c, CMat, DenseMatrix};
use crate::quad::{log_panels, Rule};
use crate::{Error, Result};

/// `A = A₀ + V` in `(ℂⁿ, [·,·] = (J·,·))` with `JA₀ ≻ 0` and `JV` Hermitian.
#[derive(Debug, Clone)]
pub struct KreinPerturbationProblem {
    signature: Vec<f64>,
    a0: CMat,
    v: CMat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KreinProblemSpec {
    pub signature: Vec<f64>,
    #[serde(rename = "A0")]
    pub a0: DenseMatrix,
    #[serde(rename = "V")]
    pub v: DenseMatrix,
}

impl KreinPerturbationProblem {
    pub fn new(signature: Vec<f64>, a0: CMat, v: CMat) -> Result<Self> {
        let n = signature.len();
        if n == 0 {
            return Err(Error::Shape("empty signature".into()));
        }
        if signature.iter().any(|s| *s != 1.0 && *s != -1.0) {
            return Err(Error::invalid("signature", "entries must be +1 or -1"));
        }
        for (name, m) in [("A0", &a0), ("V", &v)] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::Shape(format!("{name} must be {n}x{n}, got {}x{}", m.nrows(), m.ncols())));
            }
            if !linalg::all_finite(m) {
                return Err(Error::NonFinite(name.into()));
            }
        }
        let p = linalg::row_signs(&signature, &a0);
        let pn = linalg::frobenius(&p);
        if linalg::hermitian_defect(&p) > 1e-12 * pn.max(1.0) {
            return Err(Error::invalid("A0", "J·A0 is not Hermitian"));
        }
        let lo = linalg::hermitian_eigenvalues(&p)?.first().copied().unwrap_or(0.0);
        if lo <= 1e-10 * pn {
            return Err(Error::Hypothesis(format!(
                "J·A0 is not positive definite (smallest eigenvalue {lo:e})"
            )));
        }
        let jv = linalg::row_signs(&signature, &v);
        if linalg::hermitian_defect(&jv) > 1e-12 * linalg::frobenius(&jv).max(1.0) {
            return Err(Error::invalid("V", "J·V is not Hermitian"));
        }
        Ok(Self { signature, a0, v })
    }

    pub fn from_spec(spec: &KreinProblemSpec) -> Result<Self> {
        Self::new(spec.signature.clone(), spec.a0.to_mat()?, spec.v.to_mat()?)
    }

    pub fn to_spec(&self) -> KreinProblemSpec {
        KreinProblemSpec {
            signature: self.signature.clone(),
            a0: DenseMatrix::from_mat(&self.a0),
            v: DenseMatrix::from_mat(&self.v),
        }
    }

    pub fn dim(&self) -> usize {
        self.signature.len()
    }

    pub fn signature(&self) -> &[f64] {
        &self.signature
    }

    pub fn a0(&self) -> &CMat {
        &self.a0
    }

    pub fn v(&self) -> &CMat {
        &self.v
    }

    /// `JA₀`.
    pub fn gram(&self) -> CMat {
        linalg::hermitian_part(&linalg::row_signs(&self.signature, &self.a0))
    }

    /// Lower bound `v = λ_min(JV)`.
    pub fn lower_bound_jv(&self) -> Result<f64> {
        let jv = linalg::row_signs(&self.signature, &self.v);
        Ok(linalg::hermitian_eigenvalues(&jv)?.first().copied().unwrap_or(0.0))
    }
}

#[derive(Debug, Clone)]
pub struct ProjectionData {
    pub e_plus: CMat,
    pub e_minus: CMat,
    pub j0: CMat,
    pub tau0: f64,
}

impl ProjectionData {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "Eplus": DenseMatrix::from_mat(&self.e_plus),
            "Eminus": DenseMatrix::from_mat(&self.e_minus),
            "J0": DenseMatrix::from_mat(&self.j0),
            "tau0": self.tau0,
        })
    }
}

/// Spectral projections of `A₀ = JP` onto its positive and negative spectral
/// subspaces, through the Hermitian matrix `H = P^{1/2} J P^{1/2}` (so that
/// `A₀ = P^{-1/2} H P^{1/2}`).
pub fn spectral_projections(problem: &KreinPerturbationProblem) -> Result<ProjectionData> {
    let n = problem.dim();
    let p = problem.gram();
    let (ps, psi) = linalg::sqrt_and_inv_sqrt(&p)?;
    let h = linalg::hermitian_part(&(&ps * linalg::row_signs(&problem.signature, &ps)));
    let (vals, u) = linalg::hermitian_eigen(&h)?;
    let a_norm = linalg::spectral_norm(&problem.a0)?;
    if let Some(v) = vals.iter().find(|v| v.abs() <= 1e-10 * a_norm) {
        return Err(Error::Hypothesis(format!("A0 has an eigenvalue {v:e} at 0")));
    }
    let build = |keep: &dyn Fn(f64) -> f64| {
        let d = linalg::from_real_diag(&vals.iter().map(|&v| keep(v)).collect::<Vec<_>>());
        &psi * &u * d * u.adjoint() * &ps
    };
    let e_plus = build(&|v| if v > 0.0 { 1.0 } else { 0.0 });
    let e_minus = build(&|v| if v < 0.0 { 1.0 } else { 0.0 });
    let j0 = &e_plus - &e_minus;
    let tau0 = linalg::spectral_norm(&j0)?.max(1.0);
    debug_assert_eq!(j0.nrows(), n);
    Ok(ProjectionData {
        e_plus,
        e_minus,
        j0,
        tau0,
    })
}

/// `(1/π) ∫₀^{t_max} ((A₀+it)⁻¹ + (A₀-it)⁻¹) dt` with a 20-point Gauss rule on
/// `[0, σ/4]` and geometric panels (ratio 2) beyond, `σ` the smallest `|λ(A₀)|`.
pub fn j0_quadrature(a0: &CMat, t_max: f64) -> Result<CMat> {
    let n = a0.nrows();
    let (vals, _) = linalg::eigen(a0)?;
    let sigma = vals.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Numerical("A0 is singular".into()));
    }
    let t0 = (sigma / 4.0).min(t_max);
    let mut edges = vec![0.0];
    edges.extend(log_panels(t0, t_max.max(t0 * 2.0), 2.0));
    let rule = Rule::new(20);
    let mut acc = CMat::zeros(n, n);
    for w in edges.windows(2) {
        for (t, wt) in rule.mapped(w[0], w[1]) {
            let plus = linalg::inverse(&linalg::shift(a0, c(0.0, -t)))?;
            let minus = linalg::inverse(&linalg::shift(a0, c(0.0, t)))?;
            acc += linalg::scale(&(plus + minus), c(wt / std::f64::consts::PI, 0.0));
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RenormCheck {
    pub trials: usize,
    pub failures: Vec<String>,
    pub holds: bool,
}

/// Randomized check of the norm comparisons between `‖·‖` and `‖·‖₀`, where
/// `‖f‖₀² = (JJ₀f, f)`.
pub fn renorm_check(
    problem: &KreinPerturbationProblem,
    data: &ProjectionData,
    trials: usize,
    seed: u64,
) -> Result<RenormCheck> {
    let n = problem.dim();
    let jj0 = linalg::row_signs(&problem.signature, &data.j0);
    if linalg::hermitian_defect(&jj0) > 1e-8 * linalg::frobenius(&jj0).max(1.0) {
        return Err(Error::Numerical("J·J0 is not Hermitian".into()));
    }
    let g = linalg::hermitian_part(&jj0);
    let (gs, gsi) = linalg::sqrt_and_inv_sqrt(&g)
        .map_err(|_| Error::Numerical("Gram matrix J·J0 is not positive definite".into()))?;
    let tau = data.tau0;
    let half = (1.0 + tau) / 2.0;
    let norm0 = |f: &CMat| (&gs * f).norm_l2();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = RenormCheck {
        trials,
        ..RenormCheck::default()
    };
    let check = |ok: bool, what: &str, k: usize, out: &mut RenormCheck| {
        if !ok {
            out.failures.push(format!("trial {k}: {what}"));
        }
    };
    let slack = 1.0 + 1e-8;
    for k in 0..trials {
        let t = linalg::complex_gaussian(&mut rng, n, n);
        let t0 = linalg::spectral_norm(&(&gs * &t * &gsi))?;
        check(t0 <= tau * linalg::spectral_norm(&t)? * slack, "‖T‖₀ > τ₀‖T‖", k, &mut out);
        let f = linalg::complex_gaussian(&mut rng, n, 1);
        let (f2, f02) = (f.norm_l2().powi(2), norm0(&f).powi(2));
        check(f2 <= tau * f02 * slack, "‖f‖² > τ₀‖f‖₀²", k, &mut out);
        check(f02 <= tau * f2 * slack, "‖f‖₀² > τ₀‖f‖²", k, &mut out);
        for (name, e) in [("E+", &data.e_plus), ("E-", &data.e_minus)] {
            let ef = e * &f;
            check(norm0(&ef).powi(2) <= half * f2 * slack, &format!("‖{name}f‖₀² bound"), k, &mut out);
            check(ef.norm_l2().powi(2) <= half * f02 * slack, &format!("‖{name}f‖² bound"), k, &mut out);
        }
    }
    out.holds = out.failures.is_empty();
    Ok(out)
}

/// `"auto"` (use `τ₀`) or a number `τ ≥ 1`; the larger of the value and `τ₀` is used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TauRepr", into = "TauRepr")]
pub enum TauChoice {
    Auto,
    Value(f64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TauRepr {
    Value(f64),
    Word(String),
}

impl TryFrom<TauRepr> for TauChoice {
    type Error = String;

    fn try_from(r: TauRepr) -> std::result::Result<Self, String> {
        match r {
            TauRepr::Value(v) => Ok(TauChoice::Value(v)),
            TauRepr::Word(w) => w.parse(),
        }
    }
}

impl From<TauChoice> for TauRepr {
    fn from(t: TauChoice) -> Self {
        match t {
            TauChoice::Auto => TauRepr::Word("auto".into()),
            TauChoice::Value(v) => TauRepr::Value(v),
        }
    }
}

impl std::str::FromStr for TauChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(TauChoice::Auto);
        }
        s.parse::<f64>()
            .map(TauChoice::Value)
            .map_err(|_| format!("expected `auto` or a number, got `{s}`"))
    }
}

impl std::fmt::Display for TauChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TauChoice::Auto => f.write_str("auto"),
            TauChoice::Value(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct TmainOptions {
    pub tau: TauChoice,
    pub b_steps: usize,
    /// Restrict the sweep to `b = 0`.
    pub bounded: bool,
    pub nonreal_tol: f64,
    pub sign_threshold: f64,
}

impl Default for TmainOptions {
    fn default() -> Self {
        Self {
            tau: TauChoice::Auto,
            b_steps: 100,
            bounded: false,
            nonreal_tol: 1e-8,
            sign_threshold: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CurvePoint {
    pub b: f64,
    pub a: f64,
    pub area: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct TmainOutcome {
    pub report: VerificationReport,
    pub tau: f64,
    pub tau0: f64,
    pub regions: Option<TmainRegions>,
    pub curve: Vec<CurvePoint>,
}

/// `a(b)` for the perturbation hypothesis `(1+τ)τ‖Vf‖² ≤ 2a‖f‖² + b‖A₀f‖²`.
pub fn tmain_a(problem: &KreinPerturbationProblem, tau: f64, b: f64) -> Result<f64> {
    let w = ((1.0 + tau) * tau).sqrt();
    Ok(min_relative_bound(&linalg::scale(&problem.v, c(w, 0.0)), &problem.a0, b)? / 2.0)
}

/// Radius `r` and half-length `d` of `B_r([-d, d])` in the bounded case `b = 0`.
pub fn bounded_v_reduction(problem: &KreinPerturbationProblem, tau: f64) -> Result<(f64, f64)> {
    let a = tmain_a(problem, tau, 0.0)?;
    let r = ((1.0 + tau) / (2.0 * tau) * a).sqrt();
    let d = -(1.0 + tau) * problem.lower_bound_jv()? / 2.0;
    Ok((r, d))
}

fn region_json(r: &DiskFamilyRegion, gamma: f64) -> serde_json::Value {
    r.to_json("bone", Some(gamma))
}

/// Numerical check of the perturbation enclosure for `A₀ + V`.
pub fn verify_tmain(problem: &KreinPerturbationProblem, opts: &TmainOptions) -> Result<TmainOutcome> {
    if opts.b_steps == 0 || !(opts.nonreal_tol > 0.0 && opts.sign_threshold > 0.0) {
        return Err(Error::invalid("options", "bSteps >= 1 and positive tolerances required"));
    }
    let proj = spectral_projections(problem)?;
    let tau0 = proj.tau0;
    let tau = match opts.tau {
        TauChoice::Auto => tau0,
        TauChoice::Value(t) if t.is_finite() && t >= 1.0 => t.max(tau0),
        TauChoice::Value(t) => return Err(Error::invalid("tau", format!("must be finite and >= 1, got {t}"))),
    };
    let v = problem.lower_bound_jv()?;
    let grid = if opts.bounded { vec![0.0] } else { b_grid(opts.b_steps) };

    let mut curve = Vec::with_capacity(grid.len());
    let mut best: Option<(f64, f64, f64)> = None;
    for &b in &grid {
        let a = tmain_a(problem, tau, b)?;
        let area = if v < 0.0 {
            Some(tmain_regions(a, b, tau, v)?.worse.area()?)
        } else {
            None
        };
        curve.push(CurvePoint { b, a, area });
        let key = area.unwrap_or(a);
        if best.is_none_or(|(k, _, _)| key < k) {
            best = Some((key, a, b));
        }
    }
    let Some((_, a, b)) = best else {
        return Err(Error::Hypothesis("no admissible b < 1".into()));
    };
    let regions = if v < 0.0 { Some(tmain_regions(a, b, tau, v)?) } else { None };

    let a_full = &problem.a0 + &problem.v;
    let spec = Spectrum::of(&a_full)?;
    let mut report = VerificationReport::new(json!({
        "dims": [problem.dim()],
        "signature": {
            "plus": problem.signature.iter().filter(|s| **s > 0.0).count(),
            "minus": problem.signature.iter().filter(|s| **s < 0.0).count(),
        },
        "norms": {"A0": linalg::spectral_norm(&problem.a0)?, "V": linalg::spectral_norm(&problem.v)?},
        "bCurve": curve,
        "worse": regions.as_ref().map(|r| region_json(&r.worse, r.gamma)),
        "better": regions.as_ref().and_then(|r| r.better.as_ref().map(|x| region_json(x, r.gamma))),
    }));
    report.bounds = Bounds {
        a: Some(a),
        b: Some(b),
        tau: Some(tau),
        tau0: Some(tau0),
        gamma: regions.as_ref().map(|r| r.gamma),
        v: Some(v),
    };

    let extent = regions
        .as_ref()
        .and_then(|r| r.worse.x_extent())
        .unwrap_or((0.0, 0.0));
    for (i, &z) in spec.values.iter().enumerate() {
        let delta = spec.perturbation(i);
        if spec.is_nonreal(i, opts.nonreal_tol) {
            report.nonreal_count += 1;
            let Some(r) = &regions else {
                report
                    .containment_failures
                    .push(format!("{} is non-real although v = {v:e} >= 0", fmt_point(z)));
                // The enclosure is the real line itself.
                report.eigenvalues.push(EigenRecord {
                    re: z.re,
                    im: z.im,
                    contained: false,
                    margin: z.im.abs(),
                });
                continue;
            };
            let margin = r.worse.membership(z).margin;
            let mut contained = margin <= delta;
            if !contained {
                report
                    .containment_failures
                    .push(format!("{} outside the region by {margin:e}", fmt_point(z)));
            }
            if let Some(better) = &r.better {
                let mb = better.membership(z).margin;
                if mb > delta {
                    contained = false;
                    report
                        .containment_failures
                        .push(format!("{} outside the sharper region by {mb:e}", fmt_point(z)));
                }
            }
            report.eigenvalues.push(EigenRecord {
                re: z.re,
                im: z.im,
                contained,
                margin,
            });
            continue;
        }
        let x = z.re;
        let expect = if x > extent.1 + delta {
            1.0
        } else if x < extent.0 - delta {
            -1.0
        } else {
            continue;
        };
        let st = &mut report.checks.sign_type;
        st.tested += 1;
        let q = spec.krein_quotient(i, &problem.signature);
        if spec.clustered(i) || q.abs() < opts.sign_threshold {
            st.indeterminate += 1;
        } else if q * expect < 0.0 {
            report
                .sign_type_failures
                .push(format!("real eigenvalue {x:e} has (Jf,f)/‖f‖² = {q:e}"));
        }
    }

    Ok(TmainOutcome {
        report: report.finish(),
        tau,
        tau0,
        regions,
        curve,
    })
}

/// Entrywise `max |J₀(quadrature) - J₀(eigen)|`.
pub fn j0_consistency(problem: &KreinPerturbationProblem, horizon: f64) -> Result<f64> {
    let data = spectral_projections(problem)?;
    let t_max = horizon * linalg::spectral_norm(&problem.a0)?;
    let q = j0_quadrature(&problem.a0, t_max)?;
    Ok(linalg::max_abs(&(q - &data.j0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::generate::{generate_krein, KreinGenParams};
    use faer::Mat;

    fn two_by_two(p: [[f64; 2]; 2]) -> KreinPerturbationProblem {
        let sig = vec![1.0, -1.0];
        let pm = Mat::from_fn(2, 2, |i, j| c(p[i][j], 0.0));
        KreinPerturbationProblem::new(sig.clone(), linalg::row_signs(&sig, &pm), Mat::zeros(2, 2)).unwrap()
    }

    #[test]
    fn identity_gram_gives_j() {
        let prob = two_by_two([[1.0, 0.0], [0.0, 1.0]]);
        let d = spectral_projections(&prob).unwrap();
        assert!((d.tau0 - 1.0).abs() < 1e-14);
        assert!(linalg::max_abs(&(&d.e_plus - linalg::from_real_diag(&[1.0, 0.0]))) < 1e-14);
        assert!(linalg::max_abs(&(&d.j0 - linalg::from_real_diag(&[1.0, -1.0]))) < 1e-14);
        assert!(renorm_check(&prob, &d, 50, 1).unwrap().holds);
    }

    #[test]
    fn closed_form_two_by_two() {
        let prob = two_by_two([[2.0, 1.0], [1.0, 1.0]]);
        let d = spectral_projections(&prob).unwrap();
        // A₀ = [[2, 1], [-1, -1]] has eigenvalues (1 ± √5)/2.
        let (vals, _) = linalg::eigen(prob.a0()).unwrap();
        let mut re: Vec<f64> = vals.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] - (1.0 - 5f64.sqrt()) / 2.0).abs() < 1e-14);
        assert!((re[1] - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-14);
        // E₊ projects onto the eigenvector (1, λ₊ - 2) along (1, λ₋ - 2).
        let (lp, lm) = (re[1], re[0]);
        let (x1, x2) = ((1.0, lp - 2.0), (1.0, lm - 2.0));
        let det = x1.0 * x2.1 - x2.0 * x1.1;
        let inv_row0 = (x2.1 / det, -x2.0 / det);
        let ep = [
            [x1.0 * inv_row0.0, x1.0 * inv_row0.1],
            [x1.1 * inv_row0.0, x1.1 * inv_row0.1],
        ];
        for i in 0..2 {
            for j in 0..2 {
                assert!((d.e_plus[(i, j)].re - ep[i][j]).abs() < 1e-12);
            }
        }
        let j0sq = &d.j0 * &d.j0;
        assert!(linalg::max_abs(&(j0sq - linalg::identity(2))) < 1e-12);
        assert!(d.tau0 > 1.0);
        assert!(renorm_check(&prob, &d, 200, 2).unwrap().holds);
    }

    #[test]
    fn projections_invariants_random() {
        for seed in 0..5 {
            let prob = generate_krein(&KreinGenParams::default(), seed).unwrap();
            let d = spectral_projections(&prob).unwrap();
            let n = prob.dim();
            let tol = 1e-8 * n as f64;
            assert!(linalg::max_abs(&(&d.e_plus * &d.e_plus - &d.e_plus)) < tol);
            assert!(linalg::max_abs(&(&d.e_plus * &d.e_minus)) < tol);
            assert!(linalg::max_abs(&(&d.j0 * &d.j0 - linalg::identity(n))) < tol);
            assert!(linalg::max_abs(&(&d.e_plus + &d.e_minus - linalg::identity(n))) < tol);
            assert!(renorm_check(&prob, &d, 100, seed).unwrap().holds);
        }
    }

    #[test]
    fn quadrature_reproduces_j0() {
        let prob = two_by_two([[2.0, 1.0], [1.0, 1.0]]);
        assert!(j0_consistency(&prob, 1e6).unwrap() < 1e-4);
    }

    #[test]
    fn rejects_singular_or_indefinite() {
        let sig = vec![1.0, -1.0];
        let z = Mat::zeros(2, 2);
        let indefinite = linalg::row_signs(&sig, &linalg::from_real_diag(&[1.0, -1.0]));
        assert!(matches!(
            KreinPerturbationProblem::new(sig.clone(), indefinite, z.clone()),
            Err(Error::Hypothesis(_))
        ));
        let bad_v = Mat::from_fn(2, 2, |i, j| if i == 0 && j == 1 { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert!(KreinPerturbationProblem::new(sig.clone(), linalg::row_signs(&sig, &linalg::identity(2)), bad_v).is_err());
    }

    #[test]
    fn zero_perturbation_is_real() {
        let prob = two_by_two([[3.0, 0.5], [0.5, 1.0]]);
        let out = verify_tmain(&prob, &TmainOptions::default()).unwrap();
        assert!(out.report.verified);
        assert_eq!(out.report.nonreal_count, 0);
        assert_eq!(out.report.bounds.v, Some(0.0));
        assert!(out.regions.is_none());
    }

    #[test]
    fn positive_jv_keeps_spectrum_real() {
        for seed in 0..10 {
            let base = generate_krein(&KreinGenParams::default(), seed).unwrap();
            let eps = 0.7;
            let v = linalg::from_real_diag(&base.signature().iter().map(|s| s * eps).collect::<Vec<_>>());
            let prob = KreinPerturbationProblem::new(base.signature().to_vec(), base.a0().clone(), v).unwrap();
            let out = verify_tmain(&prob, &TmainOptions { b_steps: 10, ..TmainOptions::default() }).unwrap();
            assert!((out.report.bounds.v.unwrap() - eps).abs() < 1e-12);
            assert_eq!(out.report.nonreal_count, 0, "seed {seed}");
            assert!(out.report.verified);
        }
    }

    #[test]
    fn bounded_reduction_matches_closed_form() {
        let prob = generate_krein(&KreinGenParams::default(), 4).unwrap();
        let tau = spectral_projections(&prob).unwrap().tau0;
        let (r, d) = bounded_v_reduction(&prob, tau).unwrap();
        let vn = linalg::spectral_norm(prob.v()).unwrap();
        assert!((r - (1.0 + tau) * vn / 2.0).abs() < 1e-10 * r.max(1.0));
        let v = prob.lower_bound_jv().unwrap();
        assert!((d + (1.0 + tau) * v / 2.0).abs() < 1e-12);
    }

    #[test]
    fn random_problems_verify() {
        for seed in 0..8 {
            let prob = generate_krein(&KreinGenParams { max_dim: 10, ..KreinGenParams::default() }, seed).unwrap();
            let out = verify_tmain(&prob, &TmainOptions { b_steps: 20, ..TmainOptions::default() }).unwrap();
            assert!(out.report.verified, "seed {seed}: {:?}", out.report);
        }
    }

    #[test]
    fn problem_spec_round_trip() {
        let prob = two_by_two([[2.0, 1.0], [1.0, 1.0]]);
        let js = serde_json::to_string(&prob.to_spec()).unwrap();
        let back = KreinPerturbationProblem::from_spec(&serde_json::from_str(&js).unwrap()).unwrap();
        assert_eq!(back.a0(), prob.a0());
    }

    #[test]
    fn tau_choice_forms() {
        assert_eq!(serde_json::to_string(&TauChoice::Auto).unwrap(), "\"auto\"");
        assert_eq!(serde_json::from_str::<TauChoice>("7.5").unwrap(), TauChoice::Value(7.5));
        assert_eq!("AUTO".parse::<TauChoice>().unwrap(), TauChoice::Auto);
        assert!(serde_json::from_str::<TauChoice>("\"sometimes\"").is_err());
    }
}
