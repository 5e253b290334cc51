use serde::{Deserialize, Serialize};
use serde_json::json;

use super::constants::{bst_region, sl_box, BstRegion};
use super::discretize::{has_parity_symmetry, SlDiscretization};
use super::potential::Potential;
use crate::geometry::SlBox;
use crate::io::format_f64;
use crate::lab::report::{fmt_point, Bounds, EigenRecord, VerificationReport};
use crate::{Complex64, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct SlOptions {
    /// Relative threshold for calling an eigenvalue non-real (scaled by its condition).
    pub tol: f64,
    /// Slack `δ = max(10⁻⁶, C·h²·‖q‖_∞ + e^{-κL}·scale)`.
    pub slack_c: f64,
    pub slack_kappa: f64,
    pub sign_threshold: f64,
    pub sign_test: bool,
}

impl Default for SlOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            slack_c: 1.0,
            slack_kappa: 1.0,
            sign_threshold: 1e-6,
            sign_test: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SlEigenRow {
    pub re: f64,
    pub im: f64,
    pub in_paper_box: bool,
    pub in_bst: bool,
    pub margin_paper: f64,
    pub margin_bst: f64,
}

#[derive(Debug, Clone)]
pub struct SlRun {
    pub report: VerificationReport,
    pub rows: Vec<SlEigenRow>,
    pub paper_box: SlBox,
    pub bst: BstRegion,
    pub slack: f64,
    pub q_norm: f64,
}

impl SlRun {
    /// Largest (least negative) paper-box margin, if any non-real eigenvalue exists.
    pub fn worst_paper_margin(&self) -> Option<f64> {
        self.rows.iter().map(|r| r.margin_paper).reduce(f64::max)
    }

    pub fn worst_bst_margin(&self) -> Option<f64> {
        self.rows.iter().map(|r| r.margin_bst).reduce(f64::max)
    }
}

pub const EIGEN_CSV_HEADER: &str = "re,im,in_paper_box,in_bst,margin_paper,margin_bst";

pub fn eigen_rows_csv(rows: &[SlEigenRow]) -> String {
    let mut out = String::from(EIGEN_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            format_f64(r.re),
            format_f64(r.im),
            r.in_paper_box,
            r.in_bst,
            format_f64(r.margin_paper),
            format_f64(r.margin_bst)
        ));
    }
    out
}

pub fn discretization_slack(disc: &SlDiscretization, potential: &Potential, scale: f64, opts: &SlOptions) -> f64 {
    let h2 = disc.h * disc.h;
    (opts.slack_c * h2 * potential.sup_norm() + (-opts.slack_kappa * disc.l).exp() * scale).max(1e-6)
}

/// Checks every computed non-real eigenvalue of the discretized operator against the
/// rectangle and the competing region (both inflated by the discretization slack), and
/// the sign type of real eigenvalues outside the rectangle.
pub fn containment_report(
    disc: &SlDiscretization,
    potential: &Potential,
    p: f64,
    opts: &SlOptions,
) -> Result<SlRun> {
    if !(opts.tol > 0.0 && opts.slack_c >= 0.0 && opts.slack_kappa >= 0.0 && opts.sign_threshold > 0.0) {
        return Err(Error::invalid("options", "tolerances must be positive"));
    }
    let q_norm = potential.lp_norm(p)?;
    let paper_box = sl_box(p, q_norm)?;
    let bst = bst_region(p, q_norm)?;
    let scale = paper_box.half_diagonal().max(1.0);
    let slack = discretization_slack(disc, potential, scale, opts);

    let all = disc.eigenvalues()?;
    let spec = disc.nonreal_from(&all, opts.tol)?;

    let mut report = VerificationReport::new(json!({
        "potential": potential,
        "p": p,
        "L": disc.l,
        "n": disc.n,
        "h": disc.h,
        "qNorm": q_norm,
        "slack": slack,
        "paperBox": paper_box,
        "bst": bst,
    }));
    report.bounds = Bounds::default();

    let mut rows = Vec::new();
    for &z in &spec.eigenvalues {
        let margin_paper = paper_box.margin(z);
        let margin_bst = bst.margin(z);
        let in_paper_box = margin_paper <= slack;
        let in_bst = margin_bst <= slack;
        if !in_paper_box {
            report
                .containment_failures
                .push(format!("{} outside the rectangle by {margin_paper:e}", fmt_point(z)));
        }
        if !in_bst {
            report
                .containment_failures
                .push(format!("{} outside the competing region by {margin_bst:e}", fmt_point(z)));
        }
        report.eigenvalues.push(EigenRecord {
            re: z.re,
            im: z.im,
            contained: in_paper_box && in_bst,
            margin: margin_paper,
        });
        rows.push(SlEigenRow {
            re: z.re,
            im: z.im,
            in_paper_box,
            in_bst,
            margin_paper,
            margin_bst,
        });
    }
    report.nonreal_count = spec.eigenvalues.len();
    for z in &spec.unpaired {
        report
            .containment_failures
            .push(format!("{} has no conjugate partner", fmt_point(*z)));
    }
    let parity = has_parity_symmetry(&spec.eigenvalues, 1e-7);
    if potential.is_even() && !parity {
        report
            .containment_failures
            .push("even potential but non-real eigenvalues lack the λ ↦ -conj λ symmetry".into());
    }
    if let Some(obj) = report.instance.as_object_mut() {
        obj.insert("paritySymmetric".into(), json!(parity));
    }

    if opts.sign_test {
        sign_test(disc, &all, &spec.eigenvalues, paper_box.re_half_width + slack, opts, &mut report)?;
    }

    Ok(SlRun {
        report: report.finish(),
        rows,
        paper_box,
        bst,
        slack,
        q_norm,
    })
}

fn sign_test(
    disc: &SlDiscretization,
    all: &[Complex64],
    nonreal: &[Complex64],
    edge: f64,
    opts: &SlOptions,
    report: &mut VerificationReport,
) -> Result<()> {
    let is_nonreal = |z: &Complex64| nonreal.iter().any(|w| (w - z).norm() <= 1e-6 * (1.0 + z.norm()));
    let mut reals: Vec<f64> = all
        .iter()
        .filter(|z| !is_nonreal(z) && z.im.abs() <= 1e-6 * (1.0 + z.norm()))
        .map(|z| z.re)
        .collect();
    reals.sort_by(f64::total_cmp);
    let mut probe = Vec::new();
    for (k, &lam) in reals.iter().enumerate() {
        if lam.abs() <= edge {
            continue;
        }
        report.checks.sign_type.tested += 1;
        let gap = [k.checked_sub(1).map(|j| reals[j]), reals.get(k + 1).copied()]
            .into_iter()
            .flatten()
            .map(|w| (w - lam).abs())
            .fold(f64::INFINITY, f64::min);
        if gap < 1e-6 * lam.abs().max(1.0) {
            report.checks.sign_type.indeterminate += 1;
        } else {
            probe.push(lam);
        }
    }
    for (lam, s) in probe.iter().zip(disc.real_sign_quotients(&probe)?) {
        if s.abs() < opts.sign_threshold {
            report.checks.sign_type.indeterminate += 1;
        } else if (s > 0.0) != (*lam > 0.0) {
            report
                .sign_type_failures
                .push(format!("real eigenvalue {lam:e} has (Jf,f)/‖f‖² = {s:e}"));
        }
    }
    Ok(())
}
