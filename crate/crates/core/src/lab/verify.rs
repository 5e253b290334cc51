use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::block::{assemble_block, BlockOperator};
use super::eig::Spectrum;
use super::report::{fmt_point, Bounds, EigenRecord, VerificationReport};
use super::resolvent::{min_relative_bound, resolvent_norm, sample_nonreal, ResolventFactor};
use crate::geometry::{smallerb_threshold, DiskFamilyRegion, RelBound, SpectrumModel};
use crate::linalg::{self, CMat};
use crate::{Complex64, Error, Result};

/// `{0, 1/steps, ..., (steps-1)/steps}`.
pub fn b_grid(steps: usize) -> Vec<f64> {
    (0..steps.max(1)).map(|k| k as f64 / steps.max(1) as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct BlockVerifyOptions {
    pub lambda_samples: usize,
    /// Number of points of the `b` grid in `[0, 1)`.
    pub b_steps: usize,
    pub nonreal_tol: f64,
    pub sign_threshold: f64,
}

impl Default for BlockVerifyOptions {
    fn default() -> Self {
        Self {
            lambda_samples: 1000,
            b_steps: 100,
            nonreal_tol: 1e-8,
            sign_threshold: 1e-6,
        }
    }
}

impl BlockVerifyOptions {
    pub fn validate(&self) -> Result<()> {
        if self.b_steps == 0 {
            return Err(Error::invalid("bSteps", "must be >= 1"));
        }
        if !(self.nonreal_tol > 0.0 && self.sign_threshold > 0.0) {
            return Err(Error::invalid("tolerances", "must be positive"));
        }
        Ok(())
    }
}

/// The relative bound `(a(b), b)` of `T` with respect to Hermitian `S` whose largest
/// disk `max_{t∈σ(S)} (a + b t²)` is smallest over the grid.
pub fn fit_relative_bound(t: &CMat, s: &CMat, spectrum: &[f64], grid: &[f64]) -> Result<RelBound> {
    let mut best: Option<(f64, RelBound)> = None;
    for &b in grid {
        if !(0.0..1.0).contains(&b) {
            continue;
        }
        let a = min_relative_bound(t, s, b)?;
        let worst = spectrum.iter().map(|x| a + b * x * x).fold(a, f64::max);
        if best.as_ref().is_none_or(|(w, _)| worst < *w) {
            best = Some((worst, RelBound::new(a, b)?));
        }
    }
    best.map(|(_, bd)| bd)
        .ok_or_else(|| Error::Hypothesis("no relative bound with b < 1 on the grid".into()))
}

struct Side {
    factor: ResolventFactor,
    region: DiskFamilyRegion,
}

impl Side {
    fn new(t: &CMat, s: &CMat, grid: &[f64]) -> Result<(Self, RelBound)> {
        let factor = ResolventFactor::new(t, s)?;
        let bound = fit_relative_bound(t, s, factor.spectrum(), grid)?;
        let region = DiskFamilyRegion::new(bound, SpectrumModel::points(factor.spectrum())?, 1.0)?;
        Ok((Self { factor, region }, bound))
    }

    /// `Some(‖T(S-λ)⁻¹‖)` off the spectrum, `None` within `10⁻⁸` of it.
    fn norm(&self, lambda: Complex64) -> Result<Option<(f64, f64)>> {
        let dist = self.factor.distance(lambda);
        if dist <= 1e-8 {
            return Ok(None);
        }
        Ok(Some((self.factor.norm(lambda)?, dist)))
    }

    /// K-set membership allowing for a perturbation `delta` of `λ`.
    fn in_k_set(&self, lambda: Complex64, delta: f64) -> Result<bool> {
        Ok(match self.norm(lambda)? {
            None => true,
            Some((n, dist)) => n >= 1.0 - 1e-10 - 2.0 * delta * n / dist,
        })
    }

    /// `λ ∈ ϱ(S) \ K_S(T)` robustly.
    fn outside_k_set(&self, lambda: Complex64, delta: f64) -> Result<bool> {
        Ok(match self.norm(lambda)? {
            None => false,
            Some((n, dist)) => n < 1.0 - 1e-10 - 2.0 * delta * n / dist,
        })
    }
}

/// Numerical check of the block-operator enclosure on one instance.
pub fn verify_block_enclosure(b: &BlockOperator, opts: &BlockVerifyOptions, seed: u64) -> Result<VerificationReport> {
    opts.validate()?;
    let grid = b_grid(opts.b_steps);
    let m_adj = linalg::adjoint(b.m());
    let (minus, bm) = Side::new(b.m(), b.s_minus(), &grid)?;
    let (plus, bp) = Side::new(&m_adj, b.s_plus(), &grid)?;
    let s = assemble_block(b);
    let sig = b.signature();
    let spec = Spectrum::of(&s)?;

    let s_minus_max = minus.factor.spectrum().last().copied().unwrap_or(0.0);
    let s_plus_min = plus.factor.spectrum().first().copied().unwrap_or(0.0);
    let gamma = s_minus_max.max(-s_plus_min).max(0.0);
    let common = RelBound::new(bm.a().max(bp.a()), bm.b().max(bp.b()))?;

    let (np, nm) = b.dims();
    let mut report = VerificationReport::new(json!({
        "dims": [np, nm],
        "seed": seed,
        "norms": {
            "Splus": linalg::spectral_norm(b.s_plus())?,
            "Sminus": linalg::spectral_norm(b.s_minus())?,
            "M": linalg::spectral_norm(b.m())?,
        },
        "fits": {"aMinus": bm.a(), "bMinus": bm.b(), "aPlus": bp.a(), "bPlus": bp.b()},
    }));
    report.bounds = Bounds {
        a: Some(common.a()),
        b: Some(common.b()),
        gamma: Some(gamma),
        ..Bounds::default()
    };

    for (i, &z) in spec.values.iter().enumerate() {
        let delta = spec.perturbation(i);
        if spec.is_nonreal(i, opts.nonreal_tol) {
            let in_k = minus.in_k_set(z, delta)? && plus.in_k_set(z, delta)?;
            let margin = minus.region.membership(z).margin.max(plus.region.membership(z).margin);
            let in_disks = margin <= delta;
            if !in_k {
                report
                    .containment_failures
                    .push(format!("{} outside K_(S-)(M) ∩ K_(S+)(M*)", fmt_point(z)));
            }
            if !in_disks {
                report
                    .containment_failures
                    .push(format!("{} outside the disk-union intersection by {margin:e}", fmt_point(z)));
            }
            report.eigenvalues.push(EigenRecord {
                re: z.re,
                im: z.im,
                contained: in_k && in_disks,
                margin,
            });
            report.nonreal_count += 1;
            continue;
        }
        let x = Complex64::new(z.re, 0.0);
        let positive = minus.outside_k_set(x, delta)?;
        let negative = plus.outside_k_set(x, delta)?;
        if !(positive || negative) {
            continue;
        }
        let st = &mut report.checks.sign_type;
        st.tested += 1;
        let q = spec.krein_quotient(i, &sig);
        if spec.clustered(i) || q.abs() < opts.sign_threshold {
            st.indeterminate += 1;
            continue;
        }
        if positive && q < 0.0 {
            report
                .sign_type_failures
                .push(format!("real eigenvalue {:e} should be of positive type, (Jf,f) = {q:e}", z.re));
        }
        if negative && q > 0.0 {
            report
                .sign_type_failures
                .push(format!("real eigenvalue {:e} should be of negative type, (Jf,f) = {q:e}", z.re));
        }
    }

    let threshold = if common.b() > 0.0 {
        smallerb_threshold(&common, gamma)?
    } else {
        f64::INFINITY
    };
    let scale = linalg::spectral_norm(&s)?.max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f_1a3b_da5a);
    let (mut beyond, mut order_max) = (0usize, 0.0f64);
    for _ in 0..opts.lambda_samples {
        let lambda = sample_nonreal(&mut rng, scale);
        let im = lambda.im.abs();
        let rn = match resolvent_norm(&s, lambda) {
            Ok(v) => v,
            Err(Error::InSpectrum(_)) => continue,
            Err(e) => return Err(e),
        };
        let mut bound = f64::INFINITY;
        for side in [&minus, &plus] {
            let l = side.factor.norm(lambda)?;
            if l < 1.0 {
                bound = bound.min((1.0 + l + l * l) / (im * (1.0 - l * l)));
            }
        }
        if bound.is_finite() {
            let rc = &mut report.checks.resolvent;
            rc.samples += 1;
            let ratio = rn / bound;
            rc.max_ratio = rc.max_ratio.max(ratio);
            if ratio > 1.0 + 1e-8 {
                report
                    .resolvent_check_failures
                    .push(format!("resolvent bound violated at {}: ratio {ratio:e}", fmt_point(lambda)));
            }
        }
        if lambda.norm() > threshold {
            beyond += 1;
            let ratio = rn * (1.0 - common.b()) * im / 3.0;
            order_max = order_max.max(ratio);
            if ratio > 1.0 + 1e-8 {
                report
                    .resolvent_check_failures
                    .push(format!("order-one bound violated at {}: ratio {ratio:e}", fmt_point(lambda)));
            }
        }
    }
    if let Some(obj) = report.instance.as_object_mut() {
        obj.insert(
            "orderCheck".into(),
            json!({"threshold": threshold, "samples": beyond, "maxRatio": order_max}),
        );
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::generate::{generate_block, BlockGenParams};
    use crate::linalg::c;
    use faer::Mat;

    fn quick() -> BlockVerifyOptions {
        BlockVerifyOptions {
            lambda_samples: 100,
            b_steps: 20,
            ..BlockVerifyOptions::default()
        }
    }

    #[test]
    fn uncoupled_is_clean() {
        let b = BlockOperator::new(
            linalg::from_real_diag(&[1.0, 2.0]),
            linalg::from_real_diag(&[-1.0]),
            Mat::zeros(2, 1),
        )
        .unwrap();
        let r = verify_block_enclosure(&b, &quick(), 1).unwrap();
        assert!(r.verified);
        assert_eq!(r.nonreal_count, 0);
    }

    #[test]
    fn rotation_on_the_boundary() {
        let one = |v: f64| Mat::from_fn(1, 1, |_, _| c(v, 0.0));
        let b = BlockOperator::new(one(0.0), one(0.0), one(1.0)).unwrap();
        let r = verify_block_enclosure(&b, &quick(), 1).unwrap();
        assert_eq!(r.nonreal_count, 2);
        assert!(r.verified, "{:?}", r.containment_failures);
        for e in &r.eigenvalues {
            assert!(e.margin.abs() < 1e-12);
        }
    }

    #[test]
    fn random_instances_verify() {
        let p = BlockGenParams {
            max_dim: 10,
            ..BlockGenParams::default()
        };
        for seed in 0..10 {
            let b = generate_block(&p, seed).unwrap();
            let r = verify_block_enclosure(&b, &quick(), seed).unwrap();
            assert!(r.verified, "seed {seed}: {:?}", r);
        }
    }

    #[test]
    fn fit_prefers_small_disks() {
        let t = linalg::from_real_diag(&[1.0, 0.0]);
        let s = linalg::from_real_diag(&[0.0, 10.0]);
        let bd = fit_relative_bound(&t, &s, &[0.0, 10.0], &b_grid(10)).unwrap();
        assert_eq!(bd.b(), 0.0);
        assert!((bd.a() - 1.0).abs() < 1e-14);
    }
}
