use serde::{Deserialize, Serialize};

use super::bound::RelBound;
use super::spectrum::{Interval, SpectrumModel};
use crate::quad::{self, Tolerance};
use crate::{ComplexPoint, Error, Result};

/// The union `⋃_{t∈C} B_{r(t)}(t)` with `r(t) = √(s(a + b t²))`, `s` the radius scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiskFamilyRegion {
    bound: RelBound,
    centers: SpectrumModel,
    radius_scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub inside: bool,
    /// `min_t |λ - t| - r(t)`: non-positive exactly when `inside`.
    pub margin: f64,
}

impl DiskFamilyRegion {
    pub fn new(bound: RelBound, centers: SpectrumModel, radius_scale: f64) -> Result<Self> {
        if !(radius_scale.is_finite() && radius_scale > 0.0) {
            return Err(Error::invalid("radiusScale", format!("must be > 0, got {radius_scale}")));
        }
        if !centers.is_bounded() && radius_scale * bound.b() >= 1.0 {
            return Err(Error::invalid(
                "radiusScale",
                format!(
                    "radiusScale·b = {} must be < 1 for unbounded centers",
                    radius_scale * bound.b()
                ),
            ));
        }
        Ok(Self {
            bound,
            centers,
            radius_scale,
        })
    }

    /// Disks of radius `√(a + b t²)` over `[-γ, γ]`.
    pub fn bone(bound: RelBound, gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::invalid("gamma", format!("must be finite and >= 0, got {gamma}")));
        }
        Self::new(bound, SpectrumModel::interval(-gamma, gamma)?, 1.0)
    }

    pub fn bound(&self) -> &RelBound {
        &self.bound
    }

    pub fn centers(&self) -> &SpectrumModel {
        &self.centers
    }

    pub fn radius_scale(&self) -> f64 {
        self.radius_scale
    }

    fn radius_sq(&self, t: f64) -> f64 {
        self.radius_scale * self.bound.radius_sq(t)
    }

    pub fn radius(&self, t: f64) -> f64 {
        self.radius_sq(t).sqrt()
    }

    /// Leading coefficient `1 - s b` of `g(t) = |λ - t|² - r(t)²`.
    fn leading(&self) -> f64 {
        1.0 - self.radius_scale * self.bound.b()
    }

    fn g(&self, lambda: ComplexPoint, t: f64) -> f64 {
        let dx = lambda.re - t;
        dx * dx + lambda.im * lambda.im - self.radius_sq(t)
    }

    /// Candidate minimizers of `g` on an interval: the clamped vertex and the finite endpoints.
    fn g_candidates(&self, iv: &Interval, x: f64) -> Vec<f64> {
        let mut c = Vec::with_capacity(3);
        let lead = self.leading();
        if lead > 0.0 {
            c.push(iv.clamp(x / lead));
        }
        c.extend([iv.lo, iv.hi].into_iter().filter(|t| t.is_finite()));
        c
    }

    pub fn contains(&self, lambda: ComplexPoint) -> bool {
        self.min_g(lambda) <= 0.0
    }

    fn min_g(&self, lambda: ComplexPoint) -> f64 {
        let mut best = f64::INFINITY;
        for iv in self.centers.intervals() {
            for t in self.g_candidates(iv, lambda.re) {
                best = best.min(self.g(lambda, t));
            }
        }
        for &t in self.centers.isolated_points() {
            best = best.min(self.g(lambda, t));
        }
        best
    }

    fn metric(&self, lambda: ComplexPoint, t: f64) -> f64 {
        (lambda - t).norm() - self.radius(t)
    }

    pub fn membership(&self, lambda: ComplexPoint) -> Membership {
        let inside = self.contains(lambda);
        if self.centers.is_empty() {
            return Membership {
                inside,
                margin: f64::INFINITY,
            };
        }
        let mut margin = f64::INFINITY;
        for &t in self.centers.isolated_points() {
            margin = margin.min(self.metric(lambda, t));
        }
        let seed = self.centers.extent().map_or(0.0, |(lo, _)| lo);
        for iv in self.centers.intervals() {
            margin = margin.min(self.interval_margin(lambda, iv, seed));
        }
        // The exact decision wins over rounding in the metric form.
        let margin = if inside { margin.min(0.0) } else { margin.max(f64::MIN_POSITIVE) };
        Membership { inside, margin }
    }

    fn interval_margin(&self, lambda: ComplexPoint, iv: &Interval, fallback: f64) -> f64 {
        let m = |t: f64| self.metric(lambda, t);
        let mut seeds = self.g_candidates(iv, lambda.re);
        seeds.push(iv.clamp(lambda.re));
        seeds.push(iv.clamp(fallback));
        let best_seed = seeds.iter().map(|&t| m(t)).fold(f64::INFINITY, f64::min);

        let (lo, hi) = if iv.is_bounded() {
            (iv.lo, iv.hi)
        } else {
            // Outside |t| ≤ R the metric exceeds every seed value.
            let sa = (self.radius_scale * self.bound.a()).sqrt();
            let sb = (self.radius_scale * self.bound.b()).sqrt();
            let r = (best_seed + lambda.norm() + sa) / (1.0 - sb) + 1.0;
            (iv.lo.max(-r), iv.hi.min(r))
        };
        if lo >= hi {
            return best_seed.min(m(lo));
        }

        const SAMPLES: usize = 64;
        let step = (hi - lo) / SAMPLES as f64;
        let (grid_best, k) = (0..=SAMPLES)
            .map(|k| (m(if k == SAMPLES { hi } else { lo + step * k as f64 }), k))
            .fold((f64::INFINITY, 0), |acc, v| if v.0 < acc.0 { v } else { acc });
        let a = lo + step * k.saturating_sub(1) as f64;
        let b = (lo + step * (k + 1) as f64).min(hi);
        best_seed.min(grid_best).min(golden_min(m, a, b))
    }

    /// Squared half-height `max_t [r(t)² - (x - t)²]` of the vertical section at `x`;
    /// negative when the section is empty.
    pub fn height_sq(&self, x: f64) -> f64 {
        let h = |t: f64| self.radius_sq(t) - (x - t) * (x - t);
        let mut best = f64::NEG_INFINITY;
        for iv in self.centers.intervals() {
            for t in self.g_candidates(iv, x) {
                best = best.max(h(t));
            }
        }
        for &t in self.centers.isolated_points() {
            best = best.max(h(t));
        }
        best
    }

    /// Horizontal extent `[min (t - r(t)), max (t + r(t))]`, or `None` when unbounded or empty.
    pub fn x_extent(&self) -> Option<(f64, f64)> {
        if !self.centers.is_bounded() || self.centers.is_empty() {
            return None;
        }
        // t - r(t) is concave and t + r(t) convex, so the extremes sit at endpoints.
        let ends = self
            .centers
            .intervals()
            .iter()
            .flat_map(|iv| [iv.lo, iv.hi])
            .chain(self.centers.isolated_points().iter().copied());
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for t in ends {
            let r = self.radius(t);
            lo = lo.min(t - r);
            hi = hi.max(t + r);
        }
        Some((lo, hi))
    }

    /// Area `2∫ h(x) dx`; infinite for unbounded centers.
    pub fn area(&self) -> Result<f64> {
        if self.centers.is_empty() {
            return Ok(0.0);
        }
        let Some((lo, hi)) = self.x_extent() else {
            return Ok(f64::INFINITY);
        };
        if hi <= lo {
            return Ok(0.0);
        }
        let mut breaks = vec![lo, hi];
        for iv in self.centers.intervals() {
            breaks.extend([iv.lo, iv.hi, iv.lo * self.leading(), iv.hi * self.leading()]);
        }
        breaks.extend(self.centers.isolated_points());
        breaks.retain(|x| (lo..=hi).contains(x));
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let scale = (hi - lo).max(1.0);
        let tol = Tolerance {
            rel: 1e-9,
            abs: 1e-14 * scale * scale,
            max_panels: 20_000,
        };
        let half = quad::integrate_breaks(|x| self.height_sq(x).max(0.0).sqrt(), &breaks, tol)?;
        Ok(2.0 * half)
    }

    /// The region as JSON `{kind, a, b, radiusScale, centers, gamma}`.
    pub fn to_json(&self, kind: &str, gamma: Option<f64>) -> serde_json::Value {
        serde_json::json!({
            "kind": kind,
            "a": self.bound.a(),
            "b": self.bound.b(),
            "radiusScale": self.radius_scale,
            "centers": self.centers,
            "gamma": gamma,
        })
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = f(a).min(f(b));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    best = best.min(fc).min(fd);
    best
}

/// Regions of a perturbed J-non-negative operator with lower bound `v < 0` of `JV`.
#[derive(Debug, Clone, PartialEq)]
pub struct TmainRegions {
    pub gamma: f64,
    pub worse: DiskFamilyRegion,
    pub better: Option<DiskFamilyRegion>,
}

/// Threshold `(τ - 1)/(2τ)` below which the sharper region applies.
pub fn better_threshold(tau: f64) -> f64 {
    (tau - 1.0) / (2.0 * tau)
}

pub fn tmain_regions(a: f64, b: f64, tau: f64, v: f64) -> Result<TmainRegions> {
    let bound = RelBound::new(a, b)?;
    if !(tau.is_finite() && tau >= 1.0) {
        return Err(Error::invalid("tau", format!("must be >= 1, got {tau}")));
    }
    if !(v.is_finite() && v < 0.0) {
        return Err(Error::invalid(
            "v",
            format!("must be < 0 (v >= 0 means J-non-negative, no region), got {v}"),
        ));
    }
    let gamma = ((1.0 + tau) * a / (2.0 * tau)).sqrt().min(-(1.0 + tau) * v / 2.0);
    let centers = SpectrumModel::interval(-gamma, gamma)?;
    let worse = DiskFamilyRegion::new(bound, centers.clone(), 1.0)?;
    let better = if b < better_threshold(tau) {
        let scale = (1.0 + tau) / (2.0 * tau * (1.0 - b));
        Some(DiskFamilyRegion::new(bound, centers, scale)?)
    } else {
        None
    };
    Ok(TmainRegions {
        gamma,
        worse,
        better,
    })
}
