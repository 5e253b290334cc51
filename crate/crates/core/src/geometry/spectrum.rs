use serde::{Deserialize, Serialize};

use super::bound::{phi, phi_critical_points, RelBound};
use crate::{ComplexPoint, Error, Result};

/// A closed real interval; endpoints may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn clamp(&self, t: f64) -> f64 {
        t.max(self.lo).min(self.hi)
    }
}

/// A closed subset of the real line: finitely many intervals and isolated points,
/// kept sorted with overlaps merged.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawSpectrum", into = "RawSpectrum")]
pub struct SpectrumModel {
    intervals: Vec<Interval>,
    points: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawSpectrum {
    #[serde(default)]
    intervals: Vec<(Option<f64>, Option<f64>)>,
    #[serde(default)]
    points: Vec<f64>,
}

impl TryFrom<RawSpectrum> for SpectrumModel {
    type Error = Error;

    fn try_from(raw: RawSpectrum) -> Result<Self> {
        let intervals = raw
            .intervals
            .into_iter()
            .map(|(lo, hi)| (lo.unwrap_or(f64::NEG_INFINITY), hi.unwrap_or(f64::INFINITY)))
            .collect::<Vec<_>>();
        SpectrumModel::new(&intervals, &raw.points)
    }
}

// JSON has no infinities, so unbounded ends are written as null.
impl From<SpectrumModel> for RawSpectrum {
    fn from(s: SpectrumModel) -> Self {
        let end = |v: f64| v.is_finite().then_some(v);
        RawSpectrum {
            intervals: s.intervals.iter().map(|iv| (end(iv.lo), end(iv.hi))).collect(),
            points: s.points,
        }
    }
}

impl SpectrumModel {
    pub fn new(intervals: &[(f64, f64)], points: &[f64]) -> Result<Self> {
        let mut ivs = Vec::new();
        let mut pts = Vec::new();
        for &(lo, hi) in intervals {
            if lo.is_nan() || hi.is_nan() || lo > hi {
                return Err(Error::invalid("intervals", format!("bad interval [{lo}, {hi}]")));
            }
            if lo == hi {
                if !lo.is_finite() {
                    return Err(Error::invalid("intervals", "interval collapsed at infinity"));
                }
                pts.push(lo);
            } else {
                ivs.push(Interval { lo, hi });
            }
        }
        for &p in points {
            if !p.is_finite() {
                return Err(Error::invalid("points", format!("non-finite point {p}")));
            }
            pts.push(p);
        }

        ivs.sort_by(|x, y| x.lo.total_cmp(&y.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(ivs.len());
        for iv in ivs {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
                _ => merged.push(iv),
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts.retain(|&p| !merged.iter().any(|iv| iv.contains(p)));
        Ok(Self {
            intervals: merged,
            points: pts,
        })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(&[(lo, hi)], &[])
    }

    pub fn real_line() -> Self {
        Self::new(&[(f64::NEG_INFINITY, f64::INFINITY)], &[]).unwrap()
    }

    pub fn points(points: &[f64]) -> Result<Self> {
        Self::new(&[], points)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn isolated_points(&self) -> &[f64] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty() && self.points.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.intervals.iter().all(Interval::is_bounded)
    }

    /// Smallest and largest element, if any.
    pub fn extent(&self) -> Option<(f64, f64)> {
        let lo = self
            .intervals
            .iter()
            .map(|iv| iv.lo)
            .chain(self.points.iter().copied())
            .min_by(f64::total_cmp)?;
        let hi = self
            .intervals
            .iter()
            .map(|iv| iv.hi)
            .chain(self.points.iter().copied())
            .max_by(f64::total_cmp)?;
        Some((lo, hi))
    }

    pub fn contains(&self, lambda: ComplexPoint) -> bool {
        lambda.im == 0.0
            && (self.intervals.iter().any(|iv| iv.contains(lambda.re))
                || self.points.contains(&lambda.re))
    }

    /// Distance from `lambda` to the set.
    pub fn distance(&self, lambda: ComplexPoint) -> f64 {
        let from_iv = self
            .intervals
            .iter()
            .map(|iv| (lambda - iv.clamp(lambda.re)).norm());
        let from_pt = self.points.iter().map(|&p| (lambda - p).norm());
        from_iv.chain(from_pt).fold(f64::INFINITY, f64::min)
    }
}

/// `sup_{t∈σ} √φ_λ(t)`, the bound on `‖T(S-λ)⁻¹‖` for `T` relatively bounded by `S`
/// with `σ(S) ⊂ σ`. Evaluated at interval endpoints and the clamped critical points.
pub fn sup_resolvent_factor_bound(
    bound: &RelBound,
    spectrum: &SpectrumModel,
    lambda: ComplexPoint,
) -> Result<f64> {
    if spectrum.contains(lambda) {
        return Err(Error::InSpectrum(format!("{lambda}")));
    }
    let crit = phi_critical_points(bound, lambda);
    let mut sup = 0.0f64;
    for iv in spectrum.intervals() {
        sup = sup.max(phi(bound, lambda, iv.lo)?).max(phi(bound, lambda, iv.hi)?);
        for &t in &crit {
            sup = sup.max(phi(bound, lambda, iv.clamp(t))?);
        }
    }
    for &t in spectrum.isolated_points() {
        sup = sup.max(phi(bound, lambda, t)?);
    }
    Ok(sup.sqrt())
}
