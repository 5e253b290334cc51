use serde::{Deserialize, Serialize};
use serde_json::json;

use super::bound::{hull_height_sq, prior_hull_height_sq, RelBound};
use super::region::DiskFamilyRegion;
use crate::io::format_f64;
use crate::{ComplexPoint, Error, Result};

/// The rectangle `|Im λ| ≤ imHalfHeight`, `|Re λ| ≤ reHalfWidth`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SlBox {
    pub im_half_height: f64,
    pub re_half_width: f64,
}

impl SlBox {
    pub fn new(im_half_height: f64, re_half_width: f64) -> Result<Self> {
        for (name, v) in [("imHalfHeight", im_half_height), ("reHalfWidth", re_half_width)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        Ok(Self {
            im_half_height,
            re_half_width,
        })
    }

    /// `max(|Im λ| - H, |Re λ| - W)`: non-positive inside.
    pub fn margin(&self, lambda: ComplexPoint) -> f64 {
        (lambda.im.abs() - self.im_half_height).max(lambda.re.abs() - self.re_half_width)
    }

    pub fn contains(&self, lambda: ComplexPoint) -> bool {
        self.margin(lambda) <= 0.0
    }

    pub fn half_diagonal(&self) -> f64 {
        self.im_half_height.hypot(self.re_half_width)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Disks {
        kind: String,
        region: DiskFamilyRegion,
        gamma: Option<f64>,
        window: Option<(f64, f64)>,
    },
    SlBox(SlBox),
    Hull {
        bound: RelBound,
        window: Option<(f64, f64)>,
    },
    PriorHull {
        bound: RelBound,
        window: Option<(f64, f64)>,
    },
}

impl Region {
    pub fn disks(kind: &str, region: DiskFamilyRegion, gamma: Option<f64>) -> Self {
        Region::Disks {
            kind: kind.to_string(),
            region,
            gamma,
            window: None,
        }
    }

    pub fn kind(&self) -> &str {
        match self {
            Region::Disks { kind, .. } => kind,
            Region::SlBox(_) => "sl-box",
            Region::Hull { .. } => "hull",
            Region::PriorHull { .. } => "prior-hull",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Region::Disks {
                kind, region, gamma, ..
            } => region.to_json(kind, *gamma),
            Region::SlBox(b) => json!({
                "kind": "sl-box",
                "imHalfHeight": b.im_half_height,
                "reHalfWidth": b.re_half_width,
            }),
            Region::Hull { bound, .. } | Region::PriorHull { bound, .. } => json!({
                "kind": self.kind(),
                "a": bound.a(),
                "b": bound.b(),
                "radiusScale": 1.0,
                "centers": { "intervals": [[null, null]], "points": [] },
                "gamma": null,
            }),
        }
    }
}

fn hull_window(bound: &RelBound) -> (f64, f64) {
    let w = 10.0 + 4.0 * bound.a().sqrt() / (1.0 - bound.b()).sqrt();
    (-w, w)
}

fn disk_window(region: &DiskFamilyRegion) -> Option<(f64, f64)> {
    if let Some(ext) = region.x_extent() {
        return Some(ext);
    }
    let (lo, hi) = region.centers().extent()?;
    let finite_ends = [lo, hi].into_iter().filter(|t| t.is_finite());
    let span = 3.0 * finite_ends.map(|t| t.abs() + region.radius(t)).fold(0.0, f64::max)
        + 10.0
        + 4.0 * region.radius(0.0);
    let left = if lo.is_finite() { lo - region.radius(lo) } else { -span };
    let right = if hi.is_finite() { hi + region.radius(hi) } else { span };
    Some((left, right))
}

/// Largest `y ≥ 0` with `x + iy` in the region, by bisection on the membership test;
/// `None` when the vertical section at `x` is empty.
fn section_height(region: &DiskFamilyRegion, x: f64) -> Option<f64> {
    if !region.contains(ComplexPoint::new(x, 0.0)) {
        return None;
    }
    let mut lo = 0.0;
    let mut hi = region.height_sq(x).max(0.0).sqrt() * 2.0 + 1.0;
    while region.contains(ComplexPoint::new(x, hi)) {
        hi *= 2.0;
    }
    let tol = 1e-10 * (1.0 + x.hypot(hi));
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if region.contains(ComplexPoint::new(x, mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

fn sample_abscissae(lo: f64, hi: f64, resolution: usize) -> impl Iterator<Item = f64> {
    let n = resolution - 1;
    (0..=n).map(move |k| if k == n { hi } else { lo + (hi - lo) * k as f64 / n as f64 })
}

/// Upper-half boundary as a polyline from left to right. For bounded regions the
/// first and last points lie on the real axis; the consumer mirrors for `Im < 0`.
pub fn boundary_polyline(region: &Region, resolution: usize) -> Result<Vec<ComplexPoint>> {
    if resolution < 16 {
        return Err(Error::invalid("resolution", format!("must be >= 16, got {resolution}")));
    }
    let pts = match region {
        Region::SlBox(b) => {
            let (w, h) = (b.re_half_width, b.im_half_height);
            if w == 0.0 && h == 0.0 {
                return Ok(vec![ComplexPoint::new(0.0, 0.0)]);
            }
            let mut pts = vec![ComplexPoint::new(-w, 0.0)];
            pts.extend(sample_abscissae(-w, w, resolution).map(|x| ComplexPoint::new(x, h)));
            pts.push(ComplexPoint::new(w, 0.0));
            pts
        }
        Region::Hull { bound, window } | Region::PriorHull { bound, window } => {
            let (lo, hi) = window.unwrap_or_else(|| hull_window(bound));
            let height_sq = match region {
                Region::Hull { .. } => hull_height_sq,
                _ => prior_hull_height_sq,
            };
            sample_abscissae(lo, hi, resolution)
                .map(|x| ComplexPoint::new(x, height_sq(bound, x).sqrt()))
                .collect()
        }
        Region::Disks { region, window, .. } => {
            let Some((lo, hi)) = window.or_else(|| disk_window(region)) else {
                return Ok(Vec::new());
            };
            if hi <= lo {
                return Ok(vec![ComplexPoint::new(lo, 0.0)]);
            }
            sample_abscissae(lo, hi, resolution)
                .map(|x| ComplexPoint::new(x, section_height(region, x).unwrap_or(0.0)))
                .collect()
        }
    };
    Ok(pts)
}

/// CSV with header `re,im`, one point per line.
pub fn polyline_csv(points: &[ComplexPoint]) -> String {
    let mut out = String::from("re,im\n");
    for p in points {
        out.push_str(&format_f64(p.re));
        out.push(',');
        out.push_str(&format_f64(p.im));
        out.push('\n');
    }
    out
}
