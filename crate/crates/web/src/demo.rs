use krein_enclosure::geometry::{
    boundary_polyline, hull_height_sq, hull_membership, DiskFamilyRegion, Region, RelBound, SpectrumModel,
};
use krein_enclosure::sl::constants::{bst_constants, log_space, sl_constants};
use krein_enclosure::Complex64;

type Core<T> = krein_enclosure::Result<T>;

/// Width of a row of [`constants_curve`].
pub const CONSTANTS_ROW: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub inside: bool,
    /// Positive outside. For the hull this is the vertical distance to the boundary.
    pub margin: f64,
}

fn text<T>(r: Core<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn disks(bound: RelBound, kind: &str, gamma: f64) -> Core<DiskFamilyRegion> {
    let centers = match kind {
        "bone" => SpectrumModel::interval(-gamma, gamma)?,
        "halfline" => SpectrumModel::interval(gamma, f64::INFINITY)?,
        _ => SpectrumModel::real_line(),
    };
    DiskFamilyRegion::new(bound, centers, 1.0)
}

fn region(kind: &str, a: f64, b: f64, gamma: f64) -> Result<Region, String> {
    let bound = text(RelBound::new(a, b))?;
    match kind {
        "hull" => Ok(Region::Hull { bound, window: None }),
        "bone" | "halfline" | "line" => {
            let g = (kind != "line").then_some(gamma);
            Ok(Region::disks(kind, text(disks(bound, kind, gamma))?, g))
        }
        other => Err(format!("kind: expected hull, bone, halfline or line, got `{other}`")),
    }
}

fn flatten(points: &[Complex64]) -> Vec<f64> {
    points.iter().flat_map(|z| [z.re, z.im]).collect()
}

pub fn region_boundary(kind: &str, a: f64, b: f64, gamma: f64, resolution: usize) -> Result<Vec<f64>, String> {
    let r = region(kind, a, b, gamma)?;
    text(boundary_polyline(&r, resolution)).map(|p| flatten(&p))
}

pub fn prior_boundary(a: f64, b: f64, resolution: usize) -> Result<Vec<f64>, String> {
    let bound = text(RelBound::new(a, b))?;
    text(boundary_polyline(&Region::PriorHull { bound, window: None }, resolution)).map(|p| flatten(&p))
}

pub fn probe(kind: &str, a: f64, b: f64, gamma: f64, re: f64, im: f64) -> Result<Probe, String> {
    if !(re.is_finite() && im.is_finite()) {
        return Err(format!("point {re} + {im}i is not finite"));
    }
    let z = Complex64::new(re, im);
    let bound = text(RelBound::new(a, b))?;
    if kind == "hull" {
        let inside = hull_membership(&bound, z);
        let margin = im.abs() - hull_height_sq(&bound, re).sqrt();
        return Ok(Probe { inside, margin });
    }
    region(kind, a, b, gamma)?;
    let m = text(disks(bound, kind, gamma))?.membership(z);
    Ok(Probe {
        inside: m.inside,
        margin: m.margin,
    })
}

pub fn constants_curve(max_p: f64, points: usize) -> Result<Vec<f64>, String> {
    if !(max_p.is_finite() && max_p > 2.0) {
        return Err(format!("max_p: must be finite and > 2, got {max_p}"));
    }
    if !(2..=2000).contains(&points) {
        return Err(format!("points: must lie in [2, 2000], got {points}"));
    }
    let mut out = Vec::with_capacity(points * CONSTANTS_ROW);
    for p in log_space(2.0, max_p, points) {
        let c = text(sl_constants(p))?;
        let k = text(bst_constants(p))?;
        out.extend([p, c.im_coef, c.half_diagonal(), k.im_coef, k.abs_coef]);
    }
    Ok(out)
}
