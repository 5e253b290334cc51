use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::constants::TAU_SL;
use crate::quad::{log_panels, Rule};
use crate::{Error, Result};

/// Test pairs `(f₁, f₂)` on the half-line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Tau0Probe {
    /// `f₁ = 1` on `[lo, hi]`, `f₂ = 0`.
    Indicator { lo: f64, hi: f64 },
    /// `f₁ = x^{-1/2}` on `[1, X]`, `f₂ = -f₁`.
    Extremizer {
        #[serde(rename = "X")]
        x_max: f64,
    },
    /// Piecewise linear samples, zero outside `[x₀, x_last]`.
    Tabulated { x: Vec<f64>, f1: Vec<f64>, f2: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Tau0Estimate {
    pub quotient: f64,
    pub norm_sq: f64,
    pub degree: usize,
    /// Change in the quotient between the last two degrees.
    pub error_estimate: f64,
    pub upper_bound: f64,
    pub within_upper_bound: bool,
}

fn lerp(x: &[f64], y: &[f64], t: f64) -> f64 {
    if t < x[0] || t > x[x.len() - 1] {
        return 0.0;
    }
    let k = x.partition_point(|v| *v <= t).clamp(1, x.len() - 1);
    let (x0, x1) = (x[k - 1], x[k]);
    let w = if x1 > x0 { (t - x0) / (x1 - x0) } else { 0.0 };
    y[k - 1] + w * (y[k] - y[k - 1])
}

impl Tau0Probe {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Indicator { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && *lo > 0.0 && hi > lo) {
                    return Err(Error::invalid("indicator", "need 0 < lo < hi < ∞"));
                }
            }
            Self::Extremizer { x_max } => {
                if !(x_max.is_finite() && *x_max > 1.0) {
                    return Err(Error::invalid("X", format!("must be finite and > 1, got {x_max}")));
                }
            }
            Self::Tabulated { x, f1, f2 } => {
                if x.len() < 2 || f1.len() != x.len() || f2.len() != x.len() {
                    return Err(Error::invalid("tabulated", "x, f1, f2 need equal length >= 2"));
                }
                if x.iter().chain(f1).chain(f2).any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite("tabulated probe".into()));
                }
                if x[0] <= 0.0 || x.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::invalid("tabulated", "x must be positive and strictly increasing"));
                }
            }
        }
        Ok(())
    }

    fn support(&self) -> (f64, f64) {
        match self {
            Self::Indicator { lo, hi } => (*lo, *hi),
            Self::Extremizer { x_max } => (1.0, *x_max),
            Self::Tabulated { x, .. } => (x[0], x[x.len() - 1]),
        }
    }

    fn edges(&self) -> Vec<f64> {
        let (lo, hi) = self.support();
        let mut edges = log_panels(lo, hi, 2.0);
        if let Self::Tabulated { x, .. } = self {
            edges.extend_from_slice(x);
            edges.sort_by(f64::total_cmp);
            edges.dedup();
        }
        edges
    }

    fn eval(&self, t: f64) -> (f64, f64) {
        match self {
            Self::Indicator { .. } => (1.0, 0.0),
            Self::Extremizer { .. } => {
                let v = t.sqrt().recip();
                (v, -v)
            }
            Self::Tabulated { x, f1, f2 } => (lerp(x, f1, t), lerp(x, f2, t)),
        }
    }
}

/// Nodes `(x, w, f₁(x), f₂(x))` of a composite rule of the given degree.
fn nodes(probe: &Tau0Probe, degree: usize) -> Vec<(f64, f64, f64, f64)> {
    let rule = Rule::new(degree);
    probe
        .edges()
        .windows(2)
        .flat_map(|w| rule.mapped(w[0], w[1]).collect::<Vec<_>>())
        .map(|(x, w)| {
            let (a, b) = probe.eval(x);
            (x, w, a, b)
        })
        .collect()
}

fn quotient_at(probe: &Tau0Probe, degree: usize) -> (f64, f64) {
    let pts = nodes(probe, degree);
    let norm_sq: f64 = pts.iter().map(|&(_, w, a, b)| w * (a * a + b * b)).sum();
    let form: f64 = pts
        .iter()
        .map(|&(x, wx, a1, a2)| {
            wx * pts
                .iter()
                .map(|&(y, wy, b1, b2)| {
                    let s = x + y;
                    wy * ((a1 * b1 + a2 * b2) / s - 2.0 * s / (x * x + y * y) * a1 * b2)
                })
                .sum::<f64>()
        })
        .sum();
    ((norm_sq + 2.0 / PI * form) / norm_sq, norm_sq)
}

/// The Rayleigh quotient `[J₀f, f]/‖f‖²` of the sign-weighted free operator, written as
/// the Hilbert-type double integral over the half-line. Product Gauss-Legendre on
/// geometric panels, with the degree doubled until two successive values agree.
pub fn tau0_hilbert_form(probe: &Tau0Probe) -> Result<Tau0Estimate> {
    probe.validate()?;
    let tol = 1e-9;
    let mut degree = 8;
    let (mut prev, _) = quotient_at(probe, degree);
    loop {
        degree *= 2;
        let (q, norm_sq) = quotient_at(probe, degree);
        if !(q.is_finite() && norm_sq > 0.0) {
            return Err(Error::Numerical("Hilbert form quadrature produced a non-finite value".into()));
        }
        let err = (q - prev).abs();
        if err <= tol * q.abs() {
            return Ok(Tau0Estimate {
                quotient: q,
                norm_sq,
                degree,
                error_estimate: err,
                upper_bound: TAU_SL,
                within_upper_bound: q <= TAU_SL + 1e-4,
            });
        }
        if degree >= 128 {
            return Err(Error::Numerical(format!(
                "Hilbert form quadrature did not converge: {prev} vs {q} at degree {degree}"
            )));
        }
        prev = q;
    }
}
