use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::potential::Potential;
use crate::quad::{self, Tolerance};
use crate::{Error, Result};

/// `f(x) = amp·H_k(u)·e^{-u²/2}` with `u = (x - center)/sigma` (physicists' Hermite
/// polynomial), for which `f'' = ((u² - 2k - 1)/σ²)·f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HermiteFunction {
    pub k: u32,
    pub center: f64,
    pub sigma: f64,
    pub amp: f64,
}

fn hermite(k: u32, u: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * u);
    if k == 0 {
        return h0;
    }
    for j in 1..k {
        let h2 = 2.0 * u * h1 - 2.0 * j as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

impl HermiteFunction {
    /// `e^{-πx²}`.
    pub fn gaussian_pi() -> Self {
        Self {
            k: 0,
            center: 0.0,
            sigma: (2.0 * PI).sqrt().recip(),
            amp: 1.0,
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        let u = (x - self.center) / self.sigma;
        self.amp * hermite(self.k, u) * (-0.5 * u * u).exp()
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        let u = (x - self.center) / self.sigma;
        (u * u - 2.0 * self.k as f64 - 1.0) / (self.sigma * self.sigma) * self.value(x)
    }

    /// Interval outside which `|f|` is below `e^{-70}` relative to its scale.
    fn support(&self) -> (f64, f64) {
        let r = self.sigma * ((2.0 * self.k as f64 + 1.0).sqrt() + 12.0);
        (self.center - r, self.center + r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProductBoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

fn potential_breaks(g: &Potential) -> Vec<f64> {
    match g {
        Potential::Step { width, .. } => vec![-width, *width],
        Potential::Tabulated { x, .. } => x.clone(),
        _ => Vec::new(),
    }
}

fn l2_norm(f: impl Fn(f64) -> f64, lo: f64, hi: f64, extra: &[f64]) -> Result<f64> {
    let mut breaks = vec![lo, hi];
    breaks.extend(extra.iter().copied().filter(|x| *x > lo && *x < hi));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let tol = Tolerance {
        rel: 1e-12,
        abs: 1e-300,
        max_panels: 50_000,
    };
    Ok(quad::integrate_breaks(|x| f(x).powi(2), &breaks, tol)?.sqrt())
}

/// Checks `‖fg‖₂ ≤ (2r)^{1/p}(‖f‖₂ + ‖f''‖₂/(2√3π²pr²))‖g‖_p`.
pub fn product_bound_check(f: &HermiteFunction, g: &Potential, p: f64, r: f64) -> Result<ProductBoundCheck> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::invalid("r", format!("must be finite and > 0, got {r}")));
    }
    if !(f.sigma > 0.0 && f.sigma.is_finite() && f.amp.is_finite() && f.center.is_finite()) {
        return Err(Error::invalid("f", "sigma must be > 0 and all parameters finite"));
    }
    if p.is_nan() || p < 2.0 {
        return Err(Error::invalid("p", format!("must be >= 2, got {p}")));
    }
    let (lo, hi) = f.support();
    let g_norm = g.lp_norm(p)?;
    let f_norm = l2_norm(|x| f.value(x), lo, hi, &[])?;
    let f2_norm = l2_norm(|x| f.second_derivative(x), lo, hi, &[])?;
    let lhs = l2_norm(|x| f.value(x) * g.value(x), lo, hi, &potential_breaks(g))?;
    let rhs = if p.is_infinite() {
        f_norm * g_norm
    } else {
        (2.0 * r).powf(1.0 / p) * (f_norm + f2_norm / (2.0 * 3f64.sqrt() * PI * PI * p * r * r)) * g_norm
    };
    Ok(ProductBoundCheck {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + 1e-6),
    })
}

/// Deterministic random `(f, g)` pairs for sweeps.
pub fn random_pairs(seed: u64, count: usize) -> Vec<(HermiteFunction, Potential)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let f = HermiteFunction {
                k: rng.random_range(0..5),
                center: rng.random_range(-2.0..2.0),
                sigma: rng.random_range(0.2..3.0),
                amp: rng.random_range(0.5..2.0),
            };
            let depth = rng.random_range(0.5..10.0);
            let width = rng.random_range(0.1..5.0);
            let g = match rng.random_range(0..3) {
                0 => Potential::Step { depth, width },
                1 => Potential::Gaussian { depth, width },
                _ => Potential::Lorentzian { depth, width },
            };
            (f, g)
        })
        .collect()
}
