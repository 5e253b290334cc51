use serde::{Deserialize, Serialize};

use crate::quad::{self, Tolerance};
use crate::{Error, Result};

/// Potential families. The closed-form kinds are non-positive wells of the given depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Potential {
    /// `-depth` on `[-width, width]`, zero elsewhere.
    Step { depth: f64, width: f64 },
    /// `-depth·exp(-x²/width²)`.
    Gaussian { depth: f64, width: f64 },
    /// `-depth/(1 + x²/width²)`.
    Lorentzian { depth: f64, width: f64 },
    /// Piecewise linear through `(x, q)` samples, zero outside the table.
    Tabulated { x: Vec<f64>, q: Vec<f64> },
}

impl Potential {
    pub fn zero() -> Self {
        Potential::Step {
            depth: 0.0,
            width: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Potential::Step { depth, width }
            | Potential::Gaussian { depth, width }
            | Potential::Lorentzian { depth, width } => {
                if !(depth.is_finite() && *depth >= 0.0) {
                    return Err(Error::invalid("depth", format!("must be finite and >= 0, got {depth}")));
                }
                if !(width.is_finite() && *width > 0.0) {
                    return Err(Error::invalid("width", format!("must be finite and > 0, got {width}")));
                }
            }
            Potential::Tabulated { x, q } => {
                if x.len() != q.len() || x.len() < 2 {
                    return Err(Error::invalid(
                        "table",
                        format!("need matching x/q columns with >= 2 rows, got {} and {}", x.len(), q.len()),
                    ));
                }
                if x.iter().chain(q).any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite("tabulated potential".into()));
                }
                if x.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::invalid("table", "x must be strictly increasing"));
                }
            }
        }
        Ok(())
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            Potential::Step { depth, width } => {
                if x.abs() <= *width {
                    -depth
                } else {
                    0.0
                }
            }
            Potential::Gaussian { depth, width } => -depth * (-(x / width).powi(2)).exp(),
            Potential::Lorentzian { depth, width } => -depth / (1.0 + (x / width).powi(2)),
            Potential::Tabulated { x: xs, q } => {
                let n = xs.len();
                if x < xs[0] || x > xs[n - 1] {
                    return 0.0;
                }
                let k = xs.partition_point(|&v| v <= x).clamp(1, n - 1);
                let (x0, x1) = (xs[k - 1], xs[k]);
                let w = (x - x0) / (x1 - x0);
                q[k - 1] * (1.0 - w) + q[k] * w
            }
        }
    }

    pub fn is_even(&self) -> bool {
        match self {
            Potential::Tabulated { x, q } => {
                let n = x.len();
                (0..n).all(|i| x[i] == -x[n - 1 - i] && q[i] == q[n - 1 - i])
            }
            _ => true,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        match self {
            Potential::Step { depth, .. }
            | Potential::Gaussian { depth, .. }
            | Potential::Lorentzian { depth, .. } => *depth,
            Potential::Tabulated { q, .. } => q.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }

    /// `‖q‖_p` for `p ∈ [1, ∞]`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        self.validate()?;
        if p.is_nan() || p < 1.0 {
            return Err(Error::invalid("p", format!("must be >= 1, got {p}")));
        }
        if p.is_infinite() {
            return Ok(self.sup_norm());
        }
        let norm = match self {
            Potential::Step { depth, width } => depth * (2.0 * width).powf(1.0 / p),
            Potential::Gaussian { depth, width } => {
                depth * (width * (std::f64::consts::PI / p).sqrt()).powf(1.0 / p)
            }
            Potential::Lorentzian { depth, width } => {
                if *depth == 0.0 {
                    return Ok(0.0);
                }
                // |q|^p = depth^p (1+u²)^{-p} with x = width·u; integrable for p > 1/2.
                let half = quad::integrate_halfline(|u| (1.0 + u * u).powf(-p), 0.0, Tolerance::rel(1e-12))?;
                depth * (2.0 * width * half).powf(1.0 / p)
            }
            Potential::Tabulated { x, q } => {
                let mut total = 0.0;
                for k in 1..x.len() {
                    let (x0, x1, q0, q1) = (x[k - 1], x[k], q[k - 1], q[k]);
                    let f = |t: f64| (q0 + (q1 - q0) * (t - x0) / (x1 - x0)).abs().powf(p);
                    let mut breaks = vec![x0, x1];
                    if q0 * q1 < 0.0 {
                        breaks.insert(1, x0 + (x1 - x0) * q0 / (q0 - q1));
                    }
                    total += quad::integrate_breaks(f, &breaks, Tolerance::rel(1e-12))?;
                }
                total.powf(1.0 / p)
            }
        };
        if !norm.is_finite() {
            return Err(Error::Numerical(format!("‖q‖_{p} diverges")));
        }
        Ok(norm)
    }

    /// Table from CSV text with columns `x,q` (a header line is optional).
    pub fn tabulated_from_csv(text: &str) -> Result<Self> {
        let mut x = Vec::new();
        let mut q = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let (a, b) = (cols.next(), cols.next());
            let parsed = match (a.map(str::parse::<f64>), b.map(str::parse::<f64>)) {
                (Some(Ok(a)), Some(Ok(b))) => (a, b),
                _ if lineno == 0 && x.is_empty() => continue,
                _ => {
                    return Err(Error::Config(format!(
                        "potential table line {}: expected `x,q`, got `{line}`",
                        lineno + 1
                    )))
                }
            };
            x.push(parsed.0);
            q.push(parsed.1);
        }
        let pot = Potential::Tabulated { x, q };
        pot.validate()?;
        Ok(pot)
    }
}
