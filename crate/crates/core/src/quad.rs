//! Gauss-Legendre quadrature: fixed rules, panel sums and a globally adaptive driver.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

use crate::{Error, Result};

/// Nodes and weights of an `n`-point rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct Rule {
    pairs: Vec<(f64, f64)>,
}

impl Rule {
    pub fn new(n: usize) -> Self {
        let n = NonZeroUsize::new(n.max(1)).unwrap();
        let pairs = GaussLegendre::new(n).as_node_weight_pairs().to_vec();
        Self { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        self.pairs.iter().map(move |&(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn rule10() -> &'static Rule {
    static R: OnceLock<Rule> = OnceLock::new();
    R.get_or_init(|| Rule::new(10))
}

fn rule21() -> &'static Rule {
    static R: OnceLock<Rule> = OnceLock::new();
    R.get_or_init(|| Rule::new(21))
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-10,
            abs: 1e-300,
            max_panels: 20_000,
        }
    }
}

impl Tolerance {
    pub fn rel(rel: f64) -> Self {
        Self {
            rel,
            ..Self::default()
        }
    }
}

/// Globally adaptive integration over `[a, b]` (finite). The panel with the largest
/// error estimate (10- vs 21-point rule) is bisected until the summed estimate
/// meets the tolerance.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    integrate_breaks(f, &[a, b], tol)
}

/// As [`integrate`], with the initial panels given by the sorted `breaks`.
pub fn integrate_breaks(f: impl Fn(f64) -> f64, breaks: &[f64], tol: Tolerance) -> Result<f64> {
    if breaks.len() < 2 {
        return Ok(0.0);
    }
    if breaks.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("quadrature limits must be finite".into()));
    }
    let eval = |a: f64, b: f64| -> (f64, f64) {
        let coarse = rule10().integrate(a, b, &f);
        let fine = rule21().integrate(a, b, &f);
        (fine, (fine - coarse).abs())
    };

    let mut panels: Vec<(f64, f64, f64, f64)> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let (v, e) = eval(w[0], w[1]);
            (w[0], w[1], v, e)
        })
        .collect();

    loop {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::Numerical("non-finite integrand value".into()));
        }
        if err <= tol.abs.max(tol.rel * total.abs()) {
            return Ok(total);
        }
        if panels.len() >= tol.max_panels {
            return Err(Error::Numerical(format!(
                "quadrature did not converge: estimate {total}, error {err} after {} panels",
                panels.len()
            )));
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (a, b, _, _) = panels.swap_remove(worst);
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            return Err(Error::Numerical("quadrature panel underflow".into()));
        }
        let (v1, e1) = eval(a, m);
        let (v2, e2) = eval(m, b);
        panels.push((a, m, v1, e1));
        panels.push((m, b, v2, e2));
    }
}

/// Integral over `[a, ∞)` through the substitution `x = a + u/(1-u)`.
pub fn integrate_halfline(f: impl Fn(f64) -> f64, a: f64, tol: Tolerance) -> Result<f64> {
    let g = |u: f64| {
        let s = 1.0 - u;
        let v = f(a + u / s);
        if v == 0.0 {
            0.0
        } else {
            v / (s * s)
        }
    };
    integrate_breaks(g, &[0.0, 0.5, 0.75, 0.875, 0.9375, 1.0], tol)
}

/// Integral over the real line, split at `center`.
pub fn integrate_line(f: impl Fn(f64) -> f64, center: f64, tol: Tolerance) -> Result<f64> {
    let right = integrate_halfline(&f, center, tol)?;
    let left = integrate_halfline(|x| f(2.0 * center - x), center, tol)?;
    Ok(left + right)
}

/// Panel edges `[a, b]` split geometrically with consecutive ratio at most `ratio`
/// (requires `0 < a < b`).
pub fn log_panels(a: f64, b: f64, ratio: f64) -> Vec<f64> {
    let n = ((b / a).ln() / ratio.ln()).ceil().max(1.0) as usize;
    let step = (b / a).powf(1.0 / n as f64);
    let mut edges: Vec<f64> = (0..n).map(|k| a * step.powi(k as i32)).collect();
    edges.push(b);
    edges
}
