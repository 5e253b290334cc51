use rand::Rng;
use serde::{Deserialize, Serialize};

use super::block::check_hermitian;
use crate::geometry::{smallerb_threshold, RelBound};
use crate::linalg::{self, CMat};
use crate::{Complex64, ComplexPoint, Error, Result};

/// `λ ↦ ‖T(S-λ)⁻¹‖` for Hermitian `S`, through the eigendecomposition `S = U D U*`:
/// `‖T(S-λ)⁻¹‖ = ‖TU (D-λ)⁻¹‖`.
#[derive(Debug, Clone)]
pub struct ResolventFactor {
    tu: CMat,
    eig: Vec<f64>,
    s_norm: f64,
}

impl ResolventFactor {
    pub fn new(t: &CMat, s: &CMat) -> Result<Self> {
        check_hermitian("S", s)?;
        if t.ncols() != s.nrows() {
            return Err(Error::Shape(format!(
                "T has {} columns but S is {}x{}",
                t.ncols(),
                s.nrows(),
                s.nrows()
            )));
        }
        let (eig, u) = linalg::hermitian_eigen(s)?;
        let s_norm = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(Self { tu: t * &u, eig, s_norm })
    }

    pub fn spectrum(&self) -> &[f64] {
        &self.eig
    }

    pub fn distance(&self, lambda: ComplexPoint) -> f64 {
        self.eig
            .iter()
            .map(|&t| (lambda - t).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn in_spectrum(&self, lambda: ComplexPoint) -> bool {
        self.distance(lambda) <= 1e-12 * self.s_norm
    }

    pub fn norm(&self, lambda: ComplexPoint) -> Result<f64> {
        if self.in_spectrum(lambda) {
            return Err(Error::InSpectrum(format!("{lambda}")));
        }
        let eig = &self.eig;
        let scaled = CMat::from_fn(self.tu.nrows(), self.tu.ncols(), |i, j| {
            self.tu[(i, j)] / (Complex64::new(eig[j], 0.0) - lambda)
        });
        linalg::spectral_norm(&scaled)
    }

    /// Membership in `K_S(T) = {λ ∈ ϱ(S) : ‖T(S-λ)⁻¹‖ ≥ 1}`, with `slack` subtracted from
    /// the threshold. Points of `σ(S)` count as members.
    pub fn contains(&self, lambda: ComplexPoint, slack: f64) -> Result<bool> {
        if self.in_spectrum(lambda) {
            return Ok(true);
        }
        Ok(self.norm(lambda)? >= 1.0 - 1e-10 - slack)
    }
}

/// Largest singular value of `T(S-λ)⁻¹`.
pub fn resolvent_factor_norm(t: &CMat, s: &CMat, lambda: ComplexPoint) -> Result<f64> {
    ResolventFactor::new(t, s)?.norm(lambda)
}

pub fn k_set_membership(t: &CMat, s: &CMat, lambda: ComplexPoint) -> Result<bool> {
    ResolventFactor::new(t, s)?.contains(lambda, 0.0)
}

/// Least `a` with `‖Tf‖² ≤ a‖f‖² + b‖Sf‖²`, i.e. `max(0, λ_max(T*T - b S*S))`.
pub fn min_relative_bound(t: &CMat, s: &CMat, b: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&b) {
        return Err(Error::invalid("b", format!("must lie in [0, 1), got {b}")));
    }
    if t.ncols() != s.ncols() {
        return Err(Error::Shape(format!(
            "T and S need equal column counts, got {} and {}",
            t.ncols(),
            s.ncols()
        )));
    }
    let g = t.adjoint() * t - linalg::scale(&(s.adjoint() * s), Complex64::new(b, 0.0));
    let top = linalg::hermitian_eigenvalues(&g)?.last().copied().unwrap_or(0.0);
    Ok(top.max(0.0))
}

/// `‖(S-λ)⁻¹‖ = 1/σ_min(S-λ)`.
pub fn resolvent_norm(s: &CMat, lambda: ComplexPoint) -> Result<f64> {
    let smin = linalg::min_singular_value(&linalg::shift(s, lambda))?;
    if smin <= f64::EPSILON * linalg::frobenius(s).max(1.0) {
        return Err(Error::InSpectrum(format!("{lambda}")));
    }
    Ok(1.0 / smin)
}

/// Non-real sample point: modulus log-uniform in `[10⁻², 10²]·scale`, argument uniform
/// away from the real axis.
pub fn sample_nonreal<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> ComplexPoint {
    let r = scale * 10f64.powf(rng.random_range(-2.0..2.0));
    let theta = loop {
        let th: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        if th.sin().abs() > 1e-3 {
            break th;
        }
    };
    Complex64::from_polar(r, theta)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OrderCheck {
    pub samples: usize,
    /// Samples beyond `γ + √(γ² + a/b)`, where the order-one bound applies.
    pub beyond_threshold: usize,
    pub failures: Vec<String>,
    /// Largest `‖(S-λ)⁻¹‖ · (1-b)|Im λ| / 3` beyond the threshold.
    pub max_ratio: f64,
    /// `max ‖(S-λ)⁻¹‖ |Im λ|² / (1+|λ|)²` over all samples.
    pub growth_constant: f64,
}

/// Resolvent growth at `∞` for a block operator with `S₊ ≥ -γ`, `S₋ ≤ γ` and common
/// relative bound `(a, b)`: `‖(S-λ)⁻¹‖ ≤ 3/((1-b)|Im λ|)` for `|λ| > γ + √(γ² + a/b)`.
pub fn resolvent_order_check<R: Rng + ?Sized>(
    s: &CMat,
    bound: &RelBound,
    gamma: f64,
    samples: usize,
    rng: &mut R,
) -> Result<OrderCheck> {
    let threshold = if bound.b() > 0.0 {
        smallerb_threshold(bound, gamma)?
    } else {
        f64::INFINITY
    };
    let scale = linalg::spectral_norm(s)?.max(threshold.min(1e6)).max(1.0);
    let mut out = OrderCheck {
        samples,
        ..OrderCheck::default()
    };
    for _ in 0..samples {
        let lambda = sample_nonreal(rng, scale);
        let rn = match resolvent_norm(s, lambda) {
            Ok(v) => v,
            Err(Error::InSpectrum(_)) => continue,
            Err(e) => return Err(e),
        };
        let im = lambda.im.abs();
        out.growth_constant = out
            .growth_constant
            .max(rn * im * im / (1.0 + lambda.norm()).powi(2));
        if lambda.norm() > threshold {
            out.beyond_threshold += 1;
            let ratio = rn * (1.0 - bound.b()) * im / 3.0;
            out.max_ratio = out.max_ratio.max(ratio);
            if ratio > 1.0 + 1e-8 {
                out.failures.push(format!(
                    "order-one resolvent bound violated at {lambda}: ratio {ratio:e}"
                ));
            }
        }
    }
    Ok(out)
}
