use serde::{Deserialize, Serialize};

use crate::{ComplexPoint, Error, Result};

/// Largest admissible relative bound `b`; values closer to one are rejected.
pub const MAX_B: f64 = 1.0 - 1e-12;

/// Constants `(a, b)` of a relative bound `‖Tf‖² ≤ a‖f‖² + b‖Sf‖²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelBound {
    a: f64,
    b: f64,
}

impl RelBound {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || a < 0.0 {
            return Err(Error::invalid("a", format!("must be finite and >= 0, got {a}")));
        }
        if !b.is_finite() || !(0.0..MAX_B).contains(&b) {
            return Err(Error::invalid("b", format!("must lie in [0, 1), got {b}")));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Squared disk radius `a + b t²` attached to the center `t`.
    pub fn radius_sq(&self, t: f64) -> f64 {
        self.a + self.b * t * t
    }
}

/// The profile `φ_λ(t) = (a + b t²)/|t - λ|²`. At `t = ±∞` the limit `b` is returned.
pub fn phi(bound: &RelBound, lambda: ComplexPoint, t: f64) -> Result<f64> {
    if t.is_infinite() {
        return Ok(bound.b);
    }
    let dx = t - lambda.re;
    let denom = dx * dx + lambda.im * lambda.im;
    if denom == 0.0 {
        return Err(Error::Domain(format!("phi is singular at t = {t} = λ")));
    }
    Ok(bound.radius_sq(t) / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhiBranch {
    /// `b = 0`: a single global maximum at `Re λ`.
    BZero,
    /// `b > 0`, `Re λ ≠ 0`: global maximum and minimum, `φ(m_λ) = b`.
    ReNonzero,
    /// `b > 0`, `Re λ = 0`, `(Im λ)² > a/b`: global minimum at zero.
    ReZeroMin,
    /// `b > 0`, `Re λ = 0`, `(Im λ)² < a/b`: global maximum at zero.
    ReZeroMax,
    /// `b > 0`, `Re λ = 0`, `(Im λ)² = a/b`: `φ ≡ b`.
    Constant,
}

/// Global shape of `φ_λ` on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PhiProfile {
    pub m_lambda: Option<f64>,
    pub t_max: Option<f64>,
    pub t_min: Option<f64>,
    pub sup_over_reals: f64,
    pub branch: PhiBranch,
}

pub fn phi_extrema(bound: &RelBound, lambda: ComplexPoint) -> Result<PhiProfile> {
    let (a, b) = (bound.a, bound.b);
    let (x, y) = (lambda.re, lambda.im);
    if y == 0.0 {
        return Err(Error::Domain("phi_extrema requires Im λ ≠ 0".into()));
    }
    let y2 = y * y;

    if b == 0.0 {
        return Ok(PhiProfile {
            m_lambda: None,
            t_max: Some(x),
            t_min: None,
            sup_over_reals: a / y2,
            branch: PhiBranch::BZero,
        });
    }

    if x != 0.0 {
        let m = (b * lambda.norm_sqr() - a) / (2.0 * b * x);
        let root = (a / b + m * m).sqrt();
        let sign = x.signum();
        let t_max = m + sign * root;
        let t_min = m - sign * root;
        return Ok(PhiProfile {
            m_lambda: Some(m),
            t_max: Some(t_max),
            t_min: Some(t_min),
            sup_over_reals: phi(bound, lambda, t_max)?,
            branch: PhiBranch::ReNonzero,
        });
    }

    let threshold = a / b;
    let tie = 4.0 * f64::EPSILON * y2.max(threshold);
    let profile = if (y2 - threshold).abs() <= tie {
        PhiProfile {
            m_lambda: None,
            t_max: None,
            t_min: None,
            sup_over_reals: b,
            branch: PhiBranch::Constant,
        }
    } else if y2 > threshold {
        PhiProfile {
            m_lambda: None,
            t_max: None,
            t_min: Some(0.0),
            sup_over_reals: b,
            branch: PhiBranch::ReZeroMin,
        }
    } else {
        PhiProfile {
            m_lambda: None,
            t_max: Some(0.0),
            t_min: None,
            sup_over_reals: a / y2,
            branch: PhiBranch::ReZeroMax,
        }
    };
    Ok(profile)
}

/// Real critical points of `φ_λ`: roots of `b·Re λ·t² - (b|λ|² - a)·t - a·Re λ = 0`,
/// plus `Re λ` and `0`, which cover the degenerate cases.
pub(crate) fn phi_critical_points(bound: &RelBound, lambda: ComplexPoint) -> Vec<f64> {
    let (a, b) = (bound.a, bound.b);
    let x = lambda.re;
    let mut pts = vec![x, 0.0];
    if b > 0.0 && x != 0.0 {
        let m = (b * lambda.norm_sqr() - a) / (2.0 * b * x);
        let root = (a / b + m * m).sqrt();
        pts.push(m + root);
        pts.push(m - root);
    }
    pts.retain(|t| t.is_finite());
    pts
}

/// Membership in `{(Im λ)² ≤ a + b/(1-b)·(Re λ)²}`, the union of all disks
/// `B_{√(a+bt²)}(t)` over `t ∈ ℝ`.
pub fn hull_membership(bound: &RelBound, lambda: ComplexPoint) -> bool {
    lambda.im * lambda.im <= hull_height_sq(bound, lambda.re)
}

/// Squared height of the hull boundary above the abscissa `x`.
pub fn hull_height_sq(bound: &RelBound, x: f64) -> f64 {
    bound.a + bound.b / (1.0 - bound.b) * x * x
}

/// The earlier, coarser hull `(Im λ)² ≤ (a + b(Re λ)²)/(1-b)`.
pub fn prior_hull_membership(bound: &RelBound, lambda: ComplexPoint) -> bool {
    lambda.im * lambda.im <= prior_hull_height_sq(bound, lambda.re)
}

pub fn prior_hull_height_sq(bound: &RelBound, x: f64) -> f64 {
    (bound.a + bound.b * x * x) / (1.0 - bound.b)
}

/// Abscissa `t₁ = (1-b)t₀` where the disk centred at `t₀` touches the hull boundary.
pub fn hull_tangency(bound: &RelBound, t0: f64) -> f64 {
    (1.0 - bound.b) * t0
}

/// Modulus beyond which `‖T(S-λ)⁻¹‖² ≤ b` for `S ≤ γ` and `Re λ ≥ 0`.
pub fn smallerb_threshold(bound: &RelBound, gamma: f64) -> Result<f64> {
    if bound.b == 0.0 {
        return Err(Error::invalid(
            "b",
            "threshold undefined for b = 0 (the norm bound is a/dist² instead)",
        ));
    }
    Ok(gamma + (gamma * gamma + bound.a / bound.b).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    fn brute_force_argmax(bound: &RelBound, lambda: ComplexPoint, lo: f64, hi: f64) -> (f64, f64) {
        let n = 400_000;
        let mut best = (lo, f64::MIN);
        for i in 0..=n {
            let t = lo + (hi - lo) * i as f64 / n as f64;
            let v = phi(bound, lambda, t).unwrap();
            if v > best.1 {
                best = (t, v);
            }
        }
        best
    }

    #[test]
    fn rejects_out_of_range_constants() {
        assert!(RelBound::new(-1.0, 0.1).is_err());
        assert!(RelBound::new(1.0, 1.0).is_err());
        assert!(RelBound::new(1.0, 1.0 - 1e-13).is_err());
        assert!(RelBound::new(1.0, -0.1).is_err());
        assert!(RelBound::new(f64::NAN, 0.1).is_err());
        assert!(RelBound::new(0.0, 0.0).is_ok());
    }

    #[test]
    fn phi_values() {
        let bd = RelBound::new(3.0, 0.9).unwrap();
        assert_eq!(phi(&bd, c(0.0, 1.0), 0.0).unwrap(), 3.0);

        let bd = RelBound::new(1.0, 0.5).unwrap();
        assert!((phi(&bd, c(2.0, 1.0), 0.75).unwrap() - 0.5).abs() < 1e-15);

        let bd = RelBound::new(0.0, 0.25).unwrap();
        assert_eq!(phi(&bd, c(0.0, 4.0), f64::INFINITY).unwrap(), 0.25);
        assert_eq!(phi(&bd, c(0.0, 4.0), f64::NEG_INFINITY).unwrap(), 0.25);
        assert!((phi(&bd, c(0.0, 4.0), 1e9).unwrap() - 0.25).abs() < 1e-6);

        assert!(matches!(phi(&bd, c(2.0, 0.0), 2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn extrema_re_nonzero_matches_grid() {
        let bd = RelBound::new(1.0, 0.5).unwrap();
        let lambda = c(2.0, 1.0);
        let prof = phi_extrema(&bd, lambda).unwrap();
        assert_eq!(prof.branch, PhiBranch::ReNonzero);
        assert!((prof.m_lambda.unwrap() - 0.75).abs() < 1e-15);
        let root = (2.0f64 + 0.5625).sqrt();
        assert!((prof.t_max.unwrap() - (0.75 + root)).abs() < 1e-14);
        assert!((prof.t_min.unwrap() - (0.75 - root)).abs() < 1e-14);
        assert!((prof.t_max.unwrap() - 2.3507810593582121).abs() < 1e-12);
        assert!((prof.t_min.unwrap() + 0.8507810593582121).abs() < 1e-12);

        let (t_grid, v_grid) = brute_force_argmax(&bd, lambda, -50.0, 50.0);
        assert!((t_grid - prof.t_max.unwrap()).abs() < 1e-3);
        assert!(v_grid <= prof.sup_over_reals * (1.0 + 1e-8));
    }

    #[test]
    fn extrema_re_zero_branches() {
        let bd = RelBound::new(3.0, 0.25).unwrap();
        let prof = phi_extrema(&bd, c(0.0, 4.0)).unwrap();
        assert_eq!(prof.branch, PhiBranch::ReZeroMin);
        assert_eq!(prof.t_min, Some(0.0));
        assert_eq!(prof.t_max, None);

        let bd = RelBound::new(4.0, 0.25).unwrap();
        let prof = phi_extrema(&bd, c(0.0, 4.0)).unwrap();
        assert_eq!(prof.branch, PhiBranch::Constant);
        for t in [-10.0, 0.0, 3.0, 1e5] {
            assert!((phi(&bd, c(0.0, 4.0), t).unwrap() - 0.25).abs() < 1e-14);
        }

        let bd = RelBound::new(5.0, 0.25).unwrap();
        let prof = phi_extrema(&bd, c(0.0, 4.0)).unwrap();
        assert_eq!(prof.branch, PhiBranch::ReZeroMax);
        assert_eq!(prof.t_max, Some(0.0));
        assert!((prof.sup_over_reals - 5.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn extrema_b_zero() {
        let bd = RelBound::new(1.0, 0.0).unwrap();
        let prof = phi_extrema(&bd, c(5.0, 2.0)).unwrap();
        assert_eq!(prof.branch, PhiBranch::BZero);
        assert_eq!(prof.t_max, Some(5.0));
        assert_eq!(prof.t_min, None);
        assert_eq!(prof.sup_over_reals, 0.25);
    }

    #[test]
    fn extrema_reject_real_lambda() {
        let bd = RelBound::new(1.0, 0.5).unwrap();
        assert!(phi_extrema(&bd, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn hull_cases() {
        let bd = RelBound::new(3.0, 0.9).unwrap();
        assert!(hull_membership(&bd, c(0.0, 3f64.sqrt())));
        assert!(hull_membership(&bd, c(0.0, 3f64.sqrt() * (1.0 - 1e-12))));
        assert!(!hull_membership(&bd, c(0.0, 3f64.sqrt() * (1.0 + 1e-12))));

        let bd0 = RelBound::new(0.0, 0.0).unwrap();
        assert!(!hull_membership(&bd0, c(0.0, 1e-9)));
        assert!(hull_membership(&bd0, c(7.0, 0.0)));

        let lam = c(0.0, 30f64.sqrt() * (1.0 - 1e-12));
        assert!(!hull_membership(&bd, lam));
        assert!(prior_hull_membership(&bd, lam));
    }

    #[test]
    fn tangency_points() {
        let bd = RelBound::new(2.0, 0.0).unwrap();
        assert_eq!(hull_tangency(&bd, 7.0), 7.0);
        let bd = RelBound::new(2.0, 0.9).unwrap();
        assert!((hull_tangency(&bd, 10.0) - 1.0).abs() < 1e-14);
        let bd = RelBound::new(2.0, 0.5).unwrap();
        assert_eq!(hull_tangency(&bd, -4.0), -2.0);
    }

    #[test]
    fn smallerb_threshold_values() {
        let bd = RelBound::new(0.0, 0.5).unwrap();
        assert_eq!(smallerb_threshold(&bd, 0.0).unwrap(), 0.0);
        let bd = RelBound::new(10.0, 0.4).unwrap();
        assert!((smallerb_threshold(&bd, 10.0).unwrap() - (10.0 + 125f64.sqrt())).abs() < 1e-12);
        assert!((smallerb_threshold(&bd, 10.0).unwrap() - 21.180339887498949).abs() < 1e-12);
        assert!((smallerb_threshold(&bd, 0.0).unwrap() - 5.0).abs() < 1e-14);
        let bd = RelBound::new(10.0, 0.0).unwrap();
        assert!(smallerb_threshold(&bd, 1.0).is_err());
    }
}
