use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::geometry::SlBox;
use crate::io::format_f64;
use crate::{ComplexPoint, Error, Result};

/// `τ = 3 + 2√2`, the upper bound for `‖J₀‖` of `sgn·(-d²/dx²)`.
pub const TAU_SL: f64 = 3.0 + 2.0 * SQRT_2;

/// Constants of the rectangle enclosing the non-real spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SlConstants {
    pub p: f64,
    pub s_p: f64,
    pub f_sp: f64,
    pub c_p: f64,
    pub im_coef: f64,
    pub re_coef: f64,
}

impl SlConstants {
    pub fn half_diagonal(&self) -> f64 {
        self.im_coef.hypot(self.re_coef)
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p.is_finite() && p >= 2.0) {
        return Err(Error::invalid("p", format!("must be finite and >= 2, got {p}")));
    }
    Ok(())
}

/// `s_p = 4 - 3√2 + (4√2 - 5)p + √((57 - 40√2)p² + (62√2 - 88)p + 44 - 31√2)`.
///
/// The small differences of surds are evaluated in their conjugate forms.
pub fn s_p(p: f64) -> f64 {
    let alpha = -2.0 / (4.0 + 3.0 * SQRT_2);
    let beta = 7.0 / (4.0 * SQRT_2 + 5.0);
    let c2 = beta * beta;
    let c1 = -56.0 / (62.0 * SQRT_2 + 88.0);
    let c0 = 14.0 / (44.0 + 31.0 * SQRT_2);
    alpha + beta * p + (c2 * p * p + c1 * p + c0).sqrt()
}

/// `f(s) = √(2((17+12√2)s + 4 + 3√2)/((3+2√2)s - 1 - √2))` for `s > 1`.
pub fn f_of_s(s: f64) -> f64 {
    let num = (17.0 + 12.0 * SQRT_2) * s + 4.0 + 3.0 * SQRT_2;
    let den = (3.0 + 2.0 * SQRT_2) * s - 1.0 - SQRT_2;
    (2.0 * num / den).sqrt()
}

fn c_p(p: f64, sp: f64) -> f64 {
    // (1 + √2)√(3 - 2√2) = 1
    let inner = 16.0 * SQRT_2 * TAU_SL * TAU_SL / (3.0 * PI.powi(4) * p) * sp;
    (2.0 * p / (2.0 * p - 1.0)).sqrt() * inner.powf(1.0 / (4.0 * p - 2.0))
}

pub fn sl_constants(p: f64) -> Result<SlConstants> {
    check_p(p)?;
    let sp = s_p(p);
    let f_sp = f_of_s(sp);
    let cp = c_p(p, sp);
    Ok(SlConstants {
        p,
        s_p: sp,
        f_sp,
        c_p: cp,
        im_coef: cp * f_sp,
        re_coef: cp * ((6.0 + 4.0 * SQRT_2).sqrt() + f_sp),
    })
}

/// Exponent `2p/(2p - 1)` applied to `‖q‖_p`.
pub fn norm_power(p: f64, q_norm: f64) -> f64 {
    q_norm.powf(2.0 * p / (2.0 * p - 1.0))
}

pub fn sl_box(p: f64, q_norm: f64) -> Result<SlBox> {
    if !(q_norm.is_finite() && q_norm >= 0.0) {
        return Err(Error::invalid("qNorm", format!("must be finite and >= 0, got {q_norm}")));
    }
    let k = sl_constants(p)?;
    let scale = norm_power(p, q_norm);
    SlBox::new(k.im_coef * scale, k.re_coef * scale)
}

/// Coefficients of the competing enclosure `|Im λ| ≤ im·‖q‖^{2p/(2p-1)}`, `|λ| ≤ abs·‖q‖^{2p/(2p-1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BstConstants {
    pub im_coef: f64,
    pub abs_coef: f64,
}

pub fn bst_constants(p: f64) -> Result<BstConstants> {
    check_p(p)?;
    let e = 2.0 * p - 1.0;
    let im_coef = 2f64.powf((2.0 * p + 1.0) / e) * 3.0 * 3f64.sqrt();
    let abs_coef = im_coef + 2f64.powf((3.0 - 2.0 * p) / e) * 9.0;
    Ok(BstConstants { im_coef, abs_coef })
}

/// The competing region for a given `‖q‖_p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BstRegion {
    pub im_bound: f64,
    pub abs_bound: f64,
}

impl BstRegion {
    /// `max(|Im λ| - H, |λ| - R)`: non-positive inside.
    pub fn margin(&self, lambda: ComplexPoint) -> f64 {
        (lambda.im.abs() - self.im_bound).max(lambda.norm() - self.abs_bound)
    }

    pub fn contains(&self, lambda: ComplexPoint) -> bool {
        self.margin(lambda) <= 0.0
    }
}

pub fn bst_region(p: f64, q_norm: f64) -> Result<BstRegion> {
    if !(q_norm.is_finite() && q_norm >= 0.0) {
        return Err(Error::invalid("qNorm", format!("must be finite and >= 0, got {q_norm}")));
    }
    let k = bst_constants(p)?;
    let scale = norm_power(p, q_norm);
    Ok(BstRegion {
        im_bound: k.im_coef * scale,
        abs_bound: k.abs_coef * scale,
    })
}

/// `γ_s + √((1+τ)/(2τ(1-b_s))·(a_s + b_s γ_s²))` with `τ = 3 + 2√2`, the real-part
/// bound obtained from the disk-union region for the parameter `s > 1`.
pub fn re_bound_objective(p: f64, s: f64, q_norm: f64) -> Result<f64> {
    check_p(p)?;
    if !(s > 1.0 && s.is_finite()) {
        return Err(Error::invalid("s", format!("must be > 1, got {s}")));
    }
    let k = sl_constants(p)?;
    let tau = TAU_SL;
    let e = 1.0 / (2.0 * p - 1.0);
    let m_p = 4.0 * tau * tau / (1.0 + tau)
        * k.s_p.powf(-e)
        * q_norm.powf(4.0 * p * e)
        * k.c_p
        * k.c_p;
    let a_s = m_p * s.powf(e);
    let b_s = (tau - 1.0) / (2.0 * tau * s);
    let gamma = ((1.0 + tau) / (2.0 * tau) * a_s).sqrt();
    Ok(gamma + ((1.0 + tau) / (2.0 * tau * (1.0 - b_s)) * (a_s + b_s * gamma * gamma)).sqrt())
}

/// Minimizes [`re_bound_objective`] over `s > 1`; returns `(s*, value)`.
pub fn improved_re_bound(p: f64, q_norm: f64) -> Result<(f64, f64)> {
    let obj = |u: f64| re_bound_objective(p, 1.0 + u.exp(), q_norm).unwrap_or(f64::INFINITY);
    let (mut a, mut b) = (-20.0f64, 20.0 + p.ln().max(0.0));
    let inv_phi = 0.618_033_988_749_894_9;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (obj(c), obj(d));
    while b - a > 1e-10 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = obj(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = obj(d);
        }
    }
    let u = 0.5 * (a + b);
    let s = 1.0 + u.exp();
    Ok((s, re_bound_objective(p, s, q_norm)?))
}

pub const CONSTANTS_CSV_HEADER: &str = "p,s_p,f_sp,C_p,im_coef,re_coef,bst_im,bst_abs";

/// Constants table with header [`CONSTANTS_CSV_HEADER`].
pub fn constants_table_csv(ps: &[f64]) -> Result<String> {
    let mut out = String::from(CONSTANTS_CSV_HEADER);
    out.push('\n');
    for &p in ps {
        let k = sl_constants(p)?;
        let b = bst_constants(p)?;
        let row = [p, k.s_p, k.f_sp, k.c_p, k.im_coef, k.re_coef, b.im_coef, b.abs_coef]
            .map(format_f64)
            .join(",");
        out.push_str(&row);
        out.push('\n');
    }
    Ok(out)
}

/// `n` values log-spaced over `[lo, hi]`, endpoints included.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (la, lb) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| match k {
            0 => lo,
            k if k == n - 1 => hi,
            k => (la + (lb - la) * k as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}
