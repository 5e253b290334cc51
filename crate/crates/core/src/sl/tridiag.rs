//! Tridiagonal kernels: implicit QL for complex-symmetric matrices and banded LU solves.

use crate::{Complex64, Error, Result};

/// Principal square root without the polar round trip.
fn csqrt(z: Complex64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return z;
    }
    let t = ((z.norm() + z.re.abs()) * 0.5).sqrt();
    if z.re >= 0.0 {
        Complex64::new(t, z.im / (2.0 * t))
    } else {
        Complex64::new(z.im.abs() / (2.0 * t), t.copysign(z.im))
    }
}

fn l1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

fn csqrt_sum_sq(f: Complex64, g: Complex64) -> Complex64 {
    let s = l1(f).max(l1(g));
    if s == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if (1e-150..1e150).contains(&s) {
        return csqrt(f * f + g * g);
    }
    let (fs, gs) = (f / s, g / s);
    csqrt(fs * fs + gs * gs) * s
}

/// Eigenvalues of the complex-symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (`e[i]` couples `i` and `i + 1`). Implicit-shift QL with
/// complex Givens-like rotations `c² + s² = 1`, without conjugation.
pub fn complex_symmetric_ql(d: &[Complex64], e: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = d.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if e.len() + 1 != n {
        return Err(Error::Shape(format!("off-diagonal needs {} entries, got {}", n - 1, e.len())));
    }
    let mut d = d.to_vec();
    let mut e: Vec<Complex64> = e.iter().copied().chain(std::iter::once(Complex64::new(0.0, 0.0))).collect();
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                if l1(e[m]) <= f64::EPSILON * (l1(d[m]) + l1(d[m + 1])) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Numerical(format!("QL iteration did not converge at index {l}")));
            }
            let mut g = (d[l + 1] - d[l]) / (e[l] * 2.0);
            if iter % 20 == 0 {
                // Exceptional shift against cycling.
                g += Complex64::new(0.0, 0.5 * (1.0 + l1(g)));
            }
            let r = csqrt_sum_sq(g, one);
            let denom = if l1(g + r) >= l1(g - r) { g + r } else { g - r };
            g = d[m] - d[l] + e[l] / denom;
            let (mut s, mut c, mut p) = (one, one, zero);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                let r = csqrt_sum_sq(f, g);
                e[i + 1] = r;
                if r.re == 0.0 && r.im == 0.0 {
                    d[i + 1] -= p;
                    e[m] = zero;
                    deflated = true;
                    break;
                }
                let inv = r.inv();
                s = f * inv;
                c = g * inv;
                g = d[i + 1] - p;
                let r2 = (d[i] - g) * s + c * b * 2.0;
                p = s * r2;
                d[i + 1] = g + p;
                g = c * r2 - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = zero;
        }
    }
    Ok(d)
}

/// LU factorization with partial pivoting of a general complex tridiagonal matrix
/// (sub-diagonal `dl`, diagonal `d`, super-diagonal `du`), LAPACK `gttrf` layout.
pub struct TridiagLu {
    dl: Vec<Complex64>,
    d: Vec<Complex64>,
    du: Vec<Complex64>,
    du2: Vec<Complex64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    pub fn new(dl: &[Complex64], d: &[Complex64], du: &[Complex64]) -> Result<Self> {
        let n = d.len();
        let zero = Complex64::new(0.0, 0.0);
        let (mut dl, mut d, mut du) = (dl.to_vec(), d.to_vec(), du.to_vec());
        let mut du2 = vec![zero; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if l1(d[i]) >= l1(dl[i]) {
                if l1(d[i]) == 0.0 {
                    return Err(Error::Numerical("singular tridiagonal matrix".into()));
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if n > 0 && d[n - 1].norm() == 0.0 {
            // Keep inverse iteration alive at an exact eigenvalue.
            d[n - 1] = Complex64::new(f64::EPSILON * (1.0 + du.iter().fold(0.0f64, |m, v| m.max(v.norm()))), 0.0);
        }
        Ok(Self {
            dl,
            d,
            du,
            du2,
            swapped,
        })
    }

    pub fn solve(&self, b: &mut [Complex64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                b.swap(i, i + 1);
                let t = b[i];
                b[i + 1] -= self.dl[i] * t;
            } else {
                let t = b[i];
                b[i + 1] -= self.dl[i] * t;
            }
        }
        if n == 0 {
            return;
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}
