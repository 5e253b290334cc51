use faer::Mat;
use serde::{Deserialize, Serialize};

use super::potential::Potential;
use super::tridiag::{complex_symmetric_ql, TridiagLu};
use crate::linalg::CMat;
use crate::{Complex64, Error, Result};

/// Largest `n` for which the dense matrices may be materialized.
pub const DENSE_LIMIT: usize = 2000;

/// Finite-difference model of `sgn·(-d²/dx² + q)` on `[-L, L]` with Dirichlet ends.
/// `T` is kept in tridiagonal form: diagonal `2/h² + q(x_i)`, off-diagonal `-1/h²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SlDiscretization {
    pub l: f64,
    pub n: usize,
    pub h: f64,
    pub grid_x: Vec<f64>,
    pub q: Vec<f64>,
}

/// A refined eigenpair of `A` with its conditioning estimate.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: Complex64,
    pub vector: Vec<Complex64>,
    /// `‖x‖² / |xᵀJx|`, the eigenvalue condition number (left vector `Jx`).
    pub condition: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Default)]
pub struct NonrealSpectrum {
    /// Non-real eigenvalues sorted by real then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    pub conditions: Vec<f64>,
    /// Eigenvalues with no conjugate partner within tolerance.
    pub unpaired: Vec<Complex64>,
}

impl SlDiscretization {
    pub fn new(potential: &Potential, l: f64, n: usize) -> Result<Self> {
        potential.validate()?;
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::invalid("L", format!("must be finite and > 0, got {l}")));
        }
        if n < 16 || n % 2 != 0 {
            return Err(Error::invalid("n", format!("must be even and >= 16, got {n}")));
        }
        let h = 2.0 * l / (n + 1) as f64;
        let grid_x: Vec<f64> = (0..n).map(|i| -l + (i + 1) as f64 * h).collect();
        let q = grid_x.iter().map(|&x| potential.value(x)).collect();
        Ok(Self { l, n, h, grid_x, q })
    }

    pub fn signs(&self) -> Vec<f64> {
        self.grid_x.iter().map(|&x| x.signum()).collect()
    }

    fn off(&self) -> f64 {
        -1.0 / (self.h * self.h)
    }

    pub fn t_diagonal(&self) -> Vec<f64> {
        let d = 2.0 / (self.h * self.h);
        self.q.iter().map(|&q| d + q).collect()
    }

    fn check_dense(&self) -> Result<()> {
        if self.n > DENSE_LIMIT {
            return Err(Error::invalid(
                "n",
                format!("dense export is limited to n <= {DENSE_LIMIT}, got {}", self.n),
            ));
        }
        Ok(())
    }

    pub fn dense_t(&self) -> Result<CMat> {
        self.check_dense()?;
        let d = self.t_diagonal();
        let e = self.off();
        Ok(Mat::from_fn(self.n, self.n, |i, j| {
            let v = if i == j {
                d[i]
            } else if i.abs_diff(j) == 1 {
                e
            } else {
                0.0
            };
            Complex64::new(v, 0.0)
        }))
    }

    pub fn dense_j(&self) -> Result<CMat> {
        self.check_dense()?;
        Ok(crate::linalg::from_real_diag(&self.signs()))
    }

    pub fn dense_a(&self) -> Result<CMat> {
        Ok(crate::linalg::row_signs(&self.signs(), &self.dense_t()?))
    }

    /// Upper bound `max_i |A_ii| + 2/h²` for `‖A‖`.
    pub fn norm_bound(&self) -> f64 {
        self.t_diagonal().iter().fold(0.0f64, |m, d| m.max(d.abs())) + 2.0 / (self.h * self.h)
    }

    /// All eigenvalues of `A = JT` via the diagonally similar complex-symmetric
    /// tridiagonal matrix (off-diagonal `i/h²` across the sign change).
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        let s = self.signs();
        let h2 = self.h * self.h;
        let d: Vec<Complex64> = self
            .q
            .iter()
            .zip(&s)
            .map(|(&q, &si)| Complex64::new(si * (2.0 + h2 * q), 0.0))
            .collect();
        let e: Vec<Complex64> = s
            .windows(2)
            .map(|w| {
                if w[0] * w[1] > 0.0 {
                    Complex64::new(-1.0, 0.0)
                } else {
                    Complex64::new(0.0, -1.0)
                }
            })
            .collect();
        let vals = complex_symmetric_ql(&d, &e)?;
        Ok(vals.into_iter().map(|v| v / h2).collect())
    }

    fn shifted_lu(&self, mu: Complex64) -> Result<TridiagLu> {
        let s = self.signs();
        let e = self.off();
        let t = self.t_diagonal();
        let d: Vec<Complex64> = t.iter().zip(&s).map(|(&ti, &si)| Complex64::new(si * ti, 0.0) - mu).collect();
        let du: Vec<Complex64> = (0..self.n - 1).map(|i| Complex64::new(s[i] * e, 0.0)).collect();
        let dl: Vec<Complex64> = (0..self.n - 1).map(|i| Complex64::new(s[i + 1] * e, 0.0)).collect();
        TridiagLu::new(&dl, &d, &du)
    }

    fn apply_t(&self, x: &[Complex64]) -> Vec<Complex64> {
        let d = self.t_diagonal();
        let e = self.off();
        (0..self.n)
            .map(|i| {
                let mut v = x[i] * d[i];
                if i > 0 {
                    v += x[i - 1] * e;
                }
                if i + 1 < self.n {
                    v += x[i + 1] * e;
                }
                v
            })
            .collect()
    }

    /// `(xᵀTx, xᵀJx, ‖x‖²)` without conjugation in the first two.
    fn forms(&self, x: &[Complex64]) -> (Complex64, Complex64, f64) {
        let tx = self.apply_t(x);
        let xtx = x.iter().zip(&tx).map(|(a, b)| a * b).sum();
        let xjx = x
            .iter()
            .zip(&self.grid_x)
            .map(|(a, &g)| a * a * g.signum())
            .sum();
        let nrm = x.iter().map(|a| a.norm_sqr()).sum();
        (xtx, xjx, nrm)
    }

    fn start_vector(&self) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| Complex64::new(1.0 + 0.1 * ((i as f64) * 0.37).sin(), 0.05 * ((i as f64) * 0.11).cos()))
            .collect()
    }

    fn normalize(x: &mut [Complex64]) {
        let nrm = x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if nrm > 0.0 {
            x.iter_mut().for_each(|a| *a /= nrm);
        }
    }

    /// Inverse iteration at the fixed shift `mu` followed by two-sided Rayleigh
    /// quotient iteration `μ = xᵀTx / xᵀJx`.
    pub fn refine(&self, mu: Complex64) -> Result<Eigenpair> {
        let mut x = self.start_vector();
        let lu = self.shifted_lu(mu)?;
        for _ in 0..3 {
            lu.solve(&mut x);
            Self::normalize(&mut x);
        }
        let mut value = mu;
        // Rayleigh quotients cannot settle below roundoff in `A`, whatever `|λ|` is.
        let floor = 8.0 * f64::EPSILON * self.norm_bound();
        for _ in 0..30 {
            let (xtx, xjx, _) = self.forms(&x);
            if xjx.norm() == 0.0 {
                break;
            }
            let next = xtx / xjx;
            let step = (next - value).norm();
            value = next;
            if step <= (1e-15 * (1.0 + value.norm())).max(floor) {
                break;
            }
            let lu = self.shifted_lu(value)?;
            lu.solve(&mut x);
            Self::normalize(&mut x);
        }
        let (_, xjx, nrm) = self.forms(&x);
        let tx = self.apply_t(&x);
        let s = self.signs();
        let resid = tx
            .iter()
            .zip(&x)
            .zip(&s)
            .map(|((t, xi), si)| (t * si - value * xi).norm_sqr())
            .sum::<f64>()
            .sqrt();
        Ok(Eigenpair {
            value,
            vector: x,
            condition: nrm / xjx.norm(),
            residual: resid / self.norm_bound(),
        })
    }

    /// Non-real eigenvalues: QL candidates with `|Im λ| > 10⁻⁹(1+|λ|)`, refined, then
    /// kept when `|Im λ| > tol·(1+|λ|)·κ`.
    pub fn nonreal_spectrum(&self, tol: f64) -> Result<NonrealSpectrum> {
        let all = self.eigenvalues()?;
        self.nonreal_from(&all, tol)
    }

    pub fn nonreal_from(&self, all: &[Complex64], tol: f64) -> Result<NonrealSpectrum> {
        let mut found: Vec<(Complex64, f64)> = Vec::new();
        for &z in all.iter().filter(|z| z.im.abs() > 1e-9 * (1.0 + z.norm())) {
            let pair = self.refine(z)?;
            let v = pair.value;
            if v.im.abs() <= tol * (1.0 + v.norm()) * pair.condition {
                continue;
            }
            let dup = found
                .iter()
                .any(|(w, _)| (w - v).norm() <= 1e-9 * (1.0 + v.norm()));
            if !dup {
                found.push((v, pair.condition));
            }
        }
        found.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
        let pair_tol = |z: Complex64| 1e-7 * (1.0 + z.norm());
        let unpaired = found
            .iter()
            .filter(|(z, _)| !found.iter().any(|(w, _)| (w - z.conj()).norm() <= pair_tol(*z)))
            .map(|(z, _)| *z)
            .collect();
        Ok(NonrealSpectrum {
            eigenvalues: found.iter().map(|f| f.0).collect(),
            conditions: found.iter().map(|f| f.1).collect(),
            unpaired,
        })
    }

    /// `(Jf, f)/‖f‖²` for the eigenvector of the real eigenvalue `lambda`.
    pub fn real_sign_quotient(&self, lambda: f64) -> Result<f64> {
        Ok(self.real_sign_quotients(&[lambda])?[0])
    }

    /// Batch form of [`Self::real_sign_quotient`]. The shifted matrix is real, so the
    /// inverse iteration runs in real arithmetic with shared work buffers.
    pub fn real_sign_quotients(&self, lambdas: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        let signs = self.signs();
        let t = self.t_diagonal();
        let e = self.off();
        let start: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i as f64) * 0.37).sin()).collect();
        let mut lu = RealTridiagLu::with_capacity(n);
        let mut x = vec![0.0; n];
        lambdas
            .iter()
            .map(|&lambda| {
                lu.factor(&signs, &t, e, lambda)?;
                x.copy_from_slice(&start);
                for _ in 0..3 {
                    lu.solve(&mut x);
                    let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if nrm > 0.0 {
                        x.iter_mut().for_each(|v| *v /= nrm);
                    }
                }
                let jf: f64 = x.iter().zip(&signs).map(|(v, s)| v * v * s).sum();
                let nrm: f64 = x.iter().map(|v| v * v).sum();
                Ok(jf / nrm)
            })
            .collect()
    }
}

/// Partially pivoted LU of the real tridiagonal `JT - λ`, reusing its buffers.
struct RealTridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl RealTridiagLu {
    fn with_capacity(n: usize) -> Self {
        Self {
            dl: Vec::with_capacity(n),
            d: Vec::with_capacity(n),
            du: Vec::with_capacity(n),
            du2: Vec::with_capacity(n),
            swapped: Vec::with_capacity(n),
        }
    }

    fn factor(&mut self, signs: &[f64], t: &[f64], e: f64, lambda: f64) -> Result<()> {
        let n = t.len();
        self.d.clear();
        self.d.extend(t.iter().zip(signs).map(|(ti, si)| si * ti - lambda));
        self.du.clear();
        self.du.extend(signs[..n - 1].iter().map(|s| s * e));
        self.dl.clear();
        self.dl.extend(signs[1..].iter().map(|s| s * e));
        self.du2.clear();
        self.du2.resize(n.saturating_sub(2), 0.0);
        self.swapped.clear();
        self.swapped.resize(n - 1, false);
        let (dl, d, du, du2) = (&mut self.dl, &mut self.d, &mut self.du, &mut self.du2);
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
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
                self.swapped[i] = true;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = f64::EPSILON * (1.0 + e.abs());
        }
        Ok(())
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= self.dl[i] * b[i];
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

/// True when every element has a partner `-conj λ` (parity symmetry for even potentials).
pub fn has_parity_symmetry(values: &[Complex64], tol: f64) -> bool {
    values
        .iter()
        .all(|z| values.iter().any(|w| (w + z.conj()).norm() <= tol * (1.0 + z.norm())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    fn step(depth: f64) -> Potential {
        Potential::Step { depth, width: 1.0 }
    }

    #[test]
    fn grid_is_symmetric_without_zero() {
        let d = SlDiscretization::new(&Potential::zero(), 3.0, 16).unwrap();
        assert_eq!(d.grid_x.len(), 16);
        for i in 0..16 {
            assert!((d.grid_x[i] + d.grid_x[15 - i]).abs() < 1e-14);
            assert!(d.grid_x[i] != 0.0);
        }
        assert!(SlDiscretization::new(&Potential::zero(), 3.0, 17).is_err());
        assert!(SlDiscretization::new(&Potential::zero(), 3.0, 14).is_err());
        assert!(SlDiscretization::new(&Potential::zero(), -1.0, 16).is_err());
    }

    #[test]
    fn free_laplacian_spectrum() {
        let d = SlDiscretization::new(&Potential::zero(), 5.0, 64).unwrap();
        let t = d.dense_t().unwrap();
        let vals = linalg::hermitian_eigenvalues(&t).unwrap();
        let n = 64;
        for (k, v) in vals.iter().enumerate() {
            let exact = (2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos()) / (d.h * d.h);
            assert!((v - exact).abs() < 1e-10 * exact.max(1.0));
            assert!(*v > 0.0);
        }
        let a = d.eigenvalues().unwrap();
        assert!(a.iter().all(|z| z.im.abs() < 1e-8 * (1.0 + z.norm())));
        assert!(d.nonreal_spectrum(1e-8).unwrap().eigenvalues.is_empty());
    }

    #[test]
    fn ql_agrees_with_dense_eigen() {
        for (depth, n) in [(10.0, 200), (25.0, 300)] {
            let d = SlDiscretization::new(&step(depth), 8.0, n).unwrap();
            let (dense, _) = linalg::eigen(&d.dense_a().unwrap()).unwrap();
            let dense_nonreal: Vec<Complex64> =
                dense.into_iter().filter(|z| z.im.abs() > 1e-6 * (1.0 + z.norm())).collect();
            let spec = d.nonreal_spectrum(1e-8).unwrap();
            assert!(!spec.eigenvalues.is_empty(), "depth {depth}: no non-real eigenvalues");
            assert_eq!(spec.eigenvalues.len(), dense_nonreal.len(), "depth {depth}");
            for z in &spec.eigenvalues {
                let dist = dense_nonreal.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
                assert!(dist < 1e-8 * (1.0 + z.norm()), "{z}: {dist}");
            }
            assert!(spec.unpaired.is_empty());
            assert!(has_parity_symmetry(&spec.eigenvalues, 1e-7));
        }
    }

    #[test]
    fn refined_pairs_have_small_residual() {
        let d = SlDiscretization::new(&step(20.0), 10.0, 400).unwrap();
        let spec = d.nonreal_spectrum(1e-8).unwrap();
        for &z in &spec.eigenvalues {
            let p = d.refine(z).unwrap();
            assert!(p.residual < 1e-12, "{z}: {}", p.residual);
            assert!((p.value - z).norm() < 1e-10 * (1.0 + z.norm()));
        }
    }

    #[test]
    fn sign_quotient_of_large_real_eigenvalues() {
        let d = SlDiscretization::new(&step(5.0), 8.0, 200).unwrap();
        let all = d.eigenvalues().unwrap();
        let big: Vec<f64> = all
            .iter()
            .filter(|z| z.im.abs() < 1e-8 * (1.0 + z.norm()) && z.re.abs() > 100.0)
            .map(|z| z.re)
            .collect();
        assert!(!big.is_empty());
        for lam in big.into_iter().take(20) {
            let s = d.real_sign_quotient(lam).unwrap();
            assert_eq!(s > 0.0, lam > 0.0, "{lam}: {s}");
        }
    }

    #[test]
    fn dense_export_is_bounded() {
        let d = SlDiscretization::new(&Potential::zero(), 1.0, 2002).unwrap();
        assert!(d.dense_a().is_err());
    }
}
