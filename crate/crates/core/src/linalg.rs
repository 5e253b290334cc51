//! Dense complex matrix helpers on top of `faer`.

use faer::linalg::solvers::DenseSolveCore;
use faer::{Mat, Side};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Complex64, Error, Result};

pub type CMat = Mat<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn from_real_diag(d: &[f64]) -> CMat {
    let n = d.len();
    Mat::from_fn(n, n, |i, j| if i == j { c(d[i], 0.0) } else { c(0.0, 0.0) })
}

pub fn identity(n: usize) -> CMat {
    Mat::identity(n, n)
}

pub fn adjoint(a: &CMat) -> CMat {
    a.adjoint().to_owned()
}

pub fn scale(a: &CMat, s: Complex64) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s)
}

/// `a - λI`.
pub fn shift(a: &CMat, lambda: Complex64) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| {
        if i == j {
            a[(i, j)] - lambda
        } else {
            a[(i, j)]
        }
    })
}

/// Multiply rows by the real signs `s` (that is, `diag(s)·a`).
pub fn row_signs(s: &[f64], a: &CMat) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s[i])
}

pub fn max_abs(a: &CMat) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

pub fn frobenius(a: &CMat) -> f64 {
    a.norm_l2()
}

pub fn all_finite(a: &CMat) -> bool {
    (0..a.ncols()).all(|j| (0..a.nrows()).all(|i| a[(i, j)].re.is_finite() && a[(i, j)].im.is_finite()))
}

/// Largest singular value.
pub fn spectral_norm(a: &CMat) -> Result<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(0.0);
    }
    let s = a
        .singular_values()
        .map_err(|e| Error::Numerical(format!("svd failed: {e:?}")))?;
    Ok(s.first().copied().unwrap_or(0.0))
}

/// Smallest singular value of a square matrix.
pub fn min_singular_value(a: &CMat) -> Result<f64> {
    if a.nrows() == 0 {
        return Ok(f64::INFINITY);
    }
    let s = a
        .singular_values()
        .map_err(|e| Error::Numerical(format!("svd failed: {e:?}")))?;
    Ok(s.last().copied().unwrap_or(0.0))
}

/// Deviation `‖a - a*‖_max` from Hermiticity.
pub fn hermitian_defect(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut d = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            d = d.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    d
}

/// Hermitian part `(a + a*)/2`.
pub fn hermitian_part(a: &CMat) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    let h = hermitian_part(a);
    let e = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("hermitian eigensolver failed: {e:?}")))?;
    let vals = (0..h.nrows()).map(|i| e.S()[i].re).collect();
    Ok((vals, e.U().to_owned()))
}

pub fn hermitian_eigenvalues(a: &CMat) -> Result<Vec<f64>> {
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let h = hermitian_part(a);
    h.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numerical(format!("hermitian eigensolver failed: {e:?}")))
}

/// Eigenvalues and (unit-norm columns) eigenvectors of a general square matrix.
pub fn eigen(a: &CMat) -> Result<(Vec<Complex64>, CMat)> {
    let n = a.nrows();
    if n == 0 {
        return Ok((Vec::new(), Mat::zeros(0, 0)));
    }
    let e = a
        .eigen()
        .map_err(|e| Error::Numerical(format!("eigensolver failed: {e:?}")))?;
    let vals = (0..n).map(|i| e.S()[i]).collect();
    let mut x = e.U().to_owned();
    for j in 0..n {
        let nrm = x.col(j).norm_l2();
        if nrm > 0.0 {
            for i in 0..n {
                x[(i, j)] /= nrm;
            }
        }
    }
    Ok((vals, x))
}

pub fn inverse(a: &CMat) -> Result<CMat> {
    let inv = a.partial_piv_lu().inverse();
    if !all_finite(&inv) {
        return Err(Error::Numerical("matrix is singular to working precision".into()));
    }
    Ok(inv)
}

/// Solve `a x = b` by LU with partial pivoting.
pub fn solve(a: &CMat, b: &CMat) -> Result<CMat> {
    use faer::linalg::solvers::Solve;
    let x = a.partial_piv_lu().solve(b);
    if !all_finite(&x) {
        return Err(Error::Numerical("matrix is singular to working precision".into()));
    }
    Ok(x)
}

/// Hermitian square root and inverse square root of a positive definite matrix.
pub fn sqrt_and_inv_sqrt(p: &CMat) -> Result<(CMat, CMat)> {
    let (vals, u) = hermitian_eigen(p)?;
    if vals.iter().any(|&v| v <= 0.0) {
        return Err(Error::Numerical("matrix is not positive definite".into()));
    }
    let n = p.nrows();
    let build = |f: &dyn Fn(f64) -> f64| {
        let d = from_real_diag(&vals.iter().map(|&v| f(v)).collect::<Vec<_>>());
        &u * &d * u.adjoint()
    };
    let s = build(&|v| v.sqrt());
    let si = build(&|v| 1.0 / v.sqrt());
    debug_assert_eq!(s.nrows(), n);
    Ok((s, si))
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Mat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re * s, im * s)
    })
}

/// Haar-distributed unitary matrix (QR of a complex Gaussian with phase correction).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let g = complex_gaussian(rng, n, n);
    let qr = g.qr();
    let q = qr.compute_Q();
    let r = qr.R();
    Mat::from_fn(n, n, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        q[(i, j)] * phase
    })
}

/// `Q diag(d) Q*` with a random unitary `Q`.
pub fn random_hermitian_with_spectrum<R: Rng + ?Sized>(rng: &mut R, d: &[f64]) -> CMat {
    let q = random_unitary(rng, d.len());
    hermitian_part(&(&q * from_real_diag(d) * q.adjoint()))
}

/// JSON matrix format: row-major entries as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl DenseMatrix {
    pub fn from_mat(a: &CMat) -> Self {
        let mut data = Vec::with_capacity(a.nrows() * a.ncols());
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                data.push([a[(i, j)].re, a[(i, j)].im]);
            }
        }
        Self {
            rows: a.nrows(),
            cols: a.ncols(),
            data,
        }
    }

    pub fn to_mat(&self) -> Result<CMat> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Shape(format!(
                "{}x{} matrix needs {} entries, got {}",
                self.rows,
                self.cols,
                self.rows * self.cols,
                self.data.len()
            )));
        }
        if self.data.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("matrix entry".into()));
        }
        Ok(Mat::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.data[i * self.cols + j];
            c(re, im)
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let q = random_unitary(&mut rng, 7);
        let e = &q * q.adjoint() - identity(7);
        assert!(max_abs(&e) < 1e-13);
    }

    #[test]
    fn hermitian_with_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let d = [-3.0, 0.5, 2.0, 9.0];
        let h = random_hermitian_with_spectrum(&mut rng, &d);
        assert!(hermitian_defect(&h) == 0.0);
        let vals = hermitian_eigenvalues(&h).unwrap();
        for (a, b) in vals.iter().zip(d) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn general_eigen_of_rotation() {
        let a = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c(1.0, 0.0),
            (1, 0) => c(-1.0, 0.0),
            _ => c(0.0, 0.0),
        });
        let (mut vals, _) = eigen(&a).unwrap();
        vals.sort_by(|x, y| x.im.total_cmp(&y.im));
        assert!((vals[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((vals[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn norms_and_inverse() {
        let a = from_real_diag(&[3.0, -5.0, 0.5]);
        assert!((spectral_norm(&a).unwrap() - 5.0).abs() < 1e-14);
        assert!((min_singular_value(&a).unwrap() - 0.5).abs() < 1e-14);
        let inv = inverse(&a).unwrap();
        assert!((inv[(2, 2)] - c(2.0, 0.0)).norm() < 1e-14);
        let singular = from_real_diag(&[1.0, 0.0]);
        assert!(inverse(&singular).is_err());
    }

    #[test]
    fn sqrt_pair() {
        let p = Mat::from_fn(2, 2, |i, j| if i == j { c(2.0 - i as f64, 0.0) } else { c(1.0, 0.0) });
        let (s, si) = sqrt_and_inv_sqrt(&p).unwrap();
        assert!(max_abs(&(&s * &s - &p)) < 1e-14);
        assert!(max_abs(&(&s * &si - identity(2))) < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let a = Mat::from_fn(2, 3, |i, j| c(i as f64, j as f64 - 0.5));
        let m = DenseMatrix::from_mat(&a);
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.starts_with(r#"{"rows":2,"cols":3,"data":[[0.0,-0.5],"#));
        let back: DenseMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_mat().unwrap(), a);
        let bad = DenseMatrix {
            rows: 2,
            cols: 2,
            data: vec![[0.0, 0.0]],
        };
        assert!(matches!(bad.to_mat(), Err(Error::Shape(_))));
    }
}
