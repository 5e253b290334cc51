use crate::linalg::{self, CMat};
use crate::{Complex64, Result};

/// Eigen-decomposition with per-eigenvalue condition numbers `‖x_i‖‖y_i‖/|y_i* x_i|`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<Complex64>,
    /// Unit-norm right eigenvectors (columns).
    pub vectors: CMat,
    pub conditions: Vec<f64>,
    /// `‖A‖_F`.
    pub scale: f64,
}

impl Spectrum {
    pub fn of(a: &CMat) -> Result<Self> {
        let (values, vectors) = linalg::eigen(a)?;
        let n = values.len();
        // Rows of X⁻¹ are left eigenvectors normalized to y_i* x_i = 1.
        let conditions = match linalg::inverse(&vectors) {
            Ok(y) => (0..n).map(|i| y.row(i).norm_l2()).collect(),
            Err(_) => vec![f64::INFINITY; n],
        };
        Ok(Self {
            values,
            vectors,
            conditions,
            scale: linalg::frobenius(a),
        })
    }

    /// `|Im λ| > tol·(1+|λ|)·κ`.
    pub fn is_nonreal(&self, i: usize, tol: f64) -> bool {
        let z = self.values[i];
        z.im.abs() > tol * (1.0 + z.norm()) * self.conditions[i].min(1e12)
    }

    /// First-order perturbation radius of eigenvalue `i` under backward error `n·ε‖A‖`.
    pub fn perturbation(&self, i: usize) -> f64 {
        64.0 * self.values.len() as f64 * f64::EPSILON * self.scale * self.conditions[i].min(1e12)
    }

    /// `(Jf, f)/‖f‖²` for the eigenvector of eigenvalue `i`.
    pub fn krein_quotient(&self, i: usize, signature: &[f64]) -> f64 {
        let col = self.vectors.col(i);
        let (mut num, mut den) = (0.0, 0.0);
        for (k, s) in signature.iter().enumerate() {
            let w = col[k].norm_sqr();
            num += s * w;
            den += w;
        }
        num / den
    }

    /// Whether another eigenvalue lies within `10⁻⁶·max(1, |λ_i|)`.
    pub fn clustered(&self, i: usize) -> bool {
        let z = self.values[i];
        let tol = 1e-6 * z.norm().max(1.0);
        self.values
            .iter()
            .enumerate()
            .any(|(j, w)| j != i && (w - z).norm() < tol)
    }
}
