use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, CMat, DenseMatrix};
use crate::{Complex64, Error, Result};

/// `S = [[S₊, M], [-M*, S₋]]` with Hermitian diagonal blocks.
#[derive(Debug, Clone)]
pub struct BlockOperator {
    s_plus: CMat,
    s_minus: CMat,
    m: CMat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockOperatorSpec {
    #[serde(rename = "Splus")]
    pub s_plus: DenseMatrix,
    #[serde(rename = "Sminus")]
    pub s_minus: DenseMatrix,
    #[serde(rename = "M")]
    pub m: DenseMatrix,
}

pub(crate) fn check_hermitian(name: &'static str, a: &CMat) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::Shape(format!("{name} must be square, got {}x{}", a.nrows(), a.ncols())));
    }
    let tol = 1e-12 * linalg::frobenius(a).max(1.0);
    let defect = linalg::hermitian_defect(a);
    if defect > tol {
        return Err(Error::invalid(name, format!("not Hermitian (defect {defect:e})")));
    }
    Ok(())
}

impl BlockOperator {
    pub fn new(s_plus: CMat, s_minus: CMat, m: CMat) -> Result<Self> {
        check_hermitian("Splus", &s_plus)?;
        check_hermitian("Sminus", &s_minus)?;
        if m.nrows() != s_plus.nrows() || m.ncols() != s_minus.nrows() {
            return Err(Error::Shape(format!(
                "M must be {}x{}, got {}x{}",
                s_plus.nrows(),
                s_minus.nrows(),
                m.nrows(),
                m.ncols()
            )));
        }
        if s_plus.nrows() == 0 || s_minus.nrows() == 0 {
            return Err(Error::Shape("both diagonal blocks must be non-empty".into()));
        }
        for (name, a) in [("Splus", &s_plus), ("Sminus", &s_minus), ("M", &m)] {
            if !linalg::all_finite(a) {
                return Err(Error::NonFinite(name.into()));
            }
        }
        Ok(Self {
            s_plus: linalg::hermitian_part(&s_plus),
            s_minus: linalg::hermitian_part(&s_minus),
            m,
        })
    }

    pub fn from_spec(spec: &BlockOperatorSpec) -> Result<Self> {
        Self::new(spec.s_plus.to_mat()?, spec.s_minus.to_mat()?, spec.m.to_mat()?)
    }

    pub fn to_spec(&self) -> BlockOperatorSpec {
        BlockOperatorSpec {
            s_plus: DenseMatrix::from_mat(&self.s_plus),
            s_minus: DenseMatrix::from_mat(&self.s_minus),
            m: DenseMatrix::from_mat(&self.m),
        }
    }

    pub fn s_plus(&self) -> &CMat {
        &self.s_plus
    }

    pub fn s_minus(&self) -> &CMat {
        &self.s_minus
    }

    pub fn m(&self) -> &CMat {
        &self.m
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.s_plus.nrows(), self.s_minus.nrows())
    }

    /// Diagonal of `J = diag(I, -I)`.
    pub fn signature(&self) -> Vec<f64> {
        let (np, nm) = self.dims();
        std::iter::repeat_n(1.0, np).chain(std::iter::repeat_n(-1.0, nm)).collect()
    }
}

pub fn assemble_block(b: &BlockOperator) -> CMat {
    let (np, nm) = b.dims();
    Mat::from_fn(np + nm, np + nm, |i, j| match (i < np, j < np) {
        (true, true) => b.s_plus[(i, j)],
        (true, false) => b.m[(i, j - np)],
        (false, true) => -b.m[(j, i - np)].conj(),
        (false, false) => b.s_minus[(i - np, j - np)],
    })
}

/// `(Jf, f)` for a diagonal `J`.
pub fn krein_product(signature: &[f64], f: impl Fn(usize) -> Complex64) -> f64 {
    signature.iter().enumerate().map(|(i, s)| s * f(i).norm_sqr()).sum()
}
