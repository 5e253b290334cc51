use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::block::BlockOperator;
use super::krein::KreinPerturbationProblem;
use crate::linalg::{self, c};
use crate::{Error, Result};

/// Random diagonally dominant block operators `S₊ = Q₊D₊Q₊*`, `S₋ = Q₋D₋Q₋*` and
/// `M = K₁ + K₂S₋`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct BlockGenParams {
    pub min_dim: usize,
    pub max_dim: usize,
    pub plus_spectrum: (f64, f64),
    pub minus_spectrum: (f64, f64),
    /// Range of `‖K₁‖` relative to `max(‖S₊‖, ‖S₋‖)`.
    pub coupling: (f64, f64),
    /// Range of `‖K₂‖`.
    pub relative_part: (f64, f64),
}

impl Default for BlockGenParams {
    fn default() -> Self {
        Self {
            min_dim: 2,
            max_dim: 20,
            plus_spectrum: (-2.0, 10.0),
            minus_spectrum: (-10.0, 2.0),
            coupling: (0.05, 1.0),
            relative_part: (0.0, 0.6),
        }
    }
}

fn check_range(name: &'static str, (lo, hi): (f64, f64), min: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi && lo >= min) {
        return Err(Error::invalid(name, format!("need {min} <= lo <= hi < ∞, got ({lo}, {hi})")));
    }
    Ok(())
}

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

fn dims(rng: &mut ChaCha8Rng, min_dim: usize, max_dim: usize) -> (usize, usize) {
    let n = rng.random_range(min_dim..=max_dim);
    let np = rng.random_range(1..n);
    (np, n - np)
}

fn check_dims(min_dim: usize, max_dim: usize) -> Result<()> {
    if min_dim < 2 || max_dim < min_dim {
        return Err(Error::invalid("dims", format!("need 2 <= minDim <= maxDim, got {min_dim}..{max_dim}")));
    }
    Ok(())
}

impl BlockGenParams {
    pub fn validate(&self) -> Result<()> {
        check_dims(self.min_dim, self.max_dim)?;
        check_range("plusSpectrum", self.plus_spectrum, f64::NEG_INFINITY)?;
        check_range("minusSpectrum", self.minus_spectrum, f64::NEG_INFINITY)?;
        check_range("coupling", self.coupling, 0.0)?;
        check_range("relativePart", self.relative_part, 0.0)
    }
}

pub fn generate_block(params: &BlockGenParams, seed: u64) -> Result<BlockOperator> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (np, nm) = dims(&mut rng, params.min_dim, params.max_dim);
    let dp: Vec<f64> = (0..np).map(|_| draw(&mut rng, params.plus_spectrum)).collect();
    let dm: Vec<f64> = (0..nm).map(|_| draw(&mut rng, params.minus_spectrum)).collect();
    let s_plus = linalg::random_hermitian_with_spectrum(&mut rng, &dp);
    let s_minus = linalg::random_hermitian_with_spectrum(&mut rng, &dm);
    let diag_norm = dp.iter().chain(&dm).fold(1e-3f64, |m, v| m.max(v.abs()));

    let mut unit = |rows, cols| {
        let g = linalg::complex_gaussian(&mut rng, rows, cols);
        let n = linalg::spectral_norm(&g).unwrap_or(1.0).max(1e-300);
        linalg::scale(&g, c(1.0 / n, 0.0))
    };
    let k1 = unit(np, nm);
    let k2 = unit(np, nm);
    let w1 = draw(&mut rng, params.coupling) * diag_norm;
    let w2 = draw(&mut rng, params.relative_part);
    let m = linalg::scale(&k1, c(w1, 0.0)) + linalg::scale(&(&k2 * &s_minus), c(w2, 0.0));
    BlockOperator::new(s_plus, s_minus, m)
}

/// Random `(J, A₀ = JP, V = J(H + κP))` with `P ≻ 0` and `H` Hermitian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct KreinGenParams {
    pub min_dim: usize,
    pub max_dim: usize,
    /// Eigenvalue range of `P = JA₀`.
    pub p_spectrum: (f64, f64),
    /// Range of `‖H‖`.
    pub v_norm: (f64, f64),
    /// Range of `κ`, the part of `JV` proportional to `JA₀`.
    pub relative_part: (f64, f64),
    /// Fraction of instances with `H ⪰ 0` and `κ ≥ 0`.
    pub nonnegative_fraction: f64,
}

impl Default for KreinGenParams {
    fn default() -> Self {
        Self {
            min_dim: 2,
            max_dim: 20,
            p_spectrum: (0.2, 5.0),
            v_norm: (0.0, 1.5),
            relative_part: (-0.2, 0.2),
            nonnegative_fraction: 0.2,
        }
    }
}

impl KreinGenParams {
    pub fn validate(&self) -> Result<()> {
        check_dims(self.min_dim, self.max_dim)?;
        check_range("pSpectrum", self.p_spectrum, f64::MIN_POSITIVE)?;
        check_range("vNorm", self.v_norm, 0.0)?;
        check_range("relativePart", self.relative_part, f64::NEG_INFINITY)?;
        if !(0.0..=1.0).contains(&self.nonnegative_fraction) {
            return Err(Error::invalid("nonnegativeFraction", "must lie in [0, 1]"));
        }
        Ok(())
    }
}

pub fn generate_krein(params: &KreinGenParams, seed: u64) -> Result<KreinPerturbationProblem> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (np, nm) = dims(&mut rng, params.min_dim, params.max_dim);
    let mut signature: Vec<f64> = std::iter::repeat_n(1.0, np).chain(std::iter::repeat_n(-1.0, nm)).collect();
    signature.shuffle(&mut rng);
    let n = np + nm;

    let dp: Vec<f64> = (0..n).map(|_| draw(&mut rng, params.p_spectrum)).collect();
    let p = linalg::random_hermitian_with_spectrum(&mut rng, &dp);
    let nonneg = rng.random_bool(params.nonnegative_fraction);
    let hn = draw(&mut rng, params.v_norm);
    let dh: Vec<f64> = (0..n)
        .map(|_| if nonneg { rng.random_range(0.0..1.0) } else { rng.random_range(-1.0..1.0) })
        .collect();
    let hmax = dh.iter().fold(1e-300f64, |m, v| m.max(v.abs()));
    let dh: Vec<f64> = dh.iter().map(|v| v * hn / hmax).collect();
    let h = linalg::random_hermitian_with_spectrum(&mut rng, &dh);
    let mut kappa = draw(&mut rng, params.relative_part);
    if nonneg {
        kappa = kappa.abs();
    }
    let jv = h + linalg::scale(&p, c(kappa, 0.0));
    let a0 = linalg::row_signs(&signature, &p);
    let v = linalg::row_signs(&signature, &jv);
    KreinPerturbationProblem::new(signature, a0, v)
}
