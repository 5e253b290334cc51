use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::canonical::to_canonical_json;
use crate::lab::{BlockGenParams, BlockVerifyOptions, KreinGenParams, TauChoice, TmainOptions};
use crate::sl::{Potential, SlOptions, Tau0Probe};
use crate::{Error, Result};

/// One run of a CLI workflow. Serialized with a `command` tag; when the tag is missing
/// it is inferred from the other keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunConfig {
    Region(RegionConfig),
    MatrixLab(MatrixLabConfig),
    Perturb(PerturbConfig),
    Sl(SlConfig),
    Tau0(Tau0Config),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    /// Disks over `[-γ, γ]`, over the given centers, or over ℝ when neither is set.
    Disks,
    /// `(Im λ)² ≤ a + b/(1-b)·(Re λ)²`.
    Hull,
    /// Disks over `[-γ, γ]`.
    Bone,
    /// Disks over `[γ, ∞)`.
    Halfline,
}

fn one() -> f64 {
    1.0
}

fn resolution() -> usize {
    512
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RegionConfig {
    pub kind: RegionKind,
    pub a: f64,
    pub b: f64,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default = "one")]
    pub radius_scale: f64,
    /// Isolated centers for `disks`.
    #[serde(default)]
    pub centers: Option<Vec<f64>>,
    #[serde(default = "resolution")]
    pub resolution: usize,
    /// Also emit the coarser hull `(Im λ)² ≤ (a + b(Re λ)²)/(1-b)`.
    #[serde(default)]
    pub prior: bool,
    /// Abscissa range `[lo, hi]` of the polyline.
    #[serde(default)]
    pub window: Option<(f64, f64)>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn seed() -> u64 {
    42
}

fn trials() -> usize {
    100
}

macro_rules! default_from {
    ($name:ident, $ty:ty, $src:expr, $field:ident) => {
        fn $name() -> $ty {
            $src.$field
        }
    };
}

default_from!(block_min_dim, usize, BlockGenParams::default(), min_dim);
default_from!(block_max_dim, usize, BlockGenParams::default(), max_dim);
default_from!(plus_spectrum, (f64, f64), BlockGenParams::default(), plus_spectrum);
default_from!(minus_spectrum, (f64, f64), BlockGenParams::default(), minus_spectrum);
default_from!(coupling, (f64, f64), BlockGenParams::default(), coupling);
default_from!(block_relative_part, (f64, f64), BlockGenParams::default(), relative_part);
default_from!(lambda_samples, usize, BlockVerifyOptions::default(), lambda_samples);
default_from!(b_steps, usize, BlockVerifyOptions::default(), b_steps);
default_from!(nonreal_tol, f64, BlockVerifyOptions::default(), nonreal_tol);
default_from!(sign_threshold, f64, BlockVerifyOptions::default(), sign_threshold);
default_from!(krein_min_dim, usize, KreinGenParams::default(), min_dim);
default_from!(krein_max_dim, usize, KreinGenParams::default(), max_dim);
default_from!(p_spectrum, (f64, f64), KreinGenParams::default(), p_spectrum);
default_from!(v_norm, (f64, f64), KreinGenParams::default(), v_norm);
default_from!(krein_relative_part, (f64, f64), KreinGenParams::default(), relative_part);
default_from!(nonnegative_fraction, f64, KreinGenParams::default(), nonnegative_fraction);
default_from!(sl_tol, f64, SlOptions::default(), tol);
default_from!(slack_c, f64, SlOptions::default(), slack_c);
default_from!(slack_kappa, f64, SlOptions::default(), slack_kappa);
default_from!(sign_test, bool, SlOptions::default(), sign_test);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MatrixLabConfig {
    #[serde(default = "trials")]
    pub trials: usize,
    #[serde(default = "seed")]
    pub seed: u64,
    #[serde(default = "block_min_dim")]
    pub min_dim: usize,
    #[serde(default = "block_max_dim")]
    pub max_dim: usize,
    #[serde(default = "plus_spectrum")]
    pub plus_spectrum: (f64, f64),
    #[serde(default = "minus_spectrum")]
    pub minus_spectrum: (f64, f64),
    #[serde(default = "coupling")]
    pub coupling: (f64, f64),
    #[serde(default = "block_relative_part")]
    pub relative_part: (f64, f64),
    #[serde(default = "lambda_samples")]
    pub lambda_samples: usize,
    #[serde(default = "b_steps")]
    pub b_steps: usize,
    #[serde(default = "nonreal_tol")]
    pub nonreal_tol: f64,
    #[serde(default = "sign_threshold")]
    pub sign_threshold: f64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl MatrixLabConfig {
    pub fn gen_params(&self) -> BlockGenParams {
        BlockGenParams {
            min_dim: self.min_dim,
            max_dim: self.max_dim,
            plus_spectrum: self.plus_spectrum,
            minus_spectrum: self.minus_spectrum,
            coupling: self.coupling,
            relative_part: self.relative_part,
        }
    }

    pub fn verify_options(&self) -> BlockVerifyOptions {
        BlockVerifyOptions {
            lambda_samples: self.lambda_samples,
            b_steps: self.b_steps,
            nonreal_tol: self.nonreal_tol,
            sign_threshold: self.sign_threshold,
        }
    }
}

impl Default for MatrixLabConfig {
    fn default() -> Self {
        serde_json::from_value(Value::Object(Default::default())).expect("all fields have defaults")
    }
}

fn tau_auto() -> TauChoice {
    TauChoice::Auto
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PerturbConfig {
    /// JSON file `{signature, A0, V}`; when absent, problems are generated.
    #[serde(default)]
    pub problem: Option<PathBuf>,
    #[serde(default = "trials")]
    pub trials: usize,
    #[serde(default = "seed")]
    pub seed: u64,
    #[serde(default = "krein_min_dim")]
    pub min_dim: usize,
    #[serde(default = "krein_max_dim")]
    pub max_dim: usize,
    #[serde(default = "p_spectrum")]
    pub p_spectrum: (f64, f64),
    #[serde(default = "v_norm")]
    pub v_norm: (f64, f64),
    #[serde(default = "krein_relative_part")]
    pub relative_part: (f64, f64),
    #[serde(default = "nonnegative_fraction")]
    pub nonnegative_fraction: f64,
    #[serde(default = "tau_auto")]
    pub tau: TauChoice,
    #[serde(default = "b_steps")]
    pub b_steps: usize,
    #[serde(default)]
    pub bounded: bool,
    #[serde(default = "nonreal_tol")]
    pub nonreal_tol: f64,
    #[serde(default = "sign_threshold")]
    pub sign_threshold: f64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl PerturbConfig {
    pub fn gen_params(&self) -> KreinGenParams {
        KreinGenParams {
            min_dim: self.min_dim,
            max_dim: self.max_dim,
            p_spectrum: self.p_spectrum,
            v_norm: self.v_norm,
            relative_part: self.relative_part,
            nonnegative_fraction: self.nonnegative_fraction,
        }
    }

    pub fn tmain_options(&self) -> TmainOptions {
        TmainOptions {
            tau: self.tau,
            b_steps: self.b_steps,
            bounded: self.bounded,
            nonreal_tol: self.nonreal_tol,
            sign_threshold: self.sign_threshold,
        }
    }
}

impl Default for PerturbConfig {
    fn default() -> Self {
        serde_json::from_value(Value::Object(Default::default())).expect("all fields have defaults")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialKind {
    Step,
    Gaussian,
    Lorentzian,
    Tabulated,
}

fn two() -> f64 {
    2.0
}

fn sl_l() -> f64 {
    30.0
}

fn sl_n() -> usize {
    4000
}

fn constants_points() -> usize {
    50
}

fn constants_max_p() -> f64 {
    100.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SlConfig {
    pub kind: PotentialKind,
    #[serde(default)]
    pub depth: Option<f64>,
    #[serde(default = "one")]
    pub width: f64,
    /// Table `x,q` for `tabulated`, given inline (`x`, `q`) or as a CSV `file`.
    #[serde(default)]
    pub file: Option<PathBuf>,
    #[serde(default)]
    pub x: Option<Vec<f64>>,
    #[serde(default)]
    pub q: Option<Vec<f64>>,
    #[serde(default = "two")]
    pub p: f64,
    #[serde(rename = "L", default = "sl_l")]
    pub l: f64,
    #[serde(default = "sl_n")]
    pub n: usize,
    #[serde(default = "sl_tol")]
    pub tol: f64,
    #[serde(default = "slack_c")]
    pub slack_c: f64,
    #[serde(default = "slack_kappa")]
    pub slack_kappa: f64,
    #[serde(default = "sign_threshold")]
    pub sign_threshold: f64,
    #[serde(default = "sign_test")]
    pub sign_test: bool,
    /// Rows of the constants table, log-spaced in `[2, constantsMaxP]`.
    #[serde(default = "constants_points")]
    pub constants_points: usize,
    #[serde(default = "constants_max_p")]
    pub constants_max_p: f64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl SlConfig {
    pub fn options(&self) -> SlOptions {
        SlOptions {
            tol: self.tol,
            slack_c: self.slack_c,
            slack_kappa: self.slack_kappa,
            sign_threshold: self.sign_threshold,
            sign_test: self.sign_test,
        }
    }

    /// The potential, reading the table file for `tabulated` if one is named.
    pub fn potential(&self) -> Result<Potential> {
        let depth = self.depth.unwrap_or(0.0);
        let width = self.width;
        let pot = match self.kind {
            PotentialKind::Step => Potential::Step { depth, width },
            PotentialKind::Gaussian => Potential::Gaussian { depth, width },
            PotentialKind::Lorentzian => Potential::Lorentzian { depth, width },
            PotentialKind::Tabulated => match (&self.file, &self.x, &self.q) {
                (Some(path), _, _) => Potential::tabulated_from_csv(&read_text(path)?)?,
                (None, Some(x), Some(q)) => Potential::Tabulated {
                    x: x.clone(),
                    q: q.clone(),
                },
                _ => return Err(Error::Config("tabulated potential needs `file` or both `x` and `q`".into())),
            },
        };
        pot.validate()?;
        Ok(pot)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeKind {
    Indicator,
    Extremizer,
    Tabulated,
}

fn x_max() -> f64 {
    1e6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Tau0Config {
    pub kind: ProbeKind,
    #[serde(default = "one")]
    pub lo: f64,
    #[serde(default = "two")]
    pub hi: f64,
    #[serde(rename = "X", default = "x_max")]
    pub x_max: f64,
    /// Table `x,f1,f2` for `tabulated`, inline or as a CSV `file`.
    #[serde(default)]
    pub file: Option<PathBuf>,
    #[serde(default)]
    pub x: Option<Vec<f64>>,
    #[serde(default)]
    pub f1: Option<Vec<f64>>,
    #[serde(default)]
    pub f2: Option<Vec<f64>>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl Tau0Config {
    pub fn probe(&self) -> Result<Tau0Probe> {
        let probe = match self.kind {
            ProbeKind::Indicator => Tau0Probe::Indicator {
                lo: self.lo,
                hi: self.hi,
            },
            ProbeKind::Extremizer => Tau0Probe::Extremizer { x_max: self.x_max },
            ProbeKind::Tabulated => match (&self.file, &self.x, &self.f1, &self.f2) {
                (Some(path), ..) => probe_from_csv(&read_text(path)?)?,
                (None, Some(x), Some(f1), Some(f2)) => Tau0Probe::Tabulated {
                    x: x.clone(),
                    f1: f1.clone(),
                    f2: f2.clone(),
                },
                _ => return Err(Error::Config("tabulated probe needs `file` or `x`, `f1` and `f2`".into())),
            },
        };
        probe.validate()?;
        Ok(probe)
    }
}

/// Parses `x,f1,f2` rows; a non-numeric first line is taken as a header.
pub fn probe_from_csv(text: &str) -> Result<Tau0Probe> {
    let (mut x, mut f1, mut f2) = (Vec::new(), Vec::new(), Vec::new());
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<std::result::Result<f64, _>> = line.split(',').map(|c| c.trim().parse::<f64>()).collect();
        match cols.as_slice() {
            [Ok(a), Ok(b), Ok(c)] => {
                x.push(*a);
                f1.push(*b);
                f2.push(*c);
            }
            _ if lineno == 0 => continue,
            _ => {
                return Err(Error::Config(format!(
                    "probe table line {}: expected `x,f1,f2`, got `{line}`",
                    lineno + 1
                )))
            }
        }
    }
    Ok(Tau0Probe::Tabulated { x, f1, f2 })
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

const SL_KINDS: [&str; 3] = ["step", "gaussian", "lorentzian"];
const REGION_KINDS: [&str; 4] = ["disks", "hull", "bone", "halfline"];
const PROBE_KINDS: [&str; 2] = ["indicator", "extremizer"];
const PERTURB_KEYS: [&str; 6] = ["problem", "tau", "bounded", "pSpectrum", "vNorm", "nonnegativeFraction"];
const LAB_KEYS: [&str; 6] = ["plusSpectrum", "minusSpectrum", "coupling", "lambdaSamples", "trials", "maxDim"];

/// The command named by `obj["command"]`, or the one implied by its keys.
fn infer_command(obj: &serde_json::Map<String, Value>) -> Result<String> {
    if let Some(c) = obj.get("command") {
        return c
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| Error::Config("`command` must be a string".into()));
    }
    let has = |k: &str| obj.contains_key(k);
    if let Some(kind) = obj.get("kind").and_then(Value::as_str) {
        return Ok(match kind {
            k if SL_KINDS.contains(&k) => "sl",
            k if REGION_KINDS.contains(&k) => "region",
            k if PROBE_KINDS.contains(&k) => "tau0",
            "tabulated" if has("f1") || has("f2") => "tau0",
            "tabulated" if has("q") || has("p") || has("L") || has("n") => "sl",
            other => {
                return Err(Error::Config(format!(
                    "cannot infer the command for kind `{other}`; add a `command` key"
                )))
            }
        }
        .to_string());
    }
    if PERTURB_KEYS.iter().any(|k| has(k)) {
        return Ok("perturb".into());
    }
    if LAB_KEYS.iter().any(|k| has(k)) {
        return Ok("matrix-lab".into());
    }
    Err(Error::Config(
        "cannot infer the command; add a `command` key (region, matrix-lab, perturb, sl, tau0)".into(),
    ))
}

fn typed<T: DeserializeOwned>(value: Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            Error::Config(e.into_inner().to_string())
        } else {
            Error::Config(format!("field `{path}`: {}", e.into_inner()))
        }
    })
}

/// Parses, infers the command, fills defaults and validates.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("parse error: {e}")))?;
    let Value::Object(mut obj) = value else {
        return Err(Error::Config("config must be a JSON object".into()));
    };
    let command = infer_command(&obj)?;
    obj.remove("command");
    let body = Value::Object(obj);
    let config = match command.as_str() {
        "region" => RunConfig::Region(typed(body)?),
        "matrix-lab" => RunConfig::MatrixLab(typed(body)?),
        "perturb" => RunConfig::Perturb(typed(body)?),
        "sl" => RunConfig::Sl(typed(body)?),
        "tau0" => RunConfig::Tau0(typed(body)?),
        other => {
            return Err(Error::Config(format!(
                "unknown command `{other}` (expected region, matrix-lab, perturb, sl, tau0)"
            )))
        }
    };
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    parse_config(&read_text(path)?).map_err(|e| match e {
        Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Canonical JSON of the fully defaulted config, with its `command` tag.
pub fn save_config(config: &RunConfig) -> Result<String> {
    to_canonical_json(config)
}

struct Problems(Vec<String>);

impl Problems {
    fn positive(&mut self, name: &str, v: f64) {
        if !(v.is_finite() && v > 0.0) {
            self.0.push(format!("{name}: must be finite and > 0, got {v}"));
        }
    }

    fn nonneg(&mut self, name: &str, v: f64) {
        if !(v.is_finite() && v >= 0.0) {
            self.0.push(format!("{name}: must be finite and >= 0, got {v}"));
        }
    }

    fn range(&mut self, name: &str, (lo, hi): (f64, f64), min: f64) {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi && lo >= min) {
            self.0.push(format!("{name}: need {min} <= lo <= hi < ∞, got [{lo}, {hi}]"));
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.0.push(msg());
        }
    }

    fn dims(&mut self, min: usize, max: usize) {
        self.check(min >= 2, || format!("minDim: must be >= 2, got {min}"));
        self.check(max >= min, || format!("maxDim: must be >= minDim = {min}, got {max}"));
    }

    fn out(&mut self, out: &Option<PathBuf>) {
        if let Some(p) = out {
            if p.as_os_str().is_empty() {
                self.0.push("out: must not be empty".into());
            } else if p.is_file() {
                self.0.push(format!("out: `{}` is a file, expected a directory", p.display()));
            }
        }
    }
}

impl RunConfig {
    pub fn command(&self) -> &'static str {
        match self {
            RunConfig::Region(_) => "region",
            RunConfig::MatrixLab(_) => "matrix-lab",
            RunConfig::Perturb(_) => "perturb",
            RunConfig::Sl(_) => "sl",
            RunConfig::Tau0(_) => "tau0",
        }
    }

    pub fn out(&self) -> Option<&Path> {
        match self {
            RunConfig::Region(c) => c.out.as_deref(),
            RunConfig::MatrixLab(c) => c.out.as_deref(),
            RunConfig::Perturb(c) => c.out.as_deref(),
            RunConfig::Sl(c) => c.out.as_deref(),
            RunConfig::Tau0(c) => c.out.as_deref(),
        }
    }

    pub fn set_out(&mut self, out: Option<PathBuf>) {
        match self {
            RunConfig::Region(c) => c.out = out,
            RunConfig::MatrixLab(c) => c.out = out,
            RunConfig::Perturb(c) => c.out = out,
            RunConfig::Sl(c) => c.out = out,
            RunConfig::Tau0(c) => c.out = out,
        }
    }

    /// Files the run reads besides the config itself.
    pub fn inputs(&self) -> Vec<&Path> {
        match self {
            RunConfig::Perturb(c) => c.problem.as_deref().into_iter().collect(),
            RunConfig::Sl(c) => c.file.as_deref().into_iter().collect(),
            RunConfig::Tau0(c) => c.file.as_deref().into_iter().collect(),
            _ => Vec::new(),
        }
    }

    /// Every range violation, not just the first.
    pub fn problems(&self) -> Vec<String> {
        let mut p = Problems(Vec::new());
        match self {
            RunConfig::Region(c) => {
                p.nonneg("a", c.a);
                p.check(c.b.is_finite() && (0.0..1.0).contains(&c.b), || {
                    format!("b: must lie in [0, 1), got {}", c.b)
                });
                match c.gamma {
                    Some(g) if c.kind == RegionKind::Halfline => {
                        p.check(g.is_finite(), || format!("gamma: must be finite, got {g}"))
                    }
                    Some(g) => p.nonneg("gamma", g),
                    None => {}
                }
                p.positive("radiusScale", c.radius_scale);
                p.check(c.kind != RegionKind::Hull || c.radius_scale == 1.0, || {
                    "radiusScale: the hull has no scale parameter".into()
                });
                p.check(c.resolution >= 16, || format!("resolution: must be >= 16, got {}", c.resolution));
                p.check(c.kind != RegionKind::Bone || c.gamma.is_some(), || "gamma: required for kind bone".into());
                if let Some(centers) = &c.centers {
                    p.check(c.kind == RegionKind::Disks, || "centers: only valid for kind disks".into());
                    p.check(!centers.is_empty() && centers.iter().all(|t| t.is_finite()), || {
                        "centers: need at least one finite value".into()
                    });
                    p.check(c.gamma.is_none(), || "centers: conflicts with gamma".into());
                }
                if let Some((lo, hi)) = c.window {
                    p.check(lo.is_finite() && hi.is_finite() && lo < hi, || {
                        format!("window: need finite lo < hi, got [{lo}, {hi}]")
                    });
                }
                let unbounded = matches!(c.kind, RegionKind::Halfline)
                    || (c.kind == RegionKind::Disks && c.gamma.is_none() && c.centers.is_none());
                if unbounded {
                    p.check(c.radius_scale * c.b < 1.0, || {
                        format!("radiusScale·b = {} must be < 1 for unbounded centers", c.radius_scale * c.b)
                    });
                }
                p.out(&c.out);
            }
            RunConfig::MatrixLab(c) => {
                p.check(c.trials >= 1, || "trials: must be >= 1".into());
                p.dims(c.min_dim, c.max_dim);
                p.range("plusSpectrum", c.plus_spectrum, f64::NEG_INFINITY);
                p.range("minusSpectrum", c.minus_spectrum, f64::NEG_INFINITY);
                p.range("coupling", c.coupling, 0.0);
                p.range("relativePart", c.relative_part, 0.0);
                p.check(c.b_steps >= 1, || "bSteps: must be >= 1".into());
                p.positive("nonrealTol", c.nonreal_tol);
                p.positive("signThreshold", c.sign_threshold);
                p.out(&c.out);
            }
            RunConfig::Perturb(c) => {
                p.check(c.trials >= 1, || "trials: must be >= 1".into());
                p.dims(c.min_dim, c.max_dim);
                p.range("pSpectrum", c.p_spectrum, f64::MIN_POSITIVE);
                p.range("vNorm", c.v_norm, 0.0);
                p.range("relativePart", c.relative_part, f64::NEG_INFINITY);
                p.check((0.0..=1.0).contains(&c.nonnegative_fraction), || {
                    format!("nonnegativeFraction: must lie in [0, 1], got {}", c.nonnegative_fraction)
                });
                if let TauChoice::Value(t) = c.tau {
                    p.check(t.is_finite() && t >= 1.0, || format!("tau: must be `auto` or >= 1, got {t}"));
                }
                p.check(c.b_steps >= 1, || "bSteps: must be >= 1".into());
                p.positive("nonrealTol", c.nonreal_tol);
                p.positive("signThreshold", c.sign_threshold);
                p.out(&c.out);
            }
            RunConfig::Sl(c) => {
                if c.kind == PotentialKind::Tabulated {
                    p.check(c.depth.is_none(), || "depth: not used by kind tabulated".into());
                    let inline = c.x.is_some() || c.q.is_some();
                    p.check(c.file.is_some() != inline, || "tabulated: give either `file` or `x` and `q`".into());
                    p.check(!inline || (c.x.is_some() && c.q.is_some()), || "tabulated: need both `x` and `q`".into());
                } else {
                    match c.depth {
                        Some(d) => p.nonneg("depth", d),
                        None => p.0.push("depth: required".into()),
                    }
                    p.positive("width", c.width);
                    p.check(c.file.is_none() && c.x.is_none() && c.q.is_none(), || {
                        "file/x/q: only valid for kind tabulated".into()
                    });
                }
                p.check(c.p.is_finite() && c.p >= 2.0, || format!("p: must be finite and >= 2, got {}", c.p));
                p.positive("L", c.l);
                p.check(c.n >= 16 && c.n % 2 == 0, || format!("n: must be even and >= 16, got {}", c.n));
                p.positive("tol", c.tol);
                p.nonneg("slackC", c.slack_c);
                p.nonneg("slackKappa", c.slack_kappa);
                p.positive("signThreshold", c.sign_threshold);
                p.check(c.constants_points >= 1, || "constantsPoints: must be >= 1".into());
                p.check(c.constants_max_p.is_finite() && c.constants_max_p >= 2.0, || {
                    format!("constantsMaxP: must be finite and >= 2, got {}", c.constants_max_p)
                });
                p.out(&c.out);
            }
            RunConfig::Tau0(c) => {
                match c.kind {
                    ProbeKind::Indicator => p.check(c.lo.is_finite() && c.hi.is_finite() && c.lo > 0.0 && c.hi > c.lo, || {
                        format!("lo/hi: need 0 < lo < hi < ∞, got [{}, {}]", c.lo, c.hi)
                    }),
                    ProbeKind::Extremizer => {
                        p.check(c.x_max.is_finite() && c.x_max > 1.0, || format!("X: must be finite and > 1, got {}", c.x_max))
                    }
                    ProbeKind::Tabulated => {
                        let inline = c.x.is_some() || c.f1.is_some() || c.f2.is_some();
                        p.check(c.file.is_some() != inline, || "tabulated: give either `file` or `x`, `f1`, `f2`".into());
                    }
                }
                p.out(&c.out);
            }
        }
        p.0
    }

    pub fn validate(&self) -> Result<()> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }
}
