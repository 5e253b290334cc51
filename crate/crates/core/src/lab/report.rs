use serde::{Deserialize, Serialize};

use crate::ComplexPoint;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EigenRecord {
    pub re: f64,
    pub im: f64,
    pub contained: bool,
    /// Signed distance-like margin to the enclosure; `≤ 0` inside.
    pub margin: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Bounds {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub tau: Option<f64>,
    pub tau0: Option<f64>,
    pub gamma: Option<f64>,
    pub v: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResolventCheck {
    pub samples: usize,
    pub failures: usize,
    /// Largest observed `‖(S-λ)⁻¹‖ / bound`.
    pub max_ratio: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SignTypeCheck {
    pub tested: usize,
    pub failures: usize,
    pub indeterminate: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Checks {
    pub resolvent: ResolventCheck,
    pub sign_type: SignTypeCheck,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MarginSummary {
    pub count: usize,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub mean: Option<f64>,
}

impl MarginSummary {
    pub fn of(margins: impl IntoIterator<Item = f64>) -> Self {
        let v: Vec<f64> = margins.into_iter().collect();
        if v.is_empty() {
            return Self::default();
        }
        Self {
            count: v.len(),
            min: v.iter().copied().reduce(f64::min),
            max: v.iter().copied().reduce(f64::max),
            mean: Some(v.iter().sum::<f64>() / v.len() as f64),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub instance: serde_json::Value,
    pub bounds: Bounds,
    pub eigenvalues: Vec<EigenRecord>,
    pub nonreal_count: usize,
    pub containment_failures: Vec<String>,
    pub resolvent_check_failures: Vec<String>,
    pub sign_type_failures: Vec<String>,
    pub checks: Checks,
    pub margins: MarginSummary,
    pub verified: bool,
}

impl VerificationReport {
    pub fn new(instance: serde_json::Value) -> Self {
        Self {
            instance,
            ..Self::default()
        }
    }

    /// Recomputes the derived counters and the `verified` flag.
    pub fn finish(mut self) -> Self {
        self.checks.sign_type.failures = self.sign_type_failures.len();
        self.checks.resolvent.failures = self.resolvent_check_failures.len();
        self.margins = MarginSummary::of(
            self.eigenvalues
                .iter()
                .filter(|e| e.im != 0.0)
                .map(|e| e.margin),
        );
        self.verified = self.containment_failures.is_empty()
            && self.resolvent_check_failures.is_empty()
            && self.sign_type_failures.is_empty();
        self
    }

    pub fn failure_count(&self) -> usize {
        self.containment_failures.len() + self.resolvent_check_failures.len() + self.sign_type_failures.len()
    }
}

pub(crate) fn fmt_point(z: ComplexPoint) -> String {
    format!("{:.12e}{:+.12e}i", z.re, z.im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verified_tracks_failures() {
        let r = VerificationReport::new(serde_json::json!({"dims": [1, 1]})).finish();
        assert!(r.verified);
        let mut r = VerificationReport::new(serde_json::Value::Null);
        r.sign_type_failures.push("x".into());
        let r = r.finish();
        assert!(!r.verified);
        assert_eq!(r.checks.sign_type.failures, 1);
    }

    #[test]
    fn json_keys_are_camel_case() {
        let r = VerificationReport::new(serde_json::Value::Null).finish();
        let js = serde_json::to_value(&r).unwrap();
        for key in ["containmentFailures", "nonrealCount", "checks", "verified", "bounds"] {
            assert!(js.get(key).is_some(), "{key}");
        }
        assert!(js["checks"].get("signType").is_some());
    }

    #[test]
    fn margin_summary() {
        let s = MarginSummary::of([1.0, -3.0, 2.0]);
        assert_eq!(s.min, Some(-3.0));
        assert_eq!(s.max, Some(2.0));
        assert_eq!(s.mean, Some(0.0));
        assert_eq!(MarginSummary::of([]).count, 0);
    }
}
