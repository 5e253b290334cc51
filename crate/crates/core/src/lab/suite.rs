use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::{generate_block, generate_krein, BlockGenParams, KreinGenParams};
use super::krein::{verify_tmain, TmainOptions};
use super::report::{Bounds, VerificationReport};
use super::verify::{verify_block_enclosure, BlockVerifyOptions};
use crate::{Error, Result};

/// Seed of trial `index` derived from `base` by SplitMix64.
pub fn trial_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialStatus {
    Verified,
    Failed,
    /// Hypotheses not met (e.g. no relative bound with `b < 1`); counted, not failed.
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TrialSummary {
    pub index: usize,
    pub seed: u64,
    pub dim: usize,
    pub status: TrialStatus,
    pub nonreal_count: usize,
    pub bounds: Bounds,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub verified: usize,
    pub failed: usize,
    pub rejected: usize,
    pub containment_failures: usize,
    pub sign_type_failures: usize,
    pub resolvent_check_failures: usize,
    pub nonreal_eigenvalues: usize,
    pub resolvent_samples: usize,
    pub max_resolvent_ratio: f64,
    pub sign_tested: usize,
    pub sign_indeterminate: usize,
    pub failed_seeds: Vec<u64>,
    pub details: Vec<TrialSummary>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    fn collect(seed: u64, outcomes: Vec<(usize, u64, usize, Result<VerificationReport>)>) -> Result<Self> {
        let mut s = SuiteReport {
            seed,
            trials: outcomes.len(),
            ..Self::default()
        };
        for (index, trial, dim, outcome) in outcomes {
            let report = match outcome {
                Ok(r) => r,
                Err(Error::Hypothesis(reason)) => {
                    s.rejected += 1;
                    s.details.push(TrialSummary {
                        index,
                        seed: trial,
                        dim,
                        status: TrialStatus::Rejected,
                        nonreal_count: 0,
                        bounds: Bounds::default(),
                        failures: Vec::new(),
                        reason: Some(reason),
                    });
                    continue;
                }
                Err(e) => return Err(e),
            };
            s.containment_failures += report.containment_failures.len();
            s.sign_type_failures += report.sign_type_failures.len();
            s.resolvent_check_failures += report.resolvent_check_failures.len();
            s.nonreal_eigenvalues += report.nonreal_count;
            s.resolvent_samples += report.checks.resolvent.samples;
            s.max_resolvent_ratio = s.max_resolvent_ratio.max(report.checks.resolvent.max_ratio);
            s.sign_tested += report.checks.sign_type.tested;
            s.sign_indeterminate += report.checks.sign_type.indeterminate;
            let status = if report.verified {
                s.verified += 1;
                TrialStatus::Verified
            } else {
                s.failed += 1;
                s.failed_seeds.push(trial);
                TrialStatus::Failed
            };
            let failures = report
                .containment_failures
                .iter()
                .chain(&report.sign_type_failures)
                .chain(&report.resolvent_check_failures)
                .cloned()
                .collect();
            s.details.push(TrialSummary {
                index,
                seed: trial,
                dim,
                status,
                nonreal_count: report.nonreal_count,
                bounds: report.bounds,
                failures,
                reason: None,
            });
        }
        Ok(s)
    }
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::invalid("trials", "must be >= 1"));
    }
    Ok(())
}

/// Runs the block-operator check over `trials` generated instances in the current
/// rayon pool; the result does not depend on the pool size.
pub fn run_block_suite(
    params: &BlockGenParams,
    opts: &BlockVerifyOptions,
    seed: u64,
    trials: usize,
) -> Result<SuiteReport> {
    check_trials(trials)?;
    params.validate()?;
    opts.validate()?;
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = trial_seed(seed, i as u64);
            match generate_block(params, s) {
                Ok(b) => {
                    let (np, nm) = b.dims();
                    (i, s, np + nm, verify_block_enclosure(&b, opts, s))
                }
                Err(e) => (i, s, 0, Err(e)),
            }
        })
        .collect();
    SuiteReport::collect(seed, outcomes)
}

/// Runs the perturbation check over `trials` generated problems.
pub fn run_krein_suite(
    params: &KreinGenParams,
    opts: &TmainOptions,
    seed: u64,
    trials: usize,
) -> Result<SuiteReport> {
    check_trials(trials)?;
    params.validate()?;
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = trial_seed(seed, i as u64);
            match generate_krein(params, s) {
                Ok(p) => {
                    let dim = p.dim();
                    (i, s, dim, verify_tmain(&p, opts).map(|o| o.report))
                }
                Err(e) => (i, s, 0, Err(e)),
            }
        })
        .collect();
    SuiteReport::collect(seed, outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_distinct_and_stable() {
        let seeds: Vec<u64> = (0..1000).map(|i| trial_seed(42, i)).collect();
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), seeds.len());
        assert_eq!(trial_seed(42, 7), seeds[7]);
        assert_ne!(trial_seed(42, 0), trial_seed(43, 0));
    }

    #[test]
    fn block_suite_independent_of_pool_size() {
        let p = BlockGenParams {
            max_dim: 8,
            ..BlockGenParams::default()
        };
        let o = BlockVerifyOptions {
            lambda_samples: 50,
            b_steps: 20,
            ..BlockVerifyOptions::default()
        };
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| run_block_suite(&p, &o, 9, 12)).unwrap();
        let b = four.install(|| run_block_suite(&p, &o, 9, 12)).unwrap();
        assert_eq!(a, b);
        assert!(a.passed(), "{:?}", a.failed_seeds);
        assert_eq!(a.verified + a.rejected, 12);
    }

    #[test]
    fn krein_suite_passes_small() {
        let p = KreinGenParams {
            max_dim: 8,
            ..KreinGenParams::default()
        };
        let o = TmainOptions {
            b_steps: 20,
            ..TmainOptions::default()
        };
        let s = run_krein_suite(&p, &o, 5, 8).unwrap();
        assert!(s.passed(), "{:?}", s.details);
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(run_block_suite(&BlockGenParams::default(), &BlockVerifyOptions::default(), 0, 0).is_err());
    }
}
