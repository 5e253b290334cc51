//! Finite-dimensional verification harnesses.

pub mod block;
pub mod eig;
pub mod generate;
pub mod krein;
pub mod report;
pub mod resolvent;
pub mod suite;
pub mod verify;

pub use block::{assemble_block, BlockOperator, BlockOperatorSpec};
pub use generate::{generate_block, generate_krein, BlockGenParams, KreinGenParams};
pub use krein::{
    bounded_v_reduction, j0_consistency, j0_quadrature, renorm_check, spectral_projections, verify_tmain, KreinPerturbationProblem,
    KreinProblemSpec, ProjectionData, TauChoice, TmainOptions, TmainOutcome,
};
pub use report::VerificationReport;
pub use resolvent::{
    k_set_membership, min_relative_bound, resolvent_factor_norm, resolvent_order_check, ResolventFactor,
};
pub use suite::{run_block_suite, run_krein_suite, trial_seed, SuiteReport, TrialStatus, TrialSummary};
pub use verify::{verify_block_enclosure, BlockVerifyOptions};
