//! The indefinite Sturm-Liouville application.

pub mod constants;
pub mod containment;
pub mod discretize;
pub mod product_bound;
pub mod potential;
pub mod tau0;
pub mod tridiag;

pub use constants::{
    bst_constants, bst_region, improved_re_bound, s_p, sl_box, sl_constants, BstConstants, BstRegion, SlConstants,
    TAU_SL,
};
pub use containment::{containment_report, SlEigenRow, SlOptions, SlRun};
pub use discretize::SlDiscretization;
pub use product_bound::{product_bound_check, HermiteFunction, ProductBoundCheck};
pub use potential::Potential;
pub use tau0::{tau0_hilbert_form, Tau0Estimate, Tau0Probe};
