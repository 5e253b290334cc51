//! Enclosure regions in the spectral plane.

mod bound;
mod boundary;
mod region;
mod spectrum;

pub use bound::{
    hull_height_sq, hull_membership, hull_tangency, phi, phi_extrema, prior_hull_height_sq,
    prior_hull_membership, smallerb_threshold, PhiBranch, PhiProfile, RelBound, MAX_B,
};
pub use boundary::{boundary_polyline, polyline_csv, Region, SlBox};
pub use region::{better_threshold, tmain_regions, DiskFamilyRegion, Membership, TmainRegions};
pub use spectrum::{sup_resolvent_factor_bound, Interval, SpectrumModel};
