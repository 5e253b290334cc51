//! Spectral enclosures for J-self-adjoint operators.
//!
//! The crate is organised around four areas:
//!
//! * [`geometry`]: closed-form enclosure regions (disk unions over a spectrum,
//!   the hyperbolic hull, the bone-shaped compact sets) together with the
//!   profile function `(a + b t²)/|t - λ|²` and its extrema.
//! * [`lab`]: finite-dimensional verification of the enclosure theorems for
//!   diagonally dominant block operator matrices and for relatively bounded
//!   perturbations of J-non-negative matrices.
//! * [`sl`]: the indefinite Sturm-Liouville application `sgn·(-d²/dx² + q)`,
//!   its explicit rectangle, a competing enclosure, finite-difference
//!   discretization and the quadrature-based estimates behind `τ₀`.
//! * [`io`]: configuration loading and deterministic report serialization.

pub mod error;
pub mod geometry;
pub mod io;
pub mod lab;
pub mod linalg;
pub mod quad;
pub mod sl;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// A point of the complex spectral plane.
pub type ComplexPoint = Complex64;

/// Version string recorded in every persisted run.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
