//! Numerical laboratory for Fourier frames on surface-carried measures.
//!
//! The crate is organised the way the experiments flow:
//!
//! * [`geometry`]: convex bodies, support functions, box facets and their
//!   translate classes.
//! * [`measure`]: quadrature surface measures, their Fourier transforms and
//!   the leading stationary-phase term for round spheres.
//! * [`frame`]: frame/Bessel bound estimation for a (measure, spectrum) pair
//!   and the certified Bessel constant for separated sets.
//! * [`polytope`]: the explicit frame spectrum for polytope boundaries.
//! * [`obstruction`]: the summability dichotomy that rules out frames on
//!   positively curved surfaces.
//! * [`eigenbasis`]: group-averaged spherical-harmonic bases on a fundamental
//!   domain of S², plus the flat-torus analogue.
//! * [`harness`]: JSON-configured experiment recipes and parameter sweeps.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod eigenbasis;
pub mod error;
pub mod frame;
pub mod geometry;
pub mod harness;
pub mod linalg;
pub mod measure;
pub mod obstruction;
pub mod polytope;
pub mod quadrature;

pub use error::{Error, Result, Warning};

/// Version string embedded in every report.
pub const VERSION: &str = concat!("surfframe-core ", env!("CARGO_PKG_VERSION"));
