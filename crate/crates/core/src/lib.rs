//! Dimension theory of elliptical polynomial spirals
//! `S_{p,q} = { t^-p cos t + i t^-q sin t : t >= 2π }`.
//!
//! The crate has two halves. [`formulas`] and [`holder`] evaluate the
//! closed-form intermediate, box and Assouad-type dimensions and the Hölder
//! exponent bounds that follow from them. [`covering`] and [`fbm`] build
//! explicit covers, measures and fractional Brownian images of the spiral so
//! that those closed forms can be checked numerically.

// `!(x > 0.0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod covering;
pub mod error;
pub mod fbm;
pub mod formulas;
pub mod geometry;
pub mod holder;
pub mod quad;
pub mod stats;

pub use error::{Error, Result};
pub use formulas::{Branch, DimensionValue, HolderExponent, Theta};
pub use geometry::{PlanePoint, SampledArc, SpiralParams, TurnIndex};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
