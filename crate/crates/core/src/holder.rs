//! Admissible Hölder exponents for maps `f : S_{p,q} → S_{r,s}`.
//!
//! Two upper bounds are available. The box-dimension bound compares
//! `dim_B` of source and target. The profile bound uses the `2α`-dimension
//! profile of the source, accessed through fractional Brownian images, and is
//! strictly better whenever the box bound says anything at all and `p < 1`.
//!
//! The Assouad-spectrum argument used for the line-to-spiral winding problem
//! gives nothing for spiral-to-spiral maps; [`assouad_spectrum_bound`] exists
//! only to make that explicit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SpiralParams;

/// Source `S_{p,q}` and target `S_{r,s}` of a deformation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformationPair {
    pub source: SpiralParams,
    pub target: SpiralParams,
}

impl DeformationPair {
    pub fn new(p: f64, q: f64, r: f64, s: f64) -> Result<Self> {
        Ok(Self {
            source: SpiralParams::new(p, q)?,
            target: SpiralParams::new(r, s)?,
        })
    }
}

/// A bound on α, clamped to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClampedBound {
    /// `min(raw, 1)`.
    pub value: f64,
    /// The formula value before clamping.
    pub raw: f64,
    pub clamped: bool,
}

impl ClampedBound {
    fn from_raw(raw: f64) -> Self {
        Self {
            value: raw.min(1.0),
            raw,
            clamped: raw > 1.0,
        }
    }

    /// Below 1, i.e. the bound actually restricts α.
    pub fn is_nontrivial(&self) -> bool {
        self.raw < 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Binding {
    /// The box-dimension bound is the smallest nontrivial bound.
    Box,
    /// The dimension-profile bound is the smallest nontrivial bound.
    Profile,
    /// Every applicable bound is at least 1.
    None,
}

impl Binding {
    pub fn as_str(self) -> &'static str {
        match self {
            Binding::Box => "box",
            Binding::Profile => "profile",
            Binding::None => "none",
        }
    }
}

/// All applicable bounds for one pair, and the best of them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderBoundReport {
    pub pair: DeformationPair,
    /// `None` when the target has `r > 1`.
    pub box_bound: Option<ClampedBound>,
    /// `None` when `p > 1` or `r > 1`.
    pub profile_bound: Option<ClampedBound>,
    pub best: f64,
    pub binding: Binding,
}

/// `α <= (2+q-p)(1+s) / ((2+s-r)(1+q))` for `p <= 1`, or
/// `α <= (1+s)/(2+s-r)` for `p > 1`. Requires `r <= 1`.
pub fn box_dim_bound(pair: &DeformationPair) -> Result<ClampedBound> {
    let (p, q) = (pair.source.p(), pair.source.q());
    let (r, s) = (pair.target.p(), pair.target.q());
    if r > 1.0 {
        return Err(Error::Domain(format!(
            "box bound needs r <= 1 (target box dimension is 1 otherwise), got r = {r}"
        )));
    }
    let raw = if p <= 1.0 {
        (2.0 + q - p) * (1.0 + s) / ((2.0 + s - r) * (1.0 + q))
    } else {
        (1.0 + s) / (2.0 + s - r)
    };
    Ok(ClampedBound::from_raw(raw))
}

/// `α <= (p + q + r + s - pr + qs) / ((2 + s - r)(p + q))`, for `p, r <= 1`.
pub fn profile_bound(pair: &DeformationPair) -> Result<ClampedBound> {
    let (p, q) = (pair.source.p(), pair.source.q());
    let (r, s) = (pair.target.p(), pair.target.q());
    if p > 1.0 || r > 1.0 {
        return Err(Error::Domain(format!(
            "profile bound needs p, r <= 1, got p = {p}, r = {r}"
        )));
    }
    let raw = (p + q + r + s - p * r + q * s) / ((2.0 + s - r) * (p + q));
    Ok(ClampedBound::from_raw(raw))
}

/// Hyperbolic case `S_p → S_q` with `p > q`, `p <= 1`: `α <= (p + q)/(2p)`.
pub fn hyperbolic_bound(p: f64, q: f64) -> Result<f64> {
    if !(q > 0.0 && p > q) {
        return Err(Error::Domain(format!(
            "hyperbolic bound needs p > q > 0, got p = {p}, q = {q}"
        )));
    }
    if p > 1.0 {
        return Err(Error::Domain(format!("hyperbolic bound needs p <= 1, got p = {p}")));
    }
    Ok((p + q) / (2.0 * p))
}

/// Always `None`: the Assouad-spectrum Hölder estimate carries no information
/// for maps between two spirals.
pub fn assouad_spectrum_bound(_pair: &DeformationPair) -> Option<f64> {
    None
}

/// Evaluates every applicable bound and reports the smallest nontrivial one.
pub fn best_bound(pair: &DeformationPair) -> HolderBoundReport {
    let box_bound = box_dim_bound(pair).ok();
    let profile_bound = profile_bound(pair).ok();
    let mut best = 1.0;
    let mut binding = Binding::None;
    for (b, tag) in [(box_bound, Binding::Box), (profile_bound, Binding::Profile)] {
        if let Some(b) = b {
            if b.is_nontrivial() && b.value < best {
                best = b.value;
                binding = tag;
            }
        }
    }
    HolderBoundReport {
        pair: *pair,
        box_bound,
        profile_bound,
        best,
        binding,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(p: f64, q: f64, r: f64, s: f64) -> DeformationPair {
        DeformationPair::new(p, q, r, s).unwrap()
    }

    const TOL: f64 = 1e-12;

    #[test]
    fn box_examples() {
        let b = box_dim_bound(&pair(0.4, 0.7, 0.2, 0.3)).unwrap();
        assert!((b.value - 2.99 / 3.57).abs() < TOL);
        assert!((b.value - 0.83754).abs() < 1e-5);
        let b = box_dim_bound(&pair(1.5, 2.0, 0.5, 0.5)).unwrap();
        assert!((b.value - 0.75).abs() < TOL);
        let b = box_dim_bound(&pair(0.6, 0.9, 0.6, 0.9)).unwrap();
        assert!((b.raw - 1.0).abs() < TOL);
        assert!(box_dim_bound(&pair(0.5, 0.5, 1.2, 1.3)).is_err());
    }

    #[test]
    fn profile_examples() {
        let b = profile_bound(&pair(0.5, 0.5, 0.25, 0.25)).unwrap();
        assert!((b.value - 0.75).abs() < TOL);
        let b = profile_bound(&pair(0.4, 0.7, 0.2, 0.3)).unwrap();
        assert!((b.value - 1.73 / 2.31).abs() < TOL);
        assert!(b.value < box_dim_bound(&pair(0.4, 0.7, 0.2, 0.3)).unwrap().value);
        assert!(profile_bound(&pair(1.5, 2.0, 0.5, 0.5)).is_err());
    }

    #[test]
    fn hyperbolic_examples() {
        assert!((hyperbolic_bound(1.0, 1.0 - 1e-12).unwrap() - 1.0).abs() < 1e-12);
        assert!((hyperbolic_bound(0.5, 0.25).unwrap() - 0.75).abs() < TOL);
        assert!((hyperbolic_bound(0.8, 0.2).unwrap() - 0.625).abs() < TOL);
        assert!(hyperbolic_bound(0.5, 0.5).is_err());
        assert!(hyperbolic_bound(1.5, 0.5).is_err());
    }

    #[test]
    fn hyperbolic_is_profile_on_the_diagonal() {
        for &(p, q) in &[(0.5, 0.25), (0.8, 0.2), (0.9, 0.85), (1.0, 0.1)] {
            let h = hyperbolic_bound(p, q).unwrap();
            let b = profile_bound(&pair(p, p, q, q)).unwrap().raw;
            assert!((h - b).abs() < 1e-14);
        }
    }

    #[test]
    fn best_bound_examples() {
        let r = best_bound(&pair(0.4, 0.7, 0.2, 0.3));
        assert!((r.best - 1.73 / 2.31).abs() < TOL);
        assert_eq!(r.binding, Binding::Profile);

        let r = best_bound(&pair(0.1, 0.1, 0.9, 0.9));
        assert!(r.box_bound.unwrap().clamped);
        assert_eq!(r.binding, Binding::None);
        assert_eq!(r.best, 1.0);

        let r = best_bound(&pair(1.5, 2.0, 0.5, 0.5));
        assert!((r.best - 0.75).abs() < TOL);
        assert_eq!(r.binding, Binding::Box);
        assert!(r.profile_bound.is_none());
    }

    #[test]
    fn identity_pairs_give_one() {
        for &(p, q) in &[(0.2, 0.3), (0.5, 0.5), (0.9, 1.4), (1.0, 1.0)] {
            let pr = pair(p, q, p, q);
            assert!((box_dim_bound(&pr).unwrap().raw - 1.0).abs() < 1e-12);
            assert!((profile_bound(&pr).unwrap().raw - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn spectrum_bound_is_a_no_op() {
        assert_eq!(assouad_spectrum_bound(&pair(0.4, 0.7, 0.2, 0.3)), None);
    }
}
