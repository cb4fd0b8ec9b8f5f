//! Two-scale covers for the θ-intermediate dimension.
//!
//! Turns `1..=M` are cut into arcs of length `δ^{1/α}`; everything after turn
//! `M` lies in `[-M^-p, M^-p] × [-M^-q, M^-q]`, whose image under an
//! α-Hölder map is tiled by squares of diameter `δ^θ`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ladder::{check_ladder, geometric_ladder};
use crate::error::{Error, Result};
use crate::formulas::{HolderExponent, Theta};
use crate::geometry::SpiralParams;
use crate::stats::{linear_fit, LinearFit};

/// Largest cutoff a two-scale cover may use.
pub const MAX_CUTOFF: u64 = 50_000_000;

/// Lengths of turns `1..=n`, computed once and reused across scales.
#[derive(Debug, Clone)]
pub struct TurnLengthTable {
    params: SpiralParams,
    lengths: Vec<f64>,
}

impl TurnLengthTable {
    pub fn new(params: SpiralParams) -> Self {
        Self {
            params,
            lengths: Vec::new(),
        }
    }

    pub fn params(&self) -> &SpiralParams {
        &self.params
    }

    pub fn extend_to(&mut self, n: u64) -> Result<()> {
        if n > MAX_CUTOFF {
            return Err(Error::Budget {
                needed: n,
                budget: MAX_CUTOFF,
            });
        }
        let have = self.lengths.len() as u64;
        if n > have {
            let params = self.params;
            let extra: Vec<f64> = (have + 1..=n)
                .into_par_iter()
                .map(|k| {
                    let t0 = std::f64::consts::TAU * k as f64;
                    params.arc_length(t0, t0 + std::f64::consts::TAU)
                })
                .collect();
            self.lengths.extend(extra);
        }
        Ok(())
    }

    /// Length of turn `k`; requires `1 <= k <= len`.
    pub fn get(&self, k: u64) -> f64 {
        self.lengths[(k - 1) as usize]
    }

    pub fn len(&self) -> u64 {
        self.lengths.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub(crate) fn lengths(&self, n: u64) -> &[f64] {
        &self.lengths[..n as usize]
    }
}

/// A two-scale cover at scale `δ`, designed for exponent `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoScaleCover {
    pub theta: f64,
    pub delta: f64,
    pub alpha: f64,
    /// Exponent used to choose the cutoff.
    pub design_s: f64,
    /// Last turn covered piece by piece.
    pub cutoff: u64,
    /// Sets of diameter `δ` covering turns `1..=cutoff`.
    pub fine_boxes: u64,
    /// Sets of diameter `δ^θ` covering the rectangle past the cutoff.
    pub coarse_boxes: u64,
}

impl TwoScaleCover {
    /// `Σ |U_i|^s` over the cover.
    pub fn s_cost(&self, s: f64) -> f64 {
        self.fine_boxes as f64 * self.delta.powf(s) + self.coarse_boxes as f64 * self.delta.powf(self.theta * s)
    }
}

/// Smallest integer `M >= 1` with
/// `M >= exp(t(s - 1/α + θ(2-s)) / (1 - p + α(p+q)))`, `t = -ln δ`.
pub fn cutoff(params: &SpiralParams, theta: f64, delta: f64, s: f64, alpha: f64) -> Result<u64> {
    let (p, q) = (params.p(), params.q());
    let t = -delta.ln();
    let x = t * (s - 1.0 / alpha + theta * (2.0 - s)) / (1.0 - p + alpha * (p + q));
    let m = x.exp().ceil();
    if !(m <= MAX_CUTOFF as f64) {
        return Err(Error::Budget {
            needed: if m.is_finite() { m as u64 } else { u64::MAX },
            budget: MAX_CUTOFF,
        });
    }
    Ok((m as u64).max(1))
}

fn check_cover_inputs(theta: f64, delta: f64, s: f64, alpha: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::Domain(format!("theta = {theta} outside (0, 1]")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta = {delta} outside (0, 1)")));
    }
    if !(0.0..=2.0).contains(&s) {
        return Err(Error::Domain(format!("s = {s} outside [0, 2]")));
    }
    if alpha <= 0.5 {
        return Err(Error::Domain(format!(
            "alpha = {alpha} <= 1/2: the two-scale cover degenerates and the bound is 2"
        )));
    }
    Ok(())
}

pub fn two_scale_cover(
    params: &SpiralParams,
    theta: Theta,
    delta: f64,
    s: f64,
    alpha: HolderExponent,
) -> Result<TwoScaleCover> {
    let mut table = TurnLengthTable::new(*params);
    two_scale_cover_with(&mut table, theta.get(), delta, s, alpha.get())
}

/// As [`two_scale_cover`], reusing (and extending) a turn-length table.
pub fn two_scale_cover_with(
    table: &mut TurnLengthTable,
    theta: f64,
    delta: f64,
    s: f64,
    alpha: f64,
) -> Result<TwoScaleCover> {
    check_cover_inputs(theta, delta, s, alpha)?;
    let params = *table.params();
    let m = cutoff(&params, theta, delta, s, alpha)?;
    table.extend_to(m)?;
    let piece = delta.powf(1.0 / alpha);
    let fine_boxes = table.lengths(m).iter().map(|&l| (l / piece).ceil() as u64).sum();
    let side = delta.powf(theta) / std::f64::consts::SQRT_2;
    let a = (m as f64).powf(-params.p() * alpha);
    let b = (m as f64).powf(-params.q() * alpha);
    let coarse_boxes = (2.0 * a / side).ceil() as u64 * (2.0 * b / side).ceil() as u64;
    Ok(TwoScaleCover {
        theta,
        delta,
        alpha,
        design_s: s,
        cutoff: m,
        fine_boxes,
        coarse_boxes,
    })
}

/// Outcome of the critical-exponent search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntermediateEstimate {
    pub theta: f64,
    /// Midpoint of the final bracket.
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub iterations: u32,
}

/// Bisection tolerance on `s`.
pub const BISECTION_TOL: f64 = 1e-3;

/// Fits whose slope is at least this steep must have `r² >= 0.99`.
const FLAT_SLOPE: f64 = 0.2;
const MIN_R2: f64 = 0.99;

/// Scales from `2^-8` to `2^-30`, 12 levels.
pub fn default_intermediate_ladder() -> Vec<f64> {
    geometric_ladder(2f64.powi(-8), 2f64.powi(-30), 12).expect("valid constant ladder")
}

/// Growth exponent of `Σ|U_i|^s` along the ladder, each cover designed for
/// `s` itself. Negative means the cost decays.
pub fn cost_exponent(table: &mut TurnLengthTable, theta: f64, ladder: &[f64], s: f64) -> Result<LinearFit> {
    let mut xs = Vec::with_capacity(ladder.len());
    let mut ys = Vec::with_capacity(ladder.len());
    for &delta in ladder {
        let c = two_scale_cover_with(table, theta, delta, s, 1.0)?;
        xs.push(-delta.ln());
        ys.push(c.s_cost(s).ln());
    }
    linear_fit(&xs, &ys).ok_or_else(|| Error::Numerical("degenerate cost regression".into()))
}

/// Critical `s` at which the two-scale cost stops decaying, located by
/// bisection on `[0, 2]`.
pub fn estimate_intermediate_dimension(
    params: &SpiralParams,
    theta: Theta,
    ladder: &[f64],
) -> Result<IntermediateEstimate> {
    check_ladder(ladder, 4)?;
    let th = theta.get();
    if th <= 0.0 {
        return Err(Error::Domain("theta must be positive".into()));
    }
    let mut table = TurnLengthTable::new(*params);
    let mut exponent = |s: f64| -> Result<f64> {
        let fit = cost_exponent(&mut table, th, ladder, s)?;
        if fit.slope.abs() >= FLAT_SLOPE && fit.r_squared < MIN_R2 {
            return Err(Error::Convergence(format!(
                "cost regression at s = {s} has r² = {:.4} < {MIN_R2}",
                fit.r_squared
            )));
        }
        Ok(fit.slope)
    };
    let (mut lo, mut hi) = (0.0, 2.0);
    let (mut e_lo, mut e_hi) = (exponent(lo)?, exponent(hi)?);
    if !(e_lo > 0.0 && e_hi < 0.0) {
        return Err(Error::Convergence(format!(
            "cost exponent does not change sign on [0, 2] ({e_lo:.4} at 0, {e_hi:.4} at 2)"
        )));
    }
    let mut iterations = 0;
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        let e = exponent(mid)?;
        if e > e_lo + 1e-9 || e < e_hi - 1e-9 {
            return Err(Error::Convergence(format!(
                "cost exponent is not monotone in s near s = {mid:.4}"
            )));
        }
        if e > 0.0 {
            lo = mid;
            e_lo = e;
        } else {
            hi = mid;
            e_hi = e;
        }
        iterations += 1;
    }
    Ok(IntermediateEstimate {
        theta: th,
        value: 0.5 * (lo + hi),
        lower: lo,
        upper: hi,
        iterations,
    })
}
