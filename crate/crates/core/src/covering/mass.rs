//! The measure `μ_δ = δ^{s-1} Σ_{k<=M} H¹|_{S^k}` and a randomized check of
//! `μ_δ(U) <= C|U|^s` over windows with `δ <= |U| <= δ^θ`.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{intermediate_dimension, Theta};
use crate::geometry::{PlanePoint, SpiralParams};
use crate::stats::linear_fit;

/// Largest slope of `ln(worst ratio)` against `ln δ` treated as bounded.
pub const MASS_SLOPE_TOL: f64 = 0.1;

/// Sub-arc of a turn on which both coordinates are monotone.
#[derive(Debug, Clone, Copy)]
struct MonotonePiece {
    t0: f64,
    t1: f64,
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
}

#[derive(Debug, Clone)]
pub struct MassDistribution {
    params: SpiralParams,
    pub delta: f64,
    pub s: f64,
    pub cutoff: u64,
    /// `δ^{s-1} H¹(S^k)` for `k = 1..=cutoff`.
    pub weights: Vec<f64>,
    density: f64,
    pieces: Vec<MonotonePiece>,
}

/// Solves `t = base + g(t)` for a contraction `g` starting at `base`.
fn fixed_point(base: f64, g: impl Fn(f64) -> f64) -> f64 {
    let mut t = base;
    for _ in 0..100 {
        let next = base + g(t);
        if (next - t).abs() <= 1e-15 * next {
            return next;
        }
        t = next;
    }
    t
}

/// Critical points of `x(t)` and `y(t)` in the open turn `(2πk, 2π(k+1))`.
fn turn_breakpoints(params: &SpiralParams, k: u64) -> Vec<f64> {
    let (p, q) = (params.p(), params.q());
    let (a, b) = (TAU * k as f64, TAU * (k + 1) as f64);
    let mut out = Vec::with_capacity(4);
    for n in 2 * k - 1..=2 * k + 2 {
        let base = n as f64 * PI;
        // x' = 0 where tan t = -p/t; y' = 0 where tan t = t/q.
        out.push(fixed_point(base, |t| -(p / t).atan()));
        out.push(fixed_point(base, |t| (t / q).atan()));
    }
    out.retain(|&t| t > a && t < b);
    out.sort_by(f64::total_cmp);
    out
}

/// Parameter subinterval of `[a, b]` where the monotone `f` lies in
/// `[lo, hi]`.
fn level_interval(f: impl Fn(f64) -> f64, a: f64, b: f64, lo: f64, hi: f64) -> Option<(f64, f64)> {
    let (fa, fb) = (f(a), f(b));
    let increasing = fb >= fa;
    let (fmin, fmax) = if increasing { (fa, fb) } else { (fb, fa) };
    if fmax < lo || fmin > hi {
        return None;
    }
    // First parameter where f reaches `level` going in direction of growth.
    let cross = |level: f64| {
        let (mut l, mut r) = (a, b);
        for _ in 0..64 {
            let m = 0.5 * (l + r);
            if (f(m) < level) == increasing {
                l = m;
            } else {
                r = m;
            }
        }
        0.5 * (l + r)
    };
    let u = if fmin >= lo {
        if increasing {
            a
        } else {
            b
        }
    } else {
        cross(lo)
    };
    let v = if fmax <= hi {
        if increasing {
            b
        } else {
            a
        }
    } else {
        cross(hi)
    };
    Some(if u <= v { (u, v) } else { (v, u) })
}

impl MassDistribution {
    /// Builds `μ_δ` with `s = dim_θ S` and `M` the smallest integer with
    /// `M >= exp(t(s - 1 + θ(2-s))/(1+q))`, `t = -ln δ`.
    pub fn new(params: &SpiralParams, theta: Theta, delta: f64) -> Result<Self> {
        if !params.p_below_one() {
            return Err(Error::Domain(format!(
                "mass distribution needs p < 1, got p = {}",
                params.p()
            )));
        }
        let th = theta.get();
        if th <= 0.0 {
            return Err(Error::Domain("theta must be positive".into()));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::Domain(format!("delta = {delta} outside (0, 1)")));
        }
        let s = intermediate_dimension(params, theta).value;
        let x = -delta.ln() * (s - 1.0 + th * (2.0 - s)) / (1.0 + params.q());
        let m = x.exp().ceil();
        if !(m <= 1e7) {
            return Err(Error::Budget {
                needed: if m.is_finite() { m as u64 } else { u64::MAX },
                budget: 10_000_000,
            });
        }
        let cutoff = (m as u64).max(1);
        let density = delta.powf(s - 1.0);
        let weights: Vec<f64> = (1..=cutoff)
            .into_par_iter()
            .map(|k| density * params.arc_length(TAU * k as f64, TAU * (k + 1) as f64))
            .collect();
        let pieces = (1..=cutoff)
            .into_par_iter()
            .flat_map_iter(|k| {
                let mut cuts = vec![TAU * k as f64];
                cuts.extend(turn_breakpoints(params, k));
                cuts.push(TAU * (k + 1) as f64);
                let params = *params;
                (0..cuts.len() - 1)
                    .map(move |i| {
                        let (t0, t1) = (cuts[i], cuts[i + 1]);
                        let (a, b) = (params.eval(t0), params.eval(t1));
                        MonotonePiece {
                            t0,
                            t1,
                            xmin: a.x.min(b.x),
                            xmax: a.x.max(b.x),
                            ymin: a.y.min(b.y),
                            ymax: a.y.max(b.y),
                        }
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        Ok(Self {
            params: *params,
            delta,
            s,
            cutoff,
            weights,
            density,
            pieces,
        })
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `μ_δ` of the closed axis-parallel square with the given centre and side.
    pub fn mass_in_square(&self, center: PlanePoint, side: f64) -> f64 {
        let h = 0.5 * side;
        let (x0, x1, y0, y1) = (center.x - h, center.x + h, center.y - h, center.y + h);
        let params = &self.params;
        let mut length = 0.0;
        for pc in &self.pieces {
            if pc.xmax < x0 || pc.xmin > x1 || pc.ymax < y0 || pc.ymin > y1 {
                continue;
            }
            let Some((ax, bx)) = level_interval(|t| params.eval(t).x, pc.t0, pc.t1, x0, x1) else {
                continue;
            };
            let Some((ay, by)) = level_interval(|t| params.eval(t).y, pc.t0, pc.t1, y0, y1) else {
                continue;
            };
            let (u, v) = (ax.max(ay), bx.min(by));
            if u < v {
                length += params.arc_length(u, v);
            }
        }
        self.density * length
    }

    /// Bounding box half-widths of the support.
    fn support_half_widths(&self) -> (f64, f64) {
        (TAU.powf(-self.params.p()), TAU.powf(-self.params.q()))
    }
}

/// A square window, reported by its centre and diameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SquareWindow {
    pub cx: f64,
    pub cy: f64,
    pub diameter: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassCheckReport {
    pub delta: f64,
    pub s: f64,
    pub cutoff: u64,
    pub total_mass: f64,
    pub trials: u64,
    pub seed: u64,
    /// Largest `μ_δ(U)/|U|^s` seen.
    pub worst_ratio: f64,
    pub worst_window: SquareWindow,
}

/// Random windows: diameter log-uniform in `[δ, δ^θ]`, centre uniform in
/// the bounding box of the support.
fn random_windows(m: &MassDistribution, theta: f64, trials: u64, seed: u64) -> Vec<SquareWindow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (ax, ay) = m.support_half_widths();
    let (lmin, lmax) = (m.delta.ln(), theta * m.delta.ln());
    (0..trials)
        .map(|_| {
            let ld: f64 = if lmax > lmin {
                rng.random_range(lmin..=lmax)
            } else {
                lmin
            };
            SquareWindow {
                cx: rng.random_range(-ax..=ax),
                cy: rng.random_range(-ay..=ay),
                diameter: ld.exp(),
            }
        })
        .collect()
}

pub fn mass_distribution_check(
    params: &SpiralParams,
    theta: Theta,
    delta: f64,
    trials: u64,
    seed: u64,
) -> Result<MassCheckReport> {
    if trials == 0 {
        return Err(Error::Precondition("need at least one trial".into()));
    }
    let m = MassDistribution::new(params, theta, delta)?;
    let windows = random_windows(&m, theta.get(), trials, seed);
    let ratios: Vec<f64> = windows
        .par_iter()
        .map(|w| {
            let side = w.diameter / std::f64::consts::SQRT_2;
            m.mass_in_square(PlanePoint::new(w.cx, w.cy), side) / w.diameter.powf(m.s)
        })
        .collect();
    let (i, worst) =
        ratios.iter().copied().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, r)| if r > acc.1 { (i, r) } else { acc },
        );
    Ok(MassCheckReport {
        delta,
        s: m.s,
        cutoff: m.cutoff,
        total_mass: m.total_mass(),
        trials,
        seed,
        worst_ratio: worst,
        worst_window: windows[i],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassLadderReport {
    pub reports: Vec<MassCheckReport>,
    /// Slope of `ln(worst ratio)` against `ln δ`.
    pub ratio_slope: f64,
    /// `max/min - 1` of the total mass along the ladder.
    pub mass_spread: f64,
}

/// Runs [`mass_distribution_check`] along a ladder and fails with
/// [`Error::MassViolation`] if the worst ratio trends with `δ`.
pub fn mass_distribution_ladder(
    params: &SpiralParams,
    theta: Theta,
    ladder: &[f64],
    trials: u64,
    seed: u64,
) -> Result<MassLadderReport> {
    if ladder.len() < 2 {
        return Err(Error::Precondition("mass ladder needs at least two scales".into()));
    }
    let reports = ladder
        .iter()
        .map(|&d| mass_distribution_check(params, theta, d, trials, seed))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = reports.iter().map(|r| r.delta.ln()).collect();
    let ys: Vec<f64> = reports.iter().map(|r| r.worst_ratio.ln()).collect();
    let fit = linear_fit(&xs, &ys).ok_or_else(|| Error::Numerical("degenerate mass ladder".into()))?;
    let masses = reports.iter().map(|r| r.total_mass);
    let (lo, hi) = masses.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if fit.slope.abs() > MASS_SLOPE_TOL {
        let worst = reports
            .iter()
            .max_by(|a, b| a.worst_ratio.total_cmp(&b.worst_ratio))
            .expect("non-empty ladder");
        return Err(Error::MassViolation {
            slope: fit.slope,
            delta: worst.delta,
            cx: worst.worst_window.cx,
            cy: worst.worst_window.cy,
            diameter: worst.worst_window.diameter,
        });
    }
    Ok(MassLadderReport {
        reports,
        ratio_slope: fit.slope,
        mass_spread: hi / lo - 1.0,
    })
}
