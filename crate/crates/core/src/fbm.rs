//! Index-α fractional Brownian motion `B_α : R² → R²` sampled exactly at a
//! finite set of sites, and box counts of fBm images of the spiral.
//!
//! Each coordinate of `B_α` is an independent scalar field with
//! `Cov(B(x), B(y)) = (|x|^{2α} + |y|^{2α} - |x-y|^{2α}) / 2`, so `B(0) = 0`
//! and `E|B(x) - B(y)|² = |x-y|^{2α}` per component.

use std::f64::consts::TAU;
use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::covering::{box_ladder, geometric_ladder, CoverLadder, CoverOptions, Grid, LadderEntry};
use crate::error::{Error, Result};
use crate::formulas::{holder_image_box_bound, HolderExponent, Theta};
use crate::geometry::{PlanePoint, SpiralParams};
use crate::stats::mean;

/// Default cap on the number of sites; factorization cost is cubic.
pub const DEFAULT_SITE_LIMIT: usize = 4000;

/// Relative diagonal jitter applied when the plain factorization fails.
const JITTER: f64 = 1e-10;

/// Cholesky factor of the fBm covariance at a fixed set of sites.
#[derive(Debug, Clone)]
pub struct FbmSampler {
    alpha: f64,
    sites: Vec<PlanePoint>,
    /// Indices of the sites away from the origin, in factor order.
    active: Vec<usize>,
    factor: DMatrix<f64>,
    jitter: f64,
}

impl FbmSampler {
    pub fn new(sites: Vec<PlanePoint>, alpha: f64) -> Result<Self> {
        Self::with_limit(sites, alpha, DEFAULT_SITE_LIMIT)
    }

    pub fn with_limit(sites: Vec<PlanePoint>, alpha: f64, limit: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!("fBm index must lie in (0, 1), got {alpha}")));
        }
        if sites.len() > limit {
            return Err(Error::Budget {
                needed: sites.len() as u64,
                budget: limit as u64,
            });
        }
        let active: Vec<usize> = (0..sites.len()).filter(|&i| sites[i].norm() > 0.0).collect();
        let n = active.len();
        let h2 = 2.0 * alpha;
        let norms: Vec<f64> = active.iter().map(|&i| sites[i].norm().powf(h2)).collect();
        let cov = DMatrix::from_fn(n, n, |i, j| {
            let d = sites[active[i]].dist(&sites[active[j]]);
            0.5 * (norms[i] + norms[j] - d.powf(h2))
        });
        let (factor, jitter) = match cov.clone().cholesky() {
            Some(c) => (c.l(), 0.0),
            None => {
                let jitter = JITTER * cov.trace() / n.max(1) as f64;
                let mut cov = cov;
                for i in 0..n {
                    cov[(i, i)] += jitter;
                }
                match cov.cholesky() {
                    Some(c) => (c.l(), jitter),
                    None => {
                        return Err(Error::Numerical(format!(
                            "fBm covariance is not positive definite even with jitter {jitter:e}"
                        )))
                    }
                }
            }
        };
        Ok(Self {
            alpha,
            sites,
            active,
            factor,
            jitter,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn sites(&self) -> &[PlanePoint] {
        &self.sites
    }

    /// Diagonal jitter that was needed, 0 if none.
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// One realization; the first coordinate draws its normals first.
    pub fn sample(&self, seed: u64) -> FbmField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.active.len();
        let mut draw = || {
            let z = DVector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
            &self.factor * z
        };
        let bx = draw();
        let by = draw();
        let mut values = vec![PlanePoint::default(); self.sites.len()];
        for (j, &i) in self.active.iter().enumerate() {
            values[i] = PlanePoint::new(bx[j], by[j]);
        }
        FbmField {
            alpha: self.alpha,
            seed,
            jitter: self.jitter,
            sites: self.sites.clone(),
            values,
        }
    }
}

/// A realization of `B_α` at the sampler's sites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FbmField {
    pub alpha: f64,
    pub seed: u64,
    pub jitter: f64,
    pub sites: Vec<PlanePoint>,
    pub values: Vec<PlanePoint>,
}

impl FbmField {
    /// The image cloud as CSV `x,y`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,y")?;
        for v in &self.values {
            writeln!(w, "{},{}", v.x, v.y)?;
        }
        Ok(())
    }
}

pub fn sample_fbm(sites: &[PlanePoint], alpha: f64, seed: u64) -> Result<FbmField> {
    Ok(FbmSampler::new(sites.to_vec(), alpha)?.sample(seed))
}

/// Sites spread along turns `1..=turns`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpiralSites {
    pub turns: u64,
    /// Arc length between consecutive sites.
    pub spacing: f64,
    pub points: Vec<PlanePoint>,
}

/// `count` sites equidistributed by arc length over turns `1..=turns`.
pub fn spiral_sites(params: &SpiralParams, count: usize, turns: u64) -> Result<SpiralSites> {
    if count == 0 || turns == 0 {
        return Err(Error::Precondition("need at least one site and one turn".into()));
    }
    // Cumulative length on a panel grid, then Newton within a panel.
    let per_turn = 16;
    let panels = (turns as usize) * per_turn;
    let dt = TAU / per_turn as f64;
    let knots: Vec<f64> = (0..=panels).map(|i| TAU + i as f64 * dt).collect();
    let pieces: Vec<f64> = knots.par_windows(2).map(|w| params.arc_length(w[0], w[1])).collect();
    let mut cum = Vec::with_capacity(panels + 1);
    cum.push(0.0);
    for l in &pieces {
        cum.push(cum.last().unwrap() + l);
    }
    let total = cum[panels];
    let spacing = total / count as f64;
    let points = (0..count)
        .into_par_iter()
        .map(|i| {
            let target = (i as f64 + 0.5) * spacing;
            let j = cum.partition_point(|&c| c <= target).clamp(1, panels) - 1;
            let (a, b) = (knots[j], knots[j + 1]);
            let want = target - cum[j];
            let mut t = a + (b - a) * want / pieces[j];
            for _ in 0..20 {
                let err = params.arc_length(a, t) - want;
                let step = err / params.speed(t);
                t = (t - step).clamp(a, b);
                if step.abs() < 1e-14 * t {
                    break;
                }
            }
            params.eval(t)
        })
        .collect();
    Ok(SpiralSites { turns, spacing, points })
}

/// Largest `K` for which the vertical gap after turn `K` is still at least
/// twice the site spacing, so that the sampled turns stay resolved.
pub fn resolved_turns(params: &SpiralParams, count: usize) -> u64 {
    let spacing = |k: u64| params.arc_length(TAU, TAU * (k + 1) as f64) / count as f64;
    let ok = |k: u64| params.vertical_gap(k) >= 2.0 * spacing(k);
    let mut k = 1;
    while k < 1 << 20 && ok(k + 1) {
        k += 1;
    }
    k
}

/// Distinct grid cells of side `delta` holding at least one point.
pub fn point_box_count(points: &[PlanePoint], delta: f64) -> Result<u64> {
    let grid = Grid::new(delta)?;
    let cells: FxHashSet<(i64, i64)> = points.iter().map(|&p| grid.cell(p)).collect();
    Ok(cells.len() as u64)
}

/// Box-count ladder of a point cloud.
pub fn point_cloud_ladder(points: &[PlanePoint], ladder: &[f64]) -> Result<CoverLadder> {
    let entries = ladder
        .iter()
        .map(|&delta| {
            Ok(LadderEntry {
                delta,
                count: point_box_count(points, delta)?,
                log_ratio: -delta.ln(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    CoverLadder::from_entries(entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FbmExperimentOptions {
    pub sites: usize,
    /// Turns to sample; chosen by [`resolved_turns`] when `None`.
    pub turns: Option<u64>,
    pub levels: usize,
}

impl Default for FbmExperimentOptions {
    fn default() -> Self {
        Self {
            sites: 3000,
            turns: None,
            levels: 6,
        }
    }
}

/// Box-count slopes of `B_α(S_{p,q})` over several seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageDimReport {
    pub alpha: f64,
    pub seeds: Vec<u64>,
    pub slopes: Vec<f64>,
    /// Seeds whose ladder could not be fitted.
    pub failed: u64,
    pub mean_slope: f64,
    /// Upper bound on `dim_B B_α(S)` from Hölder continuity.
    pub bound: f64,
    /// `α · mean_slope`, an estimate of the `2α`-dimension profile.
    pub profile_estimate: f64,
    pub ladder: Vec<f64>,
    pub site_count: usize,
    pub turns: u64,
    pub jitter: f64,
}

/// Default image ladder: `δ_min = 3 h^α` for site spacing `h`, so the mean
/// image distance between neighbouring sites (about `1.25 h^α`) stays below
/// `δ_min/2`; `δ_max = 32 δ_min`, capped at 1/2 so the coarsest level still
/// has several boxes.
pub fn default_image_ladder(spacing: f64, alpha: f64, levels: usize) -> Result<Vec<f64>> {
    let dmin = 3.0 * spacing.powf(alpha);
    let dmax = (32.0 * dmin).min(0.5);
    geometric_ladder(dmax, dmin, levels)
}

/// For `α < 1`, samples `B_α` at spiral sites and fits image box counts;
/// for `α = 1` the map is the identity and the spiral's own box-count
/// estimator is used on `ladder` (default `2^-7 ..= 2^-15`).
pub fn image_box_dimension_experiment(
    params: &SpiralParams,
    alpha: f64,
    seeds: &[u64],
    ladder: Option<&[f64]>,
    opts: &FbmExperimentOptions,
) -> Result<ImageDimReport> {
    if params.p() > 1.0 {
        return Err(Error::Domain(format!(
            "fBm experiment needs p <= 1, got p = {}",
            params.p()
        )));
    }
    if seeds.is_empty() {
        return Err(Error::Precondition("need at least one seed".into()));
    }
    let bound = holder_image_box_bound(params, HolderExponent::new(alpha)?, Theta::new(1.0)?).value;
    if alpha == 1.0 {
        let ladder = match ladder {
            Some(l) => l.to_vec(),
            None => geometric_ladder(2f64.powi(-7), 2f64.powi(-15), 9)?,
        };
        let slope = box_ladder(params, &ladder, &CoverOptions::default())?.slope();
        return Ok(ImageDimReport {
            alpha,
            seeds: seeds.to_vec(),
            slopes: vec![slope; seeds.len()],
            failed: 0,
            mean_slope: slope,
            bound,
            profile_estimate: slope,
            ladder,
            site_count: 0,
            turns: 0,
            jitter: 0.0,
        });
    }
    let turns = opts.turns.unwrap_or_else(|| resolved_turns(params, opts.sites));
    let sites = spiral_sites(params, opts.sites, turns)?;
    let ladder = match ladder {
        Some(l) => l.to_vec(),
        None => default_image_ladder(sites.spacing, alpha, opts.levels)?,
    };
    let sampler = FbmSampler::new(sites.points, alpha)?;
    let fits: Vec<Option<f64>> = seeds
        .par_iter()
        .map(|&seed| {
            let field = sampler.sample(seed);
            point_cloud_ladder(&field.values, &ladder)
                .ok()
                .map(|l| l.slope())
                .filter(|s| s.is_finite())
        })
        .collect();
    let slopes: Vec<f64> = fits.iter().flatten().copied().collect();
    let failed = (fits.len() - slopes.len()) as u64;
    if slopes.is_empty() {
        return Err(Error::Numerical("no seed produced a usable image ladder".into()));
    }
    let kept: Vec<u64> = seeds
        .iter()
        .zip(&fits)
        .filter(|(_, f)| f.is_some())
        .map(|(s, _)| *s)
        .collect();
    let mean_slope = mean(&slopes);
    Ok(ImageDimReport {
        alpha,
        seeds: kept,
        slopes,
        failed,
        mean_slope,
        bound,
        profile_estimate: alpha * mean_slope,
        ladder,
        site_count: opts.sites,
        turns,
        jitter: sampler.jitter(),
    })
}
