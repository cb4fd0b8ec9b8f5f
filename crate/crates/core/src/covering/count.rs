//! Streaming grid-cell counts of the spiral, turn by turn.
//!
//! Turns are sampled on the fly and their cells deduplicated in a hash map
//! that only remembers recently seen cells: once turns are farther apart
//! than a few grid cells, a cell last hit `W` turns ago cannot be hit again.
//! Past a cutoff turn the rest of the spiral is replaced by the rectangle
//! that contains it, tiled at the grid scale.

use std::f64::consts::{FRAC_PI_2, TAU};

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::grid::{pack, Grid};
use crate::error::{Error, Result};
use crate::geometry::{PlanePoint, SpiralParams, DEFAULT_POINT_BUDGET};

/// Shape of a localization window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowShape {
    /// The square `[cx-w, cx+w] × [cy-w, cy+w]`.
    Square,
    /// The closed disc of radius `w`.
    Ball,
}

/// Window shape choice for localized covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowPolicy {
    /// Square window between the two phase transitions, ball elsewhere.
    #[default]
    Auto,
    Square,
    Ball,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub center: PlanePoint,
    pub radius: f64,
    pub shape: WindowShape,
}

impl Window {
    pub fn new(center: PlanePoint, radius: f64, shape: WindowShape) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Precondition(format!(
                "window radius must be positive, got {radius}"
            )));
        }
        Ok(Self { center, radius, shape })
    }

    /// `(xmin, xmax, ymin, ymax)`.
    fn bbox(&self) -> (f64, f64, f64, f64) {
        let (c, w) = (self.center, self.radius);
        (c.x - w, c.x + w, c.y - w, c.y + w)
    }

    /// Largest `|z|` over the window.
    fn far_reach(&self) -> f64 {
        let f = match self.shape {
            WindowShape::Square => std::f64::consts::SQRT_2,
            WindowShape::Ball => 1.0,
        };
        self.center.norm() + f * self.radius
    }

    pub fn contains(&self, z: PlanePoint) -> bool {
        match self.shape {
            WindowShape::Square => {
                (z.x - self.center.x).abs() <= self.radius && (z.y - self.center.y).abs() <= self.radius
            }
            WindowShape::Ball => z.dist(&self.center) <= self.radius,
        }
    }

    /// Part of the segment `[a, b]` inside the window.
    fn clip(&self, a: PlanePoint, b: PlanePoint) -> Option<(PlanePoint, PlanePoint)> {
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let (t0, t1) = match self.shape {
            WindowShape::Square => {
                let (x0, x1, y0, y1) = self.bbox();
                let (mut t0, mut t1) = (0.0f64, 1.0f64);
                for (p, q) in [(-dx, a.x - x0), (dx, x1 - a.x), (-dy, a.y - y0), (dy, y1 - a.y)] {
                    if p == 0.0 {
                        if q < 0.0 {
                            return None;
                        }
                    } else {
                        let r = q / p;
                        if p < 0.0 {
                            t0 = t0.max(r);
                        } else {
                            t1 = t1.min(r);
                        }
                    }
                }
                (t0, t1)
            }
            WindowShape::Ball => {
                let (ex, ey) = (a.x - self.center.x, a.y - self.center.y);
                let qa = dx * dx + dy * dy;
                let qb = dx * ex + dy * ey;
                let qc = ex * ex + ey * ey - self.radius * self.radius;
                if qa == 0.0 {
                    return (qc <= 0.0).then_some((a, b));
                }
                let disc = qb * qb - qa * qc;
                if disc < 0.0 {
                    return None;
                }
                let r = disc.sqrt();
                (((-qb - r) / qa).max(0.0), ((-qb + r) / qa).min(1.0))
            }
        };
        if t0 > t1 {
            return None;
        }
        let at = |t: f64| PlanePoint::new(a.x + t * dx, a.y + t * dy);
        Some((at(t0), at(t1)))
    }
}

/// Sampling and bookkeeping options shared by the cell counters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverOptions {
    /// Maximum chord as a fraction of the grid side; at most 1/2.
    pub chord_fraction: f64,
    /// Grid anchor, in units of the grid side.
    pub anchor_offset: (f64, f64),
    /// Turns up to `tail_factor · L_q(δ)` are sampled; the rest is covered by
    /// their bounding rectangle.
    pub tail_factor: f64,
    pub point_budget: u64,
    pub window: WindowPolicy,
}

impl Default for CoverOptions {
    fn default() -> Self {
        Self {
            chord_fraction: 0.5,
            anchor_offset: (0.0, 0.0),
            tail_factor: 2.0,
            point_budget: DEFAULT_POINT_BUDGET,
            window: WindowPolicy::Auto,
        }
    }
}

impl CoverOptions {
    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.chord_fraction > 0.0 && self.chord_fraction <= 0.5) {
            return Err(Error::Precondition(format!(
                "chord fraction must lie in (0, 1/2], got {}",
                self.chord_fraction
            )));
        }
        if !(self.tail_factor >= 1.0 && self.tail_factor.is_finite()) {
            return Err(Error::Precondition(format!(
                "tail factor must be >= 1, got {}",
                self.tail_factor
            )));
        }
        if !(self.anchor_offset.0.is_finite() && self.anchor_offset.1.is_finite()) {
            return Err(Error::Precondition("anchor offset must be finite".into()));
        }
        Ok(())
    }

    pub(crate) fn grid(&self, delta: f64) -> Result<Grid> {
        Grid::with_origin(
            delta,
            PlanePoint::new(self.anchor_offset.0 * delta, self.anchor_offset.1 * delta),
        )
    }
}

/// Breakdown of a streamed cell count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCount {
    pub cells: u64,
    /// Cells met by sampled turns outside the tail region.
    pub sampled_cells: u64,
    /// Cells of the tail rectangle.
    pub tail_cells: u64,
    /// First and last sampled turn; `first > last` when nothing was sampled.
    pub first_turn: u64,
    pub last_turn: u64,
    pub points: u64,
}

/// Cell set standing in for all turns after `last_turn`.
struct TailRegion {
    ix0: i64,
    /// Inclusive `iy` range per column starting at `ix0`; empty when `lo > hi`.
    columns: Vec<(i64, i64)>,
}

impl TailRegion {
    fn build(params: &SpiralParams, last_turn: u64, grid: &Grid, window: Option<&Window>) -> Option<Self> {
        let t = TAU * (last_turn + 1) as f64;
        let a = t.powf(-params.p());
        let b = t.powf(-params.q());
        let (mut x0, mut x1, mut y0, mut y1) = (-a, a, -b, b);
        if let Some(w) = window {
            let (wx0, wx1, wy0, wy1) = w.bbox();
            x0 = x0.max(wx0);
            x1 = x1.min(wx1);
            y0 = y0.max(wy0);
            y1 = y1.min(wy1);
        }
        if x0 > x1 || y0 > y1 {
            return None;
        }
        let (ix0, iy0) = grid.cell(PlanePoint::new(x0, y0));
        let (ix1, iy1) = grid.cell(PlanePoint::new(x1, y1));
        let columns = (ix0..=ix1)
            .map(|ix| match window {
                Some(w) if w.shape == WindowShape::Ball => {
                    let cl = (grid.origin.x + ix as f64 * grid.delta).max(x0);
                    let cr = (grid.origin.x + (ix + 1) as f64 * grid.delta).min(x1);
                    let d = (cl - w.center.x).max(w.center.x - cr).max(0.0);
                    if d > w.radius {
                        return (1, 0);
                    }
                    let h = (w.radius * w.radius - d * d).sqrt();
                    let lo = (w.center.y - h).max(y0);
                    let hi = (w.center.y + h).min(y1);
                    if lo > hi {
                        return (1, 0);
                    }
                    (
                        grid.cell(PlanePoint::new(cl, lo)).1,
                        grid.cell(PlanePoint::new(cl, hi)).1,
                    )
                }
                _ => (iy0, iy1),
            })
            .collect();
        Some(Self { ix0, columns })
    }

    #[inline]
    fn contains(&self, ix: i64, iy: i64) -> bool {
        let i = ix - self.ix0;
        if i < 0 || i as usize >= self.columns.len() {
            return false;
        }
        let (lo, hi) = self.columns[i as usize];
        lo <= iy && iy <= hi
    }

    fn cells(&self) -> u64 {
        self.columns
            .iter()
            .map(|&(lo, hi)| if hi >= lo { (hi - lo + 1) as u64 } else { 0 })
            .sum()
    }
}

/// Parameter intervals of turn `k` that can meet the window.
fn turn_intervals(params: &SpiralParams, k: u64, window: Option<&Window>) -> Vec<(f64, f64)> {
    let t0 = TAU * k as f64;
    let Some(w) = window else {
        return vec![(t0, t0 + TAU)];
    };
    // |x(t)| <= |cx| + w forces |cos t| <= (|cx| + w) t^p.
    let c = (w.center.x.abs() + w.radius) * (t0 + TAU).powf(params.p());
    if c >= 1.0 {
        return vec![(t0, t0 + TAU)];
    }
    let h = c.asin();
    vec![
        (t0 + FRAC_PI_2 - h, t0 + FRAC_PI_2 + h),
        (t0 + 3.0 * FRAC_PI_2 - h, t0 + 3.0 * FRAC_PI_2 + h),
    ]
}

/// Whether turn `k` can meet the window at all.
fn turn_meets(params: &SpiralParams, k: u64, window: Option<&Window>) -> bool {
    let Some(w) = window else { return true };
    let t0 = TAU * k as f64;
    let (x0, x1, y0, y1) = w.bbox();
    let a = t0.powf(-params.p());
    let b = t0.powf(-params.q());
    x0 <= a && x1 >= -a && y0 <= b && y1 >= -b
}

/// First turn that can reach the window: turns before it stay outside
/// `|z| <= far_reach` by at least their inner radius.
fn first_turn(params: &SpiralParams, window: Option<&Window>) -> u64 {
    let Some(w) = window else { return 1 };
    let r = w.far_reach();
    // min |z| on turn k is at least (2π(k+1))^-q.
    let guess = (r.powf(-1.0 / params.q()) / TAU - 1.0).floor();
    let mut k = if guess.is_finite() && guess > 1.0 {
        guess as u64
    } else {
        1
    };
    while k > 1 && (TAU * k as f64).powf(-params.q()) <= r {
        k -= 1;
    }
    while (TAU * (k + 1) as f64).powf(-params.q()) > r {
        k += 1;
    }
    k
}

/// Calls `f` for every cell met by turn `k` inside the window, skipping
/// immediate repeats.
fn visit_turn<F: FnMut(i64, i64)>(
    params: &SpiralParams,
    k: u64,
    grid: &Grid,
    window: Option<&Window>,
    chord: f64,
    mut f: F,
) {
    let mut last = (i64::MIN, i64::MIN);
    let mut emit = |ix: i64, iy: i64| {
        if (ix, iy) != last {
            last = (ix, iy);
            f(ix, iy);
        }
    };
    for (a, b) in turn_intervals(params, k, window) {
        let n = params.steps_for(a, b, chord);
        let dt = (b - a) / n as f64;
        let mut prev = params.eval(a);
        for j in 1..=n {
            let t = if j == n { b } else { a + j as f64 * dt };
            let cur = params.eval(t);
            match window {
                None => grid.visit_segment(prev, cur, &mut emit),
                Some(w) => {
                    if let Some((u, v)) = w.clip(prev, cur) {
                        grid.visit_segment(u, v, &mut emit);
                    }
                }
            }
            prev = cur;
        }
    }
}

fn turn_points(params: &SpiralParams, k: u64, window: Option<&Window>, chord: f64) -> u64 {
    turn_intervals(params, k, window)
        .into_iter()
        .map(|(a, b)| params.steps_for(a, b, chord) + 1)
        .sum()
}

/// Counts grid cells of side `delta` met by turns `first..=last_turn` of the
/// spiral (restricted to `window` if given), plus the cells of the tail
/// rectangle containing all later turns.
pub(crate) fn count_cells(
    params: &SpiralParams,
    delta: f64,
    last_turn: u64,
    window: Option<&Window>,
    opts: &CoverOptions,
) -> Result<CellCount> {
    opts.validate()?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta = {delta} outside (0, 1)")));
    }
    let grid = opts.grid(delta)?;
    let chord = opts.chord_fraction * delta;
    let first = first_turn(params, window);
    let turns: Vec<u64> = if first <= last_turn {
        (first..=last_turn).filter(|&k| turn_meets(params, k, window)).collect()
    } else {
        Vec::new()
    };
    let points: u64 = turns.par_iter().map(|&k| turn_points(params, k, window, chord)).sum();
    if points > opts.point_budget {
        return Err(Error::Budget {
            needed: points,
            budget: opts.point_budget,
        });
    }
    let tail = TailRegion::build(params, last_turn, &grid, window);
    let tail_cells = tail.as_ref().map_or(0, TailRegion::cells);

    // Turns further apart than `history` never share a cell.
    let gap = params.horizontal_gap(last_turn).min(params.vertical_gap(last_turn));
    let history = ((4.0 * delta / gap).ceil() as u64)
        .saturating_add(2)
        .min(last_turn)
        .max(1);
    let chunk = (4 * history as usize).max(64);
    let chunks: Vec<&[u64]> = turns.chunks(chunk).collect();
    let sampled_cells: u64 = chunks
        .par_iter()
        .map(|own| {
            let start = own[0];
            let mut seen: FxHashMap<u64, u64> = FxHashMap::default();
            let mut fresh = 0u64;
            let warm_from = start.saturating_sub(history).max(first);
            for k in (warm_from..start).filter(|&k| turn_meets(params, k, window)) {
                visit_turn(params, k, &grid, window, chord, |ix, iy| {
                    seen.insert(pack(ix, iy), k);
                });
            }
            for (i, &k) in own.iter().enumerate() {
                visit_turn(params, k, &grid, window, chord, |ix, iy| {
                    if tail.as_ref().is_some_and(|t| t.contains(ix, iy)) {
                        return;
                    }
                    if seen.insert(pack(ix, iy), k).is_none() {
                        fresh += 1;
                    }
                });
                if (i as u64 + 1).is_multiple_of(history) {
                    seen.retain(|_, last| *last + history >= k);
                }
            }
            fresh
        })
        .sum();

    Ok(CellCount {
        cells: sampled_cells + tail_cells,
        sampled_cells,
        tail_cells,
        first_turn: first,
        last_turn,
        points,
    })
}

#[cfg(test)]
/// Exact count of the cells met by turns `1..=last_turn` inside the window,
/// without the tail rectangle, using a global cell set.
pub(crate) fn count_cells_exact(
    params: &SpiralParams,
    delta: f64,
    last_turn: u64,
    window: Option<&Window>,
    opts: &CoverOptions,
) -> Result<u64> {
    opts.validate()?;
    let grid = opts.grid(delta)?;
    let chord = opts.chord_fraction * delta;
    let mut cells = rustc_hash::FxHashSet::default();
    for k in 1..=last_turn {
        visit_turn(params, k, &grid, window, chord, |ix, iy| {
            cells.insert(pack(ix, iy));
        });
    }
    Ok(cells.len() as u64)
}
