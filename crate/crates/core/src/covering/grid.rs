//! Axis-aligned grids and exact polyline-to-cell traversal.

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::geometry::{PlanePoint, SampledArc};

/// Square grid of side `delta` with one corner at `origin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub delta: f64,
    pub origin: PlanePoint,
}

impl Grid {
    pub fn new(delta: f64) -> Result<Self> {
        Self::with_origin(delta, PlanePoint::default())
    }

    pub fn with_origin(delta: f64, origin: PlanePoint) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::Precondition(format!("grid side must be positive, got {delta}")));
        }
        Ok(Self { delta, origin })
    }

    #[inline]
    pub fn cell(&self, p: PlanePoint) -> (i64, i64) {
        (
            ((p.x - self.origin.x) / self.delta).floor() as i64,
            ((p.y - self.origin.y) / self.delta).floor() as i64,
        )
    }

    /// Calls `f` once for every cell the closed segment `[a, b]` passes
    /// through, in order, starting with the cell of `a` and ending with the
    /// cell of `b`.
    pub fn visit_segment<F: FnMut(i64, i64)>(&self, a: PlanePoint, b: PlanePoint, mut f: F) {
        let ux0 = (a.x - self.origin.x) / self.delta;
        let uy0 = (a.y - self.origin.y) / self.delta;
        let ux1 = (b.x - self.origin.x) / self.delta;
        let uy1 = (b.y - self.origin.y) / self.delta;
        let (mut ix, mut iy) = (ux0.floor() as i64, uy0.floor() as i64);
        let (jx, jy) = (ux1.floor() as i64, uy1.floor() as i64);
        f(ix, iy);
        let (mut rx, mut ry) = ((jx - ix).abs(), (jy - iy).abs());
        if rx + ry == 0 {
            return;
        }
        let (dx, dy) = (ux1 - ux0, uy1 - uy0);
        let (sx, sy) = ((jx - ix).signum(), (jy - iy).signum());
        let next_boundary = |u: f64, i: i64, s: i64, d: f64| -> f64 {
            match s {
                1 => ((i + 1) as f64 - u) / d,
                -1 => (i as f64 - u) / d,
                _ => f64::INFINITY,
            }
        };
        let mut tx = next_boundary(ux0, ix, sx, dx);
        let mut ty = next_boundary(uy0, iy, sy, dy);
        let tdx = if dx != 0.0 { 1.0 / dx.abs() } else { f64::INFINITY };
        let tdy = if dy != 0.0 { 1.0 / dy.abs() } else { f64::INFINITY };
        // Step counts are pinned to the endpoint cells so rounding can never
        // overshoot or loop.
        while rx + ry > 0 {
            if ry == 0 || (rx > 0 && tx < ty) {
                ix += sx;
                tx += tdx;
                rx -= 1;
            } else {
                iy += sy;
                ty += tdy;
                ry -= 1;
            }
            f(ix, iy);
        }
    }
}

#[inline]
pub(crate) fn pack(ix: i64, iy: i64) -> u64 {
    debug_assert!(ix.unsigned_abs() < 1 << 31 && iy.unsigned_abs() < 1 << 31);
    ((ix as i32 as u32 as u64) << 32) | (iy as i32 as u32 as u64)
}

/// Number of distinct cells of side `delta` (anchored at the origin) met by
/// the polyline. Requires `max_chord <= delta / 2`.
pub fn grid_box_count(arc: &SampledArc, delta: f64) -> Result<u64> {
    grid_box_count_on(arc, &Grid::new(delta)?)
}

pub fn grid_box_count_on(arc: &SampledArc, grid: &Grid) -> Result<u64> {
    if arc.max_chord() > grid.delta / 2.0 {
        return Err(Error::Precondition(format!(
            "max chord {} exceeds half the grid side {}",
            arc.max_chord(),
            grid.delta / 2.0
        )));
    }
    let mut cells = FxHashSet::default();
    for piece in arc.pieces() {
        if let [only] = piece {
            let (ix, iy) = grid.cell(*only);
            cells.insert(pack(ix, iy));
        }
        for w in piece.windows(2) {
            grid.visit_segment(w[0], w[1], |ix, iy| {
                cells.insert(pack(ix, iy));
            });
        }
    }
    Ok(cells.len() as u64)
}
