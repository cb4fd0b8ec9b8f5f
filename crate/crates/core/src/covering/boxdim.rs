//! Box-counting dimension from streamed grid counts.

use rayon::prelude::*;

use super::count::{count_cells, CoverOptions};
use super::ladder::{check_ladder, geometric_ladder, CoverLadder, LadderEntry};
use super::windows::vertical_separation_index;
use crate::error::Result;
use crate::geometry::SpiralParams;

/// Grid count of the whole spiral at scale `delta`: turns up to
/// `tail_factor · L_q(δ)` are sampled, the rest is covered by their bounding
/// rectangle.
pub fn spiral_box_count(params: &SpiralParams, delta: f64, opts: &CoverOptions) -> Result<u64> {
    let last = sampled_turns(params, delta, opts);
    Ok(count_cells(params, delta, last, None, opts)?.cells)
}

pub(crate) fn sampled_turns(params: &SpiralParams, delta: f64, opts: &CoverOptions) -> u64 {
    let lq = vertical_separation_index(params, delta).max(1);
    (opts.tail_factor * lq as f64).ceil() as u64
}

/// Box-dimension estimate over `levels` geometric scales in
/// `[delta_min, delta_max]`.
pub fn estimate_box_dimension(
    params: &SpiralParams,
    delta_min: f64,
    delta_max: f64,
    levels: usize,
    opts: &CoverOptions,
) -> Result<CoverLadder> {
    check_ladder(&[delta_max, delta_min], 2)?;
    let ladder = geometric_ladder(delta_max, delta_min, levels)?;
    box_ladder(params, &ladder, opts)
}

/// Box-dimension estimate over an explicit decreasing ladder.
pub fn box_ladder(params: &SpiralParams, ladder: &[f64], opts: &CoverOptions) -> Result<CoverLadder> {
    check_ladder(ladder, 4)?;
    let entries = ladder
        .par_iter()
        .map(|&delta| {
            Ok(LadderEntry {
                delta,
                count: spiral_box_count(params, delta, opts)?,
                log_ratio: -delta.ln(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    CoverLadder::from_entries(entries)
}
