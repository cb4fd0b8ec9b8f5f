//! Covers of the spiral localized to `B(z, δ^θ)` and the Assouad spectrum
//! estimator built on them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::boxdim::sampled_turns;
use super::count::{count_cells, CoverOptions, Window, WindowPolicy, WindowShape};
use super::ladder::{check_ladder, CoverLadder, LadderEntry};
use super::windows::{window_indices, WindowIndices};
use crate::error::{Error, Result};
use crate::formulas::{assouad_spectrum, Branch, Theta};
use crate::geometry::{PlanePoint, SpiralParams};

/// Numeric and analytic size of `N_δ(S ∩ B(0, δ^θ))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalCover {
    pub delta: f64,
    pub theta: f64,
    /// Grid cells met inside the window.
    pub numeric: u64,
    /// Upper bound assembled from the window indices, up to constants.
    pub analytic: f64,
    pub indices: WindowIndices,
    pub branch: Branch,
    pub shape: WindowShape,
    /// Whether the indices are in the order the analytic bound assumes; for
    /// larger `δ` they may not be, and `analytic` is then only indicative.
    pub indices_ordered: bool,
}

fn resolve_shape(policy: WindowPolicy, branch: Branch) -> WindowShape {
    match policy {
        WindowPolicy::Square => WindowShape::Square,
        WindowPolicy::Ball => WindowShape::Ball,
        WindowPolicy::Auto if branch == Branch::SpectrumMiddle => WindowShape::Square,
        WindowPolicy::Auto => WindowShape::Ball,
    }
}

/// Counts cells of side `δ` met by the spiral inside the window of radius
/// `δ^θ` at the origin, alongside the analytic estimate.
pub fn local_cover_count(params: &SpiralParams, delta: f64, theta: Theta, opts: &CoverOptions) -> Result<LocalCover> {
    let th = theta.get();
    let branch = assouad_spectrum(params, theta)?.branch;
    let indices = window_indices(params, delta, th)?;
    let shape = resolve_shape(opts.window, branch);
    let numeric = local_cover_count_at(params, delta, theta, PlanePoint::default(), shape, opts)?;
    Ok(LocalCover {
        delta,
        theta: th,
        numeric,
        analytic: analytic_local_count(params, delta, th, &indices, branch)?,
        indices,
        branch,
        shape,
        indices_ordered: indices.ordered_for(branch),
    })
}

/// Cell count inside the window of radius `δ^θ` centred at `center`.
pub fn local_cover_count_at(
    params: &SpiralParams,
    delta: f64,
    theta: Theta,
    center: PlanePoint,
    shape: WindowShape,
    opts: &CoverOptions,
) -> Result<u64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta = {delta} outside (0, 1)")));
    }
    let window = Window::new(center, delta.powf(theta.get()), shape)?;
    let last = sampled_turns(params, delta, opts);
    Ok(count_cells(params, delta, last, Some(&window), opts)?.cells)
}

/// The three-part bound: the rectangle holding all turns past `L_q`, the
/// δ-separated turns between `l_p` and `L_q`, and the turn ends entering the
/// window between `l_q` and `l_p`.
fn analytic_local_count(
    params: &SpiralParams,
    delta: f64,
    theta: f64,
    w: &WindowIndices,
    branch: Branch,
) -> Result<f64> {
    let (p, q) = (params.p(), params.q());
    let lq = w.sep_q.max(1) as f64;
    let end = delta.powf(theta - 1.0);
    Ok(match branch {
        Branch::SpectrumFirst => {
            let rect = lq.powf(-p) * lq.powf(-q) / (delta * delta);
            let arcs = if w.entry_p < w.sep_q {
                params.turn_length_sum(w.entry_p, w.sep_q)? / delta
            } else {
                0.0
            };
            rect + arcs + w.entry_p.saturating_sub(w.entry_q) as f64 * end
        }
        Branch::SpectrumMiddle => {
            delta.powf(theta) * lq.powf(-q) / (delta * delta) + w.sep_q.saturating_sub(w.entry_q) as f64 * end
        }
        _ => end * end,
    })
}

/// Regresses `ln N_δ(S ∩ B(0, δ^θ))` against `(1 - θ) ln(1/δ)`; the slope
/// estimates `dim_A^θ S`.
pub fn estimate_assouad_spectrum(
    params: &SpiralParams,
    theta: Theta,
    ladder: &[f64],
    opts: &CoverOptions,
) -> Result<CoverLadder> {
    check_ladder(ladder, 4)?;
    if theta.get() >= 1.0 {
        return Err(Error::Domain("the Assouad spectrum is defined for theta < 1".into()));
    }
    let entries = ladder
        .par_iter()
        .map(|&delta| {
            let c = local_cover_count(params, delta, theta, opts)?;
            Ok(LadderEntry {
                delta,
                count: c.numeric,
                log_ratio: (1.0 - theta.get()) * -delta.ln(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    CoverLadder::from_entries(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(p: f64, q: f64) -> SpiralParams {
        SpiralParams::new(p, q).unwrap()
    }

    #[test]
    fn analytic_tracks_numeric_below_first_transition() {
        let params = sp(0.4, 0.7);
        let opts = CoverOptions::default();
        for e in [10, 12, 14] {
            let c = local_cover_count(&params, 2f64.powi(-e), Theta::new(0.1).unwrap(), &opts).unwrap();
            assert!(c.indices_ordered);
            let r = c.numeric as f64 / c.analytic;
            assert!((1.0 / 64.0..64.0).contains(&r), "ratio {r} at 2^-{e}");
        }
    }

    #[test]
    fn saturated_window_is_filled() {
        let params = sp(0.4, 0.7);
        let c = local_cover_count(
            &params,
            2f64.powi(-12),
            Theta::new(0.6).unwrap(),
            &CoverOptions::default(),
        )
        .unwrap();
        let r = c.numeric as f64 / c.analytic;
        assert!((0.5..8.0).contains(&r), "{r}");
    }

    #[test]
    fn p_equal_one_uses_log_sum() {
        let params = sp(1.0, 1.5);
        let delta = 2f64.powi(-16);
        let w = window_indices(&params, delta, 0.1).unwrap();
        let a = analytic_local_count(&params, delta, 0.1, &w, Branch::SpectrumFirst).unwrap();
        let lq = w.sep_q as f64;
        let rect = lq.powf(-2.5) / (delta * delta);
        let ends = (w.entry_p - w.entry_q) as f64 * delta.powf(-0.9);
        let logs = ((w.sep_q as f64).ln() - (w.entry_p as f64).ln()) / delta;
        assert!((a - (rect + logs + ends)).abs() <= 1e-9 * a);
    }

    #[test]
    fn shape_policy() {
        assert_eq!(
            resolve_shape(WindowPolicy::Auto, Branch::SpectrumMiddle),
            WindowShape::Square
        );
        assert_eq!(
            resolve_shape(WindowPolicy::Auto, Branch::SpectrumFirst),
            WindowShape::Ball
        );
        assert_eq!(
            resolve_shape(WindowPolicy::Ball, Branch::SpectrumMiddle),
            WindowShape::Ball
        );
    }
}
