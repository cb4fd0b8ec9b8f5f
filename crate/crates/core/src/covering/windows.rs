//! Turn indices delimiting the localized covers around the origin.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::Branch;
use crate::geometry::{power_gap, SpiralParams};

/// For a scale `δ` and window radius `δ^θ`:
///
/// * `sep_p` (`L_p`) and `sep_q` (`L_q`) are the largest `L` for which
///   consecutive turns are at least `δ` apart on the horizontal and vertical
///   axes, i.e. `δ <= (c + 2πL)^-t - (c + 2π(L+1))^-t` with `c = π` for `t = p`
///   and `c = 3π/2` for `t = q`. Zero when no turn qualifies.
/// * `entry_p` (`l_p`) and `entry_q` (`l_q`) are the first turns reaching
///   into `B(0, δ^θ)` along the two axes: the minimal `k >= 1` with
///   `(c + 2πk)^-t <= δ^θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowIndices {
    pub sep_p: u64,
    pub sep_q: u64,
    pub entry_p: u64,
    pub entry_q: u64,
}

impl WindowIndices {
    /// Whether the indices are in the order the cover for `branch` assumes:
    /// `l_q <= l_p <= L_q <= L_p` below the first phase transition,
    /// `l_q <= L_q <= l_p` between the transitions, `L_q <= l_q` above.
    pub fn ordered_for(&self, branch: Branch) -> bool {
        match branch {
            Branch::SpectrumFirst => {
                self.entry_q <= self.entry_p && self.entry_p <= self.sep_q && self.sep_q <= self.sep_p
            }
            Branch::SpectrumMiddle => self.entry_q <= self.sep_q && self.sep_q <= self.entry_p,
            Branch::SpectrumSaturated => self.sep_q <= self.entry_q,
            _ => false,
        }
    }
}

pub fn window_indices(params: &SpiralParams, delta: f64, theta: f64) -> Result<WindowIndices> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta = {delta} outside (0, 1)")));
    }
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::Domain(format!("theta = {theta} outside [0, 1)")));
    }
    let radius = delta.powf(theta);
    Ok(WindowIndices {
        sep_p: separation_index(params.p(), PI, delta),
        sep_q: separation_index(params.q(), 1.5 * PI, delta),
        entry_p: entry_index(params.p(), PI, radius),
        entry_q: entry_index(params.q(), 1.5 * PI, radius),
    })
}

/// `L_q(δ)`: last turn whose vertical gap to the next is at least `δ`.
pub fn vertical_separation_index(params: &SpiralParams, delta: f64) -> u64 {
    separation_index(params.q(), 1.5 * PI, delta)
}

/// Largest `L >= 0` with `power_gap(c + 2πL, t) >= delta`, or 0 if none.
fn separation_index(t: f64, c: f64, delta: f64) -> u64 {
    let gap = |l: u64| power_gap(c + TAU * l as f64, t);
    if gap(0) < delta {
        return 0;
    }
    // gap(a) ≈ 2π t a^{-1-t}
    let a = (TAU * t / delta).powf(1.0 / (1.0 + t));
    let mut l = ((a - c) / TAU).max(0.0).floor() as u64;
    while gap(l + 1) >= delta {
        l += 1;
    }
    while l > 0 && gap(l) < delta {
        l -= 1;
    }
    l
}

/// Minimal `k >= 1` with `(c + 2πk)^-t <= radius`.
fn entry_index(t: f64, c: f64, radius: f64) -> u64 {
    let reach = |k: u64| (c + TAU * k as f64).powf(-t);
    let guess = ((radius.powf(-1.0 / t) - c) / TAU).ceil();
    let mut k = if guess.is_finite() && guess > 1.0 {
        guess as u64
    } else {
        1
    };
    while k > 1 && reach(k - 1) <= radius {
        k -= 1;
    }
    while reach(k) > radius {
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(p: f64, q: f64) -> SpiralParams {
        SpiralParams::new(p, q).unwrap()
    }

    fn gap(t: f64, c: f64, l: u64) -> f64 {
        (c + TAU * l as f64).powf(-t) - (c + TAU * (l + 1) as f64).powf(-t)
    }

    #[test]
    fn separation_indices_are_maximal() {
        let params = sp(0.4, 0.7);
        for &delta in &[1e-2, 1e-3, 2f64.powi(-15), 1e-6] {
            let w = window_indices(&params, delta, 0.3).unwrap();
            assert!(gap(0.4, PI, w.sep_p) >= delta);
            assert!(gap(0.4, PI, w.sep_p + 1) < delta);
            assert!(gap(0.7, 1.5 * PI, w.sep_q) >= delta);
            assert!(gap(0.7, 1.5 * PI, w.sep_q + 1) < delta);
        }
    }

    #[test]
    fn entry_indices_are_minimal() {
        let params = sp(0.4, 0.7);
        for &(delta, theta) in &[(1e-3, 0.1), (1e-6, 0.3), (2f64.powi(-20), 0.5)] {
            let w = window_indices(&params, delta, theta).unwrap();
            let r = f64::powf(delta, theta);
            let reach = |t: f64, c: f64, k: u64| (c + TAU * k as f64).powf(-t);
            assert!(reach(0.4, PI, w.entry_p) <= r);
            assert!(w.entry_p == 1 || reach(0.4, PI, w.entry_p - 1) > r);
            assert!(reach(0.7, 1.5 * PI, w.entry_q) <= r);
            assert!(w.entry_q == 1 || reach(0.7, 1.5 * PI, w.entry_q - 1) > r);
        }
    }

    #[test]
    fn entry_index_scaling() {
        // (π + 2π l_p)^-p ≈ δ^θ, so 2π l_p ≈ δ^{-θ/p}.
        let w = window_indices(&sp(0.4, 0.7), 1e-6, 0.3).unwrap();
        let target = 1e-6f64.powf(-0.3 / 0.4);
        let ratio = TAU * w.entry_p as f64 / target;
        assert!((ratio - 1.0).abs() < 0.01, "ratio {ratio}");
    }

    #[test]
    fn separation_index_scaling() {
        // L_t ≈ δ^{-1/(1+t)} up to t-dependent constants.
        let params = sp(0.4, 0.7);
        let mut prev = None;
        for e in [12, 16, 20, 24] {
            let delta = 2f64.powi(-e);
            let w = window_indices(&params, delta, 0.0).unwrap();
            let c = w.sep_q as f64 * delta.powf(1.0 / 1.7);
            if let Some(p) = prev {
                let r: f64 = c / p;
                assert!((0.9..1.1).contains(&r));
            }
            prev = Some(c);
        }
    }

    #[test]
    fn ordering_below_first_transition() {
        let params = sp(0.4, 0.7);
        for e in [12, 16, 20, 30] {
            let w = window_indices(&params, 2f64.powi(-e), 0.1).unwrap();
            assert!(w.ordered_for(Branch::SpectrumFirst), "{w:?}");
        }
    }

    #[test]
    fn ordering_in_other_branches() {
        let params = sp(0.4, 0.7);
        let w = window_indices(&params, 2f64.powi(-30), 0.3).unwrap();
        assert!(w.ordered_for(Branch::SpectrumMiddle), "{w:?}");
        let w = window_indices(&params, 2f64.powi(-16), 0.5).unwrap();
        assert!(w.ordered_for(Branch::SpectrumSaturated), "{w:?}");
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(window_indices(&sp(0.4, 0.7), 1.5, 0.3).is_err());
        assert!(window_indices(&sp(0.4, 0.7), 1e-3, 1.0).is_err());
    }
}
