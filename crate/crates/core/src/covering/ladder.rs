//! Scale ladders and the log–log regressions fitted along them.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{linear_fit, LinearFit};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderEntry {
    pub delta: f64,
    pub count: u64,
    /// Regression abscissa: `ln(1/δ)` for box counts, `ln(δ^θ/δ)` for
    /// localized counts.
    pub log_ratio: f64,
}

/// Counts along a decreasing scale ladder with the fitted growth exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverLadder {
    pub entries: Vec<LadderEntry>,
    /// `ln count` against `log_ratio`; the slope is the dimension estimate.
    pub fit: LinearFit,
}

impl CoverLadder {
    pub fn from_entries(entries: Vec<LadderEntry>) -> Result<Self> {
        if entries.windows(2).any(|w| w[1].delta >= w[0].delta) {
            return Err(Error::Precondition("ladder scales must be strictly decreasing".into()));
        }
        if entries.iter().any(|e| e.count == 0) {
            return Err(Error::Numerical("empty cover on the ladder".into()));
        }
        let xs: Vec<f64> = entries.iter().map(|e| e.log_ratio).collect();
        let ys: Vec<f64> = entries.iter().map(|e| (e.count as f64).ln()).collect();
        let fit = linear_fit(&xs, &ys).ok_or_else(|| Error::Numerical("degenerate ladder regression".into()))?;
        Ok(Self { entries, fit })
    }

    pub fn slope(&self) -> f64 {
        self.fit.slope
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "delta,count,log_ratio")?;
        for e in &self.entries {
            writeln!(w, "{:e},{},{}", e.delta, e.count, e.log_ratio)?;
        }
        Ok(())
    }
}

/// `levels` scales from `delta_max` down to `delta_min`, equally spaced in
/// `ln δ`.
pub fn geometric_ladder(delta_max: f64, delta_min: f64, levels: usize) -> Result<Vec<f64>> {
    if !(delta_min > 0.0 && delta_min < delta_max && delta_max < 1.0) {
        return Err(Error::Precondition(format!(
            "need 0 < delta_min < delta_max < 1, got {delta_min}, {delta_max}"
        )));
    }
    if levels < 2 {
        return Err(Error::Precondition(format!("need at least 2 levels, got {levels}")));
    }
    let (a, b) = (delta_max.ln(), delta_min.ln());
    Ok((0..levels)
        .map(|i| (a + (b - a) * i as f64 / (levels - 1) as f64).exp())
        .collect())
}

/// Checks a user ladder: at least `min_levels` scales in `(0, 1)`, strictly
/// decreasing.
pub(crate) fn check_ladder(ladder: &[f64], min_levels: usize) -> Result<()> {
    if ladder.len() < min_levels {
        return Err(Error::Precondition(format!(
            "ladder needs at least {min_levels} scales, got {}",
            ladder.len()
        )));
    }
    if ladder.iter().any(|&d| !(d > 0.0 && d < 1.0)) {
        return Err(Error::Domain("ladder scales must lie in (0, 1)".into()));
    }
    if ladder.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Precondition("ladder scales must be strictly decreasing".into()));
    }
    Ok(())
}
