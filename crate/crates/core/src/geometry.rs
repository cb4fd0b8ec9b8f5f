//! Exact geometry of `S_{p,q}`: point evaluation, full turns, turn lengths,
//! inter-turn gaps and chord-bounded sampling, plus the concentric ellipse
//! family `C_{p,q}`.
//!
//! The parameter domain starts at `t = 2π`, so the spiral is the disjoint
//! union of full turns `S^k` with `2πk <= t < 2π(k+1)`, `k >= 1`.

use std::f64::consts::{PI, TAU};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;

/// Start of the parameter domain.
pub const T_START: f64 = TAU;

/// Default cap on the number of points a sampler may materialise.
pub const DEFAULT_POINT_BUDGET: u64 = 100_000_000;

/// Decay exponents `(p, q)` of an elliptical polynomial spiral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpiralParams {
    p: f64,
    q: f64,
}

impl SpiralParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p.is_finite() && q.is_finite()) {
            return Err(Error::InvalidParams(format!("p={p}, q={q} must be finite")));
        }
        if !(p > 0.0 && p <= q) {
            return Err(Error::InvalidParams(format!("need 0 < p <= q, got p={p}, q={q}")));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `p < 1`: the regime where box and intermediate dimensions exceed 1.
    pub fn p_below_one(&self) -> bool {
        self.p < 1.0
    }

    /// Unchecked evaluation; callers guarantee `t > 0`.
    #[inline]
    pub(crate) fn eval(&self, t: f64) -> PlanePoint {
        let lt = t.ln();
        let (s, c) = t.sin_cos();
        PlanePoint {
            x: (-self.p * lt).exp() * c,
            y: (-self.q * lt).exp() * s,
        }
    }

    /// The point `t^-p cos t + i t^-q sin t`.
    pub fn point_at(&self, t: f64) -> Result<PlanePoint> {
        if !(t >= T_START) {
            return Err(Error::Domain(format!("t = {t} lies below 2π")));
        }
        Ok(self.eval(t))
    }

    /// `|γ'(t)|`.
    pub fn speed(&self, t: f64) -> f64 {
        let (s, c) = t.sin_cos();
        let tp = t.powf(-self.p);
        let tq = t.powf(-self.q);
        let dx = -tp * (self.p / t * c + s);
        let dy = tq * (c - self.q / t * s);
        dx.hypot(dy)
    }

    /// Upper bound for `|γ'|` on `[t0, ∞)`.
    pub fn speed_bound(&self, t0: f64) -> f64 {
        t0.powf(-self.p) * (1.0 + self.p / t0) + t0.powf(-self.q) * (1.0 + self.q / t0)
    }

    /// Bracket `((2kπ)^-p, 8(2kπ)^-p)` for the length of turn `k`, from
    /// comparing the turn with the square of side `2(2kπ)^-p`.
    pub fn turn_length_bounds(&self, k: TurnIndex) -> (f64, f64) {
        let r = (TAU * k.get() as f64).powf(-self.p);
        (r, 8.0 * r)
    }

    /// Length of turn `k` by Gauss–Legendre quadrature of the speed.
    pub fn turn_length(&self, k: TurnIndex) -> f64 {
        let t0 = TAU * k.get() as f64;
        self.arc_length(t0, t0 + TAU)
    }

    /// Arc length between two parameter values.
    pub fn arc_length(&self, t0: f64, t1: f64) -> f64 {
        // 8 panels per full turn keeps the rule well inside double precision.
        let panels = (((t1 - t0) / TAU) * 8.0).ceil().max(1.0) as usize;
        quad::integrate(|t| self.speed(t), t0, t1, panels)
    }

    /// Closed comparison quantity for `Σ_{k=M}^{N} H¹(S^k)`, comparable to the
    /// true sum up to `p`-dependent constants:
    /// `(N^{1-p} - M^{1-p})/(1-p)`, `log N - log M` or `(M^{1-p} - N^{1-p})/(p-1)`.
    pub fn turn_length_sum(&self, m: u64, n: u64) -> Result<f64> {
        if m < 1 || m >= n {
            return Err(Error::Domain(format!("need 1 <= M < N, got M={m}, N={n}")));
        }
        Ok(power_sum_comparison(self.p, m as f64, n as f64))
    }

    /// Lower bounds on the separation of turns `k-1` and `k` when `k <= M`.
    pub fn turn_gap_lower_bound(&self, k: TurnIndex, m: TurnIndex) -> Result<TurnGap> {
        let (k, m) = (k.get(), m.get());
        if k < 2 {
            return Err(Error::Domain(format!("turn gap needs k >= 2, got {k}")));
        }
        if k > m {
            return Err(Error::Domain(format!("turn gap needs k <= M, got k={k}, M={m}")));
        }
        let q = self.q;
        Ok(TurnGap {
            uniform: q / (m as f64).powf(1.0 + q),
            per_turn: q / (k as f64).powf(1.0 + q),
        })
    }

    /// Horizontal gap between consecutive turns on the negative real axis,
    /// `(π + 2πk)^-p - (π + 2π(k+1))^-p`.
    pub fn horizontal_gap(&self, k: u64) -> f64 {
        power_gap(PI + TAU * k as f64, self.p)
    }

    /// Vertical gap between consecutive turns on the negative imaginary axis,
    /// `(3π/2 + 2πk)^-q - (3π/2 + 2π(k+1))^-q`.
    pub fn vertical_gap(&self, k: u64) -> f64 {
        power_gap(1.5 * PI + TAU * k as f64, self.q)
    }

    /// Number of uniform parameter steps on `[t0, t1]` (inside turns at or
    /// after `t0`) that keeps every chord at most `max_chord`.
    pub(crate) fn steps_for(&self, t0: f64, t1: f64, max_chord: f64) -> u64 {
        let n = ((t1 - t0) * self.speed_bound(t0) / max_chord).ceil();
        (n as u64).max(1)
    }
}

/// `a^-t - (a + 2π)^-t`, computed without cancellation.
pub(crate) fn power_gap(a: f64, t: f64) -> f64 {
    let ratio = (TAU / a).ln_1p();
    a.powf(-t) * -(-t * ratio).exp_m1()
}

pub(crate) fn power_sum_comparison(p: f64, m: f64, n: f64) -> f64 {
    if p == 1.0 {
        n.ln() - m.ln()
    } else if p < 1.0 {
        (n.powf(1.0 - p) - m.powf(1.0 - p)) / (1.0 - p)
    } else {
        (m.powf(1.0 - p) - n.powf(1.0 - p)) / (p - 1.0)
    }
}

/// Lower bounds on inter-turn separation, valid up to `(p,q)`-constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurnGap {
    /// `q / M^{1+q}`, uniform over `2 <= k <= M`.
    pub uniform: f64,
    /// `q / k^{1+q}`.
    pub per_turn: f64,
}

/// Index of a full turn, `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TurnIndex(u64);

impl TurnIndex {
    pub fn new(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("turn indices start at 1".into()));
        }
        Ok(Self(k))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// Parameter interval `[2πk, 2π(k+1))` of the turn.
    pub fn parameter_range(self) -> (f64, f64) {
        (TAU * self.0 as f64, TAU * (self.0 + 1) as f64)
    }

    /// The turn containing parameter `t >= 2π`.
    pub fn containing(t: f64) -> Result<Self> {
        if !(t >= T_START) {
            return Err(Error::Domain(format!("t = {t} lies below 2π")));
        }
        let mut k = (t / TAU).floor() as u64;
        // Division rounding can land one turn off near a boundary.
        if TAU * k as f64 > t {
            k -= 1;
        } else if TAU * (k + 1) as f64 <= t {
            k += 1;
        }
        Ok(Self(k.max(1)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(&self, other: &PlanePoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A polyline (possibly several disjoint pieces) with the parameter value of
/// each vertex and an upper bound on consecutive-vertex distance.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledArc {
    t: Vec<f64>,
    points: Vec<PlanePoint>,
    /// Indices where a new piece starts; always begins with 0.
    piece_starts: Vec<usize>,
    max_chord: f64,
}

impl SampledArc {
    /// Builds a single-piece arc; `max_chord` is measured from the data.
    pub fn from_points(t: Vec<f64>, points: Vec<PlanePoint>) -> Result<Self> {
        Self::from_pieces(t, points, vec![0])
    }

    pub fn from_pieces(t: Vec<f64>, points: Vec<PlanePoint>, piece_starts: Vec<usize>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Precondition("sampled arc must be nonempty".into()));
        }
        if t.len() != points.len() {
            return Err(Error::Precondition("parameter and point counts differ".into()));
        }
        if piece_starts.first() != Some(&0)
            || piece_starts.windows(2).any(|w| w[0] >= w[1])
            || piece_starts.last().is_some_and(|&s| s >= points.len())
        {
            return Err(Error::Precondition("malformed piece boundaries".into()));
        }
        let mut arc = Self {
            t,
            points,
            piece_starts,
            max_chord: 0.0,
        };
        arc.max_chord = arc.segments().map(|(a, b)| a.dist(&b)).fold(0.0, f64::max);
        Ok(arc)
    }

    pub fn points(&self) -> &[PlanePoint] {
        &self.points
    }

    pub fn params(&self) -> &[f64] {
        &self.t
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_chord(&self) -> f64 {
        self.max_chord
    }

    /// Each piece as a slice of vertices.
    pub fn pieces(&self) -> impl Iterator<Item = &[PlanePoint]> + '_ {
        let n = self.points.len();
        self.piece_starts.iter().enumerate().map(move |(i, &s)| {
            let e = self.piece_starts.get(i + 1).copied().unwrap_or(n);
            &self.points[s..e]
        })
    }

    /// Consecutive vertex pairs within each piece.
    pub fn segments(&self) -> impl Iterator<Item = (PlanePoint, PlanePoint)> + '_ {
        self.pieces().flat_map(|piece| piece.windows(2).map(|w| (w[0], w[1])))
    }

    pub fn polyline_length(&self) -> f64 {
        self.segments().map(|(a, b)| a.dist(&b)).sum()
    }

    /// CSV with header `t,x,y`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,x,y")?;
        for (t, p) in self.t.iter().zip(&self.points) {
            writeln!(w, "{t},{},{}", p.x, p.y)?;
        }
        Ok(())
    }

    /// Little-endian `f64` triples `(t, x, y)`, no header.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        for (t, p) in self.t.iter().zip(&self.points) {
            w.write_all(&t.to_le_bytes())?;
            w.write_all(&p.x.to_le_bytes())?;
            w.write_all(&p.y.to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads a record stream written by [`SampledArc::write_binary`] as a
    /// single piece.
    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        if buf.len() % 24 != 0 {
            return Err(Error::Io(format!(
                "record stream length {} is not a multiple of 24",
                buf.len()
            )));
        }
        let f = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8-byte chunk"));
        let mut t = Vec::with_capacity(buf.len() / 24);
        let mut pts = Vec::with_capacity(buf.len() / 24);
        for rec in buf.chunks_exact(24) {
            t.push(f(&rec[0..8]));
            pts.push(PlanePoint::new(f(&rec[8..16]), f(&rec[16..24])));
        }
        Self::from_points(t, pts)
    }
}

/// Samples turns `k_min..=k_max` as one polyline whose chords are all at
/// most `max_chord`, using [`DEFAULT_POINT_BUDGET`].
pub fn sample_spiral(params: &SpiralParams, k_min: TurnIndex, k_max: TurnIndex, max_chord: f64) -> Result<SampledArc> {
    sample_spiral_with_budget(params, k_min, k_max, max_chord, DEFAULT_POINT_BUDGET)
}

pub fn sample_spiral_with_budget(
    params: &SpiralParams,
    k_min: TurnIndex,
    k_max: TurnIndex,
    max_chord: f64,
    budget: u64,
) -> Result<SampledArc> {
    if k_min > k_max {
        return Err(Error::Precondition(format!(
            "k_min = {} exceeds k_max = {}",
            k_min.get(),
            k_max.get()
        )));
    }
    check_chord(max_chord)?;
    // Step on turn k is 2π / n_k with n_k ~ (2πk)^-p / max_chord.
    let steps: Vec<u64> = (k_min.get()..=k_max.get())
        .map(|k| {
            let (t0, t1) = TurnIndex(k).parameter_range();
            params.steps_for(t0, t1, max_chord)
        })
        .collect();
    let needed = steps.iter().sum::<u64>() + 1;
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    let mut t = Vec::with_capacity(needed as usize);
    let mut pts = Vec::with_capacity(needed as usize);
    for (k, &n) in (k_min.get()..=k_max.get()).zip(&steps) {
        let (t0, _) = TurnIndex(k).parameter_range();
        let h = TAU / n as f64;
        for j in 0..n {
            let tj = t0 + h * j as f64;
            t.push(tj);
            pts.push(params.eval(tj));
        }
    }
    let t_end = TAU * (k_max.get() + 1) as f64;
    t.push(t_end);
    pts.push(params.eval(t_end));
    SampledArc::from_points(t, pts)
}

/// Samples the ellipses `E((2πn)^-p, (2πn)^-q)`, `n = 1..=n_max`, one piece
/// per ellipse. The stored parameter is `2πn + φ` for angle `φ`.
pub fn ellipse_family_points(params: &SpiralParams, n_max: u64, max_chord: f64) -> Result<SampledArc> {
    ellipse_family_points_with_budget(params, n_max, max_chord, DEFAULT_POINT_BUDGET)
}

pub fn ellipse_family_points_with_budget(
    params: &SpiralParams,
    n_max: u64,
    max_chord: f64,
    budget: u64,
) -> Result<SampledArc> {
    if n_max < 1 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    check_chord(max_chord)?;
    let axes = |n: u64| {
        let r = TAU * n as f64;
        (r.powf(-params.p), r.powf(-params.q))
    };
    // Speed of φ ↦ (a cos φ, b sin φ) is at most a.
    let steps: Vec<u64> = (1..=n_max)
        .map(|n| ((TAU * axes(n).0 / max_chord).ceil() as u64).max(3))
        .collect();
    let needed: u64 = steps.iter().map(|s| s + 1).sum();
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    let mut t = Vec::with_capacity(needed as usize);
    let mut pts = Vec::with_capacity(needed as usize);
    let mut starts = Vec::with_capacity(n_max as usize);
    for (n, &m) in (1..=n_max).zip(&steps) {
        starts.push(pts.len());
        let (a, b) = axes(n);
        let base = TAU * n as f64;
        for j in 0..=m {
            let phi = TAU * j as f64 / m as f64;
            let (s, c) = phi.sin_cos();
            t.push(base + phi);
            pts.push(PlanePoint::new(a * c, b * s));
        }
    }
    SampledArc::from_pieces(t, pts, starts)
}

fn check_chord(max_chord: f64) -> Result<()> {
    if !(max_chord > 0.0 && max_chord.is_finite()) {
        return Err(Error::Precondition(format!(
            "max_chord must be positive, got {max_chord}"
        )));
    }
    Ok(())
}
