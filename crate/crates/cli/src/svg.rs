use std::f64::consts::TAU;
use std::fmt::Write as _;

use anyhow::Result;
use spiral_dims::geometry::{ellipse_family_points, sample_spiral};
use spiral_dims::{SampledArc, SpiralParams, TurnIndex};

use crate::cli::Family;

/// SVG document with one polyline per piece of the sampled curve, scaled to
/// fit the outermost turn.
pub fn render(params: &SpiralParams, family: Family, turns: u64, size: u32, stroke: f64) -> Result<String> {
    let half_w = TAU.powf(-params.p());
    let half_h = TAU.powf(-params.q());
    let scale = size as f64 / (2.0 * half_w);
    let height = (2.0 * half_h * scale).ceil() as u32;
    // Chords of at most a quarter pixel.
    let chord = 0.25 / scale;
    let turns = turns.max(1);
    let arc: SampledArc = match family {
        Family::Spiral => sample_spiral(params, TurnIndex::new(1)?, TurnIndex::new(turns)?, chord)?,
        Family::Ellipses => ellipse_family_points(params, turns, chord)?,
    };
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{height}" viewBox="0 0 {size} {height}">"#
    )?;
    for piece in arc.pieces() {
        s.push_str(r#"<polyline fill="none" stroke="black" stroke-width=""#);
        write!(s, "{stroke}")?;
        s.push_str(r#"" points=""#);
        for (i, pt) in piece.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let x = (pt.x + half_w) * scale;
            let y = (half_h - pt.y) * scale;
            write!(s, "{x:.2},{y:.2}")?;
        }
        s.push_str("\"/>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}
