use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use spiral_dims::covering::grid_box_count;
use spiral_dims::geometry::{ellipse_family_points, sample_spiral};
use spiral_dims::{SpiralParams, TurnIndex};

fn sp(p: f64, q: f64) -> SpiralParams {
    SpiralParams::new(p, q).unwrap()
}

fn turn(k: u64) -> TurnIndex {
    TurnIndex::new(k).unwrap()
}

/// Polyline length of `t ↦ γ(t)` on `[a, b]` with `n` uniform steps.
fn polyline(params: &SpiralParams, a: f64, b: f64, n: usize) -> f64 {
    let f = |t: f64| (t.powf(-params.p()) * t.cos(), t.powf(-params.q()) * t.sin());
    let mut prev = f(a);
    let mut len = 0.0;
    for i in 1..=n {
        let cur = f(a + (b - a) * i as f64 / n as f64);
        len += (cur.0 - prev.0).hypot(cur.1 - prev.1);
        prev = cur;
    }
    len
}

#[test]
fn point_at_matches_direct_evaluation() {
    let z = sp(0.4, 0.7).point_at(10.0).unwrap();
    assert!((z.x - 10f64.powf(-0.4) * 10f64.cos()).abs() < 1e-15);
    assert!((z.y - 10f64.powf(-0.7) * 10f64.sin()).abs() < 1e-15);
    assert!(sp(0.4, 0.7).point_at(6.0).is_err());
}

#[test]
fn turn_length_brackets() {
    let (lo, hi) = sp(1.0, 1.0).turn_length_bounds(turn(1));
    assert!((lo - 1.0 / TAU).abs() < 1e-15 && (hi - 8.0 / TAU).abs() < 1e-15);
    let (lo, hi) = sp(0.5, 0.5).turn_length_bounds(turn(4));
    assert!((lo - (8.0 * PI).powf(-0.5)).abs() < 1e-15);
    assert!((hi - 8.0 * (8.0 * PI).powf(-0.5)).abs() < 1e-15);
    // Chords of about 1e-6 on turn 4.
    let len = polyline(&sp(0.5, 0.5), 8.0 * PI, 10.0 * PI, 400_000);
    assert!(lo <= len && len <= hi, "{lo} {len} {hi}");
    assert!((sp(0.5, 0.5).turn_length(turn(4)) / len - 1.0).abs() < 1e-9);
}

#[test]
fn turn_length_sum_examples() {
    assert!((sp(1.0, 1.0).turn_length_sum(10, 100).unwrap() - 10f64.ln()).abs() < 1e-12);
    assert!((sp(0.5, 0.5).turn_length_sum(1, 100).unwrap() - 18.0).abs() < 1e-12);
    let brute: f64 = (10..=10_000u64).map(|k| (k as f64).powf(-0.5)).sum();
    let closed = sp(0.5, 0.5).turn_length_sum(10, 10_000).unwrap();
    assert!(brute / closed < 4.0 && closed / brute < 4.0);
    assert!(sp(0.5, 0.5).turn_length_sum(5, 5).is_err());
}

#[test]
fn turn_length_sum_tracks_true_lengths() {
    for &p in &[0.3, 0.7, 1.0, 1.4] {
        let params = sp(p, p + 0.2);
        let lens: Vec<f64> = (1..=2000).map(|k| params.turn_length(turn(k))).collect();
        let mut ratios = Vec::new();
        for &(m, n) in &[(1u64, 10u64), (10, 100), (100, 1000), (1, 2000), (50, 2000)] {
            let truth: f64 = lens[(m - 1) as usize..n as usize].iter().sum();
            ratios.push(truth / params.turn_length_sum(m, n).unwrap());
        }
        let (lo, hi) = ratios
            .iter()
            .fold((f64::MAX, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
        assert!(hi / lo < 40.0, "p = {p}: {ratios:?}");
    }
}

#[test]
fn turn_gap_examples() {
    let g = sp(0.4, 1.0).turn_gap_lower_bound(turn(10), turn(10)).unwrap();
    assert!((g.uniform - 0.01).abs() < 1e-15);
    let g = sp(0.4, 0.5).turn_gap_lower_bound(turn(2), turn(2)).unwrap();
    assert!((g.uniform - 0.5 / 2f64.powf(1.5)).abs() < 1e-15);
}

#[test]
fn sampled_turns_stay_apart_on_the_vertical_axis() {
    // Crossings of the negative imaginary axis: x = 0 with sin t < 0.
    let crossing = |k: u64| {
        let mut t = 1.5 * PI + TAU * k as f64;
        for _ in 0..50 {
            t -= t.cos() / -t.sin();
        }
        t.powf(-0.7) * t.sin()
    };
    let mut worst = f64::MAX;
    for k in 2..=50u64 {
        let gap = (crossing(k) - crossing(k - 1)).abs();
        worst = worst.min(gap / (0.7 / (k as f64).powf(1.7)));
    }
    assert!(worst > 0.1, "{worst}");
}

#[test]
fn polyline_length_of_many_turns_is_bracketed() {
    let params = sp(0.4, 0.7);
    let arc = sample_spiral(&params, turn(1), turn(100), 1e-3).unwrap();
    let lo: f64 = (1..=100).map(|k| (TAU * k as f64).powf(-0.4)).sum();
    let len = arc.polyline_length();
    assert!(lo <= len && len <= 8.0 * lo, "{lo} {len}");
}

#[test]
fn ellipses_and_spiral_have_comparable_counts() {
    let params = sp(0.4, 0.6);
    let delta = 2f64.powi(-10);
    let n = (delta.powf(-1.0 / 1.6) * 2.0).ceil() as u64;
    let spiral = grid_box_count(&sample_spiral(&params, turn(1), turn(n), delta / 2.0).unwrap(), delta).unwrap();
    let ellipses = grid_box_count(&ellipse_family_points(&params, n, delta / 2.0).unwrap(), delta).unwrap();
    let r = spiral as f64 / ellipses as f64;
    assert!(r > 1.0 / 8.0 && r < 8.0, "{spiral} {ellipses}");
}

#[test]
fn sampled_chords_respect_the_limit() {
    let arc = sample_spiral(&sp(0.3, 0.9), turn(3), turn(40), 1e-3).unwrap();
    assert!(arc.max_chord() <= 1e-3);
    let mut buf = Vec::new();
    arc.write_binary(&mut buf).unwrap();
    assert_eq!(buf.len(), arc.len() * 24);
}

proptest! {
    #[test]
    fn radii_bracket_the_point(p in 0.05f64..2.0, dq in 0.0f64..1.0, t in TAU..1e4) {
        let params = sp(p, p + dq);
        let r = params.point_at(t).unwrap().norm();
        prop_assert!(r <= t.powf(-p) * (1.0 + 1e-12));
        prop_assert!(r >= t.powf(-p - dq) * (1.0 - 1e-12));
    }

    #[test]
    fn turns_partition_the_parameter_line(t in TAU..1e6) {
        let k = TurnIndex::containing(t).unwrap();
        let (a, b) = k.parameter_range();
        prop_assert!(a <= t && t < b);
        prop_assert!((b - a - TAU).abs() < 1e-9);
        if k.get() > 1 {
            let (_, prev_end) = TurnIndex::new(k.get() - 1).unwrap().parameter_range();
            prop_assert_eq!(prev_end, a);
        }
    }

    #[test]
    fn turn_length_lies_in_its_bracket(p in 0.05f64..1.5, dq in 0.0f64..1.0, k in 1u64..5000) {
        let params = sp(p, p + dq);
        let (lo, hi) = params.turn_length_bounds(turn(k));
        let len = params.turn_length(turn(k));
        prop_assert!(lo <= len && len <= hi);
    }
}
