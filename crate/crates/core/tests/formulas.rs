use proptest::prelude::*;
use spiral_dims::formulas::{
    assouad_dimension, assouad_spectrum, box_dimension, holder_image_box_bound, intermediate_dimension,
    phase_transitions, profile_upper_bound,
};
use spiral_dims::{HolderExponent, SpiralParams, Theta};

fn sp(p: f64, q: f64) -> SpiralParams {
    SpiralParams::new(p, q).unwrap()
}

fn th(v: f64) -> Theta {
    Theta::new(v).unwrap()
}

fn al(v: f64) -> HolderExponent {
    HolderExponent::new(v).unwrap()
}

const TOL: f64 = 1e-12;

#[test]
fn intermediate_values() {
    assert_eq!(intermediate_dimension(&sp(1.2, 1.5), th(0.5)).value, 1.0);
    let v = intermediate_dimension(&sp(0.1, 0.8), th(0.5)).value;
    assert!((v - 1.8 / 1.35).abs() < TOL);
    let v = intermediate_dimension(&sp(0.4, 0.7), th(0.5)).value;
    assert!((v - 1.7 / 1.4).abs() < TOL);
}

#[test]
fn box_values() {
    assert!((box_dimension(&sp(0.4, 0.7)).value - 2.3 / 1.7).abs() < TOL);
    assert!((box_dimension(&sp(0.5, 0.5)).value - 2.0 / 1.5).abs() < TOL);
    assert_eq!(box_dimension(&sp(1.2, 1.2)).value, 1.0);
}

#[test]
fn spectrum_values() {
    let params = sp(0.4, 0.7);
    let v = assouad_spectrum(&params, th(0.1)).unwrap().value;
    assert!((v - 2.3 / (1.7 * 0.9)).abs() < TOL);
    let v = assouad_spectrum(&params, th(0.3)).unwrap().value;
    assert!((v - (2.7 - 0.51) / (1.7 * 0.7)).abs() < TOL);
    assert_eq!(assouad_spectrum(&params, th(0.5)).unwrap().value, 2.0);
    assert!(assouad_spectrum(&params, th(1.0)).is_err());
    let (t1, t2) = phase_transitions(&params);
    assert!((t1 - 4.0 / 17.0).abs() < TOL && (t2 - 7.0 / 17.0).abs() < TOL);
    assert_eq!(assouad_dimension(&sp(0.1, 0.8)).value, 2.0);
    assert_eq!(assouad_dimension(&sp(2.0, 3.0)).value, 2.0);
}

#[test]
fn holder_image_values() {
    assert_eq!(holder_image_box_bound(&sp(0.4, 0.7), al(0.5), th(0.3)).value, 2.0);
    let v = holder_image_box_bound(&sp(1.5, 2.0), al(0.8), th(0.6)).value;
    assert!((v - 1.25).abs() < TOL);
    let v = holder_image_box_bound(&sp(0.4, 0.6), al(0.7), th(1.0)).value;
    assert!((v - 2.2 / 1.3).abs() < TOL);
}

#[test]
fn profile_values() {
    let v = profile_upper_bound(&sp(0.4, 0.6), al(0.7), th(1.0)).unwrap().value;
    assert!((v - 0.7 * 2.2 / 1.3).abs() < TOL);
    let v = profile_upper_bound(&sp(0.4, 0.6), al(0.4), th(0.5)).unwrap().value;
    assert!((v - 0.8).abs() < TOL);
    assert!(profile_upper_bound(&sp(1.5, 2.0), al(0.7), th(0.5)).is_err());
}

#[test]
fn spectrum_kinks_at_the_transitions() {
    let params = sp(0.4, 0.7);
    let f = |t: f64| assouad_spectrum(&params, th(t)).unwrap().value;
    let h = 1e-6;
    let (t1, t2) = phase_transitions(&params);
    for t in [t1, t2] {
        let left = (f(t - h) - f(t - 2.0 * h)) / h;
        let right = (f(t + 2.0 * h) - f(t + h)) / h;
        assert!((left - right).abs() > 0.1, "θ = {t}: {left} vs {right}");
    }
}

fn params() -> impl Strategy<Value = SpiralParams> {
    (0.02f64..2.0, 0.0f64..1.5).prop_map(|(p, d)| sp(p, p + d))
}

proptest! {
    #[test]
    fn intermediate_is_monotone_and_continuous(params in params(), a in 0.0f64..1.0, h in 1e-9f64..1e-3) {
        let b = (a + h).min(1.0);
        let va = intermediate_dimension(&params, th(a)).value;
        let vb = intermediate_dimension(&params, th(b)).value;
        prop_assert!(vb >= va - 1e-15);
        if a > 0.0 {
            prop_assert!(vb - va < 20.0 * h / (params.p() + params.q()));
        }
        prop_assert!((1.0..=2.0).contains(&va));
    }

    #[test]
    fn intermediate_endpoints(params in params()) {
        prop_assert_eq!(intermediate_dimension(&params, th(0.0)).value, 1.0);
        let one = intermediate_dimension(&params, th(1.0)).value;
        prop_assert!((one - box_dimension(&params).value).abs() < TOL);
    }

    #[test]
    fn equal_exponents_give_the_hyperbolic_form(p in 0.02f64..0.999, t in 0.0f64..=1.0) {
        let v = intermediate_dimension(&sp(p, p), th(t)).value;
        let expect = if t == 0.0 { 1.0 } else { (2.0 * p + 2.0 * t * (1.0 - p)) / (2.0 * p + t * (1.0 - p)) };
        prop_assert!((v - expect).abs() < TOL);
    }

    #[test]
    fn spectrum_is_monotone_and_bounded(params in params(), a in 0.0f64..0.999, h in 1e-9f64..1e-3) {
        let b = (a + h).min(0.9999);
        let va = assouad_spectrum(&params, th(a)).unwrap().value;
        let vb = assouad_spectrum(&params, th(b)).unwrap().value;
        prop_assert!(vb >= va - 1e-12);
        prop_assert!((1.0..=2.0 + 1e-12).contains(&va));
        let (t1, t2) = phase_transitions(&params);
        // Continuity at the breakpoints.
        for t in [t1, t2] {
            let l = assouad_spectrum(&params, th(t - 1e-10)).unwrap().value;
            let r = assouad_spectrum(&params, th(t)).unwrap().value;
            prop_assert!((l - r).abs() < 1e-6);
        }
        if a >= t2 {
            prop_assert_eq!(va, 2.0);
        }
    }

    #[test]
    fn spectrum_starts_at_box(params in params()) {
        let v = assouad_spectrum(&params, th(0.0)).unwrap().value;
        let b = box_dimension(&params).value;
        if params.p() < 1.0 {
            prop_assert!((v - b).abs() < TOL);
        } else {
            prop_assert!((v - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn spectrum_regimes_meet_at_p_one(q in 1.0f64..3.0, t in 0.0f64..0.45) {
        let t = t.min(0.999 / (1.0 + q));
        let below = assouad_spectrum(&sp(1.0 - 1e-12, q), th(t)).unwrap().value;
        let at = assouad_spectrum(&sp(1.0, q), th(t)).unwrap().value;
        prop_assert!((below - at).abs() < 1e-9);
    }

    #[test]
    fn profile_bound_is_strictly_below_dimension(
        p in 0.02f64..0.999, d in 0.0f64..1.5, a in 0.5001f64..0.9999, t in 0.001f64..=1.0
    ) {
        let params = sp(p, p + d);
        let bound = profile_upper_bound(&params, al(a), th(t)).unwrap().value;
        let dim = intermediate_dimension(&params, th(t)).value;
        prop_assert!(bound < dim);
    }
}
