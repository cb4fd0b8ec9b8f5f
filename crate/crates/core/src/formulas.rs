//! Closed-form dimensions of `S_{p,q}` and the Hölder-image and
//! dimension-profile bounds derived from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SpiralParams;

/// Interpolation parameter `θ ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Theta(f64);

impl Theta {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::Domain(format!("theta = {theta} outside [0, 1]")));
        }
        Ok(Self(theta))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Hölder exponent `α ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct HolderExponent(f64);

impl HolderExponent {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Domain(format!("alpha = {alpha} outside (0, 1]")));
        }
        Ok(Self(alpha))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Which case of a piecewise formula produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `θ = 0`: Hausdorff dimension, which is 1.
    Hausdorff,
    /// The `p < 1` ratio formula.
    PBelowOne,
    /// The `p >= 1` (or `p > 1`) case.
    PAtLeastOne,
    /// Assouad spectrum for `θ < p/(1+q)`.
    SpectrumFirst,
    /// Assouad spectrum for `p/(1+q) <= θ < q/(1+q)`.
    SpectrumMiddle,
    /// Assouad spectrum for `θ >= q/(1+q)`, identically 2.
    SpectrumSaturated,
    /// The `α <= 1/2` case, where the bound is trivial.
    SmallAlpha,
    /// A value that does not depend on any case split.
    Constant,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Hausdorff => "hausdorff",
            Branch::PBelowOne => "p-below-one",
            Branch::PAtLeastOne => "p-at-least-one",
            Branch::SpectrumFirst => "spectrum-first",
            Branch::SpectrumMiddle => "spectrum-middle",
            Branch::SpectrumSaturated => "spectrum-saturated",
            Branch::SmallAlpha => "small-alpha",
            Branch::Constant => "constant",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionValue {
    pub value: f64,
    pub branch: Branch,
}

impl DimensionValue {
    fn new(value: f64, branch: Branch) -> Self {
        Self { value, branch }
    }
}

/// `dim_θ S_{p,q} = (p + q + 2θ(1-p)) / (p + q + θ(1-p))` for `p < 1`, else 1.
/// At `θ = 0` this is the Hausdorff dimension 1.
pub fn intermediate_dimension(params: &SpiralParams, theta: Theta) -> DimensionValue {
    let (p, q, th) = (params.p(), params.q(), theta.get());
    if th == 0.0 {
        return DimensionValue::new(1.0, Branch::Hausdorff);
    }
    if p >= 1.0 {
        return DimensionValue::new(1.0, Branch::PAtLeastOne);
    }
    let v = (p + q + 2.0 * th * (1.0 - p)) / (p + q + th * (1.0 - p));
    DimensionValue::new(v, Branch::PBelowOne)
}

/// `dim_B S_{p,q} = (2 + q - p)/(1 + q)` for `p < 1`, else 1.
pub fn box_dimension(params: &SpiralParams) -> DimensionValue {
    let (p, q) = (params.p(), params.q());
    if p >= 1.0 {
        DimensionValue::new(1.0, Branch::PAtLeastOne)
    } else {
        DimensionValue::new((2.0 + q - p) / (1.0 + q), Branch::PBelowOne)
    }
}

/// The two phase transitions `(p/(1+q), q/(1+q))` of the Assouad spectrum.
pub fn phase_transitions(params: &SpiralParams) -> (f64, f64) {
    let (p, q) = (params.p(), params.q());
    (p / (1.0 + q), q / (1.0 + q))
}

/// Assouad spectrum `dim_A^θ S_{p,q}` for `θ ∈ [0, 1)`. At a breakpoint the
/// right-hand branch is used, matching the half-open intervals.
pub fn assouad_spectrum(params: &SpiralParams, theta: Theta) -> Result<DimensionValue> {
    let (p, q, th) = (params.p(), params.q(), theta.get());
    if th >= 1.0 {
        return Err(Error::Domain("the Assouad spectrum is defined for theta < 1".into()));
    }
    let (t1, t2) = phase_transitions(params);
    let v = if th < t1 {
        let v = if p < 1.0 {
            (2.0 + q - p) / ((1.0 + q) * (1.0 - th))
        } else {
            (p - th * (p - 1.0)) / (p * (1.0 - th))
        };
        DimensionValue::new(v, Branch::SpectrumFirst)
    } else if th < t2 {
        let v = (2.0 + q - th * (1.0 + q)) / ((1.0 + q) * (1.0 - th));
        DimensionValue::new(v, Branch::SpectrumMiddle)
    } else {
        DimensionValue::new(2.0, Branch::SpectrumSaturated)
    };
    Ok(v)
}

/// `dim_A S_{p,q} = 2` for every admissible `(p, q)`.
pub fn assouad_dimension(_params: &SpiralParams) -> DimensionValue {
    DimensionValue::new(2.0, Branch::Constant)
}

/// Upper bound on the upper θ-intermediate dimension of `f(S_{p,q})` for an
/// α-Hölder map `f : S_{p,q} → R²`.
pub fn holder_image_box_bound(params: &SpiralParams, alpha: HolderExponent, theta: Theta) -> DimensionValue {
    let (p, q, a, th) = (params.p(), params.q(), alpha.get(), theta.get());
    if a <= 0.5 {
        return DimensionValue::new(2.0, Branch::SmallAlpha);
    }
    if p < 1.0 {
        let v = (p + q + 2.0 * th * (1.0 - p)) / (a * (p + q) + th * (1.0 - p));
        DimensionValue::new(v, Branch::PBelowOne)
    } else {
        DimensionValue::new(1.0 / a, Branch::PAtLeastOne)
    }
}

/// Upper bound on the upper `2α`-dimension profile `dim_θ^{2α} S_{p,q}`,
/// valid for `p <= 1`: `2α` when `α <= 1/2`, otherwise
/// `α(p + q + 2θ(1-p)) / (α(p+q) + θ(1-p))`.
///
/// The bound is stated for `α < 1`; at `α = 1` the same expression is
/// returned, which is the θ-intermediate dimension itself.
pub fn profile_upper_bound(params: &SpiralParams, alpha: HolderExponent, theta: Theta) -> Result<DimensionValue> {
    let (p, q, a, th) = (params.p(), params.q(), alpha.get(), theta.get());
    if p > 1.0 {
        return Err(Error::Domain(format!("profile bound needs p <= 1, got p = {p}")));
    }
    if a <= 0.5 {
        return Ok(DimensionValue::new(2.0 * a, Branch::SmallAlpha));
    }
    let v = a * (p + q + 2.0 * th * (1.0 - p)) / (a * (p + q) + th * (1.0 - p));
    Ok(DimensionValue::new(v, Branch::PBelowOne))
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn newtypes_validate() {
        assert!(Theta::new(-0.1).is_err());
        assert!(Theta::new(1.1).is_err());
        assert!(Theta::new(f64::NAN).is_err());
        assert!(HolderExponent::new(0.0).is_err());
        assert!(HolderExponent::new(1.0).is_ok());
    }

    #[test]
    fn intermediate_examples() {
        assert_eq!(intermediate_dimension(&sp(0.4, 0.7), th(0.0)).value, 1.0);
        assert_eq!(intermediate_dimension(&sp(1.2, 1.5), th(0.5)).value, 1.0);
        let v = intermediate_dimension(&sp(0.1, 0.8), th(0.5));
        assert!((v.value - 1.8 / 1.35).abs() < TOL);
        assert_eq!(v.branch, Branch::PBelowOne);
    }

    #[test]
    fn box_examples() {
        assert!((box_dimension(&sp(0.4, 0.7)).value - 2.3 / 1.7).abs() < TOL);
        assert!((box_dimension(&sp(0.5, 0.5)).value - 2.0 / 1.5).abs() < TOL);
        assert_eq!(box_dimension(&sp(1.0, 2.0)).value, 1.0);
    }

    #[test]
    fn spectrum_examples() {
        let p = sp(0.4, 0.7);
        let a = assouad_spectrum(&p, th(0.1)).unwrap();
        assert!((a.value - 2.3 / (1.7 * 0.9)).abs() < TOL);
        assert_eq!(a.branch, Branch::SpectrumFirst);
        let b = assouad_spectrum(&p, th(0.3)).unwrap();
        assert!((b.value - (2.7 - 0.51) / (1.7 * 0.7)).abs() < TOL);
        assert_eq!(b.branch, Branch::SpectrumMiddle);
        let c = assouad_spectrum(&p, th(0.5)).unwrap();
        assert_eq!(c.value, 2.0);
        assert_eq!(c.branch, Branch::SpectrumSaturated);
        assert!(assouad_spectrum(&p, th(1.0)).is_err());
    }

    #[test]
    fn breakpoints_use_right_branch() {
        let p = sp(0.4, 0.7);
        let (t1, t2) = phase_transitions(&p);
        assert!((t1 - 4.0 / 17.0).abs() < TOL && (t2 - 7.0 / 17.0).abs() < TOL);
        assert_eq!(assouad_spectrum(&p, th(t1)).unwrap().branch, Branch::SpectrumMiddle);
        assert_eq!(assouad_spectrum(&p, th(t2)).unwrap().branch, Branch::SpectrumSaturated);
        let (a, b) = phase_transitions(&sp(0.5, 0.5));
        assert!((a - 1.0 / 3.0).abs() < TOL && a == b);
    }

    #[test]
    fn assouad_dimension_is_two() {
        assert_eq!(assouad_dimension(&sp(0.1, 0.8)).value, 2.0);
        assert_eq!(assouad_dimension(&sp(2.0, 3.0)).value, 2.0);
        let near_one = assouad_spectrum(&sp(0.4, 0.7), th(1.0 - 1e-9)).unwrap();
        assert_eq!(near_one.value, 2.0);
    }

    #[test]
    fn holder_image_examples() {
        let v = holder_image_box_bound(&sp(0.4, 0.7), al(0.5), th(0.3));
        assert_eq!(v.value, 2.0);
        let v = holder_image_box_bound(&sp(0.4, 0.7), al(1.0), th(1.0));
        assert!((v.value - box_dimension(&sp(0.4, 0.7)).value).abs() < TOL);
        let v = holder_image_box_bound(&sp(1.5, 2.0), al(0.8), th(0.6));
        assert!((v.value - 1.25).abs() < TOL);
    }

    #[test]
    fn profile_examples() {
        let v = profile_upper_bound(&sp(0.4, 0.6), al(0.7), th(1.0)).unwrap();
        assert!((v.value - 0.7 * 2.2 / 1.3).abs() < TOL);
        let v = profile_upper_bound(&sp(0.4, 0.6), al(0.4), th(0.5)).unwrap();
        assert!((v.value - 0.8).abs() < TOL);
        assert!(profile_upper_bound(&sp(1.2, 1.5), al(0.7), th(0.5)).is_err());
        // α = 1 extension returns the intermediate dimension.
        let v = profile_upper_bound(&sp(0.4, 0.6), al(1.0), th(0.3)).unwrap();
        assert!((v.value - intermediate_dimension(&sp(0.4, 0.6), th(0.3)).value).abs() < TOL);
    }

    #[test]
    fn hyperbolic_case_matches_closed_form() {
        for &p in &[0.1, 0.3, 0.5, 0.9] {
            for i in 0..=20 {
                let t = i as f64 / 20.0;
                let v = intermediate_dimension(&sp(p, p), th(t)).value;
                let expect = if t == 0.0 {
                    1.0
                } else {
                    (2.0 * p + 2.0 * t * (1.0 - p)) / (2.0 * p + t * (1.0 - p))
                };
                assert!((v - expect).abs() < TOL);
            }
        }
    }

    #[test]
    fn p_regimes_agree_at_one() {
        // Both first-branch formulas reduce to 1/(1-θ) at p = 1.
        let q = 1.6;
        for i in 0..10 {
            let t = 0.3 * i as f64 / 10.0;
            let lower = (2.0 + q - 1.0) / ((1.0 + q) * (1.0 - t));
            let upper = (1.0 - t * 0.0) / (1.0 * (1.0 - t));
            assert!((lower - upper).abs() < TOL);
            let v = assouad_spectrum(&sp(1.0, q), th(t)).unwrap().value;
            assert!((v - upper).abs() < TOL);
        }
    }
}
