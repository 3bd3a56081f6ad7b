//! Closed-form far-load approximations of `ΔK / K0` and their comparison
//! against the dipole-matrix result.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Bimaterial, Defect, DefectKind, LoadSystem};
use crate::perturbation::delta_k;

/// `b^2 / a^2` above this marks a three-point estimate as outside its range.
pub const THREE_POINT_SPREAD_LIMIT: f64 = 0.01;

/// Rows with `|exact|` below this carry no relative error.
pub const EXACT_RATIO_FLOOR: f64 = 1e-300;

/// Homogeneous-plane micro-crack estimate
/// `(eps^2 / 4) cos(3 phi / 2 - alpha) cos(phi / 2 - alpha)`.
pub fn gong_ratio(epsilon: f64, phi: f64, alpha: f64) -> f64 {
    0.25 * epsilon * epsilon * (1.5 * phi - alpha).cos() * (0.5 * phi - alpha).cos()
}

/// `(1/2) mu_opp / (mu+ + mu-) (l/d)^2`, where `mu_opp` belongs to the
/// half-plane not containing the defect.
pub fn leading_prefactor(material: &Bimaterial, defect: &Defect) -> f64 {
    let eps = defect.epsilon();
    0.5 * material.opposite_modulus(defect.phi()) / material.mu_sum() * eps * eps
}

/// Angular factor of the leading term: `cos·cos` for micro-cracks and
/// `-sin·sin` for rigid inclusions.
fn leading_shape(defect: &Defect) -> f64 {
    let (phi, alpha) = (defect.phi(), defect.alpha());
    match defect.kind() {
        DefectKind::MicroCrack => (1.5 * phi - alpha).cos() * (0.5 * phi - alpha).cos(),
        DefectKind::RigidInclusion => -(1.5 * phi - alpha).sin() * (0.5 * phi - alpha).sin(),
    }
}

/// Load-independent leading term of `ΔK / K0` for a self-balanced load far from the tip.
pub fn simplified_ratio(material: &Bimaterial, defect: &Defect) -> f64 {
    leading_prefactor(material, defect) * leading_shape(defect)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreePointRatio {
    pub ratio: f64,
    /// Set when `b^2 / a^2` exceeds [`THREE_POINT_SPREAD_LIMIT`].
    pub outside_validity: bool,
}

/// Leading term plus the first `d / a` correction for the three-point load.
pub fn three_point_ratio(material: &Bimaterial, defect: &Defect, a: f64, b: f64) -> Result<ThreePointRatio> {
    if !(b.is_finite() && b >= 0.0) {
        return Err(Error::domain("b", format!("must be non-negative, got {b}")));
    }
    if !(a.is_finite() && a - b > 0.0) {
        return Err(Error::domain("a", format!("need a - b > 0, got a = {a}, b = {b}")));
    }
    let (phi, alpha) = (defect.phi(), defect.alpha());
    let d_over_a = defect.d() / a;
    let shape = match defect.kind() {
        DefectKind::MicroCrack => {
            (1.5 * phi - alpha).cos()
                * ((0.5 * phi - alpha).cos() - d_over_a * (0.5 * phi + alpha).cos())
        }
        DefectKind::RigidInclusion => {
            -(1.5 * phi - alpha).sin()
                * ((0.5 * phi - alpha).sin() + d_over_a * (0.5 * phi + alpha).sin())
        }
    };
    Ok(ThreePointRatio {
        ratio: leading_prefactor(material, defect) * shape,
        outside_validity: (b / a).powi(2) > THREE_POINT_SPREAD_LIMIT,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Approximation {
    Gong,
    Simplified,
}

impl Approximation {
    /// The homogeneous micro-crack case uses the classical estimate.
    pub fn for_case(material: &Bimaterial, defect: &Defect) -> Self {
        if material.eta() == 0.0 && defect.kind() == DefectKind::MicroCrack {
            Approximation::Gong
        } else {
            Approximation::Simplified
        }
    }

    pub fn evaluate(self, material: &Bimaterial, defect: &Defect) -> f64 {
        match self {
            Approximation::Gong => gong_ratio(defect.epsilon(), defect.phi(), defect.alpha()),
            Approximation::Simplified => simplified_ratio(material, defect),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Approximation::Gong => "gong",
            Approximation::Simplified => "simplified",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub a_over_d: f64,
    pub exact_ratio: f64,
    pub approx_ratio: f64,
    /// `|approx - exact| / |exact|`; absent when the exact ratio vanishes.
    pub relative_error: Option<f64>,
    /// `(exact - approx) / prefactor`: the empirical size of the neglected terms.
    pub chi: f64,
    pub approximation: Approximation,
}

/// Compares the exact ratio against the far-load approximation for each load distance.
pub fn error_sweep<G>(
    material: &Bimaterial,
    defect: &Defect,
    load_family: G,
    a_values: &[f64],
) -> Result<Vec<ComparisonRow>>
where
    G: Fn(f64) -> Result<LoadSystem>,
{
    let approximation = Approximation::for_case(material, defect);
    let approx_ratio = approximation.evaluate(material, defect);
    let prefactor = leading_prefactor(material, defect);
    a_values
        .iter()
        .map(|&a| {
            let loads = load_family(a)?;
            let exact_ratio = delta_k(material, &loads, defect)?.ratio.ok_or(Error::ZeroSif)?;
            let relative_error = (exact_ratio.abs() >= EXACT_RATIO_FLOOR)
                .then(|| (approx_ratio - exact_ratio).abs() / exact_ratio.abs());
            Ok(ComparisonRow {
                a_over_d: a / defect.d(),
                exact_ratio,
                approx_ratio,
                relative_error,
                chi: (exact_ratio - approx_ratio) / prefactor,
                approximation,
            })
        })
        .collect()
}
