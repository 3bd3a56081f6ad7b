//! Leading-order change of the stress intensity factor caused by small line
//! defects, through the dipole matrix of each defect.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{dipole_matrix, Bimaterial, Defect, DefectKind, LoadSystem, Vec2};
use crate::unperturbed::{assemble_b, sif_total};

/// `|ΔK / K0|` below this is reported as neutral.
pub const CLASSIFICATION_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Shielding,
    Amplification,
    Neutral,
}

impl Classification {
    /// Classifies by the sign of `ΔK / K0`, so the result does not depend on the load sign.
    pub fn from_ratio(ratio: f64) -> Self {
        if ratio < -CLASSIFICATION_TOL {
            Classification::Shielding
        } else if ratio > CLASSIFICATION_TOL {
            Classification::Amplification
        } else {
            Classification::Neutral
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Shielding => "shielding",
            Classification::Amplification => "amplification",
            Classification::Neutral => "neutral",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaKResult {
    /// Unperturbed stress intensity factor of the load.
    pub k0: f64,
    pub delta_k: f64,
    /// `delta_k / k0`; absent when `k0 == 0`.
    pub ratio: Option<f64>,
    pub classification: Classification,
    pub per_defect: Vec<f64>,
}

impl DeltaKResult {
    fn from_parts(k0: f64, per_defect: Vec<f64>) -> Self {
        let delta_k: f64 = per_defect.iter().sum();
        let ratio = (k0 != 0.0).then(|| delta_k / k0);
        DeltaKResult {
            k0,
            delta_k,
            ratio,
            classification: ratio.map_or(Classification::Neutral, Classification::from_ratio),
            per_defect,
        }
    }
}

/// Weight vector `(-sin(3 phi / 2), cos(3 phi / 2)) / (2 d^{3/2})`.
pub fn weight_vector_c(d: f64, phi: f64) -> Vec2 {
    let (s, c) = (1.5 * phi).sin_cos();
    Vec2::new(-s, c) * (0.5 / (d * d.sqrt()))
}

/// `ΔK` of one defect given the summed load gradient `b` at its centre.
pub(crate) fn delta_k_from_gradient(material: &Bimaterial, b: Vec2, defect: &Defect) -> f64 {
    let m = dipole_matrix(defect);
    let c = weight_vector_c(defect.d(), defect.phi());
    -(2.0 / PI).sqrt() * material.harmonic_factor() * m.bilinear(b, c)
}

pub fn delta_k(material: &Bimaterial, loads: &LoadSystem, defect: &Defect) -> Result<DeltaKResult> {
    delta_k_multi(material, loads, std::slice::from_ref(defect))
}

/// Defects contribute independently; the total is their sum.
pub fn delta_k_multi(material: &Bimaterial, loads: &LoadSystem, defects: &[Defect]) -> Result<DeltaKResult> {
    let k0 = sif_total(material, loads)?.total;
    let per_defect = defects
        .iter()
        .enumerate()
        .map(|(index, defect)| {
            assemble_b(material, loads, defect.d(), defect.phi())
                .map(|b| delta_k_from_gradient(material, b, defect))
                .map_err(|e| Error::Defect {
                    index,
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DeltaKResult::from_parts(k0, per_defect))
}

/// Normalised shape function `G` with
/// `ΔK / K0 = (l/d)^2 * mu+ mu- / (mu+ + mu-) * G`.
pub fn g_function(material: &Bimaterial, loads: &LoadSystem, defect: &Defect) -> Result<f64> {
    let k0 = sif_total(material, loads)?.total;
    if k0 == 0.0 {
        return Err(Error::ZeroSif);
    }
    let b = assemble_b(material, loads, defect.d(), defect.phi())?;
    let normalised = (PI * defect.d()).sqrt() / (2f64.sqrt() * k0);
    let (sin_a, cos_a) = defect.alpha().sin_cos();
    let mismatch = 1.5 * defect.phi() - defect.alpha();
    Ok(match defect.kind() {
        DefectKind::MicroCrack => mismatch.cos() * normalised * b.dot(Vec2::new(-sin_a, cos_a)),
        DefectKind::RigidInclusion => mismatch.sin() * normalised * b.dot(Vec2::new(cos_a, sin_a)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{three_point_load, two_point_load};

    #[test]
    fn weight_vector_values() {
        assert_eq!(weight_vector_c(1.0, 0.0), Vec2::new(-0.0, 0.5));
        let c = weight_vector_c(1.0, PI);
        assert!((c.x - 0.5).abs() < 1e-15 && c.y.abs() < 1e-15);
        assert_eq!(weight_vector_c(4.0, 0.0), Vec2::new(-0.0, 1.0 / 16.0));
    }

    #[test]
    fn micro_crack_on_zero_line() {
        let m = Bimaterial::new(0.4, 2.0).unwrap();
        let loads = three_point_load(1.0, 3.0, 1.0).unwrap();
        let phi = 0.7;
        let crack = Defect::new(DefectKind::MicroCrack, 1.0, phi, 0.05, 1.5 * phi + 0.5 * PI).unwrap();
        let generic = crack_at(&m, &loads, phi, 1.5 * phi);
        let r = delta_k(&m, &loads, &crack).unwrap();
        assert!(r.delta_k.abs() < 1e-14 * generic.abs());
        assert_eq!(r.classification, Classification::Neutral);
    }

    fn crack_at(m: &Bimaterial, loads: &LoadSystem, phi: f64, alpha: f64) -> f64 {
        let d = Defect::new(DefectKind::MicroCrack, 1.0, phi, 0.05, alpha).unwrap();
        delta_k(m, loads, &d).unwrap().delta_k
    }

    #[test]
    fn homogeneous_far_load_matches_leading_term() {
        let m = Bimaterial::homogeneous(1.0).unwrap();
        let loads = two_point_load(1.0, 1e4).unwrap();
        let crack = Defect::new(DefectKind::MicroCrack, 1.0, 0.5 * PI, 0.01, 0.0).unwrap();
        let r = delta_k(&m, &loads, &crack).unwrap();
        let limit = -1.25e-5;
        let ratio = r.ratio.unwrap();
        assert!(((ratio - limit) / limit).abs() <= 2e-3, "{ratio}");
        assert_eq!(r.classification, Classification::Shielding);
    }

    #[test]
    fn zero_load_gives_no_ratio() {
        let m = Bimaterial::homogeneous(1.0).unwrap();
        let loads = two_point_load(0.0, 2.0).unwrap();
        let crack = Defect::new(DefectKind::MicroCrack, 1.0, 1.0, 0.01, 0.2).unwrap();
        let r = delta_k(&m, &loads, &crack).unwrap();
        assert_eq!(r.delta_k, 0.0);
        assert_eq!(r.ratio, None);
        assert_eq!(r.classification, Classification::Neutral);
        assert!(matches!(g_function(&m, &loads, &crack), Err(Error::ZeroSif)));
    }

    #[test]
    fn multi_defect_sums() {
        let m = Bimaterial::new(1.0, 2.5).unwrap();
        let loads = three_point_load(2.0, 4.0, 1.0).unwrap();
        let crack = Defect::new(DefectKind::MicroCrack, 1.0, 0.8, 0.02, 0.3).unwrap();
        let incl = Defect::new(DefectKind::RigidInclusion, 1.4, -2.1, 0.03, 2.0).unwrap();

        assert_eq!(delta_k_multi(&m, &loads, &[]).unwrap().delta_k, 0.0);

        let single = delta_k(&m, &loads, &crack).unwrap().delta_k;
        let twice = delta_k_multi(&m, &loads, &[crack, crack]).unwrap();
        assert_eq!(twice.delta_k, 2.0 * single);

        let both = delta_k_multi(&m, &loads, &[crack, incl]).unwrap();
        let separate = single + delta_k(&m, &loads, &incl).unwrap().delta_k;
        assert!((both.delta_k - separate).abs() <= 1e-14 * separate.abs());
        assert_eq!(both.per_defect.len(), 2);
    }

    #[test]
    fn multi_defect_reports_failing_index() {
        let m = Bimaterial::homogeneous(1.0).unwrap();
        let unit = crate::model::BoxTraction::new(0.0, 1.0, 1.0).unwrap();
        let loads = two_point_load(1.0, 2.0)
            .unwrap()
            .with_tractions(crate::model::TractionPair::new(unit, unit));
        let crack = Defect::new(DefectKind::MicroCrack, 1.0, 0.8, 0.02, 0.3).unwrap();
        match delta_k_multi(&m, &loads, &[crack]) {
            Err(Error::Defect { index: 0, source }) => {
                assert!(matches!(*source, Error::UnsupportedTractions))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn g_function_zero_lines() {
        let m = Bimaterial::new(0.1, 1.0).unwrap();
        let loads = three_point_load(1.0, 2.0, 1.9).unwrap();
        let phi = -1.2;
        let crack = Defect::new(DefectKind::MicroCrack, 1.0, phi, 0.01, 1.5 * phi + 0.5 * PI).unwrap();
        assert!(g_function(&m, &loads, &crack).unwrap().abs() < 1e-12);
        let incl = Defect::new(DefectKind::RigidInclusion, 1.0, phi, 0.01, 1.5 * phi).unwrap();
        assert!(g_function(&m, &loads, &incl).unwrap().abs() < 1e-12);
    }

    #[test]
    fn g_function_consistent_with_delta_k() {
        let m = Bimaterial::new(0.1, 1.0).unwrap();
        for loads in [two_point_load(1.0, 2.0).unwrap(), three_point_load(1.0, 2.0, 1.9).unwrap()] {
            for kind in [DefectKind::MicroCrack, DefectKind::RigidInclusion] {
                for (phi, alpha) in [(0.4, 0.1), (-2.0, 1.2), (2.9, 2.5)] {
                    let defect = Defect::new(kind, 1.3, phi, 0.02, alpha).unwrap();
                    let g = g_function(&m, &loads, &defect).unwrap();
                    let eps = defect.epsilon();
                    let via_g = eps * eps * m.harmonic_factor() * g;
                    let ratio = delta_k(&m, &loads, &defect).unwrap().ratio.unwrap();
                    assert!((via_g - ratio).abs() <= 1e-12 * ratio.abs(), "{kind:?} {phi} {alpha}");
                }
            }
        }
    }

    #[test]
    fn classification_thresholds() {
        assert_eq!(Classification::from_ratio(-1e-13), Classification::Shielding);
        assert_eq!(Classification::from_ratio(1e-13), Classification::Amplification);
        assert_eq!(Classification::from_ratio(5e-15), Classification::Neutral);
        assert_eq!(Classification::from_ratio(0.0), Classification::Neutral);
    }
}
