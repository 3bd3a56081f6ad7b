use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ratio `l / d` above which the point-dipole asymptotics are flagged as degraded.
pub const EPSILON_VALIDITY_LIMIT: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefectKind {
    MicroCrack,
    RigidInclusion,
}

impl DefectKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DefectKind::MicroCrack => "micro_crack",
            DefectKind::RigidInclusion => "rigid_inclusion",
        }
    }
}

/// A straight line defect of length `2 * half_length` centred at polar
/// position `(d, phi)` from the crack tip, inclined at `alpha` to the x1-axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Defect {
    kind: DefectKind,
    d: f64,
    phi: f64,
    half_length: f64,
    alpha: f64,
}

impl Defect {
    pub fn new(kind: DefectKind, d: f64, phi: f64, half_length: f64, alpha: f64) -> Result<Self> {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::domain("d", format!("distance must be positive, got {d}")));
        }
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(Error::domain(
                "half_length",
                format!("must be positive, got {half_length}"),
            ));
        }
        if !(phi.is_finite() && phi > -PI && phi < PI && phi != 0.0) {
            return Err(Error::domain(
                "phi",
                format!("centre must lie off the interface, phi in (-pi, 0) or (0, pi), got {phi}"),
            ));
        }
        if !alpha.is_finite() {
            return Err(Error::domain("alpha", "orientation must be finite"));
        }
        Ok(Defect {
            kind,
            d,
            phi,
            half_length,
            alpha: reduce_orientation(alpha),
        })
    }

    pub fn kind(&self) -> DefectKind {
        self.kind
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    /// Orientation reduced to `[0, pi)`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `half_length / d`.
    pub fn epsilon(&self) -> f64 {
        self.half_length / self.d
    }

    pub fn is_asymptotically_valid(&self) -> bool {
        self.epsilon() <= EPSILON_VALIDITY_LIMIT
    }

    /// Centre of the defect in Cartesian coordinates.
    pub fn center(&self) -> (f64, f64) {
        (self.d * self.phi.cos(), self.d * self.phi.sin())
    }

    pub fn with_kind(&self, kind: DefectKind) -> Defect {
        Defect { kind, ..*self }
    }

    pub fn template(&self) -> DefectTemplate {
        DefectTemplate {
            kind: self.kind,
            d: self.d,
            half_length: self.half_length,
        }
    }
}

fn reduce_orientation(alpha: f64) -> f64 {
    let r = alpha.rem_euclid(PI);
    // rem_euclid can round up to exactly PI for tiny negative inputs
    if r >= PI {
        0.0
    } else {
        r
    }
}

/// A defect with its position angle and orientation left open, as swept by region maps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectTemplate {
    pub kind: DefectKind,
    pub d: f64,
    pub half_length: f64,
}

impl DefectTemplate {
    pub fn new(kind: DefectKind, d: f64, half_length: f64) -> Result<Self> {
        // validate through a representative placement
        Defect::new(kind, d, 0.5 * PI, half_length, 0.0)?;
        Ok(DefectTemplate { kind, d, half_length })
    }

    pub fn at(&self, phi: f64, alpha: f64) -> Result<Defect> {
        Defect::new(self.kind, self.d, phi, self.half_length, alpha)
    }
}
