use std::f64::consts::PI;

use serde::Serialize;

use super::{Defect, DefectKind, Vec2};

/// Symmetric 2x2 dipole matrix of a small defect (units of length squared).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DipoleMatrix {
    m11: f64,
    m12: f64,
    m22: f64,
}

impl DipoleMatrix {
    pub fn from_entries(m11: f64, m12: f64, m22: f64) -> Self {
        DipoleMatrix { m11, m12, m22 }
    }

    /// Micro-crack: `-pi l^2 n n^T` with `n = (-sin alpha, cos alpha)` the crack normal.
    pub fn micro_crack(half_length: f64, alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        let scale = -PI * half_length * half_length;
        DipoleMatrix {
            m11: scale * s * s,
            m12: -scale * s * c,
            m22: scale * c * c,
        }
    }

    /// Rigid line inclusion: `pi l^2 t t^T` with `t = (cos alpha, sin alpha)` along the inclusion.
    pub fn rigid_inclusion(half_length: f64, alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        let scale = PI * half_length * half_length;
        DipoleMatrix {
            m11: scale * c * c,
            m12: scale * s * c,
            m22: scale * s * s,
        }
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        [[self.m11, self.m12], [self.m12, self.m22]]
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn determinant(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m12
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        Vec2::new(
            self.m11 * v.x + self.m12 * v.y,
            self.m12 * v.x + self.m22 * v.y,
        )
    }

    /// `b . M c`.
    pub fn bilinear(&self, b: Vec2, c: Vec2) -> f64 {
        b.dot(self.apply(c))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let mean = 0.5 * self.trace();
        let radius = (0.5 * (self.m11 - self.m22)).hypot(self.m12);
        [mean - radius, mean + radius]
    }

    pub fn scaled(&self, factor: f64) -> DipoleMatrix {
        DipoleMatrix {
            m11: self.m11 * factor,
            m12: self.m12 * factor,
            m22: self.m22 * factor,
        }
    }
}

pub fn dipole_matrix(defect: &Defect) -> DipoleMatrix {
    match defect.kind() {
        DefectKind::MicroCrack => DipoleMatrix::micro_crack(defect.half_length(), defect.alpha()),
        DefectKind::RigidInclusion => {
            DipoleMatrix::rigid_inclusion(defect.half_length(), defect.alpha())
        }
    }
}
