use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Crack face a force or traction acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Face {
    Upper,
    Lower,
}

impl Face {
    pub fn opposite(self) -> Face {
        match self {
            Face::Upper => Face::Lower,
            Face::Lower => Face::Upper,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Face::Upper => "upper",
            Face::Lower => "lower",
        }
    }
}

/// Out-of-plane point force on a crack face, `offset` behind the tip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointForce {
    face: Face,
    offset: f64,
    magnitude: f64,
}

impl PointForce {
    pub fn new(face: Face, offset: f64, magnitude: f64) -> Result<Self> {
        if !(offset.is_finite() && offset > 0.0) {
            return Err(Error::domain(
                "offset",
                format!("point force must lie strictly behind the tip, got {offset}"),
            ));
        }
        if !magnitude.is_finite() {
            return Err(Error::domain("magnitude", "force magnitude must be finite"));
        }
        Ok(PointForce {
            face,
            offset,
            magnitude,
        })
    }

    pub fn face(&self) -> Face {
        self.face
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn scaled(&self, factor: f64) -> PointForce {
        PointForce {
            magnitude: self.magnitude * factor,
            ..*self
        }
    }

    /// The same force applied to the other face.
    pub fn mirrored(&self) -> PointForce {
        PointForce {
            face: self.face.opposite(),
            ..*self
        }
    }
}

/// Distributed out-of-plane traction on one crack face.
///
/// Positions are given as `x1 < 0`; the support is declared as a range of
/// distances `[near, far]` behind the tip and the profile must vanish outside it.
pub trait TractionProfile: fmt::Debug + Send + Sync {
    fn value(&self, x1: f64) -> f64;

    /// `(near, far)` distances behind the tip, `0 <= near <= far`.
    fn support(&self) -> (f64, f64);

    /// Interior distances where the profile is not smooth.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// Constant traction `height` on distances `[near, far]` behind the tip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxTraction {
    pub near: f64,
    pub far: f64,
    pub height: f64,
}

impl BoxTraction {
    pub fn new(near: f64, far: f64, height: f64) -> Result<Self> {
        if !(near.is_finite() && far.is_finite() && near >= 0.0 && far > near) {
            return Err(Error::domain(
                "traction support",
                format!("need 0 <= near < far, got [{near}, {far}]"),
            ));
        }
        if !height.is_finite() {
            return Err(Error::domain("traction height", "must be finite"));
        }
        Ok(BoxTraction { near, far, height })
    }

    /// Box of width `width` centred `center` behind the tip, carrying total force `force`.
    pub fn centered(center: f64, width: f64, force: f64) -> Result<Self> {
        Self::new(center - 0.5 * width, center + 0.5 * width, force / width)
    }
}

impl TractionProfile for BoxTraction {
    fn value(&self, x1: f64) -> f64 {
        let s = -x1;
        if s >= self.near && s <= self.far {
            self.height
        } else {
            0.0
        }
    }

    fn support(&self) -> (f64, f64) {
        (self.near, self.far)
    }
}

/// Sum of box tractions; empty means zero traction.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseTraction {
    pub boxes: Vec<BoxTraction>,
}

impl PiecewiseTraction {
    pub fn new(boxes: Vec<BoxTraction>) -> Self {
        PiecewiseTraction { boxes }
    }

    pub fn zero() -> Self {
        Self::default()
    }
}

impl TractionProfile for PiecewiseTraction {
    fn value(&self, x1: f64) -> f64 {
        self.boxes.iter().map(|b| b.value(x1)).sum()
    }

    fn support(&self) -> (f64, f64) {
        let near = self.boxes.iter().map(|b| b.near).fold(f64::INFINITY, f64::min);
        let far = self.boxes.iter().map(|b| b.far).fold(0.0, f64::max);
        if near.is_finite() {
            (near, far)
        } else {
            (0.0, 0.0)
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.boxes.iter().flat_map(|b| [b.near, b.far]).collect()
    }
}

/// Traction given by a closure, zeroed outside its declared support.
pub struct FnTraction<F> {
    f: F,
    near: f64,
    far: f64,
}

impl<F: Fn(f64) -> f64> FnTraction<F> {
    pub fn new(near: f64, far: f64, f: F) -> Result<Self> {
        if !(near.is_finite() && far.is_finite() && near >= 0.0 && far >= near) {
            return Err(Error::domain(
                "traction support",
                format!("need 0 <= near <= far, got [{near}, {far}]"),
            ));
        }
        Ok(FnTraction { f, near, far })
    }
}

impl<F> fmt::Debug for FnTraction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnTraction")
            .field("near", &self.near)
            .field("far", &self.far)
            .finish_non_exhaustive()
    }
}

impl<F: Fn(f64) -> f64 + Send + Sync> TractionProfile for FnTraction<F> {
    fn value(&self, x1: f64) -> f64 {
        let s = -x1;
        if s >= self.near && s <= self.far {
            (self.f)(x1)
        } else {
            0.0
        }
    }

    fn support(&self) -> (f64, f64) {
        (self.near, self.far)
    }
}

/// Traction profiles on the upper and lower faces.
#[derive(Debug, Clone)]
pub struct TractionPair {
    pub upper: Arc<dyn TractionProfile>,
    pub lower: Arc<dyn TractionProfile>,
}

impl TractionPair {
    pub fn new(upper: impl TractionProfile + 'static, lower: impl TractionProfile + 'static) -> Self {
        TractionPair {
            upper: Arc::new(upper),
            lower: Arc::new(lower),
        }
    }
}

/// Point forces on the crack faces plus optional distributed tractions.
#[derive(Debug, Clone, Default)]
pub struct LoadSystem {
    forces: Vec<PointForce>,
    tractions: Option<TractionPair>,
}

impl LoadSystem {
    pub fn new(forces: Vec<PointForce>) -> Self {
        LoadSystem {
            forces,
            tractions: None,
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn with_tractions(mut self, tractions: TractionPair) -> Self {
        self.tractions = Some(tractions);
        self
    }

    pub fn forces(&self) -> &[PointForce] {
        &self.forces
    }

    pub fn tractions(&self) -> Option<&TractionPair> {
        self.tractions.as_ref()
    }

    pub fn push(&mut self, force: PointForce) {
        self.forces.push(force);
    }

    /// Forces of `self` followed by those of `other`. Tractions are kept from `self`.
    pub fn concat(&self, other: &LoadSystem) -> LoadSystem {
        let mut forces = self.forces.clone();
        forces.extend_from_slice(&other.forces);
        LoadSystem {
            forces,
            tractions: self.tractions.clone(),
        }
    }

    pub fn scaled(&self, factor: f64) -> LoadSystem {
        LoadSystem {
            forces: self.forces.iter().map(|f| f.scaled(factor)).collect(),
            tractions: self.tractions.clone(),
        }
    }

    /// Every point force moved to the opposite face.
    pub fn mirrored(&self) -> LoadSystem {
        LoadSystem {
            forces: self.forces.iter().map(PointForce::mirrored).collect(),
            tractions: self.tractions.as_ref().map(|t| TractionPair {
                upper: t.lower.clone(),
                lower: t.upper.clone(),
            }),
        }
    }
}

/// Equal forces `force` on both faces, `a` behind the tip.
pub fn two_point_load(force: f64, a: f64) -> Result<LoadSystem> {
    Ok(LoadSystem::new(vec![
        PointForce::new(Face::Upper, a, force)?,
        PointForce::new(Face::Lower, a, force)?,
    ]))
}

/// `force` on the upper face at `a`, balanced by `force / 2` on the lower face
/// at `a - b` and `a + b`.
pub fn three_point_load(force: f64, a: f64, b: f64) -> Result<LoadSystem> {
    if !(b.is_finite() && b >= 0.0) {
        return Err(Error::domain("b", format!("must be non-negative, got {b}")));
    }
    if !(a.is_finite() && a - b > 0.0) {
        return Err(Error::domain(
            "a",
            format!("need a - b > 0 for the near lower force, got a = {a}, b = {b}"),
        ));
    }
    Ok(LoadSystem::new(vec![
        PointForce::new(Face::Upper, a, force)?,
        PointForce::new(Face::Lower, a - b, 0.5 * force)?,
        PointForce::new(Face::Lower, a + b, 0.5 * force)?,
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_load_layout() {
        let load = two_point_load(1.0, 2.0).unwrap();
        assert_eq!(load.forces().len(), 2);
        assert_eq!(load.forces()[0].face(), Face::Upper);
        assert_eq!(load.forces()[1].face(), Face::Lower);
        assert!(load.forces().iter().all(|f| f.offset() == 2.0 && f.magnitude() == 1.0));
        assert!(load.tractions().is_none());
    }

    #[test]
    fn two_point_load_rejects_tip_and_beyond() {
        assert!(two_point_load(1.0, 0.0).is_err());
        assert!(two_point_load(1.0, -1.0).is_err());
    }

    #[test]
    fn three_point_load_layout() {
        let load = three_point_load(1.0, 2.0, 1.9).unwrap();
        let f = load.forces();
        assert_eq!(f.len(), 3);
        assert_eq!((f[0].face(), f[0].offset(), f[0].magnitude()), (Face::Upper, 2.0, 1.0));
        assert_eq!(f[1].face(), Face::Lower);
        assert!((f[1].offset() - 0.1).abs() < 1e-15);
        assert_eq!(f[1].magnitude(), 0.5);
        assert_eq!((f[2].offset(), f[2].magnitude()), (3.9, 0.5));
        assert!(three_point_load(1.0, 2.0, 1.0).is_ok());
    }

    #[test]
    fn three_point_load_requires_a_greater_than_b() {
        assert!(three_point_load(1.0, 1.0, 1.0).is_err());
        assert!(three_point_load(1.0, 1.0, 2.0).is_err());
        assert!(three_point_load(1.0, 1.0, -0.1).is_err());
    }

    #[test]
    fn box_traction_vanishes_outside_support() {
        let b = BoxTraction::new(1.0, 2.0, 3.0).unwrap();
        assert_eq!(b.value(-1.5), 3.0);
        assert_eq!(b.value(-0.5), 0.0);
        assert_eq!(b.value(-2.5), 0.0);
        assert!(BoxTraction::new(2.0, 1.0, 1.0).is_err());
        let c = BoxTraction::centered(4.0, 0.5, 2.0).unwrap();
        assert_eq!((c.near, c.far, c.height), (3.75, 4.25, 4.0));
    }

    #[test]
    fn fn_traction_is_zeroed_outside_support() {
        let t = FnTraction::new(0.0, 1.0, |x: f64| x * x).unwrap();
        assert_eq!(t.value(-0.5), 0.25);
        assert_eq!(t.value(-2.0), 0.0);
    }
}
