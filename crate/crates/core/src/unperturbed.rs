//! Unperturbed field of the interfacial crack: stress intensity factor for
//! face loads and the displacement gradient at an interior point.

use std::cell::Cell;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Bimaterial, Face, LoadSystem, PointForce, TractionProfile, Vec2};
use crate::quadrature::Quadrature;

/// `K0` split into point-force and traction contributions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sif0Result {
    pub total: f64,
    /// One entry per point force, in load order.
    pub per_force: Vec<f64>,
    pub traction_part: f64,
}

/// Stress intensity factor of a single face force.
pub fn sif_point_force(material: &Bimaterial, force: &PointForce) -> f64 {
    let weight = match force.face() {
        Face::Upper => 1.0 + material.eta(),
        Face::Lower => 1.0 - material.eta(),
    };
    -weight / (2.0 * PI).sqrt() * force.magnitude() / force.offset().sqrt()
}

pub fn sif_total(material: &Bimaterial, loads: &LoadSystem) -> Result<Sif0Result> {
    let per_force: Vec<f64> = loads
        .forces()
        .iter()
        .map(|f| sif_point_force(material, f))
        .collect();
    let traction_part = match loads.tractions() {
        Some(t) => sif_tractions(material, t.upper.as_ref(), t.lower.as_ref())?,
        None => 0.0,
    };
    let total = per_force.iter().sum::<f64>() + traction_part;
    Ok(Sif0Result {
        total,
        per_force,
        traction_part,
    })
}

/// Weight-function integral of distributed face tractions.
pub fn sif_tractions(
    material: &Bimaterial,
    upper: &dyn TractionProfile,
    lower: &dyn TractionProfile,
) -> Result<f64> {
    sif_tractions_with(&Quadrature::default(), material, upper, lower)
}

pub fn sif_tractions_with(
    quadrature: &Quadrature,
    material: &Bimaterial,
    upper: &dyn TractionProfile,
    lower: &dyn TractionProfile,
) -> Result<f64> {
    let upper_part = weighted_face_integral(quadrature, upper)?;
    let lower_part = weighted_face_integral(quadrature, lower)?;
    let mixed = (material.mu_minus() * upper_part + material.mu_plus() * lower_part) / material.mu_sum();
    Ok(-(2.0 / PI).sqrt() * mixed)
}

/// `int p(x1) (-x1)^{-1/2} dx1` over the profile's support, with `x1 = -t^2`.
fn weighted_face_integral(quadrature: &Quadrature, profile: &dyn TractionProfile) -> Result<f64> {
    let (near, far) = profile.support();
    if !(near.is_finite() && far.is_finite() && near >= 0.0 && far >= near) {
        return Err(Error::domain(
            "traction support",
            format!("need 0 <= near <= far, got [{near}, {far}]"),
        ));
    }
    let breaks: Vec<f64> = profile.breakpoints().into_iter().map(f64::sqrt).collect();
    let non_finite = Cell::new(None);
    let integrand = |t: f64| {
        let x1 = -t * t;
        let p = profile.value(x1);
        if p.is_finite() {
            2.0 * p
        } else {
            non_finite.set(Some(x1));
            0.0
        }
    };
    let integral = quadrature.integrate(integrand, near.sqrt(), far.sqrt(), &breaks)?;
    if let Some(x1) = non_finite.get() {
        return Err(Error::domain(
            "traction",
            format!("profile is not finite at x1 = {x1}"),
        ));
    }
    Ok(integral.value)
}

/// Polar angle must keep the probe point off the crack line.
fn check_probe(d: f64, phi: f64) -> Result<()> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::domain("d", format!("distance must be positive, got {d}")));
    }
    if !(phi.is_finite() && phi > -PI && phi < PI && phi != 0.0) {
        return Err(Error::domain(
            "phi",
            format!("probe point must lie off the crack line, got phi = {phi}"),
        ));
    }
    Ok(())
}

/// Modulus ratio and bracket sign selecting the formula for the loaded face.
fn face_branch(material: &Bimaterial, face: Face, phi: f64) -> (f64, f64) {
    let probe = material.modulus_at(phi);
    match face {
        Face::Upper => (material.mu_minus() / probe, 1.0),
        Face::Lower => (material.mu_plus() / probe, -1.0),
    }
}

/// Gradient of the displacement produced by one face force, at `(d cos phi, d sin phi)`.
pub fn gradient_of_force(material: &Bimaterial, force: &PointForce, d: f64, phi: f64) -> Result<Vec2> {
    check_probe(d, phi)?;
    Ok(gradient_unchecked(material, force, d, phi))
}

pub(crate) fn gradient_unchecked(material: &Bimaterial, force: &PointForce, d: f64, phi: f64) -> Vec2 {
    let a = force.offset();
    let (ratio, sign) = face_branch(material, force.face(), phi);
    let (sin_phi, cos_phi) = phi.sin_cos();
    let (sin_half, cos_half) = (0.5 * phi).sin_cos();
    let (sin_three_half, cos_three_half) = (1.5 * phi).sin_cos();
    let a_over_d = a / d;
    let d_over_a = d / a;
    let root_far = a_over_d.sqrt();
    let root_near = d_over_a.sqrt();
    let spread = 0.5 * (a_over_d - d_over_a);

    let scale = force.magnitude()
        / (PI * d * material.mu_sum() * (2.0 * cos_phi + a_over_d + d_over_a));
    let du_dx1 = ratio * (root_far * sin_half + root_near * sin_three_half)
        + sign * (sin_phi * sin_phi - spread * cos_phi);
    let du_dx2 = -ratio * (root_far * cos_half + root_near * cos_three_half)
        - sign * sin_phi * (cos_phi + spread);
    Vec2::new(scale * du_dx1, scale * du_dx2)
}

/// Sum of the force gradients at the probe point; point-force loads only.
pub fn assemble_b(material: &Bimaterial, loads: &LoadSystem, d: f64, phi: f64) -> Result<Vec2> {
    if loads.tractions().is_some() {
        return Err(Error::UnsupportedTractions);
    }
    check_probe(d, phi)?;
    Ok(loads
        .forces()
        .iter()
        .map(|f| gradient_unchecked(material, f, d, phi))
        .sum())
}

/// Leading terms of the force gradient for `d / a` small.
pub fn far_field_gradient(material: &Bimaterial, force: &PointForce, d: f64, phi: f64) -> Result<Vec2> {
    check_probe(d, phi)?;
    let (ratio, sign) = face_branch(material, force.face(), phi);
    let d_over_a = d / force.offset();
    let root_near = d_over_a.sqrt();
    let (sin_half, cos_half) = (0.5 * phi).sin_cos();
    let scale = force.magnitude() / (PI * d * material.mu_sum());
    let du_dx1 = -sign * 0.5 * phi.cos() + ratio * root_near * sin_half + sign * d_over_a;
    let du_dx2 = -sign * 0.5 * phi.sin() - ratio * root_near * cos_half;
    Ok(Vec2::new(scale * du_dx1, scale * du_dx2))
}
