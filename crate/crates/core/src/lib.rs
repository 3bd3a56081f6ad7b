//! Mode III stress intensity factor of a semi-infinite interfacial crack
//! between two elastic half-planes, and its leading-order perturbation by small
//! line defects (micro-cracks and rigid line inclusions) described through
//! their dipole matrices.
//!
//! Module map:
//! - [`model`]: materials, face loads, defects, dipole matrices.
//! - [`unperturbed`]: `K0` and the displacement gradient of the defect-free problem.
//! - [`perturbation`]: `ΔK` via the dipole matrix, summed over defects.
//! - [`approximations`]: far-load closed forms and their error against the exact formula.
//! - [`region_map`]: shielding/amplification maps and their zero contours.
//! - [`cli`]: command-line front end.

pub mod approximations;
pub mod cli;
pub mod error;
pub mod model;
pub mod perturbation;
pub mod quadrature;
pub mod region_map;
pub mod unperturbed;
pub mod validation;

pub use error::{Error, Result};
