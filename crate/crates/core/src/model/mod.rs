//! Domain types: materials, loadings, defects and their dipole matrices.

mod defect;
mod dipole;
mod load;
mod material;
mod vec2;

pub use defect::{Defect, DefectKind, DefectTemplate, EPSILON_VALIDITY_LIMIT};
pub use dipole::{dipole_matrix, DipoleMatrix};
pub use load::{
    three_point_load, two_point_load, BoxTraction, Face, FnTraction, LoadSystem, PiecewiseTraction,
    PointForce, TractionPair, TractionProfile,
};
pub use material::Bimaterial;
pub use vec2::Vec2;
