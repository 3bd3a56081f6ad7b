//! Shielding/amplification maps over defect position angle and orientation.

mod contour;
mod export;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Bimaterial, DefectTemplate, LoadSystem};
use crate::perturbation::{delta_k_from_gradient, Classification};
use crate::unperturbed::{assemble_b, sif_total};

pub use contour::{extract_boundary, extract_boundary_with, BoundaryCurve};
pub use export::{
    export_map, read_grid_csv, render_svg, write_curves_csv, write_grid_csv, ExportPaths,
    AMPLIFICATION_FILL, SHIELDING_FILL,
};
pub(crate) use export::fmt_f64;

pub const MIN_CELLS: usize = 8;

/// Number of nodes along the phi and alpha axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub n_phi: usize,
    pub n_alpha: usize,
}

impl Resolution {
    pub fn new(n_phi: usize, n_alpha: usize) -> Result<Self> {
        if n_phi < MIN_CELLS || n_alpha < MIN_CELLS {
            return Err(Error::domain(
                "resolution",
                format!("need at least {MIN_CELLS}x{MIN_CELLS}, got {n_phi}x{n_alpha}"),
            ));
        }
        Ok(Resolution { n_phi, n_alpha })
    }

    pub fn refined(&self) -> Resolution {
        Resolution {
            n_phi: 2 * self.n_phi,
            n_alpha: 2 * self.n_alpha,
        }
    }
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution {
            n_phi: 720,
            n_alpha: 360,
        }
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.n_phi, self.n_alpha)
    }
}

impl FromStr for Resolution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::domain("resolution", format!("expected NxM, got {s:?}"));
        let (n, m) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let n = n.trim().parse().map_err(|_| bad())?;
        let m = m.trim().parse().map_err(|_| bad())?;
        Resolution::new(n, m)
    }
}

/// Cell-centred nodes on `(-pi, pi)`, symmetric about zero.
pub fn phi_axis(n: usize) -> Vec<f64> {
    let step = 2.0 * PI / n as f64;
    let half = 0.5 * n as f64;
    (0..n).map(|i| (i as f64 + 0.5 - half) * step).collect()
}

/// Cell-centred nodes on `(0, pi)`.
pub fn alpha_axis(n: usize) -> Vec<f64> {
    let step = PI / n as f64;
    (0..n).map(|j| (j as f64 + 0.5) * step).collect()
}

/// Values of `ΔK / K0` on a `(phi, alpha)` grid, stored phi-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MapGrid {
    phi_axis: Vec<f64>,
    alpha_axis: Vec<f64>,
    values: Vec<f64>,
    signs: Vec<Classification>,
}

impl MapGrid {
    pub fn from_values(phi_axis: Vec<f64>, alpha_axis: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if phi_axis.len() < 2 || alpha_axis.len() < 2 {
            return Err(Error::domain("grid", "each axis needs at least two nodes"));
        }
        if values.len() != phi_axis.len() * alpha_axis.len() {
            return Err(Error::domain(
                "grid",
                format!(
                    "{} values do not fill a {}x{} grid",
                    values.len(),
                    phi_axis.len(),
                    alpha_axis.len()
                ),
            ));
        }
        let signs = values.iter().map(|&v| Classification::from_ratio(v)).collect();
        Ok(MapGrid {
            phi_axis,
            alpha_axis,
            values,
            signs,
        })
    }

    /// Samples an arbitrary function on the default node layout for `resolution`.
    pub fn from_fn<F>(resolution: Resolution, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        let phis = phi_axis(resolution.n_phi);
        let alphas = alpha_axis(resolution.n_alpha);
        let values = phis
            .par_iter()
            .flat_map_iter(|&phi| alphas.iter().map(move |&alpha| (phi, alpha)))
            .map(|(phi, alpha)| f(phi, alpha))
            .collect();
        Self::from_values(phis, alphas, values).expect("axes and values agree")
    }

    pub fn phi_axis(&self) -> &[f64] {
        &self.phi_axis
    }

    pub fn alpha_axis(&self) -> &[f64] {
        &self.alpha_axis
    }

    pub fn n_phi(&self) -> usize {
        self.phi_axis.len()
    }

    pub fn n_alpha(&self) -> usize {
        self.alpha_axis.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn signs(&self) -> &[Classification] {
        &self.signs
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n_alpha() + j]
    }

    pub fn sign(&self, i: usize, j: usize) -> Classification {
        self.signs[i * self.n_alpha() + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Diagonal of one grid cell in `(phi, alpha)` units.
    pub fn cell_diagonal(&self) -> f64 {
        let dphi = self.phi_axis[1] - self.phi_axis[0];
        let dalpha = self.alpha_axis[1] - self.alpha_axis[0];
        dphi.hypot(dalpha)
    }
}

/// Exact `ΔK / K0` for a defect template placed at `(phi, alpha)`.
#[derive(Debug, Clone)]
pub struct MapEvaluator {
    material: Bimaterial,
    loads: LoadSystem,
    template: DefectTemplate,
    k0: f64,
}

impl MapEvaluator {
    pub fn new(material: &Bimaterial, loads: &LoadSystem, template: &DefectTemplate) -> Result<Self> {
        DefectTemplate::new(template.kind, template.d, template.half_length)?;
        if loads.tractions().is_some() {
            return Err(Error::UnsupportedTractions);
        }
        let k0 = sif_total(material, loads)?.total;
        if k0 == 0.0 {
            return Err(Error::ZeroSif);
        }
        Ok(MapEvaluator {
            material: *material,
            loads: loads.clone(),
            template: *template,
            k0,
        })
    }

    pub fn ratio(&self, phi: f64, alpha: f64) -> Result<f64> {
        let b = assemble_b(&self.material, &self.loads, self.template.d, phi)?;
        self.ratio_with_gradient(b, phi, alpha)
    }

    fn ratio_with_gradient(&self, b: crate::model::Vec2, phi: f64, alpha: f64) -> Result<f64> {
        let defect = self.template.at(phi, alpha)?;
        Ok(delta_k_from_gradient(&self.material, b, &defect) / self.k0)
    }

    pub fn grid(&self, resolution: Resolution) -> Result<MapGrid> {
        let phis = phi_axis(resolution.n_phi);
        let alphas = alpha_axis(resolution.n_alpha);
        let rows: Vec<Vec<f64>> = phis
            .par_iter()
            .map(|&phi| {
                let b = assemble_b(&self.material, &self.loads, self.template.d, phi)?;
                alphas
                    .iter()
                    .map(|&alpha| self.ratio_with_gradient(b, phi, alpha))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        MapGrid::from_values(phis, alphas, rows.concat())
    }
}

/// Evaluates `ΔK / K0` at every node of the `(phi, alpha)` grid.
pub fn compute_map(
    material: &Bimaterial,
    loads: &LoadSystem,
    template: &DefectTemplate,
    resolution: Resolution,
) -> Result<MapGrid> {
    MapEvaluator::new(material, loads, template)?.grid(resolution)
}
