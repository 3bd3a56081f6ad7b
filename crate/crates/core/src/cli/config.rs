//! JSON run configuration with strict (unknown-key rejecting) parsing.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{
    three_point_load, two_point_load, Bimaterial, BoxTraction, Defect, DefectKind, DefectTemplate,
    Face, LoadSystem, PiecewiseTraction, PointForce, TractionPair,
};
use crate::region_map::Resolution;

use super::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub material: MaterialConfig,
    pub load: LoadConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tractions: Option<TractionsConfig>,
    #[serde(default)]
    pub defects: Vec<DefectConfig>,
    /// Angles in `defects` are in degrees.
    #[serde(default)]
    pub degrees: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<CompareConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub mu_plus: f64,
    pub mu_minus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LoadConfig {
    TwoPoint {
        #[serde(rename = "F")]
        force: f64,
        a: f64,
    },
    ThreePoint {
        #[serde(rename = "F")]
        force: f64,
        a: f64,
        b: f64,
    },
    Explicit { forces: Vec<ForceConfig> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForceConfig {
    pub face: Face,
    pub offset: f64,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TractionsConfig {
    #[serde(default)]
    pub upper: Vec<BoxConfig>,
    #[serde(default)]
    pub lower: Vec<BoxConfig>,
}

/// Uniform traction `height` on `x1` in `(-far, -near)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxConfig {
    pub near: f64,
    pub far: f64,
    pub height: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefectConfig {
    pub kind: DefectKind,
    pub d: f64,
    pub phi: f64,
    pub l: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    /// Explicit load distances; takes precedence over `a_range`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_range: Option<RangeConfig>,
}

/// `points` log-spaced values from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeConfig {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapConfig {
    pub defect: MapDefectConfig,
    #[serde(default)]
    pub resolution: Resolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDefectConfig {
    pub kind: DefectKind,
    pub d: f64,
    pub l: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_svg")]
    pub svg: bool,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_svg() -> bool {
    true
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: default_dir(),
            svg: default_svg(),
        }
    }
}

/// Prefixes a library domain error with the config path of the offending value.
fn at(path: impl Into<String>) -> impl FnOnce(Error) -> CliError {
    let path = path.into();
    move |e| match e {
        Error::Domain { field, reason } => CliError::Config {
            field: format!("{path}.{field}"),
            message: reason,
        },
        other => CliError::from(other),
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config {
            field: "config".into(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::from(Error::io(path, e)))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }

    pub fn material(&self) -> Result<Bimaterial, CliError> {
        Bimaterial::new(self.material.mu_plus, self.material.mu_minus).map_err(at("material"))
    }

    /// Point forces of `load`, without tractions.
    pub fn point_loads(&self) -> Result<LoadSystem, CliError> {
        match &self.load {
            LoadConfig::TwoPoint { force, a } => two_point_load(*force, *a).map_err(at("load")),
            LoadConfig::ThreePoint { force, a, b } => three_point_load(*force, *a, *b).map_err(at("load")),
            LoadConfig::Explicit { forces } => forces
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    PointForce::new(f.face, f.offset, f.magnitude).map_err(at(format!("load.forces[{i}]")))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(LoadSystem::new),
        }
    }

    /// Point forces plus any distributed tractions.
    pub fn loads(&self) -> Result<LoadSystem, CliError> {
        let loads = self.point_loads()?;
        let Some(t) = &self.tractions else {
            return Ok(loads);
        };
        let face = |name: &str, boxes: &[BoxConfig]| -> Result<PiecewiseTraction, CliError> {
            boxes
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    BoxTraction::new(b.near, b.far, b.height).map_err(at(format!("tractions.{name}[{i}]")))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(PiecewiseTraction::new)
        };
        let pair = TractionPair::new(face("upper", &t.upper)?, face("lower", &t.lower)?);
        Ok(loads.with_tractions(pair))
    }

    fn angle(&self, value: f64) -> f64 {
        if self.degrees {
            value.to_radians()
        } else {
            value
        }
    }

    pub fn defects(&self) -> Result<Vec<Defect>, CliError> {
        self.defects
            .iter()
            .enumerate()
            .map(|(i, d)| {
                Defect::new(d.kind, d.d, self.angle(d.phi), d.l, self.angle(d.alpha))
                    .map_err(at(format!("defects[{i}]")))
            })
            .collect()
    }

    /// Builds the load for a sweep at distance `a`, keeping the configured force and spread.
    pub fn load_at(&self, a: f64) -> Result<LoadSystem, Error> {
        match &self.load {
            LoadConfig::TwoPoint { force, .. } => two_point_load(*force, a),
            LoadConfig::ThreePoint { force, b, .. } => three_point_load(*force, a, *b),
            LoadConfig::Explicit { .. } => Err(Error::domain("kind", "sweeps need a two_point or three_point load")),
        }
    }

    /// Spread `b` of the load when a three-point approximation applies.
    pub fn spread(&self) -> Option<(f64, f64)> {
        match &self.load {
            LoadConfig::TwoPoint { a, .. } => Some((*a, 0.0)),
            LoadConfig::ThreePoint { a, b, .. } => Some((*a, *b)),
            LoadConfig::Explicit { .. } => None,
        }
    }

    pub fn sweep_values(&self) -> Result<Vec<f64>, CliError> {
        let missing = || CliError::Config {
            field: "compare".into(),
            message: "need a_values or a_range".into(),
        };
        let compare = self.compare.as_ref().ok_or_else(missing)?;
        if let Some(values) = &compare.a_values {
            if values.is_empty() || values.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
                return Err(CliError::Config {
                    field: "compare.a_values".into(),
                    message: "need a non-empty list of positive distances".into(),
                });
            }
            return Ok(values.clone());
        }
        let r = compare.a_range.ok_or_else(missing)?;
        if !(r.min.is_finite() && r.max.is_finite() && r.min > 0.0 && r.max >= r.min && r.points >= 2) {
            return Err(CliError::Config {
                field: "compare.a_range".into(),
                message: "need 0 < min <= max and points >= 2".into(),
            });
        }
        let (lo, hi) = (r.min.ln(), r.max.ln());
        Ok((0..r.points)
            .map(|k| (lo + (hi - lo) * k as f64 / (r.points - 1) as f64).exp())
            .collect())
    }

    pub fn map_template(&self) -> Result<(DefectTemplate, Resolution), CliError> {
        let map = self.map.as_ref().ok_or_else(|| CliError::Config {
            field: "map".into(),
            message: "missing map block".into(),
        })?;
        let template =
            DefectTemplate::new(map.defect.kind, map.defect.d, map.defect.l).map_err(at("map.defect"))?;
        let resolution =
            Resolution::new(map.resolution.n_phi, map.resolution.n_alpha).map_err(at("map"))?;
        Ok((template, resolution))
    }
}
