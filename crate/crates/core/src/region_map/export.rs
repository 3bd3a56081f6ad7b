//! CSV and SVG output for region maps.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{BoundaryCurve, MapGrid};
use crate::error::{Error, Result};
use crate::perturbation::Classification;

pub const SHIELDING_FILL: &str = "#d3d3d3";
pub const AMPLIFICATION_FILL: &str = "#505050";

const SVG_WIDTH: f64 = 720.0;
const SVG_HEIGHT: f64 = 360.0;
const SVG_MARGIN: f64 = 40.0;

/// Destinations for [`export_map`]; the SVG is optional.
#[derive(Debug, Clone)]
pub struct ExportPaths {
    pub grid_csv: PathBuf,
    pub curves_csv: PathBuf,
    pub svg: Option<PathBuf>,
}

impl ExportPaths {
    /// `map_grid.csv`, `map_boundary.csv` and optionally `map.svg` under `dir`.
    pub fn in_dir(dir: &Path, svg: bool) -> Self {
        ExportPaths {
            grid_csv: dir.join("map_grid.csv"),
            curves_csv: dir.join("map_boundary.csv"),
            svg: svg.then(|| dir.join("map.svg")),
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_grid_csv(grid: &MapGrid) -> String {
    let mut out = String::from("phi,alpha,ratio,class\n");
    for (i, &phi) in grid.phi_axis().iter().enumerate() {
        for (j, &alpha) in grid.alpha_axis().iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_f64(phi),
                fmt_f64(alpha),
                fmt_f64(grid.value(i, j)),
                grid.sign(i, j).as_str()
            );
        }
    }
    out
}

/// Parses the output of [`write_grid_csv`] back into a grid.
pub fn read_grid_csv(text: &str) -> Result<MapGrid> {
    let bad = |line: usize, why: &str| Error::domain("grid csv", format!("line {line}: {why}"));
    let mut lines = text.lines();
    if lines.next() != Some("phi,alpha,ratio,class") {
        return Err(bad(1, "missing header"));
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(bad(n + 2, "expected 4 fields"));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(n + 2, "not a number"));
        rows.push((num(fields[0])?, num(fields[1])?, num(fields[2])?));
    }
    let phis: Vec<f64> = dedup_in_order(rows.iter().map(|r| r.0));
    if phis.is_empty() || rows.len() % phis.len() != 0 {
        return Err(bad(0, "rows do not form a grid"));
    }
    let n_alpha = rows.len() / phis.len();
    let alphas: Vec<f64> = rows[..n_alpha].iter().map(|r| r.1).collect();
    MapGrid::from_values(phis, alphas, rows.into_iter().map(|r| r.2).collect())
}

fn dedup_in_order(xs: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for x in xs {
        if out.last() != Some(&x) {
            out.push(x);
        }
    }
    out
}

pub fn write_curves_csv(curves: &[BoundaryCurve]) -> String {
    let mut out = String::from("curve_id,phi,alpha\n");
    for (id, curve) in curves.iter().enumerate() {
        for &(phi, alpha) in &curve.points {
            let _ = writeln!(out, "{id},{},{}", fmt_f64(phi), fmt_f64(alpha));
        }
    }
    out
}

/// Region map as SVG: phi to the right over `(-pi, pi)`, alpha upwards over `(0, pi)`.
pub fn render_svg(grid: &MapGrid, curves: &[BoundaryCurve]) -> String {
    let (n, m) = (grid.n_phi(), grid.n_alpha());
    let cell_w = SVG_WIDTH / n as f64;
    let cell_h = SVG_HEIGHT / m as f64;
    let x_of = |phi: f64| SVG_MARGIN + (phi + std::f64::consts::PI) / (2.0 * std::f64::consts::PI) * SVG_WIDTH;
    let y_of = |alpha: f64| SVG_MARGIN + (1.0 - alpha / std::f64::consts::PI) * SVG_HEIGHT;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = SVG_WIDTH + 2.0 * SVG_MARGIN,
        h = SVG_HEIGHT + 2.0 * SVG_MARGIN
    );
    for (class, fill) in [
        (Classification::Shielding, SHIELDING_FILL),
        (Classification::Amplification, AMPLIFICATION_FILL),
    ] {
        // one rectangle per run of equal class along phi, row by row in alpha
        let mut path = String::new();
        for j in 0..m {
            let y = SVG_MARGIN + (m - 1 - j) as f64 * cell_h;
            let mut i = 0;
            while i < n {
                if grid.sign(i, j) != class {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < n && grid.sign(i, j) == class {
                    i += 1;
                }
                let x = SVG_MARGIN + start as f64 * cell_w;
                let w = (i - start) as f64 * cell_w;
                let _ = write!(path, "M{x:.4} {y:.4}h{w:.4}v{cell_h:.4}h{:.4}z", -w);
            }
        }
        let _ = writeln!(
            out,
            r#"<g id="{}" fill="{fill}" stroke="none"><path d="{path}"/></g>"#,
            class.as_str()
        );
    }
    let _ = writeln!(out, r#"<g id="boundaries" fill="none" stroke="black" stroke-width="1">"#);
    for (id, curve) in curves.iter().enumerate() {
        let points: Vec<String> = curve
            .points
            .iter()
            .map(|&(phi, alpha)| format!("{:.4},{:.4}", x_of(phi), y_of(alpha)))
            .collect();
        let _ = writeln!(
            out,
            r#"<g id="curve-{id}"><polyline points="{}"/></g>"#,
            points.join(" ")
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        r#"<rect x="{SVG_MARGIN}" y="{SVG_MARGIN}" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">phi</text>"#,
        SVG_MARGIN + 0.5 * SVG_WIDTH,
        SVG_HEIGHT + 1.75 * SVG_MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">alpha</text>"#,
        0.5 * SVG_MARGIN,
        SVG_MARGIN + 0.5 * SVG_HEIGHT
    );
    out.push_str("</svg>\n");
    out
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes the grid, boundary and optional SVG files; returns the paths written.
pub fn export_map(grid: &MapGrid, curves: &[BoundaryCurve], paths: &ExportPaths) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    write_file(&paths.grid_csv, &write_grid_csv(grid))?;
    written.push(paths.grid_csv.clone());
    write_file(&paths.curves_csv, &write_curves_csv(curves))?;
    written.push(paths.curves_csv.clone());
    if let Some(svg) = &paths.svg {
        write_file(svg, &render_svg(grid, curves))?;
        written.push(svg.clone());
    }
    Ok(written)
}
