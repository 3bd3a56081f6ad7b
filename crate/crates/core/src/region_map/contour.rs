//! Zero-level contours of a map grid by marching squares.

use std::collections::HashMap;

use serde::Serialize;

use super::MapGrid;

/// A zero crossing of `ΔK / K0`, as `(phi, alpha)` points in traversal order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryCurve {
    pub points: Vec<(f64, f64)>,
}

impl BoundaryCurve {
    pub fn is_closed(&self) -> bool {
        self.points.len() > 2 && self.points.first() == self.points.last()
    }
}

/// A grid edge: `Phi(i, j)` joins nodes `(i, j)` and `(i + 1, j)`,
/// `Alpha(i, j)` joins `(i, j)` and `(i, j + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Edge {
    Phi(usize, usize),
    Alpha(usize, usize),
}

fn above(v: f64) -> bool {
    v > 0.0
}

/// Zero contours, resolving saddle cells with the mean of the four corners.
pub fn extract_boundary(grid: &MapGrid) -> Vec<BoundaryCurve> {
    extract_boundary_with(grid, |i, j| {
        0.25 * (grid.value(i, j) + grid.value(i + 1, j) + grid.value(i + 1, j + 1) + grid.value(i, j + 1))
    })
}

/// Zero contours, resolving saddle cells with `center(i, j)`: the value at the
/// centre of the cell whose lower-left node is `(i, j)`.
pub fn extract_boundary_with<F>(grid: &MapGrid, center: F) -> Vec<BoundaryCurve>
where
    F: Fn(usize, usize) -> f64,
{
    let (n, m) = (grid.n_phi(), grid.n_alpha());
    let mut segments: Vec<(Edge, Edge)> = Vec::new();

    for i in 0..n - 1 {
        for j in 0..m - 1 {
            // corners counter-clockwise from lower-left
            let corners = [
                grid.value(i, j),
                grid.value(i + 1, j),
                grid.value(i + 1, j + 1),
                grid.value(i, j + 1),
            ];
            // edge k joins corner k and corner k + 1
            let edges = [
                Edge::Phi(i, j),
                Edge::Alpha(i + 1, j),
                Edge::Phi(i, j + 1),
                Edge::Alpha(i, j),
            ];
            let crossed: Vec<usize> = (0..4)
                .filter(|&k| above(corners[k]) != above(corners[(k + 1) % 4]))
                .collect();
            match crossed.len() {
                0 => {}
                2 => segments.push((edges[crossed[0]], edges[crossed[1]])),
                4 => {
                    if above(center(i, j)) == above(corners[0]) {
                        // lower-left and upper-right joined through the centre:
                        // cut off the other two corners
                        segments.push((edges[0], edges[1]));
                        segments.push((edges[2], edges[3]));
                    } else {
                        segments.push((edges[3], edges[0]));
                        segments.push((edges[1], edges[2]));
                    }
                }
                _ => unreachable!("a closed loop crosses an even number of edges"),
            }
        }
    }

    chain(grid, &segments)
}

fn crossing(grid: &MapGrid, edge: Edge) -> (f64, f64) {
    let ((i0, j0), (i1, j1)) = match edge {
        Edge::Phi(i, j) => ((i, j), (i + 1, j)),
        Edge::Alpha(i, j) => ((i, j), (i, j + 1)),
    };
    let (v0, v1) = (grid.value(i0, j0), grid.value(i1, j1));
    let t = v0 / (v0 - v1);
    let lerp = |a: f64, b: f64| a + t * (b - a);
    (
        lerp(grid.phi_axis()[i0], grid.phi_axis()[i1]),
        lerp(grid.alpha_axis()[j0], grid.alpha_axis()[j1]),
    )
}

/// Joins segments sharing an edge into polylines.
fn chain(grid: &MapGrid, segments: &[(Edge, Edge)]) -> Vec<BoundaryCurve> {
    let mut incident: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (s, &(a, b)) in segments.iter().enumerate() {
        incident.entry(a).or_default().push(s);
        incident.entry(b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut curves = Vec::new();

    let other_end = |s: usize, e: Edge| {
        let (a, b) = segments[s];
        if a == e {
            b
        } else {
            a
        }
    };
    let next_segment = |e: Edge, used: &[bool]| {
        incident
            .get(&e)
            .and_then(|ss| ss.iter().copied().find(|&s| !used[s]))
    };

    // open chains start at edges touched by a single segment (grid border)
    let mut starts: Vec<Edge> = incident
        .iter()
        .filter(|(_, ss)| ss.len() == 1)
        .map(|(&e, _)| e)
        .collect();
    starts.sort_by_key(|e| edge_order(*e));
    let mut loop_starts: Vec<usize> = (0..segments.len()).collect();
    loop_starts.sort_by_key(|&s| edge_order(segments[s].0));

    let walk = |start: Edge, used: &mut Vec<bool>| {
        let mut edges = vec![start];
        let mut at = start;
        while let Some(s) = next_segment(at, used) {
            used[s] = true;
            at = other_end(s, at);
            edges.push(at);
        }
        BoundaryCurve {
            points: edges.into_iter().map(|e| crossing(grid, e)).collect(),
        }
    };

    for e in starts {
        if next_segment(e, &used).is_some() {
            curves.push(walk(e, &mut used));
        }
    }
    for s in loop_starts {
        if !used[s] {
            curves.push(walk(segments[s].0, &mut used));
        }
    }
    curves
}

fn edge_order(e: Edge) -> (usize, usize, u8) {
    match e {
        Edge::Phi(i, j) => (i, j, 0),
        Edge::Alpha(i, j) => (i, j, 1),
    }
}
