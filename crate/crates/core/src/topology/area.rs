//! Area with multiplicities, `F = integral of Ind(path, P) dS`.
//!
//! The line-integral route integrates the 1-form `2 sn^2(r/2) d(theta)` in geodesic polar
//! coordinates `(r, theta)` about a base point; its exterior derivative is the area form, so
//! by Green's formula with multiplicities its integral over the path is `F`. Along the
//! path the integrand reduces to `tanc(r/2) <velocity, e_theta>`, which stays bounded when
//! the path passes through the base point. The grid oracle evaluates the index at the
//! centers of a chart grid and sums it against the chart's area element.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::chart::{Chart, Point2};
use super::path::PathTrace;
use super::winding::crossing_number;
use crate::error::{Error, Result};
use crate::spaceform::{Model, SpaceForm, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AreaMethod {
    LineIntegral,
    GridOracle,
}

#[derive(Debug, Clone)]
pub struct AreaResult {
    pub value: f64,
    pub method: AreaMethod,
    pub base_point: Vec3,
    /// Path vertices used by the quadrature or the polyline.
    pub samples: usize,
    /// Grid cells per side for the oracle.
    pub resolution: Option<usize>,
    pub estimated_error: f64,
}

/// Largest admissible `sqrt(c) r` from the base point on the sphere.
const CUT_LOCUS_MARGIN: f64 = 0.99 * PI;

fn check_cut_locus(path: &PathTrace, o: &Vec3) -> Result<()> {
    let sf = path.space_form();
    if sf.c() <= 0.0 {
        return Ok(());
    }
    let far = path.polyline().iter().map(|p| sf.distance(o, p)).fold(0.0, f64::max);
    if far * sf.sqrt_abs_c() > CUT_LOCUS_MARGIN {
        return Err(Error::BasePoint(format!(
            "path reaches distance {far:.6} from the base point, beyond the cut-locus margin; \
             re-center the base point"
        )));
    }
    Ok(())
}

/// Pick an admissible base point: the requested one, else the projected centroid, else a
/// path vertex.
pub fn choose_base_point(path: &PathTrace, requested: Option<Vec3>) -> Result<Vec3> {
    if let Some(o) = requested {
        path.space_form().check_on_surface(&o)?;
        check_cut_locus(path, &o)?;
        return Ok(o);
    }
    let centroid = path.base_point();
    if check_cut_locus(path, &centroid).is_ok() {
        return Ok(centroid);
    }
    let poly = path.polyline();
    for p in [poly[0], poly[poly.len() / 3], poly[2 * poly.len() / 3]] {
        if check_cut_locus(path, &p).is_ok() {
            return Ok(p);
        }
    }
    Err(Error::BasePoint("no admissible base point: the path is not contained in an open hemisphere-like region".into()))
}

/// Integrand `tanc(r/2) <v, e_theta>` at a point with velocity `v`.
fn polar_integrand(sf: &SpaceForm, o: &Vec3, p: &Vec3, v: &Vec3) -> f64 {
    let (r, y) = sf.log_map_raw(o, p);
    if r == 0.0 {
        return 0.0;
    }
    let radial = match sf.model() {
        Model::Plane => y,
        Model::Embedded => sf.geodesic_velocity(o, &y, r),
    };
    let e_theta = sf.rotate_quarter(p, &radial);
    sf.tanc(0.5 * r) * sf.inner(v, &e_theta)
}

/// Line integral and its coarse-rule error estimate about `o` (no admissibility checks).
pub(crate) fn line_integral(path: &PathTrace, o: &Vec3) -> Result<(f64, f64)> {
    let sf = path.space_form();
    let (mut fine, mut coarse) = (0.0, 0.0);
    for seg in path.segments() {
        let vals: Vec<f64> = seg
            .points
            .iter()
            .zip(&seg.velocity)
            .map(|(p, v)| polar_integrand(&sf, o, p, v))
            .collect();
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::BasePoint("polar integrand is not finite".into()));
        }
        fine += seg.integrate(&vals);
        coarse += seg.integrate_coarse(&vals);
    }
    Ok((fine, (fine - coarse).abs()))
}

/// Polar angle unwrap check: consecutive vertices must not jump by an ambiguous amount.
fn check_unwrap(path: &PathTrace, o: &Vec3) -> Result<()> {
    let sf = path.space_form();
    let (f1, f2) = sf.standard_frame(o);
    let step = path.max_step();
    let poly = path.polyline();
    let mut prev: Option<f64> = None;
    for p in poly.iter().chain(std::iter::once(&poly[0])) {
        let (r, y) = sf.log_map_raw(o, p);
        if r <= 4.0 * step {
            prev = None;
            continue;
        }
        let theta = sf.inner(&y, &f2).atan2(sf.inner(&y, &f1));
        if let Some(q) = prev {
            let mut d = theta - q;
            d -= (d / (2.0 * PI)).round() * 2.0 * PI;
            if d.abs() > 0.75 * PI {
                return Err(Error::Resolution(format!("polar angle jumps by {d:.3} between samples")));
            }
        }
        prev = Some(theta);
    }
    Ok(())
}

/// Area with multiplicities by the polar line integral about `base` (or a default base point).
pub fn area_with_multiplicities(path: &PathTrace, base: Option<Vec3>) -> Result<AreaResult> {
    let o = choose_base_point(path, base)?;
    check_unwrap(path, &o)?;
    let (value, err) = line_integral(path, &o)?;
    Ok(AreaResult {
        value,
        method: AreaMethod::LineIntegral,
        base_point: o,
        samples: path.segments().iter().map(|s| s.len()).sum(),
        resolution: None,
        estimated_error: err,
    })
}

struct Grid {
    x0: f64,
    y0: f64,
    hx: f64,
    hy: f64,
    res: usize,
}

impl Grid {
    fn center(&self, ix: usize, iy: usize) -> Point2 {
        [self.x0 + (ix as f64 + 0.5) * self.hx, self.y0 + (iy as f64 + 0.5) * self.hy]
    }

    fn cell_of(&self, x: f64, y: f64) -> (isize, isize) {
        (((x - self.x0) / self.hx).floor() as isize, ((y - self.y0) / self.hy).floor() as isize)
    }
}

/// Sum of `Ind * dS` over the grid; returns the value and the boundary-cell variance term.
fn grid_sum(poly: &[Point2], chart: &Chart, grid: &Grid) -> (f64, f64) {
    let res = grid.res;
    let mut boundary = vec![false; res * res];
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        let (ax, ay) = grid.cell_of(a[0].min(b[0]), a[1].min(b[1]));
        let (bx, by) = grid.cell_of(a[0].max(b[0]), a[1].max(b[1]));
        for iy in (ay - 1).max(0)..=(by + 1).min(res as isize - 1) {
            for ix in (ax - 1).max(0)..=(bx + 1).min(res as isize - 1) {
                boundary[iy as usize * res + ix as usize] = true;
            }
        }
    }
    let cell_area = grid.hx * grid.hy;

    let rows: Vec<f64> = (0..res)
        .into_par_iter()
        .map(|iy| {
            let y = grid.center(0, iy)[1];
            let mut crossings: Vec<(f64, i64)> = Vec::new();
            for i in 0..poly.len() {
                let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
                let up = a[1] <= y && b[1] > y;
                let down = b[1] <= y && a[1] > y;
                if up || down {
                    let x = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                    crossings.push((x, if up { 1 } else { -1 }));
                }
            }
            crossings.sort_by(|p, q| p.0.total_cmp(&q.0));
            // winding at x = sum of signs of crossings to the right of x
            let mut right: i64 = crossings.iter().map(|c| c.1).sum();
            let mut k = 0;
            let mut sum = 0.0;
            for ix in 0..res {
                let w = grid.center(ix, iy);
                while k < crossings.len() && crossings[k].0 <= w[0] {
                    right -= crossings[k].1;
                    k += 1;
                }
                if right != 0 && !boundary[iy * res + ix] {
                    sum += right as f64 * chart.area_element(w) * cell_area;
                }
            }
            sum
        })
        .collect();

    let edge_cells: Vec<usize> = (0..res * res).filter(|&i| boundary[i]).collect();
    let edge: Vec<(f64, f64)> = edge_cells
        .par_iter()
        .map(|&i| {
            let (ix, iy) = (i % res, i / res);
            let c = grid.center(ix, iy);
            let mut sum = 0.0;
            for (dx, dy) in [(-0.25, -0.25), (0.25, -0.25), (-0.25, 0.25), (0.25, 0.25)] {
                let w = [c[0] + dx * grid.hx, c[1] + dy * grid.hy];
                let ind = crossing_number(poly, w);
                sum += ind as f64 * chart.area_element(w) * 0.25 * cell_area;
            }
            let weight = chart.area_element(c) * cell_area;
            (sum, 0.25 * weight * weight)
        })
        .collect();

    let value = rows.iter().sum::<f64>() + edge.iter().map(|e| e.0).sum::<f64>();
    let variance = edge.iter().map(|e| e.1).sum::<f64>();
    (value, variance)
}

/// Brute-force area with multiplicities on a `resolution x resolution` chart grid.
///
/// The error estimate combines the change under halving the resolution with a
/// three-sigma bound for the cells crossed by the path.
pub fn area_grid_oracle(path: &PathTrace, resolution: usize, base: Option<Vec3>) -> Result<AreaResult> {
    if resolution < 8 {
        return Err(Error::InvalidInput("grid resolution must be at least 8".into()));
    }
    let o = choose_base_point(path, base)?;
    let chart = Chart::centered(path.space_form(), o);
    let poly = path.chart_polyline(&chart)?;
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for w in &poly {
        for k in 0..2 {
            lo[k] = lo[k].min(w[k]);
            hi[k] = hi[k].max(w[k]);
        }
    }
    let pad = 1e-9 * (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-300);
    let make = |res: usize| Grid {
        x0: lo[0] - pad,
        y0: lo[1] - pad,
        hx: (hi[0] - lo[0] + 2.0 * pad) / res as f64,
        hy: (hi[1] - lo[1] + 2.0 * pad) / res as f64,
        res,
    };
    let (value, variance) = grid_sum(&poly, &chart, &make(resolution));
    let (half, _) = grid_sum(&poly, &chart, &make(resolution / 2));
    Ok(AreaResult {
        value,
        method: AreaMethod::GridOracle,
        base_point: o,
        samples: poly.len(),
        resolution: Some(resolution),
        estimated_error: (value - half).abs() + 3.0 * variance.sqrt(),
    })
}
