use std::f64::consts::{PI, TAU};

use super::chart::{Chart, Point2};
use super::winding::{turn_angle, WINDING_RESIDUAL};
use crate::error::{Error, Result};
use crate::quadrature::clenshaw_curtis;
use crate::spaceform::{Model, SpaceForm, Vec3};

/// Tangent turns closer than this to `+-pi` are treated as cusps.
const CUSP_TOL: f64 = 1e-6;
/// Tangent turns smaller than this are smooth joins, not corners.
const CORNER_TOL: f64 = 1e-9;

/// Quadrature rule attached to a segment's nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Uniform nodes on a full period, last node repeating the first.
    Trapezoid,
    /// Chebyshev–Lobatto nodes with Clenshaw–Curtis weights.
    ClenshawCurtis,
}

/// A smooth piece of a closed path, sampled in its own parameter `u`.
#[derive(Debug, Clone)]
pub struct Segment {
    pub points: Vec<Vec3>,
    /// `d point / du` at each node.
    pub velocity: Vec<Vec3>,
    /// `d^2 point / du^2` at each node.
    pub accel: Vec<Vec3>,
    /// Quadrature weights in `u`.
    pub weights: Vec<f64>,
    pub rule: Rule,
    /// One-sided unit tangents at the two ends; defined even where the velocity vanishes.
    pub start_tangent: Vec3,
    pub end_tangent: Vec3,
}

impl Segment {
    /// Full period of a smooth closed curve sampled at `t_j = 2 pi j / n`.
    pub fn periodic(sf: &SpaceForm, points: &[Vec3], velocity: &[Vec3], accel: &[Vec3]) -> Self {
        let n = points.len();
        let h = TAU / n as f64;
        let close = |v: &[Vec3]| -> Vec<Vec3> {
            let mut out = v.to_vec();
            out.push(v[0]);
            out
        };
        let mut weights = vec![h; n + 1];
        weights[0] = 0.5 * h;
        weights[n] = 0.5 * h;
        let tangent = velocity[0] / sf.norm(&velocity[0]);
        Segment {
            points: close(points),
            velocity: close(velocity),
            accel: close(accel),
            weights,
            rule: Rule::Trapezoid,
            start_tangent: tangent,
            end_tangent: tangent,
        }
    }

    /// Sample `f(u) -> (point, velocity, accel)` on `[u0, u1]` at `m + 1` Chebyshev–Lobatto
    /// nodes; `m` must be a multiple of four. End tangents default to the normalized
    /// end velocities.
    pub fn chebyshev(
        sf: &SpaceForm,
        u0: f64,
        u1: f64,
        m: usize,
        f: impl Fn(f64) -> (Vec3, Vec3, Vec3),
    ) -> Self {
        assert!(m >= 4 && m.is_multiple_of(4), "node count must be a multiple of four");
        let (nodes, w) = clenshaw_curtis(m);
        let len = u1 - u0;
        let mut seg = Segment {
            points: Vec::with_capacity(m + 1),
            velocity: Vec::with_capacity(m + 1),
            accel: Vec::with_capacity(m + 1),
            weights: w.iter().map(|w| w * len).collect(),
            rule: Rule::ClenshawCurtis,
            start_tangent: Vec3::zeros(),
            end_tangent: Vec3::zeros(),
        };
        for x in nodes {
            let (p, v, a) = f(u0 + len * x);
            seg.points.push(p);
            seg.velocity.push(v);
            seg.accel.push(a);
        }
        let unit = |v: &Vec3| v / sf.norm(v);
        seg.start_tangent = unit(&seg.velocity[0]);
        seg.end_tangent = unit(&seg.velocity[m]);
        seg
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Quadrature of per-node values with this segment's rule.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// The same quadrature using every other node; used as an error estimate.
    pub fn integrate_coarse(&self, values: &[f64]) -> f64 {
        let m = self.points.len() - 1;
        match self.rule {
            Rule::Trapezoid => {
                let h = 2.0 * self.weights[1];
                let mut s = 0.5 * h * (values[0] + values[m]);
                for j in (2..m).step_by(2) {
                    s += h * values[j];
                }
                s
            }
            Rule::ClenshawCurtis => {
                let (_, w) = clenshaw_curtis(m / 2);
                let scale = self.weights.iter().sum::<f64>();
                w.iter().enumerate().map(|(j, w)| w * scale * values[2 * j]).sum()
            }
        }
    }
}

/// A corner of a piecewise-smooth path.
#[derive(Debug, Clone)]
pub struct Corner {
    /// Index of the segment that starts at this corner.
    pub segment: usize,
    pub point: Vec3,
    pub tangent_in: Vec3,
    pub tangent_out: Vec3,
    /// Signed angle from the incoming to the outgoing tangent, in `(-pi, pi]`.
    pub turn: f64,
    pub is_cusp: bool,
}

/// Closed piecewise-smooth path on a space form.
#[derive(Debug, Clone)]
pub struct PathTrace {
    sf: SpaceForm,
    segments: Vec<Segment>,
    orientation: i8,
    source: String,
}

impl PathTrace {
    /// Assemble a closed path; consecutive segments must share endpoints.
    pub fn new(sf: SpaceForm, segments: Vec<Segment>, source: impl Into<String>) -> Result<Self> {
        if segments.is_empty() || segments.iter().any(|s| s.len() < 2) {
            return Err(Error::InvalidInput("path needs non-empty segments".into()));
        }
        let scale = match sf.model() {
            Model::Plane => {
                1.0 + segments.iter().flat_map(|s| &s.points).map(|p| p.norm()).fold(0.0, f64::max)
            }
            Model::Embedded => 1.0 / sf.sqrt_abs_c(),
        };
        for i in 0..segments.len() {
            let end = segments[i].points.last().unwrap();
            let next = &segments[(i + 1) % segments.len()].points[0];
            if (end - next).norm() > 1e-9 * scale {
                return Err(Error::InvalidInput(format!(
                    "segment {i} does not join the next one (gap {:e})",
                    (end - next).norm()
                )));
            }
        }
        let mut path = PathTrace { sf, segments, orientation: 1, source: source.into() };
        path.orientation = path.measure_orientation();
        Ok(path)
    }

    pub fn space_form(&self) -> SpaceForm {
        self.sf
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// `+1` if the path bounds positive area with multiplicities, `-1` otherwise.
    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    fn measure_orientation(&self) -> i8 {
        match super::area::line_integral(self, &self.base_point()) {
            Ok((v, _)) if v < 0.0 => -1,
            _ => 1,
        }
    }

    /// Vertices of the closed polyline, without the repeated closing vertex.
    pub fn polyline(&self) -> Vec<Vec3> {
        let mut out = Vec::new();
        for seg in &self.segments {
            out.extend_from_slice(&seg.points[..seg.points.len() - 1]);
        }
        out
    }

    pub fn chart_polyline(&self, chart: &Chart) -> Result<Vec<Point2>> {
        self.polyline().iter().map(|p| chart.to_chart(p)).collect()
    }

    /// Largest chord between consecutive vertices.
    pub fn max_step(&self) -> f64 {
        let poly = self.polyline();
        (0..poly.len())
            .map(|i| self.sf.distance(&poly[i], &poly[(i + 1) % poly.len()]))
            .fold(0.0, f64::max)
    }

    /// Projected Euclidean centroid of the vertices.
    pub fn base_point(&self) -> Vec3 {
        let poly = self.polyline();
        let mean = poly.iter().fold(Vec3::zeros(), |acc, p| acc + p) / poly.len() as f64;
        match self.sf.model() {
            Model::Plane => mean,
            Model::Embedded => self.sf.project_to_surface(&mean).unwrap_or_else(|_| poly[0]),
        }
    }

    pub fn corners(&self) -> Vec<Corner> {
        let n = self.segments.len();
        let mut out = Vec::new();
        for j in 0..n {
            let prev = &self.segments[(j + n - 1) % n];
            let next = &self.segments[j];
            let p = next.points[0];
            let (tin, tout) = (prev.end_tangent, next.start_tangent);
            let jin = self.sf.rotate_quarter(&p, &tin);
            let turn = self.sf.inner(&tout, &jin).atan2(self.sf.inner(&tout, &tin));
            if turn.abs() > CORNER_TOL {
                out.push(Corner {
                    segment: j,
                    point: p,
                    tangent_in: tin,
                    tangent_out: tout,
                    turn,
                    is_cusp: PI - turn.abs() < CUSP_TOL,
                });
            }
        }
        out
    }

    /// Interior angle at each corner; zero at cusps.
    ///
    /// For a path of orientation `s` the tangent jumps by `s (pi - theta)` at a corner of
    /// interior angle `theta`.
    pub fn interior_angles(&self) -> Vec<f64> {
        let s = f64::from(self.orientation);
        self.corners()
            .iter()
            .map(|c| if c.is_cusp { 0.0 } else { PI - s * c.turn })
            .collect()
    }

    /// Rotation index by tangent-angle tracking in an oriented chart.
    ///
    /// Smooth stretches contribute their accumulated turning; corners contribute the
    /// measured jump, and cusps contribute `orientation * pi`.
    pub fn rotation_index(&self) -> Result<i64> {
        let chart = Chart::centered(self.sf, self.base_point());
        let mut total = 0.0;
        for seg in &self.segments {
            let m = seg.len() - 1;
            let dirs: Vec<Point2> = (0..=m)
                .map(|i| {
                    let v = if i == 0 {
                        seg.start_tangent
                    } else if i == m {
                        seg.end_tangent
                    } else {
                        seg.velocity[i]
                    };
                    chart.push_tangent(&seg.points[i], &v)
                })
                .collect();
            for w in dirs.windows(2) {
                let inc = turn_angle(w[0], w[1]);
                if inc.abs() > 0.5 * PI {
                    return Err(Error::Resolution(format!(
                        "tangent turns by {inc:.3} rad between consecutive nodes"
                    )));
                }
                total += inc;
            }
        }
        for c in self.corners() {
            if c.is_cusp {
                total += f64::from(self.orientation) * PI;
            } else {
                let a = chart.push_tangent(&c.point, &c.tangent_in);
                let b = chart.push_tangent(&c.point, &c.tangent_out);
                total += turn_angle(a, b);
            }
        }
        let turns = total / TAU;
        let nu = turns.round();
        if (turns - nu).abs() > WINDING_RESIDUAL {
            return Err(Error::Resolution(format!("rotation residual {:.3} turns", turns - nu)));
        }
        Ok(nu as i64)
    }

    /// Winding number about a surface point, computed in the given chart.
    pub fn winding_about(&self, chart: &Chart, p: &Vec3) -> Result<i64> {
        let poly = self.chart_polyline(chart)?;
        let q = chart.to_chart(p)?;
        let diam = poly.iter().fold(0.0_f64, |m, w| m.max(w[0].abs()).max(w[1].abs()));
        super::winding::winding_number(&poly, q, 1e-12 * (1.0 + diam))
    }

    /// Signed geodesic curvature at node `i` of segment `s`, from the stored derivatives.
    pub fn geodesic_curvature(&self, s: usize, i: usize) -> f64 {
        let seg = &self.segments[s];
        let (p, v, a) = (&seg.points[i], &seg.velocity[i], &seg.accel[i]);
        let speed = self.sf.norm(v);
        self.sf.inner(a, &self.sf.rotate_quarter(p, v)) / (speed * speed * speed)
    }

    /// Total signed geodesic curvature over the smooth stretches.
    pub fn total_geodesic_curvature(&self) -> f64 {
        (0..self.segments.len())
            .map(|s| {
                let seg = &self.segments[s];
                let vals: Vec<f64> = (0..seg.len())
                    .map(|i| self.geodesic_curvature(s, i) * self.sf.norm(&seg.velocity[i]))
                    .collect();
                seg.integrate(&vals)
            })
            .sum()
    }

    pub fn length(&self) -> f64 {
        self.segments
            .iter()
            .map(|seg| {
                let speeds: Vec<f64> = seg.velocity.iter().map(|v| self.sf.norm(v)).collect();
                seg.integrate(&speeds)
            })
            .sum()
    }
}
