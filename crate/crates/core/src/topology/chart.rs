use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaceform::{Model, SpaceForm, Vec3};

pub type Point2 = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartKind {
    /// Plane coordinates in an orthonormal frame at a chosen origin.
    Identity,
    /// Stereographic projection of the sphere from the point antipodal to the center.
    Stereographic,
    /// Beltrami–Klein projection of the hyperboloid; geodesics map to chords.
    BeltramiKlein,
}

/// Oriented chart of a space form, centered at a surface point with a positive
/// orthonormal frame there. Chart coordinates are dimensionless for the curved models
/// (unit sphere/hyperboloid) and lengths for the plane.
#[derive(Debug, Clone)]
pub struct Chart {
    sf: SpaceForm,
    kind: ChartKind,
    center: Vec3,
    e1: Vec3,
    e2: Vec3,
}

impl Chart {
    /// Default chart for the geometry, centered at `center` with the transported standard frame.
    pub fn centered(sf: SpaceForm, center: Vec3) -> Self {
        let (e1, e2) = sf.standard_frame(&center);
        Self::with_frame(sf, center, e1, e2)
    }

    pub fn with_frame(sf: SpaceForm, center: Vec3, e1: Vec3, e2: Vec3) -> Self {
        let kind = match sf.model() {
            Model::Plane => ChartKind::Identity,
            Model::Embedded if sf.c() > 0.0 => ChartKind::Stereographic,
            Model::Embedded => ChartKind::BeltramiKlein,
        };
        Chart { sf, kind, center, e1, e2 }
    }

    /// Same chart kind with the frame rotated by `angle` about the center.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Chart {
            e1: self.e1 * c + self.e2 * s,
            e2: self.e2 * c - self.e1 * s,
            ..self.clone()
        }
    }

    pub fn kind(&self) -> ChartKind {
        self.kind
    }

    pub fn center(&self) -> Vec3 {
        self.center
    }

    pub fn space_form(&self) -> SpaceForm {
        self.sf
    }

    /// Frame components `(a, b, h)` of the unit-scaled point.
    fn components(&self, p: &Vec3) -> (f64, f64, f64) {
        let s = self.sf.sqrt_abs_c();
        let (ph, oh) = (p * s, self.center * s);
        let a = self.sf.inner(&ph, &self.e1);
        let b = self.sf.inner(&ph, &self.e2);
        let h = self.sf.epsilon() * self.sf.inner(&ph, &oh);
        (a, b, h)
    }

    pub fn to_chart(&self, p: &Vec3) -> Result<Point2> {
        match self.kind {
            ChartKind::Identity => {
                let d = p - self.center;
                Ok([self.sf.inner(&d, &self.e1), self.sf.inner(&d, &self.e2)])
            }
            ChartKind::Stereographic => {
                let (a, b, h) = self.components(p);
                if 1.0 + h < 1e-12 {
                    return Err(Error::Domain("point at the excluded pole of the stereographic chart".into()));
                }
                Ok([a / (1.0 + h), b / (1.0 + h)])
            }
            ChartKind::BeltramiKlein => {
                let (a, b, h) = self.components(p);
                Ok([a / h, b / h])
            }
        }
    }

    /// Push a tangent vector `v` at `p` forward to chart coordinates.
    pub fn push_tangent(&self, p: &Vec3, v: &Vec3) -> Point2 {
        match self.kind {
            ChartKind::Identity => [self.sf.inner(v, &self.e1), self.sf.inner(v, &self.e2)],
            ChartKind::Stereographic | ChartKind::BeltramiKlein => {
                let (a, b, h) = self.components(p);
                let (da, db, dh) = self.components(v);
                let den = if self.kind == ChartKind::Stereographic { 1.0 + h } else { h };
                [da / den - a * dh / (den * den), db / den - b * dh / (den * den)]
            }
        }
    }

    /// Inverse chart map.
    pub fn from_chart(&self, w: Point2) -> Result<Vec3> {
        let r2 = w[0] * w[0] + w[1] * w[1];
        match self.kind {
            ChartKind::Identity => Ok(self.center + self.e1 * w[0] + self.e2 * w[1]),
            ChartKind::Stereographic => {
                let s = self.sf.sqrt_abs_c();
                let oh = self.center * s;
                let p = ((self.e1 * w[0] + self.e2 * w[1]) * 2.0 + oh * (1.0 - r2)) / (1.0 + r2);
                Ok(p / s)
            }
            ChartKind::BeltramiKlein => {
                if r2 >= 1.0 {
                    return Err(Error::Domain("Klein coordinates outside the unit disk".into()));
                }
                let s = self.sf.sqrt_abs_c();
                let oh = self.center * s;
                let h = 1.0 / (1.0 - r2).sqrt();
                Ok((self.e1 * w[0] + self.e2 * w[1] + oh) * (h / s))
            }
        }
    }

    /// Surface area per unit chart area at `w`.
    pub fn area_element(&self, w: Point2) -> f64 {
        let r2 = w[0] * w[0] + w[1] * w[1];
        match self.kind {
            ChartKind::Identity => 1.0,
            ChartKind::Stereographic => {
                let q = 1.0 + r2;
                4.0 / (q * q) / self.sf.c()
            }
            ChartKind::BeltramiKlein => {
                if r2 >= 1.0 {
                    0.0
                } else {
                    1.0 / (1.0 - r2).powf(1.5) / -self.sf.c()
                }
            }
        }
    }

    /// Radius of the chart-domain boundary, if it has one (the Klein disk).
    pub fn boundary_radius(&self) -> Option<f64> {
        (self.kind == ChartKind::BeltramiKlein).then_some(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn charts() -> Vec<Chart> {
        let mut out = Vec::new();
        for c in [0.0, 1.0, -1.0, 0.5, -3.0] {
            let sf = SpaceForm::new(c).unwrap();
            let center = match sf.model() {
                Model::Plane => Vec3::new(0.3, -0.2, 0.0),
                Model::Embedded => sf.project_to_surface(&Vec3::new(0.2, 0.1, 1.0)).unwrap(),
            };
            out.push(Chart::centered(sf, center));
        }
        out
    }

    #[test]
    fn round_trip_and_positive_jacobian() {
        for chart in charts() {
            let sf = chart.space_form();
            for (u, v) in [(0.1, 0.2), (-0.3, 0.05), (0.4, -0.4)] {
                let p = chart.from_chart([u, v]).unwrap();
                if sf.model() == Model::Embedded {
                    assert!(sf.surface_defect(&p) < 1e-12);
                }
                let w = chart.to_chart(&p).unwrap();
                assert!((w[0] - u).abs() < 1e-12 && (w[1] - v).abs() < 1e-12);
                // surface frame at p, pushed forward, must keep its orientation
                let (f1, _) = sf.standard_frame(&p);
                let f2 = sf.rotate_quarter(&p, &f1);
                let a = chart.push_tangent(&p, &f1);
                let b = chart.push_tangent(&p, &f2);
                let jac = a[0] * b[1] - a[1] * b[0];
                assert!(jac > 0.0);
                // |jac| relates chart area to surface area
                assert!((1.0 / jac - chart.area_element(w)).abs() < 1e-9 * chart.area_element(w));
            }
        }
    }

    #[test]
    fn push_tangent_matches_finite_difference() {
        for chart in charts() {
            let sf = chart.space_form();
            let p = chart.from_chart([0.2, -0.1]).unwrap();
            let (f1, _) = sf.standard_frame(&p);
            let h = 1e-6;
            let plus = chart.to_chart(&sf.geodesic(&p, &f1, h).unwrap()).unwrap();
            let minus = chart.to_chart(&sf.geodesic(&p, &f1, -h).unwrap()).unwrap();
            let fd = [(plus[0] - minus[0]) / (2.0 * h), (plus[1] - minus[1]) / (2.0 * h)];
            let an = chart.push_tangent(&p, &f1);
            assert!((fd[0] - an[0]).abs() < 1e-7 && (fd[1] - an[1]).abs() < 1e-7);
        }
    }

    #[test]
    fn stereographic_excludes_antipode() {
        let sf = SpaceForm::new(1.0).unwrap();
        let chart = Chart::centered(sf, sf.pole());
        assert!(chart.to_chart(&Vec3::new(0.0, 0.0, -1.0)).is_err());
    }
}
