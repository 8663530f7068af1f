//! The model surfaces of constant curvature `c`.
//!
//! For `c > 0` points live on the round sphere `<u,u> = 1/c` in Euclidean 3-space, for
//! `c < 0` on the upper sheet of the hyperboloid `<u,u> = 1/c` with the Lorentz product
//! `u1 v1 + u2 v2 - u3 v3`, and for `c = 0` in the Euclidean plane. Plane points are stored
//! in the same 3-vector type with the third component held at zero; every operation below
//! dispatches on [`Model`] and never reads that component for the plane.
//!
//! The generalized trigonometric functions `sn`, `cn`, `tanc`, `cotc` interpolate between
//! the circular (`c > 0`), linear (`c = 0`) and hyperbolic (`c < 0`) cases and are
//! continuous in `c`.

use nalgebra::Vector3;

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Below this value of `|c| x^2` the generalized trig functions switch to their Taylor series.
const SERIES_THRESHOLD: f64 = 1e-8;

/// Relative tolerance for surface membership and tangency checks.
pub const SURFACE_TOL: f64 = 1e-9;

/// Which representation the points of a [`SpaceForm`] use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// `c = 0`: points in the Euclidean plane.
    Plane,
    /// `c != 0`: points on the sphere or hyperboloid in 3-space.
    Embedded,
}

/// The complete simply connected surface of constant curvature `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceForm {
    c: f64,
}

impl SpaceForm {
    pub fn new(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidInput(format!("curvature must be finite, got {c}")));
        }
        Ok(SpaceForm { c })
    }

    pub fn plane() -> Self {
        SpaceForm { c: 0.0 }
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Metric signature of the third embedding coordinate.
    pub fn epsilon(&self) -> f64 {
        if self.c >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn model(&self) -> Model {
        if self.c == 0.0 {
            Model::Plane
        } else {
            Model::Embedded
        }
    }

    /// `sqrt(|c|)`, the inverse of the model radius.
    pub fn sqrt_abs_c(&self) -> f64 {
        self.c.abs().sqrt()
    }

    /// The base point used for fixtures and default frames: the origin of the plane or
    /// `(0, 0, 1/sqrt|c|)`.
    pub fn pole(&self) -> Vec3 {
        match self.model() {
            Model::Plane => Vec3::zeros(),
            Model::Embedded => Vec3::new(0.0, 0.0, 1.0 / self.sqrt_abs_c()),
        }
    }

    pub fn sn(&self, x: f64) -> f64 {
        sn(self.c, x)
    }

    pub fn cn(&self, x: f64) -> f64 {
        cn(self.c, x)
    }

    pub fn tanc(&self, x: f64) -> f64 {
        tanc(self.c, x)
    }

    pub fn cotc(&self, x: f64) -> Result<f64> {
        cotc(self.c, x)
    }

    pub fn arccot(&self, k: f64) -> Result<f64> {
        arccot(self.c, k)
    }

    pub fn inner(&self, u: &Vec3, v: &Vec3) -> f64 {
        match self.model() {
            Model::Plane => u.x * v.x + u.y * v.y,
            Model::Embedded => u.x * v.x + u.y * v.y + self.epsilon() * u.z * v.z,
        }
    }

    /// Length of a tangent vector (always spacelike on either model).
    pub fn norm(&self, v: &Vec3) -> f64 {
        self.inner(v, v).max(0.0).sqrt()
    }

    /// Metric-adjoint cross product: the unique `X` with `<X, w> = det(u, v, w)` for all `w`.
    pub fn crossm(&self, u: &Vec3, v: &Vec3) -> Vec3 {
        let p = u.cross(v);
        Vec3::new(p.x, p.y, self.epsilon() * p.z)
    }

    /// Positive quarter turn `J_P` of the tangent plane at `p`.
    ///
    /// `(v, J_P v)` is positively oriented; on the embedded models this is
    /// `sqrt|c| * crossm(p, v)`, which agrees with the counterclockwise rotation of the
    /// `(x, y)` coordinates at the pole.
    pub fn rotate_quarter(&self, p: &Vec3, v: &Vec3) -> Vec3 {
        match self.model() {
            Model::Plane => Vec3::new(-v.y, v.x, 0.0),
            Model::Embedded => self.crossm(p, v) * self.sqrt_abs_c(),
        }
    }

    /// Relative deviation of `<p, p>` from `1/c`; zero for the plane.
    pub fn surface_defect(&self, p: &Vec3) -> f64 {
        match self.model() {
            Model::Plane => p.z.abs(),
            Model::Embedded => (self.c * self.inner(p, p) - 1.0).abs(),
        }
    }

    pub fn check_on_surface(&self, p: &Vec3) -> Result<()> {
        let defect = self.surface_defect(p);
        if defect > SURFACE_TOL || (self.c < 0.0 && p.z <= 0.0) {
            return Err(Error::NotOnSheet(format!(
                "point ({}, {}, {}) has relative defect {defect:e}",
                p.x, p.y, p.z
            )));
        }
        Ok(())
    }

    /// Rescale a raw vector onto the model surface along its ray.
    pub fn project_to_surface(&self, p: &Vec3) -> Result<Vec3> {
        match self.model() {
            Model::Plane => Ok(Vec3::new(p.x, p.y, 0.0)),
            Model::Embedded => {
                let q = self.c * self.inner(p, p);
                if !(q > 0.0) || !q.is_finite() {
                    return Err(Error::NotOnSheet(format!(
                        "c<p,p> = {q} has the wrong sign for curvature {}",
                        self.c
                    )));
                }
                if self.c < 0.0 && p.z <= 0.0 {
                    return Err(Error::NotOnSheet("point below the upper sheet".into()));
                }
                Ok(p / q.sqrt())
            }
        }
    }

    /// Unit-speed geodesic from `x` with initial unit tangent `y`, evaluated at arclength `t`.
    pub fn geodesic(&self, x: &Vec3, y: &Vec3, t: f64) -> Result<Vec3> {
        self.check_on_surface(x)?;
        let yy = self.inner(y, y);
        if (yy - 1.0).abs() > SURFACE_TOL {
            return Err(Error::InvalidInput(format!("direction is not unit: <y,y> = {yy}")));
        }
        let scale = match self.model() {
            Model::Plane => 1.0,
            Model::Embedded => 1.0 / self.sqrt_abs_c(),
        };
        if self.model() == Model::Embedded && self.inner(x, y).abs() > SURFACE_TOL * scale {
            return Err(Error::InvalidInput("direction is not tangent at x".into()));
        }
        Ok(self.geodesic_unchecked(x, y, t))
    }

    pub(crate) fn geodesic_unchecked(&self, x: &Vec3, y: &Vec3, t: f64) -> Vec3 {
        match self.model() {
            Model::Plane => x + y * t,
            Model::Embedded => x * self.cn(t) + y * self.sn(t),
        }
    }

    /// Velocity at arclength `t` of the geodesic from `x` with unit tangent `y`.
    pub(crate) fn geodesic_velocity(&self, x: &Vec3, y: &Vec3, t: f64) -> Vec3 {
        match self.model() {
            Model::Plane => *y,
            Model::Embedded => x * (-self.c * self.sn(t)) + y * self.cn(t),
        }
    }

    /// Inverse of [`SpaceForm::geodesic`]: distance from `o` to `p` and the unit direction at `o`.
    pub fn log_map(&self, o: &Vec3, p: &Vec3) -> Result<(f64, Vec3)> {
        let (d, y) = self.log_map_raw(o, p);
        let scale = match self.model() {
            Model::Plane => 1.0 + o.norm(),
            Model::Embedded => 1.0 / self.sqrt_abs_c(),
        };
        if d <= 1e-14 * scale {
            return Err(Error::Domain("log map of coincident points".into()));
        }
        if self.c > 0.0 && std::f64::consts::PI - d * self.sqrt_abs_c() < 1e-9 {
            return Err(Error::Domain("log map of antipodal points".into()));
        }
        Ok((d, y))
    }

    /// Distance and direction without domain checks; the direction is zero for coincident points.
    pub(crate) fn log_map_raw(&self, o: &Vec3, p: &Vec3) -> (f64, Vec3) {
        let delta = p - o;
        let d = match self.model() {
            Model::Plane => {
                let d = (delta.x * delta.x + delta.y * delta.y).sqrt();
                return if d > 0.0 { (d, delta / d) } else { (0.0, Vec3::zeros()) };
            }
            Model::Embedded => {
                let s = self.sqrt_abs_c();
                if self.c > 0.0 {
                    let (oh, ph) = (o * s, p * s);
                    oh.cross(&ph).norm().atan2(oh.dot(&ph)) / s
                } else {
                    let chord = (self.inner(&delta, &delta).max(0.0) * -self.c).sqrt();
                    2.0 * (0.5 * chord).asinh() / s
                }
            }
        };
        let sn_d = self.sn(d);
        if sn_d == 0.0 {
            return (d, Vec3::zeros());
        }
        // p - cn(d) o, with 1 - cn(d) = 2c sn^2(d/2) to avoid cancellation for short distances
        let half = self.sn(0.5 * d);
        let y = (delta + o * (2.0 * self.c * half * half)) / sn_d;
        (d, y)
    }

    pub fn distance(&self, o: &Vec3, p: &Vec3) -> f64 {
        self.log_map_raw(o, p).0
    }

    /// Positively oriented orthonormal frame at `p`, obtained by transporting the coordinate
    /// frame at [`SpaceForm::pole`] along the connecting geodesic.
    pub fn standard_frame(&self, p: &Vec3) -> (Vec3, Vec3) {
        let ex = Vec3::new(1.0, 0.0, 0.0);
        let ey = Vec3::new(0.0, 1.0, 0.0);
        if self.model() == Model::Plane {
            return (ex, ey);
        }
        let o = self.pole();
        let (d, y) = self.log_map_raw(&o, p);
        if d == 0.0 || y.norm() == 0.0 {
            if self.c > 0.0 && p.z < 0.0 {
                return (ex, -ey);
            }
            return (ex, ey);
        }
        let moved = self.geodesic_velocity(&o, &y, d);
        let transport = |w: &Vec3| -> Vec3 {
            let along = self.inner(w, &y);
            (w - y * along) + moved * along
        };
        (transport(&ex), transport(&ey))
    }
}

/// Generalized sine: `sin(sqrt(c) x)/sqrt(c)`, `x`, or `sinh(sqrt(-c) x)/sqrt(-c)`.
pub fn sn(c: f64, x: f64) -> f64 {
    let cx2 = c * x * x;
    if cx2.abs() < SERIES_THRESHOLD {
        return x * (1.0 - cx2 / 6.0 * (1.0 - cx2 / 20.0));
    }
    if c > 0.0 {
        let s = c.sqrt();
        (s * x).sin() / s
    } else {
        let s = (-c).sqrt();
        (s * x).sinh() / s
    }
}

/// Generalized cosine, the derivative of [`sn`]: `cn' = -c sn`.
pub fn cn(c: f64, x: f64) -> f64 {
    let cx2 = c * x * x;
    if cx2.abs() < SERIES_THRESHOLD {
        return 1.0 - cx2 / 2.0 * (1.0 - cx2 / 12.0);
    }
    if c > 0.0 {
        (c.sqrt() * x).cos()
    } else {
        ((-c).sqrt() * x).cosh()
    }
}

pub fn tanc(c: f64, x: f64) -> f64 {
    sn(c, x) / cn(c, x)
}

pub fn cotc(c: f64, x: f64) -> Result<f64> {
    let s = sn(c, x);
    let scale = if c > 0.0 { x.abs().max(1.0 / c.sqrt()) } else { x.abs() };
    if s == 0.0 || s.abs() <= 4.0 * f64::EPSILON * scale {
        return Err(Error::Domain(format!("cot_c has a pole at x = {x} (c = {c})")));
    }
    Ok(cn(c, x) / s)
}

/// Radius of curvature for geodesic curvature `k`: the `rho > 0` with `cotc(c, rho) = k`,
/// restricted to `sqrt(c) rho < pi/2` on the sphere.
pub fn arccot(c: f64, k: f64) -> Result<f64> {
    if !k.is_finite() {
        return Err(Error::Domain(format!("arccot_c of non-finite value {k}")));
    }
    if c >= 0.0 {
        if k <= 0.0 {
            return Err(Error::Domain(format!("arccot_c requires k > 0 for c >= 0, got {k}")));
        }
        if c == 0.0 {
            return Ok(1.0 / k);
        }
        let s = c.sqrt();
        Ok((s / k).atan() / s)
    } else {
        let s = (-c).sqrt();
        if k <= s {
            return Err(Error::Domain(format!(
                "arccot_c requires k > sqrt|c| = {s} for c < 0, got {k}"
            )));
        }
        Ok((s / k).atanh() / s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    /// Power series of sin/sinh generalized, summed to convergence; test oracle.
    fn sn_series(c: f64, x: f64) -> f64 {
        let mut term = x;
        let mut sum = x;
        for n in 1..60 {
            term *= -c * x * x / ((2 * n) as f64 * (2 * n + 1) as f64);
            sum += term;
        }
        sum
    }

    fn cn_series(c: f64, x: f64) -> f64 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 1..60 {
            term *= -c * x * x / ((2 * n - 1) as f64 * (2 * n) as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn generalized_trig_examples() {
        assert_eq!(sn(0.0, 2.5), 2.5);
        assert_relative_eq!(sn(1.0, FRAC_PI_2), 1.0, epsilon = 1e-15);
        // sinh(1), cosh(1) from the series oracle
        assert_relative_eq!(sn(-1.0, 1.0), 1.1752011936438014, epsilon = 1e-15);
        assert_relative_eq!(cn(-1.0, 1.0), 1.5430806348152437, epsilon = 1e-15);
        assert_relative_eq!(sn(-1.0, 1.0), sn_series(-1.0, 1.0), epsilon = 1e-15);
        assert_relative_eq!(cn(-1.0, 1.0), cn_series(-1.0, 1.0), epsilon = 1e-15);
    }

    #[test]
    fn arccot_examples() {
        assert_relative_eq!(arccot(0.0, 2.0).unwrap(), 0.5);
        assert_relative_eq!(arccot(1.0, 1.0).unwrap(), FRAC_PI_4, epsilon = 1e-15);
        // coth(rho) = 2 by bisection
        let (mut lo, mut hi) = (0.01_f64, 5.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if 1.0 / mid.tanh() > 2.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert_relative_eq!(arccot(-1.0, 2.0).unwrap(), 0.5 * (lo + hi), epsilon = 1e-14);
        assert_relative_eq!(arccot(-1.0, 2.0).unwrap(), 0.5493061443340549, epsilon = 1e-15);
    }

    #[test]
    fn arccot_domain_errors() {
        assert!(arccot(0.0, 0.0).is_err());
        assert!(arccot(1.0, -0.5).is_err());
        assert!(arccot(-1.0, 1.0).is_err());
        assert!(arccot(-4.0, 1.5).is_err());
        assert!(arccot(-4.0, 2.5).is_ok());
    }

    #[test]
    fn cotc_pole() {
        assert!(cotc(0.0, 0.0).is_err());
        assert!(cotc(1.0, PI).is_err());
        assert!(cotc(-1.0, 0.0).is_err());
        assert_relative_eq!(cotc(1.0, FRAC_PI_4).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn inner_and_crossm_examples() {
        let hyp = SpaceForm::new(-1.0).unwrap();
        let sph = SpaceForm::new(1.0).unwrap();
        let e1 = Vec3::new(1.0, 0.0, 0.0);
        let e2 = Vec3::new(0.0, 1.0, 0.0);
        let e3 = Vec3::new(0.0, 0.0, 1.0);
        assert_eq!(hyp.inner(&e3, &e3), -1.0);
        assert_eq!(hyp.inner(&e1, &e1), 1.0);
        assert_eq!(sph.inner(&Vec3::new(1.0, 2.0, 3.0), &Vec3::new(4.0, 5.0, 6.0)), 32.0);
        assert_eq!(sph.crossm(&e1, &e2), e3);
        // <X, e3> must equal det(e1, e2, e3) = 1 under the Lorentz product
        let x = hyp.crossm(&e1, &e2);
        assert_eq!(x, Vec3::new(0.0, 0.0, -1.0));
        assert_eq!(hyp.inner(&x, &e3), 1.0);
        assert_eq!(hyp.crossm(&e1, &e1), Vec3::zeros());
    }

    #[test]
    fn geodesic_examples() {
        let sph = SpaceForm::new(1.0).unwrap();
        let hyp = SpaceForm::new(-1.0).unwrap();
        let np = Vec3::new(0.0, 0.0, 1.0);
        let e1 = Vec3::new(1.0, 0.0, 0.0);
        assert_eq!(sph.geodesic(&np, &e1, 0.0).unwrap(), np);
        let q = sph.geodesic(&np, &e1, FRAC_PI_2).unwrap();
        assert!((q - e1).norm() < 1e-15);
        let h = hyp.geodesic(&np, &e1, 1.0).unwrap();
        assert!((h - Vec3::new(1f64.sinh(), 0.0, 1f64.cosh())).norm() < 1e-15);
        assert!((hyp.inner(&h, &h) + 1.0).abs() < 1e-14);
        // unit speed by central differences
        let step = 1e-5;
        let v = (hyp.geodesic(&np, &e1, 1.0 + step).unwrap()
            - hyp.geodesic(&np, &e1, 1.0 - step).unwrap())
            / (2.0 * step);
        assert!((hyp.norm(&v) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn geodesic_rejects_bad_direction() {
        let sph = SpaceForm::new(1.0).unwrap();
        let np = Vec3::new(0.0, 0.0, 1.0);
        assert!(sph.geodesic(&np, &Vec3::new(2.0, 0.0, 0.0), 1.0).is_err());
        assert!(sph.geodesic(&np, &Vec3::new(0.0, 0.0, 1.0), 1.0).is_err());
    }

    #[test]
    fn log_map_examples() {
        let plane = SpaceForm::plane();
        let (d, y) = plane.log_map(&Vec3::zeros(), &Vec3::new(3.0, 4.0, 0.0)).unwrap();
        assert_relative_eq!(d, 5.0);
        assert!((y - Vec3::new(0.6, 0.8, 0.0)).norm() < 1e-15);
        let sph = SpaceForm::new(1.0).unwrap();
        let (d, y) = sph.log_map(&Vec3::new(0.0, 0.0, 1.0), &Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert_relative_eq!(d, FRAC_PI_2, epsilon = 1e-15);
        assert!((y - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-15);
        assert!(sph.log_map(&Vec3::new(0.0, 0.0, 1.0), &Vec3::new(0.0, 0.0, -1.0)).is_err());
        assert!(sph.log_map(&Vec3::new(0.0, 0.0, 1.0), &Vec3::new(0.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn project_examples() {
        let sph = SpaceForm::new(1.0).unwrap();
        assert_eq!(sph.project_to_surface(&Vec3::new(0.0, 0.0, 2.0)).unwrap(), Vec3::new(0.0, 0.0, 1.0));
        let hyp = SpaceForm::new(-1.0).unwrap();
        let p = hyp.project_to_surface(&Vec3::new(0.0, 1.0, 2.0)).unwrap();
        assert!((p - Vec3::new(0.0, 1.0, 2.0) / 3f64.sqrt()).norm() < 1e-15);
        assert!((hyp.inner(&p, &p) + 1.0).abs() < 1e-15);
        assert_eq!(hyp.project_to_surface(&p).unwrap(), p);
        assert!(hyp.project_to_surface(&Vec3::new(2.0, 0.0, 1.0)).is_err());
        assert!(hyp.project_to_surface(&Vec3::new(0.0, 0.0, -1.0)).is_err());
    }

    #[test]
    fn standard_frame_is_oriented_orthonormal() {
        for c in [1.0, -1.0, 4.0, -0.25] {
            let sf = SpaceForm::new(c).unwrap();
            let o = sf.pole();
            let e1 = Vec3::new(1.0, 0.0, 0.0);
            for (t, a) in [(0.3, 0.2), (1.1, 2.0), (0.7, -2.5)] {
                let y = Vec3::new(f64::cos(a), f64::sin(a), 0.0);
                let p = sf.geodesic(&o, &y, t / sf.sqrt_abs_c()).unwrap();
                let (f1, f2) = sf.standard_frame(&p);
                assert!((sf.inner(&f1, &f1) - 1.0).abs() < 1e-12);
                assert!((sf.inner(&f2, &f2) - 1.0).abs() < 1e-12);
                assert!(sf.inner(&f1, &f2).abs() < 1e-12);
                assert!(sf.inner(&f1, &p).abs() < 1e-12);
                assert!((sf.rotate_quarter(&p, &f1) - f2).norm() < 1e-12);
            }
            let (f1, _) = sf.standard_frame(&o);
            assert_eq!(f1, e1);
        }
    }

    proptest! {
        #[test]
        fn continuity_in_c(c in -1e-6f64..1e-6, x in -10.0f64..10.0) {
            prop_assume!((c * x * x).abs() < 1e-4);
            prop_assert!((sn(c, x) - sn_series(c, x)).abs() <= 1e-15 * (1.0 + x.abs()));
            prop_assert!((cn(c, x) - cn_series(c, x)).abs() <= 1e-15);
            prop_assert!((sn(c, x) - x).abs() <= c.abs() * x.abs().powi(3));
        }

        #[test]
        fn pythagorean_identity(c in -4.0f64..4.0, x in -2.0f64..2.0) {
            let (s, k) = (sn(c, x), cn(c, x));
            prop_assert!((k * k + c * s * s - 1.0).abs() <= 1e-12 * (1.0 + k * k));
        }

        #[test]
        fn derivative_rules(c in -4.0f64..4.0, x in -2.0f64..2.0) {
            let h = 1e-5;
            let dsn = (sn(c, x + h) - sn(c, x - h)) / (2.0 * h);
            let dcn = (cn(c, x + h) - cn(c, x - h)) / (2.0 * h);
            prop_assert!((dsn - cn(c, x)).abs() <= 1e-8 * (1.0 + cn(c, x).abs()));
            prop_assert!((dcn + c * sn(c, x)).abs() <= 1e-8 * (1.0 + (c * sn(c, x)).abs()));
        }

        #[test]
        fn crossm_determinant(
            u in prop::array::uniform3(-2.0f64..2.0),
            v in prop::array::uniform3(-2.0f64..2.0),
            w in prop::array::uniform3(-2.0f64..2.0),
            sign in prop::bool::ANY,
        ) {
            let sf = SpaceForm::new(if sign { 1.0 } else { -1.0 }).unwrap();
            let (u, v, w) = (Vec3::from(u), Vec3::from(v), Vec3::from(w));
            let det = nalgebra::Matrix3::from_columns(&[u, v, w]).determinant();
            let x = sf.crossm(&u, &v);
            prop_assert!((sf.inner(&x, &w) - det).abs() <= 1e-12 * (1.0 + det.abs() + u.norm() * v.norm() * w.norm()));
            prop_assert!(sf.inner(&x, &u).abs() <= 1e-12 * (1.0 + u.norm_squared() * v.norm()));
        }

        #[test]
        fn log_inverts_geodesic(
            sign in -1i32..=1, a in 0.0f64..std::f64::consts::TAU, t in 0.01f64..1.4,
            ox in -0.5f64..0.5, oy in -0.5f64..0.5,
        ) {
            let sf = SpaceForm::new(sign as f64).unwrap();
            let o = match sf.model() {
                Model::Plane => Vec3::new(ox, oy, 0.0),
                Model::Embedded => sf.project_to_surface(&Vec3::new(ox, oy, 1.0)).unwrap(),
            };
            let (f1, f2) = sf.standard_frame(&o);
            let y = f1 * a.cos() + f2 * a.sin();
            let p = sf.geodesic(&o, &y, t).unwrap();
            prop_assert!(sf.surface_defect(&p) < 1e-12);
            let (d, y2) = sf.log_map(&o, &p).unwrap();
            prop_assert!((d - t).abs() < 1e-9);
            prop_assert!((y2 - y).norm() < 1e-9);
            if sf.model() == Model::Embedded {
                prop_assert!((sf.cn(d) - sf.c() * sf.inner(&o, &p)).abs() < 1e-12);
            }
        }

        #[test]
        fn quarter_turn_is_isometry(sign in prop::bool::ANY, px in -1.0f64..1.0, py in -1.0f64..1.0, a in 0.0f64..6.3) {
            let sf = SpaceForm::new(if sign { 2.0 } else { -2.0 }).unwrap();
            let p = sf.project_to_surface(&Vec3::new(0.6 * px, 0.6 * py, 1.0)).unwrap();
            let (f1, f2) = sf.standard_frame(&p);
            let v = f1 * a.cos() + f2 * a.sin();
            let jv = sf.rotate_quarter(&p, &v);
            prop_assert!((sf.inner(&jv, &jv) - 1.0).abs() < 1e-12);
            prop_assert!(sf.inner(&jv, &v).abs() < 1e-12);
            prop_assert!(sf.inner(&jv, &p).abs() < 1e-12);
        }
    }
}
