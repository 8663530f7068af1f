//! Closed curves sampled at uniform parameters, with spectral derivatives.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::spaceform::{Model, SpaceForm, Vec3};
use crate::spectral::{grid, Trig};
use crate::topology::{area_with_multiplicities, AreaResult, Chart, PathTrace, Segment};

pub const DEFAULT_SAMPLES: usize = 1024;

/// Spectral tail ratio below which a curve counts as resolved.
const CHOP: f64 = 5e-14;

pub const RESOLVED_TAIL: f64 = 1e-10;

/// Everything known about a curve at one parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameJet {
    pub t: f64,
    pub gamma: Vec3,
    /// Derivatives with respect to the sampling parameter `t`.
    pub dgamma: Vec3,
    pub ddgamma: Vec3,
    pub speed: f64,
    pub tangent: Vec3,
    /// Oriented unit normal: `(tangent, n)` is positively oriented.
    pub n: Vec3,
    /// Signed geodesic curvature.
    pub k_g: f64,
    /// Curvature in the embedding space, `sqrt(k_g^2 + c)`, where that is real.
    pub k: Option<f64>,
    /// Radius of curvature, where the curve is strongly convex.
    pub rho: Option<f64>,
    /// `d rho / ds`.
    pub drho_ds: Option<f64>,
}

impl FrameJet {
    fn build(sf: &SpaceForm, t: f64, gamma: Vec3, dgamma: Vec3, ddgamma: Vec3) -> Self {
        let speed = sf.norm(&dgamma);
        let tangent = dgamma / speed;
        let n = sf.rotate_quarter(&gamma, &tangent);
        let k_g = sf.inner(&ddgamma, &n) / (speed * speed);
        let k2 = k_g * k_g + sf.c();
        FrameJet {
            t,
            gamma,
            dgamma,
            ddgamma,
            speed,
            tangent,
            n,
            k_g,
            k: (k2 > 0.0).then(|| k2.sqrt()),
            rho: sf.arccot(k_g).ok(),
            drho_ds: None,
        }
    }

    /// Acceleration with respect to arclength.
    pub fn gamma_ss(&self, sf: &SpaceForm) -> Vec3 {
        let along = sf.inner(&self.dgamma, &self.ddgamma) / (self.speed * self.speed);
        (self.ddgamma - self.dgamma * along) / (self.speed * self.speed)
    }
}

/// Monotone correspondence between the sampling parameter and arclength.
#[derive(Debug, Clone)]
pub struct ArclengthTable {
    speed: Trig,
    mean_speed: f64,
    offset: f64,
    /// Arclength at the grid parameters.
    pub s: Vec<f64>,
    pub t: Vec<f64>,
}

impl ArclengthTable {
    pub fn length(&self) -> f64 {
        self.mean_speed * TAU
    }

    /// Arclength from `t = 0` to `t`, for `t` in `[0, 2pi]`.
    pub fn s_at(&self, t: f64) -> f64 {
        self.mean_speed * t + self.periodic_part(t) - self.offset
    }

    fn periodic_part(&self, t: f64) -> f64 {
        self.speed.antiderivative_at(t)
    }

    /// Parameter at arclength `s` by safeguarded Newton iteration.
    pub fn t_at(&self, s: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, TAU);
        let mut t = s / self.mean_speed;
        for _ in 0..100 {
            let f = self.s_at(t) - s;
            if f.abs() < 1e-14 * self.length() {
                break;
            }
            if f > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let v = self.speed.eval(t, 0)[0][0];
            let next = t - f / v;
            t = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        }
        t
    }
}

/// A regular closed curve on a space form, sampled at `t_j = 2 pi j / N`.
#[derive(Debug, Clone)]
pub struct ClosedCurve {
    sf: SpaceForm,
    position: Trig,
    jets: Vec<FrameJet>,
    rho: Option<Trig>,
    orientation: i8,
    tail_ratio: f64,
}

impl ClosedCurve {
    /// Build a curve from `N` samples at uniform parameters; `N >= 16` must be a power of two.
    ///
    /// Samples are projected onto the surface. An unresolved spectrum is recorded, not
    /// rejected; see [`ClosedCurve::is_resolved`].
    pub fn from_samples(points: &[Vec3], sf: SpaceForm) -> Result<Self> {
        let n = points.len();
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidInput(format!("sample count must be a power of two >= 16, got {n}")));
        }
        let projected: Vec<Vec3> = points.iter().map(|p| sf.project_to_surface(p)).collect::<Result<_>>()?;
        let dim = match sf.model() {
            Model::Plane => 2,
            Model::Embedded => 3,
        };
        let channels: Vec<Vec<f64>> = (0..dim).map(|k| projected.iter().map(|p| p[k]).collect()).collect();
        let mut position = Trig::new(&channels);
        let tail_ratio = position.tail_ratio();
        // roundoff-level modes only add noise to the derivatives
        position.chop(CHOP);

        let to_vec = |ch: &[Vec<f64>], j: usize| -> Vec3 {
            Vec3::new(ch[0][j], ch[1][j], if dim == 3 { ch[2][j] } else { 0.0 })
        };

        // regularity on a grid four times finer than the samples
        let fine = position.resample(1, 4 * n);
        let scale = match sf.model() {
            Model::Plane => projected.iter().map(|p| p.norm()).fold(0.0, f64::max).max(1e-300),
            Model::Embedded => 1.0 / sf.sqrt_abs_c(),
        };
        let min_speed = (0..4 * n).map(|j| sf.norm(&to_vec(&fine, j))).fold(f64::INFINITY, f64::min);
        if !(min_speed > 1e-10 * scale) {
            return Err(Error::ZeroSpeed { min_speed });
        }

        let d1 = position.grid_derivative(1);
        let d2 = position.grid_derivative(2);
        let ts = grid(n);
        let mut jets: Vec<FrameJet> = (0..n)
            .map(|j| FrameJet::build(&sf, ts[j], projected[j], to_vec(&d1, j), to_vec(&d2, j)))
            .collect();

        let rho = if jets.iter().all(|j| j.rho.is_some()) {
            let mut rho = Trig::new(&[jets.iter().map(|j| j.rho.unwrap()).collect()]);
            rho.chop(CHOP);
            let drho = rho.grid_derivative(1);
            for (jet, d) in jets.iter_mut().zip(&drho[0]) {
                jet.drho_ds = Some(d / jet.speed);
            }
            Some(rho)
        } else {
            None
        };

        let mut curve = ClosedCurve { sf, position, jets, rho, orientation: 1, tail_ratio };
        curve.orientation = curve.detect_orientation();
        Ok(curve)
    }

    /// Winding of the chart image about the base point, falling back to the sign of the
    /// enclosed area when the base point is outside.
    fn detect_orientation(&self) -> i8 {
        let trace = self.trace();
        let base = trace.base_point();
        let chart = Chart::centered(self.sf, base);
        match trace.winding_about(&chart, &base) {
            Ok(w) if w > 0 => 1,
            Ok(w) if w < 0 => -1,
            _ => trace.orientation(),
        }
    }

    pub fn space_form(&self) -> SpaceForm {
        self.sf
    }

    pub fn len(&self) -> usize {
        self.jets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jets.is_empty()
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn tail_ratio(&self) -> f64 {
        self.tail_ratio
    }

    pub fn is_resolved(&self) -> bool {
        self.tail_ratio < RESOLVED_TAIL
    }

    /// Frame jets at the sample parameters.
    pub fn jets(&self) -> &[FrameJet] {
        &self.jets
    }

    pub fn samples(&self) -> Vec<Vec3> {
        self.jets.iter().map(|j| j.gamma).collect()
    }

    fn trig_vec(&self, row: &[f64]) -> Vec3 {
        Vec3::new(row[0], row[1], if row.len() == 3 { row[2] } else { 0.0 })
    }

    /// Frame jet at an arbitrary parameter, from the trigonometric interpolant.
    pub fn jet(&self, t: f64) -> Result<FrameJet> {
        let e = self.position.eval(t, 2);
        let (g, dg, ddg) = (self.trig_vec(&e[0]), self.trig_vec(&e[1]), self.trig_vec(&e[2]));
        if self.sf.norm(&dg) <= 0.0 {
            return Err(Error::ZeroSpeed { min_speed: 0.0 });
        }
        let mut jet = FrameJet::build(&self.sf, t, g, dg, ddg);
        if let (Some(rho), Some(_)) = (&self.rho, jet.rho) {
            jet.drho_ds = Some(rho.eval(t, 1)[1][0] / jet.speed);
        }
        Ok(jet)
    }

    /// `d^m gamma / dt^m` at the sample parameters.
    pub fn grid_derivative(&self, order: u32) -> Vec<Vec3> {
        let d = self.position.grid_derivative(order);
        (0..self.len()).map(|j| self.trig_vec(&[d[0][j], d[1][j], d.get(2).map_or(0.0, |c| c[j])])).collect()
    }

    /// `d rho / dt` on a uniform grid of `m` points (`m` a multiple of the sample count).
    pub fn drho_dt_resampled(&self, m: usize) -> Option<Vec<f64>> {
        self.rho.as_ref().map(|r| r.resample(1, m).remove(0))
    }

    /// `d^order rho / dt^order` at an arbitrary parameter.
    pub fn rho_derivative(&self, t: f64, order: usize) -> Option<f64> {
        self.rho.as_ref().map(|r| r.eval(t, order)[order][0])
    }

    /// `integral f ds` over the curve by the periodic trapezoid rule.
    pub fn integrate_ds(&self, f: impl Fn(&FrameJet) -> f64) -> f64 {
        let h = TAU / self.len() as f64;
        self.jets.iter().map(|j| f(j) * j.speed).sum::<f64>() * h
    }

    pub fn length(&self) -> f64 {
        self.integrate_ds(|_| 1.0)
    }

    /// Minimum over a fine grid of `k_g` minus the strong-convexity threshold
    /// (`0` for `c >= 0`, `sqrt|c|` for `c < 0`).
    pub fn strong_convexity_margin(&self) -> f64 {
        let m = 4 * self.len();
        let p = self.position.resample(0, m);
        let d1 = self.position.resample(1, m);
        let d2 = self.position.resample(2, m);
        let get = |ch: &[Vec<f64>], j: usize| {
            Vec3::new(ch[0][j], ch[1][j], if ch.len() == 3 { ch[2][j] } else { 0.0 })
        };
        let threshold = if self.sf.c() < 0.0 { self.sf.sqrt_abs_c() } else { 0.0 };
        (0..m)
            .map(|j| FrameJet::build(&self.sf, 0.0, get(&p, j), get(&d1, j), get(&d2, j)).k_g - threshold)
            .fold(f64::INFINITY, f64::min)
    }

    /// True when the radius of curvature is defined at every sample.
    pub fn has_radius_of_curvature(&self) -> bool {
        self.rho.is_some()
    }

    pub fn require_strongly_convex(&self) -> Result<()> {
        let margin = self.strong_convexity_margin();
        if !(margin > 0.0) || self.rho.is_none() {
            return Err(Error::NotStronglyConvex { margin });
        }
        Ok(())
    }

    /// Outer parallel curve at distance `r`, sampled at the same parameters.
    pub fn parallel_curve(&self, r: f64) -> Result<ClosedCurve> {
        if !(r >= 0.0) {
            return Err(Error::InvalidInput(format!("parallel distance must be >= 0, got {r}")));
        }
        self.require_strongly_convex()?;
        let pts: Vec<Vec3> = self
            .jets
            .iter()
            .map(|j| self.sf.geodesic_unchecked(&j.gamma, &(-j.n), r))
            .collect();
        ClosedCurve::from_samples(&pts, self.sf)
    }

    pub fn arclength_table(&self) -> ArclengthTable {
        let speeds: Vec<f64> = self.jets.iter().map(|j| j.speed).collect();
        let mean_speed = speeds.iter().sum::<f64>() / speeds.len() as f64;
        let speed = Trig::new(&[speeds]);
        let offset = speed.antiderivative_at(0.0);
        let t = grid(self.len());
        let mut table = ArclengthTable { speed, mean_speed, offset, s: Vec::new(), t };
        table.s = table.t.iter().map(|&t| table.s_at(t)).collect();
        table
    }

    /// The curve as a single smooth periodic path.
    pub fn trace(&self) -> PathTrace {
        let pts = self.samples();
        let d1: Vec<Vec3> = self.jets.iter().map(|j| j.dgamma).collect();
        let d2: Vec<Vec3> = self.jets.iter().map(|j| j.ddgamma).collect();
        PathTrace::new(self.sf, vec![Segment::periodic(&self.sf, &pts, &d1, &d2)], "curve")
            .expect("a periodic segment is always closed")
    }

    /// Area with multiplicities enclosed by the curve.
    pub fn enclosed_area(&self, base: Option<Vec3>) -> Result<AreaResult> {
        area_with_multiplicities(&self.trace(), base)
    }

    /// Same geometric curve traversed the other way.
    pub fn reversed(&self) -> Result<ClosedCurve> {
        let mut pts = self.samples();
        pts[1..].reverse();
        ClosedCurve::from_samples(&pts, self.sf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn plane_ellipse(a: f64, b: f64, n: usize) -> ClosedCurve {
        let pts: Vec<Vec3> = grid(n).iter().map(|t| Vec3::new(a * t.cos(), b * t.sin(), 0.0)).collect();
        ClosedCurve::from_samples(&pts, SpaceForm::plane()).unwrap()
    }

    fn geodesic_circle(c: f64, rho0: f64, n: usize) -> ClosedCurve {
        let sf = SpaceForm::new(c).unwrap();
        let o = sf.pole();
        let pts: Vec<Vec3> = grid(n)
            .iter()
            .map(|t| sf.geodesic(&o, &Vec3::new(t.cos(), t.sin(), 0.0), rho0).unwrap())
            .collect();
        ClosedCurve::from_samples(&pts, sf).unwrap()
    }

    #[test]
    fn unit_circle_frame() {
        let curve = geodesic_circle(0.0, 1.0, 64);
        assert_eq!(curve.orientation(), 1);
        for t in [0.0, 0.3, 2.0] {
            let j = curve.jet(t).unwrap();
            assert!((j.k_g - 1.0).abs() < 1e-11);
            assert!((j.k.unwrap() - 1.0).abs() < 1e-11);
            assert!((j.rho.unwrap() - 1.0).abs() < 1e-11);
            assert!(j.drho_ds.unwrap().abs() < 1e-10);
        }
        assert!((curve.length() - TAU).abs() < 1e-13);
        assert!((curve.strong_convexity_margin() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn geodesic_circles_have_cot_curvature() {
        for (c, rho0) in [(1.0, PI / 3.0), (-1.0, 1.0), (4.0, 0.3), (-0.5, 0.6)] {
            let curve = geodesic_circle(c, rho0, 128);
            let kg = crate::spaceform::cotc(c, rho0).unwrap();
            for j in curve.jets() {
                assert!((j.k_g - kg).abs() < 1e-11 * kg, "c={c}");
                assert!((j.rho.unwrap() - rho0).abs() < 1e-11);
            }
            let expected = TAU * crate::spaceform::sn(c, rho0);
            assert!((curve.length() - expected).abs() < 1e-12 * expected);
        }
    }

    #[test]
    fn hyperbolic_circle_margin() {
        let curve = geodesic_circle(-1.0, 1.0, 128);
        assert!((curve.strong_convexity_margin() - 0.3130352854993313).abs() < 1e-11);
    }

    #[test]
    fn ellipse_curvature_and_length() {
        let curve = plane_ellipse(2.0, 1.0, 512);
        assert_eq!(curve.orientation(), 1);
        assert!(curve.is_resolved());
        // closed form ab / (a^2 sin^2 + b^2 cos^2)^(3/2)
        let exact = |t: f64| 2.0 / (4.0 * t.sin().powi(2) + t.cos().powi(2)).powf(1.5);
        for t in [0.0, 0.4, FRAC_PI_4, 2.5] {
            assert!((curve.jet(t).unwrap().k_g - exact(t)).abs() < 1e-10);
        }
        assert!((curve.jet(0.0).unwrap().k_g - 2.0).abs() < 1e-10);
        // adaptive-quadrature reference 9.688448220547676
        assert!((curve.length() - 9.688448220547676).abs() < 1e-12);
        let table = curve.arclength_table();
        assert!((table.s_at(TAU) - curve.length()).abs() < 1e-12);
        assert!((table.s_at(PI) - 0.5 * curve.length()).abs() < 1e-12);
        assert!((table.s_at(FRAC_PI_2) - 0.25 * curve.length()).abs() < 1e-12);
        assert!(table.s.windows(2).all(|w| w[1] > w[0]));
        let t = table.t_at(1.234);
        assert!((table.s_at(t) - 1.234).abs() < 1e-12);
    }

    #[test]
    fn degenerate_samples_rejected() {
        let pts = vec![Vec3::new(1.0, 2.0, 0.0); 16];
        assert!(matches!(
            ClosedCurve::from_samples(&pts, SpaceForm::plane()),
            Err(Error::ZeroSpeed { .. })
        ));
        let pts = vec![Vec3::new(1.0, 2.0, 0.0); 24];
        assert!(ClosedCurve::from_samples(&pts, SpaceForm::plane()).is_err());
    }

    #[test]
    fn inflected_curve_has_negative_margin() {
        let pts: Vec<Vec3> = grid(256)
            .iter()
            .map(|t| {
                let r = 1.0 + 0.6 * (3.0 * t).cos();
                Vec3::new(r * t.cos(), r * t.sin(), 0.0)
            })
            .collect();
        let curve = ClosedCurve::from_samples(&pts, SpaceForm::plane()).unwrap();
        assert!(curve.strong_convexity_margin() < 0.0);
        assert!(curve.require_strongly_convex().is_err());
        assert!(curve.parallel_curve(0.1).is_err());
    }

    #[test]
    fn parallel_of_circles() {
        let curve = geodesic_circle(0.0, 1.0, 64);
        let par = curve.parallel_curve(0.5).unwrap();
        for j in par.jets() {
            assert!((j.gamma.norm() - 1.5).abs() < 1e-13);
        }
        let curve = geodesic_circle(1.0, 0.6, 128);
        let par = curve.parallel_curve(0.3).unwrap();
        let sf = curve.space_form();
        for j in par.jets() {
            assert!((sf.distance(&sf.pole(), &j.gamma) - 0.9).abs() < 1e-12);
            assert!((j.rho.unwrap() - 0.9).abs() < 1e-11);
        }
    }

    #[test]
    fn reversed_curve_is_negatively_oriented() {
        let curve = plane_ellipse(2.0, 1.0, 64).reversed().unwrap();
        assert_eq!(curve.orientation(), -1);
        assert!(curve.strong_convexity_margin() < 0.0);
    }

    #[test]
    fn spectral_convergence_under_doubling() {
        let a = plane_ellipse(2.0, 1.0, 256);
        let b = plane_ellipse(2.0, 1.0, 512);
        assert!((a.length() - b.length()).abs() < 1e-9);
        for t in [0.1, 1.0, 3.0] {
            let (ja, jb) = (a.jet(t).unwrap(), b.jet(t).unwrap());
            assert!((ja.k_g - jb.k_g).abs() < 1e-9);
            assert!((ja.drho_ds.unwrap() - jb.drho_ds.unwrap()).abs() < 1e-9);
        }
    }
}
