//! Evolutes of strongly convex curves: singular points, cusped traces, curvature.
//!
//! The evolute is a smooth function of the base curve's parameter even though it has
//! cusps as a point set, so it is carried as a trigonometric interpolant in `t` and
//! every integral over it is pulled back to `t`.

use std::f64::consts::TAU;

use crate::curve::ClosedCurve;
use crate::error::{Error, Result};
use crate::quadrature::clenshaw_curtis;
use crate::spaceform::{Model, SpaceForm, Vec3};
use crate::spectral::Trig;
use crate::topology::{area_with_multiplicities, AreaMethod, AreaResult, PathTrace, Segment};

/// Relative threshold on `|rho'|` below which a root is degenerate.
pub const DEGENERATE_REL: f64 = 1e-8;
/// Absolute threshold on `max |d rho / dt|` below which the curve is a circle.
pub const CIRCLE_TOL: f64 = 1e-9;
/// Relative evolute speed below which the direct curvature quadrature is excised.
pub const EXCISION: f64 = 1e-5;

const ROOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct EvolutePath {
    base: ClosedCurve,
    position: Trig,
    /// Evolute points at the base sample parameters.
    pub samples: Vec<Vec3>,
    /// `|rho'(s)|` at the base sample parameters; equals `|d gamma_e / ds|`.
    pub velocity_norms: Vec<f64>,
    /// Sign-changing roots of `rho'`, ascending in `[0, 2pi)`.
    pub singular_params: Vec<f64>,
    /// Roots of `rho'` without a sign change.
    pub degenerate_params: Vec<f64>,
    /// Parameter intervals between consecutive singular points; the last may wrap past `2pi`.
    pub regular_arcs: Vec<(f64, f64)>,
    /// `rho'` is identically zero and the evolute is a single point.
    pub is_circle: bool,
    /// Measured `s` with `d gamma_e / ds = s * rho' * T`.
    pub tangent_sign: f64,
    max_drho_dt: f64,
}

/// Total curvature of the evolute, by substitution and by direct quadrature.
#[derive(Debug, Clone, Copy)]
pub struct EvoluteCurvature {
    /// `integral k ds` over the base curve.
    pub substitution: f64,
    /// `integral k_e ds_e` over the regular arcs with cusp neighbourhoods excised.
    pub direct: Option<f64>,
    /// `integral k ds` of the base curve over the excised neighbourhoods.
    pub excised: Option<f64>,
    /// `|direct + excised - substitution|`.
    pub gap: Option<f64>,
}

fn to_vec(row: &[f64]) -> Vec3 {
    Vec3::new(row[0], row[1], if row.len() == 3 { row[2] } else { 0.0 })
}

/// The T-field `c sn(rho) gamma - cn(rho) n` at parameter `t`.
pub fn t_field(curve: &ClosedCurve, t: f64) -> Result<Vec3> {
    let jet = curve.jet(t)?;
    let rho = jet.rho.ok_or(Error::NotStronglyConvex { margin: jet.k_g })?;
    let sf = curve.space_form();
    Ok(sf.gamma_scaled(&jet.gamma, sf.c() * sf.sn(rho)) - jet.n * sf.cn(rho))
}

impl SpaceForm {
    /// `a * p` for a point; the plane's position vector carries no tangent meaning.
    fn gamma_scaled(&self, p: &Vec3, a: f64) -> Vec3 {
        match self.model() {
            Model::Plane => Vec3::zeros(),
            Model::Embedded => p * a,
        }
    }
}

/// Evolute point `cn(rho) gamma + sn(rho) n` at parameter `t`.
pub fn evolute_point(curve: &ClosedCurve, t: f64) -> Result<Vec3> {
    let jet = curve.jet(t)?;
    let rho = jet.rho.ok_or(Error::NotStronglyConvex { margin: jet.k_g })?;
    let sf = curve.space_form();
    Ok(jet.gamma * sf.cn(rho) + jet.n * sf.sn(rho))
}

/// Geodesic curvature `k / |rho'|` of the evolute at a regular point.
pub fn evolute_geodesic_curvature(curve: &ClosedCurve, t: f64) -> Result<f64> {
    let jet = curve.jet(t)?;
    let drho = jet.drho_ds.ok_or(Error::NotStronglyConvex { margin: jet.k_g })?;
    let scale = curve
        .drho_dt_resampled(curve.len())
        .map(|d| d.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
        .unwrap_or(0.0);
    if drho.abs() * jet.speed <= DEGENERATE_REL * scale || drho == 0.0 {
        return Err(Error::SingularPoint { t });
    }
    Ok(jet.k.unwrap_or(0.0) / drho.abs())
}

/// Construct the evolute of a strongly convex curve.
pub fn evolute(curve: &ClosedCurve) -> Result<EvolutePath> {
    curve.require_strongly_convex()?;
    let sf = curve.space_form();
    let n = curve.len();
    let samples: Vec<Vec3> = curve
        .jets()
        .iter()
        .map(|j| {
            let rho = j.rho.unwrap();
            j.gamma * sf.cn(rho) + j.n * sf.sn(rho)
        })
        .collect();
    let velocity_norms: Vec<f64> = curve.jets().iter().map(|j| j.drho_ds.unwrap().abs()).collect();
    let dim = if sf.model() == Model::Plane { 2 } else { 3 };
    let position = Trig::new(&(0..dim).map(|k| samples.iter().map(|p| p[k]).collect()).collect::<Vec<_>>());

    let m = 4 * n;
    let d = curve.drho_dt_resampled(m).expect("strongly convex");
    let max_drho_dt = d.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let mut path = EvolutePath {
        base: curve.clone(),
        position,
        samples,
        velocity_norms,
        singular_params: Vec::new(),
        degenerate_params: Vec::new(),
        regular_arcs: Vec::new(),
        is_circle: max_drho_dt < CIRCLE_TOL,
        tangent_sign: -1.0,
        max_drho_dt,
    };
    if path.is_circle {
        return Ok(path);
    }

    let h = TAU / m as f64;
    let f = |t: f64| curve.rho_derivative(t, 1).unwrap();
    let small = DEGENERATE_REL * max_drho_dt;
    let mut run = 0usize;
    for j in 0..m {
        let (a, b) = (d[j], d[(j + 1) % m]);
        if a.abs() < small {
            run += 1;
            if run > 4 {
                return Err(Error::UnsupportedCurve("rho' vanishes on an interval".into()));
            }
        } else {
            run = 0;
        }
        let (t0, t1) = (j as f64 * h, (j + 1) as f64 * h);
        if a == 0.0 {
            if d[(j + m - 1) % m].signum() != b.signum() {
                path.singular_params.push(t0);
            }
            continue;
        }
        if a.signum() * b.signum() < 0.0 {
            path.singular_params.push(bisect(&f, t0, t1) % TAU);
            continue;
        }
        // local minimum of |rho'| without a sign change
        let prev = d[(j + m - 1) % m];
        if a.abs() < small && a.abs() <= prev.abs() && a.abs() <= b.abs() && prev.signum() == b.signum() {
            path.degenerate_params.push(t0);
        }
    }
    path.singular_params.sort_by(f64::total_cmp);
    path.singular_params.dedup_by(|a, b| (*a - *b).abs() < 1e-10);
    let k = path.singular_params.len();
    if k % 2 == 1 {
        return Err(Error::Resolution(format!("found an odd number ({k}) of singular points")));
    }
    for i in 0..k {
        let a = path.singular_params[i];
        let b = if i + 1 < k { path.singular_params[i + 1] } else { path.singular_params[0] + TAU };
        path.regular_arcs.push((a, b));
    }
    path.tangent_sign = path.measure_tangent_sign()?;
    Ok(path)
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl EvolutePath {
    pub fn base(&self) -> &ClosedCurve {
        &self.base
    }

    pub fn space_form(&self) -> SpaceForm {
        self.base.space_form()
    }

    /// Number of cusps.
    pub fn cusp_count(&self) -> usize {
        self.singular_params.len()
    }

    /// Evolute position and its first two `t`-derivatives, from the interpolant.
    pub fn eval(&self, t: f64) -> (Vec3, Vec3, Vec3) {
        let e = self.position.eval(t, 2);
        (to_vec(&e[0]), to_vec(&e[1]), to_vec(&e[2]))
    }

    /// The evolute point when the base curve is a circle.
    pub fn center(&self) -> Option<Vec3> {
        self.is_circle.then(|| {
            let mean = self.samples.iter().fold(Vec3::zeros(), |a, p| a + p) / self.samples.len() as f64;
            self.space_form().project_to_surface(&mean).unwrap_or(self.samples[0])
        })
    }

    fn measure_tangent_sign(&self) -> Result<f64> {
        // largest |rho'| sample gives the best-conditioned comparison
        let (j, _) = self
            .velocity_norms
            .iter()
            .enumerate()
            .fold((0, 0.0), |acc, (j, &v)| if v > acc.1 { (j, v) } else { acc });
        let t = self.base.jets()[j].t;
        let (_, v, _) = self.eval(t);
        let tf = t_field(&self.base, t)?;
        let drho_dt = self.base.rho_derivative(t, 1).unwrap();
        let sf = self.space_form();
        Ok((sf.inner(&v, &tf) * drho_dt).signum())
    }

    /// Forward unit tangent of the evolute on the arc containing `t`, defined at cusps
    /// as a one-sided limit: `tangent_sign * sign(rho' on the arc) * T`.
    fn arc_tangent(&self, t: f64, arc_sign: f64) -> Result<Vec3> {
        Ok(t_field(&self.base, t)? * (self.tangent_sign * arc_sign))
    }

    fn arc_sign(&self, arc: (f64, f64)) -> f64 {
        self.base.rho_derivative(0.5 * (arc.0 + arc.1), 1).unwrap().signum()
    }

    fn nodes_for(&self, len: f64) -> usize {
        let m = (self.base.len() as f64 * len / TAU).ceil() as usize;
        m.max(32).div_ceil(4) * 4
    }

    /// The evolute as a closed path with one smooth segment per regular arc.
    pub fn trace(&self) -> Result<PathTrace> {
        if self.is_circle {
            return Err(Error::UnsupportedCurve("the evolute of a circle is a single point".into()));
        }
        let sf = self.space_form();
        let mut segments = Vec::with_capacity(self.regular_arcs.len());
        for &(a, b) in &self.regular_arcs {
            let mut seg = Segment::chebyshev(&sf, a, b, self.nodes_for(b - a), |u| self.eval(u));
            let s = self.arc_sign((a, b));
            seg.start_tangent = self.arc_tangent(a, s)?;
            seg.end_tangent = self.arc_tangent(b, s)?;
            segments.push(seg);
        }
        PathTrace::new(sf, segments, "evolute")
    }

    /// Area with multiplicities `F_e`; zero for a point evolute.
    pub fn area(&self, base: Option<Vec3>) -> Result<AreaResult> {
        if self.is_circle {
            let o = self.center().unwrap();
            return Ok(AreaResult {
                value: 0.0,
                method: AreaMethod::LineIntegral,
                base_point: o,
                samples: 0,
                resolution: None,
                estimated_error: 0.0,
            });
        }
        area_with_multiplicities(&self.trace()?, base)
    }

    /// `integral k_e ds_e` by substitution and by direct quadrature over the regular arcs.
    pub fn total_curvature(&self) -> EvoluteCurvature {
        let substitution = self.base.integrate_ds(|j| j.k.unwrap_or(0.0));
        if self.is_circle {
            return EvoluteCurvature { substitution, direct: None, excised: None, gap: None };
        }
        let sf = self.space_form();
        let cut = EXCISION * self.max_drho_dt;
        let mut direct = 0.0;
        let mut excised = 0.0;
        let (nodes, weights) = clenshaw_curtis(24);
        for &(a, b) in &self.regular_arcs {
            // excise where the evolute speed is below the relative threshold
            let speed = |t: f64| self.base.rho_derivative(t, 1).unwrap().abs();
            let mid = 0.5 * (a + b);
            let (mut lo, mut hi) = (crossing(&speed, a, mid, cut), crossing(&speed, b, mid, cut));
            if hi <= lo {
                (lo, hi) = (mid, mid);
            }
            for (p0, p1) in graded_panels(lo, hi, (lo - a).min(b - hi)).into_iter().filter(|p| p.1 > p.0) {
                for (x, w) in nodes.iter().zip(&weights) {
                    let t = p0 + (p1 - p0) * x;
                    let (g, v, acc) = self.eval(t);
                    let jv = sf.rotate_quarter(&g, &v);
                    let vv = sf.inner(&v, &v);
                    direct += w * (p1 - p0) * sf.inner(&acc, &jv).abs() / vv;
                }
            }
            for (p0, p1) in [(a, lo), (hi, b)] {
                for (x, w) in nodes.iter().zip(&weights) {
                    let j = self.base.jet((p0 + (p1 - p0) * x).rem_euclid(TAU)).unwrap();
                    excised += w * (p1 - p0) * j.k.unwrap_or(0.0) * j.speed;
                }
            }
        }
        EvoluteCurvature {
            substitution,
            direct: Some(direct),
            excised: Some(excised),
            gap: Some((direct + excised - substitution).abs()),
        }
    }
}

/// First point from `from` towards `to` where `f` reaches `level`, by bisection.
fn crossing(f: &dyn Fn(f64) -> f64, from: f64, to: f64, level: f64) -> f64 {
    if f(to) <= level {
        return to;
    }
    // grow the bracket geometrically so the first crossing is found
    let mut step = 1e-9 * (to - from);
    let mut inner = from;
    let mut outer = from + step;
    while (outer - to) * (to - from) < 0.0 && f(outer) < level {
        inner = outer;
        step *= 2.0;
        outer = from + step;
    }
    if (outer - to) * (to - from) >= 0.0 {
        outer = to;
    }
    for _ in 0..60 {
        let m = 0.5 * (inner + outer);
        if f(m) < level {
            inner = m;
        } else {
            outer = m;
        }
    }
    outer
}

/// Panels on `[lo, hi]` doubling in width away from both ends, starting at `first`,
/// with uniform panels in the middle.
fn graded_panels(lo: f64, hi: f64, first: f64) -> Vec<(f64, f64)> {
    let half = 0.5 * (hi - lo);
    let mut edges = vec![0.0];
    let mut w = first.min(half);
    while edges.last().unwrap() + w < half {
        edges.push(edges.last().unwrap() + w);
        w *= 2.0;
    }
    let inner = *edges.last().unwrap();
    let mut out = Vec::new();
    for pair in edges.windows(2) {
        out.push((lo + pair[0], lo + pair[1]));
        out.push((hi - pair[1], hi - pair[0]));
    }
    let m = 16;
    let h = (hi - lo - 2.0 * inner) / m as f64;
    for p in 0..m {
        out.push((lo + inner + h * p as f64, lo + inner + h * (p + 1) as f64));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// `integral k_e ds_e` of the evolute of `curve`.
pub fn total_evolute_curvature(curve: &ClosedCurve) -> Result<EvoluteCurvature> {
    Ok(evolute(curve)?.total_curvature())
}
