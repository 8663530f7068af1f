//! Curve specifications, built-in fixtures and JSON file I/O.
//!
//! Curve files hold `c`, `model` and a `kind`-tagged specification. Numbers are written
//! with 17 significant digits so that a save/load round trip is bit-exact.

use std::f64::consts::{PI, TAU};
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use sha2::{Digest, Sha256};

use crate::curve::ClosedCurve;
use crate::error::{Error, Result};
use crate::spaceform::{Model, SpaceForm, Vec3};
use crate::spectral::grid;
use crate::theorems::TheoremReport;
use crate::topology::{PathTrace, Segment};

fn one() -> i8 {
    1
}

/// A geodesic circle arc: points `cn(r) C + sn(r) (cos phi e1 + sin phi e2)` for
/// `phi` from `start` to `start + sweep`, in the standard frame at `center`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub center: [f64; 3],
    pub radius: f64,
    pub start: f64,
    pub sweep: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveSpec {
    GeodesicCircle {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<[f64; 3]>,
        radius: f64,
        #[serde(default = "one")]
        orientation: i8,
    },
    PlaneEllipse {
        a: f64,
        b: f64,
        #[serde(default = "one")]
        orientation: i8,
    },
    /// `r(theta) = r0 + sum_m cos[m-1] cos(m theta) + sin[m-1] sin(m theta)` in geodesic
    /// polar coordinates about `pole`.
    PolarFourier {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pole: Option<[f64; 3]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        frame: Option<[[f64; 3]; 2]>,
        r0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
        #[serde(default = "one")]
        orientation: i8,
    },
    PiecewiseArcs {
        arcs: Vec<Arc>,
    },
    RawSamples {
        points: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFile {
    pub c: f64,
    pub model: Model,
    #[serde(flatten)]
    pub spec: CurveSpec,
}

/// A realized specification: a smooth closed curve or a piecewise path with corners.
#[derive(Debug, Clone)]
pub enum Realized {
    Curve(ClosedCurve),
    Path(PathTrace),
}

impl Realized {
    pub fn curve(&self) -> Option<&ClosedCurve> {
        match self {
            Realized::Curve(c) => Some(c),
            Realized::Path(_) => None,
        }
    }

    /// The path trace of either kind.
    pub fn trace(&self) -> PathTrace {
        match self {
            Realized::Curve(c) => c.trace(),
            Realized::Path(p) => p.clone(),
        }
    }
}

fn vec3(a: &[f64; 3]) -> Vec3 {
    Vec3::new(a[0], a[1], a[2])
}

fn check_orientation(o: i8) -> Result<f64> {
    match o {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        _ => Err(Error::InvalidInput(format!("orientation must be 1 or -1, got {o}"))),
    }
}

fn surface_point(sf: &SpaceForm, p: Option<[f64; 3]>) -> Result<Vec3> {
    match p {
        None => Ok(sf.pole()),
        Some(p) => {
            let p = vec3(&p);
            sf.check_on_surface(&p)?;
            Ok(p)
        }
    }
}

/// Points `cn(r) o + sn(r) (cos phi e1 + sin phi e2)`.
fn polar_point(sf: &SpaceForm, o: &Vec3, e1: &Vec3, e2: &Vec3, r: f64, phi: f64) -> Vec3 {
    let dir = e1 * phi.cos() + e2 * phi.sin();
    match sf.model() {
        Model::Plane => o + dir * r,
        Model::Embedded => o * sf.cn(r) + dir * sf.sn(r),
    }
}

impl CurveFile {
    pub fn new(c: f64, spec: CurveSpec) -> Result<Self> {
        let sf = SpaceForm::new(c)?;
        Ok(CurveFile { c, model: sf.model(), spec })
    }

    pub fn space_form(&self) -> Result<SpaceForm> {
        let sf = SpaceForm::new(self.c)?;
        if sf.model() != self.model {
            return Err(Error::InvalidInput(format!("model {:?} does not match c = {}", self.model, self.c)));
        }
        Ok(sf)
    }

    /// Sample the specification at `n` uniform parameters (raw samples keep their own count).
    pub fn realize(&self, n: usize) -> Result<Realized> {
        let sf = self.space_form()?;
        let ts = grid(n);
        let pts: Vec<Vec3> = match &self.spec {
            CurveSpec::GeodesicCircle { center, radius, orientation } => {
                let s = check_orientation(*orientation)?;
                if !(*radius > 0.0) || (sf.c() > 0.0 && sf.sqrt_abs_c() * radius >= PI) {
                    return Err(Error::InvalidInput(format!("circle radius {radius} out of range")));
                }
                let o = surface_point(&sf, *center)?;
                let (e1, e2) = sf.standard_frame(&o);
                ts.iter().map(|t| polar_point(&sf, &o, &e1, &e2, *radius, s * t)).collect()
            }
            CurveSpec::PlaneEllipse { a, b, orientation } => {
                let s = check_orientation(*orientation)?;
                if sf.model() != Model::Plane || !(*a > 0.0 && *b > 0.0) {
                    return Err(Error::InvalidInput("plane ellipse needs c = 0 and positive axes".into()));
                }
                ts.iter().map(|t| Vec3::new(a * t.cos(), s * b * t.sin(), 0.0)).collect()
            }
            CurveSpec::PolarFourier { pole, frame, r0, cos, sin, orientation } => {
                let s = check_orientation(*orientation)?;
                let o = surface_point(&sf, *pole)?;
                let (e1, e2) = match frame {
                    None => sf.standard_frame(&o),
                    Some([a, b]) => {
                        let (a, b) = (vec3(a), vec3(b));
                        let bad = (sf.inner(&a, &a) - 1.0).abs() > 1e-9
                            || (sf.inner(&b, &b) - 1.0).abs() > 1e-9
                            || sf.inner(&a, &b).abs() > 1e-9
                            || (sf.model() == Model::Embedded && (sf.inner(&a, &o).abs() > 1e-9 || sf.inner(&b, &o).abs() > 1e-9))
                            || (sf.rotate_quarter(&o, &a) - b).norm() > 1e-9;
                        if bad {
                            return Err(Error::InvalidInput("frame is not a positive orthonormal tangent frame at the pole".into()));
                        }
                        (a, b)
                    }
                };
                let r = |theta: f64| {
                    let mut v = *r0;
                    for (m, a) in cos.iter().enumerate() {
                        v += a * ((m + 1) as f64 * theta).cos();
                    }
                    for (m, b) in sin.iter().enumerate() {
                        v += b * ((m + 1) as f64 * theta).sin();
                    }
                    v
                };
                let fine: Vec<f64> = grid(4 * n.max(64)).iter().map(|&t| r(t)).collect();
                let (lo, hi) = fine.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
                if !(lo > 0.0) {
                    return Err(Error::InvalidInput(format!("polar radius must stay positive (min {lo})")));
                }
                if sf.c() > 0.0 && hi * sf.sqrt_abs_c() >= 0.5 * PI {
                    return Err(Error::InvalidInput(format!("polar radius {hi} reaches the equator")));
                }
                ts.iter().map(|t| polar_point(&sf, &o, &e1, &e2, r(s * t), s * t)).collect()
            }
            CurveSpec::PiecewiseArcs { arcs } => return Ok(Realized::Path(realize_arcs(&sf, arcs, n)?)),
            CurveSpec::RawSamples { points } => points
                .iter()
                .map(|p| match (sf.model(), p.len()) {
                    (Model::Plane, 2) => Ok(Vec3::new(p[0], p[1], 0.0)),
                    (_, 3) => Ok(Vec3::new(p[0], p[1], p[2])),
                    _ => Err(Error::InvalidInput(format!("sample with {} coordinates", p.len()))),
                })
                .collect::<Result<_>>()?,
        };
        Ok(Realized::Curve(ClosedCurve::from_samples(&pts, sf)?))
    }

    /// Realize a smooth curve; piecewise specifications are rejected.
    pub fn realize_curve(&self, n: usize) -> Result<ClosedCurve> {
        match self.realize(n)? {
            Realized::Curve(c) => Ok(c),
            Realized::Path(_) => Err(Error::UnsupportedCurve("piecewise arcs do not form a smooth curve".into())),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        check_finite(&serde_json::to_value(self)?)?;
        to_string_exact(self)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: CurveFile = serde_json::from_str(s)?;
        file.space_form()?;
        Ok(file)
    }

    /// SHA-256 of the canonical serialization, hex encoded.
    pub fn digest(&self) -> Result<String> {
        Ok(sha256_hex(self.to_json()?.as_bytes()))
    }
}

fn realize_arcs(sf: &SpaceForm, arcs: &[Arc], n: usize) -> Result<PathTrace> {
    if arcs.is_empty() {
        return Err(Error::InvalidInput("piecewise path needs at least one arc".into()));
    }
    let mut segments = Vec::with_capacity(arcs.len());
    for arc in arcs {
        if !(arc.radius > 0.0) || arc.sweep == 0.0 || !arc.sweep.is_finite() {
            return Err(Error::InvalidInput(format!("bad arc {arc:?}")));
        }
        let o = vec3(&arc.center);
        sf.check_on_surface(&o)?;
        let (e1, e2) = sf.standard_frame(&o);
        let (sn, r, s) = (sf.sn(arc.radius), arc.radius, arc.sweep.signum());
        let m = ((n as f64 * arc.sweep.abs() / TAU).ceil() as usize).max(32).div_ceil(4) * 4;
        let seg = Segment::chebyshev(sf, 0.0, arc.sweep.abs(), m, |u| {
            let phi = arc.start + s * u;
            let (sp, cp) = phi.sin_cos();
            let p = polar_point(sf, &o, &e1, &e2, r, phi);
            let v = (e2 * cp - e1 * sp) * (s * sn);
            let a = -(e1 * cp + e2 * sp) * sn;
            (p, v, a)
        });
        segments.push(seg);
    }
    PathTrace::new(*sf, segments, "piecewise arcs")
}

struct ExactFormatter(PrettyFormatter<'static>);

impl Formatter for ExactFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty JSON with every float written to 17 significant digits.
pub fn to_string_exact<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// serde_json turns non-finite floats into `null`; catch them before writing.
fn check_finite(v: &serde_json::Value) -> Result<()> {
    fn walk(v: &serde_json::Value, path: &str) -> Result<()> {
        match v {
            serde_json::Value::Null => Err(Error::InvalidInput(format!("non-finite or missing number at {path}"))),
            serde_json::Value::Array(a) => a.iter().enumerate().try_for_each(|(i, x)| walk(x, &format!("{path}[{i}]"))),
            serde_json::Value::Object(o) => o.iter().try_for_each(|(k, x)| walk(x, &format!("{path}.{k}"))),
            _ => Ok(()),
        }
    }
    walk(v, "$")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn load_curve(path: impl AsRef<Path>) -> Result<CurveFile> {
    CurveFile::from_json(&fs::read_to_string(path)?)
}

pub fn save_curve(path: impl AsRef<Path>, file: &CurveFile) -> Result<()> {
    fs::write(path, file.to_json()?)?;
    Ok(())
}

pub fn reports_to_json(reports: &[TheoremReport]) -> Result<String> {
    for r in reports {
        let nums = [r.lhs, r.rhs, r.residual, r.tolerance];
        if nums.iter().chain(r.checks.iter().flat_map(|c| [&c.value, &c.tolerance])).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("report `{}` contains a non-finite number", r.name)));
        }
    }
    to_string_exact(&reports)
}

pub fn reports_from_json(s: &str) -> Result<Vec<TheoremReport>> {
    Ok(serde_json::from_str(s)?)
}

pub fn load_reports(path: impl AsRef<Path>) -> Result<Vec<TheoremReport>> {
    reports_from_json(&fs::read_to_string(path)?)
}

pub fn save_reports(path: impl AsRef<Path>, reports: &[TheoremReport]) -> Result<()> {
    fs::write(path, reports_to_json(reports)?)?;
    Ok(())
}

/// Plane lens bounded by two arcs of radius `sqrt(d^2 + h^2)` centered at `(-d, 0)` and
/// `(d, 0)`, with corners at `(0, -h)` and `(0, h)`.
pub fn plane_lens(h: f64, d: f64) -> CurveFile {
    let radius = d.hypot(h);
    let alpha = h.atan2(d);
    CurveFile {
        c: 0.0,
        model: Model::Plane,
        spec: CurveSpec::PiecewiseArcs {
            arcs: vec![
                Arc { center: [-d, 0.0, 0.0], radius, start: -alpha, sweep: 2.0 * alpha },
                Arc { center: [d, 0.0, 0.0], radius, start: PI - alpha, sweep: 2.0 * alpha },
            ],
        },
    }
}

/// Lens on a curved space form: two geodesic circles of radius `radius` whose centers lie
/// at distance `d` on either side of the pole along the first frame axis.
pub fn curved_lens(c: f64, radius: f64, d: f64) -> Result<CurveFile> {
    let sf = SpaceForm::new(c)?;
    if sf.model() == Model::Plane {
        let h = (radius * radius - d * d).sqrt();
        return Ok(plane_lens(h, d));
    }
    if !(d > 0.0 && d < radius) {
        return Err(Error::InvalidInput("lens needs 0 < d < radius".into()));
    }
    let o = sf.pole();
    let x = Vec3::new(1.0, 0.0, 0.0);
    let left = sf.geodesic(&o, &(-x), d)?;
    let right = sf.geodesic(&o, &x, d)?;
    // angle at a center between the center line and a corner
    let alpha = (sf.tanc(d) / sf.tanc(radius)).acos();
    let arr = |p: Vec3| [p.x, p.y, p.z];
    Ok(CurveFile {
        c,
        model: Model::Embedded,
        spec: CurveSpec::PiecewiseArcs {
            arcs: vec![
                Arc { center: arr(left), radius, start: -alpha, sweep: 2.0 * alpha },
                Arc { center: arr(right), radius, start: PI - alpha, sweep: 2.0 * alpha },
            ],
        },
    })
}

/// Interior angle at the corners of [`curved_lens`], from the law of cosines in the
/// triangle formed by the two centers and a corner.
pub fn lens_interior_angle(c: f64, radius: f64, d: f64) -> f64 {
    let (s, k) = (crate::spaceform::sn(c, radius), crate::spaceform::cn(c, radius));
    let cos_x = if c == 0.0 {
        1.0 - 2.0 * d * d / (radius * radius)
    } else {
        (crate::spaceform::cn(c, 2.0 * d) - k * k) / (c * s * s)
    };
    PI - cos_x.clamp(-1.0, 1.0).acos()
}

/// A geodesic circle about the pole traversed `turns` times.
pub fn multiple_circle(c: f64, radius: f64, turns: u32) -> Result<CurveFile> {
    let sf = SpaceForm::new(c)?;
    let o = sf.pole();
    Ok(CurveFile {
        c,
        model: sf.model(),
        spec: CurveSpec::PiecewiseArcs {
            arcs: vec![Arc { center: [o.x, o.y, o.z], radius, start: 0.0, sweep: TAU * f64::from(turns) }],
        },
    })
}

pub fn polar_fourier(c: f64, r0: f64, cos: Vec<f64>) -> Result<CurveFile> {
    CurveFile::new(c, CurveSpec::PolarFourier { pole: None, frame: None, r0, cos, sin: Vec::new(), orientation: 1 })
}

pub fn geodesic_circle(c: f64, radius: f64) -> Result<CurveFile> {
    CurveFile::new(c, CurveSpec::GeodesicCircle { center: None, radius, orientation: 1 })
}

/// Names of the built-in fixtures.
pub const BUILTIN: [&str; 11] = [
    "circle-plane",
    "circle-sphere",
    "circle-hyperbolic",
    "ellipse",
    "polar-sphere",
    "polar-hyperbolic",
    "lens-plane",
    "lens-sphere",
    "double-circle-sphere",
    "nonconvex-plane",
    "lens-hyperbolic",
];

pub fn builtin(name: &str) -> Option<CurveFile> {
    let f = match name {
        "circle-plane" => geodesic_circle(0.0, 1.0),
        "circle-sphere" => geodesic_circle(1.0, PI / 3.0),
        "circle-hyperbolic" => geodesic_circle(-1.0, 1.0),
        "ellipse" => CurveFile::new(0.0, CurveSpec::PlaneEllipse { a: 2.0, b: 1.0, orientation: 1 }),
        "polar-sphere" => polar_fourier(1.0, 0.6, vec![0.0, 0.05]),
        "polar-hyperbolic" => polar_fourier(-1.0, 0.6, vec![0.0, 0.05]),
        "lens-plane" => Ok(plane_lens(1.0, 0.5)),
        "lens-sphere" => curved_lens(1.0, 0.8, 0.4),
        "lens-hyperbolic" => curved_lens(-1.0, 0.8, 0.4),
        "double-circle-sphere" => multiple_circle(1.0, 0.7, 2),
        "nonconvex-plane" => polar_fourier(0.0, 1.0, vec![0.0, 0.0, 0.6]),
        _ => return None,
    };
    Some(f.expect("built-in fixtures are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_realizes() {
        for name in BUILTIN {
            let file = builtin(name).unwrap();
            assert!(file.realize(256).is_ok(), "{name}");
        }
        assert!(builtin("nope").is_none());
    }

    #[test]
    fn circle_round_trip() {
        let f = geodesic_circle(1.0, PI / 3.0).unwrap();
        let s = f.to_json().unwrap();
        let back = CurveFile::from_json(&s).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_json().unwrap(), s);
        assert!(s.contains("\"kind\": \"geodesic_circle\""));
    }

    #[test]
    fn raw_samples_round_trip_bit_exact() {
        let curve = builtin("polar-sphere").unwrap().realize_curve(1024).unwrap();
        let points: Vec<Vec<f64>> = curve.samples().iter().map(|p| vec![p.x, p.y, p.z]).collect();
        let f = CurveFile::new(1.0, CurveSpec::RawSamples { points }).unwrap();
        let s = f.to_json().unwrap();
        let back = CurveFile::from_json(&s).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.digest().unwrap(), f.digest().unwrap());
    }

    #[test]
    fn malformed_files_report_position() {
        let err = CurveFile::from_json("{\n  \"c\": 1.0,\n  \"model\": \"embedded\",\n  \"kind\": \"geodesic_circle\",\n  \"radius\": oops\n}").unwrap_err();
        match err {
            Error::Parse(msg) => assert!(msg.contains("line 5"), "{msg}"),
            e => panic!("{e}"),
        }
        assert!(CurveFile::from_json("{\"c\": 0.0, \"model\": \"embedded\", \"kind\": \"plane_ellipse\", \"a\": 2, \"b\": 1}").is_err());
        assert!(CurveFile::from_json("{\"c\": 0.0, \"model\": \"plane\", \"kind\": \"spiral\"}").is_err());
    }

    #[test]
    fn nan_report_rejected() {
        use crate::theorems::{Kind, TheoremReport};
        let r = TheoremReport {
            name: "x".into(),
            kind: Kind::Identity,
            lhs: f64::NAN,
            rhs: 0.0,
            lhs_provenance: String::new(),
            rhs_provenance: String::new(),
            residual: 0.0,
            tolerance: 1e-6,
            pass: true,
            inputs_digest: String::new(),
            notes: vec![],
            checks: vec![],
        };
        assert!(reports_to_json(&[r.clone()]).is_err());
        let ok = TheoremReport { lhs: 1.0, ..r };
        let s = reports_to_json(&[ok.clone()]).unwrap();
        assert_eq!(reports_from_json(&s).unwrap(), vec![ok]);
    }

    #[test]
    fn polar_fourier_invariants_enforced() {
        assert!(polar_fourier(1.0, 1.6, vec![]).unwrap().realize(64).is_err());
        assert!(polar_fourier(0.0, 0.1, vec![0.2]).unwrap().realize(64).is_err());
    }

    #[test]
    fn ellipse_spec_matches_parametrization() {
        let curve = builtin("ellipse").unwrap().realize_curve(64).unwrap();
        for (j, t) in grid(64).iter().enumerate() {
            let p = curve.samples()[j];
            assert!((p - Vec3::new(2.0 * t.cos(), t.sin(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn lens_angles_closed_forms_agree() {
        // plane lens interior angle is 2 atan(h/d)
        let (h, d) = (1.0f64, 0.5f64);
        let r = d.hypot(h);
        assert!((lens_interior_angle(0.0, r, d) - 2.0 * h.atan2(d)).abs() < 1e-14);
        // c -> 0 continuity
        assert!((lens_interior_angle(1e-9, r, d) - 2.0 * h.atan2(d)).abs() < 1e-6);
    }
}
