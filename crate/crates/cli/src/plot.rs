//! Deterministic SVG rendering in a chart centered at the base point.

use std::fmt::Write;

use evolute_core::catalog::Realized;
use evolute_core::topology::{Chart, Point2};
use evolute_core::{evolute, Error, Vec3};

const CANVAS: f64 = 1000.0;
const MARGIN: f64 = 50.0;

struct View {
    lo: Point2,
    scale: f64,
    offset: Point2,
}

impl View {
    fn fit(points: &[Point2]) -> View {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
        let scale = (CANVAS - 2.0 * MARGIN) / span;
        let offset = [
            0.5 * (CANVAS - scale * (hi[0] - lo[0])),
            0.5 * (CANVAS - scale * (hi[1] - lo[1])),
        ];
        View { lo, scale, offset }
    }

    /// Canvas coordinates with the y axis pointing up.
    fn map(&self, p: Point2) -> (f64, f64) {
        let x = self.offset[0] + self.scale * (p[0] - self.lo[0]);
        let y = self.offset[1] + self.scale * (p[1] - self.lo[1]);
        (x, CANVAS - y)
    }

    fn path_data(&self, pts: &[Point2]) -> String {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = self.map(*p);
            let _ = write!(d, "{}{x:.3} {y:.3} ", if i == 0 { "M" } else { "L" });
        }
        d.push('Z');
        d
    }
}

fn marker(out: &mut String, class: &str, (x, y): (f64, f64), r: f64) {
    let _ = writeln!(out, r#"  <circle class="{class}" cx="{x:.3}" cy="{y:.3}" r="{r:.1}"/>"#);
}

pub fn render(realized: &Realized, with_evolute: bool, base: Option<Vec3>) -> Result<String, Error> {
    let trace = realized.trace();
    let sf = trace.space_form();
    let center = match base {
        Some(p) => {
            sf.check_on_surface(&p)?;
            p
        }
        None => trace.base_point(),
    };
    let chart = Chart::centered(sf, center);
    let curve_pts = trace.chart_polyline(&chart)?;

    let mut evolute_pts = Vec::new();
    let mut cusps = Vec::new();
    let mut evolute_center = None;
    if with_evolute {
        let curve = realized
            .curve()
            .ok_or_else(|| Error::UnsupportedCurve("piecewise paths have no evolute".into()))?;
        let ev = evolute(curve)?;
        if let Some(c) = ev.center() {
            evolute_center = Some(chart.to_chart(&c)?);
        } else {
            evolute_pts = ev.trace()?.chart_polyline(&chart)?;
            for &t in &ev.singular_params {
                cusps.push(chart.to_chart(&ev.eval(t).0)?);
            }
        }
    }

    let base_pt = chart.to_chart(&center)?;
    let mut all: Vec<Point2> = curve_pts.iter().chain(&evolute_pts).copied().collect();
    all.push(base_pt);
    all.extend(evolute_center);
    if let Some(r) = chart.boundary_radius() {
        all.extend([[-r, -r], [r, r]]);
    }
    let view = View::fit(&all);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="1000" height="1000" viewBox="0 0 1000 1000">"#
    );
    let _ = writeln!(out, r#"  <rect width="1000" height="1000" fill="white"/>"#);
    if let Some(r) = chart.boundary_radius() {
        let (x, y) = view.map([0.0, 0.0]);
        let _ = writeln!(
            out,
            r##"  <circle class="chart-boundary" cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="none" stroke="#999999" stroke-dasharray="6 4"/>"##,
            r * view.scale
        );
    }
    let _ = writeln!(
        out,
        r##"  <path class="curve" d="{}" fill="none" stroke="#1f4e9c" stroke-width="2"/>"##,
        view.path_data(&curve_pts)
    );
    if !evolute_pts.is_empty() {
        let _ = writeln!(
            out,
            r##"  <path class="evolute" d="{}" fill="none" stroke="#c0392b" stroke-width="1.5"/>"##,
            view.path_data(&evolute_pts)
        );
    }
    for c in &cusps {
        marker(&mut out, "cusp", view.map(*c), 5.0);
    }
    if let Some(c) = evolute_center {
        marker(&mut out, "evolute-center", view.map(c), 5.0);
    }
    marker(&mut out, "base-point", view.map(base_pt), 3.0);
    out.push_str("</svg>\n");
    Ok(out)
}
