//! Frozen reference values computed independently of this crate.

use std::f64::consts::PI;

use evolute_core::catalog::{builtin, geodesic_circle, polar_fourier};
use evolute_core::spaceform::{cn, cotc, sn, tanc};
use evolute_core::theorems::{Context, VerifyOptions};
use evolute_core::evolute;

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b}");
}

#[test]
fn generalized_trig_references() {
    close(sn(-1.0, 1.0), 1.1752011936438014, 1e-15);
    close(cn(-1.0, 1.0), 1.5430806348152437, 1e-15);
    close(tanc(-1.0, 0.5493061443340549), 0.5, 1e-15);
    close(cotc(-1.0, 1.0).unwrap() - 1.0, 0.3130352854993313, 1e-15);
    close(sn(1.0, PI / 6.0), 0.5, 1e-15);
    close(sn(1e-12, 0.7), 0.7, 1e-12);
}

#[test]
fn ellipse_references() {
    let curve = builtin("ellipse").unwrap().realize_curve(1024).unwrap();
    close(curve.length(), 9.688448220547676, 1e-12);
    let ctx = Context::new(&curve, &VerifyOptions::default()).unwrap();
    close(ctx.evolute_area.value.abs(), 27.0 * PI / 16.0, 1e-10);
    close(ctx.evolute_area.value.abs(), 5.301437602932776, 1e-10);
    close(ctx.tan_half_rho_report().lhs, 59.0 * PI / 16.0, 1e-10);
    close(ctx.tan_half_rho_report().lhs, 11.584622910112363, 1e-10);
    let delta = curve.length().powi(2) - 4.0 * PI * ctx.area.value;
    close(delta, 14.909193713518564, 1e-9);
    close(4.0 * PI * ctx.evolute_area.value.abs(), 66.61982970735317, 1e-9);
}

#[test]
fn sphere_circle_steiner_reference() {
    let curve = geodesic_circle(1.0, 0.6).unwrap().realize_curve(256).unwrap();
    let ctx = Context::new(&curve, &VerifyOptions::default()).unwrap();
    let r = ctx.steiner(0.3).unwrap();
    close(r.lhs, 1.2800459896579122, 1e-12);
    close(r.rhs, 1.2800459896579122, 1e-12);
}

#[test]
fn curved_polar_evolutes_have_four_cusps() {
    for c in [1.0, -1.0] {
        let curve = polar_fourier(c, 0.6, vec![0.0, 0.05]).unwrap().realize_curve(1024).unwrap();
        assert_eq!(evolute(&curve).unwrap().cusp_count(), 4);
    }
}
