use std::f64::consts::{PI, TAU};

use super::chart::Point2;
use crate::error::{Error, Result};

/// Largest admissible distance of the accumulated turn from an integer, in turns.
pub const WINDING_RESIDUAL: f64 = 0.05;

/// Winding number of a closed polyline about `p` by argument accumulation.
///
/// The polyline is closed implicitly (last vertex joined to the first). `tol` is the
/// minimum admissible distance from `p` to the polyline.
pub fn winding_number(poly: &[Point2], p: Point2, tol: f64) -> Result<i64> {
    if poly.len() < 2 {
        return Err(Error::InvalidInput("polyline needs at least two vertices".into()));
    }
    let mut total = 0.0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        if segment_distance(a, b, p) <= tol {
            return Err(Error::Domain(format!("point ({}, {}) lies on the path", p[0], p[1])));
        }
        let (ax, ay) = (a[0] - p[0], a[1] - p[1]);
        let (bx, by) = (b[0] - p[0], b[1] - p[1]);
        total += (ax * by - ay * bx).atan2(ax * bx + ay * by);
    }
    let turns = total / TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() > WINDING_RESIDUAL {
        return Err(Error::Resolution(format!("winding residual {:.3} turns", turns - rounded)));
    }
    Ok(rounded as i64)
}

/// Winding number by signed crossings of the rightward ray from `p`.
///
/// Exact for points off the polyline; no distance check is made.
pub fn crossing_number(poly: &[Point2], p: Point2) -> i64 {
    let mut wn = 0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        if a[1] <= p[1] {
            if b[1] > p[1] && orient(a, b, p) > 0.0 {
                wn += 1;
            }
        } else if b[1] <= p[1] && orient(a, b, p) < 0.0 {
            wn -= 1;
        }
    }
    wn
}

fn orient(a: Point2, b: Point2, p: Point2) -> f64 {
    (b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1])
}

pub(crate) fn segment_distance(a: Point2, b: Point2, p: Point2) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (qx, qy) = (a[0] + t * dx - p[0], a[1] + t * dy - p[1]);
    (qx * qx + qy * qy).sqrt()
}

/// Signed angle from `u` to `v` in `(-pi, pi]`.
pub(crate) fn turn_angle(u: Point2, v: Point2) -> f64 {
    let a = (u[0] * v[1] - u[1] * v[0]).atan2(u[0] * v[0] + u[1] * v[1]);
    if a <= -PI {
        a + TAU
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn circle(n: usize, turns: f64, sign: f64) -> Vec<Point2> {
        (0..n)
            .map(|j| {
                let t = sign * turns * TAU * j as f64 / n as f64;
                [t.cos(), t.sin()]
            })
            .collect()
    }

    #[test]
    fn circle_examples() {
        let poly = circle(256, 1.0, 1.0);
        assert_eq!(winding_number(&poly, [0.0, 0.0], 1e-9).unwrap(), 1);
        assert_eq!(winding_number(&poly, [5.0, 0.0], 1e-9).unwrap(), 0);
        assert_eq!(winding_number(&circle(256, 1.0, -1.0), [0.1, 0.0], 1e-9).unwrap(), -1);
        assert_eq!(winding_number(&circle(512, 2.0, 1.0), [0.1, 0.2], 1e-9).unwrap(), 2);
        assert!(winding_number(&poly, [1.0, 0.0], 1e-9).is_err());
    }

    #[test]
    fn square_crossings() {
        let sq = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        assert_eq!(crossing_number(&sq, [0.5, 0.5]), 1);
        assert_eq!(crossing_number(&sq, [1.5, 0.5]), 0);
        let rev: Vec<_> = sq.iter().rev().copied().collect();
        assert_eq!(crossing_number(&rev, [0.5, 0.5]), -1);
    }

    proptest! {
        #[test]
        fn crossing_agrees_with_argument(x in -1.5f64..1.5, y in -1.5f64..1.5) {
            // figure-eight-like limacon with a doubly wound inner loop
            let poly: Vec<Point2> = (0..400).map(|j| {
                let t = TAU * j as f64 / 400.0;
                let r = 0.4 + t.cos();
                [r * t.cos(), r * t.sin()]
            }).collect();
            if let Ok(w) = winding_number(&poly, [x, y], 1e-6) {
                prop_assert_eq!(w, crossing_number(&poly, [x, y]));
            }
        }
    }
}
