//! Clenshaw–Curtis rules for smooth integrands on finite intervals.

use std::f64::consts::PI;

/// Nodes (ascending, endpoints included) and weights of the `m + 1` point
/// Clenshaw–Curtis rule on `[0, 1]`; `m` must be even.
pub fn clenshaw_curtis(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 2 && m.is_multiple_of(2), "Clenshaw-Curtis order must be even");
    let mf = m as f64;
    let mut nodes = Vec::with_capacity(m + 1);
    let mut weights = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let theta = j as f64 * PI / mf;
        nodes.push(0.5 * (1.0 - theta.cos()));
        let mut s = 0.0;
        for k in 1..=m / 2 {
            let b = if k == m / 2 { 1.0 } else { 2.0 };
            s += b / (4.0 * (k * k) as f64 - 1.0) * (2.0 * k as f64 * theta).cos();
        }
        let cj = if j == 0 || j == m { 1.0 } else { 2.0 };
        // halved for the map [-1, 1] -> [0, 1]
        weights.push(0.5 * cj / mf * (1.0 - s));
    }
    (nodes, weights)
}

/// Composite Clenshaw–Curtis integral of `f` over `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (nodes, weights) = clenshaw_curtis(order);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + h * p as f64;
        total += nodes.iter().zip(&weights).map(|(u, w)| w * f(lo + h * u)).sum::<f64>() * h;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one_and_integrate_polynomials() {
        let (x, w) = clenshaw_curtis(16);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        for p in 0..=16 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
            assert!((q - 1.0 / (p as f64 + 1.0)).abs() < 1e-14, "degree {p}");
        }
        assert_eq!(x[0], 0.0);
        assert!((x[16] - 1.0).abs() < 1e-16);
    }

    #[test]
    fn composite_rule_on_analytic_integrand() {
        let v = integrate(|t| t.sin().exp(), 0.0, 3.0, 4, 32);
        // reference by a much finer rule
        let r = integrate(|t| t.sin().exp(), 0.0, 3.0, 64, 64);
        assert!((v - r).abs() < 1e-14);
    }
}
