//! Checks of the integral identities and inequalities for strongly convex curves.
//!
//! Each check computes its two sides through separate pipelines: curvature integrals use
//! the curve's jets only, areas use the polar line integral over a path trace.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curve::ClosedCurve;
use crate::error::{Error, Result};
use crate::evolute::{evolute, EvolutePath};
use crate::spaceform::Vec3;
use crate::topology::{area_grid_oracle, area_with_multiplicities, AreaResult, PathTrace};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_STEINER_R: f64 = 0.1;
/// Largest admissible gap between the substitution and direct evolute curvature integrals.
pub const DIRECT_GAP_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Identity,
    /// `lhs <= rhs`.
    Inequality,
}

/// A secondary assertion attached to a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubCheck {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl SubCheck {
    fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        SubCheck { name: name.into(), value, tolerance, pass: value <= tolerance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub name: String,
    pub kind: Kind,
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_provenance: String,
    pub rhs_provenance: String,
    /// `|lhs - rhs|` for identities, `max(0, lhs - rhs)` for inequalities.
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub inputs_digest: String,
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(default)]
    pub checks: Vec<SubCheck>,
}

impl TheoremReport {
    fn new(name: &str, kind: Kind, lhs: (f64, &str), rhs: (f64, &str), tolerance: f64, digest: &str) -> Self {
        let residual = match kind {
            Kind::Identity => (lhs.0 - rhs.0).abs(),
            Kind::Inequality => (lhs.0 - rhs.0).max(0.0),
        };
        TheoremReport {
            name: name.into(),
            kind,
            lhs: lhs.0,
            rhs: rhs.0,
            lhs_provenance: lhs.1.into(),
            rhs_provenance: rhs.1.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            inputs_digest: digest.into(),
            notes: Vec::new(),
            checks: Vec::new(),
        }
    }

    /// Gap `rhs - lhs` of an inequality.
    pub fn gap(&self) -> f64 {
        self.rhs - self.lhs
    }

    /// Main assertion and every sub-check pass.
    pub fn ok(&self) -> bool {
        self.pass && self.checks.iter().all(|c| c.pass)
    }

    fn with_check(mut self, check: SubCheck) -> Self {
        self.checks.push(check);
        self
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Equality holds exactly for circles, and a strictly positive gap otherwise.
    fn equality_iff_circle(self, is_circle: bool) -> Self {
        let gap = self.gap();
        let tol = self.tolerance;
        let check = if is_circle {
            SubCheck::at_most("equality for a circle", gap.abs(), tol)
        } else {
            SubCheck { name: "strict for a non-circle".into(), value: gap, tolerance: tol, pass: gap > tol }
        };
        self.with_check(check)
    }
}

/// Theorem selectors accepted by [`run`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremName {
    TotalCurvature,
    TanHalfRho,
    Ros,
    Steiner,
    Deficit,
    GaussBonnet,
    EvoluteGaussBonnet,
}

impl TheoremName {
    pub const ALL: [TheoremName; 7] = [
        TheoremName::TotalCurvature,
        TheoremName::TanHalfRho,
        TheoremName::Ros,
        TheoremName::Steiner,
        TheoremName::Deficit,
        TheoremName::GaussBonnet,
        TheoremName::EvoluteGaussBonnet,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremName::TotalCurvature => "total-curvature",
            TheoremName::TanHalfRho => "tan-half-rho",
            TheoremName::Ros => "ros",
            TheoremName::Steiner => "steiner",
            TheoremName::Deficit => "deficit",
            TheoremName::GaussBonnet => "gauss-bonnet",
            TheoremName::EvoluteGaussBonnet => "evolute-gauss-bonnet",
        }
    }
}

impl fmt::Display for TheoremName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown theorem `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub tol: f64,
    pub base_point: Option<Vec3>,
    /// Cross-check every area against the grid oracle at this resolution.
    pub grid_res: Option<usize>,
    pub steiner_r: f64,
    pub label: String,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { tol: DEFAULT_TOL, base_point: None, grid_res: None, steiner_r: DEFAULT_STEINER_R, label: String::new() }
    }
}

/// Quantities shared by several checks, computed once per curve.
pub struct Context<'a> {
    pub curve: &'a ClosedCurve,
    pub evolute: EvolutePath,
    pub area: AreaResult,
    pub evolute_area: AreaResult,
    opts: VerifyOptions,
    digest: String,
    oracle_checks: Vec<SubCheck>,
}

fn oracle_check(name: &str, path: &PathTrace, line: &AreaResult, res: usize) -> Result<SubCheck> {
    let grid = area_grid_oracle(path, res, Some(line.base_point))?;
    Ok(SubCheck::at_most(name, (grid.value - line.value).abs(), grid.estimated_error + line.estimated_error))
}

impl<'a> Context<'a> {
    /// Check the hypotheses (positively oriented, strongly convex) and compute the areas.
    pub fn new(curve: &'a ClosedCurve, opts: &VerifyOptions) -> Result<Self> {
        if curve.orientation() != 1 {
            return Err(Error::NotPositivelyOriented);
        }
        let ev = evolute(curve)?;
        let trace = curve.trace();
        let area = area_with_multiplicities(&trace, opts.base_point)?;
        let evolute_area = ev.area(None)?;
        let mut oracle_checks = Vec::new();
        if let Some(res) = opts.grid_res {
            oracle_checks.push(oracle_check("grid oracle for F", &trace, &area, res)?);
            if !ev.is_circle {
                oracle_checks.push(oracle_check("grid oracle for F_e", &ev.trace()?, &evolute_area, res)?);
            }
        }
        let digest = format!(
            "{}c={} N={} tail={:.1e}{}",
            if opts.label.is_empty() { String::new() } else { format!("{}; ", opts.label) },
            curve.space_form().c(),
            curve.len(),
            curve.tail_ratio(),
            if curve.is_resolved() { "" } else { " (unresolved)" }
        );
        Ok(Context { curve, evolute: ev, area, evolute_area, opts: opts.clone(), digest, oracle_checks })
    }

    fn c(&self) -> f64 {
        self.curve.space_form().c()
    }

    fn f(&self) -> f64 {
        self.area.value
    }

    fn fe_abs(&self) -> f64 {
        self.evolute_area.value.abs()
    }

    fn total_k(&self) -> f64 {
        self.curve.integrate_ds(|j| j.k.unwrap_or(0.0))
    }

    fn tan_half_rho(&self) -> f64 {
        let sf = self.curve.space_form();
        self.curve.integrate_ds(|j| sf.tanc(0.5 * j.rho.unwrap_or(0.0)))
    }

    fn report(&self, name: &str, kind: Kind, lhs: (f64, &str), rhs: (f64, &str)) -> TheoremReport {
        TheoremReport::new(name, kind, lhs, rhs, self.opts.tol, &self.digest)
    }

    fn with_oracles(&self, mut r: TheoremReport) -> TheoremReport {
        r.checks.extend(self.oracle_checks.iter().cloned());
        r
    }

    pub fn total_curvature(&self) -> TheoremReport {
        let r = self.report(
            "total curvature",
            Kind::Identity,
            (self.total_k() - TAU, "integral of k ds minus 2pi (curve jets)"),
            (self.c() * self.fe_abs(), "c |F_e| (evolute line integral)"),
        );
        self.with_oracles(r)
    }

    pub fn tan_half_rho_report(&self) -> TheoremReport {
        let r = self.report(
            "tan half rho",
            Kind::Identity,
            (self.tan_half_rho(), "integral of tan_c(rho/2) ds (curve jets)"),
            (self.f() + self.fe_abs(), "F + |F_e| (line integrals)"),
        );
        self.with_oracles(r)
    }

    pub fn ros(&self) -> TheoremReport {
        self.report(
            "ros inequality",
            Kind::Inequality,
            (self.f(), "F (line integral)"),
            (self.tan_half_rho(), "integral of tan_c(rho/2) ds (curve jets)"),
        )
        .equality_iff_circle(self.evolute.is_circle)
    }

    pub fn steiner(&self, r: f64) -> Result<TheoremReport> {
        let sf = self.curve.space_form();
        let par = self.curve.parallel_curve(r)?;
        let fr = area_with_multiplicities(&par.trace(), self.opts.base_point.or(Some(self.area.base_point)))?;
        let length = self.curve.length();
        let rhs = length * sf.sn(r) + 2.0 * sf.sn(0.5 * r).powi(2) * (TAU - self.c() * self.f());
        // measure ratio and radius shift at corresponding parameters
        let (mut ratio_dev, mut rho_dev) = (0.0_f64, 0.0_f64);
        for (a, b) in self.curve.jets().iter().zip(par.jets()) {
            let rho = a.rho.unwrap();
            let expected = sf.sn(rho + r) / sf.sn(rho);
            ratio_dev = ratio_dev.max((b.speed / a.speed - expected).abs() / expected);
            if let Some(rb) = b.rho {
                rho_dev = rho_dev.max((rb - rho - r).abs());
            } else {
                rho_dev = f64::INFINITY;
            }
        }
        let report = self
            .report(
                &format!("steiner r={r}"),
                Kind::Identity,
                (fr.value - self.f(), "F_r - F (line integrals)"),
                (rhs, "L sn(r) + 2 sn^2(r/2) (2pi - cF)"),
            )
            .with_check(SubCheck::at_most("arclength ratio sn(rho+r)/sn(rho)", ratio_dev, 1e-8))
            .with_check(SubCheck::at_most("parallel radius rho + r", rho_dev, 1e-8));
        Ok(report)
    }

    pub fn deficit(&self) -> Vec<TheoremReport> {
        let c = self.c();
        let (l, f, fe) = (self.curve.length(), self.f(), self.fe_abs());
        let delta = l * l - 4.0 * PI * f + c * f * f;
        let circle = self.evolute.is_circle;
        let mut out = vec![
            self.report(
                "isoperimetric inequality",
                Kind::Inequality,
                (f, "F (line integral)"),
                ((l * l + c * f * f) / (4.0 * PI), "(L^2 + cF^2)/4pi"),
            )
            .equality_iff_circle(circle)
            .with_note(format!("deficit {delta:.12e}")),
            self.report(
                "deficit upper bound via tan half rho",
                Kind::Inequality,
                ((l * l + c * f * f) / (4.0 * PI), "(L^2 + cF^2)/4pi"),
                (self.tan_half_rho() + c * fe * fe / (4.0 * PI), "integral of tan_c(rho/2) ds + cF_e^2/4pi"),
            )
            .equality_iff_circle(circle),
            self.report(
                "deficit bound by evolute area",
                Kind::Inequality,
                (delta, "L^2 - 4piF + cF^2"),
                (c * fe * fe + 4.0 * PI * fe, "cF_e^2 + 4pi|F_e|"),
            )
            .equality_iff_circle(circle),
        ];
        if c != 0.0 {
            let tk = self.total_k();
            out.push(
                self.report(
                    "deficit bound by total curvature",
                    Kind::Inequality,
                    (delta, "L^2 - 4piF + cF^2"),
                    ((tk * tk - 4.0 * PI * PI) / c, "((integral of k ds)^2 - 4pi^2)/c"),
                )
                .equality_iff_circle(circle),
            );
        } else {
            out[2].notes.push("total-curvature bound skipped: c = 0".into());
        }
        out
    }

    pub fn gauss_bonnet(&self) -> Result<TheoremReport> {
        let mut r = verify_gauss_bonnet_multiplicities(&self.curve.trace(), &self.opts)?;
        r.inputs_digest = self.digest.clone();
        Ok(r)
    }

    pub fn evolute_gauss_bonnet(&self) -> Result<TheoremReport> {
        let tc = self.evolute.total_curvature();
        let mut r = self.report(
            "evolute gauss-bonnet",
            Kind::Identity,
            (tc.substitution, "integral of k_e ds_e by substitution (curve jets)"),
            (self.c() * self.fe_abs() + TAU, "c |F_e| + 2pi (evolute line integral)"),
        );
        if let Some(gap) = tc.gap {
            r = r.with_check(SubCheck::at_most("direct quadrature plus excised cusp neighbourhoods", gap, DIRECT_GAP_TOL));
            let trace = self.evolute.trace()?;
            let nu = trace.rotation_index()?;
            let cusps = trace.corners().iter().filter(|c| c.is_cusp).count() as i64;
            r = r.with_check(SubCheck {
                name: "cusps plus twice the rotation index".into(),
                value: (cusps + 2 * nu) as f64,
                tolerance: 0.0,
                pass: cusps + 2 * nu == 2,
            });
        } else {
            r = r.with_note("point evolute");
        }
        Ok(r)
    }
}

/// Gauss–Bonnet with multiplicities for a closed piecewise-smooth path.
///
/// Uses signed geodesic curvature. For a path of orientation `s` with corners of
/// interior angle `theta_k` the identity reads
/// `integral k_g ds = -cF + 2 pi nu - s * sum (pi - theta_k)`, which for positively
/// oriented paths is `-cF + sum theta_k + (2 nu - N) pi`.
pub fn verify_gauss_bonnet_multiplicities(path: &PathTrace, opts: &VerifyOptions) -> Result<TheoremReport> {
    let sf = path.space_form();
    let c = sf.c();
    let lhs = path.total_geodesic_curvature();
    let area = area_with_multiplicities(path, opts.base_point)?;
    let angles = path.interior_angles();
    let nu = path.rotation_index()?;
    let s = f64::from(path.orientation());
    let n = angles.len();
    let exterior: f64 = angles.iter().map(|t| PI - t).sum();
    let rhs = -c * area.value + TAU * nu as f64 - s * exterior;
    let digest = format!(
        "{}{} c={c} corners={n} rotation index={nu} orientation={}",
        if opts.label.is_empty() { String::new() } else { format!("{}; ", opts.label) },
        path.source(),
        path.orientation()
    );
    let mut r = TheoremReport::new(
        "gauss-bonnet with multiplicities",
        Kind::Identity,
        (lhs, "integral of signed k_g ds over regular arcs"),
        (rhs, "-cF + 2pi nu - orientation * sum(pi - theta_k), nu by angle tracking"),
        opts.tol,
        &digest,
    )
    .with_note("signed geodesic curvature");
    if n == 0 && nu == 1 {
        r = r.with_check(SubCheck::at_most("simple closed curve: 2pi - cF", (lhs - (TAU - c * area.value)).abs(), opts.tol));
    }
    if let Some(res) = opts.grid_res {
        r = r.with_check(oracle_check("grid oracle for F", path, &area, res)?);
    }
    Ok(r)
}

/// Run the selected checks on one curve.
pub fn run(curve: &ClosedCurve, names: &[TheoremName], opts: &VerifyOptions) -> Result<Vec<TheoremReport>> {
    let ctx = Context::new(curve, opts)?;
    let mut out = Vec::new();
    for name in names {
        match name {
            TheoremName::TotalCurvature => out.push(ctx.total_curvature()),
            TheoremName::TanHalfRho => out.push(ctx.tan_half_rho_report()),
            TheoremName::Ros => out.push(ctx.ros()),
            TheoremName::Steiner => out.push(ctx.steiner(opts.steiner_r)?),
            TheoremName::Deficit => out.extend(ctx.deficit()),
            TheoremName::GaussBonnet => out.push(ctx.gauss_bonnet()?),
            TheoremName::EvoluteGaussBonnet => out.push(ctx.evolute_gauss_bonnet()?),
        }
    }
    Ok(out)
}

pub fn verify_total_curvature(curve: &ClosedCurve, opts: &VerifyOptions) -> Result<TheoremReport> {
    Ok(Context::new(curve, opts)?.total_curvature())
}

pub fn verify_tan_half_rho(curve: &ClosedCurve, opts: &VerifyOptions) -> Result<TheoremReport> {
    Ok(Context::new(curve, opts)?.tan_half_rho_report())
}

pub fn check_ros(curve: &ClosedCurve, opts: &VerifyOptions) -> Result<TheoremReport> {
    Ok(Context::new(curve, opts)?.ros())
}

pub fn verify_steiner(curve: &ClosedCurve, r: f64, opts: &VerifyOptions) -> Result<TheoremReport> {
    Context::new(curve, opts)?.steiner(r)
}

pub fn verify_deficit(curve: &ClosedCurve, opts: &VerifyOptions) -> Result<Vec<TheoremReport>> {
    Ok(Context::new(curve, opts)?.deficit())
}

pub fn verify_evolute_gauss_bonnet(curve: &ClosedCurve, opts: &VerifyOptions) -> Result<TheoremReport> {
    Context::new(curve, opts)?.evolute_gauss_bonnet()
}

/// Residuals non-increasing under refinement, allowing a factor of two and a floor at
/// the rounding level.
pub fn is_monotone_refinement(residuals: &[f64]) -> bool {
    residuals.windows(2).all(|w| w[1] <= (2.0 * w[0]).max(1e-12))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaceform::SpaceForm;
    use crate::spectral::grid;

    fn ellipse(n: usize) -> ClosedCurve {
        let pts: Vec<Vec3> = grid(n).iter().map(|t| Vec3::new(2.0 * t.cos(), t.sin(), 0.0)).collect();
        ClosedCurve::from_samples(&pts, SpaceForm::plane()).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for n in TheoremName::ALL {
            assert_eq!(n.as_str().parse::<TheoremName>().unwrap(), n);
        }
        assert!("fenchel".parse::<TheoremName>().is_err());
    }

    #[test]
    fn inequality_residual_is_one_sided() {
        let r = TheoremReport::new("x", Kind::Inequality, (1.0, ""), (2.0, ""), 1e-6, "");
        assert_eq!(r.residual, 0.0);
        assert!(r.pass);
        let r = TheoremReport::new("x", Kind::Inequality, (2.0, ""), (1.0, ""), 1e-6, "");
        assert_eq!(r.residual, 1.0);
        assert!(!r.pass);
    }

    #[test]
    fn ellipse_suite_passes() {
        let reports = run(&ellipse(512), &TheoremName::ALL, &VerifyOptions::default()).unwrap();
        for r in &reports {
            assert!(r.ok(), "{r:#?}");
        }
        let thr = reports.iter().find(|r| r.name == "tan half rho").unwrap();
        assert!((thr.lhs - 59.0 * PI / 16.0).abs() < 1e-9);
    }

    #[test]
    fn negatively_oriented_rejected() {
        let curve = ellipse(64).reversed().unwrap();
        assert!(matches!(
            verify_total_curvature(&curve, &VerifyOptions::default()),
            Err(Error::NotPositivelyOriented)
        ));
    }

    #[test]
    fn monotone_refinement_rule() {
        assert!(is_monotone_refinement(&[1e-3, 1e-6, 1.5e-6, 1e-13, 5e-13]));
        assert!(!is_monotone_refinement(&[1e-6, 1e-5]));
    }
}
