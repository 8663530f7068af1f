use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use evolute_core::catalog::{self, CurveFile, Realized};
use evolute_core::theorems::{self, TheoremName, TheoremReport, VerifyOptions};
use evolute_core::{evolute, ClosedCurve, Error, Model, Vec3};

mod plot;

const EXIT_FAILED: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_RESOLUTION: u8 = 4;

#[derive(Parser)]
#[command(name = "evolute", version, about = "Evolutes, curvature and area identities for closed curves on space forms")]
struct Cli {
    /// Samples per curve (power of two, at least 16).
    #[arg(long, global = true, default_value_t = 1024)]
    n: usize,

    /// Tolerance for theorem residuals.
    #[arg(long, global = true, default_value_t = theorems::DEFAULT_TOL)]
    tol: f64,

    /// Cross-check areas against the grid oracle at this resolution.
    #[arg(long, global = true)]
    grid_res: Option<usize>,

    /// Base point for polar line integrals, `x,y` or `x,y,z`.
    #[arg(long, global = true, value_parser = parse_point)]
    base_point: Option<Vec3>,

    /// Treat an unresolved spectrum as an error.
    #[arg(long, global = true)]
    strict: bool,

    /// Directory for report and plot files.
    #[arg(long, global = true, env = "EVOLUTE_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print length, area, curvature ranges and evolute data.
    Invariants { curve: String },
    /// Run theorem checks and write a report file.
    Verify {
        curve: String,
        /// Comma-separated theorem names; all by default.
        #[arg(long, value_delimiter = ',', value_parser = parse_theorem)]
        theorems: Vec<TheoremName>,
        /// Parallel distance for the Steiner check.
        #[arg(long, default_value_t = theorems::DEFAULT_STEINER_R)]
        r: f64,
        /// Report path; defaults to `<out-dir>/<stem>.report.json`.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Steiner formula for the parallel curve at distance `r`.
    Steiner {
        curve: String,
        #[arg(long)]
        r: f64,
    },
    /// Gauss–Bonnet with multiplicities for a curve or piecewise path.
    GaussBonnet { curve: String },
    /// Render the curve (and optionally its evolute) to SVG.
    Plot {
        curve: String,
        /// Output path; defaults to `<out-dir>/<stem>.svg`.
        out: Option<PathBuf>,
        #[arg(long)]
        with_evolute: bool,
        #[arg(long, value_enum, default_value_t = ChartChoice::Auto)]
        chart: ChartChoice,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ChartChoice {
    Auto,
    Identity,
    Stereographic,
    Klein,
}

fn parse_point(s: &str) -> Result<Vec3, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        [x, y] => Ok(Vec3::new(*x, *y, 0.0)),
        [x, y, z] => Ok(Vec3::new(*x, *y, *z)),
        _ => Err("expected two or three comma-separated numbers".into()),
    }
}

fn parse_theorem(s: &str) -> Result<TheoremName, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// 12 significant digits.
pub(crate) fn num(v: f64) -> String {
    format!("{v:.11e}")
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Io(_) => EXIT_PARSE,
        Error::Resolution(_) => EXIT_RESOLUTION,
        _ => EXIT_PRECONDITION,
    }
}

struct Input {
    file: CurveFile,
    stem: String,
}

fn load(spec: &str) -> Result<Input, Error> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let file = catalog::builtin(name).ok_or_else(|| Error::Parse(format!("unknown built-in fixture `{name}`")))?;
        return Ok(Input { file, stem: name.into() });
    }
    let path = Path::new(spec);
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("curve").to_string();
    let file = catalog::load_curve(path).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{spec}: {m}")),
        e => e,
    })?;
    Ok(Input { file, stem })
}

struct App {
    cli: Cli,
}

impl App {
    fn options(&self, label: &str) -> VerifyOptions {
        VerifyOptions {
            tol: self.cli.tol,
            base_point: self.cli.base_point,
            grid_res: self.cli.grid_res,
            label: label.into(),
            ..VerifyOptions::default()
        }
    }

    fn realize(&self, input: &Input) -> Result<Realized, Error> {
        let realized = input.file.realize(self.cli.n)?;
        if let Realized::Curve(c) = &realized {
            if !c.is_resolved() {
                let msg = format!("spectrum not resolved (tail ratio {:.3e}); increase --n", c.tail_ratio());
                if self.cli.strict {
                    return Err(Error::Resolution(msg));
                }
                eprintln!("warning: {msg}");
            }
        }
        Ok(realized)
    }

    fn curve(&self, input: &Input) -> Result<ClosedCurve, Error> {
        match self.realize(input)? {
            Realized::Curve(c) => Ok(c),
            Realized::Path(_) => Err(Error::UnsupportedCurve("this command needs a smooth closed curve".into())),
        }
    }

    fn run(&self) -> Result<u8, Error> {
        match &self.cli.command {
            Command::Invariants { curve } => self.invariants(&load(curve)?),
            Command::Verify { curve, theorems, r, report } => {
                let input = load(curve)?;
                let names = if theorems.is_empty() { TheoremName::ALL.to_vec() } else { theorems.clone() };
                let mut opts = self.options(&input.stem);
                opts.steiner_r = *r;
                let curve = self.curve(&input)?;
                let reports = theorems::run(&curve, &names, &opts)?;
                let path = report.clone().unwrap_or_else(|| self.cli.out_dir.join(format!("{}.report.json", input.stem)));
                self.emit(&reports, Some(&path))
            }
            Command::Steiner { curve, r } => {
                let input = load(curve)?;
                let report = theorems::verify_steiner(&self.curve(&input)?, *r, &self.options(&input.stem))?;
                self.emit(&[report], None)
            }
            Command::GaussBonnet { curve } => {
                let input = load(curve)?;
                let path = self.realize(&input)?.trace();
                let report = theorems::verify_gauss_bonnet_multiplicities(&path, &self.options(&input.stem))?;
                self.emit(&[report], None)
            }
            Command::Plot { curve, out, with_evolute, chart } => {
                let input = load(curve)?;
                let sf = input.file.space_form()?;
                let covers = match chart {
                    ChartChoice::Auto => true,
                    ChartChoice::Identity => sf.model() == Model::Plane,
                    ChartChoice::Stereographic => sf.c() > 0.0,
                    ChartChoice::Klein => sf.c() < 0.0,
                };
                if !covers {
                    return Err(Error::Domain("chart does not cover this geometry".into()));
                }
                let realized = self.realize(&input)?;
                let svg = plot::render(&realized, *with_evolute, self.cli.base_point)?;
                let path = out.clone().unwrap_or_else(|| self.cli.out_dir.join(format!("{}.svg", input.stem)));
                std::fs::write(&path, svg)?;
                println!("wrote {}", path.display());
                Ok(0)
            }
        }
    }

    fn invariants(&self, input: &Input) -> Result<u8, Error> {
        let realized = self.realize(input)?;
        let trace = realized.trace();
        let area = evolute_core::topology::area_with_multiplicities(&trace, self.cli.base_point)?;
        println!("c = {}", num(trace.space_form().c()));
        println!("L = {}", num(trace.length()));
        println!("F = {}", num(area.value));
        let curve = match realized {
            Realized::Curve(c) => c,
            Realized::Path(_) => {
                let angles = trace.interior_angles();
                println!("corners = {}", angles.len());
                for (i, a) in angles.iter().enumerate() {
                    println!("interior angle {i} = {}", num(*a));
                }
                println!("rotation index = {}", trace.rotation_index()?);
                return Ok(0);
            }
        };
        println!("N = {}", curve.len());
        println!("tail ratio = {}", num(curve.tail_ratio()));
        println!("orientation = {}", curve.orientation());
        let margin = curve.strong_convexity_margin();
        println!("strong convexity margin = {}", num(margin));
        let range = |f: &dyn Fn(&evolute_core::FrameJet) -> Option<f64>| {
            let v: Vec<f64> = curve.jets().iter().filter_map(f).collect();
            (v.len() == curve.len()).then(|| {
                v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)))
            })
        };
        if let Some((lo, hi)) = range(&|j| Some(j.k_g)) {
            println!("k_g min = {}\nk_g max = {}", num(lo), num(hi));
        }
        if let Some((lo, hi)) = range(&|j| j.k) {
            println!("k min = {}\nk max = {}", num(lo), num(hi));
        }
        if margin <= 0.0 || !curve.has_radius_of_curvature() {
            println!("not strongly convex: evolute fields omitted");
            return Ok(0);
        }
        if let Some((lo, hi)) = range(&|j| j.rho) {
            println!("rho min = {}\nrho max = {}", num(lo), num(hi));
        }
        let ev = evolute(&curve)?;
        println!("singular points = {}", if ev.is_circle { "all (circle)".to_string() } else { ev.cusp_count().to_string() });
        println!("F_e = {}", num(ev.area(None)?.value));
        Ok(0)
    }

    fn emit(&self, reports: &[TheoremReport], path: Option<&Path>) -> Result<u8, Error> {
        for r in reports {
            println!(
                "{:<40} lhs={} rhs={} residual={} tol={} {}",
                r.name,
                num(r.lhs),
                num(r.rhs),
                num(r.residual),
                num(r.tolerance),
                if r.ok() { "PASS" } else { "FAIL" }
            );
            for c in &r.checks {
                println!("  {:<38} value={} tol={} {}", c.name, num(c.value), num(c.tolerance), if c.pass { "PASS" } else { "FAIL" });
            }
        }
        if let Some(path) = path {
            catalog::save_reports(path, reports)?;
            println!("report written to {}", path.display());
        }
        Ok(if reports.iter().all(TheoremReport::ok) { 0 } else { EXIT_FAILED })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match (App { cli }).run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
