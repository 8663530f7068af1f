//! Python bindings: generalized trigonometry, closed curves, evolutes and theorem reports.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use evolute_core::catalog::{self, CurveFile};
use evolute_core::theorems::{self, TheoremName, VerifyOptions};
use evolute_core::{spaceform, ClosedCurve, Error, SpaceForm, Vec3};

create_exception!(evolute, EvoluteError, PyException);
create_exception!(evolute, PreconditionError, EvoluteError);
create_exception!(evolute, ResolutionError, EvoluteError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Parse(_) | Error::Io(_) | Error::InvalidInput(_) => PyValueError::new_err(e.to_string()),
        Error::Resolution(_) => ResolutionError::new_err(e.to_string()),
        _ => PreconditionError::new_err(e.to_string()),
    }
}

fn vec3(p: &[f64]) -> PyResult<Vec3> {
    match p {
        [x, y] => Ok(Vec3::new(*x, *y, 0.0)),
        [x, y, z] => Ok(Vec3::new(*x, *y, *z)),
        _ => Err(PyValueError::new_err("points need two or three coordinates")),
    }
}

fn coords(v: &Vec3, sf: &SpaceForm) -> Vec<f64> {
    match sf.model() {
        evolute_core::Model::Plane => vec![v[0], v[1]],
        evolute_core::Model::Embedded => vec![v[0], v[1], v[2]],
    }
}

#[pyfunction]
fn sn(c: f64, x: f64) -> f64 {
    spaceform::sn(c, x)
}

#[pyfunction]
fn cn(c: f64, x: f64) -> f64 {
    spaceform::cn(c, x)
}

#[pyfunction]
fn tanc(c: f64, x: f64) -> f64 {
    spaceform::tanc(c, x)
}

#[pyfunction]
fn cotc(c: f64, x: f64) -> PyResult<f64> {
    spaceform::cotc(c, x).map_err(to_py)
}

#[pyfunction]
fn arccot(c: f64, k: f64) -> PyResult<f64> {
    spaceform::arccot(c, k).map_err(to_py)
}

/// Names of the built-in fixtures.
#[pyfunction]
fn builtins() -> Vec<&'static str> {
    catalog::BUILTIN.to_vec()
}

/// Gauss–Bonnet report (JSON) for any curve file, including piecewise paths.
#[pyfunction]
#[pyo3(signature = (text, n = 1024, tol = theorems::DEFAULT_TOL))]
fn gauss_bonnet(text: &str, n: usize, tol: f64) -> PyResult<String> {
    let file = CurveFile::from_json(text).map_err(to_py)?;
    let path = file.realize(n).map_err(to_py)?.trace();
    let opts = VerifyOptions { tol, ..VerifyOptions::default() };
    let report = theorems::verify_gauss_bonnet_multiplicities(&path, &opts).map_err(to_py)?;
    catalog::reports_to_json(&[report]).map_err(to_py)
}

/// A smooth closed curve sampled uniformly in its parameter.
#[pyclass(frozen, module = "evolute")]
struct Curve {
    inner: ClosedCurve,
}

#[pymethods]
impl Curve {
    /// Build from `n` points (power of two) on the model surface of curvature `c`.
    #[new]
    fn new(c: f64, points: Vec<Vec<f64>>) -> PyResult<Self> {
        let sf = SpaceForm::new(c).map_err(to_py)?;
        let pts: Vec<Vec3> = points.iter().map(|p| vec3(p)).collect::<PyResult<_>>()?;
        Ok(Curve { inner: ClosedCurve::from_samples(&pts, sf).map_err(to_py)? })
    }

    #[staticmethod]
    #[pyo3(signature = (text, n = 1024))]
    fn from_json(text: &str, n: usize) -> PyResult<Self> {
        let file = CurveFile::from_json(text).map_err(to_py)?;
        Ok(Curve { inner: file.realize_curve(n).map_err(to_py)? })
    }

    #[staticmethod]
    #[pyo3(signature = (name, n = 1024))]
    fn builtin(name: &str, n: usize) -> PyResult<Self> {
        let file = catalog::builtin(name).ok_or_else(|| PyValueError::new_err(format!("unknown fixture `{name}`")))?;
        Ok(Curve { inner: file.realize_curve(n).map_err(to_py)? })
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.space_form().c()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn length(&self) -> f64 {
        self.inner.length()
    }

    #[getter]
    fn orientation(&self) -> i8 {
        self.inner.orientation()
    }

    #[getter]
    fn tail_ratio(&self) -> f64 {
        self.inner.tail_ratio()
    }

    #[getter]
    fn is_resolved(&self) -> bool {
        self.inner.is_resolved()
    }

    #[getter]
    fn strong_convexity_margin(&self) -> f64 {
        self.inner.strong_convexity_margin()
    }

    fn samples(&self) -> Vec<Vec<f64>> {
        let sf = self.inner.space_form();
        self.inner.samples().iter().map(|p| coords(p, &sf)).collect()
    }

    /// Signed enclosed area with multiplicities.
    #[pyo3(signature = (base_point = None))]
    fn area(&self, base_point: Option<Vec<f64>>) -> PyResult<f64> {
        let base = base_point.as_deref().map(vec3).transpose()?;
        Ok(self.inner.enclosed_area(base).map_err(to_py)?.value)
    }

    /// Frame and curvature data at parameter `t`.
    fn jet<'py>(&self, py: Python<'py>, t: f64) -> PyResult<Bound<'py, PyDict>> {
        let sf = self.inner.space_form();
        let j = self.inner.jet(t).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("t", j.t)?;
        d.set_item("point", coords(&j.gamma, &sf))?;
        d.set_item("tangent", coords(&j.tangent, &sf))?;
        d.set_item("normal", coords(&j.n, &sf))?;
        d.set_item("speed", j.speed)?;
        d.set_item("k_g", j.k_g)?;
        d.set_item("k", j.k)?;
        d.set_item("rho", j.rho)?;
        d.set_item("drho_ds", j.drho_ds)?;
        Ok(d)
    }

    /// Singular points, area and total curvature of the evolute.
    fn evolute<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let sf = self.inner.space_form();
        let ev = evolute_core::evolute(&self.inner).map_err(to_py)?;
        let tc = ev.total_curvature();
        let d = PyDict::new(py);
        d.set_item("is_circle", ev.is_circle)?;
        d.set_item("singular_params", ev.singular_params.clone())?;
        d.set_item("cusp_count", ev.cusp_count())?;
        d.set_item("area", ev.area(None).map_err(to_py)?.value)?;
        d.set_item("total_curvature", tc.substitution)?;
        d.set_item("total_curvature_direct", tc.direct)?;
        d.set_item("total_curvature_excised", tc.excised)?;
        d.set_item("samples", ev.samples.iter().map(|p| coords(p, &sf)).collect::<Vec<_>>())?;
        Ok(d)
    }

    /// Theorem reports as a JSON array; all theorems unless `names` is given.
    #[pyo3(signature = (names = None, tol = theorems::DEFAULT_TOL, steiner_r = theorems::DEFAULT_STEINER_R))]
    fn verify(&self, names: Option<Vec<String>>, tol: f64, steiner_r: f64) -> PyResult<String> {
        let names: Vec<TheoremName> = match names {
            Some(v) => v.iter().map(|s| s.parse()).collect::<Result<_, Error>>().map_err(to_py)?,
            None => TheoremName::ALL.to_vec(),
        };
        let opts = VerifyOptions { tol, steiner_r, ..VerifyOptions::default() };
        let reports = theorems::run(&self.inner, &names, &opts).map_err(to_py)?;
        catalog::reports_to_json(&reports).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Curve(c={}, n={}, length={:.12})", self.c(), self.inner.len(), self.inner.length())
    }
}

#[pymodule]
fn evolute(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(sn, m)?)?;
    m.add_function(wrap_pyfunction!(cn, m)?)?;
    m.add_function(wrap_pyfunction!(tanc, m)?)?;
    m.add_function(wrap_pyfunction!(cotc, m)?)?;
    m.add_function(wrap_pyfunction!(arccot, m)?)?;
    m.add_function(wrap_pyfunction!(builtins, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_bonnet, m)?)?;
    m.add_class::<Curve>()?;
    m.add("EvoluteError", m.py().get_type::<EvoluteError>())?;
    m.add("PreconditionError", m.py().get_type::<PreconditionError>())?;
    m.add("ResolutionError", m.py().get_type::<ResolutionError>())?;
    Ok(())
}
