//! Python bindings: `import pyhopfjoin`.
//!
//! Branches are passed by label (`"q5"`, `"b2"`, `"b3"`, `"b4"`). Invalid
//! input raises `ConfigError` (a `ValueError`), numerical failures raise
//! `NumericError` (an `ArithmeticError`).

use hopfjoin::profile::DEFAULT_PROBES;
use hopfjoin::{
    boundary_certificate, EllipsoidParams, Error, Interval, JoinCoordinate, MapFamily, MapSpec,
    ProfileFile, WindingNumbers,
};
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(pyhopfjoin, ConfigError, PyValueError);
create_exception!(pyhopfjoin, NumericError, PyArithmeticError);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidParams(_) | Error::NotMorphismRegime | Error::Parse(_) => ConfigError::new_err(e.to_string()),
        _ => NumericError::new_err(e.to_string()),
    }
}

fn params(a: [f64; 4]) -> PyResult<EllipsoidParams> {
    EllipsoidParams::new(a).map_err(py_err)
}

fn weights(k: [i64; 4]) -> PyResult<WindingNumbers> {
    WindingNumbers::new(k).map_err(py_err)
}

fn branch(label: &str) -> PyResult<Interval> {
    label.parse().map_err(py_err)
}

/// `h(s)` for axes `a`.
#[pyfunction]
fn h(a: [f64; 4], s: f64) -> PyResult<f64> {
    Ok(params(a)?.h(s))
}

/// Point of the join in `R^8` as `[Re z1, Im z1, ..., Re z4, Im z4]`.
#[pyfunction]
fn embed(a: [f64; 4], theta: [f64; 4], s: f64) -> PyResult<[f64; 8]> {
    let w = JoinCoordinate::new(theta, s).map_err(py_err)?;
    Ok(params(a)?.embed(&w).0)
}

/// The three defining equations and the ellipsoid equation at a point.
#[pyfunction]
fn variety_residuals(a: [f64; 4], point: [f64; 8]) -> PyResult<[f64; 4]> {
    let p = params(a)?;
    let q = hopfjoin::AmbientPoint(point);
    let [r1, r2, r3] = p.variety_residuals(&q);
    Ok([r1, r2, r3, p.ellipsoid_residual(&q)])
}

#[pyfunction]
fn is_morphism_regime(a: [f64; 4], k: [i64; 4]) -> PyResult<bool> {
    Ok(hopfjoin::morphism::is_morphism_regime(&params(a)?, &weights(k)?))
}

#[pyfunction]
fn closed_form_alpha(a: [f64; 4], branch_label: &str, c: f64, s: f64) -> PyResult<f64> {
    hopfjoin::closed_form_alpha(branch(branch_label)?, c, &params(a)?, s).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (a, s, simplified = true))]
fn coeff_d(a: [f64; 4], s: f64, simplified: bool) -> PyResult<f64> {
    let p = params(a)?;
    if simplified {
        hopfjoin::coeff_d_simplified(&p, s)
    } else {
        hopfjoin::coeff_d_general(&p, s)
    }
    .map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (a, k, s, alpha, simplified = true))]
fn coeff_g(a: [f64; 4], k: [i64; 4], s: f64, alpha: f64, simplified: bool) -> PyResult<f64> {
    let (p, k) = (params(a)?, weights(k)?);
    if simplified {
        hopfjoin::coeff_g_simplified(&p, &k, s, alpha)
    } else {
        hopfjoin::coeff_g_general(&p, &k, s, alpha)
    }
    .map_err(py_err)
}

/// Squared dilation of the map with profile value `alpha` at `s`.
#[pyfunction]
fn dilation_squared(a: [f64; 4], k: [i64; 4], s: f64, alpha: f64) -> PyResult<f64> {
    MapFamily::new(params(a)?, weights(k)?)
        .dilation_squared(s, alpha)
        .map_err(py_err)
}

#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn q3_residual(a: f64, b: f64, k: i64, l: i64, alpha: f64, alpha_prime: f64, alpha_second: f64, s: f64) -> PyResult<f64> {
    hopfjoin::q3_residual(a, b, k, l, alpha, alpha_prime, alpha_second, s).map_err(py_err)
}

#[pyfunction]
fn hex_format(x: f64) -> String {
    hopfjoin::hexfloat::format(x)
}

#[pyfunction]
fn hex_parse(text: &str) -> PyResult<f64> {
    hopfjoin::hexfloat::parse(text).map_err(py_err)
}

/// A profile `alpha` on one branch.
#[pyclass(frozen, name = "Profile", module = "pyhopfjoin")]
struct PyProfile(hopfjoin::Profile);

#[pymethods]
impl PyProfile {
    /// Quadrature based closed form.
    #[staticmethod]
    #[pyo3(signature = (a, branch_label, c, tol = 1e-12))]
    fn closed_form(a: [f64; 4], branch_label: &str, c: f64, tol: f64) -> PyResult<Self> {
        hopfjoin::Profile::closed_form(&params(a)?, branch(branch_label)?, c, tol)
            .map(Self)
            .map_err(py_err)
    }

    /// Explicit form, for `a1 = a3` and `a2 = a4`.
    #[staticmethod]
    fn constant_h(a: [f64; 4], branch_label: &str, c: f64) -> PyResult<Self> {
        hopfjoin::Profile::constant_h(&params(a)?, branch(branch_label)?, c)
            .map(Self)
            .map_err(py_err)
    }

    /// Integrates the harmonicity equation from `s0` to `target_s`.
    #[staticmethod]
    #[pyo3(signature = (a, k, s0, alpha0, alpha_prime0, target_s, step_tol = 1e-12))]
    fn shoot(
        a: [f64; 4],
        k: [i64; 4],
        s0: f64,
        alpha0: f64,
        alpha_prime0: f64,
        target_s: f64,
        step_tol: f64,
    ) -> PyResult<Self> {
        hopfjoin::shoot(&params(a)?, &weights(k)?, s0, alpha0, alpha_prime0, target_s, step_tol)
            .map(Self)
            .map_err(py_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file: ProfileFile = serde_json::from_str(text).map_err(|e| ConfigError::new_err(e.to_string()))?;
        hopfjoin::Profile::from_file(&file).map(Self).map_err(py_err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.0.to_file()).map_err(|e| NumericError::new_err(e.to_string()))
    }

    #[getter]
    fn branch(&self) -> &'static str {
        self.0.interval().label()
    }

    #[getter]
    fn c(&self) -> Option<f64> {
        self.0.c()
    }

    fn domain(&self) -> (f64, f64) {
        self.0.domain()
    }

    fn range(&self) -> (f64, f64) {
        self.0.range()
    }

    fn alpha(&self, s: f64) -> PyResult<f64> {
        self.0.alpha(s).map_err(py_err)
    }

    /// `(alpha, alpha', alpha'')` at `s`.
    fn jet(&self, s: f64) -> PyResult<(f64, f64, f64)> {
        let j = self.0.jet(s).map_err(py_err)?;
        Ok((j.alpha, j.d1, j.d2))
    }

    /// The `s` with `alpha(s) = t`.
    fn inverse(&self, t: f64) -> PyResult<f64> {
        self.0.inverse(t).map_err(py_err)
    }

    fn harmonicity_residual(&self, a: [f64; 4], k: [i64; 4], s: f64) -> PyResult<f64> {
        hopfjoin::harmonicity_residual(&params(a)?, &weights(k)?, &self.0, s).map_err(py_err)
    }

    fn prime_integral_residual(&self, a: [f64; 4], s: f64) -> PyResult<f64> {
        hopfjoin::prime_integral_residual(&params(a)?, &self.0, s).map_err(py_err)
    }

    /// Image `(gamma, t)` on the sphere of the point with angles `theta` at `s`.
    fn map_point(&self, a: [f64; 4], k: [i64; 4], theta: [f64; 4], s: f64) -> PyResult<(f64, f64)> {
        let w = JoinCoordinate::new(theta, s).map_err(py_err)?;
        let spec = MapSpec::new(params(a)?, weights(k)?, self.0.clone());
        let p = spec.evaluate(&w).map_err(py_err)?;
        Ok((p.gamma(), p.t()))
    }

    /// Approach to the end values, probed at the default distances.
    fn certificate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let cert = boundary_certificate(&self.0, &DEFAULT_PROBES);
        let d = PyDict::new(py);
        d.set_item("certified", cert.certified)?;
        d.set_item("in_window", cert.in_window)?;
        d.set_item("lower_monotone", cert.lower_monotone)?;
        d.set_item("upper_monotone", cert.upper_monotone)?;
        d.set_item("lower_delta", cert.lower_delta)?;
        d.set_item("upper_delta", cert.upper_delta)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        let (lo, hi) = self.0.range();
        format!("Profile(branch={}, c={:?}, range=({lo}, {hi}))", self.branch(), self.0.c())
    }
}

/// Adds every binding to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("ConfigError", py.get_type::<ConfigError>())?;
    m.add("NumericError", py.get_type::<NumericError>())?;
    m.add_class::<PyProfile>()?;
    m.add_function(wrap_pyfunction!(h, m)?)?;
    m.add_function(wrap_pyfunction!(embed, m)?)?;
    m.add_function(wrap_pyfunction!(variety_residuals, m)?)?;
    m.add_function(wrap_pyfunction!(is_morphism_regime, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(coeff_d, m)?)?;
    m.add_function(wrap_pyfunction!(coeff_g, m)?)?;
    m.add_function(wrap_pyfunction!(dilation_squared, m)?)?;
    m.add_function(wrap_pyfunction!(q3_residual, m)?)?;
    m.add_function(wrap_pyfunction!(hex_format, m)?)?;
    m.add_function(wrap_pyfunction!(hex_parse, m)?)?;
    Ok(())
}

#[pymodule]
fn pyhopfjoin(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
