//! Python bindings: the exact Dedekind-sum and TQFT-signature kernels plus
//! the q-series evaluators, exposed as a small extension module.
//!
//! Exact rationals cross the boundary as `fractions.Fraction`, exact
//! integers as `int`, and everything complex as Python `complex`.

use num::complex::Complex64;
use num::BigRational;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use qmod_core::dedekind::{self, EisensteinSpec, GammaMatrix};
use qmod_core::periodic::PeriodicMap;
use qmod_core::qseries::{self, Params, Theta, UpperHalfPoint};
use qmod_core::rational::ReducedFraction;
use qmod_core::tqft::{self, Sigma2Argument};
use qmod_core::Error;

fn to_py_err(err: Error) -> PyErr {
    match err {
        Error::Domain(_) | Error::Matrix(_) | Error::Parse(_) => {
            PyValueError::new_err(err.to_string())
        }
        _ => PyRuntimeError::new_err(err.to_string()),
    }
}

fn py_fraction<'py>(py: Python<'py>, value: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    let cls = py.import("fractions")?.getattr("Fraction")?;
    cls.call1((value.numer().clone(), value.denom().clone()))
}

fn fraction(r: i64, p: i64) -> PyResult<ReducedFraction> {
    ReducedFraction::new(r, p).map_err(to_py_err)
}

fn sigma2_arg(r: i64, p: i64) -> PyResult<Sigma2Argument> {
    Sigma2Argument::new(r, p).map_err(to_py_err)
}

fn gamma(m: (i64, i64, i64, i64)) -> PyResult<GammaMatrix> {
    GammaMatrix::new(m.0, m.1, m.2, m.3).map_err(to_py_err)
}

fn spec_from_maps(k: u32, chi: Vec<Complex64>, psi: Vec<Complex64>) -> PyResult<EisensteinSpec> {
    let chi = PeriodicMap::new(chi).map_err(to_py_err)?;
    let psi = PeriodicMap::new(psi).map_err(to_py_err)?;
    EisensteinSpec::new(k, chi, psi).map_err(to_py_err)
}

/// sigma2(r/p) as an exact integer.
#[pyfunction]
fn sigma2_exact(py: Python<'_>, r: i64, p: i64) -> PyResult<Py<PyAny>> {
    let v = tqft::sigma2_exact(&sigma2_arg(r, p)?).map_err(to_py_err)?;
    Ok(v.into_pyobject(py)?.unbind().into())
}

/// sigma2(r/p) from the closed trigonometric formula.
#[pyfunction]
fn sigma2_trig(r: i64, p: i64) -> PyResult<f64> {
    Ok(tqft::sigma2_trig(&sigma2_arg(r, p)?))
}

/// sigma2(r/p) from the cot^3 sum.
#[pyfunction]
fn sigma2_cot3(r: i64, p: i64) -> PyResult<f64> {
    Ok(tqft::sigma2_cot3(&sigma2_arg(r, p)?))
}

/// sigma2(r/p) as a radial limit of Eichler integrals.
#[pyfunction]
#[pyo3(signature = (r, p, t_grid = None))]
fn sigma2_radial(r: i64, p: i64, t_grid: Option<Vec<f64>>) -> PyResult<f64> {
    let grid = t_grid.unwrap_or_else(|| qseries::DEFAULT_RADIAL_GRID.to_vec());
    let rep = qseries::radial_limit_sigma2(&sigma2_arg(r, p)?, &grid).map_err(to_py_err)?;
    Ok(rep.limit)
}

/// S_g^odd(r/p) as an exact `fractions.Fraction`.
#[pyfunction]
fn s_odd_exact(py: Python<'_>, g: u32, r: i64, p: i64) -> PyResult<Py<PyAny>> {
    let v = dedekind::s_odd_exact(g, &fraction(r, p)?).map_err(to_py_err)?;
    Ok(py_fraction(py, &v)?.unbind())
}

/// S_g^odd(r/p) from the trigonometric sum.
#[pyfunction]
fn s_odd_float(g: u32, r: i64, p: i64) -> PyResult<f64> {
    dedekind::s_odd_float(g, &fraction(r, p)?).map_err(to_py_err)
}

/// Exact reciprocity defect of the weight g+2 level-2 family; zero when the
/// reciprocity law holds.
#[pyfunction]
fn reciprocity_defect_exact(
    py: Python<'_>,
    g: u32,
    matrix: (i64, i64, i64, i64),
    r: i64,
    p: i64,
) -> PyResult<Py<PyAny>> {
    let spec = EisensteinSpec::odd_family(g + 2).map_err(to_py_err)?;
    let v = dedekind::reciprocity_defect_exact(&spec, &gamma(matrix)?, &fraction(r, p)?)
        .map_err(to_py_err)?;
    Ok(py_fraction(py, &v)?.unbind())
}

/// Period polynomial of the weight g+2 level-2 family as
/// {"pole": Fraction, "coefficients": [Fraction, ...]} in ascending powers.
#[pyfunction]
fn period_polynomial(
    py: Python<'_>,
    g: u32,
    matrix: (i64, i64, i64, i64),
) -> PyResult<Py<PyDict>> {
    let spec = EisensteinSpec::odd_family(g + 2).map_err(to_py_err)?;
    let poly = dedekind::period_polynomial_exact(&spec, &gamma(matrix)?).map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("pole", py_fraction(py, &poly.pole_coefficient)?)?;
    let coeffs = PyList::empty(py);
    for c in &poly.coefficients {
        coeffs.append(py_fraction(py, c)?)?;
    }
    out.set_item("coefficients", coeffs)?;
    Ok(out.unbind())
}

/// Generalized Dedekind sum S_{E_k^{chi,psi}}(r/p) for arbitrary periodic
/// maps given as lists of complex values.
#[pyfunction]
fn gen_dedekind_sum(
    k: u32,
    chi: Vec<Complex64>,
    psi: Vec<Complex64>,
    r: i64,
    p: i64,
) -> PyResult<Complex64> {
    dedekind::gen_dedekind_sum(&spec_from_maps(k, chi, psi)?, &fraction(r, p)?).map_err(to_py_err)
}

/// Completed L-value Lhat(j; r/p) of E_k^{chi,psi}.
#[pyfunction]
fn lhat_value(
    k: u32,
    j: u32,
    chi: Vec<Complex64>,
    psi: Vec<Complex64>,
    r: i64,
    p: i64,
) -> PyResult<Complex64> {
    dedekind::lhat_value(&spec_from_maps(k, chi, psi)?, j, &fraction(r, p)?).map_err(to_py_err)
}

/// Cusp constant a_0^{(r/p)} of E_k^{chi,psi}.
#[pyfunction]
fn cusp_constant(
    k: u32,
    chi: Vec<Complex64>,
    psi: Vec<Complex64>,
    r: i64,
    p: i64,
) -> PyResult<Complex64> {
    dedekind::cusp_constant(&spec_from_maps(k, chi, psi)?, &fraction(r, p)?).map_err(to_py_err)
}

/// Jacobi theta function (which in {2, 3, 4}) at tau in the upper half plane.
#[pyfunction]
fn theta(which: u8, tau: Complex64) -> PyResult<Complex64> {
    let kind = match which {
        2 => Theta::Two,
        3 => Theta::Three,
        4 => Theta::Four,
        other => return Err(PyValueError::new_err(format!("theta index {other} not in {{2,3,4}}"))),
    };
    Ok(qseries::theta(kind, UpperHalfPoint::new(tau).map_err(to_py_err)?))
}

/// The weight -g level-2 q-series sum_{n odd} sigma_{-g-1}(n) q^{n/2}.
#[pyfunction]
fn e_minus_g_odd(g: u32, tau: Complex64) -> PyResult<Complex64> {
    qseries::e_minus_g_odd(g, tau, &Params::default()).map_err(to_py_err)
}

/// Sweep the shear-difference identity for sigma2 up to p_max; returns
/// {"pairs_checked": int, "failures": [(r, p), ...], "elapsed_seconds": float}.
#[pyfunction]
fn verify_main_theorem(py: Python<'_>, p_max: i64) -> PyResult<Py<PyDict>> {
    let rep = tqft::verify_main_theorem(p_max).map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("pairs_checked", rep.pairs_checked)?;
    out.set_item("failures", rep.failures)?;
    out.set_item("elapsed_seconds", rep.elapsed_seconds)?;
    Ok(out.unbind())
}

/// Vertical-limit check of E_{-g} at x = r/p; returns the fitted and
/// expected constants with the deviation.
#[pyfunction]
#[pyo3(signature = (g, r, p, t_grid = None))]
fn asymptotic_check(
    py: Python<'_>,
    g: u32,
    r: i64,
    p: i64,
    t_grid: Option<Vec<f64>>,
) -> PyResult<Py<PyDict>> {
    let grid = t_grid.unwrap_or_else(|| qseries::DEFAULT_ASYMPTOTIC_GRID.to_vec());
    let rep = qseries::asymptotic_check(g, &fraction(r, p)?, &grid).map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("fitted_constant", Complex64::new(rep.fitted_constant[0], rep.fitted_constant[1]))?;
    out.set_item(
        "expected_constant",
        Complex64::new(rep.expected_constant[0], rep.expected_constant[1]),
    )?;
    out.set_item("deviation", rep.deviation)?;
    out.set_item("fit_residual", rep.fit_residual)?;
    out.set_item("log_correction", rep.log_correction)?;
    Ok(out.unbind())
}

#[pymodule]
fn qmod(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(sigma2_exact, m)?)?;
    m.add_function(wrap_pyfunction!(sigma2_trig, m)?)?;
    m.add_function(wrap_pyfunction!(sigma2_cot3, m)?)?;
    m.add_function(wrap_pyfunction!(sigma2_radial, m)?)?;
    m.add_function(wrap_pyfunction!(s_odd_exact, m)?)?;
    m.add_function(wrap_pyfunction!(s_odd_float, m)?)?;
    m.add_function(wrap_pyfunction!(reciprocity_defect_exact, m)?)?;
    m.add_function(wrap_pyfunction!(period_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(gen_dedekind_sum, m)?)?;
    m.add_function(wrap_pyfunction!(lhat_value, m)?)?;
    m.add_function(wrap_pyfunction!(cusp_constant, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(e_minus_g_odd, m)?)?;
    m.add_function(wrap_pyfunction!(verify_main_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_check, m)?)?;
    Ok(())
}
