//! Python bindings: quadrature rules, fractional differentiation and
//! Birkhoff matrices, Mittag-Leffler evaluation, and preset solves.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use fraccol::birkhoff::{caputo_birkhoff, rl_birkhoff};
use fraccol::fracmat::{caputo_psdm, rl_mod_psdm};
use fraccol::mittag::ml_eval;
use fraccol::orthopoly::JacobiParam;
use fraccol::quadrature::jacobi_gauss_lobatto;
use fraccol::solver::{Scheme, SolveOptions};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rule_for(n: usize, alpha: f64, beta: f64) -> PyResult<fraccol::QuadratureRule> {
    let p = JacobiParam::new(alpha, beta).map_err(err)?;
    jacobi_gauss_lobatto(n, p).map_err(err)
}

fn to_rows(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn parse_scheme(s: &str) -> PyResult<Scheme> {
    match s.to_ascii_lowercase().as_str() {
        "l-col" | "lcol" => Ok(Scheme::LCol),
        "b-col" | "bcol" => Ok(Scheme::BCol),
        "pl-col" | "plcol" => Ok(Scheme::PlCol),
        other => Err(PyValueError::new_err(format!("unknown scheme '{other}'"))),
    }
}

/// Jacobi-Gauss-Lobatto nodes and weights on [-1, 1].
#[pyfunction]
#[pyo3(signature = (n, alpha=0.0, beta=0.0))]
fn jgl_rule(n: usize, alpha: f64, beta: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let rule = rule_for(n, alpha, beta)?;
    Ok((rule.nodes, rule.weights))
}

/// Full Caputo fractional differentiation matrix of order mu.
#[pyfunction]
#[pyo3(signature = (n, mu, alpha=0.0, beta=0.0))]
fn caputo_matrix(n: usize, mu: f64, alpha: f64, beta: f64) -> PyResult<Vec<Vec<f64>>> {
    let rule = rule_for(n, alpha, beta)?;
    Ok(to_rows(&caputo_psdm(&rule, mu).map_err(err)?.full))
}

/// Full modified Riemann-Liouville differentiation matrix of order mu.
#[pyfunction]
#[pyo3(signature = (n, mu, alpha=0.0, beta=0.0))]
fn rl_matrix(n: usize, mu: f64, alpha: f64, beta: f64) -> PyResult<Vec<Vec<f64>>> {
    let rule = rule_for(n, alpha, beta)?;
    Ok(to_rows(&rl_mod_psdm(&rule, mu).map_err(err)?.full))
}

/// Interior Birkhoff basis matrix (the inverse of the interior F-PSDM).
#[pyfunction]
#[pyo3(signature = (flavor, n, mu, alpha=0.0, beta=0.0))]
fn birkhoff_matrix(flavor: &str, n: usize, mu: f64, alpha: f64, beta: f64) -> PyResult<Vec<Vec<f64>>> {
    let rule = rule_for(n, alpha, beta)?;
    let basis = match flavor.to_ascii_lowercase().as_str() {
        "caputo" => caputo_birkhoff(&rule, mu).map_err(err)?,
        "rl" | "modified-rl" => rl_birkhoff(&rule, mu).map_err(err)?,
        other => return Err(PyValueError::new_err(format!("unknown flavor '{other}'"))),
    };
    Ok(to_rows(&basis.matrix()))
}

/// Two-parameter Mittag-Leffler function E_{a,b}(z).
#[pyfunction]
#[pyo3(signature = (a, b, z))]
fn mittag_leffler(a: f64, b: f64, z: f64) -> PyResult<f64> {
    ml_eval(a, b, z).map_err(err)
}

/// Names of the built-in benchmark problems.
#[pyfunction]
fn preset_names() -> Vec<&'static str> {
    fraccol::presets::PRESET_NAMES.to_vec()
}

/// Solves a preset; returns a dict with nodes, nodal values, error_l2,
/// iterations and residual.
#[pyfunction]
#[pyo3(signature = (name, n, scheme="b-col", mu=None, nu=None, tol=1e-12))]
fn solve_preset<'py>(
    py: Python<'py>,
    name: &str,
    n: usize,
    scheme: &str,
    mu: Option<f64>,
    nu: Option<f64>,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let p = fraccol::presets::preset(name, mu, nu).map_err(err)?;
    let scheme = parse_scheme(scheme)?;
    let opts = SolveOptions { tol, ..SolveOptions::default() };
    let (report, _) = p.run(n, scheme, &opts).map_err(err)?;
    let rule = rule_for(n, p.params.alpha, p.params.beta)?;
    let out = PyDict::new(py);
    out.set_item("nodes", rule.nodes)?;
    out.set_item("values", report.nodal_values)?;
    out.set_item("error_l2", report.error_l2)?;
    out.set_item("iterations", report.iterations)?;
    out.set_item("residual", report.residual)?;
    Ok(out)
}

#[pymodule]
fn fraccol_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(jgl_rule, m)?)?;
    m.add_function(wrap_pyfunction!(caputo_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(rl_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(birkhoff_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(mittag_leffler, m)?)?;
    m.add_function(wrap_pyfunction!(preset_names, m)?)?;
    m.add_function(wrap_pyfunction!(solve_preset, m)?)?;
    Ok(())
}
