//! Python bindings: run instance files and a few scalar helpers.

use cmeasure::dsl::{self, Mode, RunConfig};
use cmeasure::premeasure::DEFAULT_MAX_CARRIER;
use cmeasure::{Decision, Scalar};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn scalar(s: &str) -> PyResult<Scalar> {
    s.parse().map_err(value_error)
}

/// Run an instance file given as text and return the JSON report.
/// `mode` is "eval" or "check".
#[pyfunction]
#[pyo3(signature = (text, mode = "eval", seed = 0, max_carrier = DEFAULT_MAX_CARRIER))]
fn run(text: &str, mode: &str, seed: u64, max_carrier: usize) -> PyResult<String> {
    let mode = match mode {
        "eval" => Mode::Eval,
        "check" => Mode::Check,
        other => return Err(value_error(format!("unknown mode '{other}'"))),
    };
    let program = dsl::parse(text).map_err(value_error)?;
    Ok(dsl::run(&program, &RunConfig { mode, max_carrier, seed }).to_json())
}

/// Parse and pretty-print an instance file.
#[pyfunction]
fn format(text: &str) -> PyResult<String> {
    Ok(dsl::parse(text).map_err(value_error)?.to_string())
}

#[pyfunction]
fn pair(n: u64) -> PyResult<(u64, u64)> {
    cmeasure::pair(n).map_err(value_error)
}

#[pyfunction]
fn unpair(p: u64, q: u64) -> PyResult<u64> {
    cmeasure::unpair(p, q).map_err(value_error)
}

/// "below_hi" or "above_lo" for rationals given as strings such as "3/4".
#[pyfunction]
fn compare(a: &str, lo: &str, hi: &str) -> PyResult<&'static str> {
    let d = cmeasure::cotransitive_compare(&scalar(a)?, &scalar(lo)?, &scalar(hi)?).map_err(value_error)?;
    Ok(match d {
        Decision::BelowHi => "below_hi",
        Decision::AboveLo => "above_lo",
    })
}

#[pymodule]
fn cmeasure_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(format, m)?)?;
    m.add_function(wrap_pyfunction!(pair, m)?)?;
    m.add_function(wrap_pyfunction!(unpair, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    Ok(())
}
