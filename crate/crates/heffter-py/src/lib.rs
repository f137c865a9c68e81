//! Python bindings. Arrays cross the boundary as the same JSON documents
//! the command line reads and writes.

use std::sync::Arc;

use heffter::arrays::ArrayDoc;
use heffter::constructors::route;
use heffter::tiles::expected_zero_bound;
use heffter::topology::solve_knight;
use heffter::{build_group, construct as build, subgroup_of_order, verify_array, BuildError, BuildRequest, GroupSpec, Params};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(heffter_py, InfeasibleError, PyException, "The parameters violate a necessary condition.");
create_exception!(heffter_py, OpenError, PyException, "No construction applies and random search gave up.");

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[allow(clippy::too_many_arguments)]
fn request(group: &str, m: usize, n: usize, lambda: usize, h: Option<usize>, k: Option<usize>, t: usize, seed: u64) -> PyResult<BuildRequest> {
    let spec = GroupSpec::parse(group).map_err(value_err)?;
    let g = Arc::new(build_group(&spec).map_err(value_err)?);
    let j = subgroup_of_order(&g, t).map_err(value_err)?;
    let v = g.order();
    let p = Params { m, n, h: h.unwrap_or(n), k: k.unwrap_or(m), lambda, t, v };
    Ok(BuildRequest::new(g, j, p, seed))
}

fn load(doc: &str) -> PyResult<(heffter::PFArray, heffter::Subgroup, Params)> {
    ArrayDoc::from_json(doc).and_then(|d| d.load()).map_err(value_err)
}

/// Builds an array and returns it as a JSON document.
#[pyfunction]
#[pyo3(signature = (group, m, n, lam, h=None, k=None, t=1, seed=0))]
#[allow(clippy::too_many_arguments)]
fn construct(group: &str, m: usize, n: usize, lam: usize, h: Option<usize>, k: Option<usize>, t: usize, seed: u64) -> PyResult<(String, String)> {
    let req = request(group, m, n, lam, h, k, t, seed)?;
    match build(&req) {
        Ok(r) => Ok((r.construction.to_string(), ArrayDoc::from_array(&r.array, &req.j, &req.params).to_json())),
        Err(BuildError::Infeasible(why)) => Err(InfeasibleError::new_err(why)),
        Err(BuildError::Open(why)) => Err(OpenError::new_err(why)),
        Err(e) => Err(value_err(e)),
    }
}

/// The construction the dispatcher would use, or None.
#[pyfunction]
#[pyo3(signature = (group, m, n, lam, h=None, k=None, t=1))]
fn dispatch(group: &str, m: usize, n: usize, lam: usize, h: Option<usize>, k: Option<usize>, t: usize) -> PyResult<Option<String>> {
    let req = request(group, m, n, lam, h, k, t, 0)?;
    Ok(route(&req.group, &req.j, &req.params).map(|c| c.to_string()))
}

/// Verification report of a JSON document, as JSON.
#[pyfunction]
fn verify(doc: &str) -> PyResult<(bool, String)> {
    let (a, j, p) = load(doc)?;
    let report = verify_array(&a, &j, &p);
    Ok((report.passed(), serde_json::to_string(&report).map_err(value_err)?))
}

/// `(total, total < 1)` with the total as a reduced fraction string.
#[pyfunction]
#[pyo3(signature = (m, n, h, k, lam=1))]
fn bound(m: usize, n: usize, h: usize, k: usize, lam: usize) -> (String, bool) {
    let r = expected_zero_bound(m, n, h, k, lam);
    (r.total.to_string(), r.feasible)
}

/// Row and column directions of the first covering knight's tour.
#[pyfunction]
fn knight_tour(doc: &str) -> PyResult<Option<(Vec<i8>, Vec<i8>)>> {
    let (a, _, _) = load(doc)?;
    Ok(solve_knight(&a).map_err(value_err)?.map(|o| (o.rows, o.cols)))
}

#[pymodule]
fn heffter_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(dispatch, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(bound, m)?)?;
    m.add_function(wrap_pyfunction!(knight_tour, m)?)?;
    m.add("InfeasibleError", m.py().get_type::<InfeasibleError>())?;
    m.add("OpenError", m.py().get_type::<OpenError>())?;
    Ok(())
}
