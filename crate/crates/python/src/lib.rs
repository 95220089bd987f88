//! Python bindings. Polynomials cross the boundary as their canonical text.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use semiinv::blockdet::associated_route_set as block_route_set;
use semiinv::domzub::{extract_semiinvariants, membership_in_trace_algebra, DZSpec, Membership};
use semiinv::quiverrep::{generic_representation, parse_quiver_file, QuiverFile};
use semiinv::routes::{
    eliminate_adjoint_pair, enumerate_simple_routes, find_adjoint_pair, generator_routes, is_simple, reduce_repeated,
    route_trace, route_weight, Route,
};
use semiinv::sampling::DEFAULT_SEED;
use semiinv::verify::{run_suite, Report, VerifyOptions};

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A quiver with a dimension vector, parsed from the JSON quiver format.
#[pyclass(name = "Quiver", frozen)]
struct PyQuiver {
    file: QuiverFile,
}

impl PyQuiver {
    fn twos(&self) -> bool {
        self.file.dims.iter().all(|&d| d == 2)
    }

    fn route(&self, text: &str) -> PyResult<Route> {
        Route::parse(&self.file.quiver, text).map_err(value_error)
    }
}

#[pymethods]
impl PyQuiver {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_quiver_file(text.as_bytes()).map(|file| PyQuiver { file }).map_err(value_error)
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.file.quiver.vertices().to_vec()
    }

    /// `(name, tail, head)` triples.
    #[getter]
    fn arrows(&self) -> Vec<(String, String, String)> {
        let q = &self.file.quiver;
        let v = q.vertices();
        (0..q.num_arrows()).map(|a| (q.arrow_name(a).to_string(), v[q.tail(a)].clone(), v[q.head(a)].clone())).collect()
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.file.dims.clone()
    }

    /// Every simple route class with its weight.
    fn routes(&self) -> Vec<(String, BTreeMap<String, i64>)> {
        let q = &self.file.quiver;
        enumerate_simple_routes(q).iter().map(|c| (c.text(q), route_weight(q, c.route()))).collect()
    }

    /// Generator routes and their traces on generic 2x2 matrices.
    fn generators(&self) -> PyResult<Vec<(String, String)>> {
        if !self.twos() {
            return Err(value_error("generators need every dimension equal to 2"));
        }
        let q = &self.file.quiver;
        let rep = generic_representation(q, &self.file.dims);
        generator_routes(q)
            .iter()
            .map(|c| Ok((c.text(q), route_trace(c.route(), &rep).map_err(value_error)?.to_string())))
            .collect()
    }

    fn trace(&self, route: &str) -> PyResult<String> {
        let rep = generic_representation(&self.file.quiver, &self.file.dims);
        Ok(route_trace(&self.route(route)?, &rep).map_err(value_error)?.to_string())
    }

    /// Rewrites a non-simple route, or one with an adjoint pair, in terms of
    /// simpler traces. Returns `None` when there is nothing to rewrite.
    fn reduce(&self, route: &str) -> PyResult<Option<String>> {
        let q = &self.file.quiver;
        let r = self.route(route)?;
        let expr = if !is_simple(&r) {
            reduce_repeated(&r)
        } else if find_adjoint_pair(q, &r).is_some() {
            eliminate_adjoint_pair(q, &r)
        } else {
            return Ok(None);
        };
        Ok(Some(expr.map_err(value_error)?.text(q)))
    }

    /// Coefficients of the block matrix determinant described by `spec_json`,
    /// as `(multidegree, polynomial, combination)` triples. The combination
    /// expresses the coefficient through generator traces and is `None`
    /// unless every dimension is 2.
    fn dz(&self, spec_json: &str) -> PyResult<Vec<(Vec<Vec<u32>>, String, Option<String>)>> {
        let q = &self.file.quiver;
        let spec = DZSpec::parse(spec_json.as_bytes()).map_err(value_error)?;
        spec.validate(q, &self.file.dims).map_err(value_error)?;
        let rep = generic_representation(q, &self.file.dims);
        let gens: Vec<Route> = generator_routes(q).iter().map(|c| c.route().clone()).collect();
        let mut out = Vec::new();
        for h in extract_semiinvariants(&spec, &rep).map_err(value_error)? {
            let combo = if self.twos() {
                match membership_in_trace_algebra(&h.value, &gens, &rep).map_err(value_error)? {
                    Membership::Found(c) => Some(c.text(q)),
                    Membership::NotFound => None,
                }
            } else {
                None
            };
            out.push((h.multidegree, h.value.to_string(), combo));
        }
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!("Quiver({} vertices, {} arrows, dims {:?})", self.file.quiver.vertices().len(), self.file.quiver.num_arrows(), self.file.dims)
    }
}

/// Associated route set of a permutation of `1..=2k`, e.g. `[3, 4, 1, 5, 2, 6]`.
#[pyfunction]
fn associated_route_set(sigma: Vec<usize>) -> PyResult<String> {
    block_route_set(&sigma).map(|s| s.to_string()).map_err(value_error)
}

/// Runs a verification suite and returns its report as JSON text.
#[pyfunction]
#[pyo3(signature = (suite, k = 3, trials = 20, seed = DEFAULT_SEED))]
fn verify(suite: &str, k: usize, trials: usize, seed: u64) -> PyResult<String> {
    let opts = VerifyOptions { k, trials, seed };
    let items = run_suite(suite, &opts).map_err(value_error)?;
    let report = Report::new(format!("verify {suite} --k {k} --trials {trials} --seed {seed:#x}"), items);
    Ok(report.json())
}

#[pymodule]
fn pysemiinv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQuiver>()?;
    m.add_function(wrap_pyfunction!(associated_route_set, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
