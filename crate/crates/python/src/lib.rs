//! Python module `pamin`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use pamin::global::find_minimizer_penalty;
use pamin::instance::report_json;
use pamin::oracle::{grid_min as grid_scan, SearchBox};
use pamin::{Combinator, Error, MinValue, SolverConfig, Vector, DEFAULT_BLOWUP_CAP};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::MaxPivotsExceeded(_) | Error::InternalInconsistency(_) | Error::PenaltyNotConverged { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

type Sets = Vec<Vec<(f64, Vec<f64>)>>;

fn atoms(sets: Sets) -> Vec<Vec<(f64, Vector)>> {
    sets.into_iter()
        .map(|s| s.into_iter().map(|(a, v)| (a, Vector::Dense(v))).collect())
        .collect()
}

/// Min-max or max-min of affine functions `a + <v, x>`.
#[pyclass(name = "PiecewiseAffineFn", module = "pamin", frozen)]
struct PyFn {
    inner: pamin::PiecewiseAffineFn,
}

impl PyFn {
    fn minmax(&self) -> PyResult<pamin::PiecewiseAffineFn> {
        match self.inner.combinator() {
            Combinator::MinMax => Ok(self.inner.clone()),
            Combinator::MaxMin => self.inner.maxmin_to_minmax(DEFAULT_BLOWUP_CAP).map_err(to_py),
        }
    }
}

#[pymethods]
impl PyFn {
    /// `min_i max_j (a_ij + <v_ij, x>)` from lists of `(a, v)` pairs.
    #[staticmethod]
    fn min_max(dim: usize, sets: Sets) -> PyResult<Self> {
        let inner = pamin::PiecewiseAffineFn::min_max(dim, atoms(sets)).map_err(to_py)?;
        Ok(PyFn { inner })
    }

    #[staticmethod]
    fn max_min(dim: usize, sets: Sets) -> PyResult<Self> {
        let inner = pamin::PiecewiseAffineFn::max_min(dim, atoms(sets)).map_err(to_py)?;
        Ok(PyFn { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = pamin::parse_instance(text).map_err(to_py)?;
        Ok(PyFn { inner })
    }

    fn to_json(&self) -> String {
        pamin::serialize_instance(&self.inner, None)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn combinator(&self) -> &'static str {
        self.inner.combinator().name()
    }

    #[getter]
    fn num_sets(&self) -> usize {
        self.inner.sets().len()
    }

    fn evaluate(&self, x: Vec<f64>) -> PyResult<f64> {
        self.inner.evaluate(&Vector::Dense(x)).map_err(to_py)
    }

    fn shift_constant(&self, m: f64) -> PyResult<Self> {
        let inner = self.inner.shift_constant(m).map_err(to_py)?;
        Ok(PyFn { inner })
    }

    #[pyo3(signature = (cap = DEFAULT_BLOWUP_CAP))]
    fn to_maxmin(&self, cap: usize) -> PyResult<Self> {
        let inner = match self.inner.combinator() {
            Combinator::MinMax => self.inner.minmax_to_maxmin(cap).map_err(to_py)?,
            Combinator::MaxMin => self.inner.clone(),
        };
        Ok(PyFn { inner })
    }

    #[pyo3(signature = (cap = DEFAULT_BLOWUP_CAP))]
    fn to_minmax(&self, cap: usize) -> PyResult<Self> {
        let inner = match self.inner.combinator() {
            Combinator::MaxMin => self.inner.maxmin_to_minmax(cap).map_err(to_py)?,
            Combinator::MinMax => self.inner.clone(),
        };
        Ok(PyFn { inner })
    }

    fn lipschitz_bound(&self) -> f64 {
        self.inner.lipschitz_bound()
    }

    fn __repr__(&self) -> String {
        format!(
            "PiecewiseAffineFn(dim={}, combinator={:?}, sets={})",
            self.inner.dim(),
            self.inner.combinator().name(),
            self.inner.sets().len()
        )
    }
}

#[pyfunction]
fn is_bounded_below(f: &PyFn) -> PyResult<bool> {
    pamin::is_bounded_below(&f.minmax()?, &SolverConfig::default()).map_err(to_py)
}

/// Global minimum value, or `None` when unbounded below.
#[pyfunction]
fn min_value(f: &PyFn) -> PyResult<Option<f64>> {
    Ok(match pamin::min_value(&f.minmax()?, &SolverConfig::default()).map_err(to_py)? {
        MinValue::Bounded(v) => Some(v),
        MinValue::UnboundedBelow => None,
    })
}

#[pyfunction]
fn active_family(f: &PyFn, a_star: f64) -> PyResult<Vec<usize>> {
    pamin::active_family(&f.minmax()?, a_star, &SolverConfig::default()).map_err(to_py)
}

/// Full report as a dict with the same keys as the CLI `argmin` output.
#[pyfunction]
fn minimizer_set<'py>(py: Python<'py>, f: &PyFn) -> PyResult<Bound<'py, PyAny>> {
    let report = pamin::minimizer_set(&f.minmax()?, &SolverConfig::default()).map_err(to_py)?;
    py.import("json")?.call_method1("loads", (report_json(&report, false),))
}

#[pyfunction]
fn is_global_minimizer(f: &PyFn, x: Vec<f64>) -> PyResult<bool> {
    let g = f.minmax()?;
    let cfg = SolverConfig::default();
    let report = pamin::minimizer_set(&g, &cfg).map_err(to_py)?;
    pamin::is_global_minimizer(&g, &report, &Vector::Dense(x), &cfg).map_err(to_py)
}

/// One global minimizer by `"lp"` or `"penalty"`; `None` when unbounded.
#[pyfunction]
#[pyo3(signature = (f, method = "lp"))]
fn find_point(f: &PyFn, method: &str) -> PyResult<Option<Vec<f64>>> {
    let g = f.minmax()?;
    let cfg = SolverConfig::default();
    let report = pamin::minimizer_set(&g, &cfg).map_err(to_py)?;
    let Some(a_star) = report.a_star else {
        return Ok(None);
    };
    let first = &g.sets()[report.active_indices[0]];
    match method {
        "lp" => Ok(report.witness.map(Vector::into_dense)),
        "penalty" => {
            let x0 = vec![0.0; g.dim()];
            let r = find_minimizer_penalty(first, a_star, &x0, &cfg.penalty, cfg.region_tol_at(a_star))
                .map_err(to_py)?;
            Ok(Some(r.point))
        }
        other => Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    }
}

/// Grid scan over `[lo, hi]^n`; returns `(value, argmin)`.
#[pyfunction]
fn grid_min(f: &PyFn, lo: f64, hi: f64, steps: usize) -> PyResult<(f64, Vec<f64>)> {
    let bx = SearchBox::cube(f.inner.dim(), lo, hi).map_err(to_py)?;
    let r = grid_scan(&f.inner, &bx, steps).map_err(to_py)?;
    Ok((r.value, r.argmin))
}

#[pymodule]
#[pyo3(name = "pamin")]
fn pamin_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFn>()?;
    m.add_function(wrap_pyfunction!(is_bounded_below, m)?)?;
    m.add_function(wrap_pyfunction!(min_value, m)?)?;
    m.add_function(wrap_pyfunction!(active_family, m)?)?;
    m.add_function(wrap_pyfunction!(minimizer_set, m)?)?;
    m.add_function(wrap_pyfunction!(is_global_minimizer, m)?)?;
    m.add_function(wrap_pyfunction!(find_point, m)?)?;
    m.add_function(wrap_pyfunction!(grid_min, m)?)?;
    Ok(())
}
