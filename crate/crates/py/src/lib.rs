//! Python bindings for the optstop solvers.

use optstop::eval::{self, OrderingResult};
use optstop::oracle::DEFAULT_TIE_TOLERANCE;
use optstop::two_point::TwoPointInstance;
use optstop::{fptas, prophet, rules, two_point, Dist, FiniteDist, HardnessInstance, UniformDist};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: optstop::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A finite-support or uniform distribution.
#[pyclass(name = "Dist", module = "optstop", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyDist {
    inner: Dist,
}

#[pymethods]
impl PyDist {
    #[staticmethod]
    fn finite(atoms: Vec<f64>, masses: Vec<f64>) -> PyResult<Self> {
        Ok(FiniteDist::new(atoms, masses).map_err(err)?.into())
    }

    #[staticmethod]
    fn uniform(lo: f64, hi: f64) -> PyResult<Self> {
        Ok(UniformDist::new(lo, hi).map_err(err)?.into())
    }

    #[staticmethod]
    fn two_point(a: f64, b: f64, p: f64) -> PyResult<Self> {
        Ok(FiniteDist::two_point(a, b, p).map_err(err)?.into())
    }

    #[staticmethod]
    fn three_point(a: f64, m: f64, b: f64, p: f64, q: f64) -> PyResult<Self> {
        Ok(FiniteDist::three_point(a, m, b, p, q).map_err(err)?.into())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner: Dist = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self { inner })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("dist serializes")
    }

    fn mean(&self) -> f64 {
        self.inner.mean()
    }

    /// E[max(X, c)].
    fn expected_max(&self, c: f64) -> PyResult<f64> {
        eval::emax(&self.inner, c).map_err(err)
    }

    /// `(atoms, masses)`, or None for a uniform.
    fn support(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        self.inner
            .as_finite()
            .map(|f| (f.atoms().to_vec(), f.masses().to_vec()))
    }

    fn __repr__(&self) -> String {
        format!("Dist({})", self.to_json())
    }
}

impl<T: Into<Dist>> From<T> for PyDist {
    fn from(d: T) -> Self {
        Self { inner: d.into() }
    }
}

/// An ordering with its value and thresholds.
#[pyclass(name = "OrderingResult", module = "optstop", frozen, get_all)]
struct PyOrderingResult {
    order: Vec<usize>,
    value: f64,
    thresholds: Vec<f64>,
}

#[pymethods]
impl PyOrderingResult {
    fn __repr__(&self) -> String {
        format!("OrderingResult(order={:?}, value={})", self.order, self.value)
    }
}

impl From<OrderingResult> for PyOrderingResult {
    fn from(r: OrderingResult) -> Self {
        Self {
            order: r.order,
            value: r.value,
            thresholds: r.thresholds,
        }
    }
}

fn unwrap(dists: &[PyRef<'_, PyDist>]) -> Vec<Dist> {
    dists.iter().map(|d| d.inner.clone()).collect()
}

fn finite(dists: &[PyRef<'_, PyDist>]) -> PyResult<Vec<FiniteDist>> {
    optstop::dist::finite_only(&unwrap(dists)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (dists, order=None))]
fn evaluate_order(dists: Vec<PyRef<'_, PyDist>>, order: Option<Vec<usize>>) -> PyResult<PyOrderingResult> {
    let dists = unwrap(&dists);
    let order = order.unwrap_or_else(|| (0..dists.len()).collect());
    Ok(eval::evaluate_order(&dists, &order).map_err(err)?.into())
}

/// E[max_i X_i] over finite-support variables.
#[pyfunction]
fn hindsight_max(dists: Vec<PyRef<'_, PyDist>>) -> PyResult<f64> {
    eval::hindsight_max(&unwrap(&dists)).map_err(err)
}

/// `(best_value, optimal_orderings)` by exhaustive search.
#[pyfunction]
#[pyo3(signature = (dists, tie_tolerance=DEFAULT_TIE_TOLERANCE))]
fn brute_force_order(dists: Vec<PyRef<'_, PyDist>>, tie_tolerance: f64) -> PyResult<(f64, Vec<Vec<usize>>)> {
    let res = optstop::brute_force_order(&unwrap(&dists), tie_tolerance).map_err(err)?;
    Ok((res.best_value, res.best_orderings))
}

#[pyfunction]
fn solve_two_point(dists: Vec<PyRef<'_, PyDist>>) -> PyResult<PyOrderingResult> {
    let inst = TwoPointInstance::from_dists(&unwrap(&dists)).map_err(err)?;
    Ok(two_point::solve(&inst).into())
}

/// Near-optimal ordering for `{a, m, 1}` variables; returns the result and
/// the list sizes kept after each trim.
#[pyfunction]
fn solve_fptas(dists: Vec<PyRef<'_, PyDist>>, eps: f64) -> PyResult<(PyOrderingResult, Vec<usize>)> {
    let finite = finite(&dists)?;
    let common = finite.iter().all(|d| optstop::shape::ZeroMidOne::parse(d).is_ok());
    let res = if common {
        fptas::solve_common_endpoints(&finite, eps)
    } else {
        fptas::solve_general_left(&finite, eps)
    }
    .map_err(err)?;
    let exact = eval::evaluate_order(&finite, &res.ordering).map_err(err)?;
    Ok((exact.into(), res.partitions_kept))
}

#[pyfunction]
fn solve_nested_uniform(dists: Vec<PyRef<'_, PyDist>>) -> PyResult<PyOrderingResult> {
    let uniforms = dists
        .iter()
        .map(|d| {
            d.inner
                .as_uniform()
                .copied()
                .ok_or_else(|| PyValueError::new_err("every variable must be uniform"))
        })
        .collect::<PyResult<Vec<_>>>()?;
    Ok(rules::solve_nested_uniform(&uniforms).map_err(err)?.into())
}

/// Prophet ratio of a two-point instance with the certificate's headline
/// numbers.
#[pyfunction]
fn prophet_ratio<'py>(py: Python<'py>, dists: Vec<PyRef<'py, PyDist>>) -> PyResult<Bound<'py, PyDict>> {
    let inst = TwoPointInstance::from_dists(&unwrap(&dists)).map_err(err)?;
    let r = prophet::prophet_ratio(&inst).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("e_max", r.e_max)?;
    out.set_item("best_order_value", r.best_order_value)?;
    out.set_item("best_order", r.best_order)?;
    out.set_item("ratio", r.ratio)?;
    if let Some(c) = r.certificate {
        out.set_item("certificate_max", c.max)?;
        out.set_item("certificate_bound", c.bound())?;
        out.set_item("certificate_value", c.certified_value())?;
    }
    Ok(out)
}

/// The `{0, m_i, 1}` variables of the subset-product reduction.
#[pyfunction]
fn gen_hardness(integers: Vec<u64>, target: u64) -> PyResult<Vec<PyDist>> {
    let inst = HardnessInstance::generate(&integers, target).map_err(err)?;
    Ok(inst.dists.into_iter().map(PyDist::from).collect())
}

/// `(s_indices, t_indices, satisfies_claim)` for an ordering.
#[pyfunction]
fn classify_st(dists: Vec<PyRef<'_, PyDist>>, order: Vec<usize>) -> PyResult<(Vec<usize>, Vec<usize>, bool)> {
    let finite = finite(&dists)?;
    let res = eval::evaluate_order(&finite, &order).map_err(err)?;
    let rep = rules::classify_st(&res, &finite).map_err(err)?;
    Ok((rep.s_indices, rep.t_indices, rep.satisfies_claim))
}

#[pymodule]
#[pyo3(name = "optstop")]
fn optstop_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDist>()?;
    m.add_class::<PyOrderingResult>()?;
    m.add_function(wrap_pyfunction!(evaluate_order, m)?)?;
    m.add_function(wrap_pyfunction!(hindsight_max, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_order, m)?)?;
    m.add_function(wrap_pyfunction!(solve_two_point, m)?)?;
    m.add_function(wrap_pyfunction!(solve_fptas, m)?)?;
    m.add_function(wrap_pyfunction!(solve_nested_uniform, m)?)?;
    m.add_function(wrap_pyfunction!(prophet_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(gen_hardness, m)?)?;
    m.add_function(wrap_pyfunction!(classify_st, m)?)?;
    Ok(())
}
