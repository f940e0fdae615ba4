//! Python bindings: racks, automata and the claim suite.
//!
//! Errors surface as `ValueError("<ErrorName>: <message>")`, or `OverflowError`
//! when a size budget is exceeded.

use std::sync::Arc;

use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;

use rackca::ca::CellularAutomaton as CoreCa;
use rackca::compose::invert_checked;
use rackca::config::{shift, Budget, ConfigSpace, Configuration};
use rackca::equivariance::eq_set;
use rackca::harness::{run_suite, InstanceSpec, SuiteConfig, CLAIM_IDS};
use rackca::io::{resolve_rack, Document};
use rackca::memory::minimal_memory;
use rackca::{Error, FiniteRack};

fn py_err(e: Error) -> PyErr {
    let text = format!("{}: {e}", e.name());
    if e.is_budget() {
        PyOverflowError::new_err(text)
    } else {
        PyValueError::new_err(text)
    }
}

trait OrPy<T> {
    fn or_py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for rackca::Result<T> {
    fn or_py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

#[pyclass(name = "Rack", module = "rackca", frozen)]
struct PyRack {
    inner: Arc<FiniteRack>,
}

#[pymethods]
impl PyRack {
    /// A `builtin:` spec or a rack file path.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(PyRack { inner: Arc::new(resolve_rack(spec).or_py()?) })
    }

    #[staticmethod]
    fn from_table(op: Vec<Vec<usize>>) -> PyResult<Self> {
        Ok(PyRack { inner: Arc::new(FiniteRack::from_table(&op).or_py()?) })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn is_quandle(&self) -> bool {
        self.inner.is_quandle()
    }

    fn table(&self) -> Vec<Vec<usize>> {
        self.inner.table()
    }

    fn inverse_table(&self) -> Vec<Vec<usize>> {
        self.inner.inverse_table()
    }

    fn op(&self, r: usize, s: usize) -> PyResult<usize> {
        self.check(r)?;
        self.check(s)?;
        Ok(self.inner.op(r, s))
    }

    fn inv_op(&self, r: usize, s: usize) -> PyResult<usize> {
        self.check(r)?;
        self.check(s)?;
        Ok(self.inner.inv_op(r, s))
    }

    fn is_subrack(&self, subset: Vec<usize>) -> PyResult<bool> {
        subset.iter().try_for_each(|&s| self.check(s))?;
        Ok(self.inner.is_subrack(&subset))
    }

    #[pyo3(signature = (limit = 40320))]
    fn inner_group(&self, limit: usize) -> PyResult<Vec<Vec<usize>>> {
        Ok(self.inner.inner_group(limit).or_py()?.into_iter().map(Vec::from).collect())
    }

    /// `(r.x)(s) = x(r >^-1 s)`.
    fn shift(&self, r: usize, cells: Vec<usize>, q: usize) -> PyResult<Vec<usize>> {
        self.check(r)?;
        let x = Configuration::new(q, cells).or_py()?;
        Ok(shift(&self.inner, r, &x).or_py()?.cells)
    }

    #[pyo3(signature = (cells, q, budget = 1 << 16))]
    fn stabilizer(&self, cells: Vec<usize>, q: usize, budget: usize) -> PyResult<Vec<usize>> {
        let space = ConfigSpace::new(self.inner.clone(), q, Budget::new(budget)).or_py()?;
        let x = space.encode(&Configuration::new(q, cells).or_py()?).or_py()?;
        Ok(space.stabilizer(x))
    }

    fn to_json(&self) -> String {
        Document::rack(&self.inner).to_json()
    }

    fn __len__(&self) -> usize {
        self.inner.order()
    }

    fn __repr__(&self) -> String {
        format!("Rack(order={}, quandle={})", self.inner.order(), self.inner.is_quandle())
    }
}

impl PyRack {
    fn check(&self, r: usize) -> PyResult<()> {
        if r >= self.inner.order() {
            return Err(py_err(Error::IndexOutOfRange { index: r as u128, bound: self.inner.order() as u128 }));
        }
        Ok(())
    }
}

#[pyclass(name = "CellularAutomaton", module = "rackca", frozen)]
struct PyCa {
    inner: CoreCa,
}

#[pymethods]
impl PyCa {
    /// `rule` is indexed by the little-endian encoding of the memory pattern.
    #[new]
    fn new(rack: &PyRack, q: usize, memory: Vec<usize>, rule: Vec<usize>) -> PyResult<Self> {
        Ok(PyCa { inner: CoreCa::new(rack.inner.clone(), q, memory, rule).or_py()? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyCa { inner: Document::parse(text).or_py()?.into_ca(None).or_py()? })
    }

    #[getter]
    fn q(&self) -> usize {
        self.inner.q()
    }

    #[getter]
    fn memory(&self) -> Vec<usize> {
        self.inner.memory().to_vec()
    }

    #[getter]
    fn rule(&self) -> Vec<usize> {
        self.inner.rule().to_vec()
    }

    fn apply(&self, cells: Vec<usize>) -> PyResult<Vec<usize>> {
        let x = Configuration::new(self.inner.q(), cells).or_py()?;
        Ok(self.inner.apply(&x).or_py()?.cells)
    }

    fn evolve(&self, cells: Vec<usize>, steps: usize) -> PyResult<Vec<Vec<usize>>> {
        let x = Configuration::new(self.inner.q(), cells).or_py()?;
        Ok(self.inner.evolve(&x, steps).or_py()?.into_iter().map(|c| c.cells).collect())
    }

    /// `F(x)` for every configuration, indexed by encoding.
    #[pyo3(signature = (budget = 1 << 16))]
    fn global_map(&self, budget: usize) -> PyResult<Vec<usize>> {
        Ok(self.inner.tabulate(Budget::new(budget)).or_py()?.1.table)
    }

    #[pyo3(signature = (budget = 1 << 16))]
    fn eq_set(&self, budget: usize) -> PyResult<Vec<usize>> {
        let (space, f) = self.inner.tabulate(Budget::new(budget)).or_py()?;
        Ok(eq_set(&space, &f).or_py()?.members)
    }

    /// All minimal-cardinality memory sets.
    #[pyo3(signature = (budget = 1 << 16))]
    fn minimal_memory(&self, budget: usize) -> PyResult<Vec<Vec<usize>>> {
        let (space, f) = self.inner.tabulate(Budget::new(budget)).or_py()?;
        Ok(minimal_memory(&space, &f).or_py()?.minima)
    }

    /// The inverse automaton, or `None` when the map is not bijective.
    #[pyo3(signature = (budget = 1 << 16))]
    fn inverse(&self, budget: usize) -> PyResult<Option<PyCa>> {
        let space = ConfigSpace::new(self.inner.rack().clone(), self.inner.q(), Budget::new(budget)).or_py()?;
        Ok(invert_checked(&space, &self.inner).or_py()?.inverse_ca.map(|inner| PyCa { inner }))
    }

    fn to_json(&self) -> String {
        Document::ca(&self.inner).to_json()
    }

    fn __repr__(&self) -> String {
        format!("CellularAutomaton(q={}, {})", self.inner.q(), self.inner.label())
    }
}

/// Runs `claim` (or `"all"`) on one rack spec, or on the default suite when
/// `rack` is `None`. Returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (claim, rack = None, q = 2, seed = 0, budget = 1 << 16))]
fn verify(py: Python<'_>, claim: &str, rack: Option<&str>, q: usize, seed: u64, budget: usize) -> PyResult<String> {
    let claims: Vec<String> = if claim == "all" {
        CLAIM_IDS.iter().map(|s| s.to_string()).collect()
    } else if CLAIM_IDS.contains(&claim) {
        vec![claim.to_string()]
    } else {
        return Err(py_err(Error::UnknownClaim(claim.to_string())));
    };
    let budget = Budget::new(budget);
    let config = match rack {
        Some(spec) => {
            let spec = InstanceSpec::from_spec(spec, q).or_py()?.with_seed(seed).with_budget(budget);
            SuiteConfig::for_specs(vec![spec], seed)
        }
        None => SuiteConfig::default_suite(seed, budget).or_py()?,
    }
    .with_claims(claims);
    Ok(py.detach(|| run_suite(&config)).to_json())
}

#[pyfunction]
fn claim_ids() -> Vec<&'static str> {
    CLAIM_IDS.to_vec()
}

#[pymodule]
#[pyo3(name = "rackca")]
fn rackca_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRack>()?;
    m.add_class::<PyCa>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(claim_ids, m)?)?;
    Ok(())
}
