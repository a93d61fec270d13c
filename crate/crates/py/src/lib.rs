//! Python bindings. Reports come back as plain dicts and lists; polynomials
//! and the memoizing oracle are wrapped as classes.

use bredon_core::characters::{Character, GroupRank, Subgroup};
use bredon_core::circuits::{count_circuits_closed_form, enumerate_circuits};
use bredon_core::localization::{build_local_presentation, gfp_dimension, trivial_b_dimension};
use bredon_core::oracle::{dimension_table, MaskRep, Oracle as CoreOracle};
use bredon_core::presentation::{self, Caps};
use bredon_core::ring::{self, AtPolynomial, RepDegree};
use bredon_core::verify::{run_suite, Budget, Suite, SuiteOptions};
use bredon_core::Error;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err(e: Error) -> PyErr {
    match e {
        Error::Mismatch(msg) => PyRuntimeError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn rank_of(r: u32) -> PyResult<GroupRank> {
    GroupRank::enumerable(r).map_err(err)
}

fn character(mask: u32) -> PyResult<Character> {
    Character::new(mask).map_err(err)
}

/// Round-trips a serializable report through `json.loads`.
fn to_py<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A representation given either in the `1^2,3` grammar or as
/// `[(mask, multiplicity), ...]`.
#[derive(FromPyObject)]
enum Rep {
    Spec(String),
    Pairs(Vec<(u32, u32)>),
}

fn degree(rank: GroupRank, m: i64, rep: Rep) -> PyResult<RepDegree> {
    let d = match rep {
        Rep::Spec(s) => RepDegree::parse_rep(m, &s).map_err(err)?,
        Rep::Pairs(pairs) => {
            let mut items = Vec::with_capacity(pairs.len());
            for (mask, k) in pairs {
                items.push((character(mask)?, k));
            }
            RepDegree::new(m, items)
        }
    };
    d.check_rank(rank).map_err(err)?;
    Ok(d)
}

/// Polynomial in the `a_λ`, `t_λ` over GF(2).
#[pyclass(name = "Polynomial", frozen)]
struct Polynomial(AtPolynomial);

#[pymethods]
impl Polynomial {
    /// Parses text such as `a[1]t[2]t[3] + t[1]a[2]t[3]`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(Polynomial).map_err(err)
    }

    #[staticmethod]
    fn relation(members: Vec<u32>) -> PyResult<Self> {
        let chars = members.into_iter().map(character).collect::<PyResult<Vec<_>>>()?;
        ring::relation_polynomial(&chars).map(Polynomial).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial('{}')", self.0)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __add__(&self, other: &Self) -> Self {
        Polynomial(self.0.add(&other.0))
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.0.try_mul(&other.0).map(Polynomial).map_err(err)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `(m, [(mask, multiplicity), ...])`, or `None` for zero.
    fn degree(&self) -> PyResult<Option<(i64, MaskRep)>> {
        let d = self.0.homogeneous_degree().map_err(err)?;
        Ok(d.map(|d| (d.m(), d.rep().iter().map(|&(c, k)| (c.mask(), k)).collect())))
    }

    fn bockstein(&self) -> PyResult<Self> {
        ring::bockstein(&self.0).map(Polynomial).map_err(err)
    }

    /// Restriction to the kernel of the character `lam`.
    fn restrict(&self, lam: u32) -> PyResult<Self> {
        ring::restrict_to_kernel(&self.0, character(lam)?).map(Polynomial).map_err(err)
    }

    fn is_in_ideal(&self, rank: u32) -> PyResult<bool> {
        presentation::is_in_ideal(&self.0, rank_of(rank)?, &Caps::default()).map_err(err)
    }

    fn normal_form(&self, rank: u32) -> PyResult<Self> {
        presentation::normal_form(&self.0, rank_of(rank)?, &Caps::default()).map(Polynomial).map_err(err)
    }
}

/// Memoizing dimension oracle; reuse one instance across many queries.
#[pyclass(name = "Oracle", frozen)]
struct Oracle(CoreOracle);

#[pymethods]
impl Oracle {
    #[new]
    fn new() -> Self {
        Oracle(CoreOracle::new())
    }

    fn dimension(&self, rank: u32, m: i64, rep: Rep) -> PyResult<u64> {
        let rank = rank_of(rank)?;
        self.0.dimension(rank, &degree(rank, m, rep)?).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

/// Circuits of the given rank as sorted lists of masks.
#[pyfunction]
#[pyo3(signature = (rank, max_size=None))]
fn circuits(rank: u32, max_size: Option<usize>) -> PyResult<Vec<Vec<u32>>> {
    let rank = rank_of(rank)?;
    if rank.get() > bredon_core::circuits::MATERIALIZE_RANK_CAP && max_size.is_none() {
        return Err(PyValueError::new_err("listing every circuit is limited to rank 5; pass max_size"));
    }
    Ok(enumerate_circuits(rank, max_size).map_err(err)?.map(|c| c.masks()).collect())
}

/// Number of circuits from the closed formula, as a Python int.
#[pyfunction]
fn count_circuits<'py>(py: Python<'py>, rank: u32) -> PyResult<Bound<'py, PyAny>> {
    let total = count_circuits_closed_form(GroupRank::new(rank).map_err(err)?).total.to_string();
    py.import("builtins")?.call_method1("int", (total,))
}

#[pyfunction]
#[pyo3(signature = (rank, m, rep=Rep::Spec(String::new())))]
fn dimension<'py>(py: Python<'py>, rank: u32, m: i64, rep: Rep) -> PyResult<Bound<'py, PyAny>> {
    let r = rank_of(rank)?;
    let report = presentation::dimension_linear(r, &degree(r, m, rep)?, &Caps::default()).map_err(err)?;
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (rank, max_total, max_m=None))]
fn table<'py>(py: Python<'py>, rank: u32, max_total: u32, max_m: Option<i64>) -> PyResult<Bound<'py, PyAny>> {
    let rows = dimension_table(
        &CoreOracle::new(),
        rank_of(rank)?,
        max_total,
        max_m.unwrap_or(i64::from(max_total)),
        &Caps::default(),
    )
    .map_err(err)?;
    to_py(py, &rows)
}

/// Presentation of `H(A|B)` with `B` generated by the given element masks.
#[pyfunction]
fn localize<'py>(py: Python<'py>, rank: u32, subgroup: Vec<u32>) -> PyResult<Bound<'py, PyAny>> {
    let r = rank_of(rank)?;
    let b = Subgroup::new(r, &subgroup).map_err(err)?;
    to_py(py, &build_local_presentation(r, &b).map_err(err)?)
}

#[pyfunction]
fn gfp(rank: u32, degree: u32) -> PyResult<u64> {
    gfp_dimension(rank_of(rank)?, degree, Caps::default().max_monomials).map_err(err)
}

/// Degree `-d` piece of the localization at the trivial subgroup.
#[pyfunction]
fn trivial_localization(rank: u32, d: u32) -> PyResult<u64> {
    trivial_b_dimension(rank_of(rank)?, d, Caps::default().max_monomials).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (suite, rank, seed=0, budget=None))]
fn verify<'py>(py: Python<'py>, suite: &str, rank: u32, seed: u64, budget: Option<f64>) -> PyResult<Bound<'py, PyAny>> {
    let suite: Suite = suite.parse().map_err(err)?;
    let budget = budget.map_or(Budget::unlimited(), Budget::seconds);
    let report =
        run_suite(suite, rank_of(rank)?, &SuiteOptions { seed, caps: Caps::default() }, &budget).map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
fn bredon(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Polynomial>()?;
    m.add_class::<Oracle>()?;
    m.add_function(wrap_pyfunction!(circuits, m)?)?;
    m.add_function(wrap_pyfunction!(count_circuits, m)?)?;
    m.add_function(wrap_pyfunction!(dimension, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    m.add_function(wrap_pyfunction!(localize, m)?)?;
    m.add_function(wrap_pyfunction!(gfp, m)?)?;
    m.add_function(wrap_pyfunction!(trivial_localization, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
