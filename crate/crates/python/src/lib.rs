//! Python bindings: `import hcc`.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use hcc_core::equality::AxiomTable;
use hcc_core::flatten::EqKind;
use hcc_core::syntax::{parse_term as parse_core_term, print_term};
use hcc_core::{Context, Declaration, Flags, Verdict};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

create_exception!(hcc, HccError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    HccError::new_err(e.to_string())
}

fn kind_str(k: EqKind) -> &'static str {
    match k {
        EqKind::Homogeneous => "=",
        EqKind::Heterogeneous => "==",
    }
}

/// A term of the type theory.
#[pyclass(frozen, skip_from_py_object, module = "hcc")]
#[derive(Clone)]
struct Term {
    inner: hcc_core::Term,
}

impl Term {
    fn wrap(inner: hcc_core::Term) -> Self {
        Term { inner }
    }
}

#[pymethods]
impl Term {
    #[new]
    fn new(src: &str) -> PyResult<Self> {
        parse_core_term(src).map(Term::wrap).map_err(err)
    }

    fn __str__(&self) -> String {
        print_term(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Term({:?})", print_term(&self.inner))
    }

    /// Equality is α-equivalence.
    fn __eq__(&self, other: &Term) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }

    fn size(&self) -> usize {
        self.inner.size()
    }
}

/// A parsed problem file.
#[pyclass(frozen, module = "hcc")]
struct Problem {
    inner: hcc_core::Problem,
}

#[pymethods]
impl Problem {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        hcc_core::parse_problem(text).map(|inner| Problem { inner }).map_err(err)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __eq__(&self, other: &Problem) -> bool {
        self.inner == other.inner
    }

    /// `(lhs, rhs, "=" | "==")`
    #[getter]
    fn goal(&self) -> (Term, Term, &'static str) {
        let (l, r, k) = self.inner.goal();
        (Term::wrap(l.clone()), Term::wrap(r.clone()), kind_str(k))
    }

    /// `[(name, lhs, rhs, "=" | "==")]`
    #[getter]
    fn hypotheses(&self) -> Vec<(String, Term, Term, &'static str)> {
        self.inner
            .hypotheses()
            .filter_map(|i| match i {
                hcc_core::Item::Hyp { name, lhs, rhs, kind } => {
                    Some((name.to_string(), Term::wrap(lhs.clone()), Term::wrap(rhs.clone()), kind_str(*kind)))
                }
                _ => None,
            })
            .collect()
    }

    #[pyo3(signature = (check=true, subsingleton=true, emit_partition=false, debug_invariants=false))]
    fn solve(&self, check: bool, subsingleton: bool, emit_partition: bool, debug_invariants: bool) -> PyResult<Report> {
        let flags = Flags { check, subsingleton, emit_partition, debug_invariants, ..Flags::default() };
        hcc_core::run(&self.inner, &flags).map(|inner| Report { inner }).map_err(err)
    }
}

/// The outcome of solving a problem.
#[pyclass(frozen, module = "hcc")]
struct Report {
    inner: hcc_core::Report,
}

#[pymethods]
impl Report {
    #[getter]
    fn proved(&self) -> bool {
        self.inner.verdict == Verdict::Proved
    }

    /// `"ok"`, `"skipped"` or `"rejected: ..."`.
    #[getter]
    fn check(&self) -> String {
        self.inner.check.to_string()
    }

    #[getter]
    fn proof(&self) -> Option<Term> {
        self.inner.proof.clone().map(Term::wrap)
    }

    /// The proof with trivial steps erased and generated names unfolded.
    #[getter]
    fn shape(&self) -> Option<String> {
        self.inner.shape.as_ref().map(|s| s.to_string())
    }

    #[getter]
    fn hcongr_arities(&self) -> Vec<usize> {
        self.inner.shape.as_ref().map(|s| s.hcongr_arities().into_iter().collect()).unwrap_or_default()
    }

    #[getter]
    fn partition(&self) -> Option<Vec<Vec<Term>>> {
        self.inner
            .partition
            .as_ref()
            .map(|cs| cs.iter().map(|c| c.iter().cloned().map(Term::wrap).collect()).collect())
    }

    #[getter]
    fn congr_table_size(&self) -> usize {
        self.inner.congr_table_size
    }

    #[getter]
    fn violations(&self) -> Vec<String> {
        self.inner.violations.clone()
    }

    #[getter]
    fn exit_code(&self) -> i32 {
        self.inner.exit_code()
    }

    fn render(&self) -> String {
        self.inner.render()
    }

    fn __str__(&self) -> String {
        self.inner.render()
    }
}

/// A type checker with the equality axioms installed.
#[pyclass(unsendable, module = "hcc")]
struct Kernel {
    inner: hcc_core::Kernel,
}

#[pymethods]
impl Kernel {
    #[new]
    #[pyo3(signature = (max_hcongr=3))]
    fn new(max_hcongr: usize) -> PyResult<Self> {
        let mut inner = hcc_core::Kernel::new(Arc::new(Context::new()), Context::new());
        AxiomTable::with_hcongr(max_hcongr).install(&mut inner).map_err(err)?;
        Ok(Kernel { inner })
    }

    fn assume(&mut self, name: &str, ty: &Term) -> PyResult<()> {
        self.inner.declare_local(Declaration::assumption(name, ty.inner.clone())).map_err(err)
    }

    fn define(&mut self, name: &str, ty: &Term, value: &Term) -> PyResult<()> {
        self.inner
            .declare_local(Declaration::definition(name, ty.inner.clone(), value.inner.clone()))
            .map_err(err)
    }

    fn infer(&self, t: &Term) -> PyResult<Term> {
        self.inner.infer(&t.inner).map(Term::wrap).map_err(err)
    }

    fn normalize(&self, t: &Term) -> PyResult<Term> {
        self.inner.normalize(&t.inner).map(Term::wrap).map_err(err)
    }

    fn defeq(&self, a: &Term, b: &Term) -> PyResult<bool> {
        self.inner.defeq(&a.inner, &b.inner).map_err(err)
    }

    /// Check `proof` against `statement`; raises `HccError` on rejection.
    fn check(&self, proof: &Term, statement: &Term) -> PyResult<()> {
        hcc_core::checker::check_proof(&self.inner, &proof.inner, &statement.inner).map_err(err)
    }
}

#[pyfunction]
fn parse_term(src: &str) -> PyResult<Term> {
    Term::new(src)
}

#[pyfunction]
fn parse_problem(text: &str) -> PyResult<Problem> {
    Problem::new(text)
}

/// Parse and solve a problem in one step.
#[pyfunction]
#[pyo3(signature = (text, check=true, subsingleton=true, emit_partition=false, debug_invariants=false))]
fn solve(text: &str, check: bool, subsingleton: bool, emit_partition: bool, debug_invariants: bool) -> PyResult<Report> {
    Problem::new(text)?.solve(check, subsingleton, emit_partition, debug_invariants)
}

#[pymodule]
fn hcc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Term>()?;
    m.add_class::<Problem>()?;
    m.add_class::<Report>()?;
    m.add_class::<Kernel>()?;
    m.add_function(wrap_pyfunction!(parse_term, m)?)?;
    m.add_function(wrap_pyfunction!(parse_problem, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add("HccError", m.py().get_type::<HccError>())?;
    Ok(())
}
