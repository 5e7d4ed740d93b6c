//! Python bindings. Results that carry matrices come back as JSON strings;
//! `json.loads` turns them into plain dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use polyimage_core::classify::{classify as classify_core, classify_checked as checked_core, is_classifiable};
use polyimage_core::counterexample::{ut3_constraint_check, ut3_trivial_case, utn_zn_case};
use polyimage_core::image::{default_budget, enumerate_image, ImageReport};
use polyimage_core::report::{run_lemmas, structure_json};
use polyimage_core::star_poly::{PolyFile, StarPoly};
use polyimage_core::{FieldSpec, GradeSpec, InvolutionKind, Scalar, StructureSpec, TriMatrix};

fn err(e: polyimage_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn field(text: &str) -> PyResult<FieldSpec> {
    text.parse().map_err(err)
}

fn involution(text: &str) -> PyResult<InvolutionKind> {
    text.parse().map_err(err)
}

/// A graded involution on `UT_n` over a field.
#[pyclass(name = "Structure", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyStructure(StructureSpec);

#[pymethods]
impl PyStructure {
    /// Elementary grading with `degrees` in `Z_modulus` (0 means `Z`).
    #[new]
    #[pyo3(signature = (n, degrees, modulus=0, involution="reflexive", field="Q"))]
    fn new(n: usize, degrees: Vec<i64>, modulus: u64, involution: &str, field: &str) -> PyResult<Self> {
        let grade = GradeSpec::new(modulus, degrees);
        StructureSpec::new(n, grade, self::involution(involution)?, self::field(field)?)
            .map(PyStructure)
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (n, involution="reflexive", field="Q"))]
    fn trivial(n: usize, involution: &str, field: &str) -> PyResult<Self> {
        StructureSpec::trivial(n, self::involution(involution)?, self::field(field)?)
            .map(PyStructure)
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (involution="reflexive", field="Q"))]
    fn gamma22(involution: &str, field: &str) -> PyResult<Self> {
        StructureSpec::gamma22(self::involution(involution)?, self::field(field)?)
            .map(PyStructure)
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (field="Q"))]
    fn gamma23(field: &str) -> PyResult<Self> {
        StructureSpec::gamma23(self::field(field)?).map(PyStructure).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (field="Q"))]
    fn gamma33(field: &str) -> PyResult<Self> {
        StructureSpec::gamma33(self::field(field)?).map(PyStructure).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (n, involution="reflexive", field="Q"))]
    fn canonical_zn(n: usize, involution: &str, field: &str) -> PyResult<Self> {
        StructureSpec::canonical_zn(n, self::involution(involution)?, self::field(field)?)
            .map(PyStructure)
            .map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    /// `(clause, passed, detail)` for every validation clause.
    #[staticmethod]
    #[pyo3(signature = (n, degrees, modulus=0, involution="reflexive", field="Q"))]
    fn validate(
        n: usize,
        degrees: Vec<i64>,
        modulus: u64,
        involution: &str,
        field: &str,
    ) -> PyResult<Vec<(String, bool, String)>> {
        let s = StructureSpec::unchecked(
            n,
            GradeSpec::new(modulus, degrees),
            self::involution(involution)?,
            self::field(field)?,
        );
        Ok(s.check()
            .clauses
            .into_iter()
            .map(|c| (c.clause.to_string(), c.passed, c.detail))
            .collect())
    }

    fn is_classifiable(&self) -> bool {
        is_classifiable(&self.0)
    }

    /// Applies the involution to a matrix given by its upper entries, row by row.
    fn star(&self, entries: Vec<String>) -> PyResult<Vec<String>> {
        let a = matrix(&self.0, &entries)?;
        Ok(flat(&self.0.apply_involution(&a).map_err(err)?))
    }

    fn to_json(&self) -> String {
        structure_json(&self.0).to_string()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Structure({})", self.0)
    }
}

/// A multilinear *-polynomial in symmetric `y` and skew `z` variables.
#[pyclass(name = "Poly", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyPoly(StarPoly);

#[pymethods]
impl PyPoly {
    #[new]
    #[pyo3(signature = (text, field="Q"))]
    fn new(text: &str, field: &str) -> PyResult<Self> {
        StarPoly::parse(text, self::field(field)?).map(PyPoly).map_err(err)
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn l(&self) -> usize {
        self.0.l()
    }

    /// Evaluates at matrices given by their upper entries, row by row.
    fn evaluate(&self, structure: &PyStructure, args: Vec<Vec<String>>) -> PyResult<Vec<String>> {
        let s = &structure.0;
        let args = args.iter().map(|a| matrix(s, a)).collect::<PyResult<Vec<_>>>()?;
        Ok(flat(&self.0.evaluate(s, &args).map_err(err)?))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly({})", self.0)
    }
}

fn matrix(s: &StructureSpec, entries: &[String]) -> PyResult<TriMatrix<Scalar>> {
    let vals = entries
        .iter()
        .map(|e| Scalar::parse(e, s.field()))
        .collect::<polyimage_core::Result<Vec<_>>>()
        .map_err(err)?;
    TriMatrix::from_vec(s.n(), s.field(), vals).map_err(err)
}

fn flat(a: &TriMatrix<Scalar>) -> Vec<String> {
    a.as_slice().iter().map(Scalar::to_string).collect()
}

/// Parses a polynomial file into `(structure, poly)`.
#[pyfunction]
fn parse_file(text: &str) -> PyResult<(PyStructure, PyPoly)> {
    let f = PolyFile::parse(text).map_err(err)?;
    Ok((PyStructure(f.structure), PyPoly(f.poly)))
}

/// Symbolic classification, as JSON.
#[pyfunction]
fn classify(poly: &PyPoly, structure: &PyStructure) -> PyResult<String> {
    Ok(classify_core(&poly.0, &structure.0).map_err(err)?.to_json().to_string())
}

/// Classification with exhaustive checks over each prime, as JSON.
#[pyfunction]
#[pyo3(signature = (poly, structure, primes=vec![3, 5, 7], budget=None))]
fn classify_checked(poly: &PyPoly, structure: &PyStructure, primes: Vec<u64>, budget: Option<u64>) -> PyResult<String> {
    let budget = budget.unwrap_or_else(default_budget);
    let cc = checked_core(&poly.0, &structure.0, &primes, budget).map_err(err)?;
    Ok(cc.to_json().to_string())
}

/// Exhaustive image over `F_p`, as JSON.
#[pyfunction]
#[pyo3(signature = (poly, structure, p, budget=None))]
fn enumerate(poly: &PyPoly, structure: &PyStructure, p: u64, budget: Option<u64>) -> PyResult<String> {
    let budget = budget.unwrap_or_else(default_budget);
    let fp = FieldSpec::prime(p).map_err(err)?;
    let f = poly.0.reduce_to(fp).map_err(err)?;
    let s = structure.0.with_field(fp);
    let img = enumerate_image(&f, &s, budget).map_err(err)?;
    Ok(ImageReport::new(&f, &img, budget).map_err(err)?.to_json().to_string())
}

/// Entry lemmas up to `max_size` and the identity checks, as JSON.
#[pyfunction]
#[pyo3(signature = (max_size=8))]
fn lemmas(max_size: usize) -> PyResult<String> {
    Ok(run_lemmas(max_size).map_err(err)?.to_json().to_string())
}

/// `z1 z2` on `UT_n` with the trivial grading, as JSON.
#[pyfunction]
#[pyo3(signature = (n, p, budget=None))]
fn trivial_counterexample(n: usize, p: u64, budget: Option<u64>) -> PyResult<String> {
    let r = ut3_trivial_case(n, p, budget.unwrap_or_else(default_budget)).map_err(err)?;
    Ok(r.to_json().to_string())
}

/// `y1 y2` on `UT_n` with the canonical `Z_n` grading, as JSON.
#[pyfunction]
#[pyo3(signature = (n, p, budget=None))]
fn zn_counterexample(n: usize, p: u64, budget: Option<u64>) -> PyResult<String> {
    let r = utn_zn_case(n, p, budget.unwrap_or_else(default_budget)).map_err(err)?;
    Ok(r.to_json().to_string())
}

/// Whether the symbolic forced-zero argument closes for odd `n`.
#[pyfunction]
fn constraint_certificate(n: usize) -> PyResult<(bool, Vec<String>)> {
    let c = ut3_constraint_check(n).map_err(err)?;
    Ok((c.holds, c.deductions))
}

#[pymodule]
fn polyimage(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyStructure>()?;
    m.add_class::<PyPoly>()?;
    m.add_function(wrap_pyfunction!(parse_file, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(classify_checked, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(lemmas, m)?)?;
    m.add_function(wrap_pyfunction!(trivial_counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(zn_counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(constraint_certificate, m)?)?;
    Ok(())
}
