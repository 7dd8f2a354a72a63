//! Python bindings: bundles, structure checks, constructions and the example catalog.
//!
//! Scalars cross the boundary as strings (`"3/2"`, `"k1 - k2"`) so nothing is rounded.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use bihom_core::catalog;
use bihom_core::construct::{self, Strictness, TensorKind, Truncated as CoreTruncated, TwistSpec};
use bihom_core::identity::{parse_identity, Status};
use bihom_core::io::{
    bundle_from_str, bundle_to_string, load_bundle, report_json, report_text, save_bundle, to_canonical_string,
};
use bihom_core::linear::{format_vector, LinMap};
use bihom_core::scalar::{parse_scalar, Scalar};
use bihom_core::structures::{check_structure, check_text, AlgebraBundle, Mode, Report as CoreReport};

create_exception!(bihom, BihomError, PyException);

fn err(e: bihom_core::Error) -> PyErr {
    BihomError::new_err(e.to_string())
}

fn strictness(relaxed: bool) -> Strictness {
    if relaxed {
        Strictness::Relaxed
    } else {
        Strictness::Strict
    }
}

fn status_name(s: &Status) -> &'static str {
    bihom_core::io::status_name(s)
}

/// An algebra: basis, coefficient ring, named operations and linear maps.
#[pyclass(name = "Bundle", module = "bihom", frozen)]
struct Bundle {
    inner: AlgebraBundle,
}

#[pymethods]
impl Bundle {
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Bundle { inner: load_bundle(path).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Bundle { inner: bundle_from_str(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        bundle_to_string(&self.inner)
    }

    fn save(&self, path: &str) -> PyResult<()> {
        save_bundle(&self.inner, path).map_err(err)
    }

    #[getter]
    fn id(&self) -> String {
        self.inner.id.clone()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn params(&self) -> Vec<String> {
        self.inner.ring.params.to_vec()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.space.labels().to_vec()
    }

    #[getter]
    fn ops(&self) -> BTreeMap<String, usize> {
        self.inner.ops.iter().map(|(k, v)| (k.clone(), v.arity())).collect()
    }

    #[getter]
    fn maps(&self) -> Vec<String> {
        self.inner.maps.keys().cloned().collect()
    }

    /// Matrix of a map as rows of coefficient strings.
    fn map_rows(&self, name: &str) -> PyResult<Vec<Vec<String>>> {
        let m = self.inner.map(name).map_err(err)?;
        Ok(m.rows().iter().map(|r| r.iter().map(Scalar::to_string).collect()).collect())
    }

    /// Copy with map `name` set from rows of coefficient strings.
    fn with_map(&self, name: &str, rows: Vec<Vec<String>>) -> PyResult<Self> {
        let params = &self.inner.ring.params;
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|t| parse_scalar(t, params)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        let m = LinMap::from_rows(rows).map_err(err)?;
        if m.dim() != self.inner.dim() {
            return Err(BihomError::new_err(format!(
                "map `{name}` has size {}, space has dimension {}",
                m.dim(),
                self.inner.dim()
            )));
        }
        Ok(Bundle { inner: self.inner.clone().with_map(name, m) })
    }

    /// Copy with operation `name` defined by an expression, e.g. `mul(a(x), D(y))`.
    fn with_op_expr(&self, name: &str, vars: Vec<String>, expr: &str) -> PyResult<Self> {
        let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
        let op = construct::op_from_expr(&self.inner, &vars, expr).map_err(err)?;
        Ok(Bundle { inner: self.inner.clone().with_op(name, op) })
    }

    /// Value of an operation on basis labels, e.g. `apply("br", ["e1", "e2"])`.
    fn apply(&self, op: &str, args: Vec<String>) -> PyResult<String> {
        let m = self.inner.op(op).map_err(err)?;
        let labels = self.inner.space.labels();
        let idx = args
            .iter()
            .map(|a| {
                labels
                    .iter()
                    .position(|l| l == a)
                    .ok_or_else(|| BihomError::new_err(format!("unknown basis label `{a}`")))
            })
            .collect::<PyResult<Vec<_>>>()?;
        m.check_index(&idx).map_err(err)?;
        Ok(format_vector(&m.basis_value(&idx), labels))
    }

    /// Specialization at a parameter point, given as `{"k1": "3", "k2": "1/2"}`; missing parameters are 0.
    fn eval_at(&self, point: BTreeMap<String, String>) -> PyResult<Self> {
        let text: Vec<String> = point.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let p = self.inner.ring.parse_point(&text.join(",")).map_err(err)?;
        Ok(Bundle { inner: self.inner.eval_at(&p).map_err(err)? })
    }

    fn rename_params(&self, names: Vec<String>) -> PyResult<Self> {
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        Ok(Bundle { inner: construct::rename_params(&self.inner, &names).map_err(err)? })
    }

    /// Construction notes, including hypotheses that were not met in relaxed mode.
    #[getter]
    fn notes(&self) -> Vec<String> {
        self.inner.provenance.iter().flat_map(|p| p.notes.clone()).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Bundle(id={:?}, dim={}, params={:?})",
            self.inner.id,
            self.inner.dim(),
            self.inner.ring.params.to_vec()
        )
    }
}

/// Per-identity verdicts for one bundle.
#[pyclass(name = "Report", module = "bihom", frozen)]
struct Report {
    inner: CoreReport,
    bundle: AlgebraBundle,
}

#[pymethods]
impl Report {
    #[getter]
    fn structure(&self) -> String {
        self.inner.structure.clone()
    }

    #[getter]
    fn overall(&self) -> &'static str {
        status_name(&self.inner.overall)
    }

    #[getter]
    fn passed(&self) -> bool {
        self.inner.is_pass()
    }

    /// `{id: status}` for every checked identity and predicate.
    #[getter]
    fn statuses(&self) -> BTreeMap<String, &'static str> {
        self.inner.verdicts.iter().map(|v| (v.id.clone(), status_name(&v.status))).collect()
    }

    /// Residual of a failed verdict as `(basis labels, residual text)`.
    fn counterexample(&self, id: &str) -> Option<(Vec<String>, String)> {
        let v = self.inner.verdict(id)?;
        let cx = v.counterexample.as_ref()?;
        let labels = self.bundle.space.labels();
        Some((cx.tuple.iter().map(|&i| labels[i].clone()).collect(), format_vector(&cx.residual, labels)))
    }

    fn to_json(&self) -> String {
        to_canonical_string(&report_json(&self.inner, &self.bundle))
    }

    fn __str__(&self) -> String {
        report_text(&self.inner, &self.bundle)
    }

    fn __repr__(&self) -> String {
        format!("Report({} / {}: {})", self.bundle.id, self.inner.structure, self.overall())
    }
}

/// `Q[vars]` modulo monomials of total degree >= `degree`, with derivation helpers.
#[pyclass(name = "Truncated", module = "bihom", frozen)]
struct Truncated {
    inner: CoreTruncated,
}

fn map_rows(m: &LinMap) -> Vec<Vec<String>> {
    m.rows().iter().map(|r| r.iter().map(Scalar::to_string).collect()).collect()
}

#[pymethods]
impl Truncated {
    #[new]
    fn new(vars: Vec<String>, degree: u32) -> Self {
        let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
        Truncated { inner: CoreTruncated::new(&vars, degree) }
    }

    /// The algebra with its product and identity structure maps.
    fn bundle(&self) -> Bundle {
        Bundle { inner: self.inner.bundle() }
    }

    /// Rows of `d/d(var)`.
    fn partial(&self, var: usize) -> Vec<Vec<String>> {
        map_rows(&self.inner.partial(var))
    }

    /// Rows of `sum m_i d/d(var_i)` for `terms = [(exponents of m_i, i), ..]`.
    fn vector_field(&self, terms: Vec<(Vec<u32>, usize)>) -> Vec<Vec<String>> {
        let t: Vec<(&[u32], usize)> = terms.iter().map(|(e, v)| (e.as_slice(), *v)).collect();
        map_rows(&self.inner.vector_field(&t))
    }
}

fn mode_for(b: &AlgebraBundle, mode: &str, samples: usize, seed: u64) -> PyResult<Mode> {
    match mode {
        "symbolic" => Ok(Mode::Symbolic),
        "sampled" => Mode::sampled(b, samples, seed).map_err(err),
        other => Err(BihomError::new_err(format!("unknown mode `{other}` (symbolic or sampled)"))),
    }
}

/// Checks a bundle against a registered structure, e.g. `tbp`, `bp`, `3-bihom-lie`.
#[pyfunction]
#[pyo3(signature = (bundle, structure, mode = "symbolic", samples = 5, seed = 0))]
fn check(bundle: &Bundle, structure: &str, mode: &str, samples: usize, seed: u64) -> PyResult<Report> {
    let m = mode_for(&bundle.inner, mode, samples, seed)?;
    let r = check_structure(structure, &bundle.inner, &m).map_err(err)?;
    Ok(Report { inner: r, bundle: bundle.inner.clone() })
}

/// Checks one identity written in the DSL, e.g. `forall x,y: br(x,y) + br(y,x) = 0`.
#[pyfunction]
#[pyo3(signature = (bundle, text, mode = "symbolic", samples = 5, seed = 0))]
fn check_identity(bundle: &Bundle, text: &str, mode: &str, samples: usize, seed: u64) -> PyResult<Report> {
    parse_identity(text).map_err(err)?;
    let m = mode_for(&bundle.inner, mode, samples, seed)?;
    let v = check_text("identity", text, &bundle.inner, &m).map_err(err)?;
    let r = CoreReport::new(&bundle.inner.id, "identity", m, vec![v]);
    Ok(Report { inner: r, bundle: bundle.inner.clone() })
}

#[pyfunction]
fn catalog_entry(entry: u32) -> PyResult<Bundle> {
    let e = catalog::entry(entry).map_err(err)?;
    Ok(Bundle { inner: e.bundle().map_err(err)? })
}

/// Verifies catalog entries (`"1-26"`, `"24,26"`); returns the summary table, JSON report and regressions.
#[pyfunction]
#[pyo3(signature = (entries = "1-26", samples = None, seed = 0))]
fn catalog_verify(entries: &str, samples: Option<usize>, seed: u64) -> PyResult<(String, String, Vec<u32>)> {
    let ids = catalog::parse_range(entries).map_err(err)?;
    let run = catalog::verify_all(&ids, samples.map(|n| (n, seed))).map_err(err)?;
    Ok((run.summary_table(), to_canonical_string(&run.report_json()), run.regressions()))
}

#[pyfunction]
#[pyo3(signature = (bundle, derivation = "D", relaxed = false))]
fn derivation_tbp(bundle: &Bundle, derivation: &str, relaxed: bool) -> PyResult<Bundle> {
    Ok(Bundle { inner: construct::derivation_tbp(&bundle.inner, derivation, strictness(relaxed)).map_err(err)? })
}

#[pyfunction]
#[pyo3(signature = (bundle, derivation = "D", relaxed = false))]
fn pre_lie(bundle: &Bundle, derivation: &str, relaxed: bool) -> PyResult<Bundle> {
    Ok(Bundle {
        inner: construct::pre_lie_from_derivation(&bundle.inner, derivation, strictness(relaxed)).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (bundle, relaxed = false))]
fn np_commutator(bundle: &Bundle, relaxed: bool) -> PyResult<Bundle> {
    Ok(Bundle { inner: construct::np_commutator(&bundle.inner, strictness(relaxed)).map_err(err)? })
}

#[pyfunction]
#[pyo3(signature = (bundle, derivation = "E", relaxed = false))]
fn ternary_from_derivation(bundle: &Bundle, derivation: &str, relaxed: bool) -> PyResult<Bundle> {
    Ok(Bundle {
        inner: construct::ternary_from_derivation(&bundle.inner, derivation, strictness(relaxed)).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (bundle, involution = "f", relaxed = false))]
fn ternary_from_involution(bundle: &Bundle, involution: &str, relaxed: bool) -> PyResult<Bundle> {
    Ok(Bundle {
        inner: construct::ternary_from_involution(&bundle.inner, involution, strictness(relaxed)).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (bundle, relaxed = false))]
fn ternary_from_product(bundle: &Bundle, relaxed: bool) -> PyResult<Bundle> {
    Ok(Bundle { inner: construct::ternary_from_product(&bundle.inner, strictness(relaxed)).map_err(err)? })
}

/// Twists operations by structure maps; specs look like `"mul:a,b"` or `"br:a^2,b^-1"`.
#[pyfunction]
#[pyo3(signature = (bundle, specs, relaxed = false))]
fn twist(bundle: &Bundle, specs: Vec<String>, relaxed: bool) -> PyResult<Bundle> {
    let specs = specs.iter().map(|s| TwistSpec::parse(s)).collect::<Result<Vec<_>, _>>().map_err(err)?;
    Ok(Bundle { inner: construct::yau_twist(&bundle.inner, &specs, strictness(relaxed)).map_err(err)? })
}

/// Tensor product; `kind` is `bp-tbp` or `pre-lie-poisson`. Parameter lists are joined first.
#[pyfunction]
#[pyo3(signature = (left, right, kind = "bp-tbp"))]
fn tensor(left: &Bundle, right: &Bundle, kind: &str) -> PyResult<Bundle> {
    let kind = match kind {
        "bp-tbp" => TensorKind::BpTbp,
        "pre-lie-poisson" => TensorKind::PreLiePoisson,
        other => return Err(BihomError::new_err(format!("unknown tensor kind `{other}`"))),
    };
    let (a, b) = construct::join_params(&left.inner, &right.inner).map_err(err)?;
    Ok(Bundle { inner: construct::tensor_bundle(&a, &b, kind).map_err(err)? })
}

#[pymodule]
fn bihom(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BihomError", m.py().get_type::<BihomError>())?;
    m.add_class::<Bundle>()?;
    m.add_class::<Report>()?;
    m.add_class::<Truncated>()?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(check_identity, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_entry, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_verify, m)?)?;
    m.add_function(wrap_pyfunction!(derivation_tbp, m)?)?;
    m.add_function(wrap_pyfunction!(pre_lie, m)?)?;
    m.add_function(wrap_pyfunction!(np_commutator, m)?)?;
    m.add_function(wrap_pyfunction!(ternary_from_derivation, m)?)?;
    m.add_function(wrap_pyfunction!(ternary_from_involution, m)?)?;
    m.add_function(wrap_pyfunction!(ternary_from_product, m)?)?;
    m.add_function(wrap_pyfunction!(twist, m)?)?;
    m.add_function(wrap_pyfunction!(tensor, m)?)?;
    Ok(())
}
