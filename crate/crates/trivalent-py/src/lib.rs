//! Python bindings for the exact trivalent-graph/chord-diagram/symplectic
//! library: dimension queries, contractions, the degree-one cocycle, Magnus
//! expansions, free-group words, edge labeling, and the verification suites.
//!
//! Scalars cross the boundary as exact fraction strings (`"p/q"`); structured
//! results cross as JSON strings with a `schema` version field, mirroring the
//! CLI's `--json` documents.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use trivalent_core::chordspace::{
    arp_space, enumerate_chords, enumerate_colored_chords, ArpVariant, ChordJson,
    ColoredLinearChordDiagram, LinearChordDiagram,
};
use trivalent_core::graphspace::aphi_basis;
use trivalent_core::groupring::{
    magnus, parse_expression, GroupRingElement, Word, DEFAULT_MAGNUS_TRUNCATION,
};
use trivalent_core::symplectic::{
    contract_gl, contract_sp, invariant_subspace_dim, tensor_to_wedge3, InvariantSpace,
    LieFamily, SymplecticTensor, TensorJson, Wedge3Element,
};
use trivalent_core::torelli::{
    build_proper_commutator, label_edges, parse_commutator, proper_commutator_check, properness,
    CocycleC1 as CoreCocycle, EdgeSymbol,
};
use trivalent_core::verify::{run_suite, SUITE_NAMES};
use trivalent_core::Error;

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

// ---------------------------------------------------------------------------
// Dimension queries
// ---------------------------------------------------------------------------

/// Dimension of the trivalent-graph space at the given degree.
#[pyfunction]
fn aphi_dim(degree: usize) -> PyResult<usize> {
    Ok(aphi_basis(degree).map_err(py_err)?.1)
}

/// Number of linear chord diagrams (optionally per-chord-oriented ones) at
/// the given degree.
#[pyfunction(signature = (degree, colored = false))]
fn chord_count(degree: usize, colored: bool) -> PyResult<usize> {
    if colored {
        Ok(enumerate_colored_chords(degree).map_err(py_err)?.len())
    } else {
        Ok(enumerate_chords(degree).map_err(py_err)?.len())
    }
}

/// Dimension of a vertex-ordered quotient space ("rp", "rp_nl", "rp_cl", or
/// "rp_nl_cl") at the given degree.
#[pyfunction]
fn arp_dim(degree: usize, variant: &str) -> PyResult<usize> {
    let variant = ArpVariant::parse(variant).map_err(py_err)?;
    Ok(arp_space(degree, variant).map_err(py_err)?.1)
}

/// Dimension of the invariant subspace of "h6", "l3h2", or "u2" under the
/// "sp" or "gl" action at the given genus.
#[pyfunction]
fn invariant_dim(space: &str, group: &str, genus: usize) -> PyResult<usize> {
    let space = InvariantSpace::parse(space).map_err(py_err)?;
    let family = LieFamily::parse(group).map_err(py_err)?;
    invariant_subspace_dim(space, family, genus).map_err(py_err)
}

// ---------------------------------------------------------------------------
// Contractions and the cocycle
// ---------------------------------------------------------------------------

fn tensor_from_json(text: &str) -> PyResult<SymplecticTensor> {
    let parsed: TensorJson =
        serde_json::from_str(text).map_err(|e| PyValueError::new_err(format!("tensor JSON: {e}")))?;
    SymplecticTensor::try_from(&parsed).map_err(py_err)
}

fn wedge_from_json(text: &str, genus: usize) -> PyResult<Wedge3Element> {
    let t = tensor_from_json(text)?;
    if t.genus() != genus {
        return Err(PyValueError::new_err(format!(
            "tensor has genus {}, expected {genus}",
            t.genus()
        )));
    }
    tensor_to_wedge3(&t).map_err(py_err)
}

/// Contracts a chord diagram (JSON) against a tensor (JSON); colored
/// diagrams use the arrow convention, plain ones the omega convention.
/// Returns the exact value as a fraction string.
#[pyfunction]
fn contract(diagram_json: &str, tensor_json: &str) -> PyResult<String> {
    let chord: ChordJson = serde_json::from_str(diagram_json)
        .map_err(|e| PyValueError::new_err(format!("diagram JSON: {e}")))?;
    let t = tensor_from_json(tensor_json)?;
    let value = if chord.colors.is_some() {
        let d = ColoredLinearChordDiagram::try_from(&chord).map_err(py_err)?;
        contract_gl(&d, &t).map_err(py_err)?
    } else {
        let d = LinearChordDiagram::try_from(&chord).map_err(py_err)?;
        contract_sp(&d, &t).map_err(py_err)?
    };
    Ok(value.as_fraction())
}

/// The degree-one cocycle on two rank-3 tensors (JSON), antisymmetrized onto
/// the third exterior power. Returns the coefficient of the theta class as a
/// fraction string.
#[pyclass(name = "CocycleC1")]
struct PyCocycleC1 {
    inner: CoreCocycle,
}

#[pymethods]
impl PyCocycleC1 {
    #[new]
    #[pyo3(signature = (genus, swapped = false))]
    fn new(genus: usize, swapped: bool) -> PyResult<Self> {
        Ok(PyCocycleC1 { inner: CoreCocycle::new(genus, swapped).map_err(py_err)? })
    }

    /// Genus of the underlying symplectic space.
    #[getter]
    fn genus(&self) -> usize {
        self.inner.genus()
    }

    /// Whether the Lagrangian order is reversed.
    #[getter]
    fn swapped(&self) -> bool {
        self.inner.swapped()
    }

    /// Evaluates on two rank-3 tensor JSON strings; returns the coefficient
    /// of the theta class as a fraction string.
    fn eval(&self, alpha_json: &str, beta_json: &str) -> PyResult<String> {
        let a = wedge_from_json(alpha_json, self.inner.genus())?;
        let b = wedge_from_json(beta_json, self.inner.genus())?;
        Ok(self.inner.coefficient(&a, &b).map_err(py_err)?.as_fraction())
    }

    fn __repr__(&self) -> String {
        format!("CocycleC1(genus={}, swapped={})", self.inner.genus(), self.inner.swapped())
    }
}

/// One-shot evaluation of the degree-one cocycle; see `CocycleC1`.
#[pyfunction(signature = (genus, alpha_json, beta_json, swapped = false))]
fn cocycle_c1(genus: usize, alpha_json: &str, beta_json: &str, swapped: bool) -> PyResult<String> {
    PyCocycleC1::new(genus, swapped)?.eval(alpha_json, beta_json)
}

// ---------------------------------------------------------------------------
// Group ring
// ---------------------------------------------------------------------------

/// A reduced word in a free group: `Word("g1 g2^-1 g1")`, `Word("1")` for
/// the identity.
#[pyclass(name = "Word", skip_from_py_object)]
#[derive(Clone)]
struct PyWord {
    inner: Word,
}

#[pymethods]
impl PyWord {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyWord { inner: text.parse::<Word>().map_err(py_err)? })
    }

    /// The commutator `a·b·a⁻¹·b⁻¹`.
    #[staticmethod]
    fn commutator(a: &PyWord, b: &PyWord) -> PyWord {
        PyWord { inner: Word::commutator(&a.inner, &b.inner) }
    }

    fn inverse(&self) -> PyWord {
        PyWord { inner: self.inner.inverse() }
    }

    fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }

    /// Number of letters after free reduction.
    fn __len__(&self) -> usize {
        self.inner.length()
    }

    fn __mul__(&self, other: &PyWord) -> PyWord {
        PyWord { inner: self.inner.mul(&other.inner) }
    }

    fn __pow__(&self, exponent: i64, modulo: Option<i64>) -> PyResult<PyWord> {
        if modulo.is_some() {
            return Err(PyValueError::new_err("modular powers are not defined for words"));
        }
        Ok(PyWord { inner: self.inner.pow(exponent) })
    }

    fn __eq__(&self, other: &PyWord) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Word(\"{}\")", self.inner)
    }

    /// Expansion of `1 − w` in the truncated free associative algebra,
    /// rendered as a string.
    #[pyo3(signature = (trunc = DEFAULT_MAGNUS_TRUNCATION))]
    fn one_minus_expansion(&self, trunc: usize) -> String {
        magnus(&GroupRingElement::one_minus(&self.inner), trunc).to_string()
    }
}

/// Expands a group-ring expression (products, sums, scalars, powers,
/// `comm(u, v)`) in the truncated free associative algebra; returns the
/// series rendered as a string.
#[pyfunction(signature = (expr, trunc = DEFAULT_MAGNUS_TRUNCATION))]
fn magnus_expand(expr: &str, trunc: usize) -> PyResult<String> {
    let element = parse_expression(expr).map_err(py_err)?;
    Ok(magnus(&element, trunc).to_string())
}

// ---------------------------------------------------------------------------
// Labeling
// ---------------------------------------------------------------------------

/// Labels a chord diagram's edges and optionally classifies an edge ordering
/// and/or certifies a bracket word (`"auto"` builds one greedily). Returns a
/// JSON string shaped like the CLI's `labeling --json` output.
#[pyfunction(signature = (diagram_json, order = None, commutator = None))]
fn labeling(diagram_json: &str, order: Option<&str>, commutator: Option<&str>) -> PyResult<String> {
    let chord: ChordJson = serde_json::from_str(diagram_json)
        .map_err(|e| PyValueError::new_err(format!("diagram JSON: {e}")))?;
    let d = LinearChordDiagram::try_from(&chord).map_err(py_err)?;
    let labeled = label_edges(&d).map_err(py_err)?;

    let mut doc = serde_json::json!({
        "schema": 1,
        "command": "labeling",
        "degree": labeled.degree(),
        "edges": labeled.edges().iter().map(|e| serde_json::json!({
            "symbol": e.symbol.to_string(),
            "endpoints": [e.endpoints.0 + 1, e.endpoints.1 + 1],
        })).collect::<Vec<_>>(),
    });

    if let Some(text) = order {
        let symbols: Vec<EdgeSymbol> = text
            .replace(',', " ")
            .split_whitespace()
            .map(|tok| tok.parse::<EdgeSymbol>())
            .collect::<Result<_, _>>()
            .map_err(py_err)?;
        let report = properness(&labeled, &symbols).map_err(py_err)?;
        doc["properness"] = serde_json::json!({
            "order": symbols.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "proper": report.proper,
            "all_proper": report.all_proper,
            "gamma_vertices": report.gamma.vertex_count,
            "gamma_trivalent": report.gamma.trivalent_count,
            "gamma_univalent": report.gamma.univalent_count,
            "gamma_unchanged": report.gamma.unchanged,
        });
    }

    if let Some(text) = commutator {
        let tree = if text == "auto" {
            build_proper_commutator(&labeled).map_err(py_err)?
        } else {
            parse_commutator(text)
                .map_err(py_err)?
                .try_map(&mut |s: &String| s.parse::<EdgeSymbol>())
                .map_err(py_err)?
        };
        let report = proper_commutator_check(&labeled, &tree).map_err(py_err)?;
        doc["certificate"] = serde_json::json!({
            "commutator": tree.to_string(),
            "monomials": report.monomial_count,
            "proper_monomials": report.proper_count,
            "coefficient": report.proper_coefficient,
            "proper_monomial": report.proper_monomial.as_ref().map(|m| {
                m.iter().map(|s| s.to_string()).collect::<Vec<_>>()
            }),
            "ok": report.ok(),
        });
    }

    serde_json::to_string_pretty(&doc)
        .map_err(|e| PyValueError::new_err(format!("JSON encoding: {e}")))
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// Runs the verification suites (all, or one by name). Returns a list of
/// `(suite, ok, detail)` tuples.
#[pyfunction(signature = (suite = None))]
fn selfcheck(suite: Option<&str>) -> PyResult<Vec<(String, bool, String)>> {
    let names: Vec<&str> = match suite {
        Some(name) => {
            if !SUITE_NAMES.contains(&name) {
                return Err(PyValueError::new_err(format!(
                    "unknown suite {name:?}; known suites: {}",
                    SUITE_NAMES.join(", ")
                )));
            }
            vec![name]
        }
        None => SUITE_NAMES.to_vec(),
    };
    Ok(names
        .into_iter()
        .map(|name| match run_suite(name) {
            Ok(detail) => (name.to_string(), true, detail),
            Err(e) => (name.to_string(), false, e.to_string()),
        })
        .collect())
}

/// The suite names, in execution order.
#[pyfunction]
fn suite_names() -> Vec<String> {
    SUITE_NAMES.iter().map(|s| s.to_string()).collect()
}

#[pymodule]
fn trivalent_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(aphi_dim, m)?)?;
    m.add_function(wrap_pyfunction!(chord_count, m)?)?;
    m.add_function(wrap_pyfunction!(arp_dim, m)?)?;
    m.add_function(wrap_pyfunction!(invariant_dim, m)?)?;
    m.add_function(wrap_pyfunction!(contract, m)?)?;
    m.add_function(wrap_pyfunction!(cocycle_c1, m)?)?;
    m.add_function(wrap_pyfunction!(magnus_expand, m)?)?;
    m.add_function(wrap_pyfunction!(labeling, m)?)?;
    m.add_function(wrap_pyfunction!(selfcheck, m)?)?;
    m.add_function(wrap_pyfunction!(suite_names, m)?)?;
    m.add_class::<PyWord>()?;
    m.add_class::<PyCocycleC1>()?;
    Ok(())
}
