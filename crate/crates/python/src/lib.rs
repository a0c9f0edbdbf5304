//! Python bindings: diagrams, Khovanov homology, spectral sequences,
//! pattern inference and the explicit models.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use skeinseq::cli::render::{KhReport, SsReport};
use skeinseq::cli::suite;
use skeinseq::complex::json::load_complex;
use skeinseq::complex::ChainComplex;
use skeinseq::infer::{enumerate_patterns, InferOptions, PageSpec, TargetSpec};
use skeinseq::khovanov::{ckh, Convention, Flavor, LinkDiagram};
use skeinseq::models::{canonical_fg, model, top_homology, ModelName};
use skeinseq::spectral::{check_constraints, compute_pages, converge, FilteredComplex, PageOptions};

fn to_py(e: skeinseq::Error) -> PyErr {
    if e.is_input_error() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// A planar diagram of an oriented link.
#[pyclass(name = "Diagram", frozen)]
struct PyDiagram {
    inner: LinkDiagram,
}

#[pymethods]
impl PyDiagram {
    #[staticmethod]
    fn from_pd(text: &str) -> PyResult<Self> {
        Ok(PyDiagram { inner: LinkDiagram::parse_pd(text).map_err(to_py)? })
    }

    /// Closure of a braid word; `-i` is the inverse of the `i`-th generator.
    #[staticmethod]
    fn braid(strands: usize, word: Vec<i32>) -> PyResult<Self> {
        Ok(PyDiagram { inner: LinkDiagram::braid_closure(strands, &word).map_err(to_py)? })
    }

    #[staticmethod]
    fn unlink(n: usize) -> PyResult<Self> {
        Ok(PyDiagram { inner: LinkDiagram::unlink(n).map_err(to_py)? })
    }

    fn mirror(&self) -> Self {
        PyDiagram { inner: self.inner.mirror() }
    }

    #[getter]
    fn pd(&self) -> String {
        self.inner.to_pd()
    }

    #[getter]
    fn crossings(&self) -> usize {
        self.inner.crossings().len()
    }

    #[getter]
    fn components(&self) -> usize {
        self.inner.components()
    }

    #[getter]
    fn signs(&self) -> Vec<i8> {
        self.inner.signs().to_vec()
    }

    #[getter]
    fn arcs(&self) -> Vec<u32> {
        self.inner.arcs()
    }

    fn __repr__(&self) -> String {
        format!("Diagram({:?})", self.inner.to_pd())
    }
}

/// Khovanov homology grouped by relative `(h, q)`.
#[pyclass(name = "KhovanovHomology", frozen)]
struct PyKh {
    report: KhReport,
}

#[pymethods]
impl PyKh {
    #[getter]
    fn ring(&self) -> &'static str {
        self.report.ring
    }

    /// Free rank over the ring (dimension over F2 for the hat and reduced flavors).
    #[getter]
    fn total_rank(&self) -> usize {
        self.report.total_rank
    }

    #[getter]
    fn torsion(&self) -> Vec<u32> {
        self.report.torsion.clone()
    }

    /// `(h, q, rank, torsion orders)` for each nonzero group.
    #[getter]
    fn groups(&self) -> Vec<(i64, i64, usize, Vec<u32>)> {
        self.report.groups.iter().map(|g| (g.h, g.q, g.rank, g.torsion.clone())).collect()
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.report)
    }

    fn table(&self) -> String {
        self.report.tsv()
    }
}

fn flavor_of(s: &str) -> PyResult<Flavor> {
    s.parse().map_err(to_py)
}

fn build(d: &LinkDiagram, flavor: &str, basepoint: Option<u32>, swap: bool) -> PyResult<(ChainComplex, Flavor, Option<u32>)> {
    let f = flavor_of(flavor)?;
    if f == Flavor::Reduced && basepoint.is_none() {
        return Err(PyValueError::new_err("the reduced flavor requires a basepoint"));
    }
    let bp = if f == Flavor::Hat { None } else { basepoint };
    Ok((ckh(d, f, bp, Convention { swapped: swap }).map_err(to_py)?, f, bp))
}

/// Khovanov homology. The minus flavor is over `F2[X]` with a basepoint and over `F2[U]` without.
#[pyfunction]
#[pyo3(signature = (diagram, flavor = "minus", basepoint = None, swap_resolutions = false))]
fn khovanov(diagram: &PyDiagram, flavor: &str, basepoint: Option<u32>, swap_resolutions: bool) -> PyResult<PyKh> {
    let (c, f, bp) = build(&diagram.inner, flavor, basepoint, swap_resolutions)?;
    Ok(PyKh { report: KhReport::new(&diagram.inner, &c, f, bp).map_err(to_py)? })
}

/// Pages of a spectral sequence with convergence and constraint checks.
#[pyclass(name = "SpectralSequence", frozen)]
struct PySs {
    report: SsReport,
}

#[pymethods]
impl PySs {
    /// `(r, total rank of d_r)` for each page.
    #[getter]
    fn ranks(&self) -> Vec<(usize, usize)> {
        self.report.ranks.clone()
    }

    #[getter]
    fn collapse_page(&self) -> usize {
        self.report.collapse_page
    }

    #[getter]
    fn converged(&self) -> bool {
        self.report.convergence.as_ref().is_some_and(|c| c.ok)
    }

    #[getter]
    fn violations(&self) -> usize {
        self.report.violations.len()
    }

    /// Total dimension of page `r`.
    fn page_dim(&self, r: usize) -> usize {
        self.report.cells.iter().filter(|c| c.r == r).map(|c| c.dim).sum()
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.report)
    }

    fn table(&self) -> String {
        self.report.tsv()
    }
}

fn spectral_of(c: ChainComplex) -> PyResult<PySs> {
    let fc = FilteredComplex::new(c).map_err(to_py)?;
    let ss = compute_pages(&fc, PageOptions::default()).map_err(to_py)?;
    let conv = converge(&fc, &ss).map_err(to_py)?;
    let v = check_constraints(&ss);
    Ok(PySs { report: SsReport::new(&ss, Some(conv), v) })
}

/// Spectral sequence of the cube filtration on a Khovanov complex.
#[pyfunction]
#[pyo3(signature = (diagram, flavor = "hat", basepoint = None))]
fn cube_spectral_sequence(diagram: &PyDiagram, flavor: &str, basepoint: Option<u32>) -> PyResult<PySs> {
    let (c, _, _) = build(&diagram.inner, flavor, basepoint, false)?;
    spectral_of(c)
}

/// Spectral sequence of a filtered complex given as JSON.
#[pyfunction]
fn spectral_sequence(complex_json: &str) -> PyResult<PySs> {
    spectral_of(load_complex(complex_json).map_err(to_py)?.0)
}

/// Searches differentials from an `E_2` page to a target; returns the report as JSON.
#[pyfunction]
fn infer(e2_json: &str, target_json: &str) -> PyResult<String> {
    let e2 = PageSpec::from_json(e2_json).map_err(to_py)?;
    let target = TargetSpec::from_json(target_json).map_err(to_py)?;
    json(&enumerate_patterns(&e2, &target, InferOptions::default()).map_err(to_py)?)
}

/// Arrows of every pattern found by [`infer`], as strings such as `"d3: z -> X x"`.
#[pyfunction]
fn infer_arrows(e2_json: &str, target_json: &str) -> PyResult<Vec<Vec<String>>> {
    let e2 = PageSpec::from_json(e2_json).map_err(to_py)?;
    let target = TargetSpec::from_json(target_json).map_err(to_py)?;
    let r = enumerate_patterns(&e2, &target, InferOptions::default()).map_err(to_py)?;
    Ok(r.patterns.iter().map(|p| p.arrows.iter().map(|a| a.to_string()).collect()).collect())
}

fn model_name(name: &str) -> PyResult<ModelName> {
    name.parse().map_err(to_py)
}

/// Names of the built-in model complexes.
#[pyfunction]
fn model_names() -> Vec<&'static str> {
    ModelName::ALL.iter().map(|n| n.as_str()).collect()
}

/// Top-degree homology of a model: the basis classes with their Alexander parity, and each `Phi` as rows.
#[pyfunction]
fn model_top_homology(name: &str) -> PyResult<(Vec<(String, i64)>, Vec<(String, Vec<Vec<u8>>)>)> {
    let top = top_homology(&model(model_name(name)?).map_err(to_py)?).map_err(to_py)?;
    let phis = top.phis.iter().map(|(n, m)| (n.clone(), m.to_rows())).collect();
    Ok((top.basis.clone(), phis))
}

/// The classes `(f, g, theta)` of a knot model.
#[pyfunction]
fn model_canonical_pair(name: &str) -> PyResult<(String, String, String)> {
    let p = canonical_fg(&model(model_name(name)?).map_err(to_py)?).map_err(to_py)?;
    Ok((p.f, p.g, p.theta))
}

/// Homology of a one-variable complex given as JSON: free generator degrees and `(degree, order)` torsion.
#[pyfunction]
fn complex_homology(complex_json: &str) -> PyResult<(Vec<Vec<i64>>, Vec<(Vec<i64>, u32)>)> {
    let (c, _) = load_complex(complex_json).map_err(to_py)?;
    let m = c.homology_module().map_err(to_py)?;
    Ok((m.free, m.torsion))
}

/// Runs the built-in suite: `(name, passed, detail)` per check.
#[pyfunction]
fn run_examples() -> Vec<(String, bool, String)> {
    suite::run_suite().into_iter().map(|c| (c.name, c.pass, c.detail)).collect()
}

#[pymodule(name = "skeinseq")]
fn skeinseq_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDiagram>()?;
    m.add_class::<PyKh>()?;
    m.add_class::<PySs>()?;
    m.add_function(wrap_pyfunction!(khovanov, m)?)?;
    m.add_function(wrap_pyfunction!(cube_spectral_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(infer, m)?)?;
    m.add_function(wrap_pyfunction!(infer_arrows, m)?)?;
    m.add_function(wrap_pyfunction!(model_names, m)?)?;
    m.add_function(wrap_pyfunction!(model_top_homology, m)?)?;
    m.add_function(wrap_pyfunction!(model_canonical_pair, m)?)?;
    m.add_function(wrap_pyfunction!(complex_homology, m)?)?;
    m.add_function(wrap_pyfunction!(run_examples, m)?)?;
    m.add("TREFOIL_E2", suite::TREFOIL_E2)?;
    m.add("TREFOIL_TARGET", suite::TREFOIL_TARGET)?;
    m.add("HOPF_E2", suite::HOPF_E2)?;
    m.add("HOPF_TARGET", suite::HOPF_TARGET)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_kinds_map_to_python_exceptions() {
        Python::initialize();
        Python::attach(|py| {
            assert!(to_py(skeinseq::Error::Input("x".into())).is_instance_of::<PyValueError>(py));
            assert!(to_py(skeinseq::Error::Invariant("x".into())).is_instance_of::<PyRuntimeError>(py));
        });
    }
}
