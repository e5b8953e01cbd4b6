use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use mqd::almost_split::almost_split_sequence;
use mqd::decompose::{decompose, is_isomorphic};
use mqd::determined::construct_determined;
use mqd::gamma::GammaModule;
use mqd::grass::{compare_realization, VarietySpec};
use mqd::hom::{end_ring, hom_basis};
use mqd::lattice::{LatticeMode, SubmoduleLattice};
use mqd::universe::build_universe;
use mqd::{Error, Polynomial, Subspace};

fn err(e: Error) -> PyErr {
    match e {
        Error::Input(_) | Error::Precondition(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// A finite-dimensional module over a bound quiver algebra.
#[pyclass(name = "Module", frozen)]
struct PyModuleRep {
    inner: mqd::Module,
}

#[pymethods]
impl PyModuleRep {
    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims().to_vec()
    }

    #[getter]
    fn total_dim(&self) -> usize {
        self.inner.total_dim()
    }

    fn hom_dim(&self, other: &PyModuleRep) -> PyResult<usize> {
        Ok(hom_basis(&self.inner, &other.inner).map_err(err)?.dim())
    }

    fn end_dim(&self) -> PyResult<usize> {
        Ok(end_ring(&self.inner).map_err(err)?.ring.dim())
    }

    fn is_local(&self) -> PyResult<bool> {
        end_ring(&self.inner).map_err(err)?.is_local().map_err(err)
    }

    fn is_isomorphic(&self, other: &PyModuleRep) -> PyResult<bool> {
        Ok(is_isomorphic(&self.inner, &other.inner).map_err(err)?.is_some())
    }

    /// Indecomposable summands.
    fn decompose(&self) -> PyResult<Vec<PyModuleRep>> {
        let d = decompose(&self.inner).map_err(err)?;
        Ok(d.summands.into_iter().map(|inner| PyModuleRep { inner }).collect())
    }

    /// Submodule lattice in DOT; mode is "lambda", "end-stable" or "forgetful".
    #[pyo3(signature = (mode = "lambda"))]
    fn lattice_dot(&self, mode: &str) -> PyResult<String> {
        Ok(self.lattice(mode)?.to_dot())
    }

    #[pyo3(signature = (mode = "lambda"))]
    fn lattice_size(&self, mode: &str) -> PyResult<usize> {
        Ok(self.lattice(mode)?.len())
    }

    fn __repr__(&self) -> String {
        format!("Module(dims={:?})", self.inner.dims())
    }
}

impl PyModuleRep {
    fn lattice(&self, mode: &str) -> PyResult<SubmoduleLattice> {
        let mode: LatticeMode = mode.parse().map_err(err)?;
        match mode {
            LatticeMode::Lambda => SubmoduleLattice::lambda(&self.inner),
            LatticeMode::EndStable => SubmoduleLattice::end_stable(&self.inner),
            LatticeMode::Forgetful => SubmoduleLattice::forgetful(&self.inner),
            LatticeMode::Gamma => return Err(PyValueError::new_err("use hom_lattice_dot for gamma lattices")),
        }
        .map_err(err)
    }
}

/// An algebra with named modules, read from workspace JSON.
#[pyclass(name = "Workspace", frozen)]
struct PyWorkspace {
    inner: mqd::Workspace,
}

#[pymethods]
impl PyWorkspace {
    #[staticmethod]
    fn from_json(src: &str) -> PyResult<Self> {
        Ok(PyWorkspace {
            inner: mqd::Workspace::from_json(src).map_err(err)?,
        })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(PyWorkspace {
            inner: mqd::Workspace::from_path(std::path::Path::new(path)).map_err(err)?,
        })
    }

    fn module_names(&self) -> Vec<String> {
        self.inner.modules.keys().cloned().collect()
    }

    fn module(&self, name: &str) -> PyResult<PyModuleRep> {
        Ok(PyModuleRep {
            inner: self.inner.module(name).map_err(err)?.clone(),
        })
    }

    #[getter]
    fn algebra_dim(&self) -> usize {
        self.inner.alg.dim()
    }

    fn universe(&self, dim: usize) -> PyResult<Vec<PyModuleRep>> {
        let u = build_universe(&self.inner.alg, dim).map_err(err)?;
        Ok(u.modules().iter().cloned().map(|inner| PyModuleRep { inner }).collect())
    }
}

fn inners(cs: &[PyRef<'_, PyModuleRep>]) -> Vec<mqd::Module> {
    cs.iter().map(|c| c.inner.clone()).collect()
}

/// Gamma-submodule lattice of Hom(C, Y) in DOT.
#[pyfunction]
fn hom_lattice_dot(cs: Vec<PyRef<'_, PyModuleRep>>, y: &PyModuleRep) -> PyResult<String> {
    let gm = GammaModule::new(&inners(&cs), &y.inner).map_err(err)?;
    Ok(SubmoduleLattice::gamma(&gm).map_err(err)?.to_dot())
}

/// Build α_{C,H} for H spanned by `h` in Hom(C, Y) coordinates.
#[pyfunction]
#[pyo3(signature = (cs, y, h, universe_dim = 4))]
fn determined<'py>(
    py: Python<'py>,
    cs: Vec<PyRef<'py, PyModuleRep>>,
    y: &PyModuleRep,
    h: Vec<Vec<i64>>,
    universe_dim: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let gm = GammaModule::new(&inners(&cs), &y.inner).map_err(err)?;
    let f = y.inner.field();
    let vecs: Vec<Vec<u32>> = h.iter().map(|r| r.iter().map(|&c| f.elem(c)).collect()).collect();
    let hs = Subspace::from_vectors(f, gm.dim(), &vecs).map_err(err)?;
    if !gm.is_stable(&hs).map_err(err)? {
        return Err(PyValueError::new_err("H is not a Γ-submodule of Hom(C, Y)"));
    }
    let u = build_universe(y.inner.algebra(), universe_dim).map_err(err)?;
    let r = construct_determined(&gm, &hs, &u).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("source_dims", r.alpha.source().dims().to_vec())?;
    d.set_item("zero", r.alpha.is_zero())?;
    d.set_item("image_check", r.image_check)?;
    d.set_item("minimal_check", r.minimal_check)?;
    d.set_item("witnesses", r.witnesses.len())?;
    d.set_item("truncation", r.truncation())?;
    d.set_item("verified", r.verified())?;
    Ok(d)
}

/// Almost split sequence ending in `z`.
#[pyfunction]
#[pyo3(signature = (z, universe_dim = 4))]
fn almost_split<'py>(py: Python<'py>, z: &PyModuleRep, universe_dim: usize) -> PyResult<Bound<'py, PyDict>> {
    let u = build_universe(z.inner.algebra(), universe_dim).map_err(err)?;
    let s = almost_split_sequence(&z.inner, &u).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("left", PyModuleRep { inner: s.iota.source().clone() })?;
    d.set_item("middle", PyModuleRep { inner: s.pi.source().clone() })?;
    d.set_item("verified", s.verified())?;
    Ok(d)
}

/// Point counts of the Beilinson realization of V(polys) in P^n over GF(q).
#[pyfunction]
fn compare_beilinson<'py>(
    py: Python<'py>,
    n: usize,
    p: usize,
    polys: Vec<String>,
    q: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let polys = polys.iter().map(|s| Polynomial::parse(s)).collect::<Result<Vec<_>, _>>().map_err(err)?;
    let spec = VarietySpec::new(n, p, polys, q).map_err(err)?;
    let r = compare_realization(&spec).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("module_dims", r.module_dims.clone())?;
    d.set_item("grassmannian", r.grassmannian_count)?;
    d.set_item("variety", r.variety_count)?;
    d.set_item("match", r.counts_match() && r.points_match())?;
    Ok(d)
}

#[pymodule]
fn mqd_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWorkspace>()?;
    m.add_class::<PyModuleRep>()?;
    m.add_function(wrap_pyfunction!(hom_lattice_dot, m)?)?;
    m.add_function(wrap_pyfunction!(determined, m)?)?;
    m.add_function(wrap_pyfunction!(almost_split, m)?)?;
    m.add_function(wrap_pyfunction!(compare_beilinson, m)?)?;
    Ok(())
}
