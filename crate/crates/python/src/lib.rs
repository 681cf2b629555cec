//! Python bindings for `lobsim`.

use std::collections::BTreeMap;

use lobsim::analysis::{
    exact_tomography, hom_scan as run_hom_scan, qber as run_qber, reconstruct, simulate_tomography,
    CoincidenceClass,
};
use lobsim::detection::verdict_probabilities;
use lobsim::optics::DelayModel;
use lobsim::{
    classify as classify_pattern, ghz_circuit, heralded_state, measure, standard_bsm,
    symmetric_bsm, BellState, CircuitSpec, DensityMatrix, DetectionPattern, InputSpec,
    PhotonicState, Scheme,
};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn bell_from_name(name: &str) -> PyResult<BellState> {
    match name.parse::<InputSpec>().map_err(value_error)? {
        InputSpec::Bell(b) => Ok(b),
        _ => Err(PyValueError::new_err(format!(
            "{name:?} is not a Bell state"
        ))),
    }
}

/// Fock-space state of photons in labelled modes.
#[pyclass(name = "State", module = "lobsim_py")]
pub struct PyState {
    inner: PhotonicState,
}

#[pymethods]
impl PyState {
    #[getter]
    fn photon_number(&self) -> u32 {
        self.inner.photon_number()
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    /// `(occupation, amplitude)` pairs, occupations written like `a_H:1,b_V:1`.
    fn terms(&self) -> Vec<(String, Complex64)> {
        self.inner
            .terms()
            .map(|(o, a)| (o.to_string(), *a))
            .collect()
    }

    fn inner_product(&self, other: PyRef<'_, PyState>) -> Complex64 {
        self.inner.inner_product(&other.inner)
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(value_error)?;
        let inner = PhotonicState::from_json(&value).map_err(value_error)?;
        Ok(PyState { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "State(photons={}, terms={})",
            self.inner.photon_number(),
            self.inner.len()
        )
    }
}

/// Two-or-more qubit polarization density matrix.
#[pyclass(name = "DensityMatrix", module = "lobsim_py")]
pub struct PyDensity {
    inner: DensityMatrix,
}

#[pymethods]
impl PyDensity {
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(PyValueError::new_err("density matrix must be square"));
        }
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Ok(PyDensity {
            inner: DensityMatrix::new(m).map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn bell(name: &str) -> PyResult<Self> {
        let b = bell_from_name(name)?;
        Ok(PyDensity {
            inner: DensityMatrix::from_pure(&b.qubit_vector()).map_err(value_error)?,
        })
    }

    /// `p |bell><bell| + (1 - p) I/4`
    #[staticmethod]
    fn werner(name: &str, p: f64) -> PyResult<Self> {
        let b = bell_from_name(name)?;
        Ok(PyDensity {
            inner: DensityMatrix::werner(&b.qubit_vector(), p).map_err(value_error)?,
        })
    }

    #[getter]
    fn qubits(&self) -> usize {
        self.inner.qubits()
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        let d = self.inner.dim();
        (0..d)
            .map(|i| (0..d).map(|j| self.inner.get(i, j)).collect())
            .collect()
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues()
    }

    fn purity(&self) -> f64 {
        self.inner.purity()
    }

    fn fidelity(&self, target: Vec<Complex64>) -> PyResult<f64> {
        fidelity(self, target)
    }

    fn concurrence(&self) -> PyResult<f64> {
        self.inner.concurrence().map_err(value_error)
    }

    fn trace_distance(&self, other: PyRef<'_, PyDensity>) -> f64 {
        self.inner.trace_distance(&other.inner)
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(qubits={})", self.inner.qubits())
    }
}

/// Optical circuit with detector wiring.
#[pyclass(name = "Circuit", module = "lobsim_py")]
pub struct PyCircuit {
    inner: CircuitSpec,
}

#[pymethods]
impl PyCircuit {
    #[staticmethod]
    fn standard() -> PyResult<Self> {
        Ok(PyCircuit {
            inner: standard_bsm().map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn symmetric() -> PyResult<Self> {
        Ok(PyCircuit {
            inner: symmetric_bsm().map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn ghz(parties: usize) -> PyResult<Self> {
        Ok(PyCircuit {
            inner: ghz_circuit(parties).map_err(value_error)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name()
    }

    #[getter]
    fn parties(&self) -> usize {
        self.inner.parties()
    }

    #[getter]
    fn overlap(&self) -> f64 {
        self.inner.overlap().value()
    }

    #[getter]
    fn inputs(&self) -> Vec<String> {
        self.inner
            .inputs()
            .iter()
            .map(|p| p.as_str().to_owned())
            .collect()
    }

    #[getter]
    fn outputs(&self) -> Vec<String> {
        self.inner
            .outputs()
            .iter()
            .map(|p| p.as_str().to_owned())
            .collect()
    }

    /// `{(path, "H"|"V"): detector number}`
    fn wiring(&self) -> BTreeMap<(String, String), u32> {
        self.inner
            .wiring()
            .iter()
            .map(|((p, pol), d)| ((p.as_str().to_owned(), format!("{pol:?}")), d.0))
            .collect()
    }

    fn with_overlap(&self, gamma: f64) -> PyResult<Self> {
        Ok(PyCircuit {
            inner: self.inner.with_overlap(gamma).map_err(value_error)?,
        })
    }

    /// Overlap from the Gaussian delay model with coherence length `lc`.
    fn with_delay(&self, delay: f64, lc: f64) -> PyResult<Self> {
        let model = DelayModel::new(lc).map_err(value_error)?;
        Ok(PyCircuit {
            inner: self.inner.with_delay(&model, delay).map_err(value_error)?,
        })
    }

    /// Builds an input such as `phi+`, `DA`, `ghz-` or `HH=1,VV=-1` on the circuit inputs.
    fn input(&self, spec: &str) -> PyResult<PyState> {
        let parsed: InputSpec = spec.parse().map_err(value_error)?;
        Ok(PyState {
            inner: parsed.build(self.inner.inputs()).map_err(value_error)?,
        })
    }

    fn run(&self, state: PyRef<'_, PyState>) -> PyState {
        PyState {
            inner: self.inner.run(&state.inner),
        }
    }

    fn step_through(&self, state: PyRef<'_, PyState>) -> PyResult<Vec<(String, PyState)>> {
        let steps = self.inner.step_through(&state.inner).map_err(value_error)?;
        Ok(steps
            .into_iter()
            .map(|(n, s)| (n, PyState { inner: s }))
            .collect())
    }

    /// Detection pattern probabilities, keyed like `D1+D4` or `D2^2`.
    fn measure(&self, state: PyRef<'_, PyState>) -> PyResult<BTreeMap<String, f64>> {
        let dist = measure(&self.inner.run(&state.inner), &self.inner).map_err(value_error)?;
        Ok(dist.iter().map(|(p, v)| (p.to_string(), *v)).collect())
    }

    /// Probability of each verdict: `phi+`, `phi-`, `psi+`, `psi-` or `inconclusive`.
    fn verdicts(&self, state: PyRef<'_, PyState>) -> PyResult<BTreeMap<String, f64>> {
        let dist = measure(&self.inner.run(&state.inner), &self.inner).map_err(value_error)?;
        Ok(verdict_probabilities(&dist, Scheme::of(&self.inner))
            .into_iter()
            .map(|(v, p)| (v.to_string(), p))
            .collect())
    }

    /// `(probability, DensityMatrix or None)` after post-selecting one photon per party.
    fn heralded(&self, state: PyRef<'_, PyState>) -> PyResult<(f64, Option<PyDensity>)> {
        let h = heralded_state(&state.inner, &self.inner).map_err(value_error)?;
        Ok((h.probability, h.state.map(|inner| PyDensity { inner })))
    }

    fn qber(&self, state: PyRef<'_, PyState>, gamma: f64) -> PyResult<f64> {
        run_qber(&self.inner, &state.inner, gamma).map_err(value_error)
    }

    /// Returns `{"delays": [...], "series": {class: [...]}, "visibility": {class: value}}`.
    fn hom_scan<'py>(
        &self,
        py: Python<'py>,
        state: PyRef<'_, PyState>,
        delays: Vec<f64>,
        classes: Vec<String>,
        lc: f64,
    ) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
        use pyo3::types::PyDict;
        let model = DelayModel::new(lc).map_err(value_error)?;
        let parsed = classes
            .iter()
            .map(|c| CoincidenceClass::parse(c))
            .collect::<Result<Vec<_>, _>>()
            .map_err(value_error)?;
        let scan = run_hom_scan(&self.inner, &state.inner, &model, &delays, &parsed)
            .map_err(value_error)?;
        let series = PyDict::new(py);
        for s in &scan.series {
            series.set_item(&s.class, s.probabilities.clone())?;
        }
        let vis = PyDict::new(py);
        for v in &scan.visibilities {
            vis.set_item(&v.class, v.value)?;
        }
        let out = PyDict::new(py);
        out.set_item("delays", scan.delays.clone())?;
        out.set_item("series", series)?;
        out.set_item("visibility", vis)?;
        Ok(out)
    }

    fn topology_json(&self) -> String {
        self.inner.topology_json().to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Circuit({}, overlap={})",
            self.inner.name(),
            self.inner.overlap().value()
        )
    }
}

/// Verdict for a pattern such as `D1+D3` under `standard`, `symmetric` or `ghz` (with `parties`).
#[pyfunction]
#[pyo3(signature = (pattern, scheme, parties = 2))]
fn classify(pattern: &str, scheme: &str, parties: usize) -> PyResult<String> {
    let pat: DetectionPattern = pattern.parse().map_err(value_error)?;
    let scheme = match scheme {
        "standard" => Scheme::Standard,
        "symmetric" => Scheme::Symmetric,
        "ghz" => Scheme::Ghz(parties),
        other => return Err(PyValueError::new_err(format!("unknown scheme {other:?}"))),
    };
    Ok(classify_pattern(&pat, scheme).to_string())
}

/// Two-qubit amplitude vector of a Bell state, basis order HH, HV, VH, VV.
#[pyfunction]
fn bell_vector(name: &str) -> PyResult<Vec<Complex64>> {
    Ok(bell_from_name(name)?.qubit_vector().to_vec())
}

#[pyfunction]
fn fidelity(rho: &PyDensity, target: Vec<Complex64>) -> PyResult<f64> {
    if target.len() != rho.inner.dim() {
        return Err(PyValueError::new_err(format!(
            "target has {} amplitudes, state dimension is {}",
            target.len(),
            rho.inner.dim()
        )));
    }
    Ok(rho.inner.fidelity(&target))
}

#[pyfunction]
fn concurrence(rho: &PyDensity) -> PyResult<f64> {
    rho.inner.concurrence().map_err(value_error)
}

/// Simulated Pauli-basis tomography and reconstruction; `shots = 0` uses exact probabilities.
#[pyfunction]
#[pyo3(signature = (rho, shots = 1000, seed = 1))]
fn tomography(rho: &PyDensity, shots: u64, seed: u64) -> PyResult<PyDensity> {
    let counts = if shots == 0 {
        exact_tomography(&rho.inner)
    } else {
        simulate_tomography(&rho.inner, shots, seed)
    }
    .map_err(value_error)?;
    Ok(PyDensity {
        inner: reconstruct(&counts).map_err(value_error)?,
    })
}

#[pymodule]
fn lobsim_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyState>()?;
    m.add_class::<PyDensity>()?;
    m.add_class::<PyCircuit>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(bell_vector, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(tomography, m)?)?;
    Ok(())
}
