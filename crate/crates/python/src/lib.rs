//! Python bindings for `tcfec`.
//!
//! Code and decoder selections are plain dicts with the same keys as the
//! `[[simulate]]` tables of a run configuration, e.g.
//! `{"family": "bch", "n": 63, "k": 56}` and `{"algo": "mrb", "order": 3}`.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

use tcfec::bounds::{self, SnrGrid};
use tcfec::codes::load_spectrum;
use tcfec::sim::{self, CodeSpec, CsvRow, DecoderSpec, PipelineSpec, StopRule};

fn to_py_err(e: tcfec::Error) -> PyErr {
    match e {
        tcfec::Error::Io { .. } => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn from_py<T: DeserializeOwned>(py: Python<'_>, obj: &Bound<'_, PyAny>, what: &str) -> PyResult<T> {
    let text: String = py.import("json")?.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&text).map_err(|e| PyValueError::new_err(format!("bad {what}: {e}")))
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A code paired with a decoder.
#[pyclass(module = "tcfec_py", frozen)]
struct Pipeline {
    inner: sim::Pipeline,
}

#[pymethods]
impl Pipeline {
    #[new]
    fn new(py: Python<'_>, code: &Bound<'_, PyAny>, decoder: &Bound<'_, PyAny>) -> PyResult<Self> {
        let spec = PipelineSpec {
            code: from_py::<CodeSpec>(py, code, "code")?,
            decoder: from_py::<DecoderSpec>(py, decoder, "decoder")?,
        };
        let inner = sim::Pipeline::build(&spec).map_err(to_py_err)?;
        Ok(Pipeline { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn rate(&self) -> f64 {
        self.inner.rate()
    }

    #[getter]
    fn code_label(&self) -> String {
        self.inner.code_label().to_string()
    }

    #[getter]
    fn decoder_label(&self) -> String {
        self.inner.decoder_label()
    }

    fn encode(&self, info: Vec<u8>) -> PyResult<Vec<u8>> {
        self.inner.encode(&info).map_err(to_py_err)
    }

    /// Decodes one frame of channel LLRs (positive favours bit 0).
    ///
    /// Returns a dict with `info_bits`, `codeword` (or None), `status`,
    /// `iterations_used` and `soft_metric`.
    fn decode<'py>(&self, py: Python<'py>, llr: Vec<f64>) -> PyResult<Bound<'py, PyAny>> {
        let out = self.inner.decode(&llr).map_err(to_py_err)?;
        let value = serde_json::json!({
            "info_bits": out.info_bits,
            "codeword": out.codeword,
            "status": out.status,
            "iterations_used": out.iterations_used,
            "soft_metric": out.soft_metric,
        });
        to_py(py, &value)
    }

    fn __repr__(&self) -> String {
        format!(
            "Pipeline({}, {}, n={}, k={})",
            self.inner.code_label(),
            self.inner.decoder_label(),
            self.inner.n(),
            self.inner.k()
        )
    }
}

/// Monte Carlo sweep; returns one dict per simulated point with the
/// columns of the CSV export.
#[pyfunction]
#[pyo3(signature = (
    code, decoder, ebn0_db, *, seed = 1, workers = 1, min_frame_errors = 100,
    max_frames = 10_000_000, max_seconds = None, cer_floor = None
))]
#[allow(clippy::too_many_arguments)]
fn simulate<'py>(
    py: Python<'py>,
    code: &Bound<'py, PyAny>,
    decoder: &Bound<'py, PyAny>,
    ebn0_db: Vec<f64>,
    seed: u64,
    workers: usize,
    min_frame_errors: u64,
    max_frames: u64,
    max_seconds: Option<f64>,
    cer_floor: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let pipeline = Pipeline::new(py, code, decoder)?.inner;
    let stop = StopRule {
        min_frame_errors,
        max_frames,
        max_seconds,
    };
    let report = py
        .detach(|| sim::run_sweep(&pipeline, &ebn0_db, &stop, seed, workers, cer_floor))
        .map_err(to_py_err)?;
    to_py(py, &CsvRow::from_sim(&report))
}

fn grid(ebn0_db: Vec<f64>, rate: f64) -> PyResult<SnrGrid> {
    SnrGrid::new(ebn0_db, rate).map_err(to_py_err)
}

/// Sphere-packing lower bound on the codeword error rate of any (n, k) code.
#[pyfunction]
fn sp59(n: usize, k: usize, ebn0_db: Vec<f64>) -> PyResult<Vec<(f64, f64)>> {
    let g = grid(ebn0_db, k as f64 / n as f64)?;
    Ok(bounds::sp59(n, k, &g).map_err(to_py_err)?.points)
}

/// Truncated union bound from a weight-spectrum file, summed up to `d_star`.
#[pyfunction]
fn tub(spectrum_path: &str, d_star: usize, ebn0_db: Vec<f64>) -> PyResult<Vec<(f64, f64)>> {
    let spectrum = load_spectrum(spectrum_path).map_err(to_py_err)?;
    let g = grid(ebn0_db, spectrum.k as f64 / spectrum.n as f64)?;
    Ok(bounds::tub(&spectrum, d_star, &g).map_err(to_py_err)?.points)
}

/// Exact codeword error rate of a bounded-distance decoder correcting `t`
/// errors on a length-`n`, dimension-`k` code.
#[pyfunction]
fn analytic_hard(n: usize, k: usize, t: usize, ebn0_db: Vec<f64>) -> PyResult<Vec<(f64, f64)>> {
    let rate = k as f64 / n as f64;
    let g = grid(ebn0_db, rate)?;
    Ok(bounds::analytic_hard_bch(n, t, rate, &g).map_err(to_py_err)?.points)
}

/// Clopper-Pearson interval for `errors` out of `trials`.
#[pyfunction]
#[pyo3(signature = (errors, trials, level = 0.95))]
fn confidence_interval(errors: u64, trials: u64, level: f64) -> PyResult<(f64, f64)> {
    sim::confidence_interval(errors, trials, level).map_err(to_py_err)
}

#[pymodule]
fn tcfec_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Pipeline>()?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(sp59, m)?)?;
    m.add_function(wrap_pyfunction!(tub, m)?)?;
    m.add_function(wrap_pyfunction!(analytic_hard, m)?)?;
    m.add_function(wrap_pyfunction!(confidence_interval, m)?)?;
    Ok(())
}
