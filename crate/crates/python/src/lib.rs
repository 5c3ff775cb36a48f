//! Python bindings for the counterprop core.

use counterprop::biphoton::{self, CrystalDevice, PumpConfig};
use counterprop::grating::{fourier_coefficient, DualGrating, Duty, ReciprocalOrder};
use counterprop::phasematch::{self, DesignTargets, SignalTarget};
use counterprop::report::{build_datasheet, RunConfig};
use counterprop::{CrystalAxis, DesignSolution, DispersionModel, Error, PolarizationMapping};
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NoSolution(_) | Error::Numerical(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn axis(name: &str) -> PyResult<CrystalAxis> {
    name.parse::<CrystalAxis>().map_err(to_py)
}

/// Temperature-dependent dispersion of a biaxial crystal.
#[pyclass(name = "Material", module = "counterprop_py")]
struct PyMaterial {
    inner: DispersionModel,
}

#[pymethods]
impl PyMaterial {
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Self {
            inner: DispersionModel::load(path).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: DispersionModel::from_toml_str(text).map_err(to_py)?,
        })
    }

    #[getter]
    fn provenance(&self) -> String {
        self.inner.provenance().to_string()
    }

    fn refractive_index(&self, axis_name: &str, lambda_um: f64, temp_c: f64) -> PyResult<f64> {
        self.inner
            .refractive_index(axis(axis_name)?, lambda_um, temp_c)
            .map_err(to_py)
    }

    fn group_index(&self, axis_name: &str, lambda_um: f64, temp_c: f64) -> PyResult<f64> {
        self.inner.group_index(axis(axis_name)?, lambda_um, temp_c).map_err(to_py)
    }

    fn wavenumber(&self, axis_name: &str, lambda_um: f64, temp_c: f64) -> PyResult<f64> {
        self.inner.wavenumber(axis(axis_name)?, lambda_um, temp_c).map_err(to_py)
    }
}

/// A solved two-process design.
#[pyclass(name = "Design", module = "counterprop_py")]
struct PyDesign {
    inner: DesignSolution,
    mapping: PolarizationMapping,
}

#[pymethods]
impl PyDesign {
    #[getter]
    fn temperature_c(&self) -> f64 {
        self.inner.temperature_c
    }

    #[getter]
    fn l(&self) -> u32 {
        self.inner.l
    }

    #[getter]
    fn lambda1_um(&self) -> f64 {
        self.inner.grating.lambda1()
    }

    #[getter]
    fn lambda2_um(&self) -> f64 {
        self.inner.grating.lambda2()
    }

    #[getter]
    fn duty2(&self) -> String {
        self.inner.grating.duty2().to_string()
    }

    /// (G_HV, G_VH) in rad/um.
    #[getter]
    fn reciprocals(&self) -> (f64, f64) {
        (self.inner.g_hv, self.inner.g_vh)
    }

    #[getter]
    fn order_hv(&self) -> (i32, i32) {
        (self.inner.order_hv.m, self.inner.order_hv.n)
    }

    #[getter]
    fn order_vh(&self) -> (i32, i32) {
        (self.inner.order_vh.m, self.inner.order_vh.n)
    }

    #[getter]
    fn wavelengths_um(&self) -> (f64, f64, f64) {
        (self.inner.pump_um, self.inner.signal_um, self.inner.idler_um)
    }

    #[getter]
    fn residuals(&self) -> (f64, f64) {
        (self.inner.residual_hv, self.inner.residual_vh)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!(
            "Design(T={:.4} C, l={}, lambda1={:.5} um, lambda2={:.4} um)",
            self.inner.temperature_c,
            self.inner.l,
            self.inner.grating.lambda1(),
            self.inner.grating.lambda2()
        )
    }
}

/// Solves the dual-period design. `signal_um=None` requests degeneracy.
#[pyfunction]
#[pyo3(signature = (
    material, pump_um, signal_um=None, h="z", v="y",
    orders=((3, 1), (3, -1)), l_range=(3, 64), temp_interval_c=(20.0, 120.0)
))]
#[allow(clippy::too_many_arguments)]
fn design_source(
    material: &PyMaterial,
    pump_um: f64,
    signal_um: Option<f64>,
    h: &str,
    v: &str,
    orders: ((i32, i32), (i32, i32)),
    l_range: (u32, u32),
    temp_interval_c: (f64, f64),
) -> PyResult<PyDesign> {
    let mapping = PolarizationMapping::new(axis(h)?, axis(v)?).map_err(to_py)?;
    let signal = signal_um.map_or(SignalTarget::Degenerate, SignalTarget::Wavelength);
    let o = |(m, n): (i32, i32)| ReciprocalOrder::new(m, n).map_err(to_py);
    let targets = DesignTargets::new(pump_um, signal, [o(orders.0)?, o(orders.1)?], temp_interval_c, l_range)
        .map_err(to_py)?;
    let inner = phasematch::design_source(&material.inner, &mapping, &targets).map_err(to_py)?;
    Ok(PyDesign { inner, mapping })
}

/// Bandwidths, reduction factors, concurrence, rate and brightness.
#[pyfunction]
#[pyo3(signature = (material, design, length_mm=20.0, d_pm_per_v=3.9, pump_power_mw=1.0, beam_area_mm2=0.01))]
fn analyze<'py>(
    py: Python<'py>,
    material: &PyMaterial,
    design: &PyDesign,
    length_mm: f64,
    d_pm_per_v: f64,
    pump_power_mw: f64,
    beam_area_mm2: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let device = CrystalDevice::new(
        length_mm * 1e-3,
        d_pm_per_v,
        design.inner.clone(),
        material.inner.clone(),
        design.mapping,
    )
    .map_err(to_py)?;
    let pump = PumpConfig::from_mw_mm2(pump_power_mw, beam_area_mm2).map_err(to_py)?;
    let f = biphoton::analyze(&device, &pump, biphoton::GridSpec::ORACLE).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("bandwidth_hv_rad_s", f.bandwidth_hv)?;
    d.set_item("bandwidth_vh_rad_s", f.bandwidth_vh)?;
    d.set_item("reduction_hv", f.reduction_hv.value())?;
    d.set_item("reduction_vh", f.reduction_vh.value())?;
    d.set_item("concurrence", f.concurrence)?;
    d.set_item("concurrence_oracle", f.concurrence_oracle)?;
    d.set_item("rate_pairs_s", f.rate)?;
    d.set_item("brightness", f.brightness)?;
    d.set_item("correlation_time_transit_s", f.correlation_time.transit_s)?;
    d.set_item("correlation_time_bandwidth_s", f.correlation_time.bandwidth_s)?;
    d.set_item("delta_n", f.delta_n)?;
    d.set_item("s_hv", f.s_hv)?;
    d.set_item("s_vh", f.s_vh)?;
    Ok(d)
}

/// h(x) = exp(-ix/2) sinc(x/2).
#[pyfunction]
fn h_function(x: f64) -> Complex64 {
    biphoton::h_function(x)
}

/// Analytic Fourier coefficient of a dual grating with D1 = 1/2.
#[pyfunction]
fn grating_coefficient(m: i32, n: i32, lambda1_um: f64, lambda2_um: f64, duty2_num: u32, duty2_den: u32) -> PyResult<f64> {
    let g = DualGrating::new(lambda1_um, lambda2_um, Duty::HALF, Duty::new(duty2_num, duty2_den).map_err(to_py)?)
        .map_err(to_py)?;
    Ok(fourier_coefficient(ReciprocalOrder::new(m, n).map_err(to_py)?, &g))
}

/// Full datasheet of a run config, as a JSON string. Writes no files.
#[pyfunction]
fn datasheet_json(config_path: &str) -> PyResult<String> {
    let cfg = RunConfig::load(config_path).map_err(to_py)?;
    Ok(build_datasheet(&cfg).map_err(to_py)?.to_json())
}

#[pymodule]
fn counterprop_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMaterial>()?;
    m.add_class::<PyDesign>()?;
    m.add_function(wrap_pyfunction!(design_source, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(h_function, m)?)?;
    m.add_function(wrap_pyfunction!(grating_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(datasheet_json, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
