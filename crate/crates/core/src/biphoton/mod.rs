//! Two-photon state of the source: spectra, bandwidths, entanglement, rates.
//!
//! Under a cw plane-wave pump the state is
//!
//! `|ψ⟩ = ∫dν [A_HV·L·h(Δk_HV L)|H_s V_i⟩ + A_VH·L·h(Δk_VH L)|V_s H_i⟩]`
//!
//! with the signal at Ω_s + ν and the idler at Ω_i − ν. To first order
//! Δk_q = −ν·S_q, where S_q is the sum of the two inverse group velocities
//! (a sum, not a difference, because the idler runs backwards).

mod concurrence;
mod rate;
mod spectrum;

pub use concurrence::{concurrence_closed_form, concurrence_oracle, SpectralState};
pub use rate::{correlation_time, pair_rate, spectral_brightness, CorrelationTime};
pub use spectrum::{
    bandwidth_fwhm, forward_backward_reduction, h_function, joint_spectrum, numeric_fwhm,
    JointSpectrum, Reduction, FWHM_HALF_WIDTH, FWHM_PI_FACTOR,
};

use serde::Serialize;

use crate::constants::{SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};
use crate::dispersion::{DispersionModel, Polarization, PolarizationMapping};
use crate::error::{Error, Result};
use crate::grating::{effective_nonlinearity, NonlinearCoefficient};
use crate::phasematch::{DesignSolution, ProcessId, RESIDUAL_TOLERANCE};
use crate::warnings::Warning;

/// A poled crystal of given length built from a design.
#[derive(Debug, Clone)]
pub struct CrystalDevice {
    length_m: f64,
    nonlinear: NonlinearCoefficient,
    design: DesignSolution,
    model: DispersionModel,
    mapping: PolarizationMapping,
    warnings: Vec<Warning>,
}

impl CrystalDevice {
    /// `d_pm_per_v` is the bulk coefficient; the per-process effective values
    /// follow from the design's grating orders.
    pub fn new(
        length_m: f64,
        d_pm_per_v: f64,
        design: DesignSolution,
        model: DispersionModel,
        mapping: PolarizationMapping,
    ) -> Result<Self> {
        if !(length_m > 0.0 && length_m.is_finite()) {
            return Err(Error::InvalidInput(format!("crystal length must be > 0, got {length_m} m")));
        }
        if !(d_pm_per_v > 0.0 && d_pm_per_v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "nonlinear coefficient must be > 0, got {d_pm_per_v} pm/V"
            )));
        }
        if !(design.residual_hv.abs() < RESIDUAL_TOLERANCE && design.residual_vh.abs() < RESIDUAL_TOLERANCE) {
            return Err(Error::InvalidInput("design residuals exceed the solver tolerance".into()));
        }
        let (nonlinear, warning) =
            effective_nonlinearity(d_pm_per_v, design.order_hv, design.order_vh, &design.grating);
        Ok(Self {
            length_m,
            nonlinear,
            design,
            model,
            mapping,
            warnings: warning.into_iter().collect(),
        })
    }

    pub fn length_m(&self) -> f64 {
        self.length_m
    }

    pub fn nonlinear(&self) -> NonlinearCoefficient {
        self.nonlinear
    }

    pub fn design(&self) -> &DesignSolution {
        &self.design
    }

    pub fn model(&self) -> &DispersionModel {
        &self.model
    }

    pub fn mapping(&self) -> &PolarizationMapping {
        &self.mapping
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    /// Same device with a different length.
    pub fn with_length(&self, length_m: f64) -> Result<Self> {
        let mut dev = self.clone();
        if !(length_m > 0.0 && length_m.is_finite()) {
            return Err(Error::InvalidInput(format!("crystal length must be > 0, got {length_m} m")));
        }
        dev.length_m = length_m;
        Ok(dev)
    }

    /// Replaces the effective coefficients (for single-process or unbalanced
    /// studies).
    pub fn with_nonlinear(&self, nonlinear: NonlinearCoefficient) -> Self {
        let mut dev = self.clone();
        dev.nonlinear = nonlinear;
        dev
    }

    fn index(&self, pol: Polarization, lambda_um: f64) -> Result<f64> {
        self.model
            .refractive_index(self.mapping.axis(pol), lambda_um, self.design.temperature_c)
    }

    fn inverse_velocity(&self, pol: Polarization, lambda_um: f64) -> Result<f64> {
        Ok(1.0
            / self
                .model
                .group_velocity(self.mapping.axis(pol), lambda_um, self.design.temperature_c)?)
    }

    /// Phase indices at the central frequencies.
    pub fn indices(&self) -> Result<PairIndices> {
        let d = &self.design;
        Ok(PairIndices {
            pump: self.index(Polarization::H, d.pump_um)?,
            signal_h: self.index(Polarization::H, d.signal_um)?,
            signal_v: self.index(Polarization::V, d.signal_um)?,
            idler_h: self.index(Polarization::H, d.idler_um)?,
            idler_v: self.index(Polarization::V, d.idler_um)?,
        })
    }

    /// Effective coefficient of `process` in m/V.
    pub fn d_eff_si(&self, process: ProcessId) -> f64 {
        1e-12
            * match process {
                ProcessId::HV => self.nonlinear.d_eff_hv,
                ProcessId::VH => self.nonlinear.d_eff_vh,
            }
    }
}

/// Phase indices of the five fields involved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairIndices {
    pub pump: f64,
    pub signal_h: f64,
    pub signal_v: f64,
    pub idler_h: f64,
    pub idler_v: f64,
}

impl PairIndices {
    /// δ_n = √(n_sH n_iV / (n_sV n_iH)); exactly 1 at degeneracy.
    pub fn delta_n(&self) -> f64 {
        ((self.signal_h * self.idler_v) / (self.signal_v * self.idler_h)).sqrt()
    }
}

/// cw plane-wave pump, H-polarized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PumpConfig {
    power_w: f64,
    beam_area_m2: f64,
}

impl PumpConfig {
    pub fn new(power_w: f64, beam_area_m2: f64) -> Result<Self> {
        if !(power_w > 0.0 && power_w.is_finite()) {
            return Err(Error::InvalidInput(format!("pump power must be > 0, got {power_w} W")));
        }
        if !(beam_area_m2 > 0.0 && beam_area_m2.is_finite()) {
            return Err(Error::InvalidInput(format!("beam area must be > 0, got {beam_area_m2} m^2")));
        }
        Ok(Self {
            power_w,
            beam_area_m2,
        })
    }

    /// From the customary lab units.
    pub fn from_mw_mm2(power_mw: f64, beam_area_mm2: f64) -> Result<Self> {
        Self::new(power_mw * 1e-3, beam_area_mm2 * 1e-6)
    }

    pub fn power_w(&self) -> f64 {
        self.power_w
    }

    pub fn beam_area_m2(&self) -> f64 {
        self.beam_area_m2
    }

    pub fn power_mw(&self) -> f64 {
        self.power_w * 1e3
    }

    /// |E_p|² = 2P / (ε₀ n_p c S), in V²/m².
    pub fn field_squared(&self, n_pump: f64) -> f64 {
        2.0 * self.power_w / (VACUUM_PERMITTIVITY * n_pump * SPEED_OF_LIGHT * self.beam_area_m2)
    }
}

/// Frequency grid: total width `span_fwhm` times the broader component's
/// FWHM, sampled at `points_per_fwhm` per FWHM of the narrower one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub span_fwhm: f64,
    pub points_per_fwhm: f64,
}

impl GridSpec {
    /// Default for plotted spectra.
    pub const SPECTRUM: GridSpec = GridSpec {
        span_fwhm: 20.0,
        points_per_fwhm: 64.0,
    };
    /// Default for the density-matrix concurrence. The sinc² tails fall off
    /// only as 1/ν², so the span is wide.
    pub const ORACLE: GridSpec = GridSpec {
        span_fwhm: 400.0,
        points_per_fwhm: 64.0,
    };

    pub(crate) fn check(&self, min_span: f64, min_ppf: f64) -> Result<()> {
        if !(self.span_fwhm >= min_span) {
            return Err(Error::InvalidInput(format!(
                "grid span {} FWHM is below the required {min_span}",
                self.span_fwhm
            )));
        }
        if !(self.points_per_fwhm >= min_ppf) {
            return Err(Error::InvalidInput(format!(
                "grid too coarse: {} points per FWHM, need at least {min_ppf}",
                self.points_per_fwhm
            )));
        }
        Ok(())
    }

    /// Symmetric odd-length grid (ν = 0 is a node) for FWHMs `narrow <= wide`.
    pub(crate) fn nodes(&self, narrow: f64, wide: f64) -> Vec<f64> {
        let step = narrow / self.points_per_fwhm;
        let half = (0.5 * self.span_fwhm * wide / step).ceil() as i64;
        (-half..=half).map(|k| k as f64 * step).collect()
    }
}

/// Which Δk enters the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMode {
    /// Δk = −ν·S.
    Linearized,
    /// Δk re-evaluated from the full dispersion at each detuning.
    Exact,
}

impl std::str::FromStr for SpectrumMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linearized" => Ok(SpectrumMode::Linearized),
            "exact" => Ok(SpectrumMode::Exact),
            other => Err(Error::InvalidInput(format!(
                "unknown spectrum mode `{other}` (expected `exact` or `linearized`)"
            ))),
        }
    }
}

/// (S_HV, S_VH) in s/m:
/// S_HV = 1/u_H(Ω_s) + 1/u_V(Ω_i), S_VH = 1/u_V(Ω_s) + 1/u_H(Ω_i).
pub fn gv_slopes(device: &CrystalDevice) -> Result<(f64, f64)> {
    let d = &device.design;
    let s_h = device.inverse_velocity(Polarization::H, d.signal_um)?;
    let s_v = device.inverse_velocity(Polarization::V, d.signal_um)?;
    let i_h = device.inverse_velocity(Polarization::H, d.idler_um)?;
    let i_v = device.inverse_velocity(Polarization::V, d.idler_um)?;
    Ok((s_h + i_v, s_v + i_h))
}

/// Everything the datasheet reports about the emitted pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceFigures {
    /// FWHM bandwidths, rad/s.
    pub bandwidth_hv: f64,
    pub bandwidth_vh: f64,
    pub reduction_hv: Reduction,
    pub reduction_vh: Reduction,
    pub concurrence: f64,
    pub concurrence_oracle: f64,
    /// Pairs per second.
    pub rate: f64,
    /// Pairs / (s GHz mW), using the mean of the two bandwidths.
    pub brightness: f64,
    pub correlation_time: CorrelationTime,
    /// |A_q| = |d_q| |E_p| √(Ω_s Ω_i / (n_s n_i)) / c, only their ratio is
    /// physically meaningful here.
    pub amplitude_hv: f64,
    pub amplitude_vh: f64,
    pub delta_n: f64,
    pub s_hv: f64,
    pub s_vh: f64,
    pub warnings: Vec<Warning>,
}

/// Assembles [`SourceFigures`]; `oracle_grid` sets the density-matrix
/// concurrence grid.
pub fn analyze(device: &CrystalDevice, pump: &PumpConfig, oracle_grid: GridSpec) -> Result<SourceFigures> {
    let (s_hv, s_vh) = gv_slopes(device)?;
    let (bw_hv, bw_vh) = bandwidth_fwhm(device)?;
    let (red_hv, red_vh) = forward_backward_reduction(device)?;
    let idx = device.indices()?;
    let rate = pair_rate(device, pump)?;
    let brightness = spectral_brightness(rate, (bw_hv, bw_vh), pump.power_mw())?;
    let e_p = pump.field_squared(idx.pump).sqrt();
    let d = &device.design;
    let freq = (d.omega_s * d.omega_i).sqrt() / SPEED_OF_LIGHT;
    Ok(SourceFigures {
        bandwidth_hv: bw_hv,
        bandwidth_vh: bw_vh,
        reduction_hv: red_hv,
        reduction_vh: red_vh,
        concurrence: concurrence_closed_form(device)?,
        concurrence_oracle: concurrence_oracle(device, oracle_grid)?,
        rate,
        brightness,
        correlation_time: correlation_time(device)?,
        amplitude_hv: device.d_eff_si(ProcessId::HV).abs() * e_p * freq / (idx.signal_h * idx.idler_v).sqrt(),
        amplitude_vh: device.d_eff_si(ProcessId::VH).abs() * e_p * freq / (idx.signal_v * idx.idler_h).sqrt(),
        delta_n: idx.delta_n(),
        s_hv,
        s_vh,
        warnings: device.warnings.clone(),
    })
}
