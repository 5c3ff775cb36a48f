use num_complex::Complex64;
use serde::Serialize;

use super::{gv_slopes, CrystalDevice, GridSpec, SpectrumMode};
use crate::constants::vacuum_wavelength_um;
use crate::dispersion::Polarization;
use crate::error::{Error, Result};
use crate::phasematch::{delta_k, ProcessId, ProcessSpec};

/// u with sinc²(u) = 1/2.
pub const FWHM_HALF_WIDTH: f64 = 1.391_557_378_251_510_3;
/// Δω·L·S/π for the sinc² line, 4u/π ≈ 1.7718.
pub const FWHM_PI_FACTOR: f64 = 4.0 * FWHM_HALF_WIDTH / std::f64::consts::PI;

/// h(x) = exp(−ix/2)·sinc(x/2).
pub fn h_function(x: f64) -> Complex64 {
    let u = 0.5 * x;
    let sinc = if u == 0.0 { 1.0 } else { u.sin() / u };
    Complex64::from_polar(sinc, -u)
}

/// Sampled two-photon spectrum of both components.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointSpectrum {
    /// Signal detuning ν (rad/s); the idler sits at −ν.
    pub nu: Vec<f64>,
    pub h_hv: Vec<Complex64>,
    pub h_vh: Vec<Complex64>,
    pub density_hv: Vec<f64>,
    pub density_vh: Vec<f64>,
    pub s_hv: f64,
    pub s_vh: f64,
    pub mode: SpectrumMode,
    pub grid: GridSpec,
}

/// Samples both components on a symmetric grid. The exact mode measures Δk
/// relative to its value at ν = 0, which is the design residual.
pub fn joint_spectrum(device: &CrystalDevice, grid: GridSpec, mode: SpectrumMode) -> Result<JointSpectrum> {
    grid.check(6.0, 32.0)?;
    let (s_hv, s_vh) = gv_slopes(device)?;
    let (bw_hv, bw_vh) = bandwidth_fwhm(device)?;
    let nu = grid.nodes(bw_hv.min(bw_vh), bw_hv.max(bw_vh));
    let l = device.length_m();

    let (x_hv, x_vh): (Vec<f64>, Vec<f64>) = match mode {
        SpectrumMode::Linearized => nu.iter().map(|&v| (-v * l * s_hv, -v * l * s_vh)).unzip(),
        SpectrumMode::Exact => {
            let hv = exact_phase(device, ProcessId::HV, &nu)?;
            let vh = exact_phase(device, ProcessId::VH, &nu)?;
            (hv, vh)
        }
    };
    let h_hv: Vec<Complex64> = x_hv.iter().map(|&x| h_function(x)).collect();
    let h_vh: Vec<Complex64> = x_vh.iter().map(|&x| h_function(x)).collect();
    Ok(JointSpectrum {
        density_hv: h_hv.iter().map(|h| h.norm_sqr()).collect(),
        density_vh: h_vh.iter().map(|h| h.norm_sqr()).collect(),
        nu,
        h_hv,
        h_vh,
        s_hv,
        s_vh,
        mode,
        grid,
    })
}

fn exact_phase(device: &CrystalDevice, process: ProcessId, nu: &[f64]) -> Result<Vec<f64>> {
    let d = device.design();
    let g = d.grating_reciprocal(process);
    let t = d.temperature_c;
    let centre = delta_k(device.model(), device.mapping(), &d.process(process), g, t)?;
    nu.iter()
        .map(|&v| {
            if v == 0.0 {
                return Ok(0.0);
            }
            let spec = ProcessSpec {
                pump_um: d.pump_um,
                signal_um: vacuum_wavelength_um(d.omega_s + v),
                idler_um: vacuum_wavelength_um(d.omega_i - v),
                process,
            };
            let dk = delta_k(device.model(), device.mapping(), &spec, g, t)? - centre;
            Ok(dk * 1e6 * device.length_m())
        })
        .collect()
}

/// Closed-form FWHM (rad/s) of each component: 4u/(L·S) ≈ 1.7718π/(L·S).
pub fn bandwidth_fwhm(device: &CrystalDevice) -> Result<(f64, f64)> {
    let (s_hv, s_vh) = gv_slopes(device)?;
    let l = device.length_m();
    Ok((
        4.0 * FWHM_HALF_WIDTH / (l * s_hv),
        4.0 * FWHM_HALF_WIDTH / (l * s_vh),
    ))
}

/// FWHM of a sampled single-peaked line, by linear interpolation of the
/// half-maximum crossings on either side of the peak.
pub fn numeric_fwhm(nu: &[f64], density: &[f64]) -> Result<f64> {
    if nu.len() != density.len() || nu.len() < 3 {
        return Err(Error::InvalidInput("spectrum grid and densities must match (>= 3 samples)".into()));
    }
    let (peak, max) = density
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty");
    let half = 0.5 * max;
    let cross = |i: usize, j: usize| {
        let t = (density[i] - half) / (density[i] - density[j]);
        nu[i] + t * (nu[j] - nu[i])
    };
    let right = (peak..nu.len() - 1)
        .find(|&i| density[i + 1] < half)
        .map(|i| cross(i, i + 1));
    let left = (1..=peak).rev().find(|&i| density[i - 1] < half).map(|i| cross(i, i - 1));
    match (left, right) {
        (Some(a), Some(b)) => Ok(b - a),
        _ => Err(Error::InvalidInput("grid does not contain both half-maximum points".into())),
    }
}

/// Bandwidth narrowing of the backward geometry over forward type-II.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Reduction {
    Finite(f64),
    /// Group-velocity-matched pair: the forward bandwidth is not limited at
    /// first order, so the ratio has no finite value.
    Unbounded,
}

impl Reduction {
    /// (a + b) / |a − b| for inverse group velocities a, b.
    pub fn from_inverse_velocities(a: f64, b: f64) -> Self {
        let diff = (a - b).abs();
        if diff == 0.0 {
            Reduction::Unbounded
        } else {
            Reduction::Finite((a + b) / diff)
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Reduction::Finite(v) => Some(v),
            Reduction::Unbounded => None,
        }
    }
}

/// (factor_HV, factor_VH): (u_s⁻¹ + u_i⁻¹) / |u_s⁻¹ − u_i⁻¹| per component.
pub fn forward_backward_reduction(device: &CrystalDevice) -> Result<(Reduction, Reduction)> {
    let d = device.design();
    let (model, map, t) = (device.model(), device.mapping(), d.temperature_c);
    let inv = |pol: Polarization, lambda: f64| -> Result<f64> {
        Ok(1.0 / model.group_velocity(map.axis(pol), lambda, t)?)
    };
    Ok((
        Reduction::from_inverse_velocities(inv(Polarization::H, d.signal_um)?, inv(Polarization::V, d.idler_um)?),
        Reduction::from_inverse_velocities(inv(Polarization::V, d.signal_um)?, inv(Polarization::H, d.idler_um)?),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn h_at_origin() {
        assert_eq!(h_function(0.0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn first_zero_and_half_maximum() {
        assert!(h_function(2.0 * std::f64::consts::PI).norm_sqr() < 1e-30);
        let half = h_function(2.0 * FWHM_HALF_WIDTH).norm_sqr();
        assert!((half - 0.5).abs() < 1e-15, "{half}");
        assert!((h_function(2.7831).norm_sqr() - 0.5).abs() < 1e-4);
        assert!((FWHM_PI_FACTOR - 1.7718).abs() < 1e-4);
    }

    #[test]
    fn half_width_is_the_sinc_root() {
        // Independent bisection for sinc²(u) = 1/2.
        let f = |u: f64| (u.sin() / u).powi(2) - 0.5;
        let (mut a, mut b) = (1.0f64, 2.0f64);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if f(a) * f(m) <= 0.0 {
                b = m
            } else {
                a = m
            }
        }
        assert!((0.5 * (a + b) - FWHM_HALF_WIDTH).abs() < 1e-14);
    }

    #[test]
    fn reduction_limits() {
        assert_eq!(Reduction::from_inverse_velocities(1.0, 1.0), Reduction::Unbounded);
        let mut last = 0.0;
        for eps in [1e-1, 1e-3, 1e-6, 1e-9] {
            let r = Reduction::from_inverse_velocities(1.0, 1.0 + eps).value().unwrap();
            assert!(r > last);
            last = r;
        }
        assert!(last > 1e9);
    }

    #[test]
    fn numeric_fwhm_of_sampled_sinc() {
        let step = 4.0 * FWHM_HALF_WIDTH / 64.0;
        let x: Vec<f64> = (-640..=640).map(|k| k as f64 * step).collect();
        let d: Vec<f64> = x.iter().map(|&x| h_function(x).norm_sqr()).collect();
        let w = numeric_fwhm(&x, &d).unwrap();
        assert!((w / (4.0 * FWHM_HALF_WIDTH) - 1.0).abs() < 1e-3, "{w}");
    }

    proptest! {
        #[test]
        fn h_modulus_is_sinc(x in -100.0f64..100.0) {
            prop_assume!(x.abs() > 1e-9);
            let s = (x / 2.0).sin() / (x / 2.0);
            prop_assert!((h_function(x).norm() - s.abs()).abs() < 1e-12);
            prop_assert!((h_function(-x) - h_function(x).conj()).norm() < 1e-15);
        }
    }
}
