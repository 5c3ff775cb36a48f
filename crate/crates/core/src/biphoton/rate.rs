use std::f64::consts::PI;

use serde::Serialize;

use super::spectrum::bandwidth_fwhm;
use super::{gv_slopes, CrystalDevice, PumpConfig};
use crate::constants::{SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};
use crate::error::{Error, Result};
use crate::phasematch::ProcessId;

/// Pair rate (pairs/s) under a cw plane-wave pump:
///
/// `R = π L P Ω_s Ω_i / (ε₀ n_p c³ S_beam) · [d_HV²/(n_sH n_iV S_HV) + d_VH²/(n_sV n_iH S_VH)]`
///
/// Normalization: field modes are box-normalized over the beam area and
/// continuum-normalized in frequency, so that the first-order amplitude of
/// each component integrates over ν to |A_q|²·L·2π/S_q; the factor π
/// collects that 2π with the 1/2 of |E_p|² = 2P/(ε₀ n_p c S_beam). Absolute
/// rates depend on this convention. Each component uses its own d_eff, so a
/// pairing-rule violation is carried through rather than averaged.
pub fn pair_rate(device: &CrystalDevice, pump: &PumpConfig) -> Result<f64> {
    let (s_hv, s_vh) = gv_slopes(device)?;
    let idx = device.indices()?;
    let d = device.design();
    let c = SPEED_OF_LIGHT;
    let prefactor = PI * device.length_m() * pump.power_w() * d.omega_s * d.omega_i
        / (VACUUM_PERMITTIVITY * idx.pump * c * c * c * pump.beam_area_m2());
    let d_hv = device.d_eff_si(ProcessId::HV);
    let d_vh = device.d_eff_si(ProcessId::VH);
    let sum = d_hv * d_hv / (idx.signal_h * idx.idler_v * s_hv) + d_vh * d_vh / (idx.signal_v * idx.idler_h * s_vh);
    Ok(prefactor * sum)
}

/// 2πR/Δω per GHz per mW, with Δω the mean of the two component FWHMs
/// (rad/s).
pub fn spectral_brightness(rate: f64, bandwidths: (f64, f64), power_mw: f64) -> Result<f64> {
    let mean = 0.5 * (bandwidths.0 + bandwidths.1);
    if !(rate > 0.0 && mean > 0.0 && power_mw > 0.0) {
        return Err(Error::InvalidInput(format!(
            "brightness needs positive rate, bandwidth and power (got {rate}, {mean}, {power_mw})"
        )));
    }
    let mean_ghz = mean / (2.0 * PI) * 1e-9;
    Ok(rate / (mean_ghz * power_mw))
}

/// Two measures of the biphoton correlation time (s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationTime {
    /// L·max(S_HV, S_VH): width of the rectangular arrival-time difference
    /// window. Headline value.
    pub transit_s: f64,
    /// 2π / mean FWHM.
    pub bandwidth_s: f64,
}

pub fn correlation_time(device: &CrystalDevice) -> Result<CorrelationTime> {
    let (s_hv, s_vh) = gv_slopes(device)?;
    let (bw_hv, bw_vh) = bandwidth_fwhm(device)?;
    Ok(CorrelationTime {
        transit_s: device.length_m() * s_hv.max(s_vh),
        bandwidth_s: 2.0 * PI / (0.5 * (bw_hv + bw_vh)),
    })
}
