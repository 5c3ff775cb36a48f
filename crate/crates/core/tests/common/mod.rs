#![allow(dead_code)]

use counterprop::biphoton::{CrystalDevice, PumpConfig};
use counterprop::{design_source, DesignSolution, DesignTargets, DispersionModel, PolarizationMapping, SignalTarget};

pub fn ktp() -> DispersionModel {
    DispersionModel::from_toml_str(include_str!("../../data/ktp.toml")).unwrap()
}

pub fn degenerate_targets() -> DesignTargets {
    DesignTargets::with_defaults(0.655, SignalTarget::Degenerate).unwrap()
}

pub fn nondegenerate_targets() -> DesignTargets {
    DesignTargets::with_defaults(0.532, SignalTarget::Wavelength(0.8073)).unwrap()
}

pub fn degenerate() -> DesignSolution {
    design_source(&ktp(), &PolarizationMapping::default(), &degenerate_targets()).unwrap()
}

pub fn nondegenerate() -> DesignSolution {
    design_source(&ktp(), &PolarizationMapping::default(), &nondegenerate_targets()).unwrap()
}

/// 2 cm crystal, d = 3.9 pm/V.
pub fn device(design: DesignSolution) -> CrystalDevice {
    CrystalDevice::new(0.02, 3.9, design, ktp(), PolarizationMapping::default()).unwrap()
}

/// 1 mW over 0.01 mm².
pub fn pump() -> PumpConfig {
    PumpConfig::from_mw_mm2(1.0, 0.01).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Relative distance between two unordered pairs, matched as sets.
pub fn set_rel(got: (f64, f64), want: (f64, f64)) -> f64 {
    let (g0, g1) = (got.0.min(got.1), got.0.max(got.1));
    let (w0, w1) = (want.0.min(want.1), want.0.max(want.1));
    rel(g0, w0).max(rel(g1, w1))
}
