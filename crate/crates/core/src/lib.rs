//! Design and analysis of counter-propagating, polarization-entangled photon
//! pair sources in dual-periodically poled crystals.

pub mod biphoton;
pub mod constants;
pub mod dispersion;
pub mod error;
pub mod grating;
pub mod phasematch;
pub mod report;
pub mod roots;
pub mod warnings;

pub use dispersion::{
    load_dispersion, CrystalAxis, DispersionModel, Polarization, PolarizationMapping,
};
pub use error::{Error, Result};
pub use grating::{DualGrating, Duty, ReciprocalOrder};
pub use phasematch::{design_source, DesignSolution, DesignTargets, ProcessId, SignalTarget};
pub use warnings::Warning;
