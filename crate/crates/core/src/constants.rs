//! Physical constants (CODATA 2022).

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum permittivity (F/m).
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_818_8e-12;
/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;

/// The constants used by the rate and field-amplitude formulas, bundled so
/// callers can echo them into reports.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PhysicalConstants {
    pub c: f64,
    pub eps0: f64,
    pub hbar: f64,
}

impl PhysicalConstants {
    pub const CODATA: PhysicalConstants = PhysicalConstants {
        c: SPEED_OF_LIGHT,
        eps0: VACUUM_PERMITTIVITY,
        hbar: HBAR,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// Angular frequency (rad/s) of light with vacuum wavelength `lambda_um`.
pub fn angular_frequency(lambda_um: f64) -> f64 {
    2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / (lambda_um * 1e-6)
}

/// Vacuum wavelength (um) of light with angular frequency `omega` (rad/s).
pub fn vacuum_wavelength_um(omega: f64) -> f64 {
    2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / omega * 1e6
}
