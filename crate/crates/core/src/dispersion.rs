//! Temperature-dependent refractive indices of a biaxial crystal.
//!
//! A [`DispersionModel`] is read from a TOML material file with one table per
//! principal axis:
//!
//! ```toml
//! provenance = "where the numbers came from"
//!
//! [z]
//! form = "sellmeier_pole"
//! coefficients = [2.12725, 1.18431, 0.0514852, 0.6603, 100.00507, 0.00968956]
//! thermal_coefficients = [9.9587e-6, 9.9228e-6, -8.9603e-6, 4.1010e-6]
//! lambda_range_um = [0.53, 1.57]
//! temp_range_c = [20.0, 200.0]
//! ```
//!
//! Wavelengths are vacuum wavelengths in micrometres, temperatures in degrees
//! Celsius. The index on one axis is
//!
//! `n(λ, T) = n_base(λ) + Σ_k a_k λ^(-2k) + Σ_p τ^(p+1) Σ_{j=0..3} t_{p,j} λ^(-j)`
//!
//! with `τ = T - T_ref`. The second sum is the optional `index_correction`,
//! the third the `thermal_coefficients` taken four at a time (first block
//! linear in `τ`, second quadratic, ...). `T_ref` defaults to 25 °C
//! (`thermal_reference_c`).
//!
//! Supported base forms:
//!
//! | `form` | base index | coefficients |
//! |---|---|---|
//! | `sellmeier_pole` | `n² = A + B₁λ²/(λ²-C₁) + B₂λ²/(λ²-C₂) - Dλ²` | `[A, B₁, C₁, B₂, C₂, D]` |
//! | `kato_pole` | `n² = A + B₁/(λ²-C₁) + B₂/(λ²-C₂) - Dλ²` | `[A, B₁, C₁, B₂, C₂, D]` |
//! | `cauchy` | `n = Σ c_k λ^(-2k)` | `[c₀, c₁, ...]` |
//!
//! All forms are rational in λ, so `dn/dλ` is evaluated analytically.
//! Evaluation outside the declared validity window is an error; nothing is
//! extrapolated.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Principal dielectric axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrystalAxis {
    X,
    Y,
    Z,
}

impl CrystalAxis {
    pub const ALL: [CrystalAxis; 3] = [CrystalAxis::X, CrystalAxis::Y, CrystalAxis::Z];

    pub fn name(self) -> &'static str {
        match self {
            CrystalAxis::X => "x",
            CrystalAxis::Y => "y",
            CrystalAxis::Z => "z",
        }
    }
}

impl fmt::Display for CrystalAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CrystalAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(CrystalAxis::X),
            "y" => Ok(CrystalAxis::Y),
            "z" => Ok(CrystalAxis::Z),
            other => Err(Error::InvalidInput(format!(
                "unknown crystal axis `{other}` (expected x, y or z)"
            ))),
        }
    }
}

/// Photon polarization in the lab frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub fn orthogonal(self) -> Polarization {
        match self {
            Polarization::H => Polarization::V,
            Polarization::V => Polarization::H,
        }
    }
}

/// Which crystal axis carries the H and V polarizations. Light propagates
/// along X, so neither polarization may lie on X.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarizationMapping {
    h_axis: CrystalAxis,
    v_axis: CrystalAxis,
}

impl PolarizationMapping {
    pub fn new(h_axis: CrystalAxis, v_axis: CrystalAxis) -> Result<Self> {
        if h_axis == v_axis {
            return Err(Error::InvalidInput(format!(
                "H and V cannot share axis `{h_axis}`"
            )));
        }
        if h_axis == CrystalAxis::X || v_axis == CrystalAxis::X {
            return Err(Error::InvalidInput(
                "polarizations must be transverse to the propagation axis x".into(),
            ));
        }
        Ok(Self { h_axis, v_axis })
    }

    pub fn h_axis(&self) -> CrystalAxis {
        self.h_axis
    }

    pub fn v_axis(&self) -> CrystalAxis {
        self.v_axis
    }

    pub fn axis(&self, pol: Polarization) -> CrystalAxis {
        match pol {
            Polarization::H => self.h_axis,
            Polarization::V => self.v_axis,
        }
    }
}

impl Default for PolarizationMapping {
    /// H on z, V on y.
    fn default() -> Self {
        Self {
            h_axis: CrystalAxis::Z,
            v_axis: CrystalAxis::Y,
        }
    }
}

/// Functional form of the room-temperature index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SellmeierForm {
    SellmeierPole,
    KatoPole,
    Cauchy,
}

impl SellmeierForm {
    fn check_coefficients(self, coeffs: &[f64]) -> std::result::Result<(), String> {
        match self {
            SellmeierForm::SellmeierPole | SellmeierForm::KatoPole if coeffs.len() != 6 => {
                Err(format!(
                    "form `{}` needs 6 coefficients [A, B1, C1, B2, C2, D], got {}",
                    self.name(),
                    coeffs.len()
                ))
            }
            SellmeierForm::Cauchy if coeffs.is_empty() => {
                Err("form `cauchy` needs at least one coefficient".into())
            }
            _ => Ok(()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SellmeierForm::SellmeierPole => "sellmeier_pole",
            SellmeierForm::KatoPole => "kato_pole",
            SellmeierForm::Cauchy => "cauchy",
        }
    }
}

/// Raw per-axis table as it appears in the material file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisTable {
    form: SellmeierForm,
    coefficients: Vec<f64>,
    #[serde(default)]
    thermal_coefficients: Vec<f64>,
    lambda_range_um: [f64; 2],
    temp_range_c: [f64; 2],
    #[serde(default)]
    index_correction: Vec<f64>,
    #[serde(default)]
    thermal_reference_c: Option<f64>,
}

/// Dispersion of a single principal axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisDispersion {
    pub form: SellmeierForm,
    pub coefficients: Vec<f64>,
    pub thermal_coefficients: Vec<f64>,
    pub index_correction: Vec<f64>,
    pub thermal_reference_c: f64,
    pub lambda_range_um: (f64, f64),
    pub temp_range_c: (f64, f64),
}

impl AxisDispersion {
    fn from_table(axis: CrystalAxis, t: AxisTable) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidAxis { axis, reason };
        t.form.check_coefficients(&t.coefficients).map_err(invalid)?;
        if t.thermal_coefficients.len() % 4 != 0 {
            return Err(invalid(format!(
                "thermal_coefficients must come in blocks of 4, got {}",
                t.thermal_coefficients.len()
            )));
        }
        let all_finite = t
            .coefficients
            .iter()
            .chain(&t.thermal_coefficients)
            .chain(&t.index_correction)
            .chain(&t.lambda_range_um)
            .chain(&t.temp_range_c)
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(invalid("coefficients must be finite".into()));
        }
        let [l0, l1] = t.lambda_range_um;
        if !(l0 > 0.0 && l0 < l1) {
            return Err(invalid(format!(
                "lambda_range_um must satisfy 0 < min < max, got [{l0}, {l1}]"
            )));
        }
        let [t0, t1] = t.temp_range_c;
        if t0 >= t1 {
            return Err(invalid(format!(
                "temp_range_c must satisfy min < max, got [{t0}, {t1}]"
            )));
        }
        let ax = AxisDispersion {
            form: t.form,
            coefficients: t.coefficients,
            thermal_coefficients: t.thermal_coefficients,
            index_correction: t.index_correction,
            thermal_reference_c: t.thermal_reference_c.unwrap_or(25.0),
            lambda_range_um: (l0, l1),
            temp_range_c: (t0, t1),
        };
        ax.check_physical(axis)?;
        Ok(ax)
    }

    fn to_table(&self) -> AxisTable {
        AxisTable {
            form: self.form,
            coefficients: self.coefficients.clone(),
            thermal_coefficients: self.thermal_coefficients.clone(),
            lambda_range_um: [self.lambda_range_um.0, self.lambda_range_um.1],
            temp_range_c: [self.temp_range_c.0, self.temp_range_c.1],
            index_correction: self.index_correction.clone(),
            thermal_reference_c: Some(self.thermal_reference_c),
        }
    }

    /// Samples the declared window and rejects n ≤ 1 or poles.
    fn check_physical(&self, axis: CrystalAxis) -> Result<()> {
        const NL: usize = 64;
        const NT: usize = 9;
        let (l0, l1) = self.lambda_range_um;
        let (t0, t1) = self.temp_range_c;
        for i in 0..=NL {
            let lambda = l0 + (l1 - l0) * i as f64 / NL as f64;
            for j in 0..=NT {
                let temp = t0 + (t1 - t0) * j as f64 / NT as f64;
                let (n, dn) = self.eval(lambda, temp);
                if !(n > 1.0 && n.is_finite() && dn.is_finite()) {
                    return Err(Error::NonPhysical {
                        axis,
                        lambda_um: lambda,
                        temp_c: temp,
                        n,
                    });
                }
            }
        }
        Ok(())
    }

    /// (n, dn/dλ) without range checks. dn/dλ is per micrometre.
    fn eval(&self, lambda: f64, temp: f64) -> (f64, f64) {
        let l2 = lambda * lambda;
        let c = &self.coefficients;
        let (mut n, mut dn) = match self.form {
            SellmeierForm::SellmeierPole => {
                let (a, b1, c1, b2, c2, d) = (c[0], c[1], c[2], c[3], c[4], c[5]);
                let n2 = a + b1 * l2 / (l2 - c1) + b2 * l2 / (l2 - c2) - d * l2;
                let dn2 = -2.0 * b1 * c1 * lambda / (l2 - c1).powi(2)
                    - 2.0 * b2 * c2 * lambda / (l2 - c2).powi(2)
                    - 2.0 * d * lambda;
                let n = n2.sqrt();
                (n, dn2 / (2.0 * n))
            }
            SellmeierForm::KatoPole => {
                let (a, b1, c1, b2, c2, d) = (c[0], c[1], c[2], c[3], c[4], c[5]);
                let n2 = a + b1 / (l2 - c1) + b2 / (l2 - c2) - d * l2;
                let dn2 = -2.0 * b1 * lambda / (l2 - c1).powi(2)
                    - 2.0 * b2 * lambda / (l2 - c2).powi(2)
                    - 2.0 * d * lambda;
                let n = n2.sqrt();
                (n, dn2 / (2.0 * n))
            }
            SellmeierForm::Cauchy => even_inverse_series(c, lambda),
        };

        let (cn, cdn) = even_inverse_series(&self.index_correction, lambda);
        n += cn;
        dn += cdn;

        let tau = temp - self.thermal_reference_c;
        let mut tau_pow = 1.0;
        for block in self.thermal_coefficients.chunks_exact(4) {
            tau_pow *= tau;
            let mut poly = 0.0;
            let mut dpoly = 0.0;
            let mut inv = 1.0;
            for (k, t) in block.iter().enumerate() {
                poly += t * inv;
                dpoly -= k as f64 * t * inv / lambda;
                inv /= lambda;
            }
            n += tau_pow * poly;
            dn += tau_pow * dpoly;
        }
        (n, dn)
    }

    fn check_range(&self, lambda_um: f64, temp_c: f64, strict: bool) -> Result<()> {
        let inside = |v: f64, (lo, hi): (f64, f64)| {
            if strict {
                v > lo && v < hi
            } else {
                v >= lo && v <= hi
            }
        };
        if !inside(lambda_um, self.lambda_range_um) {
            return Err(Error::OutOfRange {
                quantity: "wavelength (um)",
                value: lambda_um,
                min: self.lambda_range_um.0,
                max: self.lambda_range_um.1,
            });
        }
        if !inside(temp_c, self.temp_range_c) {
            return Err(Error::OutOfRange {
                quantity: "temperature (C)",
                value: temp_c,
                min: self.temp_range_c.0,
                max: self.temp_range_c.1,
            });
        }
        Ok(())
    }
}

/// Σ c_k λ^(-2k) and its derivative.
fn even_inverse_series(c: &[f64], lambda: f64) -> (f64, f64) {
    let inv2 = 1.0 / (lambda * lambda);
    let mut v = 0.0;
    let mut dv = 0.0;
    let mut p = 1.0;
    for (k, ck) in c.iter().enumerate() {
        v += ck * p;
        dv -= 2.0 * k as f64 * ck * p / lambda;
        p *= inv2;
    }
    (v, dv)
}

/// Refractive-index model of a biaxial crystal. Immutable after loading.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispersionModel {
    provenance: String,
    axes: BTreeMap<CrystalAxis, AxisDispersion>,
}

/// Axes every material file must declare.
const REQUIRED_AXES: [CrystalAxis; 2] = [CrystalAxis::Y, CrystalAxis::Z];

impl DispersionModel {
    /// Parses a material file.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let text = std::str::from_utf8(bytes)
            .map_err(|e| Error::Parse(format!("material file is not UTF-8: {e}")))?;
        Self::from_toml_str(text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
            Error::Parse(format!("material file: {}", e.message()))
        })?;
        Self::from_table(&table)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| {
            Error::InvalidInput(format!("cannot read material file {}: {e}", path.display()))
        })?;
        Self::from_bytes(&bytes)
    }

    /// Builds a model from an already-parsed TOML table. Keys other than
    /// `provenance` and the axis tables are ignored, so run configs can embed
    /// the material inline.
    pub fn from_table(table: &toml::Table) -> Result<Self> {
        let provenance = match table.get("provenance") {
            Some(toml::Value::String(s)) => s.clone(),
            Some(_) => return Err(Error::Parse("`provenance` must be a string".into())),
            None => String::new(),
        };
        let mut axes = BTreeMap::new();
        for axis in CrystalAxis::ALL {
            let Some(value) = table.get(axis.name()) else {
                continue;
            };
            let raw: AxisTable = value
                .clone()
                .try_into()
                .map_err(|e: toml::de::Error| Error::InvalidAxis {
                    axis,
                    reason: e.message().to_string(),
                })?;
            axes.insert(axis, AxisDispersion::from_table(axis, raw)?);
        }
        for axis in REQUIRED_AXES {
            if !axes.contains_key(&axis) {
                return Err(Error::MissingAxis(axis));
            }
        }
        Ok(Self { provenance, axes })
    }

    /// Serializes back to the material-file schema.
    pub fn to_toml_string(&self) -> String {
        let mut table = toml::Table::new();
        table.insert("provenance".into(), self.provenance.clone().into());
        for (axis, ax) in &self.axes {
            table.insert(
                axis.name().into(),
                toml::Value::try_from(ax.to_table()).expect("axis table serializes"),
            );
        }
        toml::to_string(&table).expect("material serializes")
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn axis(&self, axis: CrystalAxis) -> Result<&AxisDispersion> {
        self.axes.get(&axis).ok_or(Error::MissingAxis(axis))
    }

    pub fn axes(&self) -> impl Iterator<Item = (CrystalAxis, &AxisDispersion)> {
        self.axes.iter().map(|(a, d)| (*a, d))
    }

    /// Intersection of the temperature windows of the given axes.
    pub fn temp_range(&self, axes: &[CrystalAxis]) -> Result<(f64, f64)> {
        self.intersect(axes, |a| a.temp_range_c)
    }

    /// Intersection of the wavelength windows of the given axes.
    pub fn lambda_range(&self, axes: &[CrystalAxis]) -> Result<(f64, f64)> {
        self.intersect(axes, |a| a.lambda_range_um)
    }

    fn intersect(
        &self,
        axes: &[CrystalAxis],
        f: impl Fn(&AxisDispersion) -> (f64, f64),
    ) -> Result<(f64, f64)> {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for &axis in axes {
            let (a, b) = f(self.axis(axis)?);
            lo = lo.max(a);
            hi = hi.min(b);
        }
        Ok((lo, hi))
    }

    /// Refractive index on `axis` at vacuum wavelength `lambda_um` and
    /// temperature `temp_c`.
    pub fn refractive_index(&self, axis: CrystalAxis, lambda_um: f64, temp_c: f64) -> Result<f64> {
        let ax = self.axis(axis)?;
        ax.check_range(lambda_um, temp_c, false)?;
        Ok(ax.eval(lambda_um, temp_c).0)
    }

    /// dn/dλ in 1/um.
    pub fn dn_dlambda(&self, axis: CrystalAxis, lambda_um: f64, temp_c: f64) -> Result<f64> {
        let ax = self.axis(axis)?;
        ax.check_range(lambda_um, temp_c, false)?;
        Ok(ax.eval(lambda_um, temp_c).1)
    }

    /// Wave number 2πn/λ in rad/um.
    pub fn wavenumber(&self, axis: CrystalAxis, lambda_um: f64, temp_c: f64) -> Result<f64> {
        Ok(TWO_PI * self.refractive_index(axis, lambda_um, temp_c)? / lambda_um)
    }

    /// Group index n - λ dn/dλ. Requires a point strictly inside the window.
    pub fn group_index(&self, axis: CrystalAxis, lambda_um: f64, temp_c: f64) -> Result<f64> {
        let ax = self.axis(axis)?;
        ax.check_range(lambda_um, temp_c, true)?;
        let (n, dn) = ax.eval(lambda_um, temp_c);
        Ok(n - lambda_um * dn)
    }

    /// Group velocity dω/dk in m/s.
    pub fn group_velocity(&self, axis: CrystalAxis, lambda_um: f64, temp_c: f64) -> Result<f64> {
        let ng = self.group_index(axis, lambda_um, temp_c)?;
        if ng <= 1.0 {
            return Err(Error::Numerical(format!(
                "group index {ng} <= 1 on axis `{axis}` at {lambda_um} um"
            )));
        }
        Ok(SPEED_OF_LIGHT / ng)
    }
}

/// Parses a material file; see [`DispersionModel::from_bytes`].
pub fn load_dispersion(material_file: &[u8]) -> Result<DispersionModel> {
    DispersionModel::from_bytes(material_file)
}
