//! Run configuration (TOML).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::biphoton::GridSpec;
use crate::dispersion::{CrystalAxis, DispersionModel, PolarizationMapping};
use crate::error::{Error, Result};
use crate::grating::ReciprocalOrder;
use crate::phasematch::{DesignTargets, SignalTarget};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    seed: u64,
    material: RawMaterial,
    #[serde(default)]
    mapping: RawMapping,
    targets: RawTargets,
    device: DeviceParams,
    #[serde(default)]
    grid: RawGrid,
    #[serde(default = "RawGrid::oracle")]
    oracle_grid: RawGrid,
    #[serde(default)]
    output: RawOutput,
    #[serde(default)]
    pattern: PatternParams,
    #[serde(default)]
    tune: TuneParams,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawMaterial {
    Path(String),
    Inline(toml::Table),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMapping {
    h: CrystalAxis,
    v: CrystalAxis,
}

impl Default for RawMapping {
    fn default() -> Self {
        let m = PolarizationMapping::default();
        Self {
            h: m.h_axis(),
            v: m.v_axis(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawSignal {
    Wavelength(f64),
    Keyword(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTargets {
    pump_um: f64,
    signal_um: RawSignal,
    #[serde(default = "default_orders")]
    orders: [[i32; 2]; 2],
    #[serde(default = "default_l_range")]
    l_range: [u32; 2],
    #[serde(default = "default_temp_interval")]
    temp_interval_c: [f64; 2],
}

fn default_orders() -> [[i32; 2]; 2] {
    [[3, 1], [3, -1]]
}

fn default_l_range() -> [u32; 2] {
    [3, 64]
}

fn default_temp_interval() -> [f64; 2] {
    [20.0, 120.0]
}

/// Crystal and pump parameters in lab units.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceParams {
    pub length_mm: f64,
    pub d_pm_per_v: f64,
    pub pump_power_mw: f64,
    pub beam_area_mm2: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    span_fwhm: f64,
    points_per_fwhm: f64,
}

impl Default for RawGrid {
    fn default() -> Self {
        Self {
            span_fwhm: GridSpec::SPECTRUM.span_fwhm,
            points_per_fwhm: GridSpec::SPECTRUM.points_per_fwhm,
        }
    }
}

impl RawGrid {
    fn oracle() -> Self {
        Self {
            span_fwhm: GridSpec::ORACLE.span_fwhm,
            points_per_fwhm: GridSpec::ORACLE.points_per_fwhm,
        }
    }
}

/// Datasheet formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    /// `datasheet.json`
    Json,
    /// `summary.txt`
    Text,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    #[serde(default)]
    dir: Option<String>,
    #[serde(default = "default_formats")]
    formats: Vec<OutputFormat>,
}

impl Default for RawOutput {
    fn default() -> Self {
        Self {
            dir: None,
            formats: default_formats(),
        }
    }
}

fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Json, OutputFormat::Text]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternFormat {
    Text,
    Csv,
}

/// Poling-pattern export and audit settings.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PatternParams {
    #[serde(default = "default_pattern_length")]
    pub length_um: f64,
    #[serde(default = "default_pattern_format")]
    pub format: PatternFormat,
    /// Fourier audit covers |m|, |n| up to this order.
    #[serde(default = "default_audit_order")]
    pub audit_max_order: i32,
    #[serde(default = "default_jitter_sigmas")]
    pub jitter_sigma_um: Vec<f64>,
    #[serde(default = "default_jitter_trials")]
    pub jitter_trials: usize,
}

impl Default for PatternParams {
    fn default() -> Self {
        Self {
            length_um: default_pattern_length(),
            format: default_pattern_format(),
            audit_max_order: default_audit_order(),
            jitter_sigma_um: default_jitter_sigmas(),
            jitter_trials: default_jitter_trials(),
        }
    }
}

fn default_pattern_length() -> f64 {
    1000.0
}

fn default_pattern_format() -> PatternFormat {
    PatternFormat::Text
}

fn default_audit_order() -> i32 {
    5
}

fn default_jitter_sigmas() -> Vec<f64> {
    vec![0.0, 0.01, 0.05]
}

fn default_jitter_trials() -> usize {
    64
}

/// Temperature sweep for tuning curves; bounds default to the design
/// temperature ± 10 °C.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TuneParams {
    #[serde(default)]
    pub tmin_c: Option<f64>,
    #[serde(default)]
    pub tmax_c: Option<f64>,
    #[serde(default = "default_tune_step")]
    pub step_c: f64,
}

impl Default for TuneParams {
    fn default() -> Self {
        Self {
            tmin_c: None,
            tmax_c: None,
            step_c: default_tune_step(),
        }
    }
}

fn default_tune_step() -> f64 {
    0.5
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// SHA-256 of the config file bytes.
    pub config_hash: String,
    pub material: DispersionModel,
    /// Where the material came from (`inline` or the resolved path).
    pub material_source: String,
    pub mapping: PolarizationMapping,
    pub targets: DesignTargets,
    pub device: DeviceParams,
    pub grid: GridSpec,
    pub oracle_grid: GridSpec,
    pub output_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
    pub pattern: PatternParams,
    pub tune: TuneParams,
    pub seed: u64,
}

impl RunConfig {
    /// Reads and validates a config file. Relative paths inside it resolve
    /// against the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| {
            Error::InvalidInput(format!("cannot read config `{}`: {e}", path.display()))
        })?;
        let text = std::str::from_utf8(&bytes)
            .map_err(|e| Error::Parse(format!("config `{}` is not UTF-8: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml_str(text, base)
    }

    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::Parse(format!("config: {}", e.message())))?;
        let config_hash = hex(&Sha256::digest(text.as_bytes()));

        let (material, material_source) = match raw.material {
            RawMaterial::Path(p) => {
                let full = base_dir.join(&p);
                if !full.is_file() {
                    return Err(Error::InvalidInput(format!(
                        "material file `{}` does not exist",
                        full.display()
                    )));
                }
                (DispersionModel::load(&full)?, p)
            }
            RawMaterial::Inline(table) => (DispersionModel::from_table(&table)?, "inline".to_string()),
        };
        let mapping = PolarizationMapping::new(raw.mapping.h, raw.mapping.v)?;

        let t = raw.targets;
        let signal = match t.signal_um {
            RawSignal::Wavelength(s) => SignalTarget::Wavelength(s),
            RawSignal::Keyword(k) if k == "degenerate" => SignalTarget::Degenerate,
            RawSignal::Keyword(k) => {
                return Err(Error::InvalidInput(format!(
                    "targets.signal_um must be a wavelength in um or \"degenerate\", got \"{k}\""
                )))
            }
        };
        let order = |[m, n]: [i32; 2]| ReciprocalOrder::new(m, n);
        let targets = DesignTargets::new(
            t.pump_um,
            signal,
            [order(t.orders[0])?, order(t.orders[1])?],
            (t.temp_interval_c[0], t.temp_interval_c[1]),
            (t.l_range[0], t.l_range[1]),
        )?;

        let d = raw.device;
        for (name, v) in [
            ("device.length_mm", d.length_mm),
            ("device.d_pm_per_v", d.d_pm_per_v),
            ("device.pump_power_mw", d.pump_power_mw),
            ("device.beam_area_mm2", d.beam_area_mm2),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be > 0, got {v}")));
            }
        }

        let grid = GridSpec {
            span_fwhm: raw.grid.span_fwhm,
            points_per_fwhm: raw.grid.points_per_fwhm,
        };
        grid.check(6.0, 32.0)?;
        let oracle_grid = GridSpec {
            span_fwhm: raw.oracle_grid.span_fwhm,
            points_per_fwhm: raw.oracle_grid.points_per_fwhm,
        };
        oracle_grid.check(10.0, 64.0)?;

        let p = &raw.pattern;
        if !(p.length_um > 0.0 && p.length_um.is_finite()) {
            return Err(Error::InvalidInput(format!("pattern.length_um must be > 0, got {}", p.length_um)));
        }
        if p.audit_max_order < 1 {
            return Err(Error::InvalidInput("pattern.audit_max_order must be >= 1".into()));
        }
        if p.jitter_trials == 0 || p.jitter_sigma_um.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
            return Err(Error::InvalidInput(
                "pattern.jitter_trials must be >= 1 and every jitter sigma >= 0".into(),
            ));
        }
        if !(raw.tune.step_c > 0.0 && raw.tune.step_c.is_finite()) {
            return Err(Error::InvalidInput(format!("tune.step_c must be > 0, got {}", raw.tune.step_c)));
        }

        Ok(Self {
            config_hash,
            material,
            material_source,
            mapping,
            targets,
            device: d,
            grid,
            oracle_grid,
            output_dir: base_dir.join(raw.output.dir.unwrap_or_else(|| "out".into())),
            formats: raw.output.formats,
            pattern: raw.pattern,
            tune: raw.tune,
            seed: raw.seed,
        })
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
