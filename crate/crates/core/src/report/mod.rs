//! Batch commands behind the command-line tool: design datasheets, spectra,
//! poling patterns and tuning curves. Every file written embeds the config
//! hash and material provenance, and is written atomically.

mod config;
mod sheet;

pub use config::{DeviceParams, OutputFormat, PatternFormat, PatternParams, RunConfig, TuneParams};
pub use sheet::{Datasheet, FourierCheck, JitterRow, PatternAudit, Quantity};

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::biphoton::{analyze, joint_spectrum, CrystalDevice, PumpConfig, SourceFigures, SpectrumMode};
use crate::error::{Error, Result};
use crate::grating::{
    aliased_coefficient, fourier_coefficient, min_domain, pattern_fourier, poling_error_mc, reciprocal,
    synthesize_pattern, DomainPattern, ReciprocalOrder,
};
use crate::phasematch::{design_source, tuning_curve, DesignSolution, ProcessId};

pub const TOOL_NAME: &str = "counterprop";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Alias terms summed when auditing against the aliased coefficient.
const AUDIT_ALIASES: u32 = 20_000;

/// Files written and text meant for standard output.
#[derive(Debug, Clone, Default)]
pub struct CommandOutput {
    pub files: Vec<PathBuf>,
    pub stdout: String,
}

/// A solved design with its device model and pump.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub solution: DesignSolution,
    pub device: CrystalDevice,
    pub pump: PumpConfig,
    pub figures: SourceFigures,
}

/// Runs the design solver and the two-photon analysis for `cfg`.
pub fn analyze_config(cfg: &RunConfig) -> Result<Analysis> {
    let solution = design_source(&cfg.material, &cfg.mapping, &cfg.targets)?;
    let device = CrystalDevice::new(
        cfg.device.length_mm * 1e-3,
        cfg.device.d_pm_per_v,
        solution.clone(),
        cfg.material.clone(),
        cfg.mapping,
    )?;
    let pump = PumpConfig::from_mw_mm2(cfg.device.pump_power_mw, cfg.device.beam_area_mm2)?;
    let figures = analyze(&device, &pump, cfg.oracle_grid)?;
    Ok(Analysis {
        solution,
        device,
        pump,
        figures,
    })
}

/// Synthesizes the pattern of `solution` over `length_um` and audits its
/// Fourier content and poling-error sensitivity.
pub fn audit_pattern(
    cfg: &RunConfig,
    solution: &DesignSolution,
    length_um: f64,
) -> Result<(DomainPattern, PatternAudit)> {
    let g = &solution.grating;
    let pattern = synthesize_pattern(g, length_um)?;
    let check = |order: ReciprocalOrder| -> Result<FourierCheck> {
        let freq = reciprocal(order, g);
        let measured = pattern_fourier(&pattern, freq)?.norm();
        let analytic = fourier_coefficient(order, g).abs();
        let aliased = aliased_coefficient(order, g, AUDIT_ALIASES).norm();
        Ok(FourierCheck::new(order, freq, analytic, measured, aliased))
    };
    let working = vec![check(solution.order_hv)?, check(solution.order_vh)?];

    let k = cfg.pattern.audit_max_order;
    let mut worst = (0.0f64, 0.0f64);
    for m in (-k..=k).filter(|&m| m != 0) {
        for n in (-k..=k).filter(|&n| n != 0) {
            let c = check(ReciprocalOrder::new(m, n)?)?;
            worst.0 = worst.0.max(c.residual.value);
            worst.1 = worst.1.max(c.aliased_residual.value);
        }
    }

    let freq = solution.grating_reciprocal(ProcessId::HV);
    let jitter = cfg
        .pattern
        .jitter_sigma_um
        .iter()
        .map(|&sigma| {
            poling_error_mc(&pattern, sigma, cfg.pattern.jitter_trials, freq, cfg.seed)
                .map(|s| JitterRow::new(solution.order_hv, &s))
        })
        .collect::<Result<Vec<_>>>()?;

    let audit = PatternAudit::new(&pattern, g, min_domain(&pattern), working, k, worst, jitter);
    Ok((pattern, audit))
}

fn header_lines(cfg: &RunConfig, solution: &DesignSolution) -> Vec<(String, String)> {
    vec![
        ("tool".into(), format!("{TOOL_NAME} {TOOL_VERSION}")),
        ("config_sha256".into(), cfg.config_hash.clone()),
        ("material_provenance".into(), one_line(cfg.material.provenance())),
        ("design_temperature_c".into(), format!("{}", solution.temperature_c)),
    ]
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn comment_header(lines: &[(String, String)]) -> String {
    let mut out = String::new();
    for (k, v) in lines {
        let _ = writeln!(out, "# {k}: {v}");
    }
    out
}

/// Writes `contents` to `dir/name` through a temporary file and a rename.
fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    std::fs::write(&tmp, contents)?;
    if let Err(e) = std::fs::rename(&tmp, &target) {
        let _ = std::fs::remove_file(&tmp);
        return Err(e.into());
    }
    Ok(target)
}

/// Builds the datasheet without writing anything.
pub fn build_datasheet(cfg: &RunConfig) -> Result<Datasheet> {
    let analysis = analyze_config(cfg)?;
    let (_, audit) = audit_pattern(cfg, &analysis.solution, cfg.pattern.length_um)?;
    Ok(Datasheet::new(cfg, &analysis, audit))
}

/// Solves the design and writes `datasheet.json` and/or `summary.txt`.
pub fn cmd_design(cfg: &RunConfig) -> Result<(Datasheet, CommandOutput)> {
    let sheet = build_datasheet(cfg)?;
    let summary = sheet.summary();
    let mut out = CommandOutput::default();
    for format in &cfg.formats {
        let path = match format {
            OutputFormat::Json => write_atomic(&cfg.output_dir, "datasheet.json", &sheet.to_json())?,
            OutputFormat::Text => write_atomic(&cfg.output_dir, "summary.txt", &summary)?,
        };
        out.files.push(path);
    }
    out.stdout = summary;
    Ok((sheet, out))
}

/// Joint spectral densities as CSV (`nu_ghz,density_hv,density_vh`), ν/2π in
/// GHz.
pub fn cmd_spectrum(cfg: &RunConfig, mode: SpectrumMode) -> Result<CommandOutput> {
    let analysis = analyze_config(cfg)?;
    let spec = joint_spectrum(&analysis.device, cfg.grid, mode)?;
    let mode_name = match mode {
        SpectrumMode::Linearized => "linearized",
        SpectrumMode::Exact => "exact",
    };
    let mut header = header_lines(cfg, &analysis.solution);
    header.push(("mode".into(), mode_name.into()));
    header.push(("span_fwhm".into(), format!("{}", cfg.grid.span_fwhm)));
    header.push(("points_per_fwhm".into(), format!("{}", cfg.grid.points_per_fwhm)));
    let mut csv = comment_header(&header);
    csv.push_str("nu_ghz,density_hv,density_vh\n");
    for ((nu, a), b) in spec.nu.iter().zip(&spec.density_hv).zip(&spec.density_vh) {
        let _ = writeln!(csv, "{},{},{}", nu / (2.0 * std::f64::consts::PI) * 1e-9, a, b);
    }
    let name = format!("spectrum_{mode_name}.csv");
    let path = write_atomic(&cfg.output_dir, &name, &csv)?;
    Ok(CommandOutput {
        files: vec![path],
        stdout: format!("wrote {} samples to {name}\n", spec.nu.len()),
    })
}

/// Writes the poling pattern and reports the min-domain and Fourier audit.
pub fn cmd_pattern(cfg: &RunConfig, length_um: Option<f64>) -> Result<(PatternAudit, CommandOutput)> {
    let length = length_um.unwrap_or(cfg.pattern.length_um);
    let solution = design_source(&cfg.material, &cfg.mapping, &cfg.targets)?;
    let (pattern, audit) = audit_pattern(cfg, &solution, length)?;
    let header = header_lines(cfg, &solution);
    let (name, body) = match cfg.pattern.format {
        PatternFormat::Text => ("pattern.txt", pattern.to_text(Some(&solution.grating), &header)),
        PatternFormat::Csv => ("pattern.csv", pattern.to_csv(Some(&solution.grating), &header)),
    };
    let path = write_atomic(&cfg.output_dir, name, &body)?;
    Ok((
        audit.clone(),
        CommandOutput {
            files: vec![path],
            stdout: audit.summary(),
        },
    ))
}

/// Tuning curves of the fixed design grating over a temperature range. The
/// design temperature is always one of the rows.
pub fn cmd_tune(cfg: &RunConfig, tmin_c: Option<f64>, tmax_c: Option<f64>) -> Result<CommandOutput> {
    let solution = design_source(&cfg.material, &cfg.mapping, &cfg.targets)?;
    let (mat_lo, mat_hi) = cfg
        .material
        .temp_range(&[cfg.mapping.h_axis(), cfg.mapping.v_axis()])?;
    let t0 = solution.temperature_c;
    let lo = tmin_c.or(cfg.tune.tmin_c).unwrap_or((t0 - 10.0).max(mat_lo));
    let hi = tmax_c.or(cfg.tune.tmax_c).unwrap_or((t0 + 10.0).min(mat_hi));
    if !(lo < hi) {
        return Err(Error::InvalidInput(format!("tuning range [{lo}, {hi}] C is empty")));
    }
    let step = cfg.tune.step_c;
    let count = ((hi - lo) / step).floor() as usize;
    let mut temps: Vec<f64> = (0..=count).map(|k| lo + step * k as f64).collect();
    if temps.last().is_some_and(|&t| hi - t > 1e-9) {
        temps.push(hi);
    }
    if (lo..=hi).contains(&t0) {
        temps.retain(|t| (t - t0).abs() > 1e-9);
        temps.push(t0);
    }
    temps.sort_by(f64::total_cmp);
    let curve = tuning_curve(&cfg.material, &cfg.mapping, &solution, &temps)?;

    let mut csv = comment_header(&header_lines(cfg, &solution));
    csv.push_str("temperature_c,hv_signal_um,hv_idler_um,vh_signal_um,vh_idler_um\n");
    let mut gaps = 0;
    for s in &curve.samples {
        let _ = write!(csv, "{}", s.temperature_c);
        for p in ProcessId::BOTH {
            match s.get(p) {
                Some(pair) => {
                    let _ = write!(csv, ",{},{}", pair.signal_um, pair.idler_um);
                }
                None => {
                    gaps += 1;
                    csv.push_str(",gap,gap");
                }
            }
        }
        csv.push('\n');
    }
    let path = write_atomic(&cfg.output_dir, "tuning.csv", &csv)?;
    Ok(CommandOutput {
        files: vec![path],
        stdout: format!(
            "wrote {} temperatures ({lo} to {hi} C), {gaps} gaps\n",
            curve.samples.len()
        ),
    })
}
