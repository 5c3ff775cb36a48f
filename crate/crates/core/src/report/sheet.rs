//! Datasheet layout. Every number is a `{value, unit}` pair.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use super::config::{DeviceParams, RunConfig};
use super::{Analysis, TOOL_NAME, TOOL_VERSION};
use crate::biphoton::{GridSpec, Reduction};
use crate::grating::{DomainPattern, DualGrating, JitterStats, ReciprocalOrder};
use crate::phasematch::SignalTarget;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quantity<T = f64> {
    pub value: T,
    pub unit: &'static str,
}

fn q<T>(value: T, unit: &'static str) -> Quantity<T> {
    Quantity { value, unit }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Material {
    pub source: String,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SignalEcho {
    Degenerate(&'static str),
    Wavelength(Quantity),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inputs {
    pub mapping_h: String,
    pub mapping_v: String,
    pub pump_wavelength: Quantity,
    pub signal_wavelength: SignalEcho,
    pub orders: [String; 2],
    pub l_min: Quantity<u32>,
    pub l_max: Quantity<u32>,
    pub temp_min: Quantity,
    pub temp_max: Quantity,
    pub crystal_length: Quantity,
    pub d_bulk: Quantity,
    pub pump_power: Quantity,
    pub beam_area: Quantity,
    pub spectrum_grid: GridEcho,
    pub oracle_grid: GridEcho,
    pub seed: Quantity<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridEcho {
    pub span: Quantity,
    pub resolution: Quantity,
}

impl From<GridSpec> for GridEcho {
    fn from(g: GridSpec) -> Self {
        Self {
            span: q(g.span_fwhm, "FWHM"),
            resolution: q(g.points_per_fwhm, "1/FWHM"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Design {
    pub temperature: Quantity,
    pub l: Quantity<u32>,
    pub lambda1: Quantity,
    pub lambda2: Quantity,
    pub period_ratio: Quantity,
    pub duty1: String,
    pub duty2: String,
    pub order_hv: String,
    pub order_vh: String,
    pub g_hv: Quantity,
    pub g_vh: Quantity,
    pub residual_hv: Quantity,
    pub residual_vh: Quantity,
    pub pump_wavelength: Quantity,
    pub signal_wavelength: Quantity,
    pub idler_wavelength: Quantity,
    pub degenerate: bool,
    pub omega_p: Quantity,
    pub omega_s: Quantity,
    pub omega_i: Quantity,
    pub k_p: Quantity,
    pub k_s_h: Quantity,
    pub k_s_v: Quantity,
    pub k_i_h: Quantity,
    pub k_i_v: Quantity,
}

/// Pattern Fourier amplitude at one order against the analytic values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierCheck {
    pub order: String,
    pub spatial_frequency: Quantity,
    /// |𝒢_mn| of the product of square waves, single term.
    pub analytic: Quantity,
    /// |(1/L)∫ g(x) e^{iGx} dx| of the synthesized pattern.
    pub pattern: Quantity,
    /// |Σ 𝒢| over every order sharing this spatial frequency.
    pub aliased: Quantity,
    pub residual: Quantity,
    pub aliased_residual: Quantity,
}

impl FourierCheck {
    pub fn new(order: ReciprocalOrder, freq: f64, analytic: f64, pattern: f64, aliased: f64) -> Self {
        Self {
            order: order.to_string(),
            spatial_frequency: q(freq, "rad/um"),
            analytic: q(analytic, "1"),
            pattern: q(pattern, "1"),
            aliased: q(aliased, "1"),
            residual: q((pattern - analytic).abs(), "1"),
            aliased_residual: q((pattern - aliased).abs(), "1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JitterRow {
    pub order: String,
    pub sigma: Quantity,
    pub trials: Quantity<usize>,
    pub mean_abs: Quantity,
    pub std_abs: Quantity,
    pub crossing_rate: Quantity,
    pub warning: Option<String>,
}

impl JitterRow {
    pub fn new(order: ReciprocalOrder, s: &JitterStats) -> Self {
        Self {
            order: order.to_string(),
            sigma: q(s.sigma_um, "um"),
            trials: q(s.trials, "1"),
            mean_abs: q(s.mean_abs, "1"),
            std_abs: q(s.std_abs, "1"),
            crossing_rate: q(s.crossing_rate, "1"),
            warning: s.warning.as_ref().map(|w| w.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternAudit {
    pub length: Quantity,
    pub domain_walls: Quantity<usize>,
    pub min_domain: Quantity,
    pub half_lambda1: Quantity,
    pub working_orders: Vec<FourierCheck>,
    pub audit_max_order: Quantity<i32>,
    pub max_residual: Quantity,
    pub max_aliased_residual: Quantity,
    pub jitter: Vec<JitterRow>,
}

impl PatternAudit {
    pub(crate) fn new(
        pattern: &DomainPattern,
        g: &DualGrating,
        min_domain: f64,
        working: Vec<FourierCheck>,
        max_order: i32,
        worst: (f64, f64),
        jitter: Vec<JitterRow>,
    ) -> Self {
        Self {
            length: q(pattern.length(), "um"),
            domain_walls: q(pattern.boundaries().len(), "1"),
            min_domain: q(min_domain, "um"),
            half_lambda1: q(g.lambda1() / 2.0, "um"),
            working_orders: working,
            audit_max_order: q(max_order, "1"),
            max_residual: q(worst.0, "1"),
            max_aliased_residual: q(worst.1, "1"),
            jitter,
        }
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "pattern: {:.3} um, {} walls, min domain {:.6} um (Λ1/2 = {:.6} um)",
            self.length.value, self.domain_walls.value, self.min_domain.value, self.half_lambda1.value
        );
        for c in &self.working_orders {
            let _ = writeln!(
                s,
                "order {}: |G| analytic {:.6}, pattern {:.6}, aliased {:.6}; residual {:.2e}, aliased residual {:.2e}",
                c.order, c.analytic.value, c.pattern.value, c.aliased.value, c.residual.value, c.aliased_residual.value
            );
        }
        let _ = writeln!(
            s,
            "all orders |m|,|n| <= {}: max residual {:.2e}, max aliased residual {:.2e}",
            self.audit_max_order.value, self.max_residual.value, self.max_aliased_residual.value
        );
        for j in &self.jitter {
            let _ = writeln!(
                s,
                "jitter sigma {} um: mean |G{}| {:.6} ± {:.6} over {} trials",
                j.sigma.value, j.order, j.mean_abs.value, j.std_abs.value, j.trials.value
            );
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figures {
    pub s_hv: Quantity,
    pub s_vh: Quantity,
    pub bandwidth_hv: Quantity,
    pub bandwidth_vh: Quantity,
    pub bandwidth_hv_ghz: Quantity,
    pub bandwidth_vh_ghz: Quantity,
    pub reduction_hv: Quantity<Reduction>,
    pub reduction_vh: Quantity<Reduction>,
    pub d_eff_hv: Quantity,
    pub d_eff_vh: Quantity,
    pub delta_n: Quantity,
    pub amplitude_ratio: Quantity,
    pub concurrence: Quantity,
    pub concurrence_oracle: Quantity,
    pub rate: Quantity,
    pub brightness: Quantity,
    pub correlation_time_transit: Quantity,
    pub correlation_time_bandwidth: Quantity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Datasheet {
    pub tool: Tool,
    pub config_sha256: String,
    pub material: Material,
    pub inputs: Inputs,
    pub design: Design,
    pub pattern_audit: PatternAudit,
    pub figures: Figures,
    pub warnings: Vec<String>,
    pub notes: Vec<&'static str>,
}

const NOTES: [&str; 4] = [
    "brightness uses the mean of the two component FWHM bandwidths",
    "correlation_time_transit = L*max(S_HV, S_VH) is the headline correlation time",
    "pattern residuals compare against the single-term coefficient; with a rational period ratio other orders alias onto the same spatial frequency, which the aliased column sums",
    "amplitude_ratio is |A_HV|/|A_VH|",
];

fn echo_device(d: &DeviceParams) -> (Quantity, Quantity, Quantity, Quantity) {
    (
        q(d.length_mm, "mm"),
        q(d.d_pm_per_v, "pm/V"),
        q(d.pump_power_mw, "mW"),
        q(d.beam_area_mm2, "mm^2"),
    )
}

impl Datasheet {
    pub(crate) fn new(cfg: &RunConfig, a: &Analysis, audit: PatternAudit) -> Self {
        let t = &cfg.targets;
        let (length, d_bulk, power, area) = echo_device(&cfg.device);
        let inputs = Inputs {
            mapping_h: cfg.mapping.h_axis().to_string(),
            mapping_v: cfg.mapping.v_axis().to_string(),
            pump_wavelength: q(t.pump_um, "um"),
            signal_wavelength: match t.signal {
                SignalTarget::Degenerate => SignalEcho::Degenerate("degenerate"),
                SignalTarget::Wavelength(s) => SignalEcho::Wavelength(q(s, "um")),
            },
            orders: [t.orders[0].to_string(), t.orders[1].to_string()],
            l_min: q(t.l_range.0, "1"),
            l_max: q(t.l_range.1, "1"),
            temp_min: q(t.temp_interval_c.0, "C"),
            temp_max: q(t.temp_interval_c.1, "C"),
            crystal_length: length,
            d_bulk,
            pump_power: power,
            beam_area: area,
            spectrum_grid: cfg.grid.into(),
            oracle_grid: cfg.oracle_grid.into(),
            seed: q(cfg.seed, "1"),
        };

        let s = &a.solution;
        let g = &s.grating;
        let design = Design {
            temperature: q(s.temperature_c, "C"),
            l: q(s.l, "1"),
            lambda1: q(g.lambda1(), "um"),
            lambda2: q(g.lambda2(), "um"),
            period_ratio: q(g.lambda2() / g.lambda1(), "1"),
            duty1: g.duty1().to_string(),
            duty2: g.duty2().to_string(),
            order_hv: s.order_hv.to_string(),
            order_vh: s.order_vh.to_string(),
            g_hv: q(s.g_hv, "rad/um"),
            g_vh: q(s.g_vh, "rad/um"),
            residual_hv: q(s.residual_hv, "rad/um"),
            residual_vh: q(s.residual_vh, "rad/um"),
            pump_wavelength: q(s.pump_um, "um"),
            signal_wavelength: q(s.signal_um, "um"),
            idler_wavelength: q(s.idler_um, "um"),
            degenerate: s.degenerate,
            omega_p: q(s.omega_p, "rad/s"),
            omega_s: q(s.omega_s, "rad/s"),
            omega_i: q(s.omega_i, "rad/s"),
            k_p: q(s.k_p, "rad/um"),
            k_s_h: q(s.k_s_h, "rad/um"),
            k_s_v: q(s.k_s_v, "rad/um"),
            k_i_h: q(s.k_i_h, "rad/um"),
            k_i_v: q(s.k_i_v, "rad/um"),
        };

        let f = &a.figures;
        let nl = a.device.nonlinear();
        let figures = Figures {
            s_hv: q(f.s_hv, "s/m"),
            s_vh: q(f.s_vh, "s/m"),
            bandwidth_hv: q(f.bandwidth_hv, "rad/s"),
            bandwidth_vh: q(f.bandwidth_vh, "rad/s"),
            bandwidth_hv_ghz: q(f.bandwidth_hv / (2.0 * PI) * 1e-9, "GHz"),
            bandwidth_vh_ghz: q(f.bandwidth_vh / (2.0 * PI) * 1e-9, "GHz"),
            reduction_hv: q(f.reduction_hv, "1"),
            reduction_vh: q(f.reduction_vh, "1"),
            d_eff_hv: q(nl.d_eff_hv, "pm/V"),
            d_eff_vh: q(nl.d_eff_vh, "pm/V"),
            delta_n: q(f.delta_n, "1"),
            amplitude_ratio: q(f.amplitude_hv / f.amplitude_vh, "1"),
            concurrence: q(f.concurrence, "1"),
            concurrence_oracle: q(f.concurrence_oracle, "1"),
            rate: q(f.rate, "pairs/s"),
            brightness: q(f.brightness, "pairs/(s GHz mW)"),
            correlation_time_transit: q(f.correlation_time.transit_s, "s"),
            correlation_time_bandwidth: q(f.correlation_time.bandwidth_s, "s"),
        };

        let warnings = s
            .warnings
            .iter()
            .chain(&f.warnings)
            .map(|w| w.to_string())
            .chain(audit.jitter.iter().filter_map(|j| j.warning.clone()))
            .collect();

        Self {
            tool: Tool {
                name: TOOL_NAME,
                version: TOOL_VERSION,
            },
            config_sha256: cfg.config_hash.clone(),
            material: Material {
                source: cfg.material_source.clone(),
                provenance: cfg.material.provenance().to_string(),
            },
            inputs,
            design,
            pattern_audit: audit,
            figures,
            warnings,
            notes: NOTES.to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("datasheet serializes");
        s.push('\n');
        s
    }

    /// Human-readable summary.
    pub fn summary(&self) -> String {
        let d = &self.design;
        let f = &self.figures;
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.tool.name, self.tool.version);
        let _ = writeln!(s, "config sha256: {}", self.config_sha256);
        let _ = writeln!(s, "material: {}", self.material.provenance);
        let _ = writeln!(
            s,
            "wavelengths: pump {} um -> signal {:.6} um + idler {:.6} um",
            d.pump_wavelength.value, d.signal_wavelength.value, d.idler_wavelength.value
        );
        let _ = writeln!(s, "temperature: {:.4} C", d.temperature.value);
        let _ = writeln!(
            s,
            "grating: Λ1 = {:.5} um (D1 = {}), Λ2 = {:.4} um (D2 = {}), l = {}",
            d.lambda1.value, d.duty1, d.lambda2.value, d.duty2, d.l.value
        );
        let _ = writeln!(
            s,
            "reciprocals: HV {} -> {:.4} rad/um, VH {} -> {:.4} rad/um",
            d.order_hv, d.g_hv.value, d.order_vh, d.g_vh.value
        );
        let _ = writeln!(
            s,
            "bandwidth: HV {:.4} GHz, VH {:.4} GHz",
            f.bandwidth_hv_ghz.value, f.bandwidth_vh_ghz.value
        );
        let red = |r: Reduction| r.value().map_or("unbounded".to_string(), |v| format!("{v:.2}"));
        let _ = writeln!(
            s,
            "forward/backward reduction: HV {}, VH {}",
            red(f.reduction_hv.value),
            red(f.reduction_vh.value)
        );
        let _ = writeln!(
            s,
            "concurrence: {:.6} (density-matrix check {:.6})",
            f.concurrence.value, f.concurrence_oracle.value
        );
        let _ = writeln!(s, "pair rate: {:.2} pairs/s", f.rate.value);
        let _ = writeln!(s, "spectral brightness: {:.2} pairs/(s GHz mW)", f.brightness.value);
        let _ = writeln!(
            s,
            "correlation time: {:.1} ps (transit), {:.1} ps (2π/Δω)",
            f.correlation_time_transit.value * 1e12,
            f.correlation_time_bandwidth.value * 1e12
        );
        s.push_str(&self.pattern_audit.summary());
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}
