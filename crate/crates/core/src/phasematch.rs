//! Quasi-phase-matching of the two concurrent backward-wave processes.
//!
//! Pump (H) and signal travel along +x, the idler along -x. For the process
//! with signal polarization q and idler polarization q' the wave-vector
//! residual is
//!
//! `Δk = k_p,H - k_s,q + k_i,q' - G`
//!
//! (the idler enters with a plus sign because it counter-propagates).
//! Process `HV` has an H signal and V idler, `VH` the opposite.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::angular_frequency;
use crate::dispersion::{DispersionModel, Polarization, PolarizationMapping};
use crate::error::{Error, Result};
use crate::grating::{reciprocal, DualGrating, ReciprocalOrder};
use crate::roots::{all_roots, brent, BrentOptions};
use crate::warnings::Warning;

/// Largest Λ₂ accepted when inverting reciprocals (1 m).
pub const DEFAULT_PERIOD_CAP_UM: f64 = 1e6;
/// Residual bound every returned design satisfies (rad/um).
pub const RESIDUAL_TOLERANCE: f64 = 1e-6;
/// Temperature scan step used to bracket roots (°C).
const TEMP_SCAN_STEP: f64 = 0.25;

/// Which polarization goes to the signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ProcessId {
    /// H signal, V idler.
    HV,
    /// V signal, H idler.
    VH,
}

impl ProcessId {
    pub const BOTH: [ProcessId; 2] = [ProcessId::HV, ProcessId::VH];

    pub fn signal_polarization(self) -> Polarization {
        match self {
            ProcessId::HV => Polarization::H,
            ProcessId::VH => Polarization::V,
        }
    }

    pub fn idler_polarization(self) -> Polarization {
        self.signal_polarization().orthogonal()
    }
}

/// One SPDC process: vacuum wavelengths (um) and polarization assignment.
/// The pump is always H; the signal co-propagates with it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProcessSpec {
    pub pump_um: f64,
    pub signal_um: f64,
    pub idler_um: f64,
    pub process: ProcessId,
}

impl ProcessSpec {
    /// Idler from energy conservation.
    pub fn new(pump_um: f64, signal_um: f64, process: ProcessId) -> Result<Self> {
        if !(pump_um > 0.0 && signal_um > pump_um) {
            return Err(Error::InvalidInput(format!(
                "signal wavelength {signal_um} um must exceed the pump wavelength {pump_um} um"
            )));
        }
        Ok(Self {
            pump_um,
            signal_um,
            idler_um: idler_wavelength(pump_um, signal_um),
            process,
        })
    }

    /// Frequency-degenerate pair; signal and idler are bit-identical.
    pub fn degenerate(pump_um: f64, process: ProcessId) -> Result<Self> {
        if !(pump_um > 0.0) {
            return Err(Error::InvalidInput("pump wavelength must be positive".into()));
        }
        Ok(Self {
            pump_um,
            signal_um: 2.0 * pump_um,
            idler_um: 2.0 * pump_um,
            process,
        })
    }

    /// Explicit wavelengths, checked against 1/λp = 1/λs + 1/λi.
    pub fn with_idler(pump_um: f64, signal_um: f64, idler_um: f64, process: ProcessId) -> Result<Self> {
        let lhs = 1.0 / pump_um;
        let rhs = 1.0 / signal_um + 1.0 / idler_um;
        if !((lhs - rhs).abs() <= 1e-9 * lhs) {
            return Err(Error::InvalidInput(format!(
                "energy conservation violated: 1/{pump_um} != 1/{signal_um} + 1/{idler_um}"
            )));
        }
        Ok(Self {
            pump_um,
            signal_um,
            idler_um,
            process,
        })
    }
}

/// λi such that 1/λp = 1/λs + 1/λi.
pub fn idler_wavelength(pump_um: f64, signal_um: f64) -> f64 {
    1.0 / (1.0 / pump_um - 1.0 / signal_um)
}

/// Signal wavelength target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalTarget {
    Degenerate,
    Wavelength(f64),
}

impl SignalTarget {
    fn spec(self, pump_um: f64, process: ProcessId) -> Result<ProcessSpec> {
        match self {
            SignalTarget::Degenerate => ProcessSpec::degenerate(pump_um, process),
            SignalTarget::Wavelength(s) => ProcessSpec::new(pump_um, s, process),
        }
    }
}

/// Signed residual Δk (rad/um) of `proc` against a grating reciprocal
/// `grating_freq` at temperature `temp_c`.
pub fn delta_k(
    model: &DispersionModel,
    mapping: &PolarizationMapping,
    proc: &ProcessSpec,
    grating_freq: f64,
    temp_c: f64,
) -> Result<f64> {
    let kp = model.wavenumber(mapping.axis(Polarization::H), proc.pump_um, temp_c)?;
    let ks = model.wavenumber(mapping.axis(proc.process.signal_polarization()), proc.signal_um, temp_c)?;
    let ki = model.wavenumber(mapping.axis(proc.process.idler_polarization()), proc.idler_um, temp_c)?;
    Ok(kp - ks + ki - grating_freq)
}

/// Reciprocals (G_hv, G_vh) in rad/um that phase-match both processes.
pub fn required_reciprocals(
    model: &DispersionModel,
    mapping: &PolarizationMapping,
    pump_um: f64,
    signal: SignalTarget,
    temp_c: f64,
) -> Result<(f64, f64)> {
    let hv = signal.spec(pump_um, ProcessId::HV)?;
    let vh = signal.spec(pump_um, ProcessId::VH)?;
    Ok((
        delta_k(model, mapping, &hv, 0.0, temp_c)?,
        delta_k(model, mapping, &vh, 0.0, temp_c)?,
    ))
}

/// Periods (Λ₁, Λ₂) in um whose orders (m, -1) and (m, +1) give `g_low` and
/// `g_high`.
pub fn periods_from_reciprocals(g_low: f64, g_high: f64, m: u32) -> Result<(f64, f64)> {
    periods_from_reciprocals_capped(g_low, g_high, m, DEFAULT_PERIOD_CAP_UM)
}

pub fn periods_from_reciprocals_capped(
    g_low: f64,
    g_high: f64,
    m: u32,
    cap_um: f64,
) -> Result<(f64, f64)> {
    if m == 0 {
        return Err(Error::InvalidInput("order m must be >= 1".into()));
    }
    if !(g_low > 0.0 && g_low < g_high) {
        return Err(Error::InvalidInput(format!(
            "reciprocals must satisfy 0 < G_low < G_high, got {g_low}, {g_high}"
        )));
    }
    let lambda1 = 4.0 * PI * m as f64 / (g_low + g_high);
    let lambda2 = 4.0 * PI / (g_high - g_low);
    if lambda2 > cap_um {
        return Err(Error::InvalidInput(format!(
            "reciprocals too close: Λ2 = {lambda2} um exceeds the {cap_um} um cap"
        )));
    }
    if lambda1 >= lambda2 {
        return Err(Error::InvalidInput(format!(
            "inverted periods: Λ1 = {lambda1} um >= Λ2 = {lambda2} um"
        )));
    }
    Ok((lambda1, lambda2))
}

/// Solves m_a/Λ₁ + n_a/Λ₂ = G_a/2π, m_b/Λ₁ + n_b/Λ₂ = G_b/2π. Returns
/// `None` unless 0 < Λ₁ < Λ₂ ≤ cap.
fn periods_for_orders(
    (oa, ga): (ReciprocalOrder, f64),
    (ob, gb): (ReciprocalOrder, f64),
) -> Option<(f64, f64)> {
    let det = (oa.m as f64) * (ob.n as f64) - (oa.n as f64) * (ob.m as f64);
    if det == 0.0 {
        return None;
    }
    let (ya, yb) = (ga / (2.0 * PI), gb / (2.0 * PI));
    let inv1 = (ya * ob.n as f64 - yb * oa.n as f64) / det;
    let inv2 = (oa.m as f64 * yb - ob.m as f64 * ya) / det;
    if !(inv1 > 0.0 && inv2 > 0.0 && inv2 < inv1) {
        return None;
    }
    let (l1, l2) = (1.0 / inv1, 1.0 / inv2);
    (l2 <= DEFAULT_PERIOD_CAP_UM).then_some((l1, l2))
}

/// Design request.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignTargets {
    pub pump_um: f64,
    pub signal: SignalTarget,
    /// The two reciprocal orders. Which one serves which process is decided
    /// by the solver (the one giving Λ₁ < Λ₂; the listed order wins ties).
    pub orders: [ReciprocalOrder; 2],
    /// Temperature search interval (°C); its centre is the preferred
    /// operating point.
    pub temp_interval_c: (f64, f64),
    /// Inclusive range of the structural integer l.
    pub l_range: (u32, u32),
}

impl DesignTargets {
    pub fn new(
        pump_um: f64,
        signal: SignalTarget,
        orders: [ReciprocalOrder; 2],
        temp_interval_c: (f64, f64),
        l_range: (u32, u32),
    ) -> Result<Self> {
        if orders[0].product().abs() != orders[1].product().abs() {
            return Err(Error::InvalidInput(format!(
                "orders {} and {} violate m1*n1 = ±m2*n2",
                orders[0], orders[1]
            )));
        }
        if !(temp_interval_c.0 < temp_interval_c.1) {
            return Err(Error::InvalidInput(format!(
                "temperature interval [{}, {}] is empty",
                temp_interval_c.0, temp_interval_c.1
            )));
        }
        if !(l_range.0 >= 3 && l_range.0 <= l_range.1) {
            return Err(Error::InvalidInput(format!(
                "l range [{}, {}] must be non-empty with l >= 3",
                l_range.0, l_range.1
            )));
        }
        signal.spec(pump_um, ProcessId::HV)?;
        Ok(Self {
            pump_um,
            signal,
            orders,
            temp_interval_c,
            l_range,
        })
    }

    /// Default orders (3, 1) / (3, -1), 20–120 °C, l ∈ [3, 64].
    pub fn with_defaults(pump_um: f64, signal: SignalTarget) -> Result<Self> {
        Self::new(
            pump_um,
            signal,
            [ReciprocalOrder { m: 3, n: 1 }, ReciprocalOrder { m: 3, n: -1 }],
            (20.0, 120.0),
            (3, 64),
        )
    }

    pub fn center_c(&self) -> f64 {
        0.5 * (self.temp_interval_c.0 + self.temp_interval_c.1)
    }
}

/// Order assignment and periods at one temperature.
#[derive(Debug, Clone, Copy)]
struct Geometry {
    order_hv: ReciprocalOrder,
    order_vh: ReciprocalOrder,
    g_hv: f64,
    g_vh: f64,
    lambda1: f64,
    lambda2: f64,
}

fn geometry(
    model: &DispersionModel,
    mapping: &PolarizationMapping,
    targets: &DesignTargets,
    temp_c: f64,
) -> Result<Geometry> {
    let (g_hv, g_vh) = required_reciprocals(model, mapping, targets.pump_um, targets.signal, temp_c)?;
    let [a, b] = targets.orders;
    for (order_hv, order_vh) in [(a, b), (b, a)] {
        if let Some((lambda1, lambda2)) = periods_for_orders((order_hv, g_hv), (order_vh, g_vh)) {
            return Ok(Geometry {
                order_hv,
                order_vh,
                g_hv,
                g_vh,
                lambda1,
                lambda2,
            });
        }
    }
    Err(Error::NoSolution(format!(
        "orders {a} / {b} cannot produce reciprocals {g_hv:.6} / {g_vh:.6} rad/um with 0 < Λ1 < Λ2"
    )))
}

fn check_temp_interval(
    model: &DispersionModel,
    mapping: &PolarizationMapping,
    (lo, hi): (f64, f64),
) -> Result<()> {
    let (tmin, tmax) = model.temp_range(&[mapping.h_axis(), mapping.v_axis()])?;
    for t in [lo, hi] {
        if t < tmin || t > tmax {
            return Err(Error::OutOfRange {
                quantity: "temperature interval (C)",
                value: t,
                min: tmin,
                max: tmax,
            });
        }
    }
    Ok(())
}

/// Period ratio Λ₂/Λ₁ at `temp_c` for the given targets.
pub fn period_ratio(
    model: &DispersionModel,
    mapping: &PolarizationMapping,
    targets: &DesignTargets,
    temp_c: f64,
) -> Result<f64> {
    let g = geometry(model, mapping, targets, temp_c)?;
    Ok(g.lambda2 / g.lambda1)
}

/// Temperature root for one structural integer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TemperatureRoot {
    pub l: u32,
    pub temperature_c: f64,
    /// Every root found in the interval.
    pub all_roots_c: Vec<f64>,
}

impl TemperatureRoot {
    pub fn warning(&self) -> Option<Warning> {
        (self.all_roots_c.len() > 1).then(|| Warning::MultipleTemperatureRoots {
            l: self.l,
            roots_c: self.all_roots_c.clone(),
            chosen_c: self.temperature_c,
        })
    }
}

fn root_options() -> BrentOptions {
    BrentOptions {
        f_tol: 1e-9,
        x_tol: 1e-13,
        max_iter: 200,
    }
}

fn scan_steps((lo, hi): (f64, f64)) -> usize {
    ((hi - lo) / TEMP_SCAN_STEP).ceil().max(1.0) as usize
}

/// Finds T in the targets' interval where Λ₂/Λ₁ = l/2. With several roots
/// the one nearest the interval centre is chosen.
pub fn solve_temperature_for_ratio(
    model: &DispersionModel,
    mapping: &PolarizationMapping,
    targets: &DesignTargets,
    l: u32,
) -> Result<TemperatureRoot> {
    check_temp_interval(model, mapping, targets.temp_interval_c)?;
    let target = l as f64 / 2.0;
    let mut failure = None;
    let roots = all_roots(
        |t| match period_ratio(model, mapping, targets, t) {
            Ok(r) => r - target,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        targets.temp_interval_c.0,
        targets.temp_interval_c.1,
        scan_steps(targets.temp_interval_c),
        root_options(),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let roots = roots.map_err(|e| Error::Numerical(e.to_string()))?;
    pick_root(l, roots, targets.center_c())
}

fn pick_root(l: u32, roots: Vec<f64>, center: f64) -> Result<TemperatureRoot> {
    let best = roots
        .iter()
        .copied()
        .min_by(|a, b| (a - center).abs().total_cmp(&(b - center).abs()))
        .ok_or_else(|| Error::NoSolution(format!("no design at l = {l}: Λ2/Λ1 never reaches {}", l as f64 / 2.0)))?;
    Ok(TemperatureRoot {
        l,
        temperature_c: best,
        all_roots_c: roots,
    })
}

/// A complete two-process source design.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignSolution {
    pub temperature_c: f64,
    pub pump_um: f64,
    pub signal_um: f64,
    pub idler_um: f64,
    pub degenerate: bool,
    pub grating: DualGrating,
    pub l: u32,
    pub order_hv: ReciprocalOrder,
    pub order_vh: ReciprocalOrder,
    /// Reciprocals required by each process at the design temperature.
    pub g_hv: f64,
    pub g_vh: f64,
    /// Central angular frequencies (rad/s).
    pub omega_p: f64,
    pub omega_s: f64,
    pub omega_i: f64,
    /// Central wave numbers (rad/um).
    pub k_p: f64,
    pub k_s_h: f64,
    pub k_s_v: f64,
    pub k_i_h: f64,
    pub k_i_v: f64,
    /// Δk of each process against the built grating (rad/um).
    pub residual_hv: f64,
    pub residual_vh: f64,
    pub warnings: Vec<Warning>,
}

impl DesignSolution {
    pub fn process(&self, process: ProcessId) -> ProcessSpec {
        ProcessSpec {
            pump_um: self.pump_um,
            signal_um: self.signal_um,
            idler_um: self.idler_um,
            process,
        }
    }

    pub fn order(&self, process: ProcessId) -> ReciprocalOrder {
        match process {
            ProcessId::HV => self.order_hv,
            ProcessId::VH => self.order_vh,
        }
    }

    /// Reciprocal the built grating provides to `process` (rad/um).
    pub fn grating_reciprocal(&self, process: ProcessId) -> f64 {
        reciprocal(self.order(process), &self.grating)
    }
}

/// Sweeps l over the targets' range, solves the temperature for each, and
/// keeps the solution nearest the centre of the temperature interval (ties go
/// to the smaller l).
pub fn design_source(
    model: &DispersionModel,
    mapping: &PolarizationMapping,
    targets: &DesignTargets,
) -> Result<DesignSolution> {
    check_temp_interval(model, mapping, targets.temp_interval_c)?;
    let (lo, hi) = targets.temp_interval_c;
    let steps = scan_steps(targets.temp_interval_c);

    // The ratio curve is shared by every l, so sample it once.
    let temps: Vec<f64> = (0..=steps)
        .map(|k| if k == steps { hi } else { lo + (hi - lo) * k as f64 / steps as f64 })
        .collect();
    let ratios = temps
        .iter()
        .map(|&t| period_ratio(model, mapping, targets, t))
        .collect::<Result<Vec<_>>>()?;

    let center = targets.center_c();
    let mut best: Option<TemperatureRoot> = None;
    for l in targets.l_range.0..=targets.l_range.1 {
        let target = l as f64 / 2.0;
        let mut roots = Vec::new();
        for k in 0..steps {
            let (f0, f1) = (ratios[k] - target, ratios[k + 1] - target);
            if f0 == 0.0 {
                roots.push(temps[k]);
            } else if f0.signum() != f1.signum() && f1 != 0.0 {
                let t = brent(
                    |t| {
                        period_ratio(model, mapping, targets, t)
                            .map(|r| r - target)
                            .unwrap_or(f64::NAN)
                    },
                    temps[k],
                    temps[k + 1],
                    root_options(),
                )
                .map_err(|e| Error::Numerical(format!("temperature solve at l = {l}: {e}")))?;
                roots.push(t);
            }
        }
        if ratios[steps] - target == 0.0 {
            roots.push(temps[steps]);
        }
        let Ok(root) = pick_root(l, roots, center) else {
            continue;
        };
        let better = match &best {
            None => true,
            Some(b) => (root.temperature_c - center).abs() < (b.temperature_c - center).abs(),
        };
        if better {
            best = Some(root);
        }
    }
    let root = best.ok_or_else(|| {
        Error::NoSolution(format!(
            "no l in [{}, {}] admits a design between {lo} and {hi} C",
            targets.l_range.0, targets.l_range.1
        ))
    })?;
    build_solution(model, mapping, targets, &root)
}

fn build_solution(
    model: &DispersionModel,
    mapping: &PolarizationMapping,
    targets: &DesignTargets,
    root: &TemperatureRoot,
) -> Result<DesignSolution> {
    let t = root.temperature_c;
    let geo = geometry(model, mapping, targets, t)?;
    let grating = DualGrating::constrained(geo.lambda1, root.l)?;
    let hv = targets.signal.spec(targets.pump_um, ProcessId::HV)?;
    let residual_hv = delta_k(model, mapping, &hv, reciprocal(geo.order_hv, &grating), t)?;
    let vh = targets.signal.spec(targets.pump_um, ProcessId::VH)?;
    let residual_vh = delta_k(model, mapping, &vh, reciprocal(geo.order_vh, &grating), t)?;
    if !(residual_hv.abs() < RESIDUAL_TOLERANCE && residual_vh.abs() < RESIDUAL_TOLERANCE) {
        return Err(Error::Numerical(format!(
            "design residuals {residual_hv:e} / {residual_vh:e} rad/um exceed {RESIDUAL_TOLERANCE:e}"
        )));
    }

    let (h, v) = (mapping.h_axis(), mapping.v_axis());
    let omega_p = angular_frequency(hv.pump_um);
    let omega_s = angular_frequency(hv.signal_um);
    let degenerate = matches!(targets.signal, SignalTarget::Degenerate);
    let omega_i = if degenerate { omega_s } else { omega_p - omega_s };

    let mut warnings: Vec<Warning> = root.warning().into_iter().collect();
    warnings.extend(grating.warnings());

    Ok(DesignSolution {
        temperature_c: t,
        pump_um: hv.pump_um,
        signal_um: hv.signal_um,
        idler_um: hv.idler_um,
        degenerate,
        grating,
        l: root.l,
        order_hv: geo.order_hv,
        order_vh: geo.order_vh,
        g_hv: geo.g_hv,
        g_vh: geo.g_vh,
        omega_p,
        omega_s,
        omega_i,
        k_p: model.wavenumber(h, hv.pump_um, t)?,
        k_s_h: model.wavenumber(h, hv.signal_um, t)?,
        k_s_v: model.wavenumber(v, hv.signal_um, t)?,
        k_i_h: model.wavenumber(h, hv.idler_um, t)?,
        k_i_v: model.wavenumber(v, hv.idler_um, t)?,
        residual_hv,
        residual_vh,
        warnings,
    })
}

/// Phase-matched wavelengths of one process at one temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TunedPair {
    pub signal_um: f64,
    pub idler_um: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuningSample {
    pub temperature_c: f64,
    /// `None` where no phase-matched wavelength exists near the design.
    pub hv: Option<TunedPair>,
    pub vh: Option<TunedPair>,
}

impl TuningSample {
    pub fn get(&self, process: ProcessId) -> Option<TunedPair> {
        match process {
            ProcessId::HV => self.hv,
            ProcessId::VH => self.vh,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuningCurve {
    pub samples: Vec<TuningSample>,
}

/// Half-width of the signal-wavelength search window (um).
const TUNING_WINDOW_UM: f64 = 0.05;

/// Phase-matched signal/idler wavelengths of the fixed grating in `solution`
/// at each temperature in `temps_c` (sorted ascending in the result).
pub fn tuning_curve(
    model: &DispersionModel,
    mapping: &PolarizationMapping,
    solution: &DesignSolution,
    temps_c: &[f64],
) -> Result<TuningCurve> {
    let (tmin, tmax) = model.temp_range(&[mapping.h_axis(), mapping.v_axis()])?;
    let (lmin, lmax) = model.lambda_range(&[mapping.h_axis(), mapping.v_axis()])?;
    let mut temps = temps_c.to_vec();
    temps.sort_by(f64::total_cmp);
    temps.dedup();

    let mut samples = Vec::with_capacity(temps.len());
    for &t in &temps {
        if !(t >= tmin && t <= tmax) {
            return Err(Error::OutOfRange {
                quantity: "temperature (C)",
                value: t,
                min: tmin,
                max: tmax,
            });
        }
        let solve = |process: ProcessId| -> Result<Option<TunedPair>> {
            if t == solution.temperature_c {
                return Ok(Some(TunedPair {
                    signal_um: solution.signal_um,
                    idler_um: solution.idler_um,
                }));
            }
            let g = solution.grating_reciprocal(process);
            let pump = solution.pump_um;
            // Keep both photons inside the dispersion window.
            let inset = 1e-9;
            let s_lo = (solution.signal_um - TUNING_WINDOW_UM)
                .max(lmin)
                .max(idler_wavelength(pump, lmax))
                + inset;
            let s_hi = (solution.signal_um + TUNING_WINDOW_UM).min(lmax);
            let s_hi = if lmin > pump {
                s_hi.min(idler_wavelength(pump, lmin))
            } else {
                s_hi
            } - inset;
            if !(s_lo < s_hi) {
                return Ok(None);
            }
            let residual = |s: f64| {
                let spec = ProcessSpec {
                    pump_um: pump,
                    signal_um: s,
                    idler_um: idler_wavelength(pump, s),
                    process,
                };
                delta_k(model, mapping, &spec, g, t).unwrap_or(f64::NAN)
            };
            let opts = BrentOptions {
                f_tol: 1e-10,
                x_tol: 1e-15,
                max_iter: 200,
            };
            let roots = all_roots(residual, s_lo, s_hi, 200, opts)
                .map_err(|e| Error::Numerical(format!("tuning solve at {t} C: {e}")))?;
            Ok(roots
                .into_iter()
                .min_by(|a, b| (a - solution.signal_um).abs().total_cmp(&(b - solution.signal_um).abs()))
                .map(|s| TunedPair {
                    signal_um: s,
                    idler_um: idler_wavelength(pump, s),
                }))
        };
        let hv = solve(ProcessId::HV)?;
        let vh = solve(ProcessId::VH)?;
        samples.push(TuningSample {
            temperature_c: t,
            hv,
            vh,
        });
    }
    Ok(TuningCurve { samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::CrystalAxis;
    use proptest::prelude::*;

    /// Wavelength-independent indices, linear in temperature:
    /// n_z = 1.85 + 1e-4 τ, n_y = 1.75 + 0.6e-4 τ (τ = T - 25).
    fn flat_model() -> DispersionModel {
        DispersionModel::from_toml_str(
            r#"
provenance = "synthetic"
[y]
form = "cauchy"
coefficients = [1.75]
thermal_coefficients = [0.6e-4, 0.0, 0.0, 0.0]
lambda_range_um = [0.3, 3.0]
temp_range_c = [-50.0, 250.0]
[z]
form = "cauchy"
coefficients = [1.85]
thermal_coefficients = [1.0e-4, 0.0, 0.0, 0.0]
lambda_range_um = [0.3, 3.0]
temp_range_c = [-50.0, 250.0]
"#,
        )
        .unwrap()
    }

    fn ktp() -> DispersionModel {
        DispersionModel::from_toml_str(include_str!("../data/ktp.toml")).unwrap()
    }

    #[test]
    fn energy_conservation_checked() {
        assert!(ProcessSpec::with_idler(0.532, 0.8073, 1.56, ProcessId::HV).is_err());
        let p = ProcessSpec::new(0.532, 0.8073, ProcessId::HV).unwrap();
        assert!(ProcessSpec::with_idler(0.532, 0.8073, p.idler_um, ProcessId::HV).is_ok());
        assert!(ProcessSpec::new(0.8, 0.5, ProcessId::HV).is_err());
    }

    #[test]
    fn removing_grating_shifts_residual_by_g() {
        let m = ktp();
        let map = PolarizationMapping::default();
        let p = ProcessSpec::degenerate(0.655, ProcessId::HV).unwrap();
        let with = delta_k(&m, &map, &p, 17.47, 75.0).unwrap();
        let without = delta_k(&m, &map, &p, 0.0, 75.0).unwrap();
        assert!((without - with - 17.47).abs() < 1e-12);
        assert!((without - 17.47).abs() < 0.02, "{without}");
    }

    #[test]
    fn idler_sign_convention() {
        let m = ktp();
        let map = PolarizationMapping::default();
        let p = ProcessSpec::new(0.532, 0.8073, ProcessId::VH).unwrap();
        let backward = delta_k(&m, &map, &p, 0.0, 75.5).unwrap();
        let kp = m.wavenumber(CrystalAxis::Z, 0.532, 75.5).unwrap();
        let ks = m.wavenumber(CrystalAxis::Y, 0.8073, 75.5).unwrap();
        let ki = m.wavenumber(CrystalAxis::Z, p.idler_um, 75.5).unwrap();
        let forward = kp - ks - ki;
        assert!((backward - forward - 2.0 * ki).abs() < 1e-12);
    }

    #[test]
    fn degenerate_reciprocal_difference() {
        let m = ktp();
        let map = PolarizationMapping::default();
        let (hv, vh) = required_reciprocals(&m, &map, 0.655, SignalTarget::Degenerate, 75.0).unwrap();
        let kh = m.wavenumber(CrystalAxis::Z, 1.31, 75.0).unwrap();
        let kv = m.wavenumber(CrystalAxis::Y, 1.31, 75.0).unwrap();
        assert!((vh - hv - 2.0 * (kh - kv)).abs() < 1e-12);
        let kp = m.wavenumber(CrystalAxis::Z, 0.655, 75.0).unwrap();
        assert!(((hv + vh) / 2.0 - kp).abs() < 1e-12);
    }

    #[test]
    fn periods_from_published_reciprocals() {
        let (l1, l2) = periods_from_reciprocals(17.47, 18.24, 3).unwrap();
        assert!((l1 - 1.056).abs() < 1e-3, "{l1}");
        assert!((l2 - 16.36).abs() / 16.36 < 0.01, "{l2}");
        let (l1, l2) = periods_from_reciprocals(14.95, 15.93, 3).unwrap();
        assert!((l1 - 1.220).abs() < 1e-3, "{l1}");
        assert!((l2 - 12.82).abs() / 12.82 < 0.01, "{l2}");
    }

    #[test]
    fn periods_errors() {
        assert!(periods_from_reciprocals(18.0, 17.0, 3).is_err());
        assert!(periods_from_reciprocals(17.0, 17.0 + 1e-8, 3).is_err());
        assert!(periods_from_reciprocals(17.0, 18.0, 0).is_err());
        // Λ1 >= Λ2 once the split is wider than the mean.
        assert!(periods_from_reciprocals(1.0, 30.0, 3).is_err());
    }

    #[test]
    fn general_inversion_matches_m_pm1_formula() {
        let (l1, l2) = periods_from_reciprocals(17.47, 18.24, 3).unwrap();
        let lo = ReciprocalOrder::new(3, -1).unwrap();
        let hi = ReciprocalOrder::new(3, 1).unwrap();
        let (a1, a2) = periods_for_orders((lo, 17.47), (hi, 18.24)).unwrap();
        assert!((a1 - l1).abs() < 1e-12 && (a2 - l2).abs() < 1e-9);
        assert!(periods_for_orders((hi, 17.47), (lo, 18.24)).is_none());
    }

    #[test]
    fn synthetic_temperature_root_matches_closed_form() {
        // Degenerate, wavelength-independent indices: Λ2/Λ1 = 2 n_H / (3 (n_H - n_V)).
        // Setting it to l/2 gives 4 n_H = 3 l (n_H - n_V), linear in τ.
        let m = flat_model();
        let map = PolarizationMapping::default();
        let targets = DesignTargets::new(
            0.6,
            SignalTarget::Degenerate,
            [ReciprocalOrder::new(3, 1).unwrap(), ReciprocalOrder::new(3, -1).unwrap()],
            (-40.0, 240.0),
            (3, 64),
        )
        .unwrap();
        for l in [24u32, 25] {
            let (ah, av, th, tv) = (1.85, 1.75, 1.0e-4, 0.6e-4);
            let lf = l as f64;
            let tau = (3.0 * lf * (ah - av) - 4.0 * ah) / (4.0 * th - 3.0 * lf * (th - tv));
            let exact = 25.0 + tau;
            let root = solve_temperature_for_ratio(&m, &map, &targets, l).unwrap();
            let ratio = period_ratio(&m, &map, &targets, root.temperature_c).unwrap();
            assert!((ratio - lf / 2.0).abs() < 1e-9);
            assert!((root.temperature_c - exact).abs() < 1e-6, "{} vs {exact}", root.temperature_c);
        }
    }

    #[test]
    fn no_root_is_no_solution() {
        let m = flat_model();
        let map = PolarizationMapping::default();
        let targets = DesignTargets::with_defaults(0.6, SignalTarget::Degenerate).unwrap();
        let err = solve_temperature_for_ratio(&m, &map, &targets, 60).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn interval_outside_validity_is_rejected() {
        let m = ktp();
        let map = PolarizationMapping::default();
        let targets = DesignTargets::new(
            0.655,
            SignalTarget::Degenerate,
            [ReciprocalOrder::new(3, 1).unwrap(), ReciprocalOrder::new(3, -1).unwrap()],
            (0.0, 120.0),
            (3, 64),
        )
        .unwrap();
        assert!(matches!(
            design_source(&m, &map, &targets),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn targets_validation() {
        let o = |m, n| ReciprocalOrder::new(m, n).unwrap();
        assert!(DesignTargets::new(0.655, SignalTarget::Degenerate, [o(3, 1), o(1, 1)], (20.0, 120.0), (3, 64)).is_err());
        assert!(DesignTargets::new(0.655, SignalTarget::Degenerate, [o(3, 1), o(-1, 3)], (20.0, 120.0), (3, 64)).is_ok());
        assert!(DesignTargets::new(0.655, SignalTarget::Degenerate, [o(3, 1), o(3, -1)], (20.0, 120.0), (2, 64)).is_err());
        assert!(DesignTargets::new(0.655, SignalTarget::Wavelength(0.5), [o(3, 1), o(3, -1)], (20.0, 120.0), (3, 64)).is_err());
    }

    proptest! {
        #[test]
        fn reciprocal_sum_identity(
            pump in 0.54f64..0.75,
            frac in 0.3f64..0.5,
            temp in 25.0f64..150.0,
        ) {
            let m = ktp();
            let map = PolarizationMapping::default();
            let signal = pump / (1.0 - frac);
            let idler = idler_wavelength(pump, signal);
            prop_assume!(signal < 1.57 && idler < 1.57);
            let (hv, vh) = required_reciprocals(&m, &map, pump, SignalTarget::Wavelength(signal), temp).unwrap();
            let k = |a, l| m.wavenumber(a, l, temp).unwrap();
            let kp = k(CrystalAxis::Z, pump);
            let rhs = kp + (k(CrystalAxis::Z, idler) + k(CrystalAxis::Y, idler)
                - k(CrystalAxis::Z, signal) - k(CrystalAxis::Y, signal)) / 2.0;
            prop_assert!(((hv + vh) / 2.0 - rhs).abs() < 1e-12);
        }

        #[test]
        fn periods_round_trip(lo in 5.0f64..30.0, split in 0.05f64..2.0, m in 1u32..6) {
            let hi = lo + split;
            let (l1, l2) = periods_from_reciprocals(lo, hi, m).unwrap();
            let g = DualGrating::new(l1, l2, crate::grating::Duty::HALF, crate::grating::Duty::HALF).unwrap();
            let mi = m as i32;
            let rlo = reciprocal(ReciprocalOrder::new(mi, -1).unwrap(), &g);
            let rhi = reciprocal(ReciprocalOrder::new(mi, 1).unwrap(), &g);
            prop_assert!((rlo - lo).abs() < 1e-12 * hi);
            prop_assert!((rhi - hi).abs() < 1e-12 * hi);
        }
    }
}
