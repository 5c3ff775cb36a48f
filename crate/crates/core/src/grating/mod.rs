//! Dual-periodic modulation of the nonlinear coefficient.
//!
//! The sign of χ⁽²⁾ is the product of two square waves g₁(x)g₂(x) with
//! periods Λ₁ < Λ₂ and duty cycles D₁, D₂. Each square wave is +1 on
//! `[0, DΛ)` of its period and -1 on the remainder. Order (m, n) of the
//! product has spatial frequency `G = 2πm/Λ₁ + 2πn/Λ₂` and, for a wave
//! centred on its +1 region, Fourier weight
//! `𝒢 = 4 sin(mD₁π) sin(nD₂π) / (mnπ²)`.

mod jitter;
mod pattern;

pub use jitter::{poling_error_mc, JitterStats};
pub use pattern::{min_domain, pattern_fourier, synthesize_pattern, DomainPattern};

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::warnings::Warning;

/// Exact rational duty cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Duty {
    pub num: u32,
    pub den: u32,
}

impl Duty {
    pub const HALF: Duty = Duty { num: 1, den: 2 };

    pub fn new(num: u32, den: u32) -> Result<Self> {
        if num == 0 || num >= den {
            return Err(Error::InvalidInput(format!(
                "duty cycle {num}/{den} must lie strictly between 0 and 1"
            )));
        }
        Ok(Self { num, den })
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Duty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Reciprocal-vector order (m, n); neither index may be zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReciprocalOrder {
    pub m: i32,
    pub n: i32,
}

impl ReciprocalOrder {
    pub fn new(m: i32, n: i32) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidInput(format!(
                "reciprocal order ({m}, {n}) must have nonzero m and n"
            )));
        }
        Ok(Self { m, n })
    }

    pub fn product(self) -> i64 {
        self.m as i64 * self.n as i64
    }

    pub fn negated(self) -> Self {
        Self {
            m: -self.m,
            n: -self.n,
        }
    }
}

impl fmt::Display for ReciprocalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

/// Two modulation periods (um) and duty cycles. `l` is present when the
/// grating satisfies the small-domain constraint Λ₂/Λ₁ = l/2, D₁ = 1/2,
/// D₂ = ⌊l/2⌋/l.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualGrating {
    lambda1: f64,
    lambda2: f64,
    duty1: Duty,
    duty2: Duty,
    l: Option<u32>,
}

impl DualGrating {
    /// An unconstrained grating.
    pub fn new(lambda1: f64, lambda2: f64, duty1: Duty, duty2: Duty) -> Result<Self> {
        if !(lambda1 > 0.0 && lambda1.is_finite() && lambda2.is_finite() && lambda1 < lambda2) {
            return Err(Error::InvalidInput(format!(
                "grating periods must satisfy 0 < Λ1 < Λ2, got {lambda1}, {lambda2}"
            )));
        }
        Ok(Self {
            lambda1,
            lambda2,
            duty1,
            duty2,
            l: None,
        })
    }

    /// A constraint-compliant grating: Λ₂ = (l/2)·Λ₁ and the duty cycles
    /// from [`constrained_duty`].
    pub fn constrained(lambda1: f64, l: u32) -> Result<Self> {
        let (duty1, duty2) = constrained_duty(l)?;
        let mut g = Self::new(lambda1, lambda1 * l as f64 / 2.0, duty1, duty2)?;
        g.l = Some(l);
        Ok(g)
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    pub fn duty1(&self) -> Duty {
        self.duty1
    }

    pub fn duty2(&self) -> Duty {
        self.duty2
    }

    pub fn l(&self) -> Option<u32> {
        self.l
    }

    /// Warnings about the structure itself.
    pub fn warnings(&self) -> Vec<Warning> {
        match self.l {
            Some(l) if l % 2 == 0 => vec![Warning::EvenStructuralInteger { l }],
            _ => Vec::new(),
        }
    }
}

/// Spatial frequency of `order` in rad/um.
pub fn reciprocal(order: ReciprocalOrder, g: &DualGrating) -> f64 {
    2.0 * PI * order.m as f64 / g.lambda1 + 2.0 * PI * order.n as f64 / g.lambda2
}

/// Fourier weight 𝒢ₘₙ of `order` (centred-wave convention, real).
pub fn fourier_coefficient(order: ReciprocalOrder, g: &DualGrating) -> f64 {
    let (m, n) = (order.m as f64, order.n as f64);
    4.0 / (m * n * PI * PI) * (m * g.duty1.value() * PI).sin() * (n * g.duty2.value() * PI).sin()
}

/// Complex coefficient of a single square wave (+1 on `[0, DΛ)`) at order k,
/// k = 0 included.
fn square_wave_coefficient(k: i64, duty: Duty) -> Complex64 {
    if k == 0 {
        return Complex64::new(2.0 * duty.value() - 1.0, 0.0);
    }
    let phase = PI * k as f64 * duty.num as f64 / duty.den as f64;
    Complex64::from_polar(2.0 * phase.sin() / (PI * k as f64), phase)
}

/// Complex coefficient of order `order` for the `[0, DΛ)` phase convention
/// used by [`synthesize_pattern`]. Its magnitude equals |𝒢ₘₙ|.
pub fn phased_coefficient(order: ReciprocalOrder, g: &DualGrating) -> Complex64 {
    square_wave_coefficient(order.m as i64, g.duty1)
        * square_wave_coefficient(order.n as i64, g.duty2)
}

/// Total Fourier amplitude of the product structure at the spatial frequency
/// of `order`.
///
/// When Λ₂/Λ₁ = l/2 the product is periodic and distinct orders share a
/// spatial frequency: (m + pj, n - qj) with p = 2/gcd(l, 2), q = l/gcd(l, 2).
/// This sums every such alias (including m = 0 or n = 0 terms) for
/// |j| ≤ `max_alias`. Without a stored `l` there are no exact aliases and the
/// single phased coefficient is returned.
pub fn aliased_coefficient(order: ReciprocalOrder, g: &DualGrating, max_alias: u32) -> Complex64 {
    let Some(l) = g.l else {
        return phased_coefficient(order, g);
    };
    let gcd = if l % 2 == 0 { 2 } else { 1 };
    let p = (2 / gcd) as i64;
    let q = (l / gcd) as i64;
    let mut total = Complex64::new(0.0, 0.0);
    // Smallest terms first.
    for j in (1..=max_alias as i64).rev() {
        for s in [j, -j] {
            total += square_wave_coefficient(order.m as i64 + p * s, g.duty1)
                * square_wave_coefficient(order.n as i64 - q * s, g.duty2);
        }
    }
    total + phased_coefficient(order, g)
}

/// Duty cycles (1/2, ⌊l/2⌋/l) that keep every domain at least Λ₁/2 long.
pub fn constrained_duty(l: u32) -> Result<(Duty, Duty)> {
    if l <= 2 {
        return Err(Error::InvalidInput(format!(
            "structural integer l = {l} must be greater than 2"
        )));
    }
    Ok((Duty::HALF, Duty::new(l / 2, l)?))
}

/// Bulk and per-process effective nonlinear coefficients, pm/V.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonlinearCoefficient {
    pub d: f64,
    pub d_eff_hv: f64,
    pub d_eff_vh: f64,
}

/// d·𝒢 for each process. A pairing-rule violation (m₁n₁ ≠ ±m₂n₂) is
/// reported as a warning, not an error.
pub fn effective_nonlinearity(
    d: f64,
    order_hv: ReciprocalOrder,
    order_vh: ReciprocalOrder,
    g: &DualGrating,
) -> (NonlinearCoefficient, Option<Warning>) {
    let coeff = NonlinearCoefficient {
        d,
        d_eff_hv: d * fourier_coefficient(order_hv, g),
        d_eff_vh: d * fourier_coefficient(order_vh, g),
    };
    let paired = order_hv.product().abs() == order_vh.product().abs();
    let warning = (!paired).then_some(Warning::PairingRuleViolated {
        order_hv,
        order_vh,
        d_eff_hv: coeff.d_eff_hv,
        d_eff_vh: coeff.d_eff_vh,
    });
    (coeff, warning)
}
