use serde::Serialize;

use crate::grating::ReciprocalOrder;

/// Non-fatal conditions attached to results.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// m₁n₁ ≠ ±m₂n₂: the two processes get different |d_eff|, so the state
    /// is no longer maximally entangled by amplitude.
    PairingRuleViolated {
        order_hv: ReciprocalOrder,
        order_vh: ReciprocalOrder,
        d_eff_hv: f64,
        d_eff_vh: f64,
    },
    /// The design temperature equation has several roots in the interval.
    MultipleTemperatureRoots { l: u32, roots_c: Vec<f64>, chosen_c: f64 },
    /// Even structural integer: Λ₂/Λ₁ is an integer and D₂ = 1/2.
    EvenStructuralInteger { l: u32 },
    /// Too many Monte Carlo trials had crossing domain walls.
    BoundaryCrossings { rate: f64 },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::PairingRuleViolated {
                order_hv,
                order_vh,
                d_eff_hv,
                d_eff_vh,
            } => write!(
                f,
                "pairing rule violated for orders {order_hv} / {order_vh}: \
                 |d_eff| = {:.4} vs {:.4} pm/V",
                d_eff_hv.abs(),
                d_eff_vh.abs()
            ),
            Warning::MultipleTemperatureRoots { l, roots_c, chosen_c } => write!(
                f,
                "l = {l}: {} temperature roots {roots_c:?}, using {chosen_c:.4} C",
                roots_c.len()
            ),
            Warning::EvenStructuralInteger { l } => write!(
                f,
                "even structural integer l = {l}: duty cycle D2 = 1/2, even n orders vanish"
            ),
            Warning::BoundaryCrossings { rate } => write!(
                f,
                "domain walls crossed in {:.2}% of trials",
                100.0 * rate
            ),
        }
    }
}
