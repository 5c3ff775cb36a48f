use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::Serialize;

use super::spectrum::{h_function, FWHM_HALF_WIDTH};
use super::{gv_slopes, CrystalDevice, GridSpec};
use crate::error::{Error, Result};
use crate::phasematch::ProcessId;

/// Linearized two-component state: amplitudes A_q (up to a common factor)
/// and slopes S_q (s/m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralState {
    pub length_m: f64,
    pub s_hv: f64,
    pub s_vh: f64,
    pub amp_hv: f64,
    pub amp_vh: f64,
}

impl SpectralState {
    /// Equal nonlinear coefficients, so |A_HV|/|A_VH| = 1/δ_n.
    pub fn synthetic(length_m: f64, s_hv: f64, s_vh: f64, delta_n: f64) -> Self {
        Self {
            length_m,
            s_hv,
            s_vh,
            amp_hv: 1.0 / delta_n,
            amp_vh: 1.0,
        }
    }

    /// A_q ∝ d_q / √(n_s n_i) for the device's central frequencies.
    pub fn of_device(device: &CrystalDevice) -> Result<Self> {
        let (s_hv, s_vh) = gv_slopes(device)?;
        let idx = device.indices()?;
        Ok(Self {
            length_m: device.length_m(),
            s_hv,
            s_vh,
            amp_hv: device.d_eff_si(ProcessId::HV) / (idx.signal_h * idx.idler_v).sqrt(),
            amp_vh: device.d_eff_si(ProcessId::VH) / (idx.signal_v * idx.idler_h).sqrt(),
        })
    }

    /// C = 2 S_min / (ρ S_HV + S_VH / ρ) with ρ = |A_VH| / |A_HV|.
    pub fn closed_form(&self) -> f64 {
        closed_form(self.s_hv, self.s_vh, self.amp_vh.abs() / self.amp_hv.abs())
    }

    /// Concurrence of the density matrix built from trapezoid overlap
    /// integrals of the complex amplitudes.
    pub fn oracle(&self, grid: GridSpec) -> Result<f64> {
        grid.check(10.0, 64.0)?;
        let l = self.length_m;
        let fw_hv = 4.0 * FWHM_HALF_WIDTH / (l * self.s_hv);
        let fw_vh = 4.0 * FWHM_HALF_WIDTH / (l * self.s_vh);
        let nu = grid.nodes(fw_hv.min(fw_vh), fw_hv.max(fw_vh));
        let last = nu.len() - 1;

        let (mut p_hv, mut p_vh) = (0.0, 0.0);
        let mut coherence = Complex64::new(0.0, 0.0);
        for (k, &v) in nu.iter().enumerate() {
            let w = if k == 0 || k == last { 0.5 } else { 1.0 };
            let a = self.amp_hv * h_function(-v * l * self.s_hv);
            let b = self.amp_vh * h_function(-v * l * self.s_vh);
            p_hv += w * a.norm_sqr();
            p_vh += w * b.norm_sqr();
            coherence += w * a * b.conj();
        }
        let trace = p_hv + p_vh;
        if !(trace > 0.0) {
            return Err(Error::Numerical("state has zero norm".into()));
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut rho = Matrix4::from_element(zero);
        rho[(1, 1)] = Complex64::new(p_hv / trace, 0.0);
        rho[(2, 2)] = Complex64::new(p_vh / trace, 0.0);
        rho[(1, 2)] = coherence / trace;
        rho[(2, 1)] = coherence.conj() / trace;
        Ok(wootters_concurrence(&rho))
    }
}

fn closed_form(s_hv: f64, s_vh: f64, rho: f64) -> f64 {
    if rho == 0.0 || rho.is_infinite() {
        return 0.0;
    }
    2.0 * s_hv.min(s_vh) / (rho * s_hv + s_vh / rho)
}

/// Closed-form concurrence with ρ = δ_n·|d_VH / d_HV|; exactly 1 for a
/// degenerate, pairing-rule design.
pub fn concurrence_closed_form(device: &CrystalDevice) -> Result<f64> {
    let (s_hv, s_vh) = gv_slopes(device)?;
    let nl = device.nonlinear();
    let delta_n = device.indices()?.delta_n();
    Ok(closed_form(s_hv, s_vh, delta_n * (nl.d_eff_vh.abs() / nl.d_eff_hv.abs())))
}

/// Density-matrix evaluation of the concurrence, independent of the closed
/// form.
pub fn concurrence_oracle(device: &CrystalDevice, grid: GridSpec) -> Result<f64> {
    SpectralState::of_device(device)?.oracle(grid)
}

/// Wootters concurrence of a two-qubit density matrix in the basis
/// {HH, HV, VH, VV}: max(0, s₁ − s₂ − s₃ − s₄), sᵢ the decreasing square
/// roots of the eigenvalues of √ρ ρ̃ √ρ, ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y).
pub fn wootters_concurrence(rho: &Matrix4<Complex64>) -> f64 {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut yy = Matrix4::from_element(zero);
    yy[(0, 3)] = -one;
    yy[(1, 2)] = one;
    yy[(2, 1)] = one;
    yy[(3, 0)] = -one;
    let flipped = yy * rho.conjugate() * yy;

    let eig = rho.symmetric_eigen();
    let sqrt_vals = eig.eigenvalues.map(|v| Complex64::new(v.max(0.0).sqrt(), 0.0));
    let sqrt_rho = &eig.eigenvectors * Matrix4::from_diagonal(&sqrt_vals) * eig.eigenvectors.adjoint();
    let m = &sqrt_rho * flipped * &sqrt_rho;
    let m = (m + m.adjoint()) * Complex64::new(0.5, 0.0);

    let mut s: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().map(|v| v.max(0.0).sqrt()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    (s[0] - s[1] - s[2] - s[3]).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const L: f64 = 0.02;
    const S0: f64 = 3.63 / 299_792_458.0;

    fn pure(a: [Complex64; 4]) -> Matrix4<Complex64> {
        let v = nalgebra::Vector4::from(a);
        let n = v.norm_squared();
        v * v.adjoint() / Complex64::new(n, 0.0)
    }

    #[test]
    fn wootters_reference_states() {
        let (z, o) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        assert!((wootters_concurrence(&pure([z, o, o, z])) - 1.0).abs() < 1e-12);
        assert!((wootters_concurrence(&pure([z, o, Complex64::new(0.0, 1.0), z])) - 1.0).abs() < 1e-12);
        assert!(wootters_concurrence(&pure([o, z, z, z])) < 1e-12);
        // cos θ|HV> + sin θ|VH> has C = sin 2θ.
        let t: f64 = 0.3;
        let c = wootters_concurrence(&pure([z, Complex64::new(t.cos(), 0.0), Complex64::new(t.sin(), 0.0), z]));
        assert!((c - (2.0 * t).sin()).abs() < 1e-12);
        // Maximally mixed.
        let mixed = Matrix4::identity() * Complex64::new(0.25, 0.0);
        assert!(wootters_concurrence(&mixed) < 1e-12);
    }

    #[test]
    fn closed_form_substitution() {
        let s = SpectralState::synthetic(L, S0, 2.0 * S0, 1.0);
        assert!((s.closed_form() - 2.0 / 3.0).abs() < 1e-15);
        let s = SpectralState::synthetic(L, S0, S0, 1.0);
        assert_eq!(s.closed_form(), 1.0);
    }

    #[test]
    fn single_process_is_separable() {
        let s = SpectralState {
            length_m: L,
            s_hv: S0,
            s_vh: S0 * 1.01,
            amp_hv: 1.0,
            amp_vh: 0.0,
        };
        assert_eq!(s.closed_form(), 0.0);
        assert!(s.oracle(GridSpec::ORACLE).unwrap() < 1e-12);
    }

    #[test]
    fn oracle_rejects_coarse_grid() {
        let s = SpectralState::synthetic(L, S0, S0, 1.0);
        let coarse = GridSpec {
            span_fwhm: 20.0,
            points_per_fwhm: 16.0,
        };
        assert!(s.oracle(coarse).is_err());
        let narrow = GridSpec {
            span_fwhm: 4.0,
            points_per_fwhm: 64.0,
        };
        assert!(s.oracle(narrow).is_err());
    }

    #[test]
    fn oracle_matches_closed_form_on_equal_slopes() {
        let s = SpectralState::synthetic(L, S0, S0, 1.0);
        assert!((s.oracle(GridSpec::ORACLE).unwrap() - 1.0).abs() < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn oracle_tracks_closed_form(ratio in 0.5f64..2.0, delta_n in 0.98f64..1.02) {
            let s = SpectralState::synthetic(L, S0, ratio * S0, delta_n);
            let c = s.closed_form();
            let o = s.oracle(GridSpec::ORACLE).unwrap();
            prop_assert!((0.0..=1.0).contains(&c));
            prop_assert!((c - o).abs() < 1e-3, "closed {c} oracle {o}");
        }
    }
}
