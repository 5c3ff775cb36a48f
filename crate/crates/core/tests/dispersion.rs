use counterprop::constants::SPEED_OF_LIGHT;
use counterprop::{CrystalAxis, DispersionModel, Error, PolarizationMapping};
use proptest::prelude::*;

fn ktp() -> DispersionModel {
    DispersionModel::from_toml_str(include_str!("../data/ktp.toml")).unwrap()
}

/// c / (n − λ·n'), with n' by central difference of the refractive index.
fn fd_group_velocity(m: &DispersionModel, axis: CrystalAxis, lambda: f64, t: f64) -> f64 {
    let h = 1e-4;
    let n = m.refractive_index(axis, lambda, t).unwrap();
    let dn = (m.refractive_index(axis, lambda + h, t).unwrap() - m.refractive_index(axis, lambda - h, t).unwrap())
        / (2.0 * h);
    SPEED_OF_LIGHT / (n - lambda * dn)
}

#[test]
fn group_velocity_matches_finite_differences() {
    let m = ktp();
    let mut points = 0;
    for axis in [CrystalAxis::Y, CrystalAxis::Z] {
        for i in 0..11 {
            let lambda = 0.54 + 0.1 * i as f64;
            for j in 0..10 {
                let t = 21.0 + 17.0 * j as f64;
                let u = m.group_velocity(axis, lambda, t).unwrap();
                let fd = fd_group_velocity(&m, axis, lambda, t);
                assert!(((u - fd) / fd).abs() < 1e-6, "{axis} {lambda} {t}: {u} vs {fd}");
                assert!(u > 0.0 && u < SPEED_OF_LIGHT);
                points += 1;
            }
        }
    }
    assert!(points >= 200);
}

#[test]
fn pump_index_matches_reciprocal_mean() {
    // The mean of the two degenerate reciprocals is the pump wave number.
    let n = ktp().refractive_index(CrystalAxis::Z, 0.655, 75.0).unwrap();
    let expected = (17.47 + 18.24) * 0.655 / (4.0 * std::f64::consts::PI);
    assert!((n - expected).abs() < 2e-3, "{n} vs {expected}");
    let k = ktp().wavenumber(CrystalAxis::Z, 0.655, 75.0).unwrap();
    assert!((k - 17.85).abs() < 0.02, "{k}");
}

#[test]
fn degenerate_group_index_sum() {
    let m = ktp();
    let ng = |a| m.group_index(a, 1.31, 75.0).unwrap();
    let sum = ng(CrystalAxis::Z) + ng(CrystalAxis::Y);
    assert!((sum - 3.63).abs() < 0.02, "{sum}");
}

#[test]
fn normal_dispersion_on_design_wavelengths() {
    let m = ktp();
    for axis in [CrystalAxis::X, CrystalAxis::Y, CrystalAxis::Z] {
        let n = |l| m.refractive_index(axis, l, 25.0).unwrap();
        assert!(n(0.532) > n(0.807) && n(0.807) > n(1.56), "{axis}");
    }
}

#[test]
fn mapped_signal_wavenumbers_are_ordered() {
    let m = ktp();
    let map = PolarizationMapping::default();
    let kh = m.wavenumber(map.h_axis(), 1.31, 75.0).unwrap();
    let kv = m.wavenumber(map.v_axis(), 1.31, 75.0).unwrap();
    assert!(kv < kh);
}

#[test]
fn out_of_range_is_rejected() {
    let m = ktp();
    assert!(matches!(
        m.refractive_index(CrystalAxis::Z, 2.0, 25.0),
        Err(Error::OutOfRange { .. })
    ));
    assert!(matches!(
        m.refractive_index(CrystalAxis::Z, 1.0, 10.0),
        Err(Error::OutOfRange { .. })
    ));
    // Derivatives need a neighbourhood: the window edge is excluded.
    assert!(m.refractive_index(CrystalAxis::Z, 0.53, 25.0).is_ok());
    assert!(m.group_velocity(CrystalAxis::Z, 0.53, 25.0).is_err());
}

#[test]
fn published_file_loads_and_differs_only_on_y() {
    let cal = ktp();
    let raw = DispersionModel::from_toml_str(include_str!("../data/ktp_published.toml")).unwrap();
    for axis in [CrystalAxis::X, CrystalAxis::Z] {
        assert_eq!(
            cal.refractive_index(axis, 1.0, 50.0).unwrap(),
            raw.refractive_index(axis, 1.0, 50.0).unwrap()
        );
    }
    let dy = cal.refractive_index(CrystalAxis::Y, 1.0, 50.0).unwrap()
        - raw.refractive_index(CrystalAxis::Y, 1.0, 50.0).unwrap();
    assert!((dy - (3.19512e-3 + 2.1119e-4)).abs() < 1e-12, "{dy}");
}

proptest! {
    #[test]
    fn ktp_invariants(lambda in 0.531f64..1.569, t in 20.0f64..200.0) {
        let m = ktp();
        let nx = m.refractive_index(CrystalAxis::X, lambda, t).unwrap();
        let ny = m.refractive_index(CrystalAxis::Y, lambda, t).unwrap();
        let nz = m.refractive_index(CrystalAxis::Z, lambda, t).unwrap();
        prop_assert!(nx > 1.0 && nz > ny && ny > nx);
        for axis in [CrystalAxis::Y, CrystalAxis::Z] {
            prop_assert!(m.dn_dlambda(axis, lambda, t).unwrap() < 0.0);
            prop_assert_eq!(
                m.refractive_index(axis, lambda, t).unwrap().to_bits(),
                m.refractive_index(axis, lambda, t).unwrap().to_bits()
            );
        }
    }

    #[test]
    fn wavenumber_definition(lambda in 0.531f64..1.569, t in 20.0f64..200.0) {
        let m = ktp();
        let n = m.refractive_index(CrystalAxis::Z, lambda, t).unwrap();
        let k = m.wavenumber(CrystalAxis::Z, lambda, t).unwrap();
        prop_assert!((k - 2.0 * std::f64::consts::PI * n / lambda).abs() < 1e-12);
    }
}
