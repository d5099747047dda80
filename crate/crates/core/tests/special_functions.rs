mod common;

use common::{annulus_wavenumber, bessel_j, bessel_prime_zero, bessel_y, bessel_zero};
use neumann_core::specfun::{annulus_radial_root, bessel, bessel_derivative_root, bessel_root, jn, yn, BesselKind};
use proptest::prelude::*;

#[test]
fn zeros_match_oracle() {
    for m in 0..5 {
        for k in 1..=4 {
            let ours = bessel_root(m, k);
            let oracle = bessel_zero(m as i32, k as usize);
            assert!((ours - oracle).abs() < 1e-11, "j_{m},{k}: {ours} vs {oracle}");
            assert!(bessel_j(m as i32, ours).abs() < 1e-12, "J_{m}(j_{m},{k}) = {}", bessel_j(m as i32, ours));
        }
    }
}

#[test]
fn derivative_zeros_match_oracle() {
    for m in 1..5 {
        for k in 1..=3 {
            let ours = bessel_derivative_root(m, k);
            let oracle = bessel_prime_zero(m as i32, k as usize);
            assert!((ours - oracle).abs() < 1e-11, "j'_{m},{k}: {ours} vs {oracle}");
        }
    }
}

#[test]
fn zeros_interlace() {
    for m in 0..5 {
        for k in 1..=4 {
            assert!(bessel_root(m, k) < bessel_root(m + 1, k));
            assert!(bessel_root(m + 1, k) < bessel_root(m, k + 1));
        }
    }
}

#[test]
fn thin_annulus_limit() {
    let a = 0.98;
    let k = annulus_radial_root(a, 1).unwrap();
    assert!((k * (1.0 - a) - std::f64::consts::PI).abs() < 1e-3);
}

#[test]
fn ground_state_constant() {
    let j = bessel_root(0, 1);
    assert!((j * j - 5.783185962946785).abs() < 1e-12);
}

#[test]
fn annulus_root_matches_oracle() {
    for a in [0.25, 0.5, 0.75] {
        let ours = annulus_radial_root(a, 1).unwrap();
        let oracle = annulus_wavenumber(a);
        assert!((ours - oracle).abs() < 1e-9, "a={a}: {ours} vs {oracle}");
    }
}

#[test]
fn bad_arguments_are_rejected() {
    assert!(annulus_radial_root(1.2, 1).is_err());
    assert!(annulus_radial_root(0.5, 0).is_err());
    assert!(bessel(BesselKind::Y, 0, 0.0).is_err());
}

proptest! {
    #[test]
    fn j_matches_integral(m in 0u32..8, x in 0.0f64..40.0) {
        let d = (jn(m, x) - bessel_j(m as i32, x)).abs();
        prop_assert!(d < 1e-12, "J_{}({}) off by {}", m, x, d);
    }

    #[test]
    fn y_matches_integral(m in 0u32..4, x in 0.5f64..30.0) {
        let d = (yn(m, x) - bessel_y(m as i32, x)).abs();
        prop_assert!(d < 1e-10, "Y_{}({}) off by {}", m, x, d);
    }

    #[test]
    fn wronskian(m in 0u32..8, x in 0.1f64..50.0) {
        let j = bessel(BesselKind::J, m, x).unwrap();
        let y = bessel(BesselKind::Y, m, x).unwrap();
        let w = j.value * y.d1 - j.d1 * y.value;
        let expect = 2.0 / (std::f64::consts::PI * x);
        prop_assert!((w - expect).abs() < 1e-10 * expect, "{} vs {}", w, expect);
    }

    #[test]
    fn recurrence(m in 1u32..10, x in 0.1f64..60.0) {
        let lhs = jn(m - 1, x) + jn(m + 1, x);
        let rhs = 2.0 * m as f64 / x * jn(m, x);
        prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn derivatives_satisfy_bessel_equation(m in 0u32..6, x in 0.1f64..40.0, y_kind in any::<bool>()) {
        let kind = if y_kind { BesselKind::Y } else { BesselKind::J };
        let e = bessel(kind, m, x).unwrap();
        let mf = m as f64;
        let residual = x * x * e.d2 + x * e.d1 + (x * x - mf * mf) * e.value;
        let scale = x * x * (e.value.abs() + e.d1.abs() + e.d2.abs()) + 1.0;
        prop_assert!(residual.abs() < 1e-11 * scale, "residual {}", residual);
    }
}
