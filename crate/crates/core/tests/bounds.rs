mod common;

use std::f64::consts::{E, PI, TAU};

use common::{bessel_j, bessel_prime_zero, bessel_zero};
use neumann_core::analysis::{a_constant, flower_chain, gradient_bound, gradient_bound_check, GRADIENT_GRID};
use neumann_core::eigenfield::closed_form;
use neumann_core::{DomainSpec, Error};
use proptest::prelude::*;

/// Distance from `(1, 0)` to the flower `r = 1 + ½cos nφ` with a hole of radius `a`.
fn flower_clearance(n: u32, a: f64) -> f64 {
    let samples = 200_000;
    let outer = (0..samples)
        .map(|i| {
            let phi = TAU * i as f64 / samples as f64;
            let r = 1.0 + 0.5 * (n as f64 * phi).cos();
            ((r * phi.cos() - 1.0).powi(2) + (r * phi.sin()).powi(2)).sqrt()
        })
        .fold(f64::INFINITY, f64::min);
    outer.min(1.0 - a)
}

#[test]
fn flower_chain_matches_oracle() {
    let j01 = bessel_zero(0, 1);
    for n in 3..=6 {
        let a = 0.26;
        let c = flower_chain(&DomainSpec::flower(n, a)).unwrap().unwrap();
        // At a petal valley r = ½, r' = 0, r'' = n²/2, so |κ| = (r'' − r)/r² = 2(n² − 1).
        let c2 = 2.0 * (n * n - 1) as f64;
        assert!((c.c2 - c2).abs() < 1e-6 * c2, "n={n}: C₂ {} vs {c2}", c.c2);
        let clearance = flower_clearance(n, a);
        assert!((c.c - clearance).abs() < 1e-6, "n={n}: C {} vs {clearance}", c.c);
        let big_lambda = j01 * j01 / (c.c * c.c);
        assert!((c.big_lambda - big_lambda).abs() < 1e-9 * big_lambda);
        let theta = c2.max(16.0).max(0.5 * big_lambda.sqrt());
        assert!((c.theta - theta).abs() < 1e-6 * theta);
        // F by brute force over the interval.
        let g = |x: f64| E.sqrt() * (x + c.big_lambda / (4.0 * x));
        let (lo, hi) = (0.5 * c.big_lambda.sqrt(), c.theta + c.big_lambda.sqrt());
        let f = (0..=100_000).map(|i| g(lo + (hi - lo) * i as f64 / 100_000.0)).fold(0.0, f64::max);
        assert!((c.f - f).abs() < 1e-9 * f);
        assert!((c.condition - (0.5 - a) * c.f).abs() < 1e-12 * c.condition);
        assert_eq!(c.holds, c.condition < 1.0);
    }
    assert!(flower_chain(&DomainSpec::UnitDisk).unwrap().is_none());
}

#[test]
fn disk_gradient_sup_matches_bessel_oracle() {
    let f = closed_form(&DomainSpec::UnitDisk, 1).unwrap();
    let b = gradient_bound_check(&f).unwrap();
    // u = J0(j₀₁r), |∇u| = j₀₁|J1(j₀₁r)|, largest where J1' = 0.
    let j01 = bessel_zero(0, 1);
    let oracle = j01 * bessel_j(1, bessel_prime_zero(1, 1));
    assert!((b.lhs - oracle).abs() < 1e-9, "{} vs {oracle}", b.lhs);
    assert_eq!(b.theta, 0.0);
    assert_eq!(b.sup.grid_spacing, GRADIENT_GRID);
    assert!(b.precondition_ok && b.passed());
}

#[test]
fn annulus_bound_uses_the_inner_curvature() {
    let f = closed_form(&DomainSpec::annulus(0.5), 1).unwrap();
    let b = gradient_bound_check(&f).unwrap();
    // The inner circle has curvature −1/a = −2.
    assert!(b.theta >= 2.0 && b.theta < 2.1, "θ = {}", b.theta);
    assert!(b.sup.on_boundary);
    assert!(b.passed(), "{} vs {}", b.lhs, b.rhs);
}

#[test]
fn unnormalized_fields_and_corners_are_refused() {
    let f = closed_form(&DomainSpec::UnitDisk, 1).unwrap().with_scale(2.0);
    assert!(matches!(gradient_bound_check(&f), Err(Error::Precondition(_))));
    let s = closed_form(&DomainSpec::UnitSquare, 1).unwrap();
    assert!(gradient_bound_check(&s).is_err());
}

proptest! {
    #[test]
    fn a_constant_recomputed(theta in 0.0f64..100.0, lambda in 0.5f64..500.0) {
        let oracle = theta + (2.0 * lambda / PI).powf(0.5) * E.powf(-(theta / 2.0).powi(2) / (2.0 * lambda));
        let a = a_constant(theta, lambda);
        prop_assert!((a - oracle).abs() <= 1e-12 * oracle.max(1.0), "{} vs {}", a, oracle);
        let rhs = gradient_bound(a, lambda);
        let rhs_oracle = E.powf(0.5) * (a + lambda / (4.0 * a));
        prop_assert!((rhs - rhs_oracle).abs() <= 1e-12 * rhs_oracle);
        // √e(x + λ/(4x)) is smallest at x = √λ/2, where it is √(eλ).
        prop_assert!(rhs >= (E * lambda).sqrt() * (1.0 - 1e-12));
    }

    #[test]
    fn chain_maximum_sits_at_an_endpoint(big_lambda in 1.0f64..500.0, theta in 0.0f64..100.0) {
        let g = |x: f64| E.sqrt() * (x + big_lambda / (4.0 * x));
        let (lo, hi) = (0.5 * big_lambda.sqrt(), theta + big_lambda.sqrt());
        let ends = g(lo).max(g(hi));
        let inner = (1..1000).map(|i| g(lo + (hi - lo) * i as f64 / 1000.0)).fold(0.0, f64::max);
        prop_assert!(inner <= ends * (1.0 + 1e-12));
    }
}
