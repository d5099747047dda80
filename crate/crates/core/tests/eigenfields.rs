mod common;

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use common::{bessel_j, disk_spectrum, fd_grad, fd_laplacian, square_spectrum};
use neumann_core::eigenfield::{closed_form, load_field, save_field, solve, SolverChoice};
use neumann_core::report::oval;
use neumann_core::{DomainSpec, EigenField, Point};
use proptest::prelude::*;

/// Square and disk modes 1..=7, built once.
fn cached(disk: bool, k: u32) -> &'static EigenField {
    static FIELDS: OnceLock<Vec<(EigenField, EigenField)>> = OnceLock::new();
    let all = FIELDS.get_or_init(|| {
        (1..8)
            .map(|k| {
                (
                    closed_form(&DomainSpec::UnitSquare, k).unwrap(),
                    closed_form(&DomainSpec::UnitDisk, k).unwrap(),
                )
            })
            .collect()
    });
    let pair = &all[k as usize - 1];
    if disk {
        &pair.1
    } else {
        &pair.0
    }
}

fn field_fn(f: &EigenField) -> impl Fn(f64, f64) -> f64 + '_ {
    move |x, y| f.value(Point::new(x, y))
}

/// `u` equals `c · oracle` for a single constant `c` over the given points.
fn proportional(f: &EigenField, oracle: impl Fn(Point) -> f64, pts: &[Point]) -> f64 {
    let anchor = pts
        .iter()
        .copied()
        .max_by(|a, b| oracle(*a).abs().total_cmp(&oracle(*b).abs()))
        .unwrap();
    let c = f.value(anchor) / oracle(anchor);
    pts.iter().map(|&p| (f.value(p) - c * oracle(p)).abs()).fold(0.0, f64::max)
}

fn probe_points(inside: impl Fn(Point) -> bool) -> Vec<Point> {
    let mut v = Vec::new();
    for i in 0..23 {
        for j in 0..23 {
            let p = Point::new(-1.0 + 2.0 * (i as f64 + 0.37) / 23.0, -1.0 + 2.0 * (j as f64 + 0.61) / 23.0);
            if inside(p) {
                v.push(p);
            }
        }
    }
    v
}

#[test]
fn square_spectrum_and_modes() {
    let oracle = square_spectrum(12);
    let pts = probe_points(|p| p.x > 0.0 && p.y > 0.0);
    for (k, &(lambda, p, q)) in oracle.iter().enumerate() {
        let f = closed_form(&DomainSpec::UnitSquare, k as u32 + 1).unwrap();
        assert!((f.eigenvalue() - lambda).abs() < 1e-12 * lambda, "k={}", k + 1);
        let mode = |x: Point| (p as f64 * PI * x.x).sin() * (q as f64 * PI * x.y).sin();
        assert!(proportional(&f, mode, &pts) < 1e-12, "k={} is not sin({p}πx)sin({q}πy)", k + 1);
    }
    assert!((closed_form(&DomainSpec::UnitSquare, 1).unwrap().eigenvalue() - 2.0 * PI * PI).abs() <= 1e-12);
}

#[test]
fn disk_spectrum_and_modes() {
    let oracle = disk_spectrum(10);
    let pts = probe_points(|p| p.norm() < 1.0);
    for (k, &(lambda, m, j)) in oracle.iter().enumerate() {
        let f = closed_form(&DomainSpec::UnitDisk, k as u32 + 1).unwrap();
        assert!((f.eigenvalue() - lambda).abs() < 1e-10 * lambda, "k={}: {} vs {lambda}", k + 1, f.eigenvalue());
        let kappa = lambda.sqrt();
        // Either trigonometric branch; the closed form lists cos first.
        let cos_mode = |x: Point| bessel_j(m as i32, kappa * x.norm()) * (m as f64 * x.angle()).cos();
        let sin_mode = |x: Point| bessel_j(m as i32, kappa * x.norm()) * (m as f64 * x.angle()).sin();
        let d = proportional(&f, cos_mode, &pts).min(if m > 0 { proportional(&f, sin_mode, &pts) } else { f64::INFINITY });
        assert!(d < 1e-10, "k={} is not J_{m}(j_{m},{j} r) trig({m}φ): {d:e}", k + 1);
    }
}

#[test]
fn annulus_ground_state_solves_the_problem() {
    let f = closed_form(&DomainSpec::annulus(0.5), 1).unwrap();
    let kappa = common::annulus_wavenumber(0.5);
    assert!((f.eigenvalue() - kappa * kappa).abs() < 1e-8);
    let u = field_fn(&f);
    for p in probe_points(|p| p.norm() > 0.55 && p.norm() < 0.95) {
        // The five-point stencil errs by about h²λ²/12.
        let r = fd_laplacian(&u, p.x, p.y, 1e-3) + f.eigenvalue() * f.value(p);
        assert!(r.abs() < 1e-6 * f.eigenvalue().powi(2), "PDE residual {r} at {p:?}");
    }
    assert!(f.boundary_residual(256) < 1e-12);
}

#[test]
fn mfs_matches_disk_closed_forms() {
    let disk = DomainSpec::UnitDisk;
    let cfg = neumann_core::eigenfield::default_mfs_config(&disk);
    for k in 1..=2 {
        let exact = closed_form(&disk, k).unwrap();
        let approx = solve(&disk, k, &SolverChoice::Mfs(cfg.clone())).unwrap();
        assert!((exact.eigenvalue() - approx.eigenvalue()).abs() < 1e-6);
    }
}

#[test]
fn oval_ground_state_is_an_eigenfunction() {
    let f = solve(&oval(), 1, &SolverChoice::Auto).unwrap();
    // Between the disks of radius 0.9 and 1.1, so λ₁ lies between j₀₁²/1.1² and j₀₁²/0.9².
    let j2 = common::bessel_zero(0, 1).powi(2);
    assert!(f.eigenvalue() > j2 / 1.21 && f.eigenvalue() < j2 / 0.81);
    assert!(f.boundary_residual(512) < 1e-8);
    let u = field_fn(&f);
    for p in probe_points(|p| p.norm() < 0.8) {
        let r = fd_laplacian(&u, p.x, p.y, 1e-3) + f.eigenvalue() * f.value(p);
        assert!(r.abs() < 1e-4, "PDE residual {r} at {p:?}");
    }
    assert!((f.normalization().sup * f.scale().abs() - 1.0).abs() < 1e-9);
}

#[test]
fn cache_roundtrip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    for f in [
        closed_form(&DomainSpec::UnitDisk, 2).unwrap(),
        solve(&oval(), 1, &SolverChoice::Auto).unwrap(),
    ] {
        let path = dir.path().join("field.json");
        save_field(&f, &path).unwrap();
        let g = load_field(&path).unwrap();
        assert_eq!(f.eigenvalue().to_bits(), g.eigenvalue().to_bits());
        for p in probe_points(|p| f.domain().contains(p).0) {
            assert_eq!(f.value(p).to_bits(), g.value(p).to_bits());
            assert_eq!(f.grad(p), g.grad(p));
        }
    }
}

#[test]
fn zero_index_is_rejected() {
    assert!(closed_form(&DomainSpec::UnitDisk, 0).is_err());
    assert!(closed_form(&DomainSpec::flower(3, 0.3), 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn closed_forms_satisfy_helmholtz(k in 1u32..8, r in 0.05f64..0.9, phi in 0.0f64..TAU, disk in any::<bool>()) {
        let p = if disk {
            Point::polar(r, phi)
        } else {
            Point::new(0.5 + 0.5 * r * phi.cos(), 0.5 + 0.5 * r * phi.sin())
        };
        let f = cached(disk, k);
        let s = f.sample(p);
        // Analytic Laplacian and the five-point stencil.
        prop_assert!((s.laplacian() + f.eigenvalue() * s.value).abs() < 1e-9 * f.eigenvalue());
        let fd = fd_laplacian(field_fn(f), p.x, p.y, 1e-3);
        prop_assert!((fd + f.eigenvalue() * s.value).abs() < 1e-3 * f.eigenvalue());
    }

    #[test]
    fn gradients_match_differences(k in 1u32..6, r in 0.05f64..0.9, phi in 0.0f64..TAU) {
        let f = cached(true, k);
        let p = Point::polar(r, phi);
        let (gx, gy) = fd_grad(field_fn(f), p.x, p.y, 1e-5);
        let g = f.grad(p);
        prop_assert!((g.x - gx).abs() < 1e-8 && (g.y - gy).abs() < 1e-8, "{:?} vs ({}, {})", g, gx, gy);
    }

    #[test]
    fn closed_forms_vanish_on_the_boundary(k in 1u32..8, t in 0.0f64..1.0) {
        let d = cached(true, k);
        prop_assert!(d.value(Point::polar(1.0, std::f64::consts::TAU * t)).abs() < 1e-13);
        let s = cached(false, k);
        for p in [Point::new(t, 0.0), Point::new(t, 1.0), Point::new(0.0, t), Point::new(1.0, t)] {
            prop_assert!(s.value(p).abs() < 1e-13);
        }
    }
}
