mod common;

use std::sync::OnceLock;

use common::{bessel_j, bessel_prime_zero, bessel_y, bessel_zero};
use neumann_core::critical::{critical_set, CircleKind, CriticalKind, CriticalSet};
use neumann_core::eigenfield::closed_form;
use neumann_core::flow::{left_end, trace, Direction, EndPoint, Tracer};
use neumann_core::{DomainSpec, EigenField, Point};
use proptest::prelude::*;

fn cases() -> &'static [(EigenField, CriticalSet)] {
    static C: OnceLock<Vec<(EigenField, CriticalSet)>> = OnceLock::new();
    C.get_or_init(|| {
        [(DomainSpec::UnitSquare, 1), (DomainSpec::UnitSquare, 4), (DomainSpec::UnitDisk, 2)]
            .into_iter()
            .map(|(s, k)| {
                let f = closed_form(&s, k).unwrap();
                let c = critical_set(&f, 0.02).unwrap();
                (f, c)
            })
            .collect()
    })
}

#[test]
fn square_checkerboard_critical_points() {
    let (f, set) = &cases()[1];
    // sin 2πx sin 2πy: extrema where both cosines vanish, a saddle at the centre.
    let mut expected = vec![];
    for (x, y) in [(0.25, 0.25), (0.75, 0.75)] {
        expected.push((Point::new(x, y), CriticalKind::Max));
    }
    for (x, y) in [(0.25, 0.75), (0.75, 0.25)] {
        expected.push((Point::new(x, y), CriticalKind::Min));
    }
    expected.push((Point::new(0.5, 0.5), CriticalKind::Saddle));
    let interior: Vec<_> = set.points.iter().filter(|p| !p.on_boundary).collect();
    assert_eq!(interior.len(), expected.len());
    for (loc, kind) in expected {
        let p = interior
            .iter()
            .find(|p| p.location.dist(loc) < 1e-9)
            .unwrap_or_else(|| panic!("no critical point at {loc:?}"));
        assert_eq!(p.kind, kind);
        assert!(f.grad(p.location).norm() < 1e-9);
        let expect_index = if kind == CriticalKind::Saddle { -1 } else { 1 };
        assert_eq!(p.winding_index, expect_index);
    }
    // Corners and edge midpoints are where the nodal lines meet the boundary.
    let boundary: Vec<Point> = set.points.iter().filter(|p| p.on_boundary).map(|p| p.location).collect();
    assert_eq!(boundary.len(), 8);
    for (x, y) in [(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (1.0, 0.5), (1.0, 1.0), (0.5, 1.0), (0.0, 1.0), (0.0, 0.5)] {
        assert!(boundary.iter().any(|b| b.dist(Point::new(x, y)) < 1e-9), "missing ({x}, {y})");
    }
}

#[test]
fn disk_second_mode_matches_bessel_oracle() {
    let (f, set) = &cases()[2];
    let r = bessel_prime_zero(1, 1) / bessel_zero(1, 1);
    let extrema: Vec<_> = set.points.iter().filter(|p| p.is_extremum()).collect();
    assert_eq!(extrema.len(), 2);
    for p in extrema {
        assert!((p.location.norm() - r).abs() < 1e-9);
        assert!(p.location.y.abs() < 1e-9);
        assert!((p.value.abs() - 1.0).abs() < 1e-9);
        assert!(f.grad(p.location).norm() < 1e-8);
    }
    let boundary: Vec<_> = set.points.iter().filter(|p| p.on_boundary).collect();
    assert_eq!(boundary.len(), 2);
    for p in boundary {
        assert!((p.location.y.abs() - 1.0).abs() < 1e-9 && p.location.x.abs() < 1e-9);
    }
}

#[test]
fn annulus_circle_of_maxima() {
    let a = 0.5;
    let f = closed_form(&DomainSpec::annulus(a), 1).unwrap();
    let set = critical_set(&f, 0.02).unwrap();
    assert!(set.points.is_empty());
    assert_eq!(set.circles.len(), 1);
    let c = &set.circles[0];
    assert_eq!(c.kind, CircleKind::MaxCurve);
    assert!(c.radial_residual < 1e-10);
    // Oracle: maximize the radial profile by dense sampling, then golden section.
    let kappa = common::annulus_wavenumber(a);
    let radial = |r: f64| (bessel_j(0, kappa * r) * bessel_y(0, kappa * a) - bessel_j(0, kappa * a) * bessel_y(0, kappa * r)).abs();
    let mut best = (a, 0.0);
    for i in 0..=1000 {
        let r = a + (1.0 - a) * i as f64 / 1000.0;
        if radial(r) > best.1 {
            best = (r, radial(r));
        }
    }
    let (mut lo, mut hi) = (best.0 - 1e-3, best.0 + 1e-3);
    for _ in 0..100 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if radial(m1) < radial(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    assert!((c.radius - 0.5 * (lo + hi)).abs() < 1e-6, "{} vs {}", c.radius, 0.5 * (lo + hi));
}

#[test]
fn corner_separatrices_climb_to_the_centre() {
    let (f, set) = &cases()[0];
    let centre = set.points.iter().position(|p| p.kind == CriticalKind::Max).unwrap();
    assert!(set.points[centre].location.dist(Point::new(0.5, 0.5)) < 1e-9);
    let tracer = Tracer::new(f, set);
    for (i, p) in set.points.iter().enumerate().filter(|(_, p)| p.kind == CriticalKind::Saddle) {
        let seps = tracer.separatrices(i).unwrap();
        assert_eq!(seps.len(), 4);
        let inside: Vec<_> = seps.iter().filter_map(|s| s.trajectory.as_ref()).collect();
        assert_eq!(inside.len(), 1, "corner {:?}", p.location);
        match &inside[0].end {
            EndPoint::AtCritical { index, .. } => assert_eq!(*index, centre),
            other => panic!("corner separatrix ends at {other:?}"),
        }
        // The diagonal is invariant under the flow.
        for q in &inside[0].points {
            let d = if (p.location.x - p.location.y).abs() < 0.5 { q.x - q.y } else { q.x + q.y - 1.0 };
            assert!(d.abs() < 1e-6);
        }
    }
}

fn interior_point(case: usize, s: f64, t: f64) -> Point {
    match case {
        2 => Point::polar(0.95 * s.sqrt(), std::f64::consts::TAU * t),
        _ => Point::new(0.02 + 0.96 * s, 0.02 + 0.96 * t),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn left_ends_are_never_minima(case in 0usize..3, s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let (f, set) = &cases()[case];
        let x = interior_point(case, s, t);
        prop_assume!(f.grad(x).norm() > 1e-3);
        match left_end(f, set, x).unwrap() {
            EndPoint::AtCritical { index, .. } => prop_assert_ne!(set.points[index].kind, CriticalKind::Min),
            EndPoint::Unresolved { reason } => prop_assert!(false, "unresolved: {}", reason),
            _ => {}
        }
    }

    #[test]
    fn trajectories_are_monotone(case in 0usize..3, s in 0.0f64..1.0, t in 0.0f64..1.0, forward in any::<bool>()) {
        let (f, set) = &cases()[case];
        let x = interior_point(case, s, t);
        prop_assume!(f.grad(x).norm() > 1e-3);
        let dir = if forward { Direction::Forward } else { Direction::Backward };
        let tr = trace(f, set, x, dir).unwrap();
        prop_assert!(tr.end.is_resolved());
        prop_assert!(tr.monotonicity_defect() < 1e-12, "defect {}", tr.monotonicity_defect());
        prop_assert_eq!(tr.points.len(), tr.values.len());
    }
}
