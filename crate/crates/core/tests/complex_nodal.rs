mod common;

use std::f64::consts::SQRT_2;

use common::{disk_spectrum, square_spectrum};
use neumann_core::analysis::{corollary_checks, nodal_partition, payne_points, second_mode_bound};
use neumann_core::complex::{build, launch_robustness, FaceClass, NeumannComplex};
use neumann_core::critical::{critical_set, CriticalSet};
use neumann_core::eigenfield::closed_form;
use neumann_core::report::render_svg;
use neumann_core::{DomainSpec, EigenField, Point};
use proptest::prelude::*;

fn complex(spec: DomainSpec, k: u32) -> (EigenField, CriticalSet, NeumannComplex) {
    let f = closed_form(&spec, k).unwrap();
    let c = critical_set(&f, 0.02).unwrap();
    let cx = build(&f, &c).unwrap();
    (f, c, cx)
}

#[test]
fn square_ground_state_has_four_triangles() {
    let (f, _, cx) = complex(DomainSpec::UnitSquare, 1);
    let n = cx.count();
    assert_eq!((n.total, n.boundary, n.interior), (4, 4, 0));
    assert!(cx.euler.passed);
    // The Neumann lines are the two diagonals.
    assert!((cx.neumann_length() - 2.0 * SQRT_2).abs() < 1e-6);
    for face in &cx.faces {
        assert_eq!(face.class, FaceClass::BoundaryNd);
        assert!((face.area - 0.25).abs() < 1e-6, "area {}", face.area);
    }
    assert!(cx.left_ends(&f, 25).unwrap().iter().all(|l| l.is_unique()));
}

#[test]
fn square_checkerboard_complex() {
    let (f, _, cx) = complex(DomainSpec::UnitSquare, 4);
    let n = cx.count();
    assert_eq!((n.total, n.boundary, n.interior), (12, 8, 4));
    assert!(cx.euler.passed);
    assert!((cx.face_area_sum() - 1.0).abs() < 1e-6);
    // Diagonals of the four quarter squares.
    assert!((cx.neumann_length() - 4.0 * SQRT_2).abs() < 1e-6);
    let rob = launch_robustness(&f, &cx, 4.0).unwrap();
    assert_eq!(rob.mismatches, 0);
    assert!(rob.passed());
}

#[test]
fn disk_modes() {
    let (_, _, cx1) = complex(DomainSpec::UnitDisk, 1);
    let n = cx1.count();
    assert_eq!((n.total, n.punctures), (1, 1));
    assert!(cx1.edges.iter().all(|e| !e.in_neumann_set()));

    let (f, c, cx2) = complex(DomainSpec::UnitDisk, 2);
    let n = cx2.count();
    assert_eq!((n.total, n.boundary, n.interior), (3, 2, 1));
    assert!(second_mode_bound(&n).passed);
    assert!(cx2.euler.passed);
    assert!((cx2.face_area_sum() - std::f64::consts::PI).abs() / std::f64::consts::PI < 1e-2);
    let nodal = nodal_partition(&f, 0.01).unwrap();
    let cor = corollary_checks(&n, &nodal, &c);
    assert!(cor.passed());
    assert_eq!(cor.isolated_maxima, 1);
}

#[test]
fn nodal_counts_match_product_formulas() {
    // sin(pπx) sin(qπy) has p·q nodal domains; J_m(j r) cos(mφ) has 2m·j (j for m = 0).
    for (k, &(_, p, q)) in square_spectrum(6).iter().enumerate() {
        let f = closed_form(&DomainSpec::UnitSquare, k as u32 + 1).unwrap();
        assert_eq!(nodal_partition(&f, 0.01).unwrap().count, (p * q) as usize, "square k={}", k + 1);
    }
    for (k, &(_, m, j)) in disk_spectrum(6).iter().enumerate() {
        let f = closed_form(&DomainSpec::UnitDisk, k as u32 + 1).unwrap();
        let expect = if m == 0 { j } else { 2 * m * j };
        assert_eq!(nodal_partition(&f, 0.01).unwrap().count, expect as usize, "disk k={}", k + 1);
    }
}

#[test]
fn payne_points_where_nodal_lines_meet_the_boundary() {
    // Square k=2 is sin(πx) sin(2πy): the nodal line y = 1/2.
    let f = closed_form(&DomainSpec::UnitSquare, 2).unwrap();
    let mut pts: Vec<Point> = payne_points(&f).iter().map(|p| p.location).collect();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x));
    assert_eq!(pts.len(), 2);
    assert!(pts[0].dist(Point::new(0.0, 0.5)) < 1e-9 && pts[1].dist(Point::new(1.0, 0.5)) < 1e-9);

    let d = closed_form(&DomainSpec::UnitDisk, 2).unwrap();
    let pts = payne_points(&d);
    assert_eq!(pts.len(), 2);
    for p in pts {
        assert!(p.location.x.abs() < 1e-9 && (p.location.y.abs() - 1.0).abs() < 1e-9);
    }
    assert!(payne_points(&closed_form(&DomainSpec::UnitDisk, 1).unwrap()).is_empty());
}

#[test]
fn svg_has_one_path_per_separatrix_edge() {
    let (f, _, cx) = complex(DomainSpec::UnitSquare, 4);
    let svg = render_svg(&f, &cx);
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(svg.trim_end().ends_with("</svg>"));
    let separatrix_edges = cx.edges.iter().filter(|e| e.is_separatrix()).count();
    assert_eq!(svg.matches(r#"class="separatrix""#).count(), separatrix_edges);
    assert_eq!(svg.matches(r#"<path id="face-"#).count(), cx.faces.len());
    assert_eq!(svg.matches(r#"class="max""#).count(), 2);
    assert_eq!(svg.matches(r#"class="min""#).count(), 2);
    assert_eq!(svg, render_svg(&f, &cx));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn nodal_count_is_resolution_independent(k in 1u32..7, h in 0.004f64..0.01, disk in any::<bool>()) {
        let spec = if disk { DomainSpec::UnitDisk } else { DomainSpec::UnitSquare };
        let f = closed_form(&spec, k).unwrap();
        let a = nodal_partition(&f, h).unwrap();
        let b = nodal_partition(&f, 0.01).unwrap();
        prop_assert_eq!(a.count, b.count);
        prop_assert!(a.count <= k as usize);
        prop_assert_eq!(a.positive.len() + a.negative.len(), a.count);
    }
}
