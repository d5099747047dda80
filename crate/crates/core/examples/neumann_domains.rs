//! Neumann complexes: counts, Euler audit, face areas and left ends.
//!
//! `cargo run --release --example neumann_domains`

use neumann_core::complex::{build, launch_robustness};
use neumann_core::critical::critical_set;
use neumann_core::eigenfield::closed_form;
use neumann_core::{DomainSpec, Result};

fn main() -> Result<()> {
    let cases = [
        (DomainSpec::UnitSquare, 1),
        (DomainSpec::UnitSquare, 4),
        (DomainSpec::UnitDisk, 1),
        (DomainSpec::UnitDisk, 2),
        (DomainSpec::annulus(0.5), 1),
    ];
    for (spec, k) in cases {
        let f = closed_form(&spec, k)?;
        let set = critical_set(&f, 0.02)?;
        let cx = build(&f, &set)?;
        let n = cx.count();
        let e = &cx.euler;
        println!(
            "{} k={k}: {} Neumann domains ({} boundary, {} interior, {} punctures)",
            spec.label(),
            n.total,
            n.boundary,
            n.interior,
            n.punctures
        );
        println!(
            "  Euler V={} E={} F={} components={} passed={}; face area sum {:.6} of {:.6}; N(u) length {:.6}",
            e.vertices,
            e.edges,
            e.faces,
            e.components,
            e.passed,
            cx.face_area_sum(),
            f.domain().area(),
            cx.neumann_length(),
        );
        for (i, face) in cx.faces.iter().enumerate() {
            println!("  face {i}: {:?} {:?} area {:.6}", face.class, face.sign, face.area);
        }
        let unique = cx.left_ends(&f, 25)?.iter().all(|l| l.is_unique());
        let rob = launch_robustness(&f, &cx, 4.0)?;
        println!(
            "  left ends unique per face: {unique}; launch/4 mismatches {} (Hausdorff {:.1e})",
            rob.mismatches, rob.max_hausdorff
        );
    }
    Ok(())
}
