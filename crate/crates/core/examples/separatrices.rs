//! Gradient-flow trajectories: separatrices of the square's corner saddles
//! and left ends of a few interior points.
//!
//! `cargo run --release --example separatrices`

use neumann_core::critical::critical_set;
use neumann_core::eigenfield::closed_form;
use neumann_core::flow::{left_end, Tracer};
use neumann_core::{DomainSpec, Point, Result};

fn main() -> Result<()> {
    let f = closed_form(&DomainSpec::UnitSquare, 1)?;
    let set = critical_set(&f, 0.02)?;
    let tracer = Tracer::new(&f, &set);
    for (i, p) in set.points.iter().enumerate() {
        if !matches!(p.kind, neumann_core::critical::CriticalKind::Saddle) {
            continue;
        }
        println!("saddle {i} at ({:.3}, {:.3})", p.location.x, p.location.y);
        for s in tracer.separatrices(i)? {
            match &s.trajectory {
                None => println!("  branch {} ({:?}): exterior", s.branch_id, s.branch),
                Some(t) => println!(
                    "  branch {} ({:?}): {} points, length {:.6}, end {:?}, monotonicity defect {:.1e}",
                    s.branch_id,
                    s.branch,
                    t.points.len(),
                    t.length,
                    t.end,
                    t.monotonicity_defect(),
                ),
            }
        }
    }

    // Left ends of the disk's second mode land on the two maxima by side.
    let d = closed_form(&DomainSpec::UnitDisk, 2)?;
    let ds = critical_set(&d, 0.02)?;
    for x in [Point::new(0.5, 0.3), Point::new(-0.4, -0.2), Point::new(0.1, 0.8)] {
        println!("left end of ({:+.2}, {:+.2}) on disk u2: {:?}", x.x, x.y, left_end(&d, &ds, x)?);
    }
    Ok(())
}
