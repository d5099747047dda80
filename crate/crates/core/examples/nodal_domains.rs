//! Nodal partitions, Payne points and the Courant bound.
//!
//! `cargo run --release --example nodal_domains`

use neumann_core::analysis::{courant_check, nodal_partition};
use neumann_core::eigenfield::closed_form;
use neumann_core::{DomainSpec, Result};

fn main() -> Result<()> {
    for spec in [DomainSpec::UnitSquare, DomainSpec::UnitDisk] {
        let fields: Vec<_> = (1..=6).map(|k| closed_form(&spec, k)).collect::<Result<_>>()?;
        for e in courant_check(&fields, 0.01)? {
            println!("{} k={}: {} nodal domains (≤ k: {})", spec.label(), e.k, e.nodal_count, e.passed);
        }
    }

    let f = closed_form(&DomainSpec::UnitDisk, 2)?;
    let p = nodal_partition(&f, 0.01)?;
    println!(
        "disk u2: {} nodal domains (+{} / −{}), {} saddle cells",
        p.count, p.positive.len(), p.negative.len(), p.saddle_cells
    );
    for c in &p.components {
        println!("  {:?} domain, {} samples, peak {:.6}", c.sign, c.samples, c.peak);
    }
    for q in &p.payne {
        println!("  Payne point ({:+.12}, {:+.12})", q.location.x, q.location.y);
    }
    Ok(())
}
