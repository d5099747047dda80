//! Critical points with Morse type, index and multiplicity, and the
//! critical circle of a radial ground state.
//!
//! `cargo run --release --example critical_points`

use neumann_core::critical::{critical_set, morse_counts};
use neumann_core::eigenfield::closed_form;
use neumann_core::{DomainSpec, Result};

fn main() -> Result<()> {
    for (spec, k) in [(DomainSpec::UnitSquare, 4), (DomainSpec::UnitDisk, 2), (DomainSpec::annulus(0.5), 1)] {
        let f = closed_form(&spec, k)?;
        let set = critical_set(&f, 0.02)?;
        println!("{} k={k}:", spec.label());
        for p in &set.points {
            println!(
                "  {:<8} at ({:+.6}, {:+.6}) u={:+.6} boundary={} index={} multiplicity={} |∇u|={:.1e}",
                format!("{:?}", p.kind),
                p.location.x,
                p.location.y,
                p.value,
                p.on_boundary,
                p.winding_index,
                p.multiplicity,
                p.gradient_residual,
            );
        }
        for c in &set.circles {
            println!("  {:?} circle r={:.10} u={:.6} |∂u/∂r|={:.1e}", c.kind, c.radius, c.value, c.radial_residual);
        }
        if !set.points.is_empty() {
            let m = morse_counts(&set.points)?;
            println!(
                "  saddles off the nodal set {}, extrema {}, singular multiplicity {} interior + {} boundary",
                m.saddles, m.extrema, m.interior_multiplicity, m.boundary_multiplicity
            );
        }
    }
    Ok(())
}
