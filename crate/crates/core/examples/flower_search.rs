//! Inner-radius search for a flower whose ground state peaks in the petals,
//! followed by the symmetry and maxima check.
//!
//! `cargo run --release --example flower_search -- 3`

use neumann_core::analysis::{flower_a_search, symmetry_and_maxima_check};
use neumann_core::critical::critical_set;
use neumann_core::Result;

fn main() -> Result<()> {
    let n: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let s = flower_a_search(n, 0.05)?;
    for step in &s.steps {
        println!("a={:.2} λ₁={:.8} max |u| on rays {:.6}", step.inner_radius, step.eigenvalue, step.ray_max);
    }
    println!(
        "chosen a={} (direct certificate {}, chain condition {:.4})",
        s.inner_radius, s.direct_certificate, s.chain_certificate.condition
    );
    let field = s.field.as_ref().expect("search keeps the accepted field");
    let set = critical_set(field, 0.02)?;
    let sym = symmetry_and_maxima_check(field, &set, n)?;
    println!(
        "rotation defect {:.1e}, {} maxima, per sector {:?}, nearest ray distance {:.4}, passed {}",
        sym.rotation_defect,
        sym.maxima.len(),
        sym.per_sector,
        sym.min_ray_distance,
        sym.passed()
    );
    for m in &sym.maxima {
        println!("  max at r={:.6} φ={:+.6}", m.norm(), m.angle());
    }
    Ok(())
}
