//! Closed-form and fundamental-solution eigenpairs side by side.
//!
//! `cargo run --release --example solve_eigenpairs`

use neumann_core::eigenfield::{closed_form, default_mfs_config, solve, SolverChoice};
use neumann_core::{DomainSpec, Point, Result};

fn main() -> Result<()> {
    println!("unit square, λ = π²(m² + n²):");
    for k in 1..=6 {
        let f = closed_form(&DomainSpec::UnitSquare, k)?;
        println!("  k={k} λ={:.12} multiplicity {}", f.eigenvalue(), f.multiplicity());
    }

    // The same disk modes from the closed form and from fundamental solutions.
    let disk = DomainSpec::UnitDisk;
    let mfs = SolverChoice::Mfs(default_mfs_config(&disk));
    for k in 1..=2 {
        let exact = closed_form(&disk, k)?;
        let approx = solve(&disk, k, &mfs)?;
        let p = Point::new(0.3, -0.2);
        println!(
            "disk k={k}: closed {:.12}  mfs {:.12}  |Δλ| {:.1e}  boundary residual {:.1e}  u(p) {:+.6} vs {:+.6}",
            exact.eigenvalue(),
            approx.eigenvalue(),
            (exact.eigenvalue() - approx.eigenvalue()).abs(),
            approx.boundary_residual(512),
            exact.value(p),
            approx.value(p),
        );
    }

    // Non-radial domains only have the MFS backend.
    for spec in [DomainSpec::annulus(0.5), DomainSpec::flower(3, 0.3)] {
        let f = solve(&spec, 1, &SolverChoice::Auto)?;
        println!(
            "{}: λ₁={:.10} via {} (max |u| = {:.3} at {:?})",
            spec.label(),
            f.eigenvalue(),
            f.backend().name(),
            f.normalization().sup * f.scale().abs(),
            f.normalization().argmax,
        );
    }
    Ok(())
}
