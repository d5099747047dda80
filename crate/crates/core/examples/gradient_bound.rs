//! The sup-norm gradient estimate for normalized ground states, and the
//! constant chain for flower domains.
//!
//! `cargo run --release --example gradient_bound`

use neumann_core::analysis::{a_constant, flower_chain, gradient_bound, gradient_bound_check};
use neumann_core::eigenfield::{closed_form, solve, SolverChoice};
use neumann_core::{DomainSpec, Result};

fn main() -> Result<()> {
    // The estimate as a function of (θ, λ).
    for (theta, lambda) in [(0.0, 5.78), (2.0, 39.0), (16.0, 17.6)] {
        let a = a_constant(theta, lambda);
        println!("θ={theta:5.1} λ={lambda:5.1}: A={a:.6}, bound {:.6}", gradient_bound(a, lambda));
    }

    let fields = [
        closed_form(&DomainSpec::UnitDisk, 1)?,
        closed_form(&DomainSpec::annulus(0.5), 1)?,
        solve(&DomainSpec::flower(3, 0.3), 1, &SolverChoice::Auto)?,
    ];
    for f in &fields {
        let b = gradient_bound_check(f)?;
        println!(
            "{}: θ={:.4} λ={:.6} |∇u|∞≈{:.6} at ({:+.4}, {:+.4}){} ≤ {:.6}: {}",
            f.spec().label(),
            b.theta,
            b.lambda,
            b.lhs,
            b.sup.location.x,
            b.sup.location.y,
            if b.sup.on_boundary { " on ∂Ω" } else { "" },
            b.rhs,
            b.passed(),
        );
    }

    for n in 3..=6 {
        let c = flower_chain(&DomainSpec::flower(n, 0.26))?.expect("flower spec");
        println!(
            "flower n={n}: C={:.6} Λ={:.4} C₂={:.2} θ={:.2} F={:.4} (½−a)F={:.4} < 1: {}",
            c.c, c.big_lambda, c.c2, c.theta, c.f, c.condition, c.holds
        );
    }
    Ok(())
}
