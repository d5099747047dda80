//! Saving an eigenfield and loading it back bit-for-bit.
//!
//! `cargo run --release --example field_cache`

use neumann_core::eigenfield::{load_field, save_field, solve, SolverChoice};
use neumann_core::{DomainSpec, Point, Result};

fn main() -> Result<()> {
    let spec = DomainSpec::star(&[(0, 1.0, 0.0), (2, 0.1, 0.0)]);
    let f = solve(&spec, 1, &SolverChoice::Auto)?;
    let path = std::env::temp_dir().join("neumann_field_cache_example.json");
    save_field(&f, &path)?;
    let g = load_field(&path)?;
    let p = Point::new(0.2, 0.1);
    println!(
        "{}: λ={} saved to {}; reloaded u(p) identical: {}",
        spec.label(),
        f.eigenvalue(),
        path.display(),
        f.value(p).to_bits() == g.value(p).to_bits()
    );
    Ok(())
}
