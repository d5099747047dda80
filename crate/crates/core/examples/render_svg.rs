//! SVG drawing of a Neumann complex.
//!
//! `cargo run --release --example render_svg -- out.svg`

use neumann_core::complex::build;
use neumann_core::critical::critical_set;
use neumann_core::eigenfield::closed_form;
use neumann_core::report::render_svg;
use neumann_core::{DomainSpec, Result};

fn main() -> Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "square_k4.svg".into());
    let f = closed_form(&DomainSpec::UnitSquare, 4)?;
    let set = critical_set(&f, 0.02)?;
    let cx = build(&f, &set)?;
    let svg = render_svg(&f, &cx);
    std::fs::write(&path, &svg)?;
    println!("{} faces, {} bytes -> {path}", cx.faces.len(), svg.len());
    Ok(())
}
