//! Run selected claims of the verification suite and print the report.
//!
//! `cargo run --release --example verify_suite -- disk_u2 courant`

use neumann_core::report::{run_suite, RunConfig};
use neumann_core::Result;

fn main() -> Result<()> {
    let mut only: Vec<String> = std::env::args().skip(1).collect();
    if only.is_empty() {
        only = vec!["square_u1".into(), "disk_u1".into(), "disk_u2".into(), "identities".into()];
    }
    let pairs = vec![("only".to_string(), only.join(","))];
    let cfg = RunConfig::from_pairs(&pairs)?;
    let report = run_suite(&cfg)?;
    for c in &report.claims {
        println!("{} {:<22} [{:?}] {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.provenance, c.anchor);
    }
    println!("{}", report.body_json()?);
    Ok(())
}
