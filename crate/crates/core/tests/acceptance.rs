//! The full verification suite at its stated tolerances, one line per criterion.

mod common;

use std::f64::consts::PI;

use neumann_core::report::{run_suite, ClaimResult, RunConfig, CLAIM_IDS};

fn claim<'a>(claims: &'a [ClaimResult], id: &str) -> &'a ClaimResult {
    claims.iter().find(|c| c.id == id).unwrap_or_else(|| panic!("claim {id} missing"))
}

/// Checks of the reported numbers against oracles that do not go through the library.
fn oracle_checks(c: &ClaimResult) -> Vec<String> {
    let m = &c.measured;
    let mut bad = Vec::new();
    let mut expect = |ok: bool, what: &str| {
        if !ok {
            bad.push(what.to_string());
        }
    };
    match c.id.as_str() {
        "square_u1" => {
            let lambda = m["eigenvalue"].as_f64().unwrap();
            expect((lambda - 2.0 * PI * PI).abs() < 1e-12, "square eigenvalue vs 2 pi^2");
            expect(m["neumann_total"] == 4, "square Neumann count");
        }
        "disk_u1" => {
            let j = common::bessel_zero(0, 1);
            let lambda = m["eigenvalue"].as_f64().unwrap();
            expect((lambda - j * j).abs() < 1e-10, "disk eigenvalue vs quadrature zero");
            expect((lambda - 5.783185962946785).abs() < 1e-10, "disk eigenvalue vs literal");
        }
        "disk_u2" => {
            expect(m["neumann_total"] == 3, "disk u2 Neumann count");
            expect(m["nodal_count"] == 2, "disk u2 nodal count");
        }
        "courant" => {
            for shape in ["square", "disk"] {
                let counts = m[shape].as_array().unwrap();
                for (k, n) in counts.iter().enumerate() {
                    expect(n.as_u64().unwrap() <= k as u64 + 1, "nodal count above k");
                }
            }
        }
        "nodal_vs_neumann" => {
            for row in m["cases"].as_array().unwrap() {
                let n = row["neumann_total"].as_u64().unwrap();
                let z = row["nodal_count"].as_u64().unwrap();
                expect(2 * n >= z, "twice the Neumann count below the nodal count");
            }
        }
        "left_end_uniqueness" => {
            for row in m["cases"].as_array().unwrap() {
                expect(row["violations"] == 0, "left-end violation");
            }
        }
        "structural_audits" => {
            for row in m["cases"].as_array().unwrap() {
                expect(row["area_defect"].as_f64().unwrap() < 0.01, "face areas off by more than 1%");
            }
        }
        _ => {}
    }
    bad
}

#[test]
fn full_suite() {
    let report = run_suite(&RunConfig::default()).expect("suite aborted");
    assert_eq!(report.claims.len(), CLAIM_IDS.len());
    let mut failed = Vec::new();
    for (i, id) in CLAIM_IDS.iter().enumerate() {
        let c = claim(&report.claims, id);
        let oracle = oracle_checks(c);
        let ok = c.passed && oracle.is_empty();
        let label = if i < 12 { format!("criterion {:>2}", i + 1) } else { "extra       ".to_string() };
        let detail = c.error.clone().unwrap_or_else(|| oracle.join("; "));
        println!("{label} {:<22} {} {detail}", id, if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed.push(*id);
        }
    }
    println!("suite wall time {:.1} s", report.metadata.total_seconds);
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
    assert!(report.passed);
}
