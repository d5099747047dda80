use std::process::Command;

use neumann_core::eigenfield::{ChargePlacement, SolverChoice};
use neumann_core::report::{run_suite, BackendChoice, RunConfig, VerificationReport, CLAIM_IDS, KEYS};
use neumann_core::{DomainSpec, Error};

fn pairs(items: &[(&str, &str)]) -> Vec<(String, String)> {
    items.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

#[test]
fn defaults() {
    let cfg = RunConfig::from_pairs(&[]).unwrap();
    assert_eq!(cfg.domain, DomainSpec::UnitDisk);
    assert_eq!(cfg.k, (1, 1));
    assert_eq!(cfg.backend, BackendChoice::Auto);
    assert_eq!(cfg.h_nodal, 0.01);
    assert_eq!(cfg.left_ends, 25);
    assert_eq!(cfg.sweep_n, vec![3, 4, 5, 6]);
    assert_eq!(cfg.suite, "paper");
    assert_eq!(cfg.jobs, 1);
}

#[test]
fn keys_and_aliases() {
    let cfg = RunConfig::from_pairs(&pairs(&[
        ("domain", "flower"),
        ("n", "5"),
        ("domain.a", "0.3"),
        ("k", "2..4"),
        ("backend", "mfs"),
        ("mfs.charges", "200"),
        ("mfs.placement", "graded"),
        ("tol_g", "1e-8"),
        ("h_seed", "0.01"),
        ("eps_cap", "2e-3"),
        ("eps_launch", "1e-6"),
        ("flow.max_step", "0.02"),
        ("h_nodal", "0.005"),
        ("sweep.n", "3, 4"),
        ("only", "disk_u1,courant"),
        ("jobs", "2"),
    ]))
    .unwrap();
    assert_eq!(cfg.domain, DomainSpec::flower(5, 0.3));
    assert_eq!(cfg.k, (2, 4));
    assert_eq!(cfg.mfs.charges, Some(200));
    assert_eq!(cfg.mfs.placement, Some(ChargePlacement::Graded));
    assert_eq!(cfg.critical.tol_grad, 1e-8);
    assert_eq!(cfg.critical.seed_spacing, 0.01);
    assert_eq!(cfg.flow.capture_radius, 2e-3);
    assert_eq!(cfg.flow.launch_distance, 1e-6);
    assert_eq!(cfg.flow.max_step, 0.02);
    assert_eq!(cfg.sweep_n, vec![3, 4]);
    assert_eq!(cfg.only, vec!["disk_u1", "courant"]);
    assert_eq!(cfg.jobs, 2);
    match cfg.solver(2) {
        SolverChoice::Mfs(m) => assert_eq!(m.charges, 200),
        _ => panic!("mfs backend expected"),
    }
    let star = RunConfig::from_pairs(&pairs(&[("domain", "star"), ("coeffs", "0:1:0, 3:0.1:0.05")])).unwrap();
    assert_eq!(star.domain, DomainSpec::star(&[(0, 1.0, 0.0), (3, 0.1, 0.05)]));
}

#[test]
fn bad_settings_are_config_errors() {
    let bad: &[&[(&str, &str)]] = &[
        &[("colour", "red")],
        &[("domain", "triangle")],
        &[("domain", "flower"), ("n", "3")],
        &[("domain", "flower"), ("n", "3"), ("a", "0.9")],
        &[("a", "0.3")],
        &[("k", "0")],
        &[("k", "3..2")],
        &[("h_nodal", "-1")],
        &[("jobs", "0")],
        &[("backend", "fem")],
        &[("coeffs", "1:2")],
        &[("tol_g", "abc")],
    ];
    for items in bad {
        match RunConfig::from_pairs(&pairs(items)) {
            Err(Error::Config(_)) => {}
            other => panic!("{items:?} gave {other:?}"),
        }
    }
}

#[test]
fn file_then_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "# annulus run\ndomain = annulus\na = 0.25   # inner radius\nk = 1\n\nleft_ends = 10\n").unwrap();
    let cfg = RunConfig::from_sources(Some(&path), &pairs(&[("left_ends", "5")])).unwrap();
    assert_eq!(cfg.domain, DomainSpec::annulus(0.25));
    assert_eq!(cfg.left_ends, 5);
    let via_key = RunConfig::from_sources(None, &pairs(&[("config", path.to_str().unwrap())])).unwrap();
    assert_eq!(via_key.left_ends, 10);
    assert!(RunConfig::parse_file_text("domain disk").is_err());
    assert!(RunConfig::from_sources(Some(&dir.path().join("missing.cfg")), &[]).is_err());
}

#[test]
fn command_line_tails() {
    let args: Vec<String> = ["--domain", "square", "--k=4", "--out", "o"].iter().map(|s| s.to_string()).collect();
    let p = RunConfig::parse_args(&args).unwrap();
    assert_eq!(p, pairs(&[("domain", "square"), ("k", "4"), ("out", "o")]));
    assert!(RunConfig::parse_args(&["domain".to_string()]).is_err());
    assert!(RunConfig::parse_args(&["--k".to_string()]).is_err());
    assert!(KEYS.iter().all(|k| RunConfig::from_pairs(&[]).is_ok() && !k.is_empty()));
}

#[test]
fn unknown_suite_and_claims_are_rejected() {
    let cfg = RunConfig::from_pairs(&pairs(&[("suite", "other")])).unwrap();
    assert!(matches!(run_suite(&cfg), Err(Error::Config(_))));
    let cfg = RunConfig::from_pairs(&pairs(&[("only", "disk_u1,nonsense")])).unwrap();
    assert!(matches!(run_suite(&cfg), Err(Error::Config(_))));
}

fn cheap(jobs: &str) -> VerificationReport {
    let cfg = RunConfig::from_pairs(&pairs(&[("only", "square_u1,disk_u2,identities"), ("jobs", jobs)])).unwrap();
    run_suite(&cfg).unwrap()
}

#[test]
fn reports_are_deterministic_and_ordered() {
    let a = cheap("1");
    let b = cheap("2");
    assert_eq!(a.body_json().unwrap(), b.body_json().unwrap());
    assert!(a.passed);
    let ids: Vec<&str> = a.claims.iter().map(|c| c.id.as_str()).collect();
    let order: Vec<&str> = CLAIM_IDS.iter().copied().filter(|id| ids.contains(id)).collect();
    assert_eq!(ids, order);
    let parsed: VerificationReport = serde_json::from_str(&a.to_json().unwrap()).unwrap();
    assert_eq!(parsed, a);
    assert!(!a.body_json().unwrap().contains("metadata"));
}

#[test]
fn loose_gradient_tolerance_fails_completeness() {
    let cfg = RunConfig::from_pairs(&pairs(&[("only", "critical_completeness"), ("tol_g", "1e-2")])).unwrap();
    let report = run_suite(&cfg).unwrap();
    assert!(!report.passed);
    assert_eq!(report.failures, vec!["critical_completeness"]);
}

fn neumann(args: &[&str], cwd: &std::path::Path) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_neumann"))
        .args(args)
        .current_dir(cwd)
        .env_remove("NEUMANN_CACHE_DIR")
        .output()
        .unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn cli_exit_codes_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (code, _) = neumann(&["solve", "--domain", "disk", "--k", "1..2", "--out", "o"], d);
    assert_eq!(code, 0);
    assert!(d.join("o/disk_k1.json").exists() && d.join("o/disk_k2.json").exists());

    assert_eq!(neumann(&["solve", "--bogus", "1"], d).0, 2);
    assert_eq!(neumann(&["verify", "--only", "nonsense"], d).0, 2);
    assert_eq!(neumann(&["verify", "--suite", "other"], d).0, 2);

    let (code, stdout) = neumann(&["verify", "--suite", "paper", "--only", "disk_u1", "--report", "r.json"], d);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("PASS disk_u1"));
    let report: VerificationReport = serde_json::from_str(&std::fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    assert!(report.passed);

    let (code, stdout) = neumann(&["verify", "--only", "critical_completeness", "--tol_g", "1e-2", "--out", "t"], d);
    assert_eq!(code, 1, "{stdout}");
    assert!(stdout.contains("FAIL critical_completeness"));

    // A ground state of the square has corners, so the solver is fine but the
    // MFS backend refuses it: a numerical failure.
    assert_eq!(neumann(&["solve", "--domain", "square", "--backend", "mfs"], d).0, 3);

    let (code, _) = neumann(&["render", "--domain", "square", "--k", "4", "--svg", "sq.svg"], d);
    assert_eq!(code, 0);
    assert!(std::fs::read_to_string(d.join("sq.svg")).unwrap().contains("separatrix"));

    let cache = d.join("cache");
    let run = |extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_neumann"))
            .args(["analyze", "--domain", "disk", "--k", "2", "--report", "a.json"])
            .args(extra)
            .current_dir(d)
            .env("NEUMANN_CACHE_DIR", &cache)
            .status()
            .unwrap()
            .code()
    };
    assert_eq!(run(&[]), Some(0));
    assert!(cache.join("disk_k2_auto.json").exists());
    let first = std::fs::read_to_string(d.join("a.json")).unwrap();
    assert_eq!(run(&[]), Some(0));
    assert_eq!(first, std::fs::read_to_string(d.join("a.json")).unwrap());
    let analysis: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(analysis["neumann"]["total"], 3);
    assert_eq!(analysis["nodal_count"], 2);
}
