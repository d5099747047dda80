//! Command-line front end. Settings come from `--key value` pairs after the
//! subcommand, optionally layered over a `--config FILE`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use neumann_core::critical::critical_set_with;
use neumann_core::eigenfield::{load_field, save_field, solve, EigenField};
use neumann_core::report::{
    render_svg, run_pipeline, run_suite, run_sweep, AnalysisReport, BackendChoice, PipelineOptions, RunConfig, KEYS,
};
use neumann_core::{complex, Error, Result};

#[derive(Parser)]
#[command(name = "neumann", version, about = "Neumann domains of Dirichlet-Laplace eigenfunctions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for eigenpairs and write them as field records.
    Solve(Tail),
    /// Critical set, Neumann complex, nodal partition and checks for each mode.
    Analyze(Tail),
    /// Draw the Neumann complex of each mode as SVG.
    Render(Tail),
    /// Run the verification suite.
    Verify(Tail),
    /// Flower inner-radius search over several petal counts.
    Sweep(Tail),
}

#[derive(clap::Args)]
#[command(after_help = keys_help())]
struct Tail {
    /// `--key value` settings.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "--KEY VALUE")]
    settings: Vec<String>,
}

fn keys_help() -> String {
    format!("Keys: config, {}", KEYS.join(", "))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}

fn config(tail: &Tail) -> Result<RunConfig> {
    let pairs = RunConfig::parse_args(&tail.settings)?;
    RunConfig::from_sources(None, &pairs)
}

/// Returns whether every check passed.
fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Solve(t) => {
            let cfg = config(&t)?;
            for k in cfg.k.0..=cfg.k.1 {
                let f = field(&cfg, k)?;
                let path = cfg.out_dir.join(format!("{}.json", stem(&cfg, k)));
                save_field(&f, &path)?;
                println!(
                    "{} k={k} lambda={} multiplicity={} backend={} -> {}",
                    f.spec().label(),
                    f.eigenvalue(),
                    f.multiplicity(),
                    f.backend().name(),
                    path.display()
                );
            }
            Ok(true)
        }
        Command::Analyze(t) => {
            let cfg = config(&t)?;
            let opts = pipeline_options(&cfg);
            let mut all = true;
            for k in cfg.k.0..=cfg.k.1 {
                let p = run_pipeline(field(&cfg, k)?, &opts)?;
                let report = AnalysisReport::from_pipeline(&p)?;
                let path = single_or(&cfg, cfg.report.as_deref(), &format!("{}.analysis.json", stem(&cfg, k)));
                write(&path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
                let ok = report.euler_passed && report.corollaries.passed() && report.left_end_violations == 0;
                all &= ok;
                println!(
                    "{} k={k} neumann={} (boundary {}, interior {}) nodal={} euler={} -> {}",
                    p.field.spec().label(),
                    report.neumann.total,
                    report.neumann.boundary,
                    report.neumann.interior,
                    report.nodal_count,
                    report.euler_passed,
                    path.display()
                );
            }
            Ok(all)
        }
        Command::Render(t) => {
            let cfg = config(&t)?;
            for k in cfg.k.0..=cfg.k.1 {
                let f = field(&cfg, k)?;
                let critical = critical_set_with(&f, &cfg.critical)?;
                let cx = complex::build_with(&f, &critical, cfg.flow)?;
                let path = single_or(&cfg, cfg.svg.as_deref(), &format!("{}.svg", stem(&cfg, k)));
                write(&path, &render_svg(&f, &cx))?;
                println!("{} k={k} -> {}", f.spec().label(), path.display());
            }
            Ok(true)
        }
        Command::Verify(t) => {
            let cfg = config(&t)?;
            let report = run_suite(&cfg)?;
            for c in &report.claims {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                match &c.error {
                    Some(e) => println!("{tag} {:<22} {e}", c.id),
                    None => println!("{tag} {:<22} {}", c.id, c.anchor),
                }
            }
            let path = cfg.report.clone().unwrap_or_else(|| cfg.out_dir.join("report.json"));
            write(&path, &report.to_json()?)?;
            println!("{} of {} claims passed -> {}", report.claims.len() - report.failures.len(), report.claims.len(), path.display());
            Ok(report.passed)
        }
        Command::Sweep(t) => {
            let cfg = config(&t)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.jobs)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            let results = pool.install(|| run_sweep(&cfg.sweep_n, cfg.margin));
            let mut rows = Vec::new();
            let mut all = true;
            for (n, r) in cfg.sweep_n.iter().zip(&results) {
                match r {
                    Ok(s) => {
                        println!(
                            "n={n} a={} ray_max={:.6} direct={} chain_condition={:.4}",
                            s.inner_radius, s.ray_max, s.direct_certificate, s.chain_certificate.condition
                        );
                        rows.push(serde_json::to_value(s)?);
                    }
                    Err(e) => {
                        all = false;
                        println!("n={n} failed: {e}");
                        rows.push(serde_json::json!({ "petals": n, "error": e }));
                    }
                }
            }
            let path = cfg.report.clone().unwrap_or_else(|| cfg.out_dir.join("sweep.json"));
            write(&path, &(serde_json::to_string_pretty(&rows)? + "\n"))?;
            Ok(all)
        }
    }
}

fn pipeline_options(cfg: &RunConfig) -> PipelineOptions {
    PipelineOptions {
        critical: cfg.critical,
        flow: cfg.flow,
        h_nodal: cfg.h_nodal,
        left_ends: cfg.left_ends,
        ..PipelineOptions::default()
    }
}

/// File-name-safe `<domain>_k<k>`, e.g. `annulus_a0.5_k1`.
fn stem(cfg: &RunConfig, k: u32) -> String {
    let mut s = String::new();
    for c in cfg.domain.label().chars() {
        match c {
            c if c.is_ascii_alphanumeric() || c == '.' || c == '-' => s.push(c),
            '=' => {}
            _ if !s.ends_with('_') => s.push('_'),
            _ => {}
        }
    }
    format!("{}_k{k}", s.trim_end_matches('_'))
}

/// `explicit` when a single mode is requested, else a file under `out`.
fn single_or(cfg: &RunConfig, explicit: Option<&Path>, name: &str) -> PathBuf {
    match explicit {
        Some(p) if cfg.k.0 == cfg.k.1 => p.to_path_buf(),
        _ => cfg.out_dir.join(name),
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text)?;
    Ok(())
}

/// Solve mode `k`, going through the cache directory when one is set.
fn field(cfg: &RunConfig, k: u32) -> Result<EigenField> {
    let backend = match cfg.backend {
        BackendChoice::Auto => "auto",
        BackendChoice::Closed => "closed",
        BackendChoice::Mfs => "mfs",
    };
    let cached = cfg.cache_dir.as_ref().map(|d| {
        let tag = if cfg.mfs == Default::default() { String::new() } else { format!("_{:016x}", fingerprint(cfg)) };
        d.join(format!("{}_{backend}{tag}.json", stem(cfg, k)))
    });
    if let Some(path) = cached.as_ref().filter(|p| p.exists()) {
        if let Ok(f) = load_field(path) {
            return Ok(f);
        }
    }
    let f = solve(&cfg.domain, k, &cfg.solver(k))?;
    if let Some(path) = cached {
        save_field(&f, &path)?;
    }
    Ok(f)
}

/// FNV-1a over the MFS overrides, to keep differently tuned solves apart.
fn fingerprint(cfg: &RunConfig) -> u64 {
    let text = serde_json::to_string(&cfg.mfs).unwrap_or_default();
    text.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}
