use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::critical::CriticalConfig;
use crate::eigenfield::{default_mfs_config, has_closed_form, ChargePlacement, MfsConfig, SolverChoice};
use crate::error::{Error, Result};
use crate::flow::FlowConfig;
use crate::geometry::DomainSpec;

/// Environment variable naming the eigenfield cache directory.
pub const CACHE_ENV: &str = "NEUMANN_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendChoice {
    Auto,
    Closed,
    Mfs,
}

/// MFS settings that may be overridden; unset fields keep the per-domain default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MfsOverrides {
    pub charges: Option<usize>,
    pub collocation: Option<usize>,
    pub charge_distance: Option<f64>,
    pub placement: Option<ChargePlacement>,
    pub threshold: Option<f64>,
}

/// Everything a command needs, assembled from defaults, an optional config
/// file and `--key value` overrides, in that order of precedence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub domain: DomainSpec,
    /// First and last eigen index (equal for a single mode).
    pub k: (u32, u32),
    pub backend: BackendChoice,
    pub mfs: MfsOverrides,
    pub critical: CriticalConfig,
    pub flow: FlowConfig,
    pub h_nodal: f64,
    pub left_ends: usize,
    pub margin: f64,
    pub sweep_n: Vec<u32>,
    pub out_dir: PathBuf,
    pub report: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub suite: String,
    pub only: Vec<String>,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            domain: DomainSpec::UnitDisk,
            k: (1, 1),
            backend: BackendChoice::Auto,
            mfs: MfsOverrides::default(),
            critical: CriticalConfig::default(),
            flow: FlowConfig::default(),
            h_nodal: 0.01,
            left_ends: 25,
            margin: 0.05,
            sweep_n: vec![3, 4, 5, 6],
            out_dir: PathBuf::from("out"),
            report: None,
            svg: None,
            cache_dir: std::env::var_os(CACHE_ENV).map(PathBuf::from),
            suite: "paper".into(),
            only: Vec::new(),
            jobs: 1,
        }
    }
}

/// Canonical key for an accepted spelling, or `None` when unknown.
fn canonical(key: &str) -> Option<&'static str> {
    Some(match key {
        "domain" | "domain.kind" => "domain.kind",
        "n" | "domain.n" => "domain.n",
        "a" | "domain.a" => "domain.a",
        "coeffs" | "domain.coeffs" => "domain.coeffs",
        "k" => "k",
        "backend" => "backend",
        "mfs.charges" => "mfs.charges",
        "mfs.collocation" => "mfs.collocation",
        "mfs.charge_distance" => "mfs.charge_distance",
        "mfs.placement" => "mfs.placement",
        "mfs.threshold" => "mfs.threshold",
        "tol_g" => "tol_g",
        "h_seed" => "h_seed",
        "eps_cap" => "eps_cap",
        "eps_launch" => "eps_launch",
        "flow.tol" => "flow.tol",
        "flow.max_step" => "flow.max_step",
        "h_nodal" => "h_nodal",
        "left_ends" => "left_ends",
        "margin" => "margin",
        "sweep.n" => "sweep.n",
        "out" => "out",
        "report" => "report",
        "svg" => "svg",
        "cache" => "cache",
        "suite" => "suite",
        "only" => "only",
        "jobs" => "jobs",
        _ => return None,
    })
}

/// Every canonical key, for help output.
pub const KEYS: &[&str] = &[
    "domain.kind", "domain.n", "domain.a", "domain.coeffs", "k", "backend", "mfs.charges", "mfs.collocation",
    "mfs.charge_distance", "mfs.placement", "mfs.threshold", "tol_g", "h_seed", "eps_cap", "eps_launch", "flow.tol",
    "flow.max_step", "h_nodal", "left_ends", "margin", "sweep.n", "out", "report", "svg", "cache", "suite", "only",
    "jobs",
];

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse `{v}` for key `{key}`")))
}

fn positive(key: &str, v: &str) -> Result<f64> {
    let x: f64 = parse(key, v)?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Config(format!("`{key}` must be positive, got {v}")));
    }
    Ok(x)
}

fn list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(key, s))
        .collect()
}

/// Domain fields collected before the spec can be assembled.
#[derive(Default)]
struct DomainParts {
    kind: Option<String>,
    n: Option<u32>,
    a: Option<f64>,
    coeffs: Option<Vec<(u32, f64, f64)>>,
}

impl RunConfig {
    /// Parse the flat `key = value` text format. `#` starts a comment.
    pub fn parse_file_text(text: &str) -> Result<Vec<(String, String)>> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(pairs)
    }

    /// `--key value` pairs (or `--key=value`) from a command line tail.
    pub fn parse_args(args: &[String]) -> Result<Vec<(String, String)>> {
        let mut pairs = Vec::new();
        let mut it = args.iter();
        while let Some(arg) = it.next() {
            let key = arg
                .strip_prefix("--")
                .ok_or_else(|| Error::Config(format!("expected `--key value`, got `{arg}`")))?;
            if let Some((k, v)) = key.split_once('=') {
                pairs.push((k.to_string(), v.to_string()));
            } else {
                let v = it
                    .next()
                    .ok_or_else(|| Error::Config(format!("missing value for `--{key}`")))?;
                pairs.push((key.to_string(), v.clone()));
            }
        }
        Ok(pairs)
    }

    /// Defaults, then `config` (or its `config` key), then the remaining pairs.
    pub fn from_sources(file: Option<&Path>, overrides: &[(String, String)]) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut file = file.map(Path::to_path_buf);
        if file.is_none() {
            file = overrides
                .iter()
                .rev()
                .find(|(k, _)| k == "config")
                .map(|(_, v)| PathBuf::from(v));
        }
        if let Some(path) = file {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            pairs.extend(Self::parse_file_text(&text)?);
        }
        pairs.extend(overrides.iter().filter(|(k, _)| k != "config").cloned());
        Self::from_pairs(&pairs)
    }

    pub fn from_pairs(pairs: &[(String, String)]) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut dom = DomainParts::default();
        for (key, v) in pairs {
            let key = canonical(key).ok_or_else(|| Error::Config(format!("unknown key `{key}`")))?;
            match key {
                "domain.kind" => dom.kind = Some(v.trim().to_lowercase()),
                "domain.n" => dom.n = Some(parse(key, v)?),
                "domain.a" => dom.a = Some(parse(key, v)?),
                "domain.coeffs" => {
                    let mut c = Vec::new();
                    for term in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        let parts: Vec<&str> = term.split(':').collect();
                        if parts.len() != 3 {
                            return Err(Error::Config(format!(
                                "coefficient `{term}` is not `index:cos:sin`"
                            )));
                        }
                        c.push((parse(key, parts[0])?, parse(key, parts[1])?, parse(key, parts[2])?));
                    }
                    dom.coeffs = Some(c);
                }
                "k" => {
                    let (lo, hi) = match v.split_once("..") {
                        Some((a, b)) => (parse(key, a)?, parse(key, b)?),
                        None => {
                            let k = parse(key, v)?;
                            (k, k)
                        }
                    };
                    if lo < 1 || hi < lo {
                        return Err(Error::Config(format!("invalid eigen index `{v}`")));
                    }
                    cfg.k = (lo, hi);
                }
                "backend" => {
                    cfg.backend = match v.trim() {
                        "auto" => BackendChoice::Auto,
                        "closed" => BackendChoice::Closed,
                        "mfs" => BackendChoice::Mfs,
                        other => return Err(Error::Config(format!("unknown backend `{other}`"))),
                    }
                }
                "mfs.charges" => cfg.mfs.charges = Some(parse(key, v)?),
                "mfs.collocation" => cfg.mfs.collocation = Some(parse(key, v)?),
                "mfs.charge_distance" => cfg.mfs.charge_distance = Some(positive(key, v)?),
                "mfs.placement" => {
                    cfg.mfs.placement = Some(match v.trim() {
                        "normal" => ChargePlacement::NormalOffset,
                        "graded" => ChargePlacement::Graded,
                        other => return Err(Error::Config(format!("unknown placement `{other}`"))),
                    })
                }
                "mfs.threshold" => cfg.mfs.threshold = Some(positive(key, v)?),
                "tol_g" => cfg.critical.tol_grad = positive(key, v)?,
                "h_seed" => cfg.critical.seed_spacing = positive(key, v)?,
                "eps_cap" => cfg.flow.capture_radius = positive(key, v)?,
                "eps_launch" => cfg.flow.launch_distance = positive(key, v)?,
                "flow.tol" => cfg.flow.tolerance = positive(key, v)?,
                "flow.max_step" => cfg.flow.max_step = positive(key, v)?,
                "h_nodal" => cfg.h_nodal = positive(key, v)?,
                "left_ends" => cfg.left_ends = parse(key, v)?,
                "margin" => cfg.margin = positive(key, v)?,
                "sweep.n" => cfg.sweep_n = list(key, v)?,
                "out" => cfg.out_dir = PathBuf::from(v.trim()),
                "report" => cfg.report = Some(PathBuf::from(v.trim())),
                "svg" => cfg.svg = Some(PathBuf::from(v.trim())),
                "cache" => cfg.cache_dir = Some(PathBuf::from(v.trim())),
                "suite" => cfg.suite = v.trim().to_string(),
                "only" => cfg.only = list(key, v)?,
                "jobs" => {
                    cfg.jobs = parse(key, v)?;
                    if cfg.jobs == 0 {
                        return Err(Error::Config("`jobs` must be at least 1".into()));
                    }
                }
                _ => unreachable!("canonical key without a handler"),
            }
        }
        if let Some(kind) = dom.kind.as_deref() {
            cfg.domain = match kind {
                "square" => DomainSpec::UnitSquare,
                "disk" => DomainSpec::UnitDisk,
                "annulus" => DomainSpec::annulus(dom.a.unwrap_or(0.5)),
                "flower" => DomainSpec::flower(
                    dom.n.ok_or_else(|| Error::Config("flower needs `domain.n`".into()))?,
                    dom.a.ok_or_else(|| Error::Config("flower needs `domain.a`".into()))?,
                ),
                "star" => DomainSpec::star(
                    dom.coeffs
                        .as_deref()
                        .ok_or_else(|| Error::Config("star needs `domain.coeffs`".into()))?,
                ),
                other => return Err(Error::Config(format!("unknown domain kind `{other}`"))),
            };
        } else if dom.n.is_some() || dom.a.is_some() || dom.coeffs.is_some() {
            return Err(Error::Config("domain parameters given without `domain.kind`".into()));
        }
        cfg.domain
            .validate()
            .map_err(|e| Error::Config(format!("invalid domain: {e}")))?;
        Ok(cfg)
    }

    /// MFS settings for the configured domain with overrides applied.
    pub fn mfs_config(&self) -> MfsConfig {
        let mut m: MfsConfig = default_mfs_config(&self.domain);
        let o = &self.mfs;
        m.charges = o.charges.unwrap_or(m.charges);
        m.collocation = o.collocation.unwrap_or(m.collocation.max(m.charges));
        m.charge_distance = o.charge_distance.unwrap_or(m.charge_distance);
        m.placement = o.placement.unwrap_or(m.placement);
        m.threshold = o.threshold.unwrap_or(m.threshold);
        m
    }

    /// Backend for mode `k`.
    pub fn solver(&self, k: u32) -> SolverChoice {
        match self.backend {
            BackendChoice::Closed => SolverChoice::ClosedForm,
            BackendChoice::Mfs => SolverChoice::Mfs(self.mfs_config()),
            BackendChoice::Auto if has_closed_form(&self.domain, k) => SolverChoice::Auto,
            BackendChoice::Auto => SolverChoice::Mfs(self.mfs_config()),
        }
    }
}
