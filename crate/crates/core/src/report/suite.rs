use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::analyze::{run_pipeline, Pipeline, PipelineOptions};
use super::config::RunConfig;
use crate::analysis::{
    corollary_checks, courant_check, flower_a_search, gradient_bound_check, identity_checks, symmetry_and_maxima_check,
    CourantEntry, FlowerSearch, IdentityReport,
};
use crate::complex::FaceClass;
use crate::critical::{critical_set_with, morse_counts, CircleKind, CriticalKind};
use crate::eigenfield::{closed_form, solve, EigenField, MfsConfig, SolverChoice};
use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point};
use crate::sampling;
use crate::specfun::{bessel_derivative_root, bessel_root};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Provenance {
    /// Stated in the literature.
    Paper,
    /// Immediate from the definitions.
    Trivial,
    /// Computed by an independent oracle.
    Derived,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub id: String,
    pub anchor: String,
    pub provenance: Provenance,
    pub passed: bool,
    pub measured: Value,
    pub expected: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Run environment and timings; excluded from reproducibility comparisons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub os: String,
    pub arch: String,
    pub jobs: usize,
    pub started_unix: u64,
    pub total_seconds: f64,
    pub stage_seconds: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub suite: String,
    pub passed: bool,
    pub failures: Vec<String>,
    pub claims: Vec<ClaimResult>,
    pub metadata: Metadata,
}

impl VerificationReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// The report without its metadata block; identical configs give identical bodies.
    pub fn body_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Value::Object(m) = &mut v {
            m.remove("metadata");
        }
        Ok(serde_json::to_string_pretty(&v)? + "\n")
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.id == id)
    }
}

/// Units of work shared between claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum CaseKey {
    Square1,
    Disk1,
    Disk2,
    Annulus1,
    Flower(u32),
    MfsDisk,
    Oval1,
    Courant,
}

impl CaseKey {
    fn name(&self) -> String {
        match self {
            CaseKey::Square1 => "square_u1".into(),
            CaseKey::Disk1 => "disk_u1".into(),
            CaseKey::Disk2 => "disk_u2".into(),
            CaseKey::Annulus1 => "annulus_u1".into(),
            CaseKey::Flower(n) => format!("flower_n{n}_u1"),
            CaseKey::MfsDisk => "mfs_disk".into(),
            CaseKey::Oval1 => "oval_u1".into(),
            CaseKey::Courant => "courant".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct MfsComparison {
    k: u32,
    closed_form: f64,
    mfs: f64,
    eigenvalue_error: f64,
    sup_difference: f64,
}

enum CaseData {
    Pipeline {
        pipeline: Box<Pipeline>,
        search: Option<FlowerSearch>,
    },
    Mfs(Vec<MfsComparison>),
    Oval {
        eigenvalue: f64,
        identity: IdentityReport,
    },
    Courant {
        square: Vec<CourantEntry>,
        disk: Vec<CourantEntry>,
    },
}

/// The oval `r = 1 + 0.1 cos 2φ` used as a smooth convex non-radial test domain.
pub fn oval() -> DomainSpec {
    DomainSpec::star(&[(0, 1.0, 0.0), (2, 0.1, 0.0)])
}

/// Declared claims, in report order.
pub const CLAIM_IDS: [&str; 13] = [
    "square_u1",
    "disk_u1",
    "disk_u2",
    "mfs_cross_validation",
    "flower_maxima",
    "gradient_bound",
    "courant",
    "nodal_vs_neumann",
    "identities",
    "annulus_u1",
    "left_end_uniqueness",
    "structural_audits",
    "critical_completeness",
];

fn claim_meta(id: &str) -> (&'static str, Provenance) {
    match id {
        "square_u1" => ("unit square ground state: four boundary Neumann domains, corner saddles", Provenance::Paper),
        "disk_u1" => ("disk ground state: one Neumann domain punctured at the centre", Provenance::Paper),
        "disk_u2" => ("disk second mode: three Neumann domains, two nodal domains, two Payne points", Provenance::Paper),
        "mfs_cross_validation" => ("fundamental solutions agree with the disk closed forms", Provenance::Derived),
        "flower_maxima" => ("flower ground state: n maxima in one orbit, off the symmetry rays", Provenance::Paper),
        "gradient_bound" => ("sup-norm gradient estimate for ground states", Provenance::Paper),
        "courant" => ("k-th mode has at most k nodal domains", Provenance::Paper),
        "nodal_vs_neumann" => ("twice the Neumann count bounds the nodal count", Provenance::Paper),
        "identities" => ("saddle-extremum and multiplicity identities on convex domains", Provenance::Paper),
        "annulus_u1" => ("annulus ground state: circle of maxima, two Neumann domains", Provenance::Derived),
        "left_end_uniqueness" => ("left ends within a Neumann domain share one maximum or curve", Provenance::Paper),
        "structural_audits" => ("Euler characteristic, area sum and launch robustness", Provenance::Paper),
        "critical_completeness" => ("disk critical sets match the Bessel oracle", Provenance::Derived),
        _ => ("", Provenance::Derived),
    }
}

fn needs(id: &str, flowers: &[u32]) -> Vec<CaseKey> {
    let pipelines = || {
        let mut v = vec![CaseKey::Square1, CaseKey::Disk1, CaseKey::Disk2, CaseKey::Annulus1];
        v.extend(flowers.iter().map(|&n| CaseKey::Flower(n)));
        v
    };
    match id {
        "square_u1" => vec![CaseKey::Square1],
        "disk_u1" => vec![CaseKey::Disk1],
        "disk_u2" => vec![CaseKey::Disk2],
        "mfs_cross_validation" => vec![CaseKey::MfsDisk],
        "flower_maxima" => flowers.iter().map(|&n| CaseKey::Flower(n)).collect(),
        "gradient_bound" => {
            let mut v = vec![CaseKey::Disk1, CaseKey::Annulus1];
            v.extend(flowers.iter().map(|&n| CaseKey::Flower(n)));
            v
        }
        "courant" => vec![CaseKey::Courant],
        "identities" => vec![CaseKey::Disk1, CaseKey::Disk2, CaseKey::Oval1],
        "annulus_u1" => vec![CaseKey::Annulus1],
        "critical_completeness" => vec![CaseKey::Disk1, CaseKey::Disk2],
        _ => pipelines(),
    }
}

struct Suite {
    opts: PipelineOptions,
    margin: f64,
    flowers: Vec<u32>,
    cases: BTreeMap<CaseKey, std::result::Result<CaseData, String>>,
}

type Outcome = std::result::Result<(bool, Value, Value), String>;

impl Suite {
    fn compute(&self, key: CaseKey) -> Result<CaseData> {
        let pipeline = |field: EigenField| -> Result<CaseData> {
            Ok(CaseData::Pipeline {
                pipeline: Box::new(run_pipeline(field, &self.opts)?),
                search: None,
            })
        };
        match key {
            CaseKey::Square1 => pipeline(closed_form(&DomainSpec::UnitSquare, 1)?),
            CaseKey::Disk1 => pipeline(closed_form(&DomainSpec::UnitDisk, 1)?),
            CaseKey::Disk2 => pipeline(closed_form(&DomainSpec::UnitDisk, 2)?),
            CaseKey::Annulus1 => pipeline(closed_form(&DomainSpec::annulus(0.5), 1)?),
            CaseKey::Flower(n) => {
                let mut search = flower_a_search(n, self.margin)?;
                let field = search.field.take().expect("search returns its field");
                Ok(CaseData::Pipeline {
                    pipeline: Box::new(run_pipeline(field, &self.opts)?),
                    search: Some(search),
                })
            }
            CaseKey::MfsDisk => {
                let cfg = SolverChoice::Mfs(MfsConfig::default());
                let mut out = Vec::new();
                for k in [1, 2] {
                    let cf = closed_form(&DomainSpec::UnitDisk, k)?;
                    let mfs = solve(&DomainSpec::UnitDisk, k, &cfg)?;
                    out.push(MfsComparison {
                        k,
                        closed_form: cf.eigenvalue(),
                        mfs: mfs.eigenvalue(),
                        eigenvalue_error: (mfs.eigenvalue() - cf.eigenvalue()).abs(),
                        sup_difference: aligned_difference(&cf, &mfs),
                    });
                }
                Ok(CaseData::Mfs(out))
            }
            CaseKey::Oval1 => {
                let field = solve(&oval(), 1, &SolverChoice::Auto)?;
                let critical = critical_set_with(&field, &self.opts.critical)?;
                Ok(CaseData::Oval {
                    eigenvalue: field.eigenvalue(),
                    identity: identity_checks(&critical, 1)?,
                })
            }
            CaseKey::Courant => {
                let modes = |spec: &DomainSpec| -> Result<Vec<EigenField>> {
                    (1..=6).map(|k| closed_form(spec, k)).collect()
                };
                Ok(CaseData::Courant {
                    square: courant_check(&modes(&DomainSpec::UnitSquare)?, self.opts.h_nodal)?,
                    disk: courant_check(&modes(&DomainSpec::UnitDisk)?, self.opts.h_nodal)?,
                })
            }
        }
    }

    fn case(&self, key: CaseKey) -> std::result::Result<&CaseData, String> {
        match self.cases.get(&key) {
            Some(Ok(c)) => Ok(c),
            Some(Err(e)) => Err(format!("{}: {e}", key.name())),
            None => Err(format!("{}: not computed", key.name())),
        }
    }

    fn pipeline(&self, key: CaseKey) -> std::result::Result<&Pipeline, String> {
        match self.case(key)? {
            CaseData::Pipeline { pipeline, .. } => Ok(pipeline),
            _ => Err(format!("{}: not a pipeline case", key.name())),
        }
    }

    fn pipeline_keys(&self) -> Vec<CaseKey> {
        let mut v = vec![CaseKey::Square1, CaseKey::Disk1, CaseKey::Disk2, CaseKey::Annulus1];
        v.extend(self.flowers.iter().map(|&n| CaseKey::Flower(n)));
        v
    }

    fn evaluate(&self, id: &str) -> Outcome {
        match id {
            "square_u1" => self.square_u1(),
            "disk_u1" => self.disk_u1(),
            "disk_u2" => self.disk_u2(),
            "mfs_cross_validation" => self.mfs(),
            "flower_maxima" => self.flower_maxima(),
            "gradient_bound" => self.gradient_bound(),
            "courant" => self.courant(),
            "nodal_vs_neumann" => self.nodal_vs_neumann(),
            "identities" => self.identities(),
            "annulus_u1" => self.annulus(),
            "left_end_uniqueness" => self.left_ends(),
            "structural_audits" => self.audits(),
            "critical_completeness" => self.critical_completeness(),
            other => Err(format!("unknown claim {other}")),
        }
    }

    fn square_u1(&self) -> Outcome {
        let p = self.pipeline(CaseKey::Square1)?;
        let lambda_err = (p.field.eigenvalue() - 2.0 * PI * PI).abs();
        let corners = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)].map(|(x, y)| Point::new(x, y));
        let corner_saddles = corners
            .iter()
            .filter(|&&c| {
                p.critical
                    .points
                    .iter()
                    .any(|q| q.kind == CriticalKind::Saddle && q.on_boundary && q.location.dist(c) < 1e-12)
            })
            .count();
        let all_boundary = p.complex.faces.iter().all(|f| f.class == FaceClass::BoundaryNd);
        let passed = lambda_err <= 1e-12 && p.count.total == 4 && corner_saddles == 4 && all_boundary;
        Ok((
            passed,
            json!({"eigenvalue": p.field.eigenvalue(), "eigenvalue_error": lambda_err, "neumann_total": p.count.total,
                   "boundary_domains": p.count.boundary, "corner_saddles": corner_saddles}),
            json!({"eigenvalue": 2.0 * PI * PI, "eigenvalue_tolerance": 1e-12, "neumann_total": 4,
                   "boundary_domains": 4, "corner_saddles": 4}),
        ))
    }

    fn disk_u1(&self) -> Outcome {
        let p = self.pipeline(CaseKey::Disk1)?;
        let j01 = bessel_root(0, 1);
        let lambda_err = (p.field.eigenvalue() - j01 * j01).abs();
        let puncture: Vec<f64> = p
            .complex
            .punctures
            .iter()
            .map(|&i| p.critical.points[i].location.norm())
            .collect();
        let neumann_edges = p.complex.edges.iter().filter(|e| e.in_neumann_set()).count();
        let passed = p.count.total == 1
            && puncture.len() == 1
            && puncture[0] < 1e-8
            && neumann_edges == 0
            && lambda_err <= 1e-10;
        Ok((
            passed,
            json!({"neumann_total": p.count.total, "puncture_radii": puncture, "neumann_edges": neumann_edges,
                   "eigenvalue": p.field.eigenvalue(), "eigenvalue_error": lambda_err}),
            json!({"neumann_total": 1, "punctures": 1, "puncture_radius_below": 1e-8, "neumann_edges": 0,
                   "eigenvalue": j01 * j01, "eigenvalue_tolerance": 1e-10}),
        ))
    }

    fn disk_u2(&self) -> Outcome {
        let p = self.pipeline(CaseKey::Disk2)?;
        let payne: Vec<Point> = p.nodal.payne.iter().map(|q| q.location).collect();
        let targets = [Point::new(0.0, 1.0), Point::new(0.0, -1.0)];
        let payne_err = if payne.len() == 2 {
            targets
                .iter()
                .map(|t| payne.iter().map(|q| q.dist(*t)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        let extrema = morse_counts(&p.critical.points).map_err(|e| e.to_string())?.extrema;
        let passed = p.count.total == 3
            && p.count.boundary == 2
            && p.count.interior == 1
            && p.nodal.count == 2
            && payne_err <= 1e-6
            && extrema == 2;
        Ok((
            passed,
            json!({"neumann_total": p.count.total, "boundary": p.count.boundary, "interior": p.count.interior,
                   "nodal_count": p.nodal.count, "payne_points": payne, "payne_error": payne_err, "extrema": extrema}),
            json!({"neumann_total": 3, "boundary": 2, "interior": 1, "nodal_count": 2,
                   "payne_points": targets, "payne_tolerance": 1e-6, "extrema": 2}),
        ))
    }

    fn mfs(&self) -> Outcome {
        let CaseData::Mfs(rows) = self.case(CaseKey::MfsDisk)? else {
            return Err("mfs case has the wrong kind".into());
        };
        let passed = rows
            .iter()
            .all(|r| r.eigenvalue_error < 1e-6 && r.sup_difference < 1e-6);
        Ok((
            passed,
            json!({"modes": rows}),
            json!({"eigenvalue_tolerance": 1e-6, "sup_difference_tolerance": 1e-6}),
        ))
    }

    fn flower_maxima(&self) -> Outcome {
        let mut rows = Vec::new();
        let mut passed = true;
        for &n in &self.flowers {
            let key = CaseKey::Flower(n);
            let CaseData::Pipeline { pipeline, search } = self.case(key)? else {
                return Err("flower case has the wrong kind".into());
            };
            let search = search.as_ref().ok_or("flower case without search")?;
            let sym = symmetry_and_maxima_check(&pipeline.field, &pipeline.critical, n).map_err(|e| e.to_string())?;
            let ok = sym.passed() && pipeline.count.total >= n as usize && search.direct_certificate;
            passed &= ok;
            rows.push(json!({
                "n": n, "a": search.inner_radius, "ray_max": search.ray_max, "eigenvalue": pipeline.field.eigenvalue(),
                "maxima": sym.maxima.len(), "angle_defect": sym.angle_defect, "rotation_defect": sym.rotation_defect,
                "per_sector": sym.per_sector, "min_ray_distance": sym.min_ray_distance,
                "neumann_total": pipeline.count.total, "chain_condition": search.chain_certificate.condition,
                "chain_certificate_holds": search.chain_certificate.holds, "passed": ok,
            }));
        }
        Ok((
            passed,
            json!({"cases": rows}),
            json!({"maxima": "n", "angle_tolerance": 1e-5, "rotation_tolerance": 1e-6, "per_sector": 1,
                   "min_ray_distance_above": 1e-3, "neumann_total_at_least": "n", "ray_max_at_most": 1.0 - self.margin}),
        ))
    }

    fn gradient_bound(&self) -> Outcome {
        let mut keys = vec![CaseKey::Disk1, CaseKey::Annulus1];
        keys.extend(self.flowers.iter().map(|&n| CaseKey::Flower(n)));
        let mut rows = Vec::new();
        let mut passed = true;
        for key in keys {
            let p = self.pipeline(key)?;
            let b = gradient_bound_check(&p.field).map_err(|e| e.to_string())?;
            passed &= b.passed();
            rows.push(json!({"case": key.name(), "theta": b.theta, "lambda": b.lambda, "a": b.a,
                             "precondition_ok": b.precondition_ok, "lhs": b.lhs, "rhs": b.rhs,
                             "margin": b.margin(), "grid_spacing": b.sup.grid_spacing, "flower_chain": b.flower}));
        }
        Ok((
            passed,
            json!({"cases": rows}),
            json!({"precondition": "sqrt(lambda) <= 2A", "inequality": "lhs < rhs"}),
        ))
    }

    fn courant(&self) -> Outcome {
        let CaseData::Courant { square, disk } = self.case(CaseKey::Courant)? else {
            return Err("courant case has the wrong kind".into());
        };
        let passed = square.iter().chain(disk).all(|e| e.passed);
        let counts = |v: &[CourantEntry]| v.iter().map(|e| e.nodal_count).collect::<Vec<_>>();
        Ok((
            passed,
            json!({"square": counts(square), "disk": counts(disk)}),
            json!({"square": [1, 2, 2, 4, 3, 3], "disk": [1, 2, 2, 4, 4, 2], "bound": "count <= k"}),
        ))
    }

    fn nodal_vs_neumann(&self) -> Outcome {
        let mut rows = Vec::new();
        let mut passed = true;
        for key in self.pipeline_keys() {
            let p = self.pipeline(key)?;
            let c = corollary_checks(&p.count, &p.nodal, &p.critical);
            passed &= c.nodal_bound;
            rows.push(json!({"case": key.name(), "neumann_total": c.neumann_total, "nodal_count": c.nodal_count,
                             "holds": c.nodal_bound}));
        }
        Ok((passed, json!({"cases": rows}), json!({"bound": "2 * neumann_total >= nodal_count"})))
    }

    fn identities(&self) -> Outcome {
        let d1 = identity_checks(&self.pipeline(CaseKey::Disk1)?.critical, 1).map_err(|e| e.to_string())?;
        let d2 = identity_checks(&self.pipeline(CaseKey::Disk2)?.critical, 2).map_err(|e| e.to_string())?;
        let CaseData::Oval { eigenvalue, identity } = self.case(CaseKey::Oval1)? else {
            return Err("oval case has the wrong kind".into());
        };
        let passed = d1.passed && d2.passed && identity.passed;
        Ok((
            passed,
            json!({"disk_u1_saddle_excess": d1.saddle_excess, "oval_u1_saddle_excess": identity.saddle_excess,
                   "oval_u1_eigenvalue": eigenvalue, "disk_u2_multiplicity_sum": d2.multiplicity_sum,
                   "disk_u2_counts": d2.counts}),
            json!({"disk_u1_saddle_excess": -1, "oval_u1_saddle_excess": -1, "disk_u2_multiplicity_sum": -1}),
        ))
    }

    fn annulus(&self) -> Outcome {
        let p = self.pipeline(CaseKey::Annulus1)?;
        let circle = p.critical.circles.iter().find(|c| c.kind == CircleKind::MaxCurve);
        let c = corollary_checks(&p.count, &p.nodal, &p.critical);
        let passed = circle.is_some_and(|c| c.radial_residual < 1e-10)
            && p.count.total == 2
            && c.max_circles == 1
            && c.maxima_bound;
        Ok((
            passed,
            json!({"circle_radius": circle.map(|c| c.radius), "radial_residual": circle.map(|c| c.radial_residual),
                   "neumann_total": p.count.total, "max_circles": c.max_circles,
                   "isolated_maxima": c.isolated_maxima, "maxima_bound": c.maxima_bound}),
            json!({"radial_residual_below": 1e-10, "neumann_total": 2, "max_circles": 1, "maxima_bound": true}),
        ))
    }

    fn left_ends(&self) -> Outcome {
        let mut rows = Vec::new();
        let mut passed = true;
        for key in self.pipeline_keys() {
            let p = self.pipeline(key)?;
            let v = p.left_end_violations();
            let samples: usize = p.left_ends.iter().map(|l| l.samples).sum();
            passed &= v == 0 && !p.left_ends.is_empty();
            rows.push(json!({"case": key.name(), "faces": p.left_ends.len(), "samples": samples, "violations": v}));
        }
        Ok((
            passed,
            json!({"cases": rows}),
            json!({"violations": 0, "samples_per_face": self.opts.left_ends}),
        ))
    }

    fn audits(&self) -> Outcome {
        let mut rows = Vec::new();
        let mut passed = true;
        for key in self.pipeline_keys() {
            let p = self.pipeline(key)?;
            let rob = p.robustness.as_ref();
            let ok = p.complex.euler.passed && p.area_defect() < 0.01 && rob.is_some_and(|r| r.passed());
            passed &= ok;
            rows.push(json!({"case": key.name(), "euler": p.complex.euler, "area_defect": p.area_defect(),
                             "robustness": rob, "passed": ok}));
        }
        Ok((
            passed,
            json!({"cases": rows}),
            json!({"euler": true, "area_defect_below": 0.01, "launch_mismatches": 0, "launch_factor": self.opts.robustness_factor}),
        ))
    }

    fn critical_completeness(&self) -> Outcome {
        let d1 = self.pipeline(CaseKey::Disk1)?;
        let d2 = self.pipeline(CaseKey::Disk2)?;
        // Oracle: the maximum of J0(j01 r) at the origin; for J1(j11 r) cos φ the
        // extrema sit where J1' vanishes, and the boundary critical points at φ = ±π/2.
        let r2 = bessel_derivative_root(1, 1) / bessel_root(1, 1);
        let oracle1 = vec![Point::ORIGIN];
        let oracle2 = vec![Point::new(r2, 0.0), Point::new(-r2, 0.0), Point::new(0.0, 1.0), Point::new(0.0, -1.0)];
        let match_err = |found: &[Point], oracle: &[Point]| -> f64 {
            if found.len() != oracle.len() {
                return f64::INFINITY;
            }
            oracle
                .iter()
                .map(|o| found.iter().map(|f| f.dist(*o)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        let locs = |p: &Pipeline| p.critical.points.iter().map(|c| c.location).collect::<Vec<_>>();
        let residual = |p: &Pipeline| p.critical.points.iter().map(|c| c.gradient_residual).fold(0.0, f64::max);
        let e1 = match_err(&locs(d1), &oracle1);
        let e2 = match_err(&locs(d2), &oracle2);
        let passed = e1 < 1e-8 && e2 < 1e-8 && residual(d1) < 1e-8 && residual(d2) < 1e-8;
        Ok((
            passed,
            json!({"disk_u1_points": d1.critical.points.len(), "disk_u1_location_error": e1,
                   "disk_u1_gradient_residual": residual(d1), "disk_u2_points": d2.critical.points.len(),
                   "disk_u2_location_error": e2, "disk_u2_gradient_residual": residual(d2)}),
            json!({"disk_u1_points": 1, "disk_u2_points": 4, "location_tolerance": 1e-8,
                   "gradient_residual_below": 1e-8}),
        ))
    }
}

/// `max |u − s v|` over interior lattice points, with the sign `s` aligning `v` to `u`.
fn aligned_difference(u: &EigenField, v: &EigenField) -> f64 {
    let pts = sampling::lattice(u.domain(), 0.02, 0.0, None);
    let dot: f64 = pts.iter().map(|&p| u.value(p) * v.value(p)).sum();
    let s = if dot < 0.0 { -1.0 } else { 1.0 };
    pts.par_iter()
        .map(|&p| (u.value(p) - s * v.value(p)).abs())
        .reduce(|| 0.0, f64::max)
}

/// Run the `paper` suite, or the claims listed in `cfg.only`.
pub fn run_suite(cfg: &RunConfig) -> Result<VerificationReport> {
    if cfg.suite != "paper" {
        return Err(Error::Config(format!("unknown suite `{}`", cfg.suite)));
    }
    for id in &cfg.only {
        if !CLAIM_IDS.contains(&id.as_str()) {
            return Err(Error::Config(format!(
                "unknown claim `{id}`; known claims: {}",
                CLAIM_IDS.join(", ")
            )));
        }
    }
    let started = Instant::now();
    let started_unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let selected: Vec<&str> = CLAIM_IDS
        .iter()
        .copied()
        .filter(|id| cfg.only.is_empty() || cfg.only.iter().any(|o| o == id))
        .collect();
    let mut suite = Suite {
        opts: PipelineOptions {
            critical: cfg.critical,
            flow: cfg.flow,
            h_nodal: cfg.h_nodal,
            left_ends: cfg.left_ends,
            robustness_factor: 4.0,
        },
        margin: cfg.margin,
        flowers: cfg.sweep_n.clone(),
        cases: BTreeMap::new(),
    };
    let mut keys: Vec<CaseKey> = selected.iter().flat_map(|id| needs(id, &suite.flowers)).collect();
    keys.sort();
    keys.dedup();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let results: Vec<(CaseKey, std::result::Result<CaseData, String>, f64)> = pool.install(|| {
        keys.par_iter()
            .map(|&k| {
                let t = Instant::now();
                let r = suite.compute(k).map_err(|e| e.to_string());
                (k, r, t.elapsed().as_secs_f64())
            })
            .collect()
    });
    let mut stage_seconds = BTreeMap::new();
    for (k, r, secs) in results {
        stage_seconds.insert(format!("{}.total", k.name()), secs);
        if let Ok(CaseData::Pipeline { pipeline, .. }) = &r {
            for (stage, s) in &pipeline.timings {
                stage_seconds.insert(format!("{}.{stage}", k.name()), *s);
            }
        }
        suite.cases.insert(k, r);
    }

    let mut claims = Vec::new();
    for id in selected {
        let (anchor, provenance) = claim_meta(id);
        let t = Instant::now();
        let (passed, measured, expected, error) = match suite.evaluate(id) {
            Ok((p, m, e)) => (p, m, e, None),
            Err(e) => (false, Value::Null, Value::Null, Some(e)),
        };
        stage_seconds.insert(format!("claim.{id}"), t.elapsed().as_secs_f64());
        claims.push(ClaimResult {
            id: id.to_string(),
            anchor: anchor.to_string(),
            provenance,
            passed,
            measured,
            expected,
            error,
        });
    }
    let failures: Vec<String> = claims.iter().filter(|c| !c.passed).map(|c| c.id.clone()).collect();
    Ok(VerificationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        suite: cfg.suite.clone(),
        passed: failures.is_empty(),
        failures,
        claims,
        metadata: Metadata {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
            jobs: cfg.jobs,
            started_unix,
            total_seconds: started.elapsed().as_secs_f64(),
            stage_seconds,
        },
    })
}

/// Flower `a`-search over a list of petal counts.
pub fn run_sweep(petals: &[u32], margin: f64) -> Vec<std::result::Result<FlowerSearch, String>> {
    petals
        .iter()
        .map(|&n| flower_a_search(n, margin).map_err(|e| e.to_string()))
        .collect()
}
