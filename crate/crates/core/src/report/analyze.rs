use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::analysis::{
    corollary_checks, gradient_bound_check, identity_checks, nodal_partition, payne_critical_distance,
    second_mode_bound, symmetry_and_maxima_check, BoundsReport, CorollaryReport, IdentityReport, NodalPartition,
    PaynePoint, SecondModeBound, SymmetryReport,
};
use crate::complex::{build_with, launch_robustness, FaceClass, FaceLeftEnds, LaunchRobustness, NeumannComplex, NeumannCount, SignPattern};
use crate::critical::{critical_set_with, CriticalConfig, CriticalCircle, CriticalPoint, CriticalSet};
use crate::eigenfield::EigenField;
use crate::error::Result;
use crate::flow::FlowConfig;
use crate::geometry::{DomainSpec, Point};

/// Settings of the per-field pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub critical: CriticalConfig,
    pub flow: FlowConfig,
    pub h_nodal: f64,
    /// Left-end samples per face; 0 skips the check.
    pub left_ends: usize,
    /// Launch distance divisor for the robustness audit; 0 skips it.
    pub robustness_factor: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            critical: CriticalConfig::default(),
            flow: FlowConfig::default(),
            h_nodal: 0.01,
            left_ends: 25,
            robustness_factor: 4.0,
        }
    }
}

/// Everything computed for one eigenfield.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub field: EigenField,
    pub critical: CriticalSet,
    pub complex: NeumannComplex,
    pub count: NeumannCount,
    pub nodal: NodalPartition,
    pub left_ends: Vec<FaceLeftEnds>,
    pub robustness: Option<LaunchRobustness>,
    /// Wall-clock seconds per stage.
    pub timings: BTreeMap<String, f64>,
}

impl Pipeline {
    pub fn left_end_violations(&self) -> usize {
        self.left_ends.iter().filter(|l| !l.is_unique()).count()
    }

    pub fn area_defect(&self) -> f64 {
        let area = self.field.domain().area();
        (self.complex.face_area_sum() - area).abs() / area
    }
}

fn timed<T>(timings: &mut BTreeMap<String, f64>, stage: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let t = Instant::now();
    let out = f();
    timings.insert(stage.to_string(), t.elapsed().as_secs_f64());
    out
}

/// Critical set, Neumann complex, nodal partition and audits for `field`.
pub fn run_pipeline(field: EigenField, opts: &PipelineOptions) -> Result<Pipeline> {
    let mut timings = BTreeMap::new();
    let critical = timed(&mut timings, "critical", || critical_set_with(&field, &opts.critical))?;
    let complex = timed(&mut timings, "complex", || build_with(&field, &critical, opts.flow))?;
    let count = complex.count();
    let nodal = timed(&mut timings, "nodal", || nodal_partition(&field, opts.h_nodal))?;
    let left_ends = if opts.left_ends > 0 {
        timed(&mut timings, "left_ends", || complex.left_ends(&field, opts.left_ends))?
    } else {
        Vec::new()
    };
    let robustness = if opts.robustness_factor > 0.0 {
        Some(timed(&mut timings, "robustness", || {
            launch_robustness(&field, &complex, opts.robustness_factor)
        })?)
    } else {
        None
    };
    Ok(Pipeline {
        field,
        critical,
        complex,
        count,
        nodal,
        left_ends,
        robustness,
        timings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceSummary {
    pub class: FaceClass,
    pub sign: SignPattern,
    pub area: f64,
    pub sample: Point,
    pub punctures: usize,
}

/// The `analyze` output for one field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub domain: DomainSpec,
    pub index: u32,
    pub eigenvalue: f64,
    pub multiplicity: u32,
    pub backend: String,
    pub critical_points: Vec<CriticalPoint>,
    pub critical_circles: Vec<CriticalCircle>,
    pub neumann: NeumannCount,
    pub faces: Vec<FaceSummary>,
    pub euler_passed: bool,
    pub area_defect: f64,
    pub neumann_length: f64,
    pub nodal_count: usize,
    pub payne: Vec<PaynePoint>,
    pub payne_critical_distance: Option<f64>,
    pub corollaries: CorollaryReport,
    pub left_end_violations: usize,
    pub robustness: Option<LaunchRobustness>,
    pub identities: Option<IdentityReport>,
    pub second_mode: Option<SecondModeBound>,
    pub gradient_bound: Option<BoundsReport>,
    pub symmetry: Option<SymmetryReport>,
}

pub const ANALYSIS_SCHEMA_VERSION: u32 = 1;

impl AnalysisReport {
    pub fn from_pipeline(p: &Pipeline) -> Result<Self> {
        let field = &p.field;
        let spec = field.spec();
        let k = field.index();
        let convex = field.domain().is_convex();
        let smooth = !field.domain().has_corners();
        let identities = if convex && k <= 2 {
            Some(identity_checks(&p.critical, k)?)
        } else {
            None
        };
        let gradient_bound = if k == 1 && smooth {
            Some(gradient_bound_check(field)?)
        } else {
            None
        };
        let symmetry = match spec {
            DomainSpec::Flower { petals, .. } if k == 1 => {
                Some(symmetry_and_maxima_check(field, &p.critical, *petals)?)
            }
            _ => None,
        };
        Ok(AnalysisReport {
            schema_version: ANALYSIS_SCHEMA_VERSION,
            domain: spec.clone(),
            index: k,
            eigenvalue: field.eigenvalue(),
            multiplicity: field.multiplicity(),
            backend: field.backend().name().to_string(),
            critical_points: p.critical.points.clone(),
            critical_circles: p.critical.circles.clone(),
            neumann: p.count,
            faces: p
                .complex
                .faces
                .iter()
                .map(|f| FaceSummary {
                    class: f.class,
                    sign: f.sign,
                    area: f.area,
                    sample: f.sample,
                    punctures: f.punctures.len(),
                })
                .collect(),
            euler_passed: p.complex.euler.passed,
            area_defect: p.area_defect(),
            neumann_length: p.complex.neumann_length(),
            nodal_count: p.nodal.count,
            payne_critical_distance: (!p.nodal.payne.is_empty())
                .then(|| payne_critical_distance(&p.nodal.payne, &p.critical)),
            payne: p.nodal.payne.clone(),
            corollaries: corollary_checks(&p.count, &p.nodal, &p.critical),
            left_end_violations: p.left_end_violations(),
            robustness: p.robustness.clone(),
            identities,
            second_mode: (convex && k == 2).then(|| second_mode_bound(&p.count)),
            gradient_bound,
            symmetry,
        })
    }
}
