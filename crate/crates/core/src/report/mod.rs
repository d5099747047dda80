//! Run configuration, per-field analysis reports, the verification
//! suite and SVG rendering.

mod analyze;
mod config;
mod suite;
mod svg;

pub use analyze::{run_pipeline, AnalysisReport, FaceSummary, Pipeline, PipelineOptions, ANALYSIS_SCHEMA_VERSION};
pub use config::{BackendChoice, MfsOverrides, RunConfig, CACHE_ENV, KEYS};
pub use suite::{
    oval, run_suite, run_sweep, ClaimResult, Metadata, Provenance, VerificationReport, CLAIM_IDS,
    REPORT_SCHEMA_VERSION,
};
pub use svg::render_svg;
