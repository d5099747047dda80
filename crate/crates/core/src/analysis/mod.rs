//! Nodal partitions, Payne points, Courant and corollary checks, the
//! gradient estimate chain for flower domains, and the Morse identities.

mod bounds;
mod checks;
mod flower;
mod nodal;

pub use bounds::{
    a_constant, flower_chain, gradient_bound, gradient_bound_check, gradient_sup, BoundsReport, FlowerChain,
    GradientSup, GRADIENT_GRID,
};
pub use checks::{
    corollary_checks, courant_check, identity_checks, payne_critical_distance, second_mode_bound, CorollaryReport,
    CourantEntry, IdentityReport, SecondModeBound,
};
pub use flower::{
    flower_a_search, flower_a_search_with, ray_maximum, symmetry_and_maxima_check, FlowerSearch, SearchStep,
    SymmetryReport, RAY_SAMPLES, SEARCH_START, SEARCH_STEP,
};
pub use nodal::{nodal_partition, payne_points, NodalComponent, NodalPartition, PaynePoint, Sign, MIN_LEVEL, PAYNE_SAMPLES, REFINE};
