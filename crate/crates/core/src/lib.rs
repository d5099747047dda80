//! Dirichlet–Laplace eigenfunctions on planar analytic domains and their
//! Neumann-domain partitions.
//!
//! The pipeline runs eigenfield → critical set → gradient-flow separatrices
//! → planar complex → counts and checks. Every stage is a module:
//!
//! - [`geometry`]: domains, boundary parameterizations, curvature.
//! - [`specfun`]: Bessel functions and their zeros.
//! - [`eigenfield`]: closed-form and fundamental-solution eigenpairs.
//! - [`critical`]: critical points, indices, critical circles.
//! - [`flow`]: integral curves of `−∇u` and saddle separatrices.
//! - [`complex`]: the Neumann line set as a planar subdivision.
//! - [`analysis`]: nodal domains, Payne points, gradient bounds, identities.
//! - [`report`]: configuration, JSON reports, SVG rendering, verification suite.

pub mod error;
pub mod geometry;
pub mod sampling;
pub mod specfun;
pub mod eigenfield;
pub mod critical;
pub mod flow;
pub mod complex;
pub mod analysis;
pub mod report;

pub use error::{Error, Result};
pub use geometry::{Domain, DomainSpec, Point};
pub use eigenfield::{EigenField, FieldSample};
