//! Dirichlet eigenpairs `−Δu = λu`, `u = 0` on the boundary, as fields that
//! can be evaluated with exact gradient and Hessian.
//!
//! Two backends produce them: separable closed forms (square, disk, radial
//! annulus modes) and the method of fundamental solutions, which represents
//! `u` as a weighted sum of `Y0(√λ |x − y_j|)` over exterior charges `y_j`.

mod cache;
mod closed;
mod mfs;
mod solve;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use cache::{load_field, save_field, FieldRecord};
pub use closed::{closed_form, closed_form_modes, ClosedForm, TrigBranch};
pub use mfs::{mfs_solve, sigma_curve, ChargePlacement, MfsConfig, MfsExpansion, MfsSolution};
pub use solve::{default_mfs_config, eigenvalue_window, has_closed_form, inscribed_radius, solve, SolverChoice};

use crate::error::{Error, Result};
use crate::geometry::{Domain, DomainSpec, Point};
use crate::sampling;

/// Value, gradient and (symmetric) Hessian of a field at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldSample {
    pub value: f64,
    pub grad: Point,
    /// `[u_xx, u_xy, u_yy]`
    pub hess: [f64; 3],
}

impl FieldSample {
    pub fn scaled(self, s: f64) -> Self {
        FieldSample {
            value: self.value * s,
            grad: self.grad * s,
            hess: [self.hess[0] * s, self.hess[1] * s, self.hess[2] * s],
        }
    }

    pub fn laplacian(&self) -> f64 {
        self.hess[0] + self.hess[2]
    }

    pub fn hess_det(&self) -> f64 {
        self.hess[0] * self.hess[2] - self.hess[1] * self.hess[1]
    }

    /// Hessian eigenvalues (ascending) with unit eigenvectors.
    pub fn hess_eigen(&self) -> ([f64; 2], [Point; 2]) {
        let [a, b, c] = self.hess;
        let mean = 0.5 * (a + c);
        let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
        let (l0, l1) = (mean - rad, mean + rad);
        // Eigenvector for l1; the other is its perpendicular.
        let v1 = if b.abs() > 1e-300 || (a - c).abs() > 1e-300 {
            let theta = 0.5 * (2.0 * b).atan2(a - c);
            Point::polar(1.0, theta)
        } else {
            Point::new(1.0, 0.0)
        };
        ([l0, l1], [v1.perp(), v1])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "snake_case")]
pub enum Backend {
    ClosedForm(ClosedForm),
    Mfs(MfsExpansion),
}

impl Backend {
    fn sample(&self, p: Point) -> FieldSample {
        match self {
            Backend::ClosedForm(c) => c.sample(p),
            Backend::Mfs(m) => m.sample(p),
        }
    }

    fn value(&self, p: Point) -> f64 {
        match self {
            Backend::ClosedForm(c) => c.sample(p).value,
            Backend::Mfs(m) => m.value(p),
        }
    }

    fn grad(&self, p: Point) -> Point {
        match self {
            Backend::ClosedForm(c) => c.sample(p).grad,
            Backend::Mfs(m) => m.gradient(p),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Backend::ClosedForm(_) => "closed_form",
            Backend::Mfs(_) => "mfs",
        }
    }
}

/// Sup-norm record: `‖u‖∞` of the raw backend field and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub sup: f64,
    pub argmax: Point,
    pub grid_spacing: f64,
}

/// Grid spacing for the sup-norm search.
pub const NORM_GRID: f64 = 0.005;
/// Extension margin used for entire closed forms.
pub const CLOSED_FORM_MARGIN: f64 = 0.1;

/// An eigenpair `(λ, u)` normalized so that `‖u‖∞ = 1`.
#[derive(Debug, Clone)]
pub struct EigenField {
    domain: Domain,
    eigenvalue: f64,
    index: u32,
    multiplicity: u32,
    backend: Backend,
    scale: f64,
    extension_margin: f64,
    normalization: Normalization,
}

impl EigenField {
    /// Normalize a raw backend field. `positive_max` forces `u(x_max) = +1`.
    pub(crate) fn normalized(
        domain: Domain,
        eigenvalue: f64,
        index: u32,
        multiplicity: u32,
        backend: Backend,
        extension_margin: f64,
        positive_max: bool,
    ) -> Self {
        let raw = EigenField {
            domain,
            eigenvalue,
            index,
            multiplicity,
            backend,
            scale: 1.0,
            extension_margin,
            normalization: Normalization {
                sup: 1.0,
                argmax: Point::ORIGIN,
                grid_spacing: NORM_GRID,
            },
        };
        let (argmax, value) = raw.sup_search(NORM_GRID);
        let mut scale = 1.0 / value.abs();
        if positive_max && value < 0.0 {
            scale = -scale;
        }
        EigenField {
            scale,
            normalization: Normalization {
                sup: value.abs(),
                argmax,
                grid_spacing: NORM_GRID,
            },
            ..raw
        }
    }

    pub(crate) fn from_parts(
        domain: Domain,
        eigenvalue: f64,
        index: u32,
        multiplicity: u32,
        backend: Backend,
        scale: f64,
        extension_margin: f64,
        normalization: Normalization,
    ) -> Self {
        EigenField {
            domain,
            eigenvalue,
            index,
            multiplicity,
            backend,
            scale,
            extension_margin,
            normalization,
        }
    }

    /// Largest `|u|` on a grid of spacing `h`, polished by Newton on `∇u = 0`.
    fn sup_search(&self, h: f64) -> (Point, f64) {
        let sector = self.symmetry_sector();
        let pts = sampling::lattice(&self.domain, h, 0.0, sector);
        let best = pts
            .par_iter()
            .map(|&p| (p, self.backend.sample(p).value))
            .reduce(
                || (Point::ORIGIN, 0.0),
                |a, b| crate::geometry::larger(a, b, f64::abs),
            );
        let (mut p, mut v) = best;
        let mut q = p;
        for _ in 0..30 {
            let s = self.backend.sample(q);
            let det = s.hess_det();
            if det.abs() < 1e-300 {
                break;
            }
            let [a, b, c] = s.hess;
            let dx = (c * s.grad.x - b * s.grad.y) / det;
            let dy = (a * s.grad.y - b * s.grad.x) / det;
            q = q - Point::new(dx, dy);
            if dx.hypot(dy) < 1e-14 {
                break;
            }
        }
        if q.dist(p) < 2.0 * h && self.domain.level(q) > 0.0 {
            let vq = self.backend.sample(q).value;
            if vq.abs() >= v.abs() {
                p = q;
                v = vq;
            }
        }
        (p, v)
    }

    /// Dihedral order used to restrict grid scans to a fundamental sector.
    ///
    /// Only fields whose representation is symmetric by construction qualify.
    pub fn symmetry_sector(&self) -> Option<u32> {
        match &self.backend {
            Backend::Mfs(m) => m.dihedral_order(),
            Backend::ClosedForm(_) => None,
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn spec(&self) -> &DomainSpec {
        self.domain.spec()
    }

    pub fn eigenvalue(&self) -> f64 {
        self.eigenvalue
    }

    pub fn wavenumber(&self) -> f64 {
        self.eigenvalue.sqrt()
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn extension_margin(&self) -> f64 {
        self.extension_margin
    }

    pub fn normalization(&self) -> &Normalization {
        &self.normalization
    }

    /// Field, gradient and Hessian without the extension-margin check.
    ///
    /// Callers must stay within [`EigenField::extension_margin`] of the domain.
    pub fn sample(&self, p: Point) -> FieldSample {
        self.backend.sample(p).scaled(self.scale)
    }

    pub fn value(&self, p: Point) -> f64 {
        self.backend.value(p) * self.scale
    }

    pub fn grad(&self, p: Point) -> Point {
        self.backend.grad(p) * self.scale
    }

    /// Checked evaluation: fails beyond the analytic extension margin.
    pub fn evaluate(&self, p: Point) -> Result<FieldSample> {
        let level = self.domain.level(p);
        if level < -self.extension_margin {
            return Err(Error::OutOfRange(format!(
                "({:.6}, {:.6}) is {:.3e} outside the domain; margin {:.3e}",
                p.x, p.y, -level, self.extension_margin
            )));
        }
        Ok(self.sample(p))
    }

    /// Largest `|u|` over the boundary samples of every component.
    pub fn boundary_residual(&self, samples_per_component: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for c in self.domain.boundary() {
            for i in 0..samples_per_component {
                let t = std::f64::consts::TAU * (i as f64 + 0.5) / samples_per_component as f64;
                worst = worst.max(self.value(c.position(t)).abs());
            }
        }
        worst
    }

    /// Deterministic copy with every derivative scaled by `factor`; used by tests
    /// that perturb normalization.
    pub fn with_scale(&self, factor: f64) -> Self {
        EigenField {
            scale: self.scale * factor,
            ..self.clone()
        }
    }
}

/// `(u, ∇u, Hessian)` at `pt`, refusing points beyond the extension margin.
pub fn evaluate(field: &EigenField, pt: Point) -> Result<FieldSample> {
    field.evaluate(pt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hessian_eigen_decomposition() {
        let s = FieldSample {
            value: 0.0,
            grad: Point::ORIGIN,
            hess: [2.0, 1.0, -1.0],
        };
        let (l, v) = s.hess_eigen();
        for i in 0..2 {
            let hv = Point::new(
                s.hess[0] * v[i].x + s.hess[1] * v[i].y,
                s.hess[1] * v[i].x + s.hess[2] * v[i].y,
            );
            assert!((hv - v[i] * l[i]).norm() < 1e-14);
        }
        assert!(l[0] < l[1]);
        assert!(v[0].dot(v[1]).abs() < 1e-15);
    }
}
