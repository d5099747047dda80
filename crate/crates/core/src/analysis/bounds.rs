use std::f64::consts::{E, PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigenfield::EigenField;
use crate::error::{Error, Result};
use crate::geometry::{larger, min_mean_curvature_bound, Curvature, Domain, DomainSpec, Point};
use crate::sampling;
use crate::specfun::bessel_root;

/// Lattice spacing of the `‖∇u‖∞` search.
pub const GRADIENT_GRID: f64 = 0.002;
/// Boundary samples per component in the `‖∇u‖∞` search.
const BOUNDARY_SAMPLES: usize = 8192;

/// `A = θ + √(2λ/π)·exp(−θ²/(8λ))`.
pub fn a_constant(theta: f64, lambda: f64) -> f64 {
    theta + (2.0 * lambda / PI).sqrt() * (-theta * theta / (8.0 * lambda)).exp()
}

/// `√e (A + λ/(4A))`.
pub fn gradient_bound(a: f64, lambda: f64) -> f64 {
    E.sqrt() * (a + lambda / (4.0 * a))
}

/// Largest `|∇u|` found on the domain and where.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientSup {
    pub value: f64,
    pub location: Point,
    pub grid_spacing: f64,
    pub on_boundary: bool,
}

/// Quantities of the flower chain built on the inscribed ball at `(1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowerChain {
    pub petals: u32,
    pub inner_radius: f64,
    /// Clearance of `(1, 0)`.
    pub c: f64,
    /// `j₀₁² / C²`.
    pub big_lambda: f64,
    /// Largest `|κ|` on the outer curve.
    pub c2: f64,
    /// `max(C₂, 16, ½√Λ)`.
    pub theta: f64,
    /// Maximum of `√e(x + Λ/(4x))` over `[½√Λ, θ + √Λ]`.
    pub f: f64,
    /// `(½ − a)·F`.
    pub condition: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub theta: f64,
    pub lambda: f64,
    pub a: f64,
    pub precondition_ok: bool,
    /// Grid estimate of `‖∇u‖∞`.
    pub lhs: f64,
    pub rhs: f64,
    pub sup: GradientSup,
    pub flower: Option<FlowerChain>,
}

impl BoundsReport {
    /// The inequality is only asserted when the precondition holds.
    pub fn passed(&self) -> bool {
        self.precondition_ok && self.lhs < self.rhs
    }

    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// `F(n)` and the segment condition for `Flower(n, a)`; `None` for other specs.
pub fn flower_chain(spec: &DomainSpec) -> Result<Option<FlowerChain>> {
    let DomainSpec::Flower {
        petals,
        inner_radius,
    } = *spec
    else {
        return Ok(None);
    };
    let domain = Domain::new(spec.clone())?;
    let c = domain.clearance(Point::new(1.0, 0.0));
    let j01 = bessel_root(0, 1);
    let big_lambda = j01 * j01 / (c * c);
    let outer = domain
        .boundary()
        .iter()
        .find(|b| b.is_outer())
        .ok_or_else(|| Error::Consistency("flower without an outer curve".into()))?;
    let samples = 1 << 16;
    let c2 = (0..samples)
        .filter_map(|i| match outer.curvature(TAU * i as f64 / samples as f64) {
            Curvature::Smooth(k) => Some(k.abs()),
            Curvature::Corner => None,
        })
        .fold(0.0, f64::max);
    let root = big_lambda.sqrt();
    let theta = c2.max(16.0).max(0.5 * root);
    // √e(x + Λ/(4x)) is convex in x, so the maximum sits at an endpoint.
    let g = |x: f64| E.sqrt() * (x + big_lambda / (4.0 * x));
    let f = g(0.5 * root).max(g(theta + root));
    let condition = (0.5 - inner_radius) * f;
    Ok(Some(FlowerChain {
        petals,
        inner_radius,
        c,
        big_lambda,
        c2,
        theta,
        f,
        condition,
        holds: condition < 1.0,
    }))
}

/// Grid estimate of `‖∇u‖∞` at spacing `h`, polished locally.
pub fn gradient_sup(field: &EigenField, h: f64) -> GradientSup {
    let domain = field.domain();
    let pts = sampling::lattice(domain, h, 0.0, field.symmetry_sector());
    let (p_in, g_in) = pts
        .par_iter()
        .map(|&p| (p, field.grad(p).norm()))
        .reduce(|| (Point::ORIGIN, 0.0), |a, b| larger(a, b, |v| v));
    let (p_in, g_in) = polish_interior(field, p_in, g_in, h);

    let mut best_b = (Point::ORIGIN, 0.0);
    for curve in domain.boundary() {
        let ts: Vec<f64> = (0..BOUNDARY_SAMPLES)
            .map(|i| TAU * i as f64 / BOUNDARY_SAMPLES as f64)
            .collect();
        let (t0, _) = ts
            .par_iter()
            .map(|&t| (t, field.grad(curve.position(t)).norm()))
            .reduce(|| (f64::INFINITY, -1.0), |a, b| if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a });
        let dt = TAU / BOUNDARY_SAMPLES as f64;
        let t = golden_max(|t| field.grad(curve.position(t)).norm(), t0 - dt, t0 + dt);
        let p = curve.position(t);
        let g = field.grad(p).norm();
        if g > best_b.1 {
            best_b = (p, g);
        }
    }
    if best_b.1 >= g_in {
        GradientSup {
            value: best_b.1,
            location: best_b.0,
            grid_spacing: h,
            on_boundary: true,
        }
    } else {
        GradientSup {
            value: g_in,
            location: p_in,
            grid_spacing: h,
            on_boundary: false,
        }
    }
}

/// Newton on `∇(|∇u|²/2) = H∇u`, with the Jacobian by central differences.
fn polish_interior(field: &EigenField, p0: Point, g0: f64, h: f64) -> (Point, f64) {
    let domain = field.domain();
    let rhs = |p: Point| {
        let s = field.sample(p);
        let [a, b, c] = s.hess;
        Point::new(a * s.grad.x + b * s.grad.y, b * s.grad.x + c * s.grad.y)
    };
    let eps = 1e-6;
    let mut p = p0;
    for _ in 0..20 {
        let f = rhs(p);
        let fx = (rhs(p + Point::new(eps, 0.0)) - rhs(p - Point::new(eps, 0.0))) * (0.5 / eps);
        let fy = (rhs(p + Point::new(0.0, eps)) - rhs(p - Point::new(0.0, eps))) * (0.5 / eps);
        let det = fx.x * fy.y - fy.x * fx.y;
        if det.abs() < 1e-300 {
            break;
        }
        let step = Point::new((fy.y * f.x - fy.x * f.y) / det, (fx.x * f.y - fx.y * f.x) / det);
        p = p - step;
        if step.norm() < 1e-13 {
            break;
        }
    }
    let g = field.grad(p).norm();
    if p.dist(p0) < 2.0 * h && domain.level(p) > 0.0 && g > g0 {
        (p, g)
    } else {
        (p0, g0)
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-12 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// The gradient estimate for a normalized ground state on a smooth domain.
pub fn gradient_bound_check(field: &EigenField) -> Result<BoundsReport> {
    let spec = field.spec();
    let theta = min_mean_curvature_bound(spec)?;
    if (field.normalization().sup * field.scale().abs() - 1.0).abs() > 1e-9 {
        return Err(Error::Precondition("field is not normalized to ‖u‖∞ = 1".into()));
    }
    let lambda = field.eigenvalue();
    let a = a_constant(theta, lambda);
    let sup = gradient_sup(field, GRADIENT_GRID);
    Ok(BoundsReport {
        theta,
        lambda,
        a,
        precondition_ok: lambda.sqrt() <= 2.0 * a,
        lhs: sup.value,
        rhs: gradient_bound(a, lambda),
        sup,
        flower: flower_chain(spec)?,
    })
}
