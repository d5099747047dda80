//! Critical set of an eigenfield: isolated critical points in the closed
//! domain (interior points by Newton on `∇u`, boundary points as zeros of the
//! normal derivative) and rotation-invariant circles of critical points.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigenfield::{EigenField, FieldSample};
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point};
use crate::sampling;

/// `|u| < TOL_SING` puts a critical point in the singular set.
pub const TOL_SING: f64 = 1e-6;
/// Relative degeneracy threshold `|det H| < DEGENERACY · ‖H‖²`.
pub const DEGENERACY: f64 = 1e-6;
/// Converged points closer than this are the same point.
pub const MERGE_RADIUS: f64 = 1e-7;
/// Gradient tolerance relative to `max(1, ‖∇u‖∞)`.
pub const TOL_GRAD: f64 = 1e-9;
/// Samples of `∂u/∂ν` per boundary component.
pub const BOUNDARY_SAMPLES: usize = 4096;
/// Samples on the circle used for winding numbers.
pub const WINDING_SAMPLES: usize = 720;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    Max,
    Min,
    Saddle,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub location: Point,
    pub value: f64,
    pub kind: CriticalKind,
    pub on_boundary: bool,
    /// Boundary component and parameter, for boundary points.
    pub boundary_position: Option<(usize, f64)>,
    /// Hessian eigenvalues, ascending.
    pub hessian_eigenvalues: [f64; 2],
    pub hessian_eigenvectors: [Point; 2],
    pub winding_index: i32,
    pub multiplicity: u32,
    pub is_singular: bool,
    /// `|∇u|` at the returned location.
    pub gradient_residual: f64,
}

impl CriticalPoint {
    pub fn is_extremum(&self) -> bool {
        matches!(self.kind, CriticalKind::Max | CriticalKind::Min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleKind {
    MaxCurve,
    MinCurve,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalCircle {
    pub center: Point,
    pub radius: f64,
    pub value: f64,
    pub kind: CircleKind,
    /// `|∂u/∂r|` at the returned radius.
    pub radial_residual: f64,
    /// `∂²u/∂r²` at the returned radius.
    pub radial_curvature: f64,
}

/// Everything the flow and complex stages need to know about `C`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalSet {
    pub points: Vec<CriticalPoint>,
    pub circles: Vec<CriticalCircle>,
    pub seed_spacing: f64,
    /// Estimate of `‖∇u‖∞` from the seed grid.
    pub gradient_scale: f64,
}

impl CriticalSet {
    pub fn maxima(&self) -> impl Iterator<Item = &CriticalPoint> {
        self.points.iter().filter(|p| p.kind == CriticalKind::Max)
    }

    pub fn saddles(&self) -> impl Iterator<Item = &CriticalPoint> {
        self.points.iter().filter(|p| p.kind == CriticalKind::Saddle)
    }

    pub fn has_degenerate(&self) -> bool {
        self.points.iter().any(|p| p.kind == CriticalKind::Degenerate)
            || self.circles.iter().any(|c| c.kind == CircleKind::Degenerate)
    }
}

/// Classification from Hessian data alone.
pub fn classify(s: &FieldSample) -> CriticalKind {
    let [a, b, c] = s.hess;
    let norm2 = a * a + 2.0 * b * b + c * c;
    if s.hess_det().abs() < DEGENERACY * norm2 || norm2 == 0.0 {
        return CriticalKind::Degenerate;
    }
    let (l, _) = s.hess_eigen();
    if l[1] < 0.0 {
        CriticalKind::Max
    } else if l[0] > 0.0 {
        CriticalKind::Min
    } else {
        CriticalKind::Saddle
    }
}

/// Damped Newton on `∇u = 0`. Returns the converged point, or `None`.
fn newton(field: &EigenField, start: Point, grad_scale: f64, bound: f64, tol_grad: f64) -> Option<Point> {
    let domain = field.domain();
    let mut x = start;
    let mut s = field.sample(x);
    let mut g = s.grad.norm();
    let tol = 1e-3 * tol_grad * grad_scale.max(1.0);
    for _ in 0..60 {
        if g < tol {
            return Some(x);
        }
        let det = s.hess_det();
        if det.abs() < 1e-300 {
            return None;
        }
        let [a, b, c] = s.hess;
        let step = Point::new(
            (c * s.grad.x - b * s.grad.y) / det,
            (a * s.grad.y - b * s.grad.x) / det,
        );
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..20 {
            let y = x - step * lambda;
            if domain.level(y) < -bound {
                lambda *= 0.5;
                continue;
            }
            let sy = field.sample(y);
            let gy = sy.grad.norm();
            if gy < g {
                let moved = (step * lambda).norm();
                x = y;
                s = sy;
                g = gy;
                accepted = true;
                if moved < 1e-15 * (1.0 + x.norm()) {
                    return (g < tol_grad * grad_scale.max(1.0)).then_some(x);
                }
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return (g < tol_grad * grad_scale.max(1.0)).then_some(x);
        }
    }
    (g < tol_grad * grad_scale.max(1.0)).then_some(x)
}

/// Images of `p` under the symmetry group of the field representation.
fn orbit(p: Point, sector: Option<u32>) -> Vec<Point> {
    match sector {
        None => vec![p],
        Some(n) => {
            let refl = Point::new(p.x, -p.y);
            let mut v = Vec::with_capacity(2 * n as usize);
            for j in 0..n {
                let a = TAU * j as f64 / n as f64;
                v.push(p.rotated(a));
                v.push(refl.rotated(a));
            }
            v
        }
    }
}

/// Boundary points where `∂u/∂ν` changes sign, bisected and polished.
fn boundary_roots(field: &EigenField, grad_scale: f64, tol_grad: f64) -> Vec<(Point, usize, f64)> {
    let domain = field.domain();
    let mut out = Vec::new();
    for (ci, curve) in domain.boundary().iter().enumerate() {
        let dn = |t: f64| field.grad(curve.position(t)).dot(curve.outward_normal(t));
        let n = BOUNDARY_SAMPLES;
        // Half-step offset keeps samples off square corners.
        let ts: Vec<f64> = (0..=n).map(|i| TAU * (i as f64 + 0.5) / n as f64).collect();
        let vals: Vec<f64> = ts.par_iter().map(|&t| dn(t)).collect();
        for i in 0..n {
            let (fa, fb) = (vals[i], vals[i + 1]);
            if (fa > 0.0) == (fb > 0.0) {
                continue;
            }
            let (mut a, mut b, mut va) = (ts[i], ts[i + 1], fa);
            for _ in 0..100 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let vm = dn(m);
                if (vm > 0.0) == (va > 0.0) {
                    a = m;
                    va = vm;
                } else {
                    b = m;
                }
            }
            let t = 0.5 * (a + b);
            let p0 = curve.position(t);
            let p = newton(field, p0, grad_scale, field.extension_margin(), tol_grad)
                .filter(|p| p.dist(p0) < 1e-4)
                .unwrap_or(p0);
            out.push((p, ci, t.rem_euclid(TAU)));
        }
    }
    out
}

/// Find and classify the isolated critical points of `field` in the closed domain.
pub fn find_critical_points(field: &EigenField, h: f64) -> Result<Vec<CriticalPoint>> {
    Ok(critical_set(field, h)?.points)
}

/// Tunable parameters of the critical point search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalConfig {
    /// Newton seed lattice spacing.
    pub seed_spacing: f64,
    /// Acceptance threshold on `|∇u|`, relative to `max(1, ‖∇u‖∞)`.
    pub tol_grad: f64,
}

impl Default for CriticalConfig {
    fn default() -> Self {
        CriticalConfig {
            seed_spacing: 0.02,
            tol_grad: TOL_GRAD,
        }
    }
}

/// Critical points and circles. Points lying on a detected circle are dropped.
pub fn critical_set(field: &EigenField, h: f64) -> Result<CriticalSet> {
    critical_set_with(
        field,
        &CriticalConfig {
            seed_spacing: h,
            ..CriticalConfig::default()
        },
    )
}

pub fn critical_set_with(field: &EigenField, cfg: &CriticalConfig) -> Result<CriticalSet> {
    let h = cfg.seed_spacing;
    if !(h > 0.0 && h <= 0.05) {
        return Err(Error::Parameter(format!("seed spacing {h} not in (0, 0.05]")));
    }
    if !(cfg.tol_grad > 0.0) {
        return Err(Error::Parameter("gradient tolerance must be positive".into()));
    }
    let tol_grad = cfg.tol_grad;
    let domain = field.domain();
    let sector = field.symmetry_sector();
    let seeds = sampling::lattice(domain, h, 0.0, sector);
    let grad_scale = seeds
        .par_iter()
        .map(|&p| field.grad(p).norm())
        .reduce(|| 0.0, f64::max);

    let circles: Vec<CriticalCircle> = detect_critical_circle(field)?.into_iter().collect();
    let on_circle = |p: Point| {
        circles
            .iter()
            .any(|c| (p.dist(c.center) - c.radius).abs() < 1e-5)
    };

    let bound = 1e-9;
    let mut raw: Vec<(Point, Option<(usize, f64)>)> = seeds
        .par_iter()
        .filter_map(|&s| newton(field, s, grad_scale, bound, tol_grad))
        .filter(|&p| domain.level(p) > -bound)
        .flat_map_iter(|p| orbit(p, sector).into_iter().map(|q| (q, None)))
        .collect();
    for (p, ci, t) in boundary_roots(field, grad_scale, tol_grad) {
        raw.push((p, Some((ci, t))));
    }
    for curve in domain.boundary() {
        for (t, p) in curve.corners() {
            raw.push((p, Some((curve.component_id, t))));
        }
    }
    raw.retain(|(p, _)| !on_circle(*p));

    // Deterministic merge in lexicographic order; boundary records win.
    raw.sort_by(|a, b| {
        a.0.x
            .partial_cmp(&b.0.x)
            .unwrap()
            .then(a.0.y.partial_cmp(&b.0.y).unwrap())
    });
    let mut merged: Vec<(Point, Option<(usize, f64)>)> = Vec::new();
    for (p, b) in raw {
        if let Some(m) = merged.iter_mut().find(|m| m.0.dist(p) < MERGE_RADIUS) {
            let (vm, vp) = (field.value(m.0), field.value(p));
            if (vm - vp).abs() > 1e-8 * (1.0 + vm.abs()) {
                return Err(Error::Consistency(format!(
                    "merged critical points at ({:.9}, {:.9}) disagree in value: {vm} vs {vp}",
                    p.x, p.y
                )));
            }
            if m.1.is_none() && b.is_some() {
                *m = (p, b);
            }
        } else {
            merged.push((p, b));
        }
    }

    let mut points = Vec::with_capacity(merged.len());
    for (i, &(p, b)) in merged.iter().enumerate() {
        let s = field.sample(p);
        let level = domain.level(p);
        let on_boundary = b.is_some() || level.abs() < 1e-9;
        let boundary_position = b.or_else(|| on_boundary.then(|| domain.locate_on_boundary(p)));
        let nearest = merged
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q.0.dist(p))
            .fold(f64::INFINITY, f64::min);
        let mut rho = 0.01_f64.min(0.25 * nearest);
        if on_boundary || level < rho {
            rho = rho.min(0.5 * (level.max(0.0) + field.extension_margin()));
        }
        let (l, v) = s.hess_eigen();
        let kind = classify(&s);
        let winding = winding_index(field, p, rho)?;
        let m = multiplicity(field, p, rho)?;
        points.push(CriticalPoint {
            location: p,
            value: s.value,
            kind,
            on_boundary,
            boundary_position,
            hessian_eigenvalues: l,
            hessian_eigenvectors: v,
            winding_index: winding,
            multiplicity: m,
            is_singular: s.value.abs() < TOL_SING,
            gradient_residual: s.grad.norm(),
        });
    }
    Ok(CriticalSet {
        points,
        circles,
        seed_spacing: h,
        gradient_scale: grad_scale,
    })
}

/// Winding number of the planar vector field `f` around the circle `(pt, ρ)`.
fn winding<F: Fn(Point) -> Point>(pt: Point, rho: f64, f: F) -> Result<i32> {
    let n = WINDING_SAMPLES;
    let angles: Vec<f64> = (0..=n)
        .map(|i| {
            let th = TAU * i as f64 / n as f64;
            f(pt + Point::polar(rho, th)).angle()
        })
        .collect();
    let mut total = 0.0;
    for w in angles.windows(2) {
        let mut d = w[1] - w[0];
        if d > PI {
            d -= TAU;
        } else if d < -PI {
            d += TAU;
        }
        if d.abs() > PI / 4.0 {
            return Err(Error::Resolution(format!(
                "angular increment {d:.3} exceeds π/4 on radius {rho:.2e} around ({:.6}, {:.6})",
                pt.x, pt.y
            )));
        }
        total += d;
    }
    Ok((total / TAU).round() as i32)
}

/// Retry with halved radius on resolution errors.
fn winding_retry<F: Fn(Point) -> Point>(pt: Point, rho: f64, f: F) -> Result<i32> {
    let mut r = rho;
    let mut last = None;
    for _ in 0..12 {
        match winding(pt, r, &f) {
            Ok(w) => return Ok(w),
            Err(e) => {
                last = Some(e);
                r *= 0.5;
            }
        }
    }
    Err(last.unwrap())
}

/// Index of `∇u` around `pt` on a circle of radius `ρ`.
pub fn winding_index(field: &EigenField, pt: Point, rho: f64) -> Result<i32> {
    winding_retry(pt, rho, |q| field.grad(q))
}

/// Integral multiplicity: the winding of `(u_x, −u_y)`, i.e. of `∂_z u`,
/// clamped at zero (extrema have winding −1 and multiplicity 0).
pub fn multiplicity(field: &EigenField, pt: Point, rho: f64) -> Result<u32> {
    let w = winding_retry(pt, rho, |q| {
        let g = field.grad(q);
        Point::new(g.x, -g.y)
    })?;
    Ok(w.max(0) as u32)
}

/// Probe spacing of the rotational symmetry test.
const SYMMETRY_PROBE: f64 = 0.05;

/// A circle of critical points centred at the origin, if `field` is radial.
pub fn detect_critical_circle(field: &EigenField) -> Result<Option<CriticalCircle>> {
    let domain = field.domain();
    if domain.has_corners() {
        return Ok(None);
    }
    let probes = sampling::lattice(domain, SYMMETRY_PROBE, 0.0, None);
    let sup = field.normalization().sup * field.scale().abs();
    let radial = probes.iter().all(|&p| {
        let g = field.grad(p);
        (p.x * g.y - p.y * g.x).abs() < 1e-8 * sup.max(1.0)
    });
    if !radial {
        return Ok(None);
    }
    let (r_lo, r_hi) = radial_interval(domain);
    let ur = |r: f64| field.grad(Point::new(r, 0.0)).x;
    let n = 4000;
    let mut roots = Vec::new();
    let step = (r_hi - r_lo) / n as f64;
    for i in 1..n - 1 {
        let (a, b) = (r_lo + step * i as f64, r_lo + step * (i + 1) as f64);
        let (fa, fb) = (ur(a), ur(b));
        if (fa > 0.0) != (fb > 0.0) {
            let (mut a, mut b, mut va) = (a, b, fa);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let vm = ur(m);
                if (vm > 0.0) == (va > 0.0) {
                    a = m;
                    va = vm;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
    }
    if roots.len() > 1 {
        return Err(Error::Unsupported(format!(
            "{} concentric critical circles; only one is supported",
            roots.len()
        )));
    }
    Ok(roots.first().map(|&r| {
        let s = field.sample(Point::new(r, 0.0));
        let urr = s.hess[0];
        let kind = if urr.abs() < DEGENERACY * s.value.abs().max(1.0) {
            CircleKind::Degenerate
        } else if urr < 0.0 {
            CircleKind::MaxCurve
        } else {
            CircleKind::MinCurve
        };
        CriticalCircle {
            center: Point::ORIGIN,
            radius: r,
            value: s.value,
            kind,
            radial_residual: s.grad.x.abs(),
            radial_curvature: urr,
        }
    }))
}

/// Open radial interval covered by a rotationally symmetric domain.
fn radial_interval(domain: &Domain) -> (f64, f64) {
    let lo = domain.inner_radius().unwrap_or(0.0);
    let hi = (0..720)
        .map(|i| domain.outer_radius(TAU * i as f64 / 720.0).unwrap_or(1.0))
        .fold(f64::INFINITY, f64::min);
    (lo, hi)
}

/// Tallies behind the Morse identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseCounts {
    /// Saddles with `u ≠ 0`.
    pub saddles: usize,
    /// Isolated extrema.
    pub extrema: usize,
    /// Multiplicity sum over singular interior points.
    pub interior_multiplicity: u32,
    /// Multiplicity sum over singular boundary points.
    pub boundary_multiplicity: u32,
}

pub fn morse_counts(points: &[CriticalPoint]) -> Result<MorseCounts> {
    if let Some(p) = points.iter().find(|p| p.kind == CriticalKind::Degenerate) {
        return Err(Error::Degenerate(format!(
            "degenerate critical point at ({:.6}, {:.6}), value {:.3e}",
            p.location.x, p.location.y, p.value
        )));
    }
    let mut c = MorseCounts {
        saddles: 0,
        extrema: 0,
        interior_multiplicity: 0,
        boundary_multiplicity: 0,
    };
    for p in points {
        match p.kind {
            CriticalKind::Saddle if !p.is_singular => c.saddles += 1,
            CriticalKind::Max | CriticalKind::Min => c.extrema += 1,
            _ => {}
        }
        if p.is_singular {
            if p.on_boundary {
                c.boundary_multiplicity += p.multiplicity;
            } else {
                c.interior_multiplicity += p.multiplicity;
            }
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(hess: [f64; 3]) -> FieldSample {
        FieldSample {
            value: 1.0,
            grad: Point::ORIGIN,
            hess,
        }
    }

    #[test]
    fn hessian_classification() {
        assert_eq!(classify(&sample([-2.0, 0.0, -1.0])), CriticalKind::Max);
        assert_eq!(classify(&sample([2.0, 0.5, 1.0])), CriticalKind::Min);
        assert_eq!(classify(&sample([0.0, 1.0, 0.0])), CriticalKind::Saddle);
        assert_eq!(classify(&sample([1.0, 1.0, 1.0])), CriticalKind::Degenerate);
    }

    #[test]
    fn winding_of_model_fields() {
        let id = |p: Point| p;
        assert_eq!(winding(Point::ORIGIN, 0.1, id).unwrap(), 1);
        let saddle = |p: Point| Point::new(p.x, -p.y);
        assert_eq!(winding(Point::ORIGIN, 0.1, saddle).unwrap(), -1);
        let monkey = |p: Point| Point::new(p.x * p.x - p.y * p.y, -2.0 * p.x * p.y);
        assert_eq!(winding(Point::ORIGIN, 0.1, monkey).unwrap(), -2);
    }

    #[test]
    fn undersampled_winding_is_reported() {
        let wild = |p: Point| Point::polar(1.0, 200.0 * p.angle());
        assert!(matches!(
            winding(Point::ORIGIN, 0.1, wild),
            Err(Error::Resolution(_))
        ));
    }
}
