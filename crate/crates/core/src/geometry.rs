//! Planar analytic domains: the unit square, disk, annulus, the flower
//! domains `a < r < 1 + cos(nφ)/2`, and star bodies whose radius is a
//! trigonometric polynomial.
//!
//! Every boundary component is parameterized by `t ∈ [0, 2π)` and oriented
//! with the domain on its left. Outer components run counterclockwise with
//! `t` equal to the polar angle; inner circles run clockwise with `t = −φ`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn polar(r: f64, phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Point::new(r * c, r * s)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn normalized(self) -> Point {
        let n = self.norm();
        Point::new(self.x / n, self.y / n)
    }

    /// Counterclockwise rotation about the origin.
    pub fn rotated(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Rotation by +90°.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Reduce an angle to `[0, 2π)`.
pub fn wrap_angle(t: f64) -> f64 {
    let w = t.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// One term `a cos(kφ) + b sin(kφ)` of a radius function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub index: u32,
    pub cos: f64,
    pub sin: f64,
}

/// A finite Fourier series `r(φ)`, analytic by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly {
    pub terms: Vec<Harmonic>,
}

impl TrigPoly {
    /// `(r, r', r'')` at `phi`.
    pub fn eval(&self, phi: f64) -> (f64, f64, f64) {
        let (mut r, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for h in &self.terms {
            let k = h.index as f64;
            let (s, c) = (k * phi).sin_cos();
            r += h.cos * c + h.sin * s;
            d1 += k * (-h.cos * s + h.sin * c);
            d2 -= k * k * (h.cos * c + h.sin * s);
        }
        (r, d1, d2)
    }

    pub fn radius(&self, phi: f64) -> f64 {
        self.eval(phi).0
    }

    pub fn max_index(&self) -> u32 {
        self.terms.iter().map(|h| h.index).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    UnitSquare,
    UnitDisk,
    Annulus { inner_radius: f64 },
    Flower { petals: u32, inner_radius: f64 },
    StarBody { coeffs: Vec<Harmonic> },
}

impl DomainSpec {
    pub fn flower(petals: u32, inner_radius: f64) -> Self {
        DomainSpec::Flower {
            petals,
            inner_radius,
        }
    }

    pub fn annulus(inner_radius: f64) -> Self {
        DomainSpec::Annulus { inner_radius }
    }

    /// A star body from `(index, cos, sin)` triples.
    pub fn star(coeffs: &[(u32, f64, f64)]) -> Self {
        DomainSpec::StarBody {
            coeffs: coeffs
                .iter()
                .map(|&(index, cos, sin)| Harmonic { index, cos, sin })
                .collect(),
        }
    }

    /// Short human-readable label.
    pub fn label(&self) -> String {
        match self {
            DomainSpec::UnitSquare => "square".into(),
            DomainSpec::UnitDisk => "disk".into(),
            DomainSpec::Annulus { inner_radius } => format!("annulus(a={inner_radius})"),
            DomainSpec::Flower {
                petals,
                inner_radius,
            } => format!("flower(n={petals},a={inner_radius})"),
            DomainSpec::StarBody { coeffs } => format!("star({} terms)", coeffs.len()),
        }
    }

    /// Order `n` of the dihedral symmetry group `D_n` (rotations by `2π/n`
    /// and the reflection `y → −y`) for the discretely symmetric variants.
    pub fn dihedral_order(&self) -> Option<u32> {
        match self {
            DomainSpec::Flower { petals, .. } => Some(*petals),
            _ => None,
        }
    }

    /// Disk and annulus are invariant under every rotation.
    pub fn is_radial(&self) -> bool {
        matches!(self, DomainSpec::UnitDisk | DomainSpec::Annulus { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::UnitSquare | DomainSpec::UnitDisk => {}
            DomainSpec::Annulus { inner_radius: a } => {
                if !(*a > 0.0 && *a < 1.0) {
                    return Err(Error::Parameter(format!("annulus inner radius {a} not in (0,1)")));
                }
            }
            DomainSpec::Flower {
                petals,
                inner_radius: a,
            } => {
                if *petals < 1 {
                    return Err(Error::Parameter("flower needs at least one petal".into()));
                }
                if !(*a > 0.25 && *a < 0.5) {
                    return Err(Error::Parameter(format!("flower inner radius {a} not in (1/4,1/2)")));
                }
            }
            DomainSpec::StarBody { coeffs } => {
                if coeffs.is_empty() {
                    return Err(Error::Parameter("star body needs at least one coefficient".into()));
                }
                if coeffs.iter().any(|h| !h.cos.is_finite() || !h.sin.is_finite()) {
                    return Err(Error::Parameter("non-finite star body coefficient".into()));
                }
                let poly = TrigPoly {
                    terms: coeffs.clone(),
                };
                let samples = 4096.max(64 * poly.max_index() as usize);
                for i in 0..samples {
                    let phi = TAU * i as f64 / samples as f64;
                    if poly.radius(phi) <= 0.0 {
                        return Err(Error::Parameter(format!(
                            "star body radius non-positive at φ = {phi:.6}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Signed curvature of a boundary sample; corners of the square are flagged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Curvature {
    Smooth(f64),
    Corner,
}

#[derive(Debug, Clone, PartialEq)]
enum CurveShape {
    Circle { radius: f64, clockwise: bool },
    PolarGraph(TrigPoly),
    Square,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub component_id: usize,
    shape: CurveShape,
}

const SQUARE_CORNERS: [Point; 4] = [
    Point::new(0.0, 0.0),
    Point::new(1.0, 0.0),
    Point::new(1.0, 1.0),
    Point::new(0.0, 1.0),
];

impl BoundaryCurve {
    /// Position and its first two `t`-derivatives.
    pub fn derivatives(&self, t: f64) -> (Point, Point, Point) {
        match &self.shape {
            CurveShape::Circle { radius, clockwise } => {
                let (s, c) = t.sin_cos();
                let r = *radius;
                if *clockwise {
                    (
                        Point::new(r * c, -r * s),
                        Point::new(-r * s, -r * c),
                        Point::new(-r * c, r * s),
                    )
                } else {
                    (
                        Point::new(r * c, r * s),
                        Point::new(-r * s, r * c),
                        Point::new(-r * c, -r * s),
                    )
                }
            }
            CurveShape::PolarGraph(poly) => {
                let (r, r1, r2) = poly.eval(t);
                let (s, c) = t.sin_cos();
                let pos = Point::new(r * c, r * s);
                let d1 = Point::new(r1 * c - r * s, r1 * s + r * c);
                let d2 = Point::new(r2 * c - 2.0 * r1 * s - r * c, r2 * s + 2.0 * r1 * c - r * s);
                (pos, d1, d2)
            }
            CurveShape::Square => {
                let tt = wrap_angle(t);
                let side = ((tt / FRAC_PI_2) as usize).min(3);
                let f = (tt - side as f64 * FRAC_PI_2) / FRAC_PI_2;
                let a = SQUARE_CORNERS[side];
                let b = SQUARE_CORNERS[(side + 1) % 4];
                let pos = a + (b - a) * f;
                ((pos), (b - a) * (1.0 / FRAC_PI_2), Point::ORIGIN)
            }
        }
    }

    pub fn position(&self, t: f64) -> Point {
        self.derivatives(t).0
    }

    pub fn tangent(&self, t: f64) -> Point {
        self.derivatives(t).1.normalized()
    }

    /// Unit normal pointing away from the domain.
    pub fn outward_normal(&self, t: f64) -> Point {
        let tan = self.tangent(t);
        Point::new(tan.y, -tan.x)
    }

    /// Signed curvature; positive where the domain is locally convex.
    pub fn curvature(&self, t: f64) -> Curvature {
        if let CurveShape::Square = self.shape {
            let q = wrap_angle(t) / FRAC_PI_2;
            if (q - q.round()).abs() < 1e-12 {
                return Curvature::Corner;
            }
            return Curvature::Smooth(0.0);
        }
        let (_, d1, d2) = self.derivatives(t);
        Curvature::Smooth(d1.cross(d2) / d1.norm().powi(3))
    }

    pub fn is_outer(&self) -> bool {
        !matches!(
            self.shape,
            CurveShape::Circle {
                clockwise: true,
                ..
            }
        )
    }

    /// Parameter of a point on (or radially close to) this curve.
    pub fn parameter_of(&self, p: Point) -> f64 {
        match &self.shape {
            CurveShape::Circle { clockwise, .. } => {
                let phi = p.angle();
                wrap_angle(if *clockwise { -phi } else { phi })
            }
            CurveShape::PolarGraph(_) => wrap_angle(p.angle()),
            CurveShape::Square => {
                let clamp = |v: f64| v.clamp(0.0, 1.0);
                let (x, y) = (clamp(p.x), clamp(p.y));
                let d = [y, 1.0 - x, 1.0 - y, x];
                let side = (0..4)
                    .min_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap())
                    .unwrap();
                let f = match side {
                    0 => x,
                    1 => y,
                    2 => 1.0 - x,
                    _ => 1.0 - y,
                };
                wrap_angle((side as f64 + f) * FRAC_PI_2)
            }
        }
    }

    /// Square corners and their parameters.
    pub fn corners(&self) -> Vec<(f64, Point)> {
        match self.shape {
            CurveShape::Square => (0..4)
                .map(|i| (i as f64 * FRAC_PI_2, SQUARE_CORNERS[i]))
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Arc length between parameters, by composite Simpson quadrature.
    pub fn arc_length(&self, t0: f64, t1: f64) -> f64 {
        let n = 2 * ((((t1 - t0).abs() * 400.0) as usize).max(8) / 2 + 1);
        let h = (t1 - t0) / n as f64;
        let speed = |t: f64| self.derivatives(t).1.norm();
        let mut s = speed(t0) + speed(t1);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * speed(t0 + h * i as f64);
        }
        s * h / 3.0
    }

    /// Largest distance between two samples of the curve.
    pub fn diameter(&self) -> f64 {
        match &self.shape {
            CurveShape::Circle { radius, .. } => 2.0 * radius,
            CurveShape::Square => 2f64.sqrt(),
            CurveShape::PolarGraph(_) => {
                let pts: Vec<Point> = (0..512).map(|i| self.position(TAU * i as f64 / 512.0)).collect();
                let mut d: f64 = 0.0;
                for (i, a) in pts.iter().enumerate() {
                    for b in &pts[i + 1..] {
                        d = d.max(a.dist(*b));
                    }
                }
                d
            }
        }
    }
}

/// A validated domain together with its boundary components.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    spec: DomainSpec,
    curves: Vec<BoundaryCurve>,
    hole: Option<f64>,
    outer: Option<TrigPoly>,
}

impl Domain {
    pub fn new(spec: DomainSpec) -> Result<Self> {
        spec.validate()?;
        let circle = |id, radius, clockwise| BoundaryCurve {
            component_id: id,
            shape: CurveShape::Circle { radius, clockwise },
        };
        let (curves, hole, outer) = match &spec {
            DomainSpec::UnitSquare => (
                vec![BoundaryCurve {
                    component_id: 0,
                    shape: CurveShape::Square,
                }],
                None,
                None,
            ),
            DomainSpec::UnitDisk => (vec![circle(0, 1.0, false)], None, None),
            DomainSpec::Annulus { inner_radius } => (
                vec![circle(0, 1.0, false), circle(1, *inner_radius, true)],
                Some(*inner_radius),
                None,
            ),
            DomainSpec::Flower {
                petals,
                inner_radius,
            } => {
                let poly = TrigPoly {
                    terms: vec![
                        Harmonic {
                            index: 0,
                            cos: 1.0,
                            sin: 0.0,
                        },
                        Harmonic {
                            index: *petals,
                            cos: 0.5,
                            sin: 0.0,
                        },
                    ],
                };
                (
                    vec![
                        BoundaryCurve {
                            component_id: 0,
                            shape: CurveShape::PolarGraph(poly.clone()),
                        },
                        circle(1, *inner_radius, true),
                    ],
                    Some(*inner_radius),
                    Some(poly),
                )
            }
            DomainSpec::StarBody { coeffs } => {
                let poly = TrigPoly {
                    terms: coeffs.clone(),
                };
                (
                    vec![BoundaryCurve {
                        component_id: 0,
                        shape: CurveShape::PolarGraph(poly.clone()),
                    }],
                    None,
                    Some(poly),
                )
            }
        };
        let domain = Domain {
            spec,
            curves,
            hole,
            outer,
        };
        domain.check_components_disjoint()?;
        Ok(domain)
    }

    fn check_components_disjoint(&self) -> Result<()> {
        if let (Some(a), Some(poly)) = (self.hole, &self.outer) {
            let gap = (0..4096)
                .map(|i| poly.radius(TAU * i as f64 / 4096.0) - a)
                .fold(f64::INFINITY, f64::min);
            if gap <= 1e-6 {
                return Err(Error::Parameter(format!(
                    "inner circle touches the outer boundary (gap {gap:.3e})"
                )));
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    /// Boundary components, outer first.
    pub fn boundary(&self) -> &[BoundaryCurve] {
        &self.curves
    }

    pub fn has_corners(&self) -> bool {
        matches!(self.spec, DomainSpec::UnitSquare)
    }

    pub fn inner_radius(&self) -> Option<f64> {
        self.hole
    }

    /// Outer radius function for the disk, annulus and polar-graph variants.
    pub fn outer_radius(&self, phi: f64) -> Option<f64> {
        match &self.spec {
            DomainSpec::UnitSquare => None,
            DomainSpec::UnitDisk | DomainSpec::Annulus { .. } => Some(1.0),
            _ => self.outer.as_ref().map(|p| p.radius(phi)),
        }
    }

    /// Cheap level function: positive inside, zero on the boundary, negative
    /// outside. Equals the clearance for the square, disk and annulus; for
    /// polar graphs it is the radial gap, which has the same sign.
    pub fn level(&self, p: Point) -> f64 {
        match &self.spec {
            DomainSpec::UnitSquare => p.x.min(1.0 - p.x).min(p.y).min(1.0 - p.y),
            _ => {
                let rho = p.norm();
                let outer = self.outer_radius(p.angle()).unwrap() - rho;
                match self.hole {
                    Some(a) => outer.min(rho - a),
                    None => outer,
                }
            }
        }
    }

    /// Signed clearance: distance to the nearest boundary point, negative outside.
    pub fn contains(&self, p: Point) -> (bool, f64) {
        let c = self.clearance(p);
        (c > 0.0, c)
    }

    pub fn clearance(&self, p: Point) -> f64 {
        match &self.spec {
            DomainSpec::UnitSquare => {
                let inside = (0.0..=1.0).contains(&p.x) && (0.0..=1.0).contains(&p.y);
                if inside {
                    p.x.min(1.0 - p.x).min(p.y).min(1.0 - p.y)
                } else {
                    let dx = (-p.x).max(p.x - 1.0).max(0.0);
                    let dy = (-p.y).max(p.y - 1.0).max(0.0);
                    -dx.hypot(dy)
                }
            }
            DomainSpec::UnitDisk => 1.0 - p.norm(),
            DomainSpec::Annulus { inner_radius } => {
                let r = p.norm();
                (1.0 - r).min(r - inner_radius)
            }
            _ => {
                let rho = p.norm();
                let outer_sign = if self.outer_radius(p.angle()).unwrap() >= rho {
                    1.0
                } else {
                    -1.0
                };
                let d_outer = outer_sign * self.distance_to_curve(&self.curves[0], p);
                match self.hole {
                    Some(a) => d_outer.min(rho - a),
                    None => d_outer,
                }
            }
        }
    }

    /// Unsigned distance from `p` to a polar-graph component: coarse sampling
    /// then Newton on the squared distance.
    fn distance_to_curve(&self, curve: &BoundaryCurve, p: Point) -> f64 {
        let samples = 720;
        let mut best_t = 0.0;
        let mut best = f64::INFINITY;
        for i in 0..samples {
            let t = TAU * i as f64 / samples as f64;
            let d = curve.position(t).dist(p);
            if d < best {
                best = d;
                best_t = t;
            }
        }
        let mut t = best_t;
        for _ in 0..30 {
            let (c, d1, d2) = curve.derivatives(t);
            let diff = c - p;
            let g = diff.dot(d1);
            let h = d1.dot(d1) + diff.dot(d2);
            if h <= 0.0 {
                break;
            }
            let step = (g / h).clamp(-0.05, 0.05);
            t -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        best.min(curve.position(t).dist(p))
    }

    /// The boundary component closest to a point near the boundary, with its parameter.
    pub fn locate_on_boundary(&self, p: Point) -> (usize, f64) {
        match (&self.spec, self.hole) {
            (_, Some(a)) => {
                let rho = p.norm();
                let outer = self.outer_radius(p.angle()).unwrap();
                if (rho - a).abs() < (outer - rho).abs() {
                    (1, self.curves[1].parameter_of(p))
                } else {
                    (0, self.curves[0].parameter_of(p))
                }
            }
            _ => (0, self.curves[0].parameter_of(p)),
        }
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        match &self.spec {
            DomainSpec::UnitSquare => (Point::new(0.0, 0.0), Point::new(1.0, 1.0)),
            DomainSpec::UnitDisk | DomainSpec::Annulus { .. } => {
                (Point::new(-1.0, -1.0), Point::new(1.0, 1.0))
            }
            _ => {
                let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
                let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
                for i in 0..4096 {
                    let q = self.curves[0].position(TAU * i as f64 / 4096.0);
                    lo = Point::new(lo.x.min(q.x), lo.y.min(q.y));
                    hi = Point::new(hi.x.max(q.x), hi.y.max(q.y));
                }
                let pad = 1e-3;
                (lo - Point::new(pad, pad), hi + Point::new(pad, pad))
            }
        }
    }

    pub fn area(&self) -> f64 {
        match &self.spec {
            DomainSpec::UnitSquare => 1.0,
            DomainSpec::UnitDisk => PI,
            DomainSpec::Annulus { inner_radius } => PI * (1.0 - inner_radius * inner_radius),
            _ => {
                let poly = self.outer.as_ref().unwrap();
                // Trapezoid rule is exact for trigonometric polynomials of degree < n/2.
                let n = 64 * (poly.max_index() as usize + 1);
                let s: f64 = (0..n)
                    .map(|i| poly.radius(TAU * i as f64 / n as f64).powi(2))
                    .sum();
                let hole = self.hole.map(|a| PI * a * a).unwrap_or(0.0);
                0.5 * s * TAU / n as f64 - hole
            }
        }
    }

    /// Smallest signed curvature over `samples` points per component.
    pub fn min_curvature(&self, samples: usize) -> Result<f64> {
        if self.has_corners() {
            return Err(Error::UnsupportedDomain(
                "boundary has corners; curvature bound undefined".into(),
            ));
        }
        let mut min = f64::INFINITY;
        for c in &self.curves {
            for i in 0..samples {
                if let Curvature::Smooth(k) = c.curvature(TAU * i as f64 / samples as f64) {
                    min = min.min(k);
                }
            }
        }
        Ok(min)
    }

    /// True when the domain is simply connected with non-negative boundary curvature.
    pub fn is_convex(&self) -> bool {
        if self.hole.is_some() {
            return false;
        }
        if self.has_corners() {
            return true;
        }
        self.min_curvature(4096).map(|k| k >= 0.0).unwrap_or(false)
    }
}

/// Validated boundary components of `spec`.
pub fn boundary(spec: &DomainSpec) -> Result<Vec<BoundaryCurve>> {
    Ok(Domain::new(spec.clone())?.curves)
}

/// Safety factor applied to the sampled curvature bound.
pub const CURVATURE_MARGIN: f64 = 0.01;

/// `θ ≥ 0` such that the boundary curvature satisfies `κ ≥ −θ`, padded by 1%.
pub fn min_mean_curvature_bound(spec: &DomainSpec) -> Result<f64> {
    let domain = Domain::new(spec.clone())?;
    let min = domain.min_curvature(1 << 16)?;
    Ok((-min).max(0.0) * (1.0 + CURVATURE_MARGIN))
}

/// A ray from the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    pub index: u32,
    pub angle: f64,
}

impl Ray {
    pub fn direction(&self) -> Point {
        Point::polar(1.0, self.angle)
    }

    /// Distance from `p` to the ray.
    pub fn distance(&self, p: Point) -> f64 {
        let d = self.direction();
        let along = p.dot(d);
        if along <= 0.0 {
            p.norm()
        } else {
            p.cross(d).abs()
        }
    }
}

/// The `n` rays at angles `π/n + 2πk/n`, `k = 1..n`, reduced to `[0, 2π)`.
pub fn symmetry_rays(n: u32) -> Vec<Ray> {
    let nf = n as f64;
    (1..=n)
        .map(|k| Ray {
            index: k,
            angle: wrap_angle(PI / nf + TAU * k as f64 / nf),
        })
        .collect()
}

/// The larger of two `(point, value)` pairs; ties go to the lexicographically
/// smaller point, so parallel reductions do not depend on evaluation order.
pub fn larger<T: Copy>(a: (Point, T), b: (Point, T), key: impl Fn(T) -> f64) -> (Point, T) {
    let (ka, kb) = (key(a.1), key(b.1));
    if kb > ka || (kb == ka && (b.0.x, b.0.y) < (a.0.x, a.0.y)) {
        b
    } else {
        a
    }
}

/// Distance from `p` to the union of the symmetry rays.
pub fn distance_to_rays(rays: &[Ray], p: Point) -> f64 {
    rays.iter().map(|r| r.distance(p)).fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flower_rejects_out_of_range_inner_radius() {
        assert!(Domain::new(DomainSpec::flower(6, 0.2)).is_err());
        assert!(Domain::new(DomainSpec::flower(6, 0.5)).is_err());
        assert!(Domain::new(DomainSpec::flower(0, 0.3)).is_err());
        assert!(Domain::new(DomainSpec::flower(6, 1.0 / 3.0)).is_ok());
    }

    #[test]
    fn star_rejects_non_positive_radius() {
        let bad = DomainSpec::star(&[(0, 1.0, 0.0), (3, 1.2, 0.0)]);
        assert!(matches!(Domain::new(bad), Err(Error::Parameter(_))));
    }

    #[test]
    fn square_corners_are_flagged() {
        let d = Domain::new(DomainSpec::UnitSquare).unwrap();
        let c = &d.boundary()[0];
        assert_eq!(c.curvature(0.0), Curvature::Corner);
        assert_eq!(c.curvature(FRAC_PI_2), Curvature::Corner);
        assert_eq!(c.curvature(0.3), Curvature::Smooth(0.0));
        assert!(min_mean_curvature_bound(&DomainSpec::UnitSquare).is_err());
    }

    #[test]
    fn square_parameter_roundtrip() {
        let d = Domain::new(DomainSpec::UnitSquare).unwrap();
        let c = &d.boundary()[0];
        for t in [0.1, 1.7, 2.5, 4.0, 6.0] {
            assert!((c.parameter_of(c.position(t)) - t).abs() < 1e-12);
        }
    }

    #[test]
    fn ray_distance() {
        let r = Ray {
            index: 1,
            angle: 0.0,
        };
        assert!((r.distance(Point::new(2.0, 0.5)) - 0.5).abs() < 1e-15);
        assert!((r.distance(Point::new(-3.0, 4.0)) - 5.0).abs() < 1e-15);
    }
}
