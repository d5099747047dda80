//! Integral curves of `−∇u`, their ends, and the separatrices of saddles.
//!
//! Curves are integrated in arc length, `dx/ds = ∓∇u/|∇u|`, with the
//! Dormand–Prince 5(4) pair. `Forward` follows `−∇u` (u decreases) and gives the
//! right end; `Backward` follows `+∇u` and gives the left end.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::critical::{CircleKind, CriticalKind, CriticalPoint, CriticalSet};
use crate::eigenfield::EigenField;
use crate::error::{Error, Result};
use crate::geometry::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Along `+∇u`: u increases.
    Backward,
    /// Along `−∇u`: u decreases.
    Forward,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Backward => 1.0,
            Direction::Forward => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "end", rename_all = "snake_case")]
pub enum EndPoint {
    AtCritical { index: usize, location: Point },
    AtCriticalCircle { index: usize, angle: f64 },
    AtBoundary { component: usize, parameter: f64, location: Point },
    Unresolved { reason: String },
}

impl EndPoint {
    pub fn is_resolved(&self) -> bool {
        !matches!(self, EndPoint::Unresolved { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub start: Point,
    pub direction: Direction,
    pub points: Vec<Point>,
    pub values: Vec<f64>,
    pub end: EndPoint,
    pub length: f64,
}

impl Trajectory {
    /// Largest violation of strict monotonicity of `u` between samples.
    pub fn monotonicity_defect(&self) -> f64 {
        let s = self.direction.sign();
        self.values
            .windows(2)
            .map(|w| (-(w[1] - w[0]) * s).max(0.0))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    /// Local error tolerance of the embedded pair.
    pub tolerance: f64,
    pub max_step: f64,
    /// Capture radius around critical points and circles.
    pub capture_radius: f64,
    /// Points with `|∇u| < capture_gradient · max(1, ‖∇u‖∞)` count as critical:
    /// traces may not start there, and the flow is undefined below it.
    pub capture_gradient: f64,
    pub step_budget: usize,
    /// Distance of separatrix launch points from their saddle.
    pub launch_distance: f64,
    /// Boundary landing points are bisected to this distance.
    pub boundary_tolerance: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            tolerance: 1e-10,
            max_step: 0.01,
            capture_radius: 1e-3,
            capture_gradient: 1e-7,
            step_budget: 1_000_000,
            launch_distance: 1e-5,
            boundary_tolerance: 1e-12,
        }
    }
}

// Dormand–Prince 5(4) tableau (the field is autonomous, so the nodes are unused).
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand–Prince step of length `h`; returns the 5th-order point and the error estimate.
fn dp_step<F: Fn(Point) -> Option<Point>>(f: &F, x: Point, h: f64) -> Option<(Point, f64)> {
    let mut k = [Point::ORIGIN; 7];
    k[0] = f(x)?;
    for i in 1..7 {
        let mut y = x;
        for j in 0..i {
            if A[i][j] != 0.0 {
                y = y + k[j] * (h * A[i][j]);
            }
        }
        k[i] = f(y)?;
    }
    let mut x5 = x;
    let mut err = Point::ORIGIN;
    for i in 0..7 {
        x5 = x5 + k[i] * (h * B5[i]);
        err = err + k[i] * (h * (B5[i] - B4[i]));
    }
    Some((x5, err.norm()))
}

/// Gradient-flow tracer bound to one field and its critical set.
pub struct Tracer<'a> {
    pub field: &'a EigenField,
    pub critical: &'a CriticalSet,
    pub config: FlowConfig,
}

impl<'a> Tracer<'a> {
    pub fn new(field: &'a EigenField, critical: &'a CriticalSet) -> Self {
        Tracer {
            field,
            critical,
            config: FlowConfig::default(),
        }
    }

    pub fn with_config(mut self, config: FlowConfig) -> Self {
        self.config = config;
        self
    }

    fn eps_cap(&self) -> f64 {
        self.config.capture_gradient * self.critical.gradient_scale.max(1.0)
    }

    /// Can a curve in `dir` end at this critical point, arriving with displacement `d`?
    fn accepts(&self, p: &CriticalPoint, dir: Direction, d: Point) -> bool {
        match (p.kind, dir) {
            (CriticalKind::Max, Direction::Backward) | (CriticalKind::Min, Direction::Forward) => true,
            (CriticalKind::Saddle, _) => {
                // Arrivals come in along the contracting eigenvector: the
                // positive-curvature one for descent, the negative one for ascent.
                let v = match dir {
                    Direction::Forward => p.hessian_eigenvectors[1],
                    Direction::Backward => p.hessian_eigenvectors[0],
                };
                let n = d.norm();
                n > 0.0 && (d.dot(v).abs() / n) > 0.999
            }
            _ => false,
        }
    }

    /// Capture test at `x`. `exclude` skips the trace's own starting point.
    fn capture(&self, x: Point, dir: Direction, exclude: Option<usize>) -> Option<EndPoint> {
        let rc = self.config.capture_radius;
        let mut best: Option<(usize, f64)> = None;
        for (i, p) in self.critical.points.iter().enumerate() {
            if Some(i) == exclude {
                continue;
            }
            let d = x - p.location;
            let dist = d.norm();
            if dist < rc && self.accepts(p, dir, d) && best.is_none_or(|(_, b)| dist < b) {
                best = Some((i, dist));
            }
        }
        if let Some((i, _)) = best {
            return Some(EndPoint::AtCritical {
                index: i,
                location: self.critical.points[i].location,
            });
        }
        for (i, c) in self.critical.circles.iter().enumerate() {
            let r = x.dist(c.center);
            let ok = matches!(
                (c.kind, dir),
                (CircleKind::MaxCurve, Direction::Backward) | (CircleKind::MinCurve, Direction::Forward)
            );
            if ok && (r - c.radius).abs() < rc {
                return Some(EndPoint::AtCriticalCircle {
                    index: i,
                    angle: (x - c.center).angle(),
                });
            }
        }
        None
    }

    /// Distance to the nearest critical point or circle (excluding `exclude`).
    fn critical_distance(&self, x: Point, exclude: Option<usize>) -> f64 {
        let pts = self
            .critical
            .points
            .iter()
            .enumerate()
            .filter(|&(i, _)| Some(i) != exclude)
            .map(|(_, p)| p.location.dist(x));
        let circ = self
            .critical
            .circles
            .iter()
            .map(|c| (x.dist(c.center) - c.radius).abs());
        pts.chain(circ).fold(f64::INFINITY, f64::min)
    }

    /// Integrate from `x0` in direction `dir`.
    pub fn trace(&self, x0: Point, dir: Direction) -> Result<Trajectory> {
        let g0 = self.field.grad(x0).norm();
        if g0 < self.eps_cap() {
            return Err(Error::Precondition(format!(
                "trace started at a critical point ({:.6}, {:.6}), |∇u| = {g0:.2e}",
                x0.x, x0.y
            )));
        }
        if self.field.domain().level(x0) < 0.0 {
            return Err(Error::Precondition(format!(
                "trace started outside the domain at ({:.6}, {:.6})",
                x0.x, x0.y
            )));
        }
        self.trace_from(x0, dir, None)
    }

    fn trace_from(&self, x0: Point, dir: Direction, exclude: Option<usize>) -> Result<Trajectory> {
        let field = self.field;
        let domain = field.domain();
        let sign = dir.sign();
        let floor = self.eps_cap() * 1e-3;
        let rhs = |x: Point| -> Option<Point> {
            let g = field.grad(x);
            let n = g.norm();
            (n > floor).then(|| g * (sign / n))
        };
        let cfg = &self.config;
        let mut x = x0;
        let mut points = vec![x0];
        let mut values = vec![field.value(x0)];
        let mut length = 0.0;
        let mut h = cfg.max_step.min(1e-3);
        let mut steps = 0usize;
        let end = loop {
            if let Some(e) = self.capture(x, dir, exclude) {
                break e;
            }
            if steps >= cfg.step_budget {
                break EndPoint::Unresolved {
                    reason: format!("step budget {} exhausted", cfg.step_budget),
                };
            }
            steps += 1;
            // Never step across a capture disk.
            let near = self.critical_distance(x, exclude);
            let cap = cfg.max_step.min((0.5 * near).max(0.25 * cfg.capture_radius));
            h = h.min(cap);
            if h < 1e-14 {
                break EndPoint::Unresolved {
                    reason: format!("step size collapsed at ({:.9}, {:.9})", x.x, x.y),
                };
            }
            let Some((y, err)) = dp_step(&rhs, x, h) else {
                // Vanishing gradient inside the step: shrink and retry.
                h *= 0.25;
                continue;
            };
            if err > cfg.tolerance {
                h *= (0.9 * (cfg.tolerance / err).powf(0.2)).clamp(0.1, 0.5);
                continue;
            }
            if domain.level(y) < 0.0 {
                break self.land(&rhs, x, h, &mut points, &mut values, &mut length);
            }
            let vy = field.value(y);
            let vx = *values.last().unwrap();
            if (vy - vx) * sign < -1e-12 {
                break EndPoint::Unresolved {
                    reason: format!("u not monotone at ({:.9}, {:.9})", y.x, y.y),
                };
            }
            length += h;
            x = y;
            points.push(y);
            values.push(vy);
            let grow = if err > 0.0 {
                (0.9 * (cfg.tolerance / err).powf(0.2)).clamp(1.0, 5.0)
            } else {
                5.0
            };
            h = (h * grow).min(cfg.max_step);
        };
        Ok(Trajectory {
            start: x0,
            direction: dir,
            points,
            values,
            end,
            length,
        })
    }

    /// Bisect the step length at which the curve leaves the domain.
    fn land<F: Fn(Point) -> Option<Point>>(
        &self,
        rhs: &F,
        x: Point,
        h: f64,
        points: &mut Vec<Point>,
        values: &mut Vec<f64>,
        length: &mut f64,
    ) -> EndPoint {
        let domain = self.field.domain();
        let (mut lo, mut hi) = (0.0, h);
        let mut hit = x;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let Some((y, _)) = dp_step(rhs, x, mid) else {
                hi = mid;
                continue;
            };
            if domain.level(y) < 0.0 {
                hi = mid;
            } else {
                lo = mid;
                hit = y;
            }
            if hi - lo < self.config.boundary_tolerance {
                break;
            }
        }
        let (component, parameter) = domain.locate_on_boundary(hit);
        let on = domain.boundary()[component].position(parameter);
        *length += lo;
        points.push(on);
        values.push(self.field.value(on));
        EndPoint::AtBoundary {
            component,
            parameter,
            location: on,
        }
    }
}

/// Integrate from `x0` with default settings.
pub fn trace(field: &EigenField, critical: &CriticalSet, x0: Point, dir: Direction) -> Result<Trajectory> {
    Tracer::new(field, critical).trace(x0, dir)
}

/// The left end of the curve through `x`.
pub fn left_end(field: &EigenField, critical: &CriticalSet, x: Point) -> Result<EndPoint> {
    Ok(trace(field, critical, x, Direction::Backward)?.end)
}

/// Which invariant set of the saddle a separatrix belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Part of `W^s`: launched along the positive-curvature eigenvector, traced Backward.
    Stable,
    /// Part of `W^u`: launched along the negative-curvature eigenvector, traced Forward.
    Unstable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Separatrix {
    pub saddle: usize,
    /// 0..4: `(branch, ±)` in the order Stable+, Stable−, Unstable+, Unstable−.
    pub branch_id: usize,
    pub branch: Branch,
    pub launch_direction: Point,
    /// `None` when the launch point lies outside the closed domain.
    pub trajectory: Option<Trajectory>,
}

impl<'a> Tracer<'a> {
    /// The four separatrices of saddle `index` (exterior branches carry no trajectory).
    pub fn separatrices(&self, index: usize) -> Result<Vec<Separatrix>> {
        let p = self
            .critical
            .points
            .get(index)
            .ok_or_else(|| Error::Parameter(format!("no critical point #{index}")))?;
        match p.kind {
            CriticalKind::Saddle => {}
            CriticalKind::Degenerate => {
                return Err(Error::Degenerate(format!(
                    "degenerate saddle at ({:.6}, {:.6})",
                    p.location.x, p.location.y
                )))
            }
            _ => {
                return Err(Error::Precondition(format!(
                    "critical point #{index} is not a saddle"
                )))
            }
        }
        let domain = self.field.domain();
        let eps = self.config.launch_distance;
        let [v0, v1] = p.hessian_eigenvectors;
        let launches = [
            (Branch::Stable, v1),
            (Branch::Stable, -v1),
            (Branch::Unstable, v0),
            (Branch::Unstable, -v0),
        ];
        launches
            .par_iter()
            .enumerate()
            .map(|(id, &(branch, v))| {
                let start = p.location + v * eps;
                let trajectory = if domain.level(start) > 0.0 {
                    let dir = match branch {
                        Branch::Stable => Direction::Backward,
                        Branch::Unstable => Direction::Forward,
                    };
                    let mut t = self.trace_from(start, dir, Some(index))?;
                    t.points.insert(0, p.location);
                    t.values.insert(0, p.value);
                    t.length += eps;
                    Some(t)
                } else {
                    None
                };
                Ok(Separatrix {
                    saddle: index,
                    branch_id: id,
                    branch,
                    launch_direction: v,
                    trajectory,
                })
            })
            .collect()
    }
}

/// Separatrices of one saddle with default settings.
pub fn separatrices(field: &EigenField, critical: &CriticalSet, saddle: usize) -> Result<Vec<Separatrix>> {
    Tracer::new(field, critical).separatrices(saddle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dormand_prince_integrates_rotation() {
        // x' = (−y, x) for t = 1 from (1, 0).
        let f = |p: Point| Some(Point::new(-p.y, p.x));
        let mut x = Point::new(1.0, 0.0);
        for _ in 0..100 {
            x = dp_step(&f, x, 0.01).unwrap().0;
        }
        assert!((x - Point::new(1f64.cos(), 1f64.sin())).norm() < 1e-12);
    }
}
