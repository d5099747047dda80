//! The Neumann line set as a planar subdivision.
//!
//! Vertices are critical points, separatrix landing points on the boundary or
//! on a critical circle, and one marker vertex on every closed curve that has
//! no other vertex. Edges are separatrices, boundary arcs and critical-circle
//! arcs. Faces come from a half-edge traversal of the rotation system; bounded
//! counter-clockwise cycles are faces, clockwise cycles are outer boundaries
//! of connected components and become holes of the face that contains them.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::critical::{CriticalKind, CriticalSet};
use crate::eigenfield::EigenField;
use crate::error::{Error, Result};
use crate::flow::{Direction, EndPoint, FlowConfig, Separatrix, Tracer};
use crate::geometry::Point;
use crate::sampling;

/// Boundary vertices closer than this are identified.
const VERTEX_MERGE: f64 = 1e-6;
/// Target chord length of boundary and circle arcs.
const ARC_SPACING: f64 = 0.004;
/// Departure angles closer than this make the rotation system ambiguous.
const ANGLE_TIE: f64 = 1e-10;
/// Separatrices meeting at a vertex may approach each other exponentially;
/// proximity audits ignore points this close to any vertex.
pub const ENDPOINT_EXCLUSION: f64 = 0.1;
/// Minimal distance of a face sample point from `N(u)`.
pub const SAMPLE_CLEARANCE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VertexKind {
    Critical { index: usize },
    BoundaryLanding { component: usize, parameter: f64 },
    CircleLanding { circle: usize, angle: f64 },
    /// Placeholder splitting an otherwise vertex-free closed curve.
    Marker,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub location: Point,
    pub kind: VertexKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EdgeKind {
    Separatrix { saddle: usize, branch_id: usize },
    BoundaryArc { component: usize, from: f64, to: f64 },
    CriticalCircle { circle: usize, from: f64, to: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
    pub polyline: Vec<Point>,
}

impl Edge {
    pub fn is_separatrix(&self) -> bool {
        matches!(self.kind, EdgeKind::Separatrix { .. })
    }

    /// Separatrices and critical-circle arcs: the edges that belong to `N(u)`.
    pub fn in_neumann_set(&self) -> bool {
        !matches!(self.kind, EdgeKind::BoundaryArc { .. })
    }

    pub fn length(&self) -> f64 {
        self.polyline.windows(2).map(|w| w[0].dist(w[1])).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceClass {
    InteriorNd,
    BoundaryNd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignPattern {
    Positive,
    Negative,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Face {
    /// Half-edges `2e` (along edge `e`) or `2e + 1` (against it), face on the left.
    pub cycle: Vec<usize>,
    pub holes: Vec<Vec<usize>>,
    pub sample: Point,
    /// Distance from the sample point to `N(u)` and the boundary.
    pub sample_clearance: f64,
    pub class: FaceClass,
    pub sign: SignPattern,
    pub area: f64,
    /// Right and left ends of the flow line through the sample point.
    pub forward_end: EndPoint,
    pub backward_end: EndPoint,
    /// Critical points with no incident edge that lie in this face.
    pub punctures: Vec<usize>,
    #[serde(skip)]
    outline: Vec<Point>,
    #[serde(skip)]
    hole_outlines: Vec<Vec<Point>>,
}

impl Face {
    /// Strict membership: inside the outer cycle and outside every hole.
    pub fn contains(&self, p: Point) -> bool {
        point_in_polygon(&self.outline, p) && !self.hole_outlines.iter().any(|h| point_in_polygon(h, p))
    }

    pub fn outline(&self) -> &[Point] {
        &self.outline
    }

    pub fn hole_outlines(&self) -> &[Vec<Point>] {
        &self.hole_outlines
    }

    fn bbox(&self) -> (Point, Point) {
        bbox(&self.outline)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerAudit {
    pub vertices: usize,
    pub edges: usize,
    /// Bounded faces of the graph plus the unbounded one.
    pub faces: usize,
    pub components: usize,
    pub passed: bool,
}

/// Neumann domain tallies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeumannCount {
    pub total: usize,
    pub interior: usize,
    pub boundary: usize,
    pub punctures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeumannComplex {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    /// Faces of `Ω ∖ N(u)`; faces outside the domain are already removed.
    pub faces: Vec<Face>,
    /// Critical point indices with no incident edge.
    pub punctures: Vec<usize>,
    pub critical: CriticalSet,
    pub separatrices: Vec<Separatrix>,
    pub euler: EulerAudit,
    /// Number of counter-clockwise cycles, including faces outside the domain.
    pub bounded_cycles: usize,
    pub flow: FlowConfig,
}

fn bbox(pts: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    (lo, hi)
}

fn signed_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| poly[i].cross(poly[(i + 1) % n])).sum::<f64>() * 0.5
}

fn point_in_polygon(poly: &[Point], p: Point) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n.wrapping_sub(1);
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let l2 = d.dot(d);
    if l2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / l2).clamp(0.0, 1.0);
    p.dist(a + d * t)
}

fn polyline_distance(poly: &[Point], p: Point) -> f64 {
    if poly.len() == 1 {
        return poly[0].dist(p);
    }
    poly.windows(2)
        .map(|w| segment_distance(p, w[0], w[1]))
        .fold(f64::INFINITY, f64::min)
}

/// Point of `poly` (starting at its first point) at Euclidean distance `d` from the start.
fn departure_point(poly: &[Point], d: f64) -> Point {
    let o = poly[0];
    for w in poly.windows(2) {
        if w[1].dist(o) >= d {
            // Bisect the segment for the crossing of the circle of radius d.
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..60 {
                let m = 0.5 * (lo + hi);
                if (w[0] + (w[1] - w[0]) * m).dist(o) < d {
                    lo = m;
                } else {
                    hi = m;
                }
            }
            return w[0] + (w[1] - w[0]) * hi;
        }
    }
    *poly.last().unwrap()
}

struct Builder<'a> {
    field: &'a EigenField,
    critical: &'a CriticalSet,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    /// Vertex id of each critical point.
    critical_vertex: Vec<usize>,
    /// `(parameter, vertex)` per boundary component.
    boundary_marks: Vec<Vec<(f64, usize)>>,
    /// `(angle, vertex)` per critical circle.
    circle_marks: Vec<Vec<(f64, usize)>>,
}

impl<'a> Builder<'a> {
    fn boundary_vertex(&mut self, component: usize, parameter: f64, location: Point) -> usize {
        if let Some(&(_, v)) = self.boundary_marks[component]
            .iter()
            .find(|(_, v)| self.vertices[*v].location.dist(location) < VERTEX_MERGE)
        {
            return v;
        }
        let v = self.vertices.len();
        self.vertices.push(Vertex {
            location,
            kind: VertexKind::BoundaryLanding {
                component,
                parameter,
            },
        });
        self.boundary_marks[component].push((parameter, v));
        v
    }

    fn circle_vertex(&mut self, circle: usize, angle: f64) -> usize {
        let c = &self.critical.circles[circle];
        let location = c.center + Point::polar(c.radius, angle);
        if let Some(&(_, v)) = self.circle_marks[circle]
            .iter()
            .find(|(_, v)| self.vertices[*v].location.dist(location) < VERTEX_MERGE)
        {
            return v;
        }
        let v = self.vertices.len();
        self.vertices.push(Vertex {
            location,
            kind: VertexKind::CircleLanding { circle, angle },
        });
        self.circle_marks[circle].push((angle.rem_euclid(TAU), v));
        v
    }

    fn add_separatrix(&mut self, s: &Separatrix) -> Result<()> {
        let Some(t) = &s.trajectory else {
            return Ok(());
        };
        let from = self.critical_vertex[s.saddle];
        let mut polyline = t.points.clone();
        let to = match &t.end {
            EndPoint::AtCritical { index, location } => {
                polyline.push(*location);
                self.critical_vertex[*index]
            }
            EndPoint::AtCriticalCircle { index, angle } => {
                let v = self.circle_vertex(*index, *angle);
                polyline.push(self.vertices[v].location);
                v
            }
            EndPoint::AtBoundary {
                component,
                parameter,
                location,
            } => {
                let v = self.boundary_vertex(*component, *parameter, *location);
                *polyline.last_mut().unwrap() = self.vertices[v].location;
                v
            }
            EndPoint::Unresolved { reason } => {
                let p = self.critical.points[s.saddle].location;
                return Err(Error::Consistency(format!(
                    "dangling separatrix {} of saddle at ({:.6}, {:.6}): {reason}",
                    s.branch_id, p.x, p.y
                )));
            }
        };
        polyline.dedup_by(|a, b| a.dist(*b) < 1e-15);
        // A saddle-saddle connection is found once from each end.
        let mid = polyline[polyline.len() / 2];
        let duplicate = self.edges.iter().any(|e| {
            e.is_separatrix()
                && e.from == to
                && e.to == from
                && polyline_distance(&e.polyline, mid) < 1e-3
        });
        if !duplicate {
            self.edges.push(Edge {
                from,
                to,
                kind: EdgeKind::Separatrix {
                    saddle: s.saddle,
                    branch_id: s.branch_id,
                },
                polyline,
            });
        }
        Ok(())
    }

    /// Split every boundary component and critical circle at its vertices.
    fn add_closed_curves(&mut self) {
        let domain = self.field.domain();
        for (ci, curve) in domain.boundary().iter().enumerate() {
            if self.boundary_marks[ci].is_empty() {
                let v = self.vertices.len();
                self.vertices.push(Vertex {
                    location: curve.position(0.0),
                    kind: VertexKind::Marker,
                });
                self.boundary_marks[ci].push((0.0, v));
            }
            let mut marks = self.boundary_marks[ci].clone();
            marks.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            for k in 0..marks.len() {
                let (t0, v0) = marks[k];
                let (mut t1, v1) = marks[(k + 1) % marks.len()];
                if t1 <= t0 {
                    t1 += TAU;
                }
                let len = curve.arc_length(t0, t1);
                let n = ((len / ARC_SPACING).ceil() as usize).max(8);
                let mut polyline: Vec<Point> = (0..=n)
                    .map(|i| curve.position(t0 + (t1 - t0) * i as f64 / n as f64))
                    .collect();
                polyline[0] = self.vertices[v0].location;
                polyline[n] = self.vertices[v1].location;
                self.edges.push(Edge {
                    from: v0,
                    to: v1,
                    kind: EdgeKind::BoundaryArc {
                        component: ci,
                        from: t0,
                        to: t1,
                    },
                    polyline,
                });
            }
        }
        for (ci, c) in self.critical.circles.iter().enumerate() {
            if self.circle_marks[ci].is_empty() {
                let v = self.vertices.len();
                self.vertices.push(Vertex {
                    location: c.center + Point::new(c.radius, 0.0),
                    kind: VertexKind::Marker,
                });
                self.circle_marks[ci].push((0.0, v));
            }
            let mut marks = self.circle_marks[ci].clone();
            marks.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            for k in 0..marks.len() {
                let (a0, v0) = marks[k];
                let (mut a1, v1) = marks[(k + 1) % marks.len()];
                if a1 <= a0 {
                    a1 += TAU;
                }
                let n = ((c.radius * (a1 - a0) / ARC_SPACING).ceil() as usize).max(8);
                let mut polyline: Vec<Point> = (0..=n)
                    .map(|i| c.center + Point::polar(c.radius, a0 + (a1 - a0) * i as f64 / n as f64))
                    .collect();
                polyline[0] = self.vertices[v0].location;
                polyline[n] = self.vertices[v1].location;
                self.edges.push(Edge {
                    from: v0,
                    to: v1,
                    kind: EdgeKind::CriticalCircle {
                        circle: ci,
                        from: a0,
                        to: a1,
                    },
                    polyline,
                });
            }
        }
    }
}

/// Polyline of half-edge `h`, from its tail to its head.
fn half_polyline(edges: &[Edge], h: usize) -> Vec<Point> {
    let e = &edges[h / 2];
    if h % 2 == 0 {
        e.polyline.clone()
    } else {
        e.polyline.iter().rev().copied().collect()
    }
}

fn half_tail(edges: &[Edge], h: usize) -> usize {
    let e = &edges[h / 2];
    if h % 2 == 0 {
        e.from
    } else {
        e.to
    }
}

fn cycle_outline(edges: &[Edge], cycle: &[usize]) -> Vec<Point> {
    let mut out = Vec::new();
    for &h in cycle {
        let p = half_polyline(edges, h);
        out.extend_from_slice(&p[..p.len() - 1]);
    }
    out
}

/// Faces of the subdivision by next-edge traversal. Returns the cycles.
fn trace_cycles(vertices: &[Vertex], edges: &[Edge]) -> Result<Vec<Vec<usize>>> {
    let nh = 2 * edges.len();
    let mut rotation: Vec<Vec<(f64, usize)>> = vec![Vec::new(); vertices.len()];
    for h in 0..nh {
        let poly = half_polyline(edges, h);
        let len: f64 = poly.windows(2).map(|w| w[0].dist(w[1])).sum();
        let chord = poly[0].dist(*poly.last().unwrap());
        let d = 0.01f64.min(0.25 * len).min(if chord > 0.0 { 0.5 * chord } else { f64::INFINITY });
        let q = departure_point(&poly, d);
        rotation[half_tail(edges, h)].push(((q - poly[0]).angle(), h));
    }
    let mut position = vec![0usize; nh];
    for (v, rot) in rotation.iter_mut().enumerate() {
        rot.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for k in 0..rot.len() {
            let next = rot[(k + 1) % rot.len()].0 + if k + 1 == rot.len() { TAU } else { 0.0 };
            if rot.len() > 1 && (next - rot[k].0).abs() < ANGLE_TIE {
                let p = vertices[v].location;
                return Err(Error::Consistency(format!(
                    "edges leave vertex {v} at ({:.6}, {:.6}) with equal angles {:.12}",
                    p.x, p.y, rot[k].0
                )));
            }
        }
        for (k, &(_, h)) in rot.iter().enumerate() {
            position[h] = k;
        }
    }
    // Arriving along h, leave along the edge just clockwise of the reverse of h.
    let next = |h: usize| {
        let twin = h ^ 1;
        let v = half_tail(edges, twin);
        let rot = &rotation[v];
        let k = position[twin];
        rot[(k + rot.len() - 1) % rot.len()].1
    };
    let mut seen = vec![false; nh];
    let mut cycles = Vec::new();
    for start in 0..nh {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut h = start;
        loop {
            if seen[h] {
                if h != start {
                    return Err(Error::Consistency(
                        "half-edge traversal revisited an edge mid-cycle".into(),
                    ));
                }
                break;
            }
            seen[h] = true;
            cycle.push(h);
            h = next(h);
        }
        cycles.push(cycle);
    }
    Ok(cycles)
}

/// Connected components of the graph; isolated vertices count.
fn components(n: usize, edges: &[Edge]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in edges {
        let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

/// A point of the face far from `N(u)`, by horizontal scanlines.
fn face_sample(
    outline: &[Point],
    holes: &[Vec<Point>],
    obstacles: &[&[Point]],
    points: &[Point],
    boundary: &dyn Fn(Point) -> f64,
) -> (Point, f64) {
    let (lo, hi) = bbox(outline);
    let fractions = [0.5, 0.382, 0.618, 0.25, 0.75, 0.45, 0.55, 0.15, 0.85, 0.33, 0.67];
    let mut best = (outline[0], f64::NEG_INFINITY);
    let rings: Vec<&[Point]> = std::iter::once(outline).chain(holes.iter().map(|h| h.as_slice())).collect();
    for f in fractions {
        let y = lo.y + (hi.y - lo.y) * f;
        let mut xs = Vec::new();
        for ring in &rings {
            let n = ring.len();
            for i in 0..n {
                let (a, b) = (ring[i], ring[(i + 1) % n]);
                if (a.y > y) != (b.y > y) {
                    xs.push(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
                }
            }
        }
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for pair in xs.chunks_exact(2) {
            let p = Point::new(0.5 * (pair[0] + pair[1]), y);
            let mut c = boundary(p).min(0.5 * (pair[1] - pair[0]));
            for o in obstacles {
                c = c.min(polyline_distance(o, p));
            }
            for q in points {
                c = c.min(q.dist(p));
            }
            if c > best.1 {
                best = (p, c);
            }
        }
    }
    best
}

/// Quasi-random points of a face, at least `clearance` away from the given polylines.
fn face_points(face: &Face, count: usize, obstacles: &[&[Point]], clearance: f64) -> Vec<Point> {
    let (lo, hi) = face.bbox();
    let mut out = Vec::with_capacity(count);
    for (u, v) in sampling::r2_sequence(2_000 * count) {
        let p = Point::new(lo.x + (hi.x - lo.x) * u, lo.y + (hi.y - lo.y) * v);
        if face.contains(p) && obstacles.iter().all(|o| polyline_distance(o, p) > clearance) {
            out.push(p);
            if out.len() == count {
                break;
            }
        }
    }
    out
}

/// Assemble the complex from a field and its critical set with default flow settings.
pub fn build(field: &EigenField, critical: &CriticalSet) -> Result<NeumannComplex> {
    build_with(field, critical, FlowConfig::default())
}

pub fn build_with(field: &EigenField, critical: &CriticalSet, flow: FlowConfig) -> Result<NeumannComplex> {
    if let Some(p) = critical.points.iter().find(|p| p.kind == CriticalKind::Degenerate) {
        return Err(Error::Degenerate(format!(
            "critical point at ({:.6}, {:.6}) with Hessian eigenvalues {:?}",
            p.location.x, p.location.y, p.hessian_eigenvalues
        )));
    }
    if critical.has_degenerate() {
        return Err(Error::Degenerate("degenerate critical circle".into()));
    }
    let domain = field.domain();
    let tracer = Tracer::new(field, critical).with_config(flow);
    let saddles: Vec<usize> = critical
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.kind == CriticalKind::Saddle)
        .map(|(i, _)| i)
        .collect();
    let separatrices: Vec<Separatrix> = saddles
        .iter()
        .map(|&i| tracer.separatrices(i))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut b = Builder {
        field,
        critical,
        vertices: Vec::new(),
        edges: Vec::new(),
        critical_vertex: Vec::new(),
        boundary_marks: vec![Vec::new(); domain.boundary().len()],
        circle_marks: vec![Vec::new(); critical.circles.len()],
    };
    for (i, p) in critical.points.iter().enumerate() {
        let v = b.vertices.len();
        b.vertices.push(Vertex {
            location: p.location,
            kind: VertexKind::Critical { index: i },
        });
        b.critical_vertex.push(v);
        if let Some((c, t)) = p.boundary_position {
            b.boundary_marks[c].push((t, v));
        }
    }
    for s in &separatrices {
        b.add_separatrix(s)?;
    }
    b.add_closed_curves();
    let Builder {
        vertices,
        edges,
        critical_vertex,
        ..
    } = b;

    let cycles = trace_cycles(&vertices, &edges)?;
    let comp = components(vertices.len(), &edges);
    let outlines: Vec<Vec<Point>> = cycles.iter().map(|c| cycle_outline(&edges, c)).collect();
    let areas: Vec<f64> = outlines.iter().map(|o| signed_area(o)).collect();
    let ccw: Vec<usize> = (0..cycles.len()).filter(|&i| areas[i] > 0.0).collect();
    let cw: Vec<usize> = (0..cycles.len()).filter(|&i| areas[i] <= 0.0).collect();

    let mut degree = vec![0usize; vertices.len()];
    for e in &edges {
        degree[e.from] += 1;
        degree[e.to] += 1;
    }
    let mut n_components: Vec<usize> = comp.clone();
    n_components.sort();
    n_components.dedup();
    let euler = {
        let (v, e, f, c) = (vertices.len(), edges.len(), ccw.len() + 1, n_components.len());
        EulerAudit {
            vertices: v,
            edges: e,
            faces: f,
            components: c,
            passed: v as i64 - e as i64 + f as i64 == 1 + c as i64,
        }
    };

    // Each clockwise cycle is a hole in the smallest enclosing face of another component.
    let mut holes: Vec<Vec<usize>> = vec![Vec::new(); cycles.len()];
    for &w in &cw {
        let cw_comp = comp[half_tail(&edges, cycles[w][0])];
        let probe = outlines[w][0];
        let host = ccw
            .iter()
            .filter(|&&f| comp[half_tail(&edges, cycles[f][0])] != cw_comp)
            .filter(|&&f| point_in_polygon(&outlines[f], probe))
            .min_by(|&&a, &&b| areas[a].partial_cmp(&areas[b]).unwrap());
        if let Some(&f) = host {
            holes[f].push(w);
        }
    }

    let obstacles: Vec<&[Point]> = edges
        .iter()
        .filter(|e| e.in_neumann_set())
        .map(|e| e.polyline.as_slice())
        .collect();
    let crit_locations: Vec<Point> = critical.points.iter().map(|p| p.location).collect();
    let punctures: Vec<usize> = (0..critical.points.len())
        .filter(|&i| degree[critical_vertex[i]] == 0)
        .collect();

    let level = |p: Point| domain.level(p);
    let mut raw_faces = Vec::new();
    for &f in &ccw {
        let hole_outlines: Vec<Vec<Point>> = holes[f].iter().map(|&w| outlines[w].clone()).collect();
        let (sample, clearance) = face_sample(&outlines[f], &hole_outlines, &obstacles, &crit_locations, &level);
        if domain.level(sample) <= 0.0 {
            continue;
        }
        if clearance < SAMPLE_CLEARANCE {
            return Err(Error::Resolution(format!(
                "face sample at ({:.6}, {:.6}) only {clearance:.2e} from N(u)",
                sample.x, sample.y
            )));
        }
        let area = areas[f] + holes[f].iter().map(|&w| areas[w]).sum::<f64>();
        raw_faces.push(Face {
            cycle: cycles[f].clone(),
            holes: holes[f].iter().map(|&w| cycles[w].clone()).collect(),
            sample,
            sample_clearance: clearance,
            class: FaceClass::InteriorNd,
            sign: SignPattern::Mixed,
            area,
            forward_end: EndPoint::Unresolved {
                reason: "not traced".into(),
            },
            backward_end: EndPoint::Unresolved {
                reason: "not traced".into(),
            },
            punctures: Vec::new(),
            outline: outlines[f].clone(),
            hole_outlines,
        });
    }

    let classified: Vec<Result<Face>> = raw_faces
        .into_par_iter()
        .map(|mut face| {
            // The flow line through a point of a boundary domain meets the
            // boundary in forward or in backward time.
            let resolved = |dir: Direction| -> Result<EndPoint> {
                let end = tracer.trace(face.sample, dir)?.end;
                if let EndPoint::Unresolved { reason } = &end {
                    return Err(Error::Consistency(format!(
                        "flow line through face sample ({:.6}, {:.6}) has no {dir:?} end: {reason}",
                        face.sample.x, face.sample.y
                    )));
                }
                Ok(end)
            };
            let right = resolved(Direction::Forward)?;
            let left = resolved(Direction::Backward)?;
            let hits = |e: &EndPoint| matches!(e, EndPoint::AtBoundary { .. });
            face.class = if hits(&right) || hits(&left) {
                FaceClass::BoundaryNd
            } else {
                FaceClass::InteriorNd
            };
            face.forward_end = right;
            face.backward_end = left;
            let probes = face_points(&face, 100, &[], 0.0);
            let (mut pos, mut neg) = (false, false);
            for p in probes.iter().chain(std::iter::once(&face.sample)) {
                let v = field.value(*p);
                pos |= v > 0.0;
                neg |= v < 0.0;
            }
            face.sign = match (pos, neg) {
                (true, false) => SignPattern::Positive,
                (false, true) => SignPattern::Negative,
                _ => SignPattern::Mixed,
            };
            if face.class == FaceClass::BoundaryNd && face.sign == SignPattern::Mixed {
                return Err(Error::Consistency(format!(
                    "boundary Neumann domain around ({:.6}, {:.6}) changes sign",
                    face.sample.x, face.sample.y
                )));
            }
            Ok(face)
        })
        .collect();
    let mut faces = classified.into_iter().collect::<Result<Vec<_>>>()?;
    for &i in &punctures {
        let p = critical.points[i].location;
        if let Some(f) = faces.iter_mut().find(|f| f.contains(p)) {
            f.punctures.push(i);
        }
    }

    Ok(NeumannComplex {
        vertices,
        edges,
        faces,
        punctures,
        critical: critical.clone(),
        separatrices,
        euler,
        bounded_cycles: ccw.len(),
        flow,
    })
}

/// `(total, interior, boundary, punctures)`.
pub fn count_neumann_domains(complex: &NeumannComplex) -> NeumannCount {
    let boundary = complex
        .faces
        .iter()
        .filter(|f| f.class == FaceClass::BoundaryNd)
        .count();
    NeumannCount {
        total: complex.faces.len(),
        interior: complex.faces.len() - boundary,
        boundary,
        punctures: complex.punctures.len(),
    }
}

pub fn euler_audit(complex: &NeumannComplex) -> EulerAudit {
    complex.euler
}

impl NeumannComplex {
    pub fn count(&self) -> NeumannCount {
        count_neumann_domains(self)
    }

    /// Total length of the edges in `N(u)`.
    pub fn neumann_length(&self) -> f64 {
        self.edges.iter().filter(|e| e.in_neumann_set()).map(Edge::length).sum()
    }

    pub fn face_area_sum(&self) -> f64 {
        self.faces.iter().map(|f| f.area).sum()
    }

    /// Smallest distance between two separatrix edges away from their
    /// endpoints (points within `endpoint_radius` of a vertex are ignored).
    pub fn separatrix_separation(&self, endpoint_radius: f64) -> f64 {
        let seps: Vec<&Edge> = self.edges.iter().filter(|e| e.is_separatrix()).collect();
        let ends: Vec<Point> = self.vertices.iter().map(|v| v.location).collect();
        let far = |p: &Point| ends.iter().all(|q| q.dist(*p) > endpoint_radius);
        let mut best = f64::INFINITY;
        for (i, a) in seps.iter().enumerate() {
            for b in &seps[i + 1..] {
                for p in a.polyline.iter().filter(|p| far(p)) {
                    best = best.min(polyline_distance(&b.polyline, *p));
                }
            }
        }
        best
    }

    /// Proper crossings between separatrix polylines. Integral curves never
    /// cross, so anything but zero is an assembly or integration fault.
    pub fn separatrix_crossings(&self) -> usize {
        let seps: Vec<&Edge> = self.edges.iter().filter(|e| e.is_separatrix()).collect();
        let cross = |a: Point, b: Point, c: Point, d: Point| {
            let o1 = (b - a).cross(c - a);
            let o2 = (b - a).cross(d - a);
            let o3 = (d - c).cross(a - c);
            let o4 = (d - c).cross(b - c);
            o1 * o2 < 0.0 && o3 * o4 < 0.0
        };
        let mut count = 0;
        for (i, a) in seps.iter().enumerate() {
            for b in &seps[i + 1..] {
                let (alo, ahi) = bbox(&a.polyline);
                let (blo, bhi) = bbox(&b.polyline);
                if alo.x > bhi.x || blo.x > ahi.x || alo.y > bhi.y || blo.y > ahi.y {
                    continue;
                }
                for s in a.polyline.windows(2) {
                    for t in b.polyline.windows(2) {
                        if cross(s[0], s[1], t[0], t[1]) {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    /// Left ends of `per_face` points per face: one entry per face listing the
    /// distinct maxima and circles reached.
    pub fn left_ends(&self, field: &EigenField, per_face: usize) -> Result<Vec<FaceLeftEnds>> {
        let tracer = Tracer::new(field, &self.critical).with_config(self.flow);
        let obstacles: Vec<&[Point]> = self
            .edges
            .iter()
            .filter(|e| e.in_neumann_set())
            .map(|e| e.polyline.as_slice())
            .collect();
        self.faces
            .par_iter()
            .enumerate()
            .map(|(fi, face)| {
                let pts = face_points(face, per_face, &obstacles, 1e-3);
                let mut maxima = Vec::new();
                let mut circles = Vec::new();
                let mut other = 0;
                for p in &pts {
                    if field.grad(*p).norm() < 1e-6 {
                        continue;
                    }
                    match tracer.trace(*p, Direction::Backward)?.end {
                        EndPoint::AtCritical { index, .. }
                            if self.critical.points[index].kind == CriticalKind::Max =>
                        {
                            if !maxima.contains(&index) {
                                maxima.push(index);
                            }
                        }
                        EndPoint::AtCriticalCircle { index, .. } => {
                            if !circles.contains(&index) {
                                circles.push(index);
                            }
                        }
                        _ => other += 1,
                    }
                }
                Ok(FaceLeftEnds {
                    face: fi,
                    samples: pts.len(),
                    maxima,
                    circles,
                    other,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceLeftEnds {
    pub face: usize,
    pub samples: usize,
    pub maxima: Vec<usize>,
    pub circles: Vec<usize>,
    /// Left ends that are not maxima (saddles, boundary).
    pub other: usize,
}

impl FaceLeftEnds {
    /// All maximal left ends are one point, or all lie on one circle.
    pub fn is_unique(&self) -> bool {
        self.maxima.len() + self.circles.len() <= 1
    }
}

/// Far end of a separatrix, in a form comparable across launch distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FarEnd {
    Critical(usize),
    Circle(usize),
    Boundary { component: usize, location: Point },
    Exterior,
    Unresolved,
}

fn far_end(s: &Separatrix) -> FarEnd {
    match &s.trajectory {
        None => FarEnd::Exterior,
        Some(t) => match &t.end {
            EndPoint::AtCritical { index, .. } => FarEnd::Critical(*index),
            EndPoint::AtCriticalCircle { index, .. } => FarEnd::Circle(*index),
            EndPoint::AtBoundary {
                component, location, ..
            } => FarEnd::Boundary {
                component: *component,
                location: *location,
            },
            EndPoint::Unresolved { .. } => FarEnd::Unresolved,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaunchRobustness {
    pub separatrices: usize,
    pub mismatches: usize,
    /// Largest distance between boundary landing points of the two runs.
    pub max_landing_shift: f64,
    /// Largest Hausdorff distance between matching polylines, outside a disc
    /// of twice the capture radius about the far end.
    pub max_hausdorff: f64,
}

impl LaunchRobustness {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.max_hausdorff < 1e-4
    }
}

/// Prefix of `poly` up to its first entry into the disc of radius `r` about `c`,
/// ending on the circle.
fn clip_before_disc(poly: &[Point], c: Point, r: f64) -> Vec<Point> {
    if poly[0].dist(c) < r {
        return poly.to_vec();
    }
    let mut out = vec![poly[0]];
    for w in poly.windows(2) {
        if w[1].dist(c) < r {
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..60 {
                let m = 0.5 * (lo + hi);
                if (w[0] + (w[1] - w[0]) * m).dist(c) >= r {
                    lo = m;
                } else {
                    hi = m;
                }
            }
            out.push(w[0] + (w[1] - w[0]) * lo);
            return out;
        }
        out.push(w[1]);
    }
    out
}

fn polyline_hausdorff(a: &[Point], b: &[Point]) -> f64 {
    let one = |p: &[Point], q: &[Point]| {
        p.iter()
            .map(|x| polyline_distance(q, *x))
            .fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

/// Re-trace all separatrices with the launch distance divided by `factor`
/// and compare far ends.
pub fn launch_robustness(field: &EigenField, complex: &NeumannComplex, factor: f64) -> Result<LaunchRobustness> {
    let cfg = FlowConfig {
        launch_distance: complex.flow.launch_distance / factor,
        ..complex.flow
    };
    let tracer = Tracer::new(field, &complex.critical).with_config(cfg);
    let mut mismatches = 0;
    let mut shift: f64 = 0.0;
    let mut hausdorff: f64 = 0.0;
    let mut total = 0;
    let mut by_saddle: Vec<usize> = complex.separatrices.iter().map(|s| s.saddle).collect();
    by_saddle.dedup();
    for saddle in by_saddle {
        let fresh = tracer.separatrices(saddle)?;
        for s in complex.separatrices.iter().filter(|s| s.saddle == saddle) {
            total += 1;
            let other = &fresh[s.branch_id];
            if let (Some(a), Some(b)) = (&s.trajectory, &other.trajectory) {
                // Termination inside the capture disc is arbitrary, so compare
                // the curves outside a slightly larger disc about the far end.
                let end = *a.points.last().unwrap();
                let r = 2.0 * cfg.capture_radius;
                let (a, b) = (clip_before_disc(&a.points, end, r), clip_before_disc(&b.points, end, r));
                hausdorff = hausdorff.max(polyline_hausdorff(&a, &b));
            }
            match (far_end(s), far_end(other)) {
                (
                    FarEnd::Boundary {
                        component: a,
                        location: p,
                    },
                    FarEnd::Boundary {
                        component: b,
                        location: q,
                    },
                ) if a == b => {
                    let d = p.dist(q);
                    shift = shift.max(d);
                    if d > 1e-6 {
                        mismatches += 1;
                    }
                }
                (FarEnd::Unresolved, _) | (_, FarEnd::Unresolved) => mismatches += 1,
                (x, y) => {
                    if x != y {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    Ok(LaunchRobustness {
        separatrices: total,
        mismatches,
        max_landing_shift: shift,
        max_hausdorff: hausdorff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polygon_helpers() {
        let sq = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        assert!((signed_area(&sq) - 1.0).abs() < 1e-15);
        assert!(point_in_polygon(&sq, Point::new(0.3, 0.7)));
        assert!(!point_in_polygon(&sq, Point::new(1.3, 0.7)));
        let p = departure_point(&[Point::ORIGIN, Point::new(1.0, 0.0)], 0.25);
        assert!((p.x - 0.25).abs() < 1e-12);
    }
}
