use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigenfield::EigenField;
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Cells that straddle the nodal set or the boundary are split this many
/// times per side before labelling.
pub const REFINE: i64 = 4;
/// Grid nodes closer than this to the boundary are left out.
pub const MIN_LEVEL: f64 = 1e-6;
/// Grid offsets as fractions of `h`, unequal so lattice points stay off
/// coordinate axes and diagonals.
const OFFSET: (f64, f64) = (0.381_966_011_250_105, 0.276_393_202_250_021);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    fn of(v: f64) -> Self {
        if v > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodalComponent {
    pub label: usize,
    pub sign: Sign,
    /// Number of grid samples (coarse and refined) in the component.
    pub samples: usize,
    /// The sample with the largest `|u|`.
    pub representative: Point,
    pub peak: f64,
}

/// A boundary point where `∂u/∂ν` changes sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaynePoint {
    pub component: usize,
    pub parameter: f64,
    pub location: Point,
}

/// Sign partition of `Ω ∖ D(u)` on a grid of spacing `h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodalPartition {
    pub spacing: f64,
    pub count: usize,
    /// Count at `h / 2`, from the refinement check.
    pub refined_count: usize,
    pub components: Vec<NodalComponent>,
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
    /// Cells whose corners alternate in sign; their diagonals are never joined.
    pub saddle_cells: usize,
    pub payne: Vec<PaynePoint>,
    /// Coarse grid samples inside the domain, with their component label.
    #[serde(skip)]
    pub samples: Vec<(Point, f64, usize)>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller root wins so labels do not depend on merge order.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Grid sampling on the fine lattice `origin + (i, j)·h/REFINE`.
struct Grid<'a> {
    field: &'a EigenField,
    origin: Point,
    fine: f64,
    keys: HashMap<(i64, i64), usize>,
    points: Vec<Point>,
    /// `None` outside the domain.
    values: Vec<Option<f64>>,
}

impl<'a> Grid<'a> {
    fn point(&self, key: (i64, i64)) -> Point {
        self.origin + Point::new(key.0 as f64 * self.fine, key.1 as f64 * self.fine)
    }

    /// Evaluate every key not yet present.
    fn insert(&mut self, keys: Vec<(i64, i64)>) {
        let fresh: Vec<(i64, i64)> = keys
            .into_iter()
            .filter(|k| !self.keys.contains_key(k))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let pts: Vec<Point> = fresh.iter().map(|&k| self.point(k)).collect();
        let field = self.field;
        let vals: Vec<Option<f64>> = pts
            .par_iter()
            .map(|&p| (field.domain().level(p) > MIN_LEVEL).then(|| field.value(p)))
            .collect();
        for ((k, p), v) in fresh.into_iter().zip(pts).zip(vals) {
            self.keys.insert(k, self.points.len());
            self.points.push(p);
            self.values.push(v);
        }
    }

    fn id(&self, key: (i64, i64)) -> usize {
        self.keys[&key]
    }

    fn sign(&self, key: (i64, i64)) -> Option<Sign> {
        self.values[self.id(key)].map(Sign::of)
    }
}

/// Labelled sign components on one grid, without the refinement check.
fn label(field: &EigenField, h: f64) -> (Grid<'_>, UnionFind, usize) {
    let (lo, hi) = field.domain().bounding_box();
    let origin = lo - Point::new(OFFSET.0 * h, OFFSET.1 * h);
    let nx = ((hi.x - origin.x) / h).ceil() as i64 + 1;
    let ny = ((hi.y - origin.y) / h).ceil() as i64 + 1;
    let mut grid = Grid {
        field,
        origin,
        fine: h / REFINE as f64,
        keys: HashMap::new(),
        points: Vec::new(),
        values: Vec::new(),
    };
    let coarse: Vec<(i64, i64)> = (0..ny)
        .flat_map(|j| (0..nx).map(move |i| (REFINE * i, REFINE * j)))
        .collect();
    grid.insert(coarse);

    // Lipschitz estimate from coarse differences, with a safety factor of 2.
    let mut lip: f64 = 0.0;
    for j in 0..ny {
        for i in 0..nx {
            let here = grid.values[grid.id((REFINE * i, REFINE * j))];
            for (di, dj) in [(1, 0), (0, 1)] {
                if i + di >= nx || j + dj >= ny {
                    continue;
                }
                let there = grid.values[grid.id((REFINE * (i + di), REFINE * (j + dj)))];
                if let (Some(u), Some(v)) = (here, there) {
                    lip = lip.max((u - v).abs() / h);
                }
            }
        }
    }
    let lip = 2.0 * lip;

    // Refine every cell that might meet the nodal set or the boundary: mixed
    // or missing corners, or a corner value too small to exclude a zero.
    let mut refined = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let vals = [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)]
                .map(|(a, b)| grid.values[grid.id((REFINE * a, REFINE * b))]);
            let signs = vals.map(|v| v.map(Sign::of));
            let uniform = signs.iter().all(|s| *s == signs[0]) && signs[0].is_some();
            if uniform {
                let smallest = vals.iter().map(|v| v.unwrap().abs()).fold(f64::INFINITY, f64::min);
                if smallest > lip * h * std::f64::consts::SQRT_2 {
                    continue;
                }
                refined.push((i, j));
                continue;
            }
            let centre = grid.point((REFINE * i, REFINE * j)) + Point::new(0.5 * h, 0.5 * h);
            if signs.iter().any(|s| s.is_some()) || field.domain().level(centre) > -h {
                refined.push((i, j));
            }
        }
    }
    let fine_keys: Vec<(i64, i64)> = refined
        .iter()
        .flat_map(|&(i, j)| {
            (0..=REFINE).flat_map(move |b| (0..=REFINE).map(move |a| (REFINE * i + a, REFINE * j + b)))
        })
        .collect();
    grid.insert(fine_keys);

    let mut is_refined = vec![false; (nx * ny) as usize];
    for &(i, j) in &refined {
        is_refined[(j * nx + i) as usize] = true;
    }
    // Same-sign edges, flagged when the endpoint values cannot rule out a
    // pair of zeros in between.
    let fine = grid.fine;
    let mut edges: Vec<(usize, usize, bool)> = Vec::new();
    let mut saddles = 0usize;
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let refine = is_refined[(j * nx + i) as usize];
            let (step, cells) = if refine { (1, REFINE) } else { (REFINE, 1) };
            for b in 0..cells {
                for a in 0..cells {
                    let x0 = REFINE * i + a * step;
                    let y0 = REFINE * j + b * step;
                    let c = [(x0, y0), (x0 + step, y0), (x0 + step, y0 + step), (x0, y0 + step)];
                    for e in 0..4 {
                        let (ia, ib) = (grid.id(c[e]), grid.id(c[(e + 1) % 4]));
                        if let (Some(u), Some(v)) = (grid.values[ia], grid.values[ib]) {
                            if Sign::of(u) == Sign::of(v) {
                                let doubtful = refine && u.abs().min(v.abs()) <= lip * fine;
                                edges.push((ia, ib, doubtful));
                            }
                        }
                    }
                    let s = c.map(|k| grid.sign(k));
                    if s.iter().all(|x| x.is_some()) && s[0] == s[2] && s[1] == s[3] && s[0] != s[1] {
                        saddles += 1;
                    }
                }
            }
        }
    }
    let mut need: Vec<usize> = edges
        .iter()
        .filter(|e| e.2)
        .flat_map(|e| [e.0, e.1])
        .collect();
    need.sort_unstable();
    need.dedup();
    let grads: HashMap<usize, Point> = need
        .par_iter()
        .map(|&id| (id, field.grad(grid.points[id])))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let mut uf = UnionFind::new(grid.points.len());
    for (ia, ib, doubtful) in edges {
        if doubtful {
            let (pa, pb) = (grid.points[ia], grid.points[ib]);
            let d = pb - pa;
            let (u, v) = (grid.values[ia].unwrap(), grid.values[ib].unwrap());
            if hermite_changes_sign(u, grads[&ia].dot(d), v, grads[&ib].dot(d)) {
                continue;
            }
        }
        uf.union(ia, ib);
    }
    (grid, uf, saddles)
}

/// Whether the cubic Hermite interpolant on `[0, 1]` with end values `u, v`
/// (of one sign) and end slopes `mu, mv` leaves that sign.
fn hermite_changes_sign(u: f64, mu: f64, v: f64, mv: f64) -> bool {
    // p(t) = u + mu t + c t² + d t³
    let c = 3.0 * (v - u) - 2.0 * mu - mv;
    let d = 2.0 * (u - v) + mu + mv;
    let p = |t: f64| u + t * (mu + t * (c + t * d));
    let s = u.signum();
    // Stationary points: mu + 2c t + 3d t² = 0.
    let mut roots = Vec::with_capacity(2);
    if d.abs() < 1e-300 {
        if c.abs() > 1e-300 {
            roots.push(-mu / (2.0 * c));
        }
    } else {
        let disc = c * c - 3.0 * d * mu;
        if disc >= 0.0 {
            let r = disc.sqrt();
            roots.push((-c + r) / (3.0 * d));
            roots.push((-c - r) / (3.0 * d));
        }
    }
    roots
        .into_iter()
        .any(|t| t > 0.0 && t < 1.0 && s * p(t) <= 0.0)
}

fn components(grid: &Grid, uf: &mut UnionFind) -> (Vec<NodalComponent>, Vec<usize>) {
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut comps: Vec<NodalComponent> = Vec::new();
    let mut label_of = vec![usize::MAX; grid.points.len()];
    for id in 0..grid.points.len() {
        let Some(v) = grid.values[id] else { continue };
        let root = uf.find(id);
        let next = comps.len();
        let c = *index.entry(root).or_insert(next);
        if c == next {
            comps.push(NodalComponent {
                label: c,
                sign: Sign::of(v),
                samples: 0,
                representative: grid.points[id],
                peak: 0.0,
            });
        }
        let comp = &mut comps[c];
        comp.samples += 1;
        if v.abs() > comp.peak {
            comp.peak = v.abs();
            comp.representative = grid.points[id];
        }
        label_of[id] = c;
    }
    (comps, label_of)
}

fn count_at(field: &EigenField, h: f64) -> usize {
    let (grid, mut uf, _) = label(field, h);
    components(&grid, &mut uf).0.len()
}

/// Nodal domains of `field` on a grid of spacing `h ≤ 0.01`, checked against `h/2`.
pub fn nodal_partition(field: &EigenField, h: f64) -> Result<NodalPartition> {
    if !(h > 0.0 && h <= 0.01) {
        return Err(Error::Parameter(format!("nodal grid spacing must lie in (0, 0.01], got {h}")));
    }
    let (grid, mut uf, saddle_cells) = label(field, h);
    let (components, label_of) = components(&grid, &mut uf);
    let refined_count = count_at(field, 0.5 * h);
    if refined_count != components.len() {
        return Err(Error::Resolution(format!(
            "nodal count {} at h = {h} but {refined_count} at h/2",
            components.len()
        )));
    }
    let samples = (0..grid.points.len())
        .filter(|&id| {
            let (a, b) = key_of(&grid, id);
            a % REFINE == 0 && b % REFINE == 0
        })
        .filter_map(|id| grid.values[id].map(|v| (grid.points[id], v, label_of[id])))
        .collect();
    let positive = components
        .iter()
        .filter(|c| c.sign == Sign::Positive)
        .map(|c| c.label)
        .collect();
    let negative = components
        .iter()
        .filter(|c| c.sign == Sign::Negative)
        .map(|c| c.label)
        .collect();
    Ok(NodalPartition {
        spacing: h,
        count: components.len(),
        refined_count,
        components,
        positive,
        negative,
        saddle_cells,
        payne: payne_points(field),
        samples,
    })
}

fn key_of(grid: &Grid, id: usize) -> (i64, i64) {
    let p = grid.points[id] - grid.origin;
    ((p.x / grid.fine).round() as i64, (p.y / grid.fine).round() as i64)
}

/// Boundary samples used to bracket sign changes of `∂u/∂ν`.
pub const PAYNE_SAMPLES: usize = 8192;

/// Points of `∂Ω` where the normal derivative changes sign, located by bisection.
pub fn payne_points(field: &EigenField) -> Vec<PaynePoint> {
    let mut out = Vec::new();
    for (ci, curve) in field.domain().boundary().iter().enumerate() {
        let dn = |t: f64| field.grad(curve.position(t)).dot(curve.outward_normal(t));
        let ts: Vec<f64> = (0..=PAYNE_SAMPLES)
            .map(|i| std::f64::consts::TAU * i as f64 / PAYNE_SAMPLES as f64)
            .collect();
        let vals: Vec<f64> = ts.par_iter().map(|&t| dn(t)).collect();
        // Scale below which a sample counts as zero (corners, exact symmetry points).
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let floor = 1e-12 * scale;
        let mut last: Option<(f64, f64)> = None;
        for i in 0..PAYNE_SAMPLES {
            let (t, v) = (ts[i], vals[i]);
            if v.abs() <= floor {
                continue;
            }
            if let Some((t0, v0)) = last {
                if v0 * v < 0.0 && !at_corner(curve, t0, t) {
                    let root = bisect(&dn, t0, t, v0);
                    out.push(PaynePoint {
                        component: ci,
                        parameter: root,
                        location: curve.position(root),
                    });
                }
            }
            last = Some((t, v));
        }
        // Close the loop.
        let first = (0..PAYNE_SAMPLES).find(|&i| vals[i].abs() > floor);
        if let (Some((t0, v0)), Some(i)) = (last, first) {
            let (t1, v1) = (ts[i] + std::f64::consts::TAU, vals[i]);
            if v0 * v1 < 0.0 && !at_corner(curve, t0, t1) {
                let root = bisect(&dn, t0, t1, v0).rem_euclid(std::f64::consts::TAU);
                out.push(PaynePoint {
                    component: ci,
                    parameter: root,
                    location: curve.position(root),
                });
            }
        }
    }
    out
}

/// The normal jumps at a corner, so a sign change across one is not a zero.
fn at_corner(curve: &crate::geometry::BoundaryCurve, t0: f64, t1: f64) -> bool {
    curve.corners().iter().any(|&(tc, _)| {
        let tc = if tc < t0 { tc + std::f64::consts::TAU } else { tc };
        tc >= t0 && tc <= t1
    })
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, fa: f64) -> f64 {
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
        } else {
            b = m;
        }
        if b - a < 1e-15 {
            break;
        }
    }
    0.5 * (a + b)
}
