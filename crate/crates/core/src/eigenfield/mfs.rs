//! Method of fundamental solutions.
//!
//! For a trial wavenumber `k = √λ` the basis functions are `Y0(k|x − y_j|)`
//! for exterior charges `y_j`. With `A` the basis sampled at boundary
//! collocation points and `B` at interior probes, the stacked matrix
//! `[A; B] = QR` gives `σ(λ) = σ_min(Q_A)`: the sine of the angle between the
//! trial space and functions vanishing on the boundary. Eigenvalues are the
//! local minima of `σ` that fall below a threshold.
//!
//! Domains with `D_n` symmetry use orbit-summed charges, which restricts the
//! solve to the fully symmetric subspace (the one holding the ground state)
//! and to collocation on one fundamental sector.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Backend, EigenField, FieldSample};
use crate::error::{Error, Result};
use crate::geometry::{BoundaryCurve, Domain, DomainSpec, Point};
use crate::sampling;
use crate::specfun;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChargePlacement {
    /// `y = x(t) + d ν(t)` with `d = charge_distance × component diameter`.
    NormalOffset,
    /// Radial offset that shrinks towards strongly concave boundary points,
    /// with collocation and charges clustered there at the same rate. Radial
    /// offsets of a polar graph never re-enter the domain.
    Graded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MfsConfig {
    /// Number of independent charges (per fundamental sector when symmetric).
    pub charges: usize,
    /// Boundary collocation points, same convention as `charges`.
    pub collocation: usize,
    pub interior_probes: usize,
    pub charge_distance: f64,
    pub placement: ChargePlacement,
    /// Offset per unit distance from the nearest concave pinch (graded placement).
    pub grading: f64,
    /// Uniform λ resolution of the scan.
    pub scan_step: f64,
    /// Acceptance threshold on `σ` at a refined minimum.
    pub threshold: f64,
    /// Exploit the domain's dihedral symmetry when it has one.
    pub use_symmetry: bool,
    /// Basis reduction factor for the first scan pass; 1 scans at full size.
    pub coarse_factor: usize,
    /// Index assigned to the first eigenvalue found in the window.
    pub first_index: u32,
    /// Stop after this many eigenvalues (counted from the low end of the window).
    pub max_count: Option<usize>,
}

impl Default for MfsConfig {
    fn default() -> Self {
        MfsConfig {
            charges: 80,
            collocation: 160,
            interior_probes: 40,
            charge_distance: 0.15,
            placement: ChargePlacement::NormalOffset,
            grading: 0.5,
            scan_step: 0.02,
            threshold: 1e-6,
            use_symmetry: true,
            coarse_factor: 1,
            first_index: 1,
            max_count: None,
        }
    }
}

impl MfsConfig {
    /// Settings used for the flower domains: graded charge placement, a
    /// symmetric basis and a reduced first scan pass.
    pub fn flower() -> Self {
        MfsConfig {
            charges: 160,
            collocation: 320,
            interior_probes: 30,
            charge_distance: 0.1,
            placement: ChargePlacement::Graded,
            grading: 0.4,
            coarse_factor: 3,
            ..MfsConfig::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.charges < 4 || self.collocation < self.charges {
            return Err(Error::Parameter(format!(
                "need at least 4 charges and collocation >= charges (got {} / {})",
                self.charges, self.collocation
            )));
        }
        if !(self.charge_distance > 0.0 && self.charge_distance < 1.0) {
            return Err(Error::Parameter("charge distance must lie in (0,1)".into()));
        }
        if !(self.grading > 0.0) {
            return Err(Error::Parameter("grading must be positive".into()));
        }
        if !(self.scan_step > 0.0) || !(self.threshold > 0.0) {
            return Err(Error::Parameter("scan step and threshold must be positive".into()));
        }
        Ok(())
    }
}

/// A weighted sum of fundamental solutions, with every charge of a symmetry
/// orbit listed explicitly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MfsExpansion {
    pub wavenumber: f64,
    pub charges: Vec<Point>,
    pub weights: Vec<f64>,
    pub dihedral: Option<u32>,
}

impl MfsExpansion {
    pub fn dihedral_order(&self) -> Option<u32> {
        self.dihedral
    }

    pub(crate) fn sample(&self, p: Point) -> FieldSample {
        let k = self.wavenumber;
        let mut out = FieldSample::default();
        for (y, &w) in self.charges.iter().zip(&self.weights) {
            let d = p - *y;
            let rho = d.dot(d).sqrt();
            let kr = k * rho;
            let (y0, y1) = specfun::y01(kr);
            let f1 = -k * y1;
            let f2 = k * k * (-y0 + y1 / kr);
            let inv = 1.0 / rho;
            let (ex, ey) = (d.x * inv, d.y * inv);
            let t = f1 * inv;
            out.value += w * y0;
            out.grad.x += w * f1 * ex;
            out.grad.y += w * f1 * ey;
            out.hess[0] += w * (f2 * ex * ex + t * ey * ey);
            out.hess[1] += w * (f2 - t) * ex * ey;
            out.hess[2] += w * (f2 * ey * ey + t * ex * ex);
        }
        out
    }

    pub(crate) fn value(&self, p: Point) -> f64 {
        let k = self.wavenumber;
        self.charges
            .iter()
            .zip(&self.weights)
            .map(|(y, &w)| {
                let d = p - *y;
                w * specfun::y01(k * d.dot(d).sqrt()).0
            })
            .sum()
    }

    pub(crate) fn gradient(&self, p: Point) -> Point {
        let k = self.wavenumber;
        let mut g = Point::ORIGIN;
        for (y, &w) in self.charges.iter().zip(&self.weights) {
            let d = p - *y;
            let rho = d.dot(d).sqrt();
            let c = -w * k * specfun::y1(k * rho) / rho;
            g = g + d * c;
        }
        g
    }
}

/// One eigenpair located by the scan.
#[derive(Debug, Clone)]
pub struct MfsSolution {
    pub eigenvalue: f64,
    pub sigma: f64,
    pub multiplicity: u32,
    pub field: EigenField,
}

/// Discretization of one solve: charges (orbit representatives), boundary
/// collocation points and interior probes.
struct Layout {
    charges: Vec<Point>,
    collocation: Vec<Point>,
    probes: Vec<Point>,
    dihedral: Option<u32>,
}

impl Layout {
    fn orbit(&self, y: Point) -> Vec<Point> {
        match self.dihedral {
            None => vec![y],
            Some(n) => {
                let mut v = Vec::with_capacity(2 * n as usize);
                let refl = Point::new(y.x, -y.y);
                for j in 0..n {
                    let a = TAU * j as f64 / n as f64;
                    v.push(y.rotated(a));
                    v.push(refl.rotated(a));
                }
                v
            }
        }
    }

    /// Distances from every row point to every orbit image of every charge.
    fn distances(&self, rows: &[Point]) -> Vec<Vec<Vec<f64>>> {
        let orbits: Vec<Vec<Point>> = self.charges.iter().map(|&y| self.orbit(y)).collect();
        rows.iter()
            .map(|&x| {
                orbits
                    .iter()
                    .map(|orb| orb.iter().map(|&y| x.dist(y)).collect())
                    .collect()
            })
            .collect()
    }
}

/// Parameters in `[t0, t1)` equidistributed for the measure `density(t) dt`,
/// midpoint rule.
fn weighted_samples<F: Fn(f64) -> f64>(t0: f64, t1: f64, count: usize, density: F) -> Vec<f64> {
    let table_n = 4096;
    let mut cum = Vec::with_capacity(table_n + 1);
    cum.push(0.0);
    let h = (t1 - t0) / table_n as f64;
    let mut acc = 0.0;
    for i in 0..table_n {
        let a = t0 + h * i as f64;
        acc += h / 6.0 * (density(a) + 4.0 * density(a + 0.5 * h) + density(a + h));
        cum.push(acc);
    }
    let total = acc;
    (0..count)
        .map(|i| {
            let target = total * (i as f64 + 0.5) / count as f64;
            let idx = cum.partition_point(|&c| c < target).clamp(1, table_n);
            let (c0, c1) = (cum[idx - 1], cum[idx]);
            let frac = if c1 > c0 { (target - c0) / (c1 - c0) } else { 0.0 };
            t0 + h * ((idx - 1) as f64 + frac)
        })
        .collect()
}

/// Total of `density` over `[t0, t1]` (Simpson, 4096 cells).
fn measure<F: Fn(f64) -> f64>(t0: f64, t1: f64, density: F) -> f64 {
    let n = 4096;
    let h = (t1 - t0) / n as f64;
    (0..n)
        .map(|i| {
            let a = t0 + h * i as f64;
            h / 6.0 * (density(a) + 4.0 * density(a + 0.5 * h) + density(a + h))
        })
        .sum()
}

/// Local length scale along a boundary component.
///
/// Concave curvature minima ("pinches") are where the continuation of a
/// Dirichlet eigenfunction has singularities closest to the boundary: about one
/// radius of curvature outside. The scale is `grading · (distance to the
/// pinch + its radius of curvature)`, capped at `cap`.
struct LocalScale {
    pinches: Vec<(Point, f64)>,
    cap: f64,
    grading: f64,
}

impl LocalScale {
    fn uniform(cap: f64) -> Self {
        LocalScale {
            pinches: Vec::new(),
            cap,
            grading: 1.0,
        }
    }

    fn graded(curve: &BoundaryCurve, cap: f64, grading: f64) -> Self {
        let n = 1 << 14;
        let kappa: Vec<f64> = (0..n)
            .map(|i| match curve.curvature(TAU * i as f64 / n as f64) {
                crate::geometry::Curvature::Smooth(k) => k,
                crate::geometry::Curvature::Corner => 0.0,
            })
            .collect();
        let mut pinches = Vec::new();
        for i in 0..n {
            let (a, b, c) = (kappa[(i + n - 1) % n], kappa[i], kappa[(i + 1) % n]);
            if b < 0.0 && b <= a && b < c && grading / -b < cap {
                pinches.push((curve.position(TAU * i as f64 / n as f64), 1.0 / -b));
            }
        }
        LocalScale {
            pinches,
            cap,
            grading,
        }
    }

    fn at(&self, p: Point) -> f64 {
        self.pinches
            .iter()
            .map(|&(q, rho)| self.grading * (p.dist(q) + rho))
            .fold(self.cap, f64::min)
    }
}

fn build_layout(domain: &Domain, cfg: &MfsConfig, charges: usize, collocation: usize) -> Layout {
    let dihedral = if cfg.use_symmetry {
        domain.spec().dihedral_order()
    } else {
        None
    };
    let curves = domain.boundary();
    // Parameter range per component: full circle, or one fundamental sector.
    let ranges: Vec<(f64, f64)> = curves
        .iter()
        .map(|c| match dihedral {
            None => (0.0, TAU),
            Some(n) => {
                let w = PI / n as f64;
                if c.is_outer() {
                    (0.0, w)
                } else {
                    (TAU - w, TAU)
                }
            }
        })
        .collect();
    let scales: Vec<LocalScale> = curves
        .iter()
        .map(|c| {
            let cap = cfg.charge_distance * c.diameter();
            match cfg.placement {
                ChargePlacement::NormalOffset => LocalScale::uniform(cap),
                ChargePlacement::Graded => LocalScale::graded(c, cap, cfg.grading),
            }
        })
        .collect();
    // Point density per unit parameter: speed over local scale.
    let density = |ci: usize| {
        let c = &curves[ci];
        let sc = &scales[ci];
        move |t: f64| {
            let (x, d1, _) = c.derivatives(t);
            d1.norm() / sc.at(x)
        }
    };
    let masses: Vec<f64> = (0..curves.len())
        .map(|ci| measure(ranges[ci].0, ranges[ci].1, density(ci)))
        .collect();
    let total: f64 = masses.iter().sum();
    let split = |count: usize| -> Vec<usize> {
        let mut parts: Vec<usize> = masses
            .iter()
            .map(|l| ((count as f64 * l / total).round() as usize).max(4))
            .collect();
        let s: usize = parts.iter().sum();
        if s != count && !parts.is_empty() {
            let diff = count as i64 - s as i64;
            parts[0] = (parts[0] as i64 + diff).max(4) as usize;
        }
        parts
    };
    let charge_split = split(charges);
    let colloc_split = split(collocation);

    let mut charge_pts = Vec::new();
    let mut colloc_pts = Vec::new();
    for (ci, c) in curves.iter().enumerate() {
        let (a, b) = ranges[ci];
        for t in weighted_samples(a, b, charge_split[ci], density(ci)) {
            let x = c.position(t);
            let s = scales[ci].at(x);
            let y = match cfg.placement {
                ChargePlacement::NormalOffset => x + c.outward_normal(t) * s,
                ChargePlacement::Graded => {
                    let r = x.norm();
                    if c.is_outer() {
                        x * (1.0 + s / r)
                    } else {
                        x * (1.0 - s.min(0.5 * r) / r)
                    }
                }
            };
            charge_pts.push(y);
        }
        for t in weighted_samples(a, b, colloc_split[ci], density(ci)) {
            colloc_pts.push(c.position(t));
        }
    }
    let (lo, hi) = domain.bounding_box();
    let size = (hi.x - lo.x).min(hi.y - lo.y);
    let probes = sampling::quasi_random_interior(domain, cfg.interior_probes, 0.02 * size, dihedral);
    Layout {
        charges: charge_pts,
        collocation: colloc_pts,
        probes,
        dihedral,
    }
}

/// The λ-independent part of a solve: geometry plus all pairwise distances.
struct Discretization {
    layout: Layout,
    dist_colloc: Vec<Vec<Vec<f64>>>,
    dist_probe: Vec<Vec<Vec<f64>>>,
}

impl Discretization {
    fn new(layout: Layout) -> Self {
        let dist_colloc = layout.distances(&layout.collocation);
        let dist_probe = layout.distances(&layout.probes);
        Discretization {
            layout,
            dist_colloc,
            dist_probe,
        }
    }

    fn ncols(&self) -> usize {
        self.layout.charges.len()
    }

    /// Stacked basis matrix `[A; B]` with unit-norm columns, and the column norms.
    fn matrix(&self, k: f64) -> (DMatrix<f64>, Vec<f64>) {
        let nc = self.dist_colloc.len();
        let np = self.dist_probe.len();
        let n = self.ncols();
        let mut m = DMatrix::<f64>::zeros(nc + np, n);
        let rows = self.dist_colloc.iter().chain(self.dist_probe.iter());
        for (i, row) in rows.enumerate() {
            for (j, orbit) in row.iter().enumerate() {
                m[(i, j)] = orbit.iter().map(|&r| specfun::y01(k * r).0).sum();
            }
        }
        let mut norms = Vec::with_capacity(n);
        for j in 0..n {
            let nrm = m.column(j).norm();
            let s = if nrm > 0.0 { nrm } else { 1.0 };
            m.column_mut(j).scale_mut(1.0 / s);
            norms.push(s);
        }
        (m, norms)
    }

    /// Singular values of `Q_A` (ascending) with right singular vectors and the QR factor.
    fn angle_spectrum(&self, lambda: f64) -> Result<AngleSpectrum> {
        let k = lambda.sqrt();
        let (m, norms) = self.matrix(k);
        let nc = self.dist_colloc.len();
        let n = m.ncols();
        let qr = m.qr();
        let q = qr.q();
        let r = qr.r();
        let qa = q.rows(0, nc).into_owned();
        let svd = qa.svd(false, true);
        let v_t = svd
            .v_t
            .ok_or_else(|| Error::Backend("SVD did not return right singular vectors".into()))?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| svd.singular_values[a].partial_cmp(&svd.singular_values[b]).unwrap());
        let sigmas: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
        let vecs: Vec<DVector<f64>> = order
            .iter()
            .take(2)
            .map(|&i| v_t.row(i).transpose().into_owned())
            .collect();
        Ok(AngleSpectrum {
            sigmas,
            vecs,
            r,
            norms,
        })
    }

    fn sigma(&self, lambda: f64) -> f64 {
        self.angle_spectrum(lambda)
            .map(|s| s.sigmas[0])
            .unwrap_or(f64::INFINITY)
    }

    /// Full charge list and weights of the field with coefficient vector `c`.
    fn expansion(&self, spec: &AngleSpectrum, c: &DVector<f64>, k: f64) -> Result<MfsExpansion> {
        let w_scaled = spec
            .r
            .solve_upper_triangular(c)
            .ok_or_else(|| Error::Backend("triangular factor is singular (rank collapse)".into()))?;
        let mut charges = Vec::new();
        let mut weights = Vec::new();
        for (j, &y) in self.layout.charges.iter().enumerate() {
            let w = w_scaled[j] / spec.norms[j];
            if !w.is_finite() {
                return Err(Error::Backend(format!("non-finite weight for charge {j}")));
            }
            for img in self.layout.orbit(y) {
                charges.push(img);
                weights.push(w);
            }
        }
        Ok(MfsExpansion {
            wavenumber: k,
            charges,
            weights,
            dihedral: self.layout.dihedral,
        })
    }
}

struct AngleSpectrum {
    sigmas: Vec<f64>,
    vecs: Vec<DVector<f64>>,
    r: DMatrix<f64>,
    norms: Vec<f64>,
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() < tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Uniform scan of `σ` followed by the local minima (interior grid points
/// lower than both neighbours, plus window ends that are lower than their one neighbour).
fn scan_minima(disc: &Discretization, lo: f64, hi: f64, step: f64) -> (Vec<(f64, f64)>, Vec<usize>) {
    let n = ((hi - lo) / step).ceil() as usize + 1;
    let grid: Vec<f64> = (0..n).map(|i| (lo + step * i as f64).min(hi)).collect();
    let curve: Vec<(f64, f64)> = grid.par_iter().map(|&l| (l, disc.sigma(l))).collect();
    let mut minima = Vec::new();
    for i in 0..n {
        let s = curve[i].1;
        let left = if i > 0 { curve[i - 1].1 } else { f64::INFINITY };
        let right = if i + 1 < n { curve[i + 1].1 } else { f64::INFINITY };
        if s <= left && s < right {
            minima.push(i);
        }
    }
    (curve, minima)
}

/// `σ(λ)` sampled on the uniform scan grid, for diagnostics and plots.
pub fn sigma_curve(spec: &DomainSpec, window: (f64, f64), cfg: &MfsConfig) -> Result<Vec<(f64, f64)>> {
    cfg.validate()?;
    let domain = Domain::new(spec.clone())?;
    let disc = Discretization::new(build_layout(&domain, cfg, cfg.charges, cfg.collocation));
    Ok(scan_minima(&disc, window.0, window.1, cfg.scan_step).0)
}

/// Locate every eigenvalue in `window` and build normalized eigenfields.
pub fn mfs_solve(spec: &DomainSpec, window: (f64, f64), cfg: &MfsConfig) -> Result<Vec<MfsSolution>> {
    cfg.validate()?;
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::Parameter(format!("invalid λ window ({lo}, {hi})")));
    }
    let domain = Domain::new(spec.clone())?;
    if domain.has_corners() {
        return Err(Error::UnsupportedDomain(
            "fundamental solutions need a smooth boundary".into(),
        ));
    }
    let full = Discretization::new(build_layout(&domain, cfg, cfg.charges, cfg.collocation));

    // Candidate regions from the (possibly reduced) first pass, ascending in λ.
    let step = cfg.scan_step;
    let regions: Vec<(f64, f64)> = if cfg.coarse_factor > 1 {
        let coarse = Discretization::new(build_layout(
            &domain,
            cfg,
            (cfg.charges / cfg.coarse_factor).max(8),
            (cfg.collocation / cfg.coarse_factor).max(16),
        ));
        let (curve, minima) = scan_minima(&coarse, lo, hi, COARSE_STEP_FACTOR * step);
        minima
            .into_iter()
            .filter(|&i| curve[i].1 < COARSE_ACCEPT)
            .map(|i| {
                let c = curve[i].0;
                ((c - COARSE_HALF_WIDTH).max(lo), (c + COARSE_HALF_WIDTH).min(hi))
            })
            .collect()
    } else {
        vec![(lo, hi)]
    };
    let wanted = cfg.max_count.unwrap_or(usize::MAX);

    let mut found: Vec<(f64, f64)> = Vec::new();
    for (a, b) in regions {
        if found.len() >= wanted {
            break;
        }
        let (curve, minima) = scan_minima(&full, a, b, step);
        for i in minima {
            let (ba, bb) = bracket(&curve, i);
            let (lam, sig) = golden_min(|l| full.sigma(l), ba, bb, 1e-13 * bb.max(1.0));
            if sig < cfg.threshold
                && !found.iter().any(|&(l, _)| (l - lam).abs() < 1e-8 * lam)
                && found.len() < wanted
            {
                found.push((lam, sig));
            }
        }
    }
    found.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    if found.is_empty() {
        return Err(Error::NoEigenvalue(format!(
            "no σ minimum below {:.1e} in [{lo}, {hi}] for {}",
            cfg.threshold,
            spec.label()
        )));
    }

    let mut out = Vec::new();
    let mut index = cfg.first_index;
    for (lam, sig) in found {
        let k = lam.sqrt();
        let spectrum = full.angle_spectrum(lam)?;
        let plateau = spectrum
            .sigmas
            .iter()
            .take_while(|&&s| s < cfg.threshold.max(100.0 * sig))
            .count()
            .max(1);
        if plateau >= 2 {
            let (even, odd) = split_degenerate_pair(&full, &spectrum, k)?;
            for c in [even, odd] {
                let exp = full.expansion(&spectrum, &c, k)?;
                out.push(make_solution(&domain, lam, sig, index, 2, exp)?);
                index += 1;
            }
        } else {
            let exp = full.expansion(&spectrum, &spectrum.vecs[0], k)?;
            out.push(make_solution(&domain, lam, sig, index, 1, exp)?);
            index += 1;
        }
    }
    Ok(out)
}

/// The reduced pass scans this many times coarser than `scan_step`.
const COARSE_STEP_FACTOR: f64 = 5.0;
/// Reduced-pass minima above this `σ` are not refined.
const COARSE_ACCEPT: f64 = 0.3;
/// Half width of the full-resolution rescan around a reduced-pass minimum.
const COARSE_HALF_WIDTH: f64 = 0.3;

fn bracket(curve: &[(f64, f64)], i: usize) -> (f64, f64) {
    let a = if i > 0 { curve[i - 1].0 } else { curve[i].0 };
    let b = if i + 1 < curve.len() { curve[i + 1].0 } else { curve[i].0 };
    (a, b)
}

/// In a two-dimensional eigenspace pick the member even under `y → −y`
/// (and its orthogonal partner), so degenerate pairs are reproducible.
fn split_degenerate_pair(
    disc: &Discretization,
    spectrum: &AngleSpectrum,
    k: f64,
) -> Result<(DVector<f64>, DVector<f64>)> {
    let c1 = &spectrum.vecs[0];
    let c2 = &spectrum.vecs[1];
    let f1 = disc.expansion(spectrum, c1, k)?;
    let f2 = disc.expansion(spectrum, c2, k)?;
    let probes = &disc.layout.probes;
    let mut d = DMatrix::<f64>::zeros(probes.len(), 2);
    for (i, &p) in probes.iter().enumerate() {
        let q = Point::new(p.x, -p.y);
        d[(i, 0)] = f1.sample(p).value - f1.sample(q).value;
        d[(i, 1)] = f2.sample(p).value - f2.sample(q).value;
    }
    let svd = d.svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Backend("SVD failed on degenerate pair".into()))?;
    let imin = if svd.singular_values[0] <= svd.singular_values[1] { 0 } else { 1 };
    let (a, b) = (v_t[(imin, 0)], v_t[(imin, 1)]);
    let even = c1 * a + c2 * b;
    let odd = c1 * (-b) + c2 * a;
    Ok((even, odd))
}

fn make_solution(
    domain: &Domain,
    lam: f64,
    sig: f64,
    index: u32,
    multiplicity: u32,
    exp: MfsExpansion,
) -> Result<MfsSolution> {
    // Half the smallest charge-to-boundary distance.
    let mut dmin = f64::INFINITY;
    for c in domain.boundary() {
        let pts: Vec<Point> = (0..2048).map(|i| c.position(TAU * i as f64 / 2048.0)).collect();
        for y in &exp.charges {
            for p in &pts {
                dmin = dmin.min(p.dist(*y));
            }
        }
    }
    let margin = 0.5 * dmin;
    let mut field = EigenField::normalized(
        domain.clone(),
        lam,
        index,
        multiplicity,
        Backend::Mfs(exp),
        margin,
        true,
    );
    // Deterministic sign for the degenerate even member: positive on the +x side.
    if multiplicity == 2 {
        let probe = field.normalization().argmax;
        let mirrored = Point::new(probe.x.abs(), probe.y);
        if field.value(mirrored) < 0.0 {
            field = field.with_scale(-1.0);
        }
    }
    Ok(MfsSolution {
        eigenvalue: lam,
        sigma: sig,
        multiplicity,
        field,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_minimum() {
        let (x, fx) = golden_min(|x| (x - 1.3).abs(), 0.0, 2.0, 1e-12);
        assert!((x - 1.3).abs() < 1e-10);
        assert!(fx < 1e-10);
    }

    #[test]
    fn square_is_refused() {
        let r = mfs_solve(&DomainSpec::UnitSquare, (10.0, 30.0), &MfsConfig::default());
        assert!(matches!(r, Err(Error::UnsupportedDomain(_))));
    }

    #[test]
    fn bad_window_is_refused() {
        let r = mfs_solve(&DomainSpec::UnitDisk, (6.0, 5.0), &MfsConfig::default());
        assert!(matches!(r, Err(Error::Parameter(_))));
    }

    #[test]
    fn weighted_samples_are_increasing() {
        let d = Domain::new(DomainSpec::flower(5, 0.3)).unwrap();
        let c = &d.boundary()[0];
        let ts = weighted_samples(0.0, TAU, 50, |t| c.derivatives(t).1.norm());
        assert!(ts.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn flower_pinches_are_found() {
        let d = Domain::new(DomainSpec::flower(6, 0.3)).unwrap();
        let sc = LocalScale::graded(&d.boundary()[0], 0.2, 0.5);
        assert_eq!(sc.pinches.len(), 6);
        for (p, rho) in &sc.pinches {
            assert!((p.norm() - 0.5).abs() < 1e-6);
            assert!((rho - 1.0 / 70.0).abs() < 1e-4);
        }
    }
}
