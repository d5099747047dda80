use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::{flower_chain, FlowerChain};
use crate::critical::{CriticalKind, CriticalSet};
use crate::eigenfield::{solve, EigenField, SolverChoice};
use crate::error::{Error, Result};
use crate::geometry::{distance_to_rays, symmetry_rays, wrap_angle, DomainSpec, Point};
use crate::sampling;

/// First inner radius tried by the search, and its increment.
pub const SEARCH_START: f64 = 0.26;
pub const SEARCH_STEP: f64 = 0.02;
/// Samples per ray segment in the direct certificate.
pub const RAY_SAMPLES: usize = 2001;

/// `max |u|` over `L_n ∩ Ω`, sampled along each ray from `r = a` to the pinch.
pub fn ray_maximum(field: &EigenField, n: u32) -> f64 {
    let domain = field.domain();
    let a = domain.inner_radius().unwrap_or(0.0);
    symmetry_rays(n)
        .par_iter()
        .map(|ray| {
            let r_out = domain.outer_radius(ray.angle).unwrap_or(1.0);
            (0..RAY_SAMPLES)
                .map(|i| {
                    let r = a + (r_out - a) * i as f64 / (RAY_SAMPLES - 1) as f64;
                    field.value(Point::polar(r, ray.angle)).abs()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchStep {
    pub inner_radius: f64,
    pub eigenvalue: f64,
    pub ray_max: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowerSearch {
    pub petals: u32,
    pub margin: f64,
    pub inner_radius: f64,
    /// `max |u₁|` on `L_n ∩ Ω` at the returned radius.
    pub ray_max: f64,
    pub direct_certificate: bool,
    pub chain_certificate: FlowerChain,
    pub steps: Vec<SearchStep>,
    #[serde(skip)]
    pub field: Option<EigenField>,
}

/// Sweep `a` upward from 0.26 until `max |u₁|` on the rays is at most `1 − margin`.
pub fn flower_a_search(n: u32, margin: f64) -> Result<FlowerSearch> {
    flower_a_search_with(n, margin, &SolverChoice::Auto)
}

pub fn flower_a_search_with(n: u32, margin: f64, solver: &SolverChoice) -> Result<FlowerSearch> {
    if n == 0 {
        return Err(Error::Parameter("petal count must be positive".into()));
    }
    if !(margin > 0.0 && margin < 0.5) {
        return Err(Error::Parameter(format!("margin must lie in (0, 0.5), got {margin}")));
    }
    let mut steps = Vec::new();
    let mut i = 0;
    loop {
        let a = SEARCH_START + SEARCH_STEP * i as f64;
        if a >= 0.5 {
            let best = steps
                .iter()
                .min_by(|x: &&SearchStep, y: &&SearchStep| x.ray_max.total_cmp(&y.ray_max))
                .map(|s| format!("best a = {:.2} with ray max {:.4}", s.inner_radius, s.ray_max))
                .unwrap_or_default();
            return Err(Error::Search(format!(
                "no a in (1/4, 1/2) certifies n = {n} at margin {margin}; {best}"
            )));
        }
        let spec = DomainSpec::flower(n, a);
        let field = solve(&spec, 1, solver)?;
        let ray_max = ray_maximum(&field, n);
        steps.push(SearchStep {
            inner_radius: a,
            eigenvalue: field.eigenvalue(),
            ray_max,
        });
        if ray_max <= 1.0 - margin {
            return Ok(FlowerSearch {
                petals: n,
                margin,
                inner_radius: a,
                ray_max,
                direct_certificate: true,
                chain_certificate: flower_chain(&spec)?.expect("flower spec"),
                steps,
                field: Some(field),
            });
        }
        i += 1;
    }
}

/// Probe points for the rotation test.
const SYMMETRY_PROBES: usize = 2000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub petals: u32,
    /// `max |u(R x) − u(x)|` over the probes, `R` the rotation by `2π/n`.
    pub rotation_defect: f64,
    pub maxima: Vec<Point>,
    /// Largest deviation of consecutive maxima angles from `2π/n`.
    pub angle_defect: f64,
    /// Spread of `|x|` and of `u(x)` over the maxima.
    pub radius_spread: f64,
    pub value_spread: f64,
    /// Maxima per sector between consecutive rays of `L_n`.
    pub per_sector: Vec<usize>,
    pub min_ray_distance: f64,
}

impl SymmetryReport {
    pub fn symmetric(&self) -> bool {
        self.rotation_defect < 1e-6
    }

    /// Exactly `n` maxima in one orbit, one per sector, all off the rays.
    pub fn passed(&self) -> bool {
        self.symmetric()
            && self.maxima.len() == self.petals as usize
            && self.angle_defect < 1e-5
            && self.radius_spread < 1e-6
            && self.value_spread < 1e-6
            && self.per_sector.iter().all(|&c| c == 1)
            && self.min_ray_distance > 1e-3
    }
}

/// Rotation invariance of `u` and the orbit structure of its maxima.
pub fn symmetry_and_maxima_check(field: &EigenField, critical: &CriticalSet, n: u32) -> Result<SymmetryReport> {
    if !matches!(field.spec(), DomainSpec::Flower { petals, .. } if *petals == n) {
        return Err(Error::Precondition(format!(
            "symmetry check needs Flower({n}, a), got {}",
            field.spec().label()
        )));
    }
    let domain = field.domain();
    let step = TAU / n as f64;
    let probes = sampling::quasi_random_interior(domain, SYMMETRY_PROBES, 0.01, None);
    let rotation_defect = probes
        .par_iter()
        .map(|&p| (field.value(p.rotated(step)) - field.value(p)).abs())
        .reduce(|| 0.0, f64::max);

    let mut maxima: Vec<(f64, Point, f64)> = critical
        .points
        .iter()
        .filter(|c| c.kind == CriticalKind::Max)
        .map(|c| (wrap_angle(c.location.angle()), c.location, c.value))
        .collect();
    maxima.sort_by(|a, b| a.0.total_cmp(&b.0));
    let m = maxima.len();
    let angle_defect = if m < 2 {
        if m == 1 && n == 1 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (0..m)
            .map(|i| {
                let d = if i + 1 < m {
                    maxima[i + 1].0 - maxima[i].0
                } else {
                    maxima[0].0 + TAU - maxima[i].0
                };
                (d - step).abs()
            })
            .fold(0.0, f64::max)
    };
    let spread = |f: &dyn Fn(&(f64, Point, f64)) -> f64| {
        let lo = maxima.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = maxima.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        if m == 0 {
            0.0
        } else {
            hi - lo
        }
    };
    let radius_spread = spread(&|x| x.1.norm());
    let value_spread = spread(&|x| x.2);

    let mut per_sector = vec![0usize; n as usize];
    for &(phi, _, _) in &maxima {
        // Sector k lies between the rays at π/n + 2πk/n and π/n + 2π(k+1)/n.
        let k = (wrap_angle(phi - PI / n as f64) / step).floor() as usize % n as usize;
        per_sector[k] += 1;
    }
    let rays = symmetry_rays(n);
    let min_ray_distance = maxima
        .iter()
        .map(|x| distance_to_rays(&rays, x.1))
        .fold(f64::INFINITY, f64::min);
    Ok(SymmetryReport {
        petals: n,
        rotation_defect,
        maxima: maxima.iter().map(|x| x.1).collect(),
        angle_defect,
        radius_spread,
        value_spread,
        per_sector,
        min_ray_distance,
    })
}
