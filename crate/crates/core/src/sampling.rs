//! Point sets over a domain: square lattices, fundamental sectors of
//! dihedrally symmetric domains, and low-discrepancy probe sequences.

use std::f64::consts::PI;

use crate::geometry::{Domain, Point};

/// Lattice points of spacing `h` lying inside `domain` with level at least `min_level`.
///
/// With `sector = Some(n)` only points with polar angle in `[0, π/n]` are kept,
/// which is a fundamental region of the dihedral group `D_n`.
pub fn lattice(domain: &Domain, h: f64, min_level: f64, sector: Option<u32>) -> Vec<Point> {
    let (lo, hi) = domain.bounding_box();
    let nx = ((hi.x - lo.x) / h).ceil() as usize + 1;
    let ny = ((hi.y - lo.y) / h).ceil() as usize + 1;
    let mut out = Vec::new();
    for j in 0..ny {
        let y = lo.y + h * j as f64;
        if let Some(_n) = sector {
            if y < -h {
                continue;
            }
        }
        for i in 0..nx {
            let p = Point::new(lo.x + h * i as f64, y);
            if let Some(n) = sector {
                let phi = p.angle();
                if !(-1e-12..=PI / n as f64 + 1e-12).contains(&phi) {
                    continue;
                }
            }
            if domain.level(p) > min_level {
                out.push(p);
            }
        }
    }
    out
}

/// The additive-recurrence sequence built on the plastic number; well
/// spread in the unit square for every prefix length.
pub fn r2_sequence(count: usize) -> impl Iterator<Item = (f64, f64)> {
    const G: f64 = 1.324_717_957_244_746;
    let a1 = 1.0 / G;
    let a2 = 1.0 / (G * G);
    (0..count).map(move |i| {
        let i = i as f64 + 1.0;
        ((0.5 + a1 * i).fract(), (0.5 + a2 * i).fract())
    })
}

/// `count` quasi-random interior points with level above `min_level`,
/// optionally restricted to the fundamental sector of `D_n`.
pub fn quasi_random_interior(
    domain: &Domain,
    count: usize,
    min_level: f64,
    sector: Option<u32>,
) -> Vec<Point> {
    let (lo, hi) = domain.bounding_box();
    let mut out = Vec::with_capacity(count);
    let mut drawn = 0usize;
    let mut seq = r2_sequence(usize::MAX);
    while out.len() < count && drawn < 10_000 * count.max(1) {
        let (u, v) = seq.next().unwrap();
        drawn += 1;
        let p = Point::new(lo.x + (hi.x - lo.x) * u, lo.y + (hi.y - lo.y) * v);
        if let Some(n) = sector {
            let phi = p.angle();
            if !(0.0..=PI / n as f64).contains(&phi) {
                continue;
            }
        }
        if domain.level(p) > min_level {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;

    #[test]
    fn lattice_stays_inside() {
        let d = Domain::new(DomainSpec::annulus(0.5)).unwrap();
        let pts = lattice(&d, 0.05, 0.0, None);
        assert!(!pts.is_empty());
        assert!(pts.iter().all(|p| p.norm() > 0.5 && p.norm() < 1.0));
    }

    #[test]
    fn sector_restriction() {
        let d = Domain::new(DomainSpec::flower(4, 0.3)).unwrap();
        let pts = lattice(&d, 0.02, 0.0, Some(4));
        assert!(pts.iter().all(|p| (-1e-12..=PI / 4.0 + 1e-12).contains(&p.angle())));
        let probes = quasi_random_interior(&d, 50, 0.01, Some(4));
        assert_eq!(probes.len(), 50);
    }
}
