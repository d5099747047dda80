use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{Backend, EigenField, FieldSample, CLOSED_FORM_MARGIN};
use crate::error::{Error, Result};
use crate::geometry::{Domain, DomainSpec, Point};
use crate::specfun::{self, bessel_root, annulus_radial_root, SERIES_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrigBranch {
    Cos,
    Sin,
}

/// Separable eigenfunctions with their mode numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum ClosedForm {
    /// `sin(pπx) sin(qπy)` on the unit square.
    Square { p: u32, q: u32 },
    /// `J_m(kr) cos(mφ)` or `J_m(kr) sin(mφ)` on the unit disk, `k = j_{m,j}`.
    Disk {
        m: u32,
        radial: u32,
        wavenumber: f64,
        branch: TrigBranch,
    },
    /// `Y0(κa) J0(κr) − J0(κa) Y0(κr)` on the annulus `a < r < 1`.
    AnnulusRadial {
        inner_radius: f64,
        radial: u32,
        wavenumber: f64,
    },
}

impl ClosedForm {
    pub fn eigenvalue(&self) -> f64 {
        match self {
            ClosedForm::Square { p, q } => PI * PI * ((p * p + q * q) as f64),
            ClosedForm::Disk { wavenumber, .. } | ClosedForm::AnnulusRadial { wavenumber, .. } => {
                wavenumber * wavenumber
            }
        }
    }

    pub(crate) fn sample(&self, pt: Point) -> FieldSample {
        match self {
            ClosedForm::Square { p, q } => {
                let a = *p as f64 * PI;
                let b = *q as f64 * PI;
                let (sx, cx) = (a * pt.x).sin_cos();
                let (sy, cy) = (b * pt.y).sin_cos();
                let u = sx * sy;
                FieldSample {
                    value: u,
                    grad: Point::new(a * cx * sy, b * sx * cy),
                    hess: [-a * a * u, a * b * cx * cy, -b * b * u],
                }
            }
            ClosedForm::Disk {
                m,
                wavenumber,
                branch,
                ..
            } => disk_mode(*m, *wavenumber, *branch, pt),
            ClosedForm::AnnulusRadial {
                inner_radius,
                wavenumber,
                ..
            } => {
                let k = *wavenumber;
                let (ja, _) = specfun::j01(k * inner_radius);
                let (ya, _) = specfun::y01(k * inner_radius);
                let r = pt.norm();
                let x = k * r;
                let (j0, j1) = specfun::j01(x);
                let (y0, y1) = specfun::y01(x);
                let f = ya * j0 - ja * y0;
                let f1 = k * (-ya * j1 + ja * y1);
                // Z0'' = −Z0 + Z1/x for Z = J, Y
                let f2 = k * k * (ya * (-j0 + j1 / x) - ja * (-y0 + y1 / x));
                radial_sample(f, f1, f2, pt, r)
            }
        }
    }
}

/// Cartesian derivatives of a radial profile `f(r)`.
fn radial_sample(f: f64, f1: f64, f2: f64, pt: Point, r: f64) -> FieldSample {
    let er = pt * (1.0 / r);
    let t = f1 / r;
    FieldSample {
        value: f,
        grad: er * f1,
        hess: [
            f2 * er.x * er.x + t * er.y * er.y,
            (f2 - t) * er.x * er.y,
            f2 * er.y * er.y + t * er.x * er.x,
        ],
    }
}

/// `J_m(kr) T(mφ)` written as `P(x, y) S(r²)` with `P = Re/Im (x + iy)^m`
/// and `S(s) = (k/2)^m Σ (−k²s/4)^j / (j!(j+m)!)`, which is smooth at the origin.
fn disk_mode(m: u32, k: f64, branch: TrigBranch, pt: Point) -> FieldSample {
    let s = pt.x * pt.x + pt.y * pt.y;
    if k * s.sqrt() >= SERIES_LIMIT {
        return disk_mode_polar(m, k, branch, pt);
    }
    // S, S', S'' in s.
    let mut fact_m = 1.0;
    for i in 1..=m {
        fact_m *= i as f64;
    }
    let c = -0.25 * k * k;
    let mut coef = (0.5 * k).powi(m as i32) / fact_m;
    let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
    let mut pow_prev2 = 0.0; // s^{j-2}
    let mut pow_prev1 = 0.0; // s^{j-1}
    let mut pow = 1.0; // s^j
    for j in 0..80u32 {
        let jf = j as f64;
        s0 += coef * pow;
        if j >= 1 {
            s1 += coef * jf * pow_prev1;
        }
        if j >= 2 {
            s2 += coef * jf * (jf - 1.0) * pow_prev2;
        }
        coef *= c / ((jf + 1.0) * (jf + 1.0 + m as f64));
        pow_prev2 = pow_prev1;
        pow_prev1 = pow;
        pow *= s;
        if jf > 0.5 * k * s.sqrt() + 2.0 && (coef * pow).abs() < 1e-18 * s0.abs().max(1e-300) {
            break;
        }
    }
    // z^{m}, z^{m-1}, z^{m-2}
    let zpow = |e: i64| -> (f64, f64) {
        if e < 0 {
            return (0.0, 0.0);
        }
        let (mut re, mut im) = (1.0, 0.0);
        for _ in 0..e {
            let nr = re * pt.x - im * pt.y;
            im = re * pt.y + im * pt.x;
            re = nr;
        }
        (re, im)
    };
    let mf = m as f64;
    let (z0r, z0i) = zpow(m as i64);
    let (z1r, z1i) = zpow(m as i64 - 1);
    let (z2r, z2i) = zpow(m as i64 - 2);
    // d/dx z^m = m z^{m-1}, d/dy z^m = i m z^{m-1}
    let (p, px, py, pxx, pxy, pyy) = match branch {
        TrigBranch::Cos => (
            z0r,
            mf * z1r,
            -mf * z1i,
            mf * (mf - 1.0) * z2r,
            -mf * (mf - 1.0) * z2i,
            -mf * (mf - 1.0) * z2r,
        ),
        TrigBranch::Sin => (
            z0i,
            mf * z1i,
            mf * z1r,
            mf * (mf - 1.0) * z2i,
            mf * (mf - 1.0) * z2r,
            -mf * (mf - 1.0) * z2i,
        ),
    };
    let (x, y) = (pt.x, pt.y);
    let sx = 2.0 * x * s1;
    let sy = 2.0 * y * s1;
    let sxx = 2.0 * s1 + 4.0 * x * x * s2;
    let sxy = 4.0 * x * y * s2;
    let syy = 2.0 * s1 + 4.0 * y * y * s2;
    FieldSample {
        value: p * s0,
        grad: Point::new(px * s0 + p * sx, py * s0 + p * sy),
        hess: [
            pxx * s0 + 2.0 * px * sx + p * sxx,
            pxy * s0 + px * sy + py * sx + p * sxy,
            pyy * s0 + 2.0 * py * sy + p * syy,
        ],
    }
}

fn disk_mode_polar(m: u32, k: f64, branch: TrigBranch, pt: Point) -> FieldSample {
    let r = pt.norm();
    let phi = pt.angle();
    let e = specfun::bessel(specfun::BesselKind::J, m, k * r).expect("non-negative argument");
    let (f, f1, f2) = (e.value, k * e.d1, k * k * e.d2);
    let mf = m as f64;
    let (s, c) = (mf * phi).sin_cos();
    let (g, g1, g2) = match branch {
        TrigBranch::Cos => (c, -mf * s, -mf * mf * c),
        TrigBranch::Sin => (s, mf * c, -mf * mf * s),
    };
    let (ur, up, urr, urp, upp) = (f1 * g, f * g1, f2 * g, f1 * g1, f * g2);
    let er = Point::new(phi.cos(), phi.sin());
    let ep = er.perp();
    let a = urr;
    let b = ur / r + upp / (r * r);
    let cc = urp / r - up / (r * r);
    let outer = |u: Point, v: Point| [u.x * v.x, u.x * v.y, u.y * v.y];
    let rr = outer(er, er);
    let pp = outer(ep, ep);
    let rp = [2.0 * er.x * ep.x, er.x * ep.y + er.y * ep.x, 2.0 * er.y * ep.y];
    FieldSample {
        value: f * g,
        grad: er * ur + ep * (up / r),
        hess: [
            a * rr[0] + b * pp[0] + cc * rp[0],
            a * rr[1] + b * pp[1] + cc * rp[1],
            a * rr[2] + b * pp[2] + cc * rp[2],
        ],
    }
}

/// The first `count` closed-form modes of `spec`, sorted by eigenvalue.
///
/// Degenerate square pairs are ordered by the first mode number, disk pairs
/// list the cosine branch (even in `y`) before the sine branch. The annulus
/// only provides its radial modes, indexed among themselves.
pub fn closed_form_modes(spec: &DomainSpec, count: usize) -> Result<Vec<ClosedForm>> {
    let mut modes = match spec {
        DomainSpec::UnitSquare => {
            let side = (count as f64).sqrt().ceil() as u32 + 2;
            let mut v = Vec::new();
            for p in 1..=side {
                for q in 1..=side {
                    v.push(ClosedForm::Square { p, q });
                }
            }
            v.sort_by(|a, b| {
                let key = |c: &ClosedForm| match c {
                    ClosedForm::Square { p, q } => (p * p + q * q, *p),
                    _ => unreachable!(),
                };
                key(a).cmp(&key(b))
            });
            v
        }
        DomainSpec::UnitDisk => {
            let orders = count as u32 + 1;
            let mut v = Vec::new();
            for m in 0..=orders {
                for j in 1..=(count as u32 + 1) {
                    let k = bessel_root(m, j);
                    v.push(ClosedForm::Disk {
                        m,
                        radial: j,
                        wavenumber: k,
                        branch: TrigBranch::Cos,
                    });
                    if m > 0 {
                        v.push(ClosedForm::Disk {
                            m,
                            radial: j,
                            wavenumber: k,
                            branch: TrigBranch::Sin,
                        });
                    }
                }
            }
            v.sort_by(|a, b| a.eigenvalue().partial_cmp(&b.eigenvalue()).unwrap());
            v
        }
        DomainSpec::Annulus { inner_radius } => (1..=count as u32)
            .map(|j| {
                Ok(ClosedForm::AnnulusRadial {
                    inner_radius: *inner_radius,
                    radial: j,
                    wavenumber: annulus_radial_root(*inner_radius, j)?,
                })
            })
            .collect::<Result<Vec<_>>>()?,
        other => {
            return Err(Error::Unsupported(format!(
                "no closed form for {}",
                other.label()
            )))
        }
    };
    modes.truncate(count);
    Ok(modes)
}

/// The `k`-th closed-form eigenfield (`k ≥ 1`), normalized to `‖u‖∞ = 1`.
pub fn closed_form(spec: &DomainSpec, k: u32) -> Result<EigenField> {
    if k == 0 {
        return Err(Error::Parameter("eigen index starts at 1".into()));
    }
    let domain = Domain::new(spec.clone())?;
    let modes = closed_form_modes(spec, k as usize)?;
    let mode = modes[k as usize - 1].clone();
    let lambda = mode.eigenvalue();
    let multiplicity = multiplicity_of(&mode);
    let margin = match spec {
        DomainSpec::Annulus { inner_radius } => CLOSED_FORM_MARGIN.min(0.5 * inner_radius),
        _ => CLOSED_FORM_MARGIN,
    };
    Ok(EigenField::normalized(
        domain,
        lambda,
        k,
        multiplicity,
        Backend::ClosedForm(mode),
        margin,
        k == 1,
    ))
}

/// Multiplicity of the eigenvalue of `mode`. Zeros of different Bessel
/// functions never coincide, so a disk eigenvalue is simple for `m = 0` and
/// double otherwise; a square eigenvalue counts the ways of writing `p² + q²`.
fn multiplicity_of(mode: &ClosedForm) -> u32 {
    match *mode {
        ClosedForm::Square { p, q } => {
            let n = p * p + q * q;
            (1..=n).filter(|&a| a * a < n && is_square(n - a * a)).count() as u32
        }
        ClosedForm::Disk { m: 0, .. } => 1,
        ClosedForm::Disk { .. } => 2,
        ClosedForm::AnnulusRadial { .. } => 1,
    }
}

fn is_square(n: u32) -> bool {
    let r = (n as f64).sqrt().round() as u32;
    r * r == n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_series_form_matches_polar_form() {
        for m in 0..4 {
            for branch in [TrigBranch::Cos, TrigBranch::Sin] {
                let pt = Point::new(0.41, -0.27);
                let a = disk_mode(m, 5.1, branch, pt);
                let b = disk_mode_polar(m, 5.1, branch, pt);
                assert!((a.value - b.value).abs() < 1e-12);
                assert!((a.grad - b.grad).norm() < 1e-11);
                for i in 0..3 {
                    assert!((a.hess[i] - b.hess[i]).abs() < 1e-10, "m={m} {:?} {:?}", a.hess, b.hess);
                }
            }
        }
    }

    #[test]
    fn unsupported_domains_are_rejected() {
        assert!(matches!(
            closed_form(&DomainSpec::flower(3, 0.4), 1),
            Err(Error::Unsupported(_))
        ));
        assert!(closed_form(&DomainSpec::UnitDisk, 0).is_err());
    }

    #[test]
    fn multiplicities_match_mode_lists() {
        for spec in [DomainSpec::UnitSquare, DomainSpec::UnitDisk] {
            let modes = closed_form_modes(&spec, 40).unwrap();
            for m in &modes[..20] {
                let count = modes
                    .iter()
                    .filter(|c| (c.eigenvalue() - m.eigenvalue()).abs() < 1e-9 * m.eigenvalue())
                    .count() as u32;
                assert_eq!(multiplicity_of(m), count, "{m:?}");
            }
        }
    }

    #[test]
    fn square_ordering() {
        let modes = closed_form_modes(&DomainSpec::UnitSquare, 6).unwrap();
        let pq: Vec<(u32, u32)> = modes
            .iter()
            .map(|c| match c {
                ClosedForm::Square { p, q } => (*p, *q),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(pq, vec![(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1)]);
    }
}
