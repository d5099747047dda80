//! Bessel functions of the first and second kind, integer order, real argument.
//!
//! Small arguments use the ascending power series. Between [`SERIES_LIMIT`]
//! and [`HANKEL_LIMIT`] orders 0 and 1 come from one Miller backward sweep
//! (with the Neumann series for `Y`), and beyond it from the Hankel
//! asymptotic expansion. Higher orders follow by recurrence (forward for
//! `Y`, forward or Miller backward for `J`).

use std::f64::consts::{FRAC_2_PI, PI};
use std::sync::OnceLock;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Upper end of the power series. At 8 the largest series term of `J0`/`Y0`
/// is about 1e2, so cancellation costs at most two digits.
pub const SERIES_LIMIT: f64 = 8.0;

/// Start of the Hankel expansion; its smallest term is below 1e-30 here.
pub const HANKEL_LIMIT: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum BesselKind {
    J,
    Y,
}

/// Value and first two derivatives of `J_m` or `Y_m` at `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    pub kind: BesselKind,
    pub order: u32,
    pub x: f64,
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Evaluate `J_m(x)` or `Y_m(x)` together with its first two derivatives.
pub fn bessel(kind: BesselKind, m: u32, x: f64) -> Result<BesselEval> {
    if !x.is_finite() {
        return Err(Error::MathDomain(format!("non-finite argument {x}")));
    }
    let (value, d1, d2) = match kind {
        BesselKind::J => {
            if x < 0.0 {
                return Err(Error::MathDomain(format!("J_{m} at negative x = {x}")));
            }
            jn_with_derivs(m, x)
        }
        BesselKind::Y => {
            if x <= 0.0 {
                return Err(Error::MathDomain(format!("Y_{m} at x = {x} <= 0")));
            }
            yn_with_derivs(m, x)
        }
    };
    Ok(BesselEval {
        kind,
        order: m,
        x,
        value,
        d1,
        d2,
    })
}

/// `J_m(x)` for `x >= 0`.
pub fn jn(m: u32, x: f64) -> f64 {
    jn_values(m, x)
}

/// `Y_m(x)` for `x > 0`.
pub fn yn(m: u32, x: f64) -> f64 {
    let [_, _, y0, y1] = bessel01_reference(x);
    match m {
        0 => y0,
        1 => y1,
        _ => {
            let (mut prev, mut cur) = (y0, y1);
            for k in 1..m {
                let next = 2.0 * k as f64 / x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// `(J0(x), J1(x))` for `x >= 0`, from the interpolation tables.
pub fn j01(x: f64) -> (f64, f64) {
    if x < TABLE_SPLIT {
        let t = tables();
        let v = t.near.eval(x);
        (v[0], v[1])
    } else if x < TABLE_END {
        let v = tables().far_j.eval(x);
        (v[0], v[1])
    } else {
        (hankel(0, x).0, hankel(1, x).0)
    }
}

/// `(Y0(x), Y1(x))` for `x > 0`. This is the hot path of the fundamental-solution kernel.
pub fn y01(x: f64) -> (f64, f64) {
    if x < TABLE_SPLIT {
        let v = tables().near.eval(x);
        let l = FRAC_2_PI * x.ln();
        (v[2] + l * v[0], v[3] + l * v[1] - FRAC_2_PI / x)
    } else if x < TABLE_END {
        let v = tables().far_y.eval(x);
        (v[0], v[1])
    } else {
        (hankel(0, x).1, hankel(1, x).1)
    }
}

/// `Y1(x)` for `x > 0`; the gradient-only kernel.
pub fn y1(x: f64) -> f64 {
    if x < TABLE_SPLIT {
        let v = tables().near.eval(x);
        v[3] + FRAC_2_PI * x.ln() * v[1] - FRAC_2_PI / x
    } else if x < TABLE_END {
        tables().far_y1.eval(x)[0]
    } else {
        hankel(1, x).1
    }
}

/// Reference `(J0, J1, Y0, Y1)` by zone.
fn bessel01_reference(x: f64) -> [f64; 4] {
    if x < SERIES_LIMIT {
        let (y0, y1) = y01_series(x);
        [j_series(0, x).0, j_series(1, x).0, y0, y1]
    } else if x < HANKEL_LIMIT {
        bessel01_neumann(x)
    } else {
        let (j0, y0) = hankel(0, x);
        let (j1, y1) = hankel(1, x);
        [j0, j1, y0, y1]
    }
}

const TABLE_SPLIT: f64 = 2.0;
const TABLE_END: f64 = 64.0;
const CHEB_NODES: usize = 10;
const CELL_WIDTH: f64 = 0.25;

/// Piecewise polynomial interpolants of `N` functions on uniform cells.
///
/// Each cell is interpolated at Chebyshev nodes and stored in the monomial
/// basis of the local variable `u ∈ [−1, 1]`, evaluated by Estrin's scheme.
struct ChebTable<const N: usize> {
    lo: f64,
    width: f64,
    cells: Vec<[[f64; N]; CHEB_NODES]>,
}

impl<const N: usize> ChebTable<N> {
    fn build<F: Fn(f64) -> [f64; N]>(lo: f64, hi: f64, width: f64, f: F) -> Self {
        let count = ((hi - lo) / width).round() as usize;
        let n = CHEB_NODES;
        // Monomial coefficients of T_0..T_{n-1}.
        let mut basis = vec![vec![0.0; n]; n];
        basis[0][0] = 1.0;
        basis[1][1] = 1.0;
        for k in 2..n {
            for j in 0..n {
                let up = if j > 0 { 2.0 * basis[k - 1][j - 1] } else { 0.0 };
                basis[k][j] = up - basis[k - 2][j];
            }
        }
        let cells = (0..count)
            .map(|c| {
                let a = lo + width * c as f64;
                let vals: Vec<[f64; N]> = (0..n)
                    .map(|j| {
                        let u = (PI * (j as f64 + 0.5) / n as f64).cos();
                        f(a + 0.5 * width * (u + 1.0))
                    })
                    .collect();
                let mut mono = [[0.0; N]; CHEB_NODES];
                for q in 0..N {
                    for k in 0..n {
                        let sum: f64 = (0..n)
                            .map(|j| vals[j][q] * (PI * k as f64 * (j as f64 + 0.5) / n as f64).cos())
                            .sum();
                        let ck = if k == 0 { sum / n as f64 } else { 2.0 * sum / n as f64 };
                        for j in 0..n {
                            mono[j][q] += ck * basis[k][j];
                        }
                    }
                }
                mono
            })
            .collect();
        ChebTable { lo, width, cells }
    }

    #[inline]
    fn eval(&self, x: f64) -> [f64; N] {
        let pos = (x - self.lo) / self.width;
        let c = (pos as usize).min(self.cells.len() - 1);
        let u = 2.0 * (pos - c as f64) - 1.0;
        let a = &self.cells[c];
        let u2 = u * u;
        let u4 = u2 * u2;
        let u8 = u4 * u4;
        let mut out = [0.0; N];
        for q in 0..N {
            let q0 = a[0][q] + a[1][q] * u;
            let q1 = a[2][q] + a[3][q] * u;
            let q2 = a[4][q] + a[5][q] * u;
            let q3 = a[6][q] + a[7][q] * u;
            let q4 = a[8][q] + a[9][q] * u;
            out[q] = (q0 + q1 * u2) + (q2 + q3 * u2) * u4 + q4 * u8;
        }
        out
    }
}

struct Tables {
    /// `J0, J1` and the regular parts `Y0 − (2/π) ln x J0`, `Y1 − (2/π) ln x J1 + 2/(πx)`.
    near: ChebTable<4>,
    far_j: ChebTable<2>,
    far_y: ChebTable<2>,
    far_y1: ChebTable<1>,
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let far = |x: f64| bessel01_neumann(x);
        Tables {
            near: ChebTable::build(0.0, TABLE_SPLIT, CELL_WIDTH, y01_regular_parts),
            far_j: ChebTable::build(TABLE_SPLIT, TABLE_END, CELL_WIDTH, |x| {
                let v = far(x);
                [v[0], v[1]]
            }),
            far_y: ChebTable::build(TABLE_SPLIT, TABLE_END, CELL_WIDTH, |x| {
                let v = far(x);
                [v[2], v[3]]
            }),
            far_y1: ChebTable::build(TABLE_SPLIT, TABLE_END, CELL_WIDTH, |x| [far(x)[3]]),
        }
    })
}

/// `(J0, J1, Y0, Y1)` from one Miller sweep: `J_k` by backward recurrence and
/// `Y0 = (2/π)[(ln(x/2) + γ) J0 − 2 Σ (−1)^k J_2k / k]`, with `Y1 = −Y0'`.
/// Every sum is of bounded terms, so there is no cancellation at moderate `x`.
fn bessel01_neumann(x: f64) -> [f64; 4] {
    let top = 2 * ((x as usize + 40) / 2 + 10);
    let mut j = vec![0.0_f64; top + 2];
    j[top] = 1e-30;
    for k in (1..=top).rev() {
        j[k - 1] = 2.0 * k as f64 / x * j[k] - j[k + 1];
        if j[k - 1].abs() > 1e250 {
            for v in j.iter_mut().skip(k - 1) {
                *v *= 1e-250;
            }
        }
    }
    let norm = j[0] + 2.0 * (1..=top / 2).map(|k| j[2 * k]).sum::<f64>();
    for v in j.iter_mut() {
        *v /= norm;
    }
    let log_term = (0.5 * x).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    for k in 1..top / 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s0 += sign * j[2 * k] / k as f64;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k as f64;
    }
    let y0 = FRAC_2_PI * (log_term * j[0] - 2.0 * s0);
    let y1 = -FRAC_2_PI * (j[0] / x - log_term * j[1] - s1);
    [j[0], j[1], y0, y1]
}

/// `J0, J1` and the logarithm-free parts of `Y0, Y1` from the ascending series.
fn y01_regular_parts(x: f64) -> [f64; 4] {
    let half = 0.5 * x;
    let q = -half * half;
    let (mut t0, mut t1) = (1.0, half);
    let (mut j0, mut j1, mut s0, mut s1) = (0.0, 0.0, 0.0, 0.0);
    let mut harmonic = 0.0;
    for k in 0..60u32 {
        let kf = k as f64;
        j0 += t0;
        if k > 0 {
            harmonic += 1.0 / kf;
            s0 -= harmonic * t0;
        }
        j1 += t1;
        let h_next = harmonic + 1.0 / (kf + 1.0);
        s1 += (harmonic + h_next - 2.0 * EULER_GAMMA) * t1;
        t0 *= q / ((kf + 1.0) * (kf + 1.0));
        t1 *= q / ((kf + 1.0) * (kf + 2.0));
        if t0.abs() < 1e-20 && t1.abs() < 1e-20 {
            break;
        }
    }
    let ln2 = std::f64::consts::LN_2;
    let g0 = FRAC_2_PI * ((EULER_GAMMA - ln2) * j0 + s0);
    let g1 = -FRAC_2_PI * ln2 * j1 - s1 / PI;
    [j0, j1, g0, g1]
}

fn jn_values(m: u32, x: f64) -> f64 {
    if x < SERIES_LIMIT {
        return j_series(m, x).0;
    }
    if x < HANKEL_LIMIT {
        return match m {
            0 | 1 => bessel01_neumann(x)[m as usize],
            _ => miller_j(m, x),
        };
    }
    let (j0, _) = hankel(0, x);
    if m == 0 {
        return j0;
    }
    let (j1, _) = hankel(1, x);
    if m == 1 {
        return j1;
    }
    if (m as f64) < x {
        let (mut prev, mut cur) = (j0, j1);
        for k in 1..m {
            let next = 2.0 * k as f64 / x * cur - prev;
            prev = cur;
            cur = next;
        }
        cur
    } else {
        miller_j(m, x)
    }
}

/// Miller's backward recurrence normalized with `1 = J0 + 2 sum J_2k`.
fn miller_j(m: u32, x: f64) -> f64 {
    let start = 2 * ((m.max(x as u32) + 20) / 2 + 10);
    let mut next = 0.0_f64;
    let mut cur = 1e-30_f64;
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        // `cur` now holds the unnormalized J_{k-1}
        let idx = k - 1;
        if idx == m {
            wanted = cur;
        }
        if idx == 0 {
            norm += cur;
        } else if idx % 2 == 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
    }
    wanted / norm
}

fn jn_with_derivs(m: u32, x: f64) -> (f64, f64, f64) {
    if x < SERIES_LIMIT {
        return j_series(m, x);
    }
    let v = jn_values(m, x);
    let d1 = if m == 0 {
        -jn_values(1, x)
    } else {
        0.5 * (jn_values(m - 1, x) - jn_values(m + 1, x))
    };
    let mf = m as f64;
    let d2 = -d1 / x - (1.0 - mf * mf / (x * x)) * v;
    (v, d1, d2)
}

fn yn_with_derivs(m: u32, x: f64) -> (f64, f64, f64) {
    let v = yn(m, x);
    let d1 = if m == 0 {
        -yn(1, x)
    } else {
        0.5 * (yn(m - 1, x) - yn(m + 1, x))
    };
    let mf = m as f64;
    let d2 = -d1 / x - (1.0 - mf * mf / (x * x)) * v;
    (v, d1, d2)
}

/// Power series of `J_m` differentiated term by term. Exact at `x = 0`.
fn j_series(m: u32, x: f64) -> (f64, f64, f64) {
    let half = 0.5 * x;
    // c_0 = (x/2)^m / m!
    let mut fact_m = 1.0;
    for i in 1..=m {
        fact_m *= i as f64;
    }
    if x == 0.0 {
        // Only the powers 0, 1, 2 of x survive.
        return match m {
            0 => (1.0, 0.0, -0.5),
            1 => (0.0, 0.5, 0.0),
            2 => (0.0, 0.0, 0.25),
            _ => (0.0, 0.0, 0.0),
        };
    }
    let mut term = half.powi(m as i32) / fact_m;
    let q = -half * half;
    let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
    let inv_x = 1.0 / x;
    for k in 0..200u32 {
        let p = (2 * k + m) as f64;
        v += term;
        d1 += term * p * inv_x;
        d2 += term * p * (p - 1.0) * inv_x * inv_x;
        let kk = (k + 1) as f64;
        term *= q / (kk * (kk + m as f64));
        if term.abs() < 1e-18 * v.abs().max(1e-300) && k as f64 > half {
            break;
        }
        if term == 0.0 {
            break;
        }
    }
    (v, d1, d2)
}

/// Ascending series for `Y0` and `Y1` (with `J0`, `J1` computed in the same loop).
fn y01_series(x: f64) -> (f64, f64) {
    let half = 0.5 * x;
    let q = -half * half;
    let log_term = half.ln() + EULER_GAMMA;

    // J0 and the harmonic-number sum for Y0.
    let mut t0 = 1.0; // (-x^2/4)^k / (k!)^2
    let mut j0 = 0.0;
    let mut s0 = 0.0;
    let mut harmonic = 0.0;
    // J1 and the digamma sum for Y1: (x/2) (-x^2/4)^k / (k! (k+1)!)
    let mut t1 = half;
    let mut j1 = 0.0;
    let mut s1 = 0.0;
    // psi(k+1) + psi(k+2) + 2 gamma = H_k + H_{k+1}
    for k in 0..200u32 {
        let kf = k as f64;
        j0 += t0;
        if k > 0 {
            harmonic += 1.0 / kf;
            s0 -= harmonic * t0;
        }
        j1 += t1;
        let h_next = harmonic + 1.0 / (kf + 1.0);
        s1 += (harmonic + h_next - 2.0 * EULER_GAMMA) * t1;
        t0 *= q / ((kf + 1.0) * (kf + 1.0));
        t1 *= q / ((kf + 1.0) * (kf + 2.0));
        if k as f64 > half && t0.abs() < 1e-18 && t1.abs() < 1e-18 {
            break;
        }
    }
    let y0 = FRAC_2_PI * (log_term * j0 + s0);
    // Y1 = (2/pi) J1 ln(x/2) - 2/(pi x) - (1/pi) sum (psi(k+1)+psi(k+2)) t1_k
    let y1 = FRAC_2_PI * half.ln() * j1 - FRAC_2_PI / x - s1 / PI;
    (y0, y1)
}

/// Hankel asymptotic expansion for orders 0 and 1. Returns `(J, Y)`.
fn hankel(nu: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * (nu * nu) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0; // a_k(nu) / x^k
    let mut last = f64::INFINITY;
    for k in 1..60u32 {
        let odd = (2 * k - 1) as f64;
        a *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        let mag = a.abs();
        if mag > last {
            break;
        }
        last = mag;
        // P picks even k with sign (-1)^{k/2}; Q picks odd k with sign (-1)^{(k-1)/2}.
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if mag < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * nu as f64 + 0.25) * PI;
    let (s, c) = chi.sin_cos();
    let amp = (FRAC_2_PI / x).sqrt();
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Find the `count` first sign changes of `f` on `(start, end)` scanning with `step`,
/// then bisect each bracket to machine precision.
pub(crate) fn scan_roots<F: Fn(f64) -> f64>(
    f: F,
    start: f64,
    end: f64,
    step: f64,
    count: usize,
) -> Vec<f64> {
    let mut roots = Vec::with_capacity(count);
    let mut a = start;
    let mut fa = f(a);
    while roots.len() < count && a < end {
        let b = (a + step).min(end);
        let fb = f(b);
        if fa == 0.0 {
            roots.push(a);
        } else if (fa > 0.0) != (fb > 0.0) && fb != 0.0 {
            roots.push(bisect(&f, a, b));
        }
        a = b;
        fa = fb;
    }
    roots
}

/// The `k`-th positive zero `j_{m,k}` of `J_m` (k >= 1).
pub fn bessel_root(m: u32, k: u32) -> f64 {
    assert!(k >= 1, "root index starts at 1");
    // j_{m,1} > m and consecutive zeros are more than pi apart.
    let start = (m as f64).max(0.5);
    let end = start + (k as f64 + 2.0) * PI + 2.0 * m as f64 + 10.0;
    let roots = scan_roots(|x| jn(m, x), start, end, 0.05, k as usize);
    roots[k as usize - 1]
}

/// The `k`-th positive zero of `J_m'`, excluding `x = 0`.
pub fn bessel_derivative_root(m: u32, k: u32) -> f64 {
    assert!(k >= 1, "root index starts at 1");
    let d = |x: f64| jn_with_derivs(m, x).1;
    let start = if m == 0 { 0.5 } else { (m as f64 * 0.5).max(0.1) };
    let end = start + (k as f64 + 2.0) * PI + 2.0 * m as f64 + 10.0;
    let roots = scan_roots(d, start, end, 0.05, k as usize);
    roots[k as usize - 1]
}

/// Radial cross product `J0(κa)Y0(κ) − J0(κ)Y0(κa)` of the annulus `a < r < 1`.
pub fn annulus_cross(a: f64, kappa: f64) -> f64 {
    jn(0, kappa * a) * yn(0, kappa) - jn(0, kappa) * yn(0, kappa * a)
}

/// The `k`-th root `κ_k` of the annulus radial cross product.
pub fn annulus_radial_root(a: f64, k: u32) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Parameter(format!("annulus inner radius {a} not in (0,1)")));
    }
    if k == 0 {
        return Err(Error::Parameter("root index starts at 1".into()));
    }
    let gap = 1.0 - a;
    let end = (k as f64 + 3.0) * PI / gap + 20.0;
    let step = (0.05 * PI / gap).min(0.05);
    let roots = scan_roots(|kap| annulus_cross(a, kap), 0.1, end, step, k as usize);
    roots
        .get(k as usize - 1)
        .copied()
        .ok_or_else(|| Error::Search(format!("annulus root #{k} for a = {a} not bracketed in (0.1, {end})")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j0_at_zero() {
        let e = bessel(BesselKind::J, 0, 0.0).unwrap();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.d1, 0.0);
        assert_eq!(e.d2, -0.5);
    }

    #[test]
    fn y_rejects_non_positive() {
        assert!(matches!(bessel(BesselKind::Y, 0, 0.0), Err(Error::MathDomain(_))));
        assert!(matches!(bessel(BesselKind::Y, 2, -1.0), Err(Error::MathDomain(_))));
        assert!(bessel(BesselKind::J, 1, -0.5).is_err());
    }

    #[test]
    fn zones_agree_at_switchovers() {
        let x = SERIES_LIMIT;
        let (y0s, y1s) = y01_series(x);
        let series = [j_series(0, x).0, j_series(1, x).0, y0s, y1s];
        let sweep = bessel01_neumann(x);
        for q in 0..4 {
            assert!((series[q] - sweep[q]).abs() < 1e-13, "q={q}: {} vs {}", series[q], sweep[q]);
        }
        let x = HANKEL_LIMIT;
        let sweep = bessel01_neumann(x);
        let (j0, y0) = hankel(0, x);
        let (j1, y1) = hankel(1, x);
        for (q, h) in [j0, j1, y0, y1].into_iter().enumerate() {
            assert!((sweep[q] - h).abs() < 1e-14, "q={q}: {} vs {h}", sweep[q]);
        }
    }

    #[test]
    fn miller_matches_series_for_high_order() {
        for m in [14u32, 20, 30] {
            let reference = j_series(m, 13.0).0;
            let miller = miller_j(m, 13.0);
            assert!((reference - miller).abs() < 1e-13 * reference.abs().max(1e-3));
        }
    }

    #[test]
    fn tables_match_reference() {
        let mut worst: f64 = 0.0;
        let mut at = 0.0;
        for i in 1..20000 {
            let x = 70.0 * i as f64 / 20000.0;
            let r = bessel01_neumann(x);
            let (j0, j1) = j01(x);
            let (y0, y1) = y01(x);
            for (a, b) in [(j0, r[0]), (j1, r[1]), (y0, r[2]), (y1, r[3])] {
                let e = (a - b).abs() / b.abs().max(1.0);
                if e > worst {
                    worst = e;
                    at = x;
                }
            }
        }
        assert!(worst < 1e-13, "worst deviation {worst:e} at {at}");
    }

    #[test]
    fn neumann_series_matches_series_and_asymptotics() {
        for i in 1..400 {
            let x = 0.15 * i as f64;
            let a = bessel01_neumann(x);
            let b = bessel01_reference(x);
            for q in 0..4 {
                assert!((a[q] - b[q]).abs() < 2e-11 * b[q].abs().max(1.0), "x={x} q={q}");
            }
        }
    }

    #[test]
    fn annulus_rejects_bad_radius() {
        assert!(annulus_radial_root(1.0, 1).is_err());
        assert!(annulus_radial_root(0.0, 1).is_err());
    }
}
