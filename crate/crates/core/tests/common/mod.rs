//! Oracles written independently of the library's numerics.
#![allow(dead_code)]

use std::f64::consts::TAU;

/// `J_m(x) = (1/2π) ∫₀^{2π} cos(mτ − x sin τ) dτ` by the trapezoid rule,
/// which converges geometrically for this periodic integrand.
pub fn bessel_j(m: i32, x: f64) -> f64 {
    let n = 256;
    (0..n)
        .map(|i| {
            let t = TAU * i as f64 / n as f64;
            (m as f64 * t - x * t.sin()).cos()
        })
        .sum::<f64>()
        / n as f64
}

pub fn bessel_j_prime(m: i32, x: f64) -> f64 {
    0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x))
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (f(m) > 0.0) == (fa > 0.0) {
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

/// The `k`-th positive zero of `f` found by scanning from `start` in steps of 0.01.
fn kth_zero(f: impl Fn(f64) -> f64, start: f64, k: usize) -> f64 {
    let mut found = 0;
    let mut x = start;
    let mut fx = f(x);
    loop {
        let y = x + 0.01;
        let fy = f(y);
        if fx == 0.0 || fx.signum() != fy.signum() {
            found += 1;
            if found == k {
                return bisect(&f, x, y);
            }
        }
        x = y;
        fx = fy;
    }
}

/// `j_{m,k}`.
pub fn bessel_zero(m: i32, k: usize) -> f64 {
    kth_zero(|x| bessel_j(m, x), 0.5, k)
}

/// `j'_{m,k}` (zeros of `J_m'` away from the origin).
pub fn bessel_prime_zero(m: i32, k: usize) -> f64 {
    kth_zero(|x| bessel_j_prime(m, x), 0.5, k)
}

/// Disk Dirichlet eigenvalues in increasing order with multiplicity, as
/// `(λ, m, k)` with `m ≥ 1` modes listed twice.
pub fn disk_spectrum(count: usize) -> Vec<(f64, u32, u32)> {
    let mut v = Vec::new();
    for m in 0..8 {
        for k in 1..=4 {
            let j = bessel_zero(m, k);
            let reps = if m == 0 { 1 } else { 2 };
            for _ in 0..reps {
                v.push((j * j, m as u32, k as u32));
            }
        }
    }
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    v.truncate(count);
    v
}

/// Square Dirichlet eigenvalues `π²(p² + q²)` in increasing order, ties by `(p, q)`.
pub fn square_spectrum(count: usize) -> Vec<(f64, u32, u32)> {
    let pi2 = std::f64::consts::PI.powi(2);
    let mut v: Vec<(f64, u32, u32)> = (1..10)
        .flat_map(|p| (1..10).map(move |q| (pi2 * (p * p + q * q) as f64, p, q)))
        .collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    v.truncate(count);
    v
}

/// Five-point Laplacian of `u` at `(x, y)`.
pub fn fd_laplacian(u: impl Fn(f64, f64) -> f64, x: f64, y: f64, h: f64) -> f64 {
    (u(x + h, y) + u(x - h, y) + u(x, y + h) + u(x, y - h) - 4.0 * u(x, y)) / (h * h)
}

/// Central-difference gradient.
pub fn fd_grad(u: impl Fn(f64, f64) -> f64, x: f64, y: f64, h: f64) -> (f64, f64) {
    (
        (u(x + h, y) - u(x - h, y)) / (2.0 * h),
        (u(x, y + h) - u(x, y - h)) / (2.0 * h),
    )
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// `Y_n(x)` from its integral representation, for `x` bounded away from 0.
pub fn bessel_y(n: i32, x: f64) -> f64 {
    let nf = n as f64;
    let first = simpson(|t| (x * t.sin() - nf * t).sin(), 0.0, std::f64::consts::PI, 4000);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let tmax = (60.0 / x).asinh() + 1.0;
    let second = simpson(
        |t| ((nf * t).exp() + sign * (-nf * t).exp()) * (-x * t.sinh()).exp(),
        0.0,
        tmax,
        20000,
    );
    (first - second) / std::f64::consts::PI
}

/// First root of `J0(κa)Y0(κ) − J0(κ)Y0(κa)`, the annulus ground-state wavenumber.
pub fn annulus_wavenumber(a: f64) -> f64 {
    let f = |k: f64| bessel_j(0, k * a) * bessel_y(0, k) - bessel_j(0, k) * bessel_y(0, k * a);
    kth_zero(f, 1.0, 1)
}
