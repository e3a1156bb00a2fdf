//! Independent oracles shared by the integration tests. None of them call
//! into the adaptive quadrature or the closed forms under test.
#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel(x: f64, y: f64) -> f64 {
    ((x - y) / y).abs()
}

/// `∫₀^hi f` by composite Simpson in `u = −ln(ξ/hi)` on `[0, 60]` with
/// `2^18` panels.
pub fn simpson_from_zero<F: Fn(f64) -> f64>(f: F, hi: f64) -> f64 {
    const N: usize = 1 << 18;
    const U_MAX: f64 = 60.0;
    let h = U_MAX / N as f64;
    let g = |u: f64| {
        let x = hi * (-u).exp();
        f(x) * x
    };
    let mut sum = g(0.0) + g(U_MAX);
    for k in 1..N {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * g(k as f64 * h);
    }
    sum * h / 3.0
}

/// `∫_lo^hi f` by composite Simpson with `2^16` panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    const N: usize = 1 << 16;
    let h = (hi - lo) / N as f64;
    let mut sum = f(lo) + f(hi);
    for k in 1..N {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(lo + k as f64 * h);
    }
    sum * h / 3.0
}

/// The ansatz `(1 − a ln ξ) ξ^{1+b}` on `(0, 1]`, written out directly.
pub fn ansatz_h(alpha: f64, b: f64, xi: f64) -> f64 {
    let a = (4.0 + b) * (alpha + b) / (4.0 - alpha);
    if xi <= 0.0 {
        0.0
    } else if xi <= 1.0 {
        (1.0 - a * xi.ln()) * xi.powf(1.0 + b)
    } else {
        xi.powf(1.0 - alpha)
    }
}

/// `W₂(ξ)` of the ansatz from Simpson sums.
pub fn ansatz_w2(alpha: f64, b: f64, xi: f64) -> f64 {
    let mass = simpson_from_zero(|z| z * z * ansatz_h(alpha, b, z), xi);
    xi * ansatz_h(alpha, b, xi) - (4.0 - alpha) * mass / (xi * xi)
}

/// Largest eigenvalue of the symmetric matrix `[[p, q], [q, s]]` by one
/// Jacobi rotation.
pub fn jacobi_lambda_max(p: f64, q: f64, s: f64) -> f64 {
    if q == 0.0 {
        return p.max(s);
    }
    let theta = 0.5 * (2.0 * q).atan2(p - s);
    let (c, sn) = (theta.cos(), theta.sin());
    let l1 = c * c * p + 2.0 * c * sn * q + sn * sn * s;
    let l2 = sn * sn * p - 2.0 * c * sn * q + c * c * s;
    l1.max(l2)
}

/// Optimal growth rate of the `b = 0` ansatz by direct evaluation.
pub fn c_b0(alpha: f64) -> f64 {
    (2.0 * alpha / (4.0 - alpha)).powi(2)
}

/// The grid `{0.2, 0.4, …, 1.8}`.
pub fn alpha_grid() -> Vec<f64> {
    (1..=9).map(|k| 0.2 * k as f64).collect()
}
