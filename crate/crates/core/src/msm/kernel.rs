//! Kernel splitting for the multilevel summation method.
//!
//! 1/r is split into a short-range part g* that vanishes beyond the cutoff
//! `a` and a telescoping stack of smoothed kernels, one per grid level, where
//! level k uses the doubled cutoff 2^k·a:
//!
//!   1/r = g* + g⁰ + g¹ + … + g^{l−1}
//!   g*(r)     = 1/r − (1/a)γ(r/a)
//!   g^k(r)    = (1/(2^k a))γ(r/(2^k a)) − (1/(2^{k+1} a))γ(r/(2^{k+1} a))
//!   g^{l−1}(r) = (1/(2^{l−1} a))γ(r/(2^{l−1} a))
//!
//! γ is the even Taylor smoothing of 1/ρ of degree 2m: exactly 1/ρ outside
//! the unit ball, a polynomial in ρ² inside, C^m at ρ = 1.

use alloc::vec::Vec;

use crate::error::Error;
use crate::Result;

use super::MsmParams;

/// Taylor smoothing of 1/ρ: Σ_{k=0}^{m} c_k (1−ρ²)^k for ρ < 1 with
/// c_0 = 1, c_k = c_{k−1}·(2k−1)/(2k); 1/ρ for ρ ≥ 1.
///
/// For m = 2 this is 15/8 − 5/4 ρ² + 3/8 ρ⁴.
pub fn gamma(rho: f64, m: u32) -> f64 {
    if rho >= 1.0 {
        return 1.0 / rho;
    }
    let t = 1.0 - rho * rho;
    // Horner in t with the double-factorial coefficients.
    let mut coeff = 1.0;
    let mut coeffs = Vec::with_capacity(m as usize + 1);
    coeffs.push(coeff);
    for k in 1..=m {
        coeff *= (2.0 * k as f64 - 1.0) / (2.0 * k as f64);
        coeffs.push(coeff);
    }
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

/// dγ/dρ: −2ρ Σ_{k=1}^{m} k c_k (1−ρ²)^{k−1} inside the ball, −1/ρ² outside.
pub fn gamma_prime(rho: f64, m: u32) -> f64 {
    if rho >= 1.0 {
        return -1.0 / (rho * rho);
    }
    let t = 1.0 - rho * rho;
    let mut coeff = 1.0;
    let mut acc = 0.0;
    let mut pow = 1.0;
    for k in 1..=m {
        coeff *= (2.0 * k as f64 - 1.0) / (2.0 * k as f64);
        acc += k as f64 * coeff * pow;
        pow *= t;
    }
    -2.0 * rho * acc
}

/// Smoothed kernel (1/a)γ(r/a); equals 1/r for r ≥ a.
#[inline]
pub fn g_smooth(r: f64, a: f64, m: u32) -> f64 {
    gamma(r / a, m) / a
}

/// d/dr of [`g_smooth`].
#[inline]
pub fn g_smooth_prime(r: f64, a: f64, m: u32) -> f64 {
    gamma_prime(r / a, m) / (a * a)
}

/// Short-range kernel g*(r) = 1/r − (1/a)γ(r/a); exactly zero for r ≥ a.
#[inline]
pub fn g_star(r: f64, a: f64, m: u32) -> f64 {
    if r >= a {
        0.0
    } else {
        1.0 / r - g_smooth(r, a, m)
    }
}

/// d/dr of g*.
#[inline]
pub fn g_star_prime(r: f64, a: f64, m: u32) -> f64 {
    if r >= a {
        0.0
    } else {
        -1.0 / (r * r) - g_smooth_prime(r, a, m)
    }
}

/// Level-k kernel g^k (0 ≤ k ≤ l−2); vanishes for r ≥ 2^{k+1}a.
#[inline]
pub fn g_level(r: f64, k: u32, a: f64, m: u32) -> f64 {
    let ak = (1u64 << k) as f64 * a;
    g_smooth(r, ak, m) - g_smooth(r, 2.0 * ak, m)
}

/// Top-level kernel g^{l−1}, the un-truncated smoothed remainder.
#[inline]
pub fn g_top(r: f64, levels: u32, a: f64, m: u32) -> f64 {
    let ak = (1u64 << (levels - 1)) as f64 * a;
    g_smooth(r, ak, m)
}

#[inline]
pub fn g_top_prime(r: f64, levels: u32, a: f64, m: u32) -> f64 {
    let ak = (1u64 << (levels - 1)) as f64 * a;
    g_smooth_prime(r, ak, m)
}

/// Evaluate the full split at distance `r`: (g*, [g⁰, …, g^{l−1}]).
/// The parts telescope to 1/r exactly.
pub fn kernel_split(r: f64, params: &MsmParams) -> Result<(f64, Vec<f64>)> {
    if !(r > 0.0) {
        return Err(Error::Singularity { i: 0, j: 0, r });
    }
    let l = params.levels;
    let mut levels = Vec::with_capacity(l as usize);
    for k in 0..l.saturating_sub(1) {
        levels.push(g_level(r, k, params.a, params.m));
    }
    levels.push(g_top(r, l, params.a, params.m));
    Ok((g_star(r, params.a, params.m), levels))
}
