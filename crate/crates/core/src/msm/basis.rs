//! Nodal basis for grid transfers: the cubic cardinal interpolant.
//!
//! The master basis Φ has support (−2, 2), is 1 at 0 and 0 at every other
//! integer, and partitions unity: Σ_j Φ(ξ − j) = 1. Each grid's nodal basis
//! is the tensor product of Φ scaled by the grid spacing.

use crate::error::Error;
use crate::Result;

/// Master basis function for degree p = 3.
#[inline]
pub fn phi3(xi: f64) -> f64 {
    let t = xi.abs();
    if t <= 1.0 {
        (1.0 - t) * (1.0 + t - 1.5 * t * t)
    } else if t <= 2.0 {
        -0.5 * (t - 1.0) * (2.0 - t) * (2.0 - t)
    } else {
        0.0
    }
}

/// dΦ/dξ for p = 3; continuous (Φ is C¹).
#[inline]
pub fn phi3_prime(xi: f64) -> f64 {
    let t = xi.abs();
    let sign = if xi < 0.0 { -1.0 } else { 1.0 };
    if t <= 1.0 {
        sign * t * (4.5 * t - 5.0)
    } else if t <= 2.0 {
        sign * -0.5 * (2.0 - t) * (4.0 - 3.0 * t)
    } else {
        0.0
    }
}

/// Basis function of degree `p`. Only the cubic interpolant is supported.
pub fn phi(xi: f64, p: u32) -> Result<f64> {
    if p != 3 {
        return Err(Error::invalid("only the cubic basis (p = 3) is supported"));
    }
    Ok(phi3(xi))
}

pub fn phi_prime(xi: f64, p: u32) -> Result<f64> {
    if p != 3 {
        return Err(Error::invalid("only the cubic basis (p = 3) is supported"));
    }
    Ok(phi3_prime(xi))
}

/// Stencil of the four nodes supporting a point at grid coordinate `u`
/// (u = (x − origin)/spacing): returns the base node index floor(u) − 1 and
/// the weights Φ(u − j) for j = base..base+3.
#[inline]
pub fn weights4(u: f64) -> (i64, [f64; 4]) {
    let fl = libm::floor(u);
    let base = fl as i64 - 1;
    let t = u - fl;
    (
        base,
        [phi3(t + 1.0), phi3(t), phi3(t - 1.0), phi3(t - 2.0)],
    )
}

/// As [`weights4`] but also the dΦ/du values.
#[inline]
pub fn weights4_with_derivs(u: f64) -> (i64, [f64; 4], [f64; 4]) {
    let fl = libm::floor(u);
    let base = fl as i64 - 1;
    let t = u - fl;
    (
        base,
        [phi3(t + 1.0), phi3(t), phi3(t - 1.0), phi3(t - 2.0)],
        [
            phi3_prime(t + 1.0),
            phi3_prime(t),
            phi3_prime(t - 1.0),
            phi3_prime(t - 2.0),
        ],
    )
}
