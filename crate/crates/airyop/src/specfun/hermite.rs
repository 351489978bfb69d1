//! Scaled Hermite functions
//!
//! ```text
//! φ_n^a(x) = √a / (π^{1/4} 2^{n/2} √(n!)) · e^{-(ax)²/2} H_n(ax)
//! ```
//!
//! with H_n the physicists' Hermite polynomials (H_0 = 1, H_1 = 2x,
//! H_{n+1} = 2x H_n - 2n H_{n-1}).  The φ_n^a are an orthonormal family on
//! the whole real line and satisfy -φ″ + a⁴x²φ = a²(2n+1)φ; they appear
//! here only as the strong-coupling limit of the operator eigenfunctions,
//! so a single-point evaluator is all that is needed.
//!
//! The normalized recurrence ĥ_n = H_n / √(2ⁿ n!) is used directly:
//!
//! ```text
//! ĥ_{n+1} = z √(2/(n+1)) ĥ_n - √(n/(n+1)) ĥ_{n-1},   z = ax,
//! ```
//!
//! which keeps intermediate magnitudes near the size of the final Gaussian-
//! weighted value instead of 2^{n/2}√(n!) above it.

use crate::{Error, Result};
use super::apply_log_scale;

const PI_POW_NEG_QUARTER: f64 = 0.751_125_544_464_942_9; // π^{-1/4}

/// φ_n^a(x).
pub fn hermite_phi(n: usize, a: f64, x: f64) -> Result<f64> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "hermite_phi: scale a = {a} must be finite and positive"
        )));
    }
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!("hermite_phi: x = {x}")));
    }
    if n > 100_000 {
        return Err(Error::InvalidArgument(format!(
            "hermite_phi: degree n = {n} unreasonably large"
        )));
    }
    let z = a * x;

    // ĥ recurrence with overflow guard: for |z| large the polynomial part
    // can climb to e^{z²/2} before the Gaussian pulls it back; shift in
    // chunks of e^{500} and settle the account at the end.
    let mut log_shift = 0.0f64;
    let mut prev = 0.0; // ĥ_{n-1}
    let mut cur = 1.0; // ĥ_0
    for k in 0..n {
        let kf = k as f64;
        let next = z * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > 1e250 || prev.abs() > 1e250 {
            let down = (-500.0f64).exp();
            cur *= down;
            prev *= down;
            log_shift += 500.0;
        }
    }
    let amplitude = a.sqrt() * PI_POW_NEG_QUARTER * cur;
    Ok(apply_log_scale(amplitude, log_shift - 0.5 * z * z))
}
