//! Gauss–Legendre quadrature rules.
//!
//! Nodes are the roots of the Legendre polynomial P_n, found by Newton
//! iteration from the Chebyshev-like initial guesses cos(π(i+3/4)/(n+1/2));
//! weights are 2/((1-x²)P_n′(x)²).  Only half the nodes are computed, the
//! rest follow by symmetry, which also makes the rule exactly symmetric in
//! floating point.

use std::sync::OnceLock;

use crate::{Error, Result};

/// A quadrature rule on the reference interval [-1, 1].
///
/// `nodes` are strictly increasing and symmetric about 0; `weights` are
/// positive and sum to 2 (the measure of the reference interval).
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Integrate `f` over [a, b] by mapping the reference rule affinely.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

/// Integrate `f` over [lo, hi] with 24-node Gauss–Legendre panels no wider
/// than `max_width`.
///
/// A 24-node panel resolves anything whose local oscillation period is a
/// few times the panel width to roundoff, so pick `max_width` comfortably
/// below the shortest period of the integrand.  Returns 0 for an empty or
/// inverted interval.
pub fn integrate_panels<F: FnMut(f64) -> f64>(lo: f64, hi: f64, max_width: f64, mut f: F) -> f64 {
    assert!(max_width > 0.0, "integrate_panels: max_width = {max_width}");
    if !(hi > lo) {
        return 0.0;
    }
    static RULE24: OnceLock<QuadratureRule> = OnceLock::new();
    let rule = RULE24.get_or_init(|| gauss_legendre(24).expect("24 is in range"));
    let count = ((hi - lo) / max_width).ceil().max(1.0) as usize;
    let width = (hi - lo) / count as f64;
    let mut acc = 0.0;
    for i in 0..count {
        let a = lo + i as f64 * width;
        let b = if i + 1 == count { hi } else { a + width };
        acc += rule.integrate(a, b, &mut f);
    }
    acc
}

/// The n-point Gauss–Legendre rule, exact for polynomials of degree 2n-1.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if !(1..=500).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "gauss_legendre: n = {n} outside supported range 1..=500"
        )));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;

    for i in 0..n.div_ceil(2) {
        // Initial guess for the i-th root counted from +1 downwards.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // P_n(x) and P_{n-1}(x) by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Root i (from the right) and its mirror.
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        // The middle node of an odd rule is exactly 0.
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights })
}
