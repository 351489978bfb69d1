//! Special functions: Airy Ai/Ai′, scaled Laguerre and Hermite families,
//! and Gauss–Legendre quadrature.
//!
//! Everything downstream (operator assembly, eigenvalue recovery, beam
//! synthesis) reduces to these four primitives, so their accuracy contracts
//! are the tightest in the crate; see the submodule docs for the specific
//! algorithms and error bounds.

mod airy;
mod hermite;
mod laguerre;
mod quad;

pub use airy::{airy_ai, airy_ai_both, airy_ai_prime};
pub use hermite::hermite_phi;
pub use laguerre::laguerre_h_all;
pub(crate) use laguerre::weighted_h_sum;
pub use quad::{gauss_legendre, integrate_panels, QuadratureRule};

/// m · e^{log_scale}, evaluated in exponent chunks so that the scale factor
/// alone never over/underflows while the true product is representable.
pub(crate) fn apply_log_scale(mut m: f64, mut log_scale: f64) -> f64 {
    if m == 0.0 {
        return 0.0;
    }
    while log_scale < -700.0 {
        m *= (-700.0f64).exp();
        log_scale += 700.0;
        if m == 0.0 {
            return 0.0;
        }
    }
    while log_scale > 700.0 {
        m *= 700.0f64.exp();
        log_scale -= 700.0;
        if m.is_infinite() {
            return m;
        }
    }
    m * log_scale.exp()
}
