//! Numerical eigendecomposition of the Airy integral operator
//!
//! The operator at the center of this crate is
//!
//! ```text
//! T_c[f](x) = ∫₀^∞ Ai(x + y + c) f(y) dy ,        f ∈ L²[0, ∞),
//! ```
//!
//! where `Ai` is the Airy function of the first kind and `c` is a real
//! parameter.  `T_c` is compact and self-adjoint; its eigenvalues λ_{0,c},
//! λ_{1,c}, … decay superexponentially, which makes a naive discretization
//! useless beyond the first handful of digits of the first handful of
//! eigenvalues.  This crate instead exploits the fact that `T_c` commutes
//! with the Sturm–Liouville operator
//!
//! ```text
//! L_c[f](x) = -(x f′(x))′ + x (x + c) f(x) ,
//! ```
//!
//! whose eigenfunctions are well conditioned.  The eigenfunctions ψ_{n,c}
//! are computed in a scaled Laguerre basis ([`eigfun`]), the eigenvalues
//! λ_{n,c} are recovered to full *relative* precision from a five-term
//! recurrence and quotients of derivative couplings ([`spectrum`]), and the
//! resulting spectral data feeds two applications:
//!
//! * soft-edge limiting distributions of the k-th largest level of the
//!   Gaussian ensembles (β = 1, 2, 4) including their far tails
//!   ([`distributions`]),
//! * finite-energy Airy beams and their paraxial propagation ([`beams`]).
//!
//! Layering (each module only depends on the ones above it):
//!
//! ```text
//! specfun  →  banded  →  eigfun  →  spectrum  →  distributions
//!                                           ↘  beams
//! ```
//!
//! The `airyop` binary (see [`cli`]) exposes the whole pipeline as
//! subcommands emitting CSV or JSON.

pub mod banded;
pub mod beams;
pub mod cli;
pub mod distributions;
pub mod eigfun;
mod error;
pub mod specfun;
pub mod spectrum;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
