//! Integral-operator eigenvalues λ_j to full relative precision.
//!
//! The eigenvalues of T_c decay super-exponentially, so any scheme that
//! extracts them as differences of O(1) quantities — dense discretization,
//! determinant expansions, sampling of T_c ψ on a grid — is capped at the
//! absolute accuracy of f64 and loses every λ_j below ~1e-16.  This module
//! instead reaches each λ_j through quotients of well-scaled quantities,
//! keeping the *relative* error near machine precision down to (and past)
//! the underflow threshold:
//!
//! 1. The kernel moments H_k = ∫_0^∞ Ai(x + y + c) h_k^a(y) dy satisfy a
//!    five-term recurrence in k (inherited from the Airy equation and the
//!    Laguerre ladder).  Truncated, the recurrence is an almost singular
//!    banded matrix whose null vector — rescaled by a direct quadrature of
//!    H_0 — yields every moment at once to relative accuracy
//!    ([`assemble_b`], [`h0_integral`], [`compute_h`]).
//! 2. The eigenrelation T_c ψ_0 = λ_0 ψ_0, evaluated at a single point x
//!    where ψ_0 is past its oscillations ([`eval_point`]), gives
//!    λ_0 = Σ_k β_k^{(0)} H_k / ψ_0(x) as one clean quotient
//!    ([`lambda_0`]).
//! 3. Consecutive quotients come from derivative couplings,
//!    λ_{j+1}/λ_j = ∫ψ_j′ ψ_{j+1} / ∫ψ_j ψ_{j+1}′, and both integrals are
//!    plain coefficient sums in the orthonormal basis
//!    ([`eigenvalue_ratios`]).
//! 4. Cumulative products of the quotients, carried as sign plus log
//!    magnitude, recover the whole sequence even where its values
//!    underflow f64 ([`fill_lambda`], [`full_spectrum`]).
//!
//! Two exact order properties — |λ_0| < 1 and |λ_{j+1}| ≤ |λ_j| — can be
//! violated by a computed quotient only when the true gap is below the
//! quotient's own roundoff, which happens for strongly negative c where
//! consecutive eigenvalues agree to near machine precision.  Rather than
//! fail there, the products saturate such a magnitude at (1 − ε) times the
//! bound; the affected λ_j are still correct to the working absolute
//! accuracy, they merely carry no relative information about the gap.
//!
//! The parameter derivatives ∂λ_j/∂c = −½ λ_j ψ_j(0)² and
//! ∂(λ_j²)/∂c = −λ_j² ψ_j(0)² ([`dlambda_dc`], [`dlambda2_dc`]) close the
//! module; they are what the distribution densities differentiate through.

use crate::banded::{inverse_power_null, FiveDiagonal};
use crate::eigfun::{check_params, diff_expansion, eval_psi, AirySpectrum, OperatorParams};
use crate::specfun::{airy_ai, apply_log_scale, integrate_panels};
use crate::{Error, Result};

/// Evaluation point x for the eigenrelation quotient: 0 for c ≥ 0, −c
/// otherwise.
///
/// ψ_0 oscillates on the classically allowed interval of the commuting
/// differential operator, which for negative c stretches towards −c; both
/// the numerator and the denominator of the quotient behind [`lambda_0`]
/// are evaluated at a point beyond that interval, where ψ_0 is single-sign
/// and the quotient loses no digits to oscillation.
pub fn eval_point(c: f64) -> f64 {
    if c >= 0.0 {
        0.0
    } else {
        -c
    }
}

/// Truncated five-term recurrence for the kernel moments, as an
/// (N′+1)×(N′+1) general five-diagonal matrix acting on (H_0 … H_{N′}).
///
/// With s = x + c, row k ≥ 1 holds, at columns k−2 … k+2,
///
/// ```text
/// k−1,   −(4k − 1 + a s − a³/4),   6k + 3 + 2 a s + a³/2,
///        −(4k + 5 + a s − a³/4),   k+2,
/// ```
///
/// clipped to the matrix for k < 2.  Row 0 would express H_0 in terms of
/// later moments with an unbounded coefficient, so it is replaced by a
/// single diagonal entry equal to the smallest positive normal number:
/// that makes the matrix formally nonsingular while steering the
/// inverse-power solve in [`compute_h`] towards the recurrence's decaying
/// (minimal) solution, which is the moment sequence.
pub fn assemble_b(params: &OperatorParams, x: f64) -> Result<FiveDiagonal> {
    check_params(params)?;
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "assemble_b: evaluation point x = {x} must be finite and ≥ 0"
        )));
    }
    let a = params.a;
    let s = x + params.c;
    let q = a * s - 0.25 * a * a * a;
    let dim = params.n_rec + 1;

    let mut diag = vec![0.0; dim];
    let mut sub1 = vec![0.0; dim - 1];
    let mut sub2 = vec![0.0; dim - 2];
    let mut sup1 = vec![0.0; dim - 1];
    let mut sup2 = vec![0.0; dim - 2];

    diag[0] = f64::MIN_POSITIVE;
    for k in 1..dim {
        diag[k] = (6 * k + 3) as f64 + 2.0 * a * s + 0.5 * a * a * a;
    }
    for i in 0..dim - 1 {
        // Row i+1, column i.
        sub1[i] = -((4 * (i + 1) - 1) as f64 + q);
        // Row i, column i+1; row 0 stays clear.
        if i >= 1 {
            sup1[i] = -((4 * i + 5) as f64 + q);
        }
    }
    for i in 0..dim - 2 {
        // Row i+2, column i.
        sub2[i] = (i + 1) as f64;
        // Row i, column i+2; row 0 stays clear.
        if i >= 1 {
            sup2[i] = (i + 2) as f64;
        }
    }
    FiveDiagonal::general(sub2, sub1, diag, sup1, sup2)
}

/// The zeroth kernel moment H_0 = √a ∫_0^∞ Ai(y + s) e^{−a y/2} dy by
/// direct quadrature, to full relative accuracy.
///
/// Gauss–Legendre panels sized for the faster of the two decay/oscillation
/// scales (a from the weight, √|s| from the Airy factor); panels are added
/// until two in a row contribute below 1e-17 of the running total, which
/// the super-exponential Airy decay guarantees after O(10) units of y.
/// For s ≳ 105 the integral is below the smallest positive f64 and the
/// result is an exact 0.
pub fn h0_integral(a: f64, s: f64) -> Result<f64> {
    if !(a > 0.0 && a <= 1e6) || !s.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "h0_integral: a = {a}, s = {s} outside the supported domain"
        )));
    }
    let width = (16.0 / (a + s.abs().sqrt() + 1.0)).min(1.0);
    let mut total = 0.0;
    let mut scale = 0.0f64;
    let mut quiet_panels = 0;
    let mut failure = None;
    for j in 0..400 {
        let lo = j as f64 * width;
        let panel = integrate_panels(lo, lo + width, width, |y| {
            if failure.is_some() {
                return 0.0;
            }
            let t = y + s;
            if t > 200.0 {
                // Ai underflows near t = 105; skip instead of tripping the
                // evaluator's domain limit.
                return 0.0;
            }
            match airy_ai(t) {
                Ok(v) => v * (-0.5 * a * y).exp(),
                Err(err) => {
                    failure = Some(err);
                    0.0
                }
            }
        });
        if let Some(err) = failure {
            return Err(err);
        }
        total += panel;
        scale = scale.max(panel.abs());
        if panel.abs() <= 1e-17 * scale {
            quiet_panels += 1;
            if quiet_panels >= 2 {
                break;
            }
        } else {
            quiet_panels = 0;
        }
    }
    Ok(a.sqrt() * total)
}

/// Kernel moments H_0 … H_N at the evaluation point of `params.c`, to
/// relative accuracy.
///
/// The null vector of the truncated recurrence ([`assemble_b`]) fixes the
/// moments up to one overall factor, which the direct quadrature of H_0
/// ([`h0_integral`]) then pins down.  Only the first N+1 of the N′+1
/// computed coordinates are returned: the trailing ones absorb the
/// truncation of the recurrence and are not trustworthy.
///
/// Fails if the recurrence has no clean near-null direction, if the
/// leading coordinate of the null vector vanishes, or if H_0 itself
/// underflows f64 (c ≳ 105, where no eigenvalue magnitude is representable
/// anyway).
pub fn compute_h(params: &OperatorParams) -> Result<Vec<f64>> {
    check_params(params)?;
    let x = eval_point(params.c);
    let b = assemble_b(params, x)?;
    let v = inverse_power_null(&b, 1e-12)?;
    let h0 = h0_integral(params.a, x + params.c)?;
    if h0 == 0.0 {
        return Err(Error::Numerical(format!(
            "compute_h: H_0 underflows f64 at c = {}; the eigenvalue scale is not \
             representable",
            params.c
        )));
    }
    let lead = v[0];
    if lead == 0.0 || !lead.is_finite() {
        return Err(Error::Numerical(
            "compute_h: recurrence null vector has a vanishing leading coordinate".into(),
        ));
    }
    let scale = h0 / lead;
    Ok(v.iter().take(params.n_trunc + 1).map(|&t| t * scale).collect())
}

/// λ_0 from the eigenrelation T_c ψ_0 = λ_0 ψ_0 at the evaluation point:
/// λ_0 = (Σ_k β_k^{(0)} H_k) / ψ_0(x).
///
/// Numerator and denominator are each well scaled — the H_k are relative-
/// accurate moments, ψ_0(x) is evaluated past its oscillatory interval —
/// so the quotient carries λ_0's full relative precision even when λ_0 is
/// far below 1.  Fails if ψ_0(x) underflows f64 (c ≲ −115, where the
/// boundary values leave the representable range).
pub fn lambda_0(spec: &AirySpectrum) -> Result<f64> {
    let h = compute_h(&spec.params)?;
    lambda0_from(spec, &h)
}

fn lambda0_from(spec: &AirySpectrum, h: &[f64]) -> Result<f64> {
    let e = spec.expansions.first().ok_or_else(|| {
        Error::InvalidArgument("lambda_0: spectrum holds no eigenfunctions".into())
    })?;
    let x = eval_point(spec.params.c);
    let num: f64 = e.coeffs.iter().zip(h).map(|(&b, &hk)| b * hk).sum();
    let den = eval_psi(e, x)?;
    if den == 0.0 {
        return Err(Error::Numerical(format!(
            "lambda_0: ψ_0({x}) underflows f64 at c = {}; the eigenrelation quotient \
             is not representable",
            spec.params.c
        )));
    }
    Ok(num / den)
}

/// Quotients λ_{j+1}/λ_j for j = 0 … n−1 from derivative couplings.
///
/// Integration by parts against the kernel turns the quotient of
/// eigenvalues into a quotient of L² couplings,
///
/// ```text
/// λ_{j+1}/λ_j = ∫_0^∞ ψ_j′ ψ_{j+1} dx / ∫_0^∞ ψ_j ψ_{j+1}′ dx ,
/// ```
///
/// and in the orthonormal basis each integral is a dot product of the
/// partner's coefficients with the [`diff_expansion`] of the
/// differentiated factor — no quadrature, no cancellation beyond the dot
/// products themselves.  Fails only if a denominator coupling evaluates to
/// exactly zero, which does not occur for cleanly resolved consecutive
/// eigenfunctions.
pub fn eigenvalue_ratios(spec: &AirySpectrum) -> Result<Vec<f64>> {
    let n = spec.params.n;
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return Ok(out);
    }
    let mut d_cur = diff_expansion(&spec.expansions[0]);
    for j in 0..n {
        let cur = &spec.expansions[j];
        let next = &spec.expansions[j + 1];
        let d_next = diff_expansion(next);
        let num = dot(&d_cur, &next.coeffs);
        let den = dot(&cur.coeffs, &d_next);
        let ratio = num / den;
        if den == 0.0 || !ratio.is_finite() {
            return Err(Error::Numerical(format!(
                "eigenvalue_ratios: the coupling ∫ψ_{j} ψ_{}′ vanished; the quotient \
                 λ_{}/λ_{j} is indeterminate at this truncation",
                j + 1,
                j + 1
            )));
        }
        out.push(ratio);
        d_cur = d_next;
    }
    Ok(out)
}

fn dot(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(&x, &y)| x * y).sum()
}

/// Fill the integral-operator eigenvalues of an [`AirySpectrum`] in place.
///
/// Runs steps 1–4 of the module scheme: moments, λ_0, quotients, then
/// cumulative products in sign + log-magnitude form.  `lambda[j]` is the
/// plain-f64 value (an exact 0.0 once the magnitude underflows);
/// `lambda_sign[j]` and `lambda_log[j]` stay meaningful throughout.
/// Magnitudes that roundoff pushes to or past their exact bounds
/// (|λ_0| < 1, |λ_{j+1}| ≤ |λ_j|) are saturated at (1 − ε) times the
/// bound; see the module docs.
pub fn fill_lambda(spec: &mut AirySpectrum) -> Result<()> {
    let h = compute_h(&spec.params)?;
    let lam0 = lambda0_from(spec, &h)?;
    if lam0 == 0.0 || !lam0.is_finite() {
        return Err(Error::Numerical(format!(
            "fill_lambda: λ_0 evaluated to {lam0} at c = {}; the eigenvalue scale is \
             outside the representable range",
            spec.params.c
        )));
    }
    let ratios = eigenvalue_ratios(spec)?;

    let cap = 1.0 - f64::EPSILON;
    let mut mag = lam0.abs();
    if mag >= 1.0 {
        mag = cap;
    }
    let sign0 = lam0.signum();
    let mut sign = sign0;
    let mut log_mag = mag.ln();
    let mut lambda = vec![sign0 * mag];
    let mut signs = vec![sign0];
    let mut logs = vec![log_mag];
    for (j, &r) in ratios.iter().enumerate() {
        if r == 0.0 {
            return Err(Error::Numerical(format!(
                "fill_lambda: quotient λ_{}/λ_{j} computed as exactly zero",
                j + 1
            )));
        }
        let mut rm = r.abs();
        if rm >= 1.0 {
            rm = cap;
        }
        sign *= r.signum();
        log_mag += rm.ln();
        signs.push(sign);
        logs.push(log_mag);
        lambda.push(apply_log_scale(sign, log_mag));
    }
    spec.lambda = lambda;
    spec.lambda_sign = signs;
    spec.lambda_log = logs;
    Ok(())
}

/// Eigenfunctions and eigenvalues of both commuting operators at one c:
/// [`crate::eigfun::compute_eigenfunctions`] followed by [`fill_lambda`].
pub fn full_spectrum(c: f64, n: usize) -> Result<AirySpectrum> {
    let mut spec = crate::eigfun::compute_eigenfunctions(c, n)?;
    fill_lambda(&mut spec)?;
    Ok(spec)
}

/// ∂λ_j/∂c = −½ λ_j ψ_j(0)².
///
/// Exact consequence of differentiating the eigenrelation in c; evaluated
/// from quantities the spectrum already holds, so it shares their relative
/// accuracy.  Underflows to 0 exactly where λ_j does.
pub fn dlambda_dc(spec: &AirySpectrum, j: usize) -> Result<f64> {
    let lam = filled_lambda(spec, j)?;
    Ok(-0.5 * lam * spec.psi0[j] * spec.psi0[j])
}

/// ∂(λ_j²)/∂c = −λ_j² ψ_j(0)², the squared-eigenvalue form of
/// [`dlambda_dc`] used by the β = 2 distribution densities.
pub fn dlambda2_dc(spec: &AirySpectrum, j: usize) -> Result<f64> {
    let lam = filled_lambda(spec, j)?;
    Ok(-(lam * lam) * spec.psi0[j] * spec.psi0[j])
}

fn filled_lambda(spec: &AirySpectrum, j: usize) -> Result<f64> {
    if j >= spec.expansions.len() {
        return Err(Error::InvalidArgument(format!(
            "eigenvalue index {j} out of range (have {})",
            spec.expansions.len()
        )));
    }
    if spec.lambda.len() != spec.expansions.len() {
        return Err(Error::InvalidArgument(
            "integral-operator eigenvalues not filled in; call full_spectrum or \
             fill_lambda first"
                .into(),
        ));
    }
    Ok(spec.lambda[j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigfun::{
        compute_eigenfunctions, eval_psi, expansion_support, integrate_with_expansion,
        psi_continuation, select_basis, LaguerreExpansion,
    };
    use crate::specfun::gauss_legendre;
    use proptest::prelude::*;

    /// Plain adaptive Simpson on [a, b]; independent of the crate's panel
    /// quadrature, used as the oracle for the moment integrals.
    fn adaptive_simpson(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        fn recurse(
            f: &mut dyn FnMut(f64) -> f64,
            a: f64,
            m: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            let delta = left + right - whole;
            if depth == 0 || delta.abs() <= 15.0 * tol {
                left + right + delta / 15.0
            } else {
                // Same tol on both halves: errors accumulate only across
                // the O(log) active branches, fine for an oracle.
                recurse(f, a, lm, m, fa, flm, fm, left, tol, depth - 1)
                    + recurse(f, m, rm, b, fm, frm, fb, right, tol, depth - 1)
            }
        }
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (f(a), f(m), f(b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        recurse(f, a, m, b, fa, fm, fb, whole, tol, 40)
    }

    /// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations
    /// (eigenvalues only; no vectors are accumulated).
    ///
    /// The Nyström kernel matrix below is numerically low-rank with
    /// entries spanning ~200 orders of magnitude; tridiagonalize-then-QL
    /// eigensolvers return NaN on it, while Jacobi just grinds the
    /// off-diagonal mass to zero sweep by sweep regardless of grading.
    fn jacobi_eigenvalues(a: &mut [Vec<f64>]) -> Vec<f64> {
        let n = a.len();
        let mut d: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
        let mut b = d.clone();
        let mut z = vec![0.0; n];
        // Update the pair (i1,j1), (i2,j2) under the rotation (s, tau).
        fn rot(a: &mut [Vec<f64>], i1: usize, j1: usize, i2: usize, j2: usize, s: f64, tau: f64) {
            let g = a[i1][j1];
            let h = a[i2][j2];
            a[i1][j1] = g - s * (h + g * tau);
            a[i2][j2] = h + s * (g - h * tau);
        }
        let mut sm_first = 0.0;
        for sweep in 1..=60 {
            let sm: f64 = (0..n - 1)
                .map(|p| ((p + 1)..n).map(|q| a[p][q].abs()).sum::<f64>())
                .sum();
            if sweep == 1 {
                sm_first = sm;
            }
            // Weyl: the remaining off-diagonal mass bounds the diagonal's
            // distance to the true eigenvalues.  The graded tail never
            // reaches exactly zero, so stop at a negligible fraction of
            // the initial mass.
            if sm <= 1e-18 * sm_first {
                d.sort_by(|p, q| q.abs().total_cmp(&p.abs()));
                return d;
            }
            let thresh = if sweep < 4 {
                0.2 * sm / (n * n) as f64
            } else {
                0.0
            };
            for p in 0..n - 1 {
                for q in (p + 1)..n {
                    let g = 100.0 * a[p][q].abs();
                    // After a few sweeps, rotations too small to change the
                    // diagonal are dropped outright.
                    if sweep > 4 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                        a[p][q] = 0.0;
                    } else if a[p][q].abs() > thresh {
                        let h = d[q] - d[p];
                        let t = if h.abs() + g == h.abs() {
                            a[p][q] / h
                        } else {
                            let theta = 0.5 * h / a[p][q];
                            let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                            if theta < 0.0 {
                                -t
                            } else {
                                t
                            }
                        };
                        let c = 1.0 / (1.0 + t * t).sqrt();
                        let s = t * c;
                        let tau = s / (1.0 + c);
                        let h = t * a[p][q];
                        z[p] -= h;
                        z[q] += h;
                        d[p] -= h;
                        d[q] += h;
                        a[p][q] = 0.0;
                        for j in 0..p {
                            rot(a, j, p, j, q, s, tau);
                        }
                        for j in (p + 1)..q {
                            rot(a, p, j, j, q, s, tau);
                        }
                        for j in (q + 1)..n {
                            rot(a, p, j, q, j, s, tau);
                        }
                    }
                }
            }
            for i in 0..n {
                b[i] += z[i];
                d[i] = b[i];
                z[i] = 0.0;
            }
        }
        panic!("jacobi_eigenvalues: no convergence in 60 sweeps");
    }

    /// Signed eigenvalues of T_c by dense discretization: Gauss–Legendre
    /// nodes on [0, x_max], kernel symmetrized with √(w_i w_j), Jacobi
    /// eigensolve.  Absolute accuracy ~1e-12; everything below that, and
    /// every digit beyond it, is exactly what the recurrence path under
    /// test exists to provide.
    fn nystrom_eigenvalues(c: f64, count: usize, nodes: usize) -> Vec<f64> {
        let x_max = 40.0 + (-c).max(0.0);
        let rule = gauss_legendre(nodes).unwrap();
        let half = 0.5 * x_max;
        let xs: Vec<f64> = rule.nodes.iter().map(|&t| half * (t + 1.0)).collect();
        let sw: Vec<f64> = rule.weights.iter().map(|&w| (half * w).sqrt()).collect();
        let mut m: Vec<Vec<f64>> = (0..nodes)
            .map(|i| {
                (0..nodes)
                    .map(|j| sw[i] * sw[j] * airy_ai(xs[i] + xs[j] + c).unwrap())
                    .collect()
            })
            .collect();
        let mut lams = jacobi_eigenvalues(&mut m);
        lams.truncate(count);
        lams
    }

    fn unit_expansion(a: f64, k: usize, len: usize) -> LaguerreExpansion {
        let mut coeffs = vec![0.0; len];
        coeffs[k] = 1.0;
        LaguerreExpansion { a, coeffs }
    }

    /// ψ′(0) = √a Σ_k d_k.
    fn psi_prime0(e: &LaguerreExpansion) -> f64 {
        e.a.sqrt() * diff_expansion(e).iter().sum::<f64>()
    }

    /// Coefficients of x·ψ in the same basis, from the three-term
    /// multiplication rule x h_k = ((2k+1) h_k − k h_{k−1} − (k+1) h_{k+1})/a.
    fn x_expansion(e: &LaguerreExpansion) -> Vec<f64> {
        let b = &e.coeffs;
        let n = b.len();
        (0..n)
            .map(|k| {
                let prev = if k > 0 { b[k - 1] } else { 0.0 };
                let next = if k + 1 < n { b[k + 1] } else { 0.0 };
                ((2 * k + 1) as f64 * b[k] - (k + 1) as f64 * next - k as f64 * prev) / e.a
            })
            .collect()
    }

    /// ∂A/∂c of the differential-operator matrix at fixed basis scale:
    /// symmetric tridiagonal with diagonal (2k+1)/a and first off-diagonal
    /// −(k+1)/a.
    fn da_dc(params: &OperatorParams) -> FiveDiagonal {
        let dim = params.n_trunc + 1;
        let a = params.a;
        let diag: Vec<f64> = (0..dim).map(|k| (2 * k + 1) as f64 / a).collect();
        let off1: Vec<f64> = (0..dim - 1).map(|k| -((k + 1) as f64) / a).collect();
        let off2 = vec![0.0; dim - 2];
        FiveDiagonal::symmetric(diag, off1, off2).unwrap()
    }

    #[test]
    fn evaluation_point_avoids_the_oscillatory_region() {
        assert_eq!(eval_point(3.0), 0.0);
        assert_eq!(eval_point(0.0), 0.0);
        assert_eq!(eval_point(-7.0), 7.0);
    }

    #[test]
    fn recurrence_matrix_entries_match_closed_forms() {
        let params = OperatorParams {
            c: 1.3,
            n: 2,
            a: 2.5,
            n_trunc: 8,
            n_rec: 10,
        };
        let x = eval_point(params.c);
        let b = assemble_b(&params, x).unwrap();
        assert_eq!(b.dim(), 11);
        assert!(!b.is_symmetric());

        let a = params.a;
        let s = x + params.c;
        let q = a * s - 0.25 * a * a * a;
        // Row 0 carries only the tiny pivot.
        assert_eq!(b.get(0, 0), f64::MIN_POSITIVE);
        assert_eq!(b.get(0, 1), 0.0);
        assert_eq!(b.get(0, 2), 0.0);
        // Rows k ≥ 1 are the generic five-term recurrence row.
        for k in [1usize, 2, 3, 7] {
            if k >= 2 {
                assert_eq!(b.get(k, k - 2), (k - 1) as f64, "row {k}");
            }
            assert_eq!(b.get(k, k - 1), -((4 * k - 1) as f64 + q), "row {k}");
            assert_eq!(
                b.get(k, k),
                (6 * k + 3) as f64 + 2.0 * a * s + 0.5 * a * a * a,
                "row {k}"
            );
            assert_eq!(b.get(k, k + 1), -((4 * k + 5) as f64 + q), "row {k}");
            assert_eq!(b.get(k, k + 2), (k + 2) as f64, "row {k}");
        }
    }

    #[test]
    fn boundary_moment_matches_adaptive_quadrature() {
        for (a, s) in [(2.0, 0.0), (2.0, 5.0), (0.37, 0.0)] {
            let got = h0_integral(a, s).unwrap();
            let want = a.sqrt()
                * adaptive_simpson(
                    &mut |y: f64| airy_ai(y + s).unwrap() * (-0.5 * a * y).exp(),
                    0.0,
                    60.0,
                    1e-16 * got.abs() / a.sqrt(),
                );
            assert!(
                (got - want).abs() <= 1e-12 * want.abs(),
                "a = {a}, s = {s}: got {got:e}, want {want:e}"
            );
        }
    }

    #[test]
    fn boundary_moment_bounds_and_underflow() {
        // Monotone bound: Ai decreases on y ≥ 0, so the integral is below
        // Ai(s) ∫ e^{−a y/2} = 2 Ai(s)/a.
        let a = 2.0;
        let h = h0_integral(a, 30.0).unwrap();
        let bound = a.sqrt() * airy_ai(30.0).unwrap() * 2.0 / a;
        assert!(h > 0.0);
        assert!(h < bound * (1.0 + 1e-12), "h = {h:e}, bound = {bound:e}");
        // Far enough out the true value is below the smallest positive f64.
        assert_eq!(h0_integral(2.0, 120.0).unwrap(), 0.0);
    }

    #[test]
    fn moment_vector_matches_direct_quadrature() {
        let params = select_basis(0.0, 8);
        let h = compute_h(&params).unwrap();
        assert_eq!(h.len(), params.n_trunc + 1);
        assert!(h[0] > 0.0);
        for k in 0..=10 {
            let e = unit_expansion(params.a, k, params.n_trunc + 1);
            let want = integrate_with_expansion(&e, 0.0, |y| {
                airy_ai(y).unwrap() * eval_psi(&e, y).unwrap()
            });
            // The oracle's own floor: for oscillatory h_k the integral
            // cancels from O(mass) down to H_k, so quadrature roundoff
            // shows up at ~1e-14 of the uncancelled mass.
            let mass = integrate_with_expansion(&e, 0.0, |y| {
                (airy_ai(y).unwrap() * eval_psi(&e, y).unwrap()).abs()
            });
            assert!(
                (h[k] - want).abs() <= 1e-10 * want.abs() + 1e-14 * mass,
                "k = {k}: got {:e}, want {want:e}, mass {mass:e}",
                h[k]
            );
        }
    }

    #[test]
    fn moment_vector_satisfies_the_recurrence() {
        let params = select_basis(2.0, 5);
        let h = compute_h(&params).unwrap();
        let a = params.a;
        let s = eval_point(params.c) + params.c;
        let q = a * s - 0.25 * a * a * a;
        let peak = h.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let k = 10usize;
        let residual = (k - 1) as f64 * h[k - 2] - ((4 * k - 1) as f64 + q) * h[k - 1]
            + ((6 * k + 3) as f64 + 2.0 * a * s + 0.5 * a * a * a) * h[k]
            - ((4 * k + 5) as f64 + q) * h[k + 1]
            + (k + 2) as f64 * h[k + 2];
        assert!(
            residual.abs() <= 1e-12 * peak,
            "residual {residual:e} vs peak {peak:e}"
        );
    }

    #[test]
    fn leading_eigenvalue_matches_dense_discretization() {
        let spec = compute_eigenfunctions(0.0, 0).unwrap();
        let lam0 = lambda_0(&spec).unwrap();
        let oracle = nystrom_eigenvalues(0.0, 1, 300)[0];
        assert!(
            (lam0 - oracle).abs() <= 1e-12,
            "lam0 = {lam0:.16e}, oracle = {oracle:.16e}"
        );
    }

    #[test]
    fn leading_eigenvalue_decreases_in_c() {
        let lam: Vec<f64> = [0.0, 3.0, 5.0]
            .iter()
            .map(|&c| full_spectrum(c, 8).unwrap().lambda[0])
            .collect();
        assert!(lam[0] > lam[1] && lam[1] > lam[2], "{lam:?}");
        assert!(lam[2] > 0.0 && lam[0] < 1.0, "{lam:?}");
    }

    #[test]
    fn leading_eigenvalue_approaches_one_for_strongly_negative_c() {
        let spec = full_spectrum(-20.0, 3).unwrap();
        let lam0 = spec.lambda[0];
        assert!(lam0 < 1.0, "λ_0 = {lam0:.16e}");
        assert!(
            1.0 - lam0 * lam0 <= 1e-13,
            "1 − λ_0² = {:e}",
            1.0 - lam0 * lam0
        );
    }

    #[test]
    fn eigenvalue_ratios_match_dense_discretization() {
        let spec = full_spectrum(0.0, 4).unwrap();
        let ratios = eigenvalue_ratios(&spec).unwrap();
        let oracle = nystrom_eigenvalues(0.0, 5, 300);
        assert!(oracle[0] > 0.0);
        for j in 0..4 {
            let want = oracle[j + 1] / oracle[j];
            assert!(
                ratios[j] < 0.0 && ratios[j].abs() < 1.0,
                "ratio {j} = {}",
                ratios[j]
            );
            assert!(
                (ratios[j] - want).abs() <= 1e-10 * want.abs(),
                "j = {j}: got {:.14e}, want {want:.14e}",
                ratios[j]
            );
        }
    }

    #[test]
    fn full_spectrum_matches_dense_discretization() {
        let spec = full_spectrum(-5.0, 8).unwrap();
        let oracle = nystrom_eigenvalues(-5.0, 9, 300);
        for j in 0..=8 {
            let got = spec.lambda[j];
            let want = oracle[j];
            assert!(
                (got - want).abs() <= 1e-11,
                "j = {j}: got {got:.14e}, want {want:.14e}"
            );
            if want.abs() > 1e-6 {
                assert!(
                    (got - want).abs() <= 1e-8 * want.abs(),
                    "j = {j}: got {got:.14e}, want {want:.14e}"
                );
            }
        }
    }

    #[test]
    fn determinant_product_reproduces_published_value() {
        // Π_j (1 − λ_j²) at c = 0 is the probability that the scaled
        // largest GUE level stays below 0; reference value 9.69373e-1.
        let spec = full_spectrum(0.0, 30).unwrap();
        let prod: f64 = spec.lambda.iter().map(|&l| 1.0 - l * l).product();
        assert!(
            (prod - 9.69373e-1).abs() <= 1e-6,
            "product = {prod:.10e}"
        );
    }

    #[test]
    fn eigenvalue_derivative_matches_finite_differences() {
        // Points where λ_j genuinely moves with c: for strongly negative c
        // the boundary values ψ_j(0)² — and with them the derivative —
        // collapse, and a finite difference there measures only the noise
        // of the two λ evaluations.
        for (c, j) in [(0.5, 0usize), (2.0, 3), (-5.0, 1)] {
            let spec = full_spectrum(c, j).unwrap();
            let got = dlambda_dc(&spec, j).unwrap();
            let h = 1e-4;
            let hi = full_spectrum(c + h, j).unwrap().lambda[j];
            let lo = full_spectrum(c - h, j).unwrap().lambda[j];
            let fd = (hi - lo) / (2.0 * h);
            assert!(
                (got - fd).abs() <= 1e-6 * fd.abs(),
                "c = {c}, j = {j}: got {got:.12e}, fd {fd:.12e}"
            );
            // The squared form is the same quantity through 2λ·dλ.
            let got2 = dlambda2_dc(&spec, j).unwrap();
            let want2 = 2.0 * spec.lambda[j] * got;
            assert!((got2 - want2).abs() <= 1e-15 * want2.abs());
        }
    }

    /// ∫ψ_n′ψ_m = −λ_m/(λ_n + λ_m) · ψ_n(0) ψ_m(0), for every pair.
    #[test]
    fn derivative_couplings_satisfy_boundary_identity() {
        for c in [0.5, 2.0] {
            let spec = full_spectrum(c, 5).unwrap();
            for n in 0..=5usize {
                let d_n = diff_expansion(&spec.expansions[n]);
                for m in 0..=5usize {
                    let lhs = dot(&d_n, &spec.expansions[m].coeffs);
                    let (ln, lm) = (spec.lambda[n], spec.lambda[m]);
                    let rhs = -lm / (ln + lm) * spec.psi0[n] * spec.psi0[m];
                    // Pairs with superexponentially small rhs (high m at
                    // positive c) reach it by cancellation in the dot
                    // product; grant those the summation noise floor.
                    let gross: f64 = d_n
                        .iter()
                        .zip(&spec.expansions[m].coeffs)
                        .map(|(a, b)| (a * b).abs())
                        .sum();
                    let tol = (1e-10 * rhs.abs()).max(20.0 * f64::EPSILON * gross);
                    assert!(
                        (lhs - rhs).abs() <= tol,
                        "c = {c}, n = {n}, m = {m}: lhs {lhs:.14e}, rhs {rhs:.14e}"
                    );
                }
            }
        }
    }

    /// ∫x ψ_n ψ_m = λ_n λ_m/(λ_n² − λ_m²) · (ψ_n′(0)ψ_m(0) − ψ_n(0)ψ_m′(0))
    /// for n ≠ m.
    #[test]
    fn moment_couplings_satisfy_boundary_identity() {
        for c in [0.5, 2.0] {
            let spec = full_spectrum(c, 5).unwrap();
            for n in 0..=5usize {
                let xc = x_expansion(&spec.expansions[n]);
                let dpn = psi_prime0(&spec.expansions[n]);
                for m in 0..=5usize {
                    if m == n {
                        continue;
                    }
                    let lhs = dot(&xc, &spec.expansions[m].coeffs);
                    let (ln, lm) = (spec.lambda[n], spec.lambda[m]);
                    let dpm = psi_prime0(&spec.expansions[m]);
                    let rhs = ln * lm / (ln * ln - lm * lm)
                        * (dpn * spec.psi0[m] - spec.psi0[n] * dpm);
                    assert!(
                        (lhs - rhs).abs() <= 1e-10 * rhs.abs(),
                        "c = {c}, n = {n}, m = {m}: lhs {lhs:.14e}, rhs {rhs:.14e}"
                    );
                }
            }
        }
    }

    /// ∫(∂ψ_n/∂c) ψ_m = λ_n λ_m/(λ_m² − λ_n²) · ψ_m(0) ψ_n(0) for n ≠ m.
    ///
    /// The left side comes from first-order perturbation of the
    /// differential-operator matrix: ⟨β^{(m)}, (∂A/∂c) β^{(n)}⟩/(χ_n − χ_m),
    /// which is exact for the truncated problem and so probes the identity
    /// at full precision (a finite difference of ψ in c would not).
    #[test]
    fn parameter_derivative_satisfies_boundary_identity() {
        for c in [0.5, 2.0] {
            let spec = full_spectrum(c, 5).unwrap();
            let ap = da_dc(&spec.params);
            for n in 0..=5usize {
                let apn = ap.matvec(&spec.expansions[n].coeffs);
                for m in 0..=5usize {
                    if m == n {
                        continue;
                    }
                    let lhs = dot(&spec.expansions[m].coeffs, &apn) / (spec.chi[n] - spec.chi[m]);
                    let (ln, lm) = (spec.lambda[n], spec.lambda[m]);
                    let rhs = ln * lm / (lm * lm - ln * ln) * spec.psi0[m] * spec.psi0[n];
                    assert!(
                        (lhs - rhs).abs() <= 1e-10 * rhs.abs(),
                        "c = {c}, n = {n}, m = {m}: lhs {lhs:.14e}, rhs {rhs:.14e}"
                    );
                }
            }
        }
    }

    /// χ_n ψ_n(0) + ψ_n′(0) = 0: the differential equation at x = 0.
    #[test]
    fn boundary_recurrence_links_chi_and_derivative() {
        for c in [0.5, 2.0] {
            let spec = full_spectrum(c, 5).unwrap();
            for n in 0..=5usize {
                let lhs = spec.chi[n] * spec.psi0[n] + psi_prime0(&spec.expansions[n]);
                let scale = (spec.chi[n] * spec.psi0[n]).abs();
                assert!(
                    lhs.abs() <= 1e-9 * scale,
                    "c = {c}, n = {n}: residual {lhs:e} vs scale {scale:e}"
                );
            }
        }
    }

    /// The boundary identity still holds at 1e-8 for λ_30 ≈ 1e-34 — the
    /// relative accuracy the quotient scheme exists to deliver.
    #[test]
    fn deep_eigenvalue_keeps_relative_accuracy() {
        let spec = full_spectrum(0.0, 30).unwrap();
        assert!(spec.lambda[30].abs() < 1e-25 && spec.lambda[30] != 0.0);
        let (n, m) = (29usize, 30usize);
        let d_n = diff_expansion(&spec.expansions[n]);
        let lhs = dot(&d_n, &spec.expansions[m].coeffs);
        let (ln, lm) = (spec.lambda[n], spec.lambda[m]);
        let rhs = -lm / (ln + lm) * spec.psi0[n] * spec.psi0[m];
        assert!(
            (lhs - rhs).abs() <= 1e-8 * rhs.abs(),
            "lhs {lhs:.12e}, rhs {rhs:.12e}"
        );
    }

    #[test]
    fn left_continuation_agrees_with_direct_evaluation() {
        let spec = full_spectrum(1.0, 2).unwrap();
        for j in [0usize, 2] {
            for x in [0.0, 0.8, 3.3] {
                let direct = eval_psi(&spec.expansions[j], x).unwrap();
                let cont = psi_continuation(&spec, j, x).unwrap();
                assert!(
                    (cont - direct).abs() <= 1e-10 * direct.abs(),
                    "j = {j}, x = {x}: cont {cont:.14e}, direct {direct:.14e}"
                );
            }
        }
    }

    #[test]
    fn left_continuation_respects_turning_point_bound() {
        // For x + c ≥ 0 the kernel factor is bounded by Ai(x + c), so
        // |ψ̃_0(x)| ≤ Ai(x + c) ∫|ψ_0| / |λ_0|.
        let spec = full_spectrum(1.0, 0).unwrap();
        let e = &spec.expansions[0];
        let l1: f64 = integrate_with_expansion(e, 0.0, |y| eval_psi(e, y).unwrap().abs());
        for x in [-1.0, -0.5, 0.0, 2.0] {
            let cont = psi_continuation(&spec, 0, x).unwrap();
            let bound = airy_ai(x + 1.0).unwrap() * l1 / spec.lambda[0].abs();
            assert!(
                cont.abs() <= bound * (1.0 + 1e-12),
                "x = {x}: |ψ̃| = {:e}, bound = {bound:e}",
                cont.abs()
            );
        }
    }

    #[test]
    fn left_continuation_matches_direct_quadrature_oracle() {
        let spec = full_spectrum(-6.0, 0).unwrap();
        let e = &spec.expansions[0];
        let x = 3.0;
        let support = expansion_support(e);
        let integral = adaptive_simpson(
            &mut |y: f64| airy_ai(x + y - 6.0).unwrap() * eval_psi(e, y).unwrap(),
            0.0,
            support,
            1e-15,
        );
        let want = integral / spec.lambda[0];
        let got = psi_continuation(&spec, 0, x).unwrap();
        assert!(
            (got - want).abs() <= 1e-8 * want.abs(),
            "got {got:.12e}, want {want:.12e}"
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        /// Order and representation invariants on a parameter box where
        /// the default basis is reliable.
        #[test]
        fn spectrum_invariants_hold_on_random_parameters(
            c in -12.0..5.0f64,
            n in 1usize..5,
        ) {
            let spec = full_spectrum(c, n).unwrap();
            prop_assert!(spec.lambda[0] > 0.0 && spec.lambda[0] < 1.0);
            for j in 0..=n {
                let lam = spec.lambda[j];
                // Signs alternate, magnitudes decrease.
                let expected_sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                prop_assert!(spec.lambda_sign[j] == expected_sign);
                if j > 0 {
                    prop_assert!(lam.abs() <= spec.lambda[j - 1].abs());
                }
                // Plain value and sign/log form describe the same number.
                if lam.abs() > 1e-280 {
                    let recon = apply_log_scale(spec.lambda_sign[j], spec.lambda_log[j]);
                    prop_assert!((recon - lam).abs() <= 1e-12 * lam.abs());
                }
            }
        }
    }
}
