//! Soft-edge level distributions of the Gaussian ensembles.
//!
//! The cumulative distribution F_β(k; s) of the k-th largest level at the
//! soft edge (Tracy–Widom laws and their k-level generalizations) is a
//! determinant series over the spectrum of the Airy integral operator.  For
//! the unitary class (β = 2) the kernel eigenvalues are the squares
//! λ_{i,s}², and
//!
//! ```text
//!     F_2(k; s) = Π_i (1 − λ_{i,s}²) · Σ_{j<k} e_j(μ),     μ_i = λ_i²/(1 − λ_i²),
//! ```
//!
//! where e_j is the j-th elementary symmetric polynomial of the μ_i.  This
//! is algebraically identical to the textbook sums over distinct index
//! tuples (each j-tuple sum divided by j!), but every μ_i is positive, so
//! the recurrence e_j ← e_j + μ_i·e_{j−1} accumulates without cancellation
//! and preserves the relative accuracy of the eigenvalues.  Densities come
//! from differentiating the same expression in s with
//! ∂(λ_i²)/∂s = −λ_i²ψ_i(0)², carried as a first-order jet through the
//! product and the recurrence.
//!
//! For the orthogonal (β = 1) and symplectic (β = 4) classes the operator
//! parameter is s/2 and the eigenvalues enter with their signs:
//!
//! ```text
//!     F_1(k; s) = ½ Σ_{j<k} (−1)^j/j! ∂_z^j [ (1+q)·Π(1 − rλ_i) + (1−q)·Π(1 + rλ_i) ] at z = 1,
//!     F_4(k; s) = ½ Σ_{j<k} (−1)^j/j! ∂_z^j [       Π(1 − rλ_i) +       Π(1 + rλ_i) ] at z = 1,
//! ```
//!
//! with r(z) = √(z(2−z)), q(z) = √(z/(2−z)) for β = 1 and r(z) = √z for
//! β = 4.  The z-derivatives are evaluated exactly by truncated-polynomial
//! (jet) arithmetic of order k−1 around z = 1; no finite differences are
//! involved.  The β = 1, 4 densities are the exact s-derivative of the
//! implemented CDF expression, obtained by threading a second jet
//! dimension in s with ∂λ_i/∂s = −¼ λ_i ψ_i(0)²; no closed-form density
//! beyond that derivative is assumed.
//!
//! Scaling: products and series are accumulated with an explicit shared
//! log-scale, so values far below the representable range keep a
//! meaningful (sign, log) form.  [`DistValue`] reports the plain value
//! (saturating to 0 on underflow), the log form, and an error estimate.
//!
//! Accuracy: in the bulk and the right tail every reported digit is
//! trustworthy — the factors 1 − λ² are well separated from 0 and the
//! series has no cancellation.  In the deep left tail the quantities
//! 1 − λ_i² for the leading eigenvalues fall below the f64 noise floor
//! (λ_i is relatively accurate, but 1 − λ_i² subtracts to pure roundoff),
//! so relative accuracy is lost there and `est_abs_err` grows to the
//! value itself; this is inherent to double precision, not to the method.

use crate::specfun::apply_log_scale;
use crate::spectrum::{dlambda2_dc, dlambda_dc, full_spectrum};
use crate::{Error, Result};

/// Relative cutoff for the factor tail: eigenvalues below this multiple of
/// the leading one change any determinant series by less than 1e-18 and
/// are dropped.  Public evaluators pass this to [`spectral_factors`].
pub const TRUNCATION_RATIO: f64 = 1e-18;

/// Largest basis order the adaptive factor search will try.
const FACTOR_CAP: usize = 512;

/// Operator shifts past this point contribute no representable factor:
/// λ_0(c) decays like exp(−(2√2/3)·c^{3/2}), which is below 1e-280 for
/// c ≥ 100, so every factor equals 1 to f64 and the spectrum need not be
/// computed at all.
const FAR_RIGHT_SHIFT: f64 = 100.0;

const EPS: f64 = f64::EPSILON;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// The truncated eigenvalue data one distribution evaluation consumes.
///
/// For β = 2 `lam2[i]` holds the squared eigenvalue λ_{i,s}² of the kernel
/// determinant and `dlam2_ds[i]` its s-derivative −λ²ψ(0)².  For β ∈ {1, 4}
/// `lam2[i]` holds the signed eigenvalue λ_{i,s/2} itself (the determinants
/// are over I ∓ r·T) and `dlam2_ds[i]` = −¼ λψ(0)².  Magnitudes are
/// strictly inside (0, 1) and strictly decreasing; the last entry sits
/// below the truncation threshold requested from [`spectral_factors`]
/// (except when the tail underflowed f64 outright, in which case the
/// dropped part is smaller still).
#[derive(Debug, Clone)]
pub struct SpectralFactors {
    /// Distribution argument these factors were built for.
    pub s: f64,
    /// Symmetry class (1, 2, or 4) fixing the interpretation of `lam2`.
    pub beta: u8,
    /// λ_{i,s}² (β = 2) or signed λ_{i,s/2} (β ∈ {1, 4}).
    pub lam2: Vec<f64>,
    /// d`lam2`/ds, from the boundary-value derivative identities.
    pub dlam2_ds: Vec<f64>,
    /// Number of retained factors (= `lam2.len()`).
    pub count: usize,
}

/// A distribution value with deep-tail plumbing.
///
/// `value` = `sign`·exp(`log_value`) to a ulp whenever that product is
/// representable; once it underflows, `value` saturates to 0 while the
/// (sign, log) pair stays exact.  `est_abs_err` is a running estimate of
/// the absolute error from factor noise and cancellation; in the deep left
/// tail it reaches `value` itself, reflecting the genuine loss of relative
/// accuracy there.
#[derive(Debug, Clone, Copy)]
pub struct DistValue {
    /// Plain f64 value (saturates to 0 when the magnitude underflows).
    pub value: f64,
    /// ln of the magnitude; −∞ for an exact zero.
    pub log_value: f64,
    /// ±1.0, or 0.0 for an exact zero.
    pub sign: f64,
    /// Estimated absolute error of `value`.
    pub est_abs_err: f64,
}

fn dist_value(sign: f64, log_value: f64, est_rel: f64) -> DistValue {
    let value = apply_log_scale(sign, log_value);
    let est = est_rel.max(EPS);
    DistValue {
        value,
        log_value,
        sign,
        est_abs_err: apply_log_scale(est, log_value).abs().max(f64::MIN_POSITIVE),
    }
}

fn zero_value() -> DistValue {
    DistValue {
        value: 0.0,
        log_value: f64::NEG_INFINITY,
        sign: 0.0,
        est_abs_err: f64::MIN_POSITIVE,
    }
}

/// A zero within noise: the computed value had an impossible sign but sat
/// inside the cancellation floor, so it is reported as exact zero carrying
/// the floor (e^`log_floor`) as the absolute error.
fn noise_zero(log_floor: f64) -> DistValue {
    DistValue {
        value: 0.0,
        log_value: f64::NEG_INFINITY,
        sign: 0.0,
        est_abs_err: apply_log_scale(1.0, log_floor).abs().max(f64::MIN_POSITIVE),
    }
}

// ---------------------------------------------------------------------------
// Spectral factors
// ---------------------------------------------------------------------------

fn empty_factors(s: f64, beta: u8) -> SpectralFactors {
    SpectralFactors {
        s,
        beta,
        lam2: Vec::new(),
        dlam2_ds: Vec::new(),
        count: 0,
    }
}

/// Eigenvalue factors for F_β(·; s), truncated where they stop mattering.
///
/// Runs [`full_spectrum`] at the operator shift c = s (β = 2) or c = s/2
/// (β ∈ {1, 4}), starting with basis order n = 20 and doubling until the
/// smallest computed magnitude falls below `tol` times the largest, then
/// keeps factors up to and including that first sub-threshold one.  Exact
/// zeros from underflow are dropped (their factors are 1 to f64).  An
/// empty factor list is valid and means every factor is 1: the CDFs are 1
/// and the densities 0 to machine accuracy, which is how the far right
/// tail is represented.
///
/// Errors: invalid β/tol/s, any spectrum failure, or a factor tail that
/// still has not dropped below threshold at n = 512.
pub fn spectral_factors(s: f64, beta: u8, tol: f64) -> Result<SpectralFactors> {
    if !s.is_finite() {
        return Err(Error::InvalidArgument(format!("spectral_factors: s = {s}")));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "spectral_factors: truncation ratio must lie in (0, 1); got {tol}"
        )));
    }
    let c = match beta {
        2 => s,
        1 | 4 => 0.5 * s,
        other => {
            return Err(Error::InvalidArgument(format!(
                "spectral_factors: β must be 1, 2, or 4; got {other}"
            )))
        }
    };
    if c >= FAR_RIGHT_SHIFT {
        return Ok(empty_factors(s, beta));
    }

    let mut n = 20;
    loop {
        let spec = full_spectrum(c, n)?;
        let raw: Vec<f64> = spec
            .lambda
            .iter()
            .map(|&l| if beta == 2 { l * l } else { l })
            .collect();
        if raw[0] == 0.0 {
            // Even the leading factor underflowed: the determinants are 1.
            return Ok(empty_factors(s, beta));
        }
        let threshold = tol * raw[0].abs();
        let terminator = raw.iter().position(|v| v.abs() < threshold);
        let Some(pos) = terminator else {
            if n >= FACTOR_CAP {
                return Err(Error::Numerical(format!(
                    "spectral_factors: eigenvalue tail at s = {s} (β = {beta}) has not \
                     decayed below {tol:.1e} of the leading factor by basis order {FACTOR_CAP}"
                )));
            }
            n = (2 * n).min(FACTOR_CAP);
            continue;
        };
        let mut m = pos + 1;
        while m > 0 && raw[m - 1] == 0.0 {
            m -= 1;
        }
        let lam2 = raw[..m].to_vec();
        let mut dlam2_ds = Vec::with_capacity(m);
        for j in 0..m {
            let d = match beta {
                2 => dlambda2_dc(&spec, j)?,
                _ => 0.5 * dlambda_dc(&spec, j)?,
            };
            dlam2_ds.push(d);
        }
        return Ok(SpectralFactors {
            s,
            beta,
            lam2,
            dlam2_ds,
            count: m,
        });
    }
}

fn ensure_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "level index k must be at least 1 (k-th largest level)".into(),
        ));
    }
    Ok(())
}

fn ensure_class(factors: &SpectralFactors, wanted: &[u8], caller: &str) -> Result<()> {
    if !wanted.contains(&factors.beta) {
        return Err(Error::InvalidArgument(format!(
            "{caller}: factors were built for β = {}, need β ∈ {wanted:?}",
            factors.beta
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Unitary class (β = 2)
// ---------------------------------------------------------------------------

/// Everything one pass over the β = 2 factors yields: the log-determinant,
/// the partial sum Σ_{j<k} e_j(μ) of elementary symmetric functions under a
/// log-scale, and the factor-noise tally feeding `est_abs_err`.
struct GueSeries {
    log_det: f64,
    sum: f64,
    log_scale: f64,
    factor_noise: f64,
}

fn gue_series(factors: &SpectralFactors, k: usize) -> Result<GueSeries> {
    ensure_k(k)?;
    ensure_class(factors, &[2], "unitary-class series")?;

    let mut e = vec![0.0; k];
    e[0] = 1.0;
    let mut log_scale = 0.0_f64;
    let mut log_det = 0.0_f64;
    let mut factor_noise = 0.0_f64;

    for i in 0..factors.count {
        let l2 = factors.lam2[i];
        let om = 1.0 - l2;
        let mu = l2 / om;
        log_det += (-l2).ln_1p();
        // 1 − λ² carries the roundoff of λ² as a relative error ≈ 2·eps·μ.
        factor_noise += EPS * (1.0 + 2.0 * mu);
        for j in (1..k).rev() {
            e[j] += mu * e[j - 1];
        }
        let peak = e.iter().fold(0.0_f64, |m, v| m.max(*v));
        if peak > 1e250 {
            for v in e.iter_mut() {
                *v *= 1e-250;
            }
            log_scale += 250.0 * std::f64::consts::LN_10;
        }
    }

    Ok(GueSeries {
        log_det,
        sum: e.iter().sum(),
        log_scale,
        factor_noise,
    })
}

/// F_2(k; s) from precomputed β = 2 factors.
///
/// The partial sum Σ_{j<k} e_j(μ) is positive with positive terms, so the
/// result's relative accuracy is set entirely by the factors; once k
/// exceeds the retained count the sum telescopes to Π(1+μ_i) and the CDF
/// saturates at 1 to roundoff.
pub fn cdf_gue_from(factors: &SpectralFactors, k: usize) -> Result<DistValue> {
    let g = gue_series(factors, k)?;
    let log_value = g.log_det + g.log_scale + g.sum.ln();
    let est = g.factor_noise + k as f64 * EPS;
    Ok(dist_value(1.0, log_value, est))
}

/// F_2(k; s): CDF of the k-th largest level of the unitary class.
pub fn cdf_gue(k: usize, s: f64) -> Result<DistValue> {
    ensure_k(k)?;
    let factors = spectral_factors(s, 2, TRUNCATION_RATIO)?;
    cdf_gue_from(&factors, k)
}

/// d/ds F_2(k; s) from precomputed β = 2 factors.
///
/// Differentiating F = Π(1 − λ²) · Σ_{j<k} e_j(μ) term by term produces two
/// opposite-signed pieces whose near-cancellation would cost relative digits,
/// but carrying the cancellation out symbolically collapses the density to
///
/// ```text
/// d/ds F_2(k; s) = Π(1 − λ²) · Σ_t ν_t · e_{k−1}(μ \ {t}) ,
/// ν_t = (−dλ²_t/ds) / (1 − λ²_t) ≥ 0 ,
/// ```
///
/// a sum of nonnegative terms only.  The density therefore inherits the
/// relative accuracy of the factors everywhere, and the leave-one-out
/// elementary symmetric functions cost a harmless O(count²·k).
pub fn pdf_gue_from(factors: &SpectralFactors, k: usize) -> Result<DistValue> {
    ensure_k(k)?;
    ensure_class(factors, &[2], "unitary-class density")?;
    let m = factors.count;
    if k > m {
        // Fewer retained factors than levels: the CDF is Π(1+μ) to roundoff
        // (saturated at 1), so the density is zero at this resolution.
        return Ok(zero_value());
    }

    let mut log_det = 0.0_f64;
    let mut factor_noise = 0.0_f64;
    let mut mu = vec![0.0; m];
    let mut nu = vec![0.0; m];
    for i in 0..m {
        let om = 1.0 - factors.lam2[i];
        mu[i] = factors.lam2[i] / om;
        nu[i] = -factors.dlam2_ds[i] / om;
        log_det += (-factors.lam2[i]).ln_1p();
        factor_noise += EPS * (1.0 + 2.0 * mu[i]);
    }

    // Scaled accumulation of Σ_t ν_t · e_{k−1}(μ \ {t}): each summand gets a
    // fresh recurrence pass (with its own 1e±250 rescaling) and is merged
    // into the running total under the larger of the two log-scales.
    let mut total = 0.0_f64;
    let mut total_scale = 0.0_f64;
    let mut e = vec![0.0; k];
    for t in 0..m {
        if nu[t] == 0.0 {
            continue;
        }
        e.fill(0.0);
        e[0] = 1.0;
        let mut local_scale = 0.0_f64;
        for i in (0..m).filter(|&i| i != t) {
            for j in (1..k).rev() {
                e[j] += mu[i] * e[j - 1];
            }
            let peak = e.iter().fold(0.0_f64, |acc, v| acc.max(*v));
            if peak > 1e250 {
                for v in e.iter_mut() {
                    *v *= 1e-250;
                }
                local_scale += 250.0 * std::f64::consts::LN_10;
            }
        }
        let term = nu[t] * e[k - 1];
        if term == 0.0 {
            continue;
        }
        if local_scale > total_scale {
            total *= (total_scale - local_scale).exp();
            total_scale = local_scale;
        }
        total += term * (local_scale - total_scale).exp();
    }

    if total == 0.0 {
        return Ok(zero_value());
    }
    let log_value = log_det + total_scale + total.ln();
    let est = factor_noise + (k + 2) as f64 * EPS;
    Ok(dist_value(1.0, log_value, est))
}

/// d/ds F_2(k; s): density of the k-th largest level of the unitary class.
pub fn pdf_gue(k: usize, s: f64) -> Result<DistValue> {
    ensure_k(k)?;
    let factors = spectral_factors(s, 2, TRUNCATION_RATIO)?;
    pdf_gue_from(&factors, k)
}

// ---------------------------------------------------------------------------
// Jet arithmetic in z around z = 1
// ---------------------------------------------------------------------------

/// Truncated Taylor polynomial in u = z − 1; `c[j]` is the u^j coefficient.
/// All operations truncate to the fixed length set at construction.
#[derive(Debug, Clone)]
struct Jet {
    c: Vec<f64>,
}

impl Jet {
    fn constant(len: usize, v: f64) -> Jet {
        let mut c = vec![0.0; len];
        c[0] = v;
        Jet { c }
    }

    /// Jet with the given low-order coefficients (truncated or zero-padded).
    fn from_coeffs(len: usize, coeffs: &[f64]) -> Jet {
        let mut c = vec![0.0; len];
        for (dst, src) in c.iter_mut().zip(coeffs) {
            *dst = *src;
        }
        Jet { c }
    }

    fn len(&self) -> usize {
        self.c.len()
    }

    fn mul(&self, o: &Jet) -> Jet {
        let len = self.len();
        let mut c = vec![0.0; len];
        for i in 0..len {
            if self.c[i] == 0.0 {
                continue;
            }
            for j in 0..len - i {
                c[i + j] += self.c[i] * o.c[j];
            }
        }
        Jet { c }
    }

    fn scale(&self, t: f64) -> Jet {
        Jet {
            c: self.c.iter().map(|v| v * t).collect(),
        }
    }

    fn add(&self, o: &Jet) -> Jet {
        Jet {
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }

    /// self / o, requiring o.c[0] ≠ 0.
    fn div(&self, o: &Jet) -> Jet {
        let len = self.len();
        let mut c = vec![0.0; len];
        for n in 0..len {
            let mut acc = self.c[n];
            for j in 0..n {
                acc -= c[j] * o.c[n - j];
            }
            c[n] = acc / o.c[0];
        }
        Jet { c }
    }

    /// √self, requiring c[0] > 0.
    fn sqrt(&self) -> Jet {
        let len = self.len();
        let mut c = vec![0.0; len];
        c[0] = self.c[0].sqrt();
        for n in 1..len {
            let mut acc = self.c[n];
            for j in 1..n {
                acc -= c[j] * c[n - j];
            }
            c[n] = acc / (2.0 * c[0]);
        }
        Jet { c }
    }

    fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// A product of factor jets carried as (value jet, s-derivative jet) under
/// a shared log-scale, so determinants far below the representable range
/// keep full jet information.
struct ScaledProduct {
    v: Jet,
    d: Jet,
    log_scale: f64,
}

impl ScaledProduct {
    fn one(len: usize) -> ScaledProduct {
        ScaledProduct {
            v: Jet::constant(len, 1.0),
            d: Jet::constant(len, 0.0),
            log_scale: 0.0,
        }
    }

    /// Multiply by a factor jet (fv, fd): product rule on the d component.
    fn mul_factor(&mut self, fv: &Jet, fd: &Jet) {
        let d = self.d.mul(fv).add(&self.v.mul(fd));
        let v = self.v.mul(fv);
        self.v = v;
        self.d = d;
        let peak = self.v.max_abs().max(self.d.max_abs());
        if peak > 0.0 && !(1e-200..=1e200).contains(&peak) {
            let inv = 1.0 / peak;
            self.v = self.v.scale(inv);
            self.d = self.d.scale(inv);
            self.log_scale += peak.ln();
        }
    }
}

// ---------------------------------------------------------------------------
// Orthogonal and symplectic classes (β = 1, 4)
// ---------------------------------------------------------------------------

/// The bracket of the F_1/F_4 formulas as order-(k−1) jets in z at z = 1:
/// coefficient vectors for the value and its s-derivative, a shared
/// log-scale, and the factor-noise tally.
///
/// The brackets are sums of two near-opposite products, so a coefficient can
/// be far smaller than the addends that produced it.  `floor` and `dfloor`
/// record Σ_j (|A_j| + |B_j|) over the two addend jets: the gross magnitude
/// that actually flowed through the arithmetic, which bounds the absolute
/// round-off of everything downstream.
struct BetaSeries {
    bracket: Vec<f64>,
    dbracket: Vec<f64>,
    floor: f64,
    dfloor: f64,
    log_scale: f64,
    factor_noise: f64,
    count: usize,
}

fn beta_series(factors: &SpectralFactors, k: usize) -> Result<BetaSeries> {
    ensure_k(k)?;
    ensure_class(factors, &[1, 4], "orthogonal/symplectic-class series")?;

    // r(z) as a jet in u = z − 1: z(2−z) = 1 − u² for β = 1, z = 1 + u for
    // β = 4.  r(1) = 1 in both classes.
    let r = if factors.beta == 1 {
        Jet::from_coeffs(k, &[1.0, 0.0, -1.0]).sqrt()
    } else {
        Jet::from_coeffs(k, &[1.0, 1.0]).sqrt()
    };

    let mut minus = ScaledProduct::one(k); // Π (1 − r·λ_i)
    let mut plus = ScaledProduct::one(k); //  Π (1 + r·λ_i)
    let mut factor_noise = 0.0_f64;
    for i in 0..factors.count {
        let lam = factors.lam2[i];
        let dlam = factors.dlam2_ds[i];
        let mut fm = r.scale(-lam);
        fm.c[0] += 1.0;
        let mut fp = r.scale(lam);
        fp.c[0] += 1.0;
        minus.mul_factor(&fm, &r.scale(-dlam));
        plus.mul_factor(&fp, &r.scale(dlam));
        factor_noise +=
            EPS * (1.0 + lam.abs() / (1.0 - lam).abs() + lam.abs() / (1.0 + lam).abs());
    }

    // Combine under the larger of the two product scales; the suppressed
    // side's coefficients underflow harmlessly if the scales are far apart.
    let log_scale = minus.log_scale.max(plus.log_scale);
    let wm = (minus.log_scale - log_scale).exp();
    let wp = (plus.log_scale - log_scale).exp();
    let (va, vb, da, db) = if factors.beta == 1 {
        let q = Jet::from_coeffs(k, &[1.0, 1.0])
            .div(&Jet::from_coeffs(k, &[1.0, -1.0]))
            .sqrt();
        let mut pref_plus = q.clone();
        pref_plus.c[0] += 1.0; // 1 + q
        let mut pref_minus = q.scale(-1.0);
        pref_minus.c[0] += 1.0; // 1 − q
        (
            pref_plus.mul(&minus.v).scale(wm),
            pref_minus.mul(&plus.v).scale(wp),
            pref_plus.mul(&minus.d).scale(wm),
            pref_minus.mul(&plus.d).scale(wp),
        )
    } else {
        (
            minus.v.scale(wm),
            plus.v.scale(wp),
            minus.d.scale(wm),
            plus.d.scale(wp),
        )
    };

    let gross_sum =
        |a: &Jet, b: &Jet| a.c.iter().zip(&b.c).map(|(x, y)| x.abs() + y.abs()).sum();
    Ok(BetaSeries {
        floor: gross_sum(&va, &vb),
        dfloor: gross_sum(&da, &db),
        bracket: va.add(&vb).c,
        dbracket: da.add(&db).c,
        log_scale,
        factor_noise,
        count: factors.count,
    })
}

/// Alternating sum Σ_{j<k} (−1)^j·coeffs[j].
fn alternating_sum(coeffs: &[f64]) -> f64 {
    let mut total = 0.0;
    let mut sign = 1.0;
    for &b in coeffs {
        total += sign * b;
        sign = -sign;
    }
    total
}

/// F_β(k; s), β ∈ {1, 4}, from precomputed factors.
///
/// The j-th z-derivative at z = 1 equals j! times the j-th jet coefficient,
/// so the (−1)^j/j! combination reduces to an alternating sum of the
/// bracket's coefficients, times the overall ½.
pub fn cdf_beta_from(factors: &SpectralFactors, k: usize) -> Result<DistValue> {
    let b = beta_series(factors, k)?;
    let total = alternating_sum(&b.bracket);
    if total == 0.0 {
        return Ok(zero_value());
    }
    // Absolute round-off floor: one EPS·gross per product factor plus a few
    // for the merge and the alternating sum.
    let noise = EPS * (b.count + k + 2) as f64 * b.floor;
    // The CDF is nonnegative; a negative total inside that floor is a
    // cancellation residue, not a value.
    if total < 0.0 && -total <= noise {
        return Ok(noise_zero(b.log_scale + noise.ln() + 0.5_f64.ln()));
    }
    let log_value = b.log_scale + total.abs().ln() + 0.5_f64.ln();
    let est = b.factor_noise + noise / total.abs();
    Ok(dist_value(total.signum(), log_value, est))
}

/// F_β(k; s): CDF of the k-th largest level of the orthogonal (β = 1) or
/// symplectic (β = 4) class.
pub fn cdf_beta(beta: u8, k: usize, s: f64) -> Result<DistValue> {
    ensure_k(k)?;
    let factors = spectral_factors(s, validate_beta14(beta)?, TRUNCATION_RATIO)?;
    cdf_beta_from(&factors, k)
}

/// d/ds F_β(k; s), β ∈ {1, 4}, from precomputed factors: the alternating
/// sum applied to the s-derivative jet coefficients.
pub fn pdf_beta_from(factors: &SpectralFactors, k: usize) -> Result<DistValue> {
    let b = beta_series(factors, k)?;
    let total = alternating_sum(&b.dbracket);
    if total == 0.0 {
        return Ok(zero_value());
    }
    let noise = EPS * (b.count + k + 2) as f64 * b.dfloor;
    // The density is nonnegative; a negative total inside the round-off
    // floor is a cancellation residue, not a value.
    if total < 0.0 && -total <= noise {
        return Ok(noise_zero(b.log_scale + noise.ln() + 0.5_f64.ln()));
    }
    let log_value = b.log_scale + total.abs().ln() + 0.5_f64.ln();
    let est = b.factor_noise + noise / total.abs();
    Ok(dist_value(total.signum(), log_value, est))
}

/// d/ds F_β(k; s): density of the k-th largest level of the orthogonal
/// (β = 1) or symplectic (β = 4) class.
pub fn pdf_beta(beta: u8, k: usize, s: f64) -> Result<DistValue> {
    ensure_k(k)?;
    let factors = spectral_factors(s, validate_beta14(beta)?, TRUNCATION_RATIO)?;
    pdf_beta_from(&factors, k)
}

fn validate_beta14(beta: u8) -> Result<u8> {
    match beta {
        1 | 4 => Ok(beta),
        other => Err(Error::InvalidArgument(format!(
            "β must be 1 or 4 for the orthogonal/symplectic classes; got {other} \
             (use the gue functions for β = 2)"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
