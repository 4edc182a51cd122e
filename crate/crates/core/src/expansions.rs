//! Asymptotic evaluation of `K` and `L` for large `r = |w|`.
//!
//! The algebraic series `K - iL ~ pi^{-1/2} sum (-1)^k (1/2)_k w^{-2k-1}` is
//! truncated after `m ~ r^2` terms and the exponentially small remainder
//! `Khat - i Lhat = 2 e^{w^2} T_{m+1/2}(w^2)` is itself expanded:
//!
//! * away from the Stokes line `theta = pi/2`,
//!   `Khat - i Lhat ~ e^{-r^2} / (sqrt(2 pi) cos theta) sum e^{i m phi} A_2k / r^{2k+1}`;
//! * uniformly in `0 <= theta <= pi/2`,
//!   `Khat - i Lhat ~ e^{-r^2} / sqrt(2 pi) [e^{i (m + 1/2 - alpha) phi} E(phi) + sum e^{i m phi} Bhat_2k / r^{2k+1}]`.

use rug::{Complex, Float};
use serde::Serialize;

use crate::coefficients::{a2k_all, b2k_all, bhat2k_all, StokesGeometry, K_MAX};
use crate::error::{Result, VoigtError};
use crate::numerics::{abs, cis, erfc_complex, pochhammer_half, sqrt_pi, PrecisionContext};
use crate::oracle::{Evaluation, Method, VoigtArgument};

/// Collar below `theta = pi/2` inside which the expansion in `A_2k` is refused.
pub const DELTA_T1: f64 = 0.02 * std::f64::consts::PI;

/// Largest `phi` at which the near-Stokes leading formula is offered.
pub const PHI_NEAR_MAX: f64 = 0.5;

/// Most terms of the remainder expansions: `k = 0..=K_MAX`.
pub const MAX_K_TERMS: usize = K_MAX + 1;

pub const DEFAULT_K_TERMS: usize = 3;

// angles are compared with a little slack so that exact grid points such as
// theta = 0.48 pi sit inside the collar boundary
const ANGLE_SLACK: f64 = 1e-12;

/// Truncation index `m`, offset `alpha = m + 1/2 - r^2` and terminant order
/// `nu = m + 1/2`.
#[derive(Debug, Clone)]
pub struct TruncationPlan {
    pub m: u32,
    pub alpha: Float,
    pub nu: Float,
    /// Set when `r < 1`, where the expansions are not meant to be used.
    pub below_range: bool,
}

impl TruncationPlan {
    /// A plan with a caller-chosen `m`; `alpha` is still `m + 1/2 - r^2`.
    pub fn with_m(r: &Float, m: u32, ctx: &PrecisionContext) -> Result<Self> {
        if m < 1 {
            return Err(VoigtError::domain("truncation index m must be at least 1"));
        }
        let bits = ctx.bits();
        let nu = Float::with_val(bits, m) + 0.5f64;
        let alpha = Float::with_val(bits, &nu - Float::with_val(bits, r.square_ref()));
        Ok(Self { m, alpha, nu, below_range: *r < 1u32 })
    }
}

/// `m = floor(r^2 + 1/2)`, so that `alpha in (0, 1]`. Radii below 1 are
/// flagged but still planned (with `m >= 1`).
pub fn optimal_truncation(r: &Float, ctx: &PrecisionContext) -> TruncationPlan {
    let bits = ctx.bits();
    let m = Float::with_val(bits, Float::with_val(bits, r.square_ref()) + 0.5f64).floor();
    let m = m.to_u32_saturating().unwrap_or(1).max(1);
    TruncationPlan::with_m(r, m, ctx).expect("m >= 1")
}

/// `pi^{-1/2} sum_{k<m} (-1)^k (1/2)_k (cos, sin)((2k+1) theta) / r^{2k+1}`.
pub fn algebraic_partial_sums(arg: &VoigtArgument, m: u32, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    if m < 1 {
        return Err(VoigtError::domain("partial sums need m >= 1"));
    }
    if arg.r().is_zero() {
        return Err(VoigtError::Singular("the algebraic series is singular at w = 0".into()));
    }
    let bits = ctx.bits();
    let inv_r2 = Float::with_val(bits, arg.r().clone().square().recip());
    let mut mag = Float::with_val(bits, arg.r().recip_ref());
    let mut k_sum = Float::new(bits);
    let mut l_sum = Float::new(bits);
    for k in 0..m {
        let angle = Float::with_val(bits, arg.theta() * (2 * k + 1));
        let (s, c) = angle.sin_cos(Float::new(bits));
        let signed = if k % 2 == 0 { mag.clone() } else { -mag.clone() };
        k_sum += Float::with_val(bits, &signed * &c);
        l_sum += signed * &s;
        mag *= &inv_r2;
        mag *= Float::with_val(bits, k) + 0.5f64;
    }
    let sp = sqrt_pi(bits);
    Ok((k_sum / &sp, l_sum / sp))
}

/// The same sums as the real part and minus the imaginary part of
/// `pi^{-1/2} sum_{k<m} (-1)^k (1/2)_k w^{-2k-1}`.
pub fn algebraic_partial_sums_complex(arg: &VoigtArgument, m: u32, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    if m < 1 {
        return Err(VoigtError::domain("partial sums need m >= 1"));
    }
    if arg.r().is_zero() {
        return Err(VoigtError::Singular("the algebraic series is singular at w = 0".into()));
    }
    let bits = ctx.bits();
    let inv_w = Complex::with_val(bits, arg.w().recip_ref());
    let inv_w2 = Complex::with_val(bits, inv_w.square_ref());
    let mut term = inv_w;
    let mut sum = Complex::with_val(bits, 0);
    for k in 0..m {
        sum += &term;
        term *= &inv_w2;
        term *= -(Float::with_val(bits, k) + 0.5f64);
    }
    let sp = sqrt_pi(bits);
    Ok((Float::with_val(bits, sum.real() / &sp), -Float::with_val(bits, sum.imag() / &sp)))
}

/// Which large-`|z|` form of the terminant to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    /// The expansion in `A_2k`; needs `arg z` bounded away from `+-pi`.
    Away,
    /// The expansion with the error-function smoothing, valid across `arg z = pi`.
    Uniform,
}

fn check_k_terms(k_terms: usize) -> Result<()> {
    if k_terms == 0 || k_terms > MAX_K_TERMS {
        return Err(VoigtError::UnsupportedOrder { order: k_terms, max: MAX_K_TERMS });
    }
    Ok(())
}

/// `T_nu(z)` for large `|z|` with `nu = |z| + alpha`, from `k_terms` terms of
/// the chosen expansion. Writing `phi = pi - arg z` (principal `arg`):
///
/// * `Away`: `-i e^{i phi nu} / (1 - e^{i phi}) e^{-z-|z|} / sqrt(2 pi |z|) sum A_2k |z|^{-k}`,
///   for `2 DELTA_T1 <= phi <= 2 pi - 2 DELTA_T1`;
/// * `Uniform`: `erfc(c(phi) sqrt(|z|/2)) / 2 - i e^{-z-|z|+i phi |z|} / sqrt(2 pi |z|) sum B_2k |z|^{-k}`,
///   for `0 <= phi <= 2 pi - 2 DELTA_T1`.
pub fn terminant_asymptotic(
    z: &Complex,
    nu: &Float,
    region: Region,
    k_terms: usize,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    check_k_terms(k_terms)?;
    let bits = ctx.bits();
    let modz = Float::with_val(bits, z.abs_ref());
    if modz.is_zero() {
        return Err(VoigtError::domain("terminant expansion needs z != 0"));
    }
    let alpha = Float::with_val(bits, nu - &modz);
    if alpha.clone().abs() > 2u32 {
        return Err(VoigtError::domain("terminant expansion needs nu close to |z|"));
    }
    let psi = Float::with_val(bits, z.arg_ref());
    let phi = ctx.pi() - psi;
    let delta = 2.0 * DELTA_T1 - ANGLE_SLACK;
    let two_pi = 2.0 * std::f64::consts::PI;
    let pf = phi.to_f64();
    if pf > two_pi - delta || (region == Region::Away && pf < delta) {
        return Err(VoigtError::domain(format!("arg z = {:.6} is outside the {region:?} region", std::f64::consts::PI - pf)));
    }
    let inv = Float::with_val(bits, modz.recip_ref());
    let root = Float::with_val(bits, &modz * ctx.pi() * 2u32).sqrt();
    let decay = -Complex::with_val(bits, z + &modz);
    let kmax = k_terms - 1;
    match region {
        Region::Away => {
            let coeffs = a2k_all(&phi, &alpha, kmax, ctx)?;
            let sum = power_sum(&coeffs, &inv);
            let lead = cis(&Float::with_val(bits, &phi * nu));
            let den = Complex::with_val(bits, 1u32 - cis(&phi));
            let pref = Complex::with_val(bits, lead / den) * Complex::with_val(bits, (0, -1));
            let e = decay.exp();
            Ok(pref * e * sum / root)
        }
        Region::Uniform => {
            let geom = StokesGeometry::new(&phi, &Float::with_val(bits, 1u32), ctx)?;
            let arg = Complex::with_val(bits, &geom.c * Float::with_val(bits, &modz / 2u32).sqrt());
            let smooth = Complex::with_val(bits, erfc_complex(&arg, ctx)? / 2u32);
            let coeffs = b2k_all(&phi, &alpha, kmax, ctx)?;
            let sum = power_sum(&coeffs, &inv);
            let expo = decay + Complex::with_val(bits, (0, Float::with_val(bits, &phi * &modz)));
            let pref = Complex::with_val(bits, expo.exp() * Complex::with_val(bits, (0, -1)));
            Ok(smooth + pref * sum / root)
        }
    }
}

fn power_sum(coeffs: &[Complex], x: &Float) -> Complex {
    let bits = x.prec();
    let mut acc = Complex::with_val(bits, 0);
    let mut p = Float::with_val(bits, 1);
    for c in coeffs {
        acc += Complex::with_val(bits, c * &p);
        p *= x;
    }
    acc
}

/// Which remainder formula produced a [`RemainderEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RemainderMethod {
    Eq41,
    Eq42,
    LeadingAway,
    LeadingNear,
}

/// The two remainder expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HatVariant {
    /// Coefficients `A_2k`; fails near `theta = pi/2`.
    Eq41,
    /// Error-function smoothing plus `Bhat_2k`; uniform in `theta`.
    Eq42,
}

/// `(Khat, Lhat)` from an asymptotic formula, with the magnitude of the last
/// retained term as error estimate.
#[derive(Debug, Clone)]
pub struct RemainderEstimate {
    pub k_hat: Float,
    pub l_hat: Float,
    pub k_used: usize,
    pub method: RemainderMethod,
    pub err_estimate: f64,
}

fn check_theorem1_angle(arg: &VoigtArgument) -> Result<()> {
    let limit = std::f64::consts::FRAC_PI_2 - DELTA_T1 + ANGLE_SLACK;
    if arg.theta().to_f64() > limit {
        return Err(VoigtError::domain(format!(
            "theta/pi = {:.6} is within {:.2} pi of the Stokes line, where the A_2k expansion breaks down; use theorem2",
            arg.theta_over_pi(),
            DELTA_T1 / std::f64::consts::PI
        )));
    }
    Ok(())
}

/// Only the exponentially small part: `(Khat, Lhat)` from `k_terms` terms of
/// either remainder expansion.
pub fn hat_expansion(
    arg: &VoigtArgument,
    plan: &TruncationPlan,
    variant: HatVariant,
    k_terms: usize,
    ctx: &PrecisionContext,
) -> Result<RemainderEstimate> {
    check_k_terms(k_terms)?;
    if arg.r().is_zero() {
        return Err(VoigtError::Singular("remainder expansions need r > 0".into()));
    }
    let bits = ctx.bits();
    let kmax = k_terms - 1;
    let phi = arg.phi();
    let r = arg.r();
    let inv_r = Float::with_val(bits, r.recip_ref());
    let inv_r2 = Float::with_val(bits, inv_r.square_ref());
    let rot = cis(&Float::with_val(bits, phi * plan.m));
    let gauss = Float::with_val(bits, -Float::with_val(bits, r.square_ref())).exp();
    let root_2pi = (ctx.pi() * 2u32).sqrt();

    let (coeffs, mut total, pref, method) = match variant {
        HatVariant::Eq41 => {
            check_theorem1_angle(arg)?;
            let cos_theta = Float::with_val(bits, arg.theta().cos_ref());
            let pref = Float::with_val(bits, &gauss / root_2pi) / cos_theta;
            (a2k_all(phi, &plan.alpha, kmax, ctx)?, Complex::with_val(bits, 0), pref, RemainderMethod::Eq41)
        }
        HatVariant::Eq42 => {
            let geom = StokesGeometry::new(phi, r, ctx)?;
            let angle = Float::with_val(bits, phi * Float::with_val(bits, &plan.nu - &plan.alpha));
            let smooth = Complex::with_val(bits, cis(&angle) * &geom.e);
            let pref = Float::with_val(bits, &gauss / root_2pi);
            (bhat2k_all(phi, &plan.alpha, kmax, ctx)?, smooth, pref, RemainderMethod::Eq42)
        }
    };
    let mut scale = inv_r;
    let mut last = Complex::with_val(bits, 0);
    for c in &coeffs {
        last = Complex::with_val(bits, &rot * c) * &scale;
        total += &last;
        scale *= &inv_r2;
    }
    let value = Complex::with_val(bits, total * &pref);
    let err = abs(&last).to_f64() * pref.to_f64();
    Ok(RemainderEstimate {
        k_hat: Float::with_val(bits, value.real()),
        l_hat: Float::with_val(bits, -value.imag()),
        k_used: k_terms,
        method,
        err_estimate: err,
    })
}

fn compound(
    arg: &VoigtArgument,
    plan: &TruncationPlan,
    variant: HatVariant,
    k_terms: usize,
    method: Method,
    ctx: &PrecisionContext,
) -> Result<Evaluation> {
    let hat = hat_expansion(arg, plan, variant, k_terms, ctx)?;
    let (ks, ls) = algebraic_partial_sums(arg, plan.m, ctx)?;
    Ok(Evaluation { k: ks + hat.k_hat, l: ls + hat.l_hat, method, err_estimate: hat.err_estimate })
}

/// Optimally truncated algebraic sum plus the remainder expansion in `A_2k`,
/// for `0 <= theta <= pi/2 - DELTA_T1`.
pub fn theorem1(arg: &VoigtArgument, plan: &TruncationPlan, k_terms: usize, ctx: &PrecisionContext) -> Result<Evaluation> {
    compound(arg, plan, HatVariant::Eq41, k_terms, Method::Theorem1, ctx)
}

/// Optimally truncated algebraic sum plus the uniform remainder expansion,
/// for `0 <= theta <= pi/2`.
pub fn theorem2(arg: &VoigtArgument, plan: &TruncationPlan, k_terms: usize, ctx: &PrecisionContext) -> Result<Evaluation> {
    compound(arg, plan, HatVariant::Eq42, k_terms, Method::Theorem2, ctx)
}

/// The algebraic series alone, truncated after `m` terms; the first omitted
/// term is the error estimate.
pub fn algebraic(arg: &VoigtArgument, m: u32, ctx: &PrecisionContext) -> Result<Evaluation> {
    let (k, l) = algebraic_partial_sums(arg, m, ctx)?;
    let bits = ctx.bits();
    let next = Float::with_val(bits, pochhammer_half(m))
        / Float::with_val(bits, rug::ops::Pow::pow(arg.r().clone(), 2 * m + 1))
        / sqrt_pi(bits);
    Ok(Evaluation { k, l, method: Method::Algebraic, err_estimate: next.to_f64() })
}

/// Where the leading-order remainder formula is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Away,
    Near,
}

/// Leading behaviour of `(Khat, Lhat)`.
///
/// * `Away` (`theta <= pi/2 - DELTA_T1`):
///   `(-1)^m e^{-r^2} / (sqrt(2 pi) y) (cos 2m theta, sin 2m theta)`.
/// * `Near` (`phi <= PHI_NEAR_MAX`): the smoothing term plus
///   `r^{-1} [(4/3 - 2 alpha)(sin, cos) m phi +- (1/2 - 4 alpha/3 + alpha^2) phi (cos, sin) m phi]`,
///   all times `e^{-r^2} / sqrt(2 pi)`. This keeps only the first terms in
///   `phi` and is a diagnostic, not an accurate evaluator.
pub fn leading_remainder(
    arg: &VoigtArgument,
    plan: &TruncationPlan,
    regime: Regime,
    ctx: &PrecisionContext,
) -> Result<RemainderEstimate> {
    let bits = ctx.bits();
    let r = arg.r();
    if r.is_zero() {
        return Err(VoigtError::Singular("remainder formulas need r > 0".into()));
    }
    let gauss = Float::with_val(bits, -Float::with_val(bits, r.square_ref())).exp();
    let root_2pi = (ctx.pi() * 2u32).sqrt();
    let (k_hat, l_hat, method) = match regime {
        Regime::Away => {
            check_theorem1_angle(arg)?;
            let mut pref = Float::with_val(bits, &gauss / root_2pi) / arg.y();
            if plan.m % 2 == 1 {
                pref = -pref;
            }
            let angle = Float::with_val(bits, arg.theta() * (2 * plan.m));
            let (s, c) = angle.sin_cos(Float::new(bits));
            (Float::with_val(bits, &pref * c), pref * s, RemainderMethod::LeadingAway)
        }
        Regime::Near => {
            let phi = arg.phi();
            if phi.to_f64() > PHI_NEAR_MAX {
                return Err(VoigtError::domain(format!(
                    "phi = {:.4} is too far from the Stokes line for the near formula (needs phi <= {PHI_NEAR_MAX})",
                    phi.to_f64()
                )));
            }
            let geom = StokesGeometry::new(phi, r, ctx)?;
            let angle = Float::with_val(bits, phi * Float::with_val(bits, &plan.nu - &plan.alpha));
            let smooth = Complex::with_val(bits, cis(&angle) * &geom.e);
            let a = &plan.alpha;
            let q = Float::with_val(bits, 4u32) / 3u32 - Float::with_val(bits, a * 2u32);
            let p = Float::with_val(bits, 0.5f64) - Float::with_val(bits, a * 4u32) / 3u32 + Float::with_val(bits, a.square_ref());
            let mphi = Float::with_val(bits, phi * plan.m);
            let (s, c) = mphi.sin_cos(Float::new(bits));
            let p_phi = Float::with_val(bits, &p * phi);
            let inv_r = Float::with_val(bits, r.recip_ref());
            let k_corr = (Float::with_val(bits, &q * &s) + Float::with_val(bits, &p_phi * &c)) * &inv_r;
            let l_corr = (Float::with_val(bits, &q * &c) - Float::with_val(bits, &p_phi * &s)) * &inv_r;
            let pref = Float::with_val(bits, &gauss / root_2pi);
            let k_hat = Float::with_val(bits, smooth.real() + &k_corr) * &pref;
            let l_hat = (Float::with_val(bits, -smooth.imag()) + &l_corr) * &pref;
            (k_hat, l_hat, RemainderMethod::LeadingNear)
        }
    };
    let err = gauss.to_f64() / (root_2pi_f64() * r.to_f64().powi(2));
    Ok(RemainderEstimate { k_hat, l_hat, k_used: 1, method, err_estimate: err })
}

fn root_2pi_f64() -> f64 {
    (2.0 * std::f64::consts::PI).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{remainder_exact, voigt_exact_erfc};

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn polar(r: f64, frac: &str, c: &PrecisionContext) -> VoigtArgument {
        let f = crate::numerics::parse_real(frac, c).unwrap();
        VoigtArgument::from_polar_fraction(&c.real(r), &f, c).unwrap()
    }

    fn rel(a: &Float, b: &Float) -> f64 {
        (Float::with_val(a.prec(), a - b) / b).abs().to_f64()
    }

    #[test]
    fn truncation_examples() {
        let c = ctx();
        let p = optimal_truncation(&c.real(3.5), &c);
        assert_eq!((p.m, p.alpha.to_f64(), p.nu.to_f64()), (12, 0.25, 12.5));
        let p = optimal_truncation(&c.real(6.0), &c);
        assert_eq!((p.m, p.alpha.to_f64()), (36, 0.5));
        let p = optimal_truncation(&c.real(1.0), &c);
        assert_eq!((p.m, p.alpha.to_f64(), p.below_range), (1, 0.5, false));
        assert!(optimal_truncation(&c.real(0.5), &c).below_range);
    }

    #[test]
    fn partial_sums_single_term() {
        let c = ctx();
        let a = VoigtArgument::from_f64(0.0, 2.0, &c).unwrap();
        let (k, l) = algebraic_partial_sums(&a, 1, &c).unwrap();
        assert!((k.to_f64() - 1.0 / (2.0 * std::f64::consts::PI.sqrt())).abs() < 1e-16);
        assert!(l.is_zero());
        let a = VoigtArgument::from_f64(2.0, 0.0, &c).unwrap();
        let (k, l) = algebraic_partial_sums(&a, 1, &c).unwrap();
        assert!(k.abs() < 1e-40);
        assert!((l.to_f64() - 1.0 / (2.0 * std::f64::consts::PI.sqrt())).abs() < 1e-16);
    }

    #[test]
    fn partial_sum_forms_agree() {
        let c = ctx();
        let a = VoigtArgument::from_f64(2.5, 1.5, &c).unwrap();
        for m in [1, 5, 12] {
            let (k1, l1) = algebraic_partial_sums(&a, m, &c).unwrap();
            let (k2, l2) = algebraic_partial_sums_complex(&a, m, &c).unwrap();
            assert!(rel(&k1, &k2) < 1e-36 && rel(&l1, &l2) < 1e-36);
        }
    }

    #[test]
    fn table1_k0_rows() {
        let c = ctx();
        let a = polar(3.5, "0.1", &c);
        let plan = optimal_truncation(a.r(), &c);
        let e = hat_expansion(&a, &plan, HatVariant::Eq41, 1, &c).unwrap();
        assert!((e.k_hat.to_f64() / 1.77219153e-7 - 1.0).abs() < 1e-8);
        assert!((e.l_hat.to_f64() / 5.45424470e-7 - 1.0).abs() < 1e-8);
        let a = polar(3.5, "0.375", &c);
        let e = hat_expansion(&a, &plan, HatVariant::Eq42, 1, &c).unwrap();
        assert!((e.k_hat.to_f64() / -1.30341265e-6 - 1.0).abs() < 1e-8);
        assert!((e.l_hat.to_f64() / -7.12131744e-8 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn theorem1_refuses_near_stokes_line() {
        let c = ctx();
        let a = polar(6.0, "0.49", &c);
        let plan = optimal_truncation(a.r(), &c);
        assert!(matches!(theorem1(&a, &plan, 3, &c), Err(VoigtError::Domain(_))));
        let a = polar(6.0, "0.48", &c);
        assert!(theorem1(&a, &plan, 3, &c).is_ok());
    }

    #[test]
    fn theorem2_on_real_axis() {
        let c = ctx();
        let a = VoigtArgument::from_f64(5.0, 0.0, &c).unwrap();
        let plan = optimal_truncation(a.r(), &c);
        let t = theorem2(&a, &plan, 3, &c).unwrap();
        let exact = voigt_exact_erfc(&a, &c).unwrap();
        assert!(rel(&t.k, &exact.k) < 1e-25);
        assert!(rel(&t.l, &exact.l) < 1e-14);
    }

    #[test]
    fn k_terms_bounds() {
        let c = ctx();
        let a = polar(3.5, "0.1", &c);
        let plan = optimal_truncation(a.r(), &c);
        assert!(hat_expansion(&a, &plan, HatVariant::Eq41, 0, &c).is_err());
        assert!(hat_expansion(&a, &plan, HatVariant::Eq41, MAX_K_TERMS, &c).is_ok());
        assert!(matches!(
            hat_expansion(&a, &plan, HatVariant::Eq41, MAX_K_TERMS + 1, &c),
            Err(VoigtError::UnsupportedOrder { .. })
        ));
    }

    #[test]
    fn leading_away_matches_first_term() {
        let c = ctx();
        let a = polar(3.5, "0.1", &c);
        let plan = optimal_truncation(a.r(), &c);
        let lead = leading_remainder(&a, &plan, Regime::Away, &c).unwrap();
        let first = hat_expansion(&a, &plan, HatVariant::Eq41, 1, &c).unwrap();
        assert!(rel(&lead.k_hat, &first.k_hat) < 1e-35);
        assert!(rel(&lead.l_hat, &first.l_hat) < 1e-35);
        let exact = remainder_exact(&a, plan.m, &c).unwrap();
        assert!(rel(&lead.k_hat, &exact.k_hat) < 0.05);
    }

    #[test]
    fn leading_near_at_stokes_line() {
        let c = ctx();
        let a = VoigtArgument::from_f64(4.0, 0.0, &c).unwrap();
        let plan = optimal_truncation(a.r(), &c);
        let lead = leading_remainder(&a, &plan, Regime::Near, &c).unwrap();
        let expected = c.real(-16.0).exp();
        assert!(rel(&lead.k_hat, &expected) < 1e-35);
        assert!(leading_remainder(&polar(4.0, "0.1", &c), &plan, Regime::Near, &c).is_err());
    }

    #[test]
    fn terminant_on_stokes_line_is_half() {
        let c = ctx();
        let z = c.complex(-16.0, 0.0);
        let t = terminant_asymptotic(&z, &c.real(16.5), Region::Uniform, 3, &c).unwrap();
        assert!((t.real().to_f64() - 0.5).abs() < 1e-30);
        assert!(terminant_asymptotic(&z, &c.real(16.5), Region::Away, 3, &c).is_err());
    }
}
