//! Upper incomplete gamma function at half-integer order `1/2 - m`.
//!
//! Starts from `Gamma(1/2, z) = sqrt(pi) erfc(sqrt z)` and runs the recurrence
//! `Gamma(a, z) = (Gamma(a+1, z) - z^a e^{-z}) / a` downwards `m` times. The
//! recurrence cancels roughly `2|z| log10 e` digits, so it runs at a widened
//! precision and tracks a running absolute error bound; if the bound says the
//! requested digits were not delivered, it widens further and retries.

use rug::Complex;

use super::{abs, erfc_complex, log10_abs, sqrt_pi, PrecisionContext, LOG10_E};
use crate::error::{Result, VoigtError};

/// Largest `m` accepted by [`upper_incomplete_gamma_half`].
pub const GAMMA_HALF_ORDER_CAP: u32 = 200;

const MAX_ATTEMPTS: usize = 4;

/// `Gamma(1/2 - m, z)` with the principal branch of `z^{1/2 - m}`.
pub fn upper_incomplete_gamma_half(m: u32, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let root = Complex::with_val(z.prec().0.max(ctx.bits()), z.sqrt_ref());
    upper_incomplete_gamma_half_from_root(m, &root, ctx)
}

/// `Gamma(1/2 - m, s^2)` where the caller fixes the root `s` (with
/// `Re s >= 0`), so that `z^{1/2} = s` even on the negative real axis.
pub fn upper_incomplete_gamma_half_from_root(
    m: u32,
    s: &Complex,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    if m > GAMMA_HALF_ORDER_CAP {
        return Err(VoigtError::UnsupportedOrder { order: m as usize, max: GAMMA_HALF_ORDER_CAP as usize });
    }
    if s.real().is_sign_negative() && !s.real().is_zero() {
        return Err(VoigtError::domain("square root must lie in the closed right half-plane"));
    }
    let modz = abs(s).square().to_f64();
    if s.real().is_zero() && s.imag().is_zero() {
        if m == 0 {
            return Ok(Complex::with_val(ctx.bits(), sqrt_pi(ctx.bits())));
        }
        return Err(VoigtError::Singular(format!("Gamma(1/2 - {m}, 0) is infinite")));
    }

    let mut extra = (2.0 * modz * LOG10_E).ceil() as u32 + 10;
    let mut attained = 0.0;
    for _ in 0..MAX_ATTEMPTS {
        let work = ctx.widened(extra);
        let (value, digits) = downward(m, s, &work)?;
        attained = digits;
        if digits >= ctx.digits() as f64 {
            return Ok(ctx.round_complex(&value));
        }
        extra += (ctx.digits() as f64 - digits).ceil() as u32 + 10;
    }
    Err(VoigtError::Precision { requested: ctx.digits(), attained })
}

/// Runs the recurrence at the precision of `work` and returns the value and
/// the number of correct decimal digits the error bound vouches for.
fn downward(m: u32, s: &Complex, work: &PrecisionContext) -> Result<(Complex, f64)> {
    let bits = work.bits();
    let s = Complex::with_val(bits, s);
    let z = Complex::with_val(bits, &s * &s);
    let base = erfc_complex(&s, work)?;
    let mut g = Complex::with_val(bits, base * sqrt_pi(bits));
    let e_neg_z = Complex::with_val(bits, -&z).exp();
    let inv_z = Complex::with_val(bits, z.recip_ref());

    // error bookkeeping in log-free doubles of the magnitudes relative to a
    // common scale, to stay clear of f64 overflow
    let scale = log10_abs(&g);
    let eps = 2f64.powi(-(bits as i32) + 3);
    let rel = |v: &Complex| 10f64.powf(log10_abs(v) - scale);
    let mut err = rel(&g) * eps * 4.0;

    let mut power = s.clone(); // z^{1/2 - j}, starting at j = 0
    for j in 1..=m {
        power *= &inv_z;
        let a = 0.5 - j as f64;
        let term = Complex::with_val(bits, &power * &e_neg_z);
        err = (err + rel(&term) * eps * 2.0) / a.abs();
        g -= &term;
        g /= a;
        err += rel(&g) * eps;
    }
    let value_mag = rel(&g);
    let digits = if err == 0.0 { work.digits() as f64 } else { (value_mag / err).log10() };
    Ok((g, digits))
}

/// Applies the forward recurrence `Gamma(a+1,z) = a Gamma(a,z) + z^a e^{-z}`
/// `m` times starting from `Gamma(1/2 - m, s^2)`; the result should be
/// `Gamma(1/2, s^2)`.
#[cfg(test)]
pub(crate) fn forward(m: u32, s: &Complex, start: &Complex, bits: u32) -> Complex {
    use rug::ops::Pow;
    let s = Complex::with_val(bits, s);
    let z = Complex::with_val(bits, &s * &s);
    let e_neg_z = Complex::with_val(bits, -&z).exp();
    let mut g = Complex::with_val(bits, start);
    for j in (1..=m).rev() {
        let a = 0.5 - j as f64;
        // z^{a} = s^{1 - 2j}
        let power = s.clone().pow(1 - 2 * j as i32);
        g *= a;
        g += power * &e_neg_z;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_case_is_sqrt_pi_erfc() {
        let ctx = PrecisionContext::default();
        let z = ctx.complex(2.25, 0.0);
        let g = upper_incomplete_gamma_half(0, &z, &ctx).unwrap();
        let expected = sqrt_pi(ctx.bits()) * ctx.real(1.5).erfc();
        assert!((g.real().clone() - expected).abs() < 1e-40);
    }

    #[test]
    fn order_one_closed_form() {
        // Gamma(-1/2, x) = 2 x^{-1/2} e^{-x} - 2 sqrt(pi) erfc(sqrt x)
        let ctx = PrecisionContext::default();
        let x = ctx.real(3.0);
        let g = upper_incomplete_gamma_half(1, &ctx.complex(3.0, 0.0), &ctx).unwrap();
        let sx = x.clone().sqrt();
        let expected = 2u32 * (-x.clone()).exp() / sx.clone() - 2u32 * sqrt_pi(ctx.bits()) * sx.erfc();
        let rel = ((g.real().clone() - &expected) / &expected).abs().to_f64();
        assert!(rel < 1e-38, "rel {rel}");
    }

    #[test]
    fn round_trip_m36() {
        let ctx = PrecisionContext::default();
        let bits = ctx.bits();
        // |z| = 36 at an angle inside the sector
        let s = Complex::with_val(bits, (6, 0)) * super::super::cis(&(ctx.pi() * 0.3));
        let g = upper_incomplete_gamma_half_from_root(36, &s, &ctx).unwrap();
        let back = forward(36, &s, &g, super::super::digits_to_bits(120));
        let start = Complex::with_val(bits, erfc_complex(&s, &ctx).unwrap() * sqrt_pi(bits));
        let d = Complex::with_val(bits, &back - &start);
        let rel = (abs(&d) / abs(&start)).to_f64();
        assert!(rel < 10f64.powi(-(40 - 35)), "rel {rel}");
    }

    #[test]
    fn negative_real_axis_uses_given_root() {
        let ctx = PrecisionContext::default();
        let s = ctx.complex(0.0, 3.0);
        let g = upper_incomplete_gamma_half_from_root(4, &s, &ctx).unwrap();
        let w = upper_incomplete_gamma_half(4, &ctx.complex(-9.0, 0.0), &ctx).unwrap();
        let d = Complex::with_val(ctx.bits(), &g - &w);
        assert!((abs(&d) / abs(&g)).to_f64() < 1e-38);
    }

    #[test]
    fn errors() {
        let ctx = PrecisionContext::default();
        let z = ctx.complex(1.0, 0.0);
        assert!(matches!(
            upper_incomplete_gamma_half(201, &z, &ctx),
            Err(VoigtError::UnsupportedOrder { .. })
        ));
        assert!(matches!(
            upper_incomplete_gamma_half(3, &ctx.complex(0.0, 0.0), &ctx),
            Err(VoigtError::Singular(_))
        ));
    }
}
