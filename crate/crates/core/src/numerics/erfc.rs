//! Complementary error function of a complex argument.
//!
//! Two evaluation paths:
//!
//! * moderate `|z|`: the Maclaurin series of `erf`, run at a working
//!   precision widened by the number of digits the series loses to
//!   cancellation, `(|z|^2 + Re z^2) log10 e`;
//! * large `|z|` in the right half-plane: the asymptotic series
//!   `e^{-z^2}/sqrt(pi) * sum (-1)^k (1/2)_k z^{-2k-1}` summed to its smallest
//!   term. Large means `|z|^2` exceeds the context's digit budget, so the
//!   exponentially small part the series cannot see is below the requested
//!   accuracy.
//!
//! The left half-plane is reached through `erfc(z) = 2 - erfc(-z)`.

use rug::{Complex, Float};

use super::{abs, digits_to_bits, norm_sqr, sqrt_pi, PrecisionContext, LOG10_E};
use crate::error::{Result, VoigtError};

/// Hard ceiling on the working precision the series path may request.
const MAX_WORKING_DIGITS: f64 = 20_000.0;

/// `erfc z` to the context precision.
pub fn erfc_complex(z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    check_finite(z)?;
    let bits = ctx.bits();
    if uses_asymptotic(z, ctx) {
        if z.real().is_sign_negative() {
            let neg = Complex::with_val(bits + 16, -z);
            let r = erfc_complex(&neg, ctx)?;
            return Ok(Complex::with_val(bits, 2u32 - r));
        }
        let scaled = asymptotic_scaled(z, bits + 16);
        let e = (-Complex::with_val(bits + 16, z * z)).exp();
        return Ok(Complex::with_val(bits, scaled * e));
    }
    let wp = series_working_digits(z, ctx)?;
    let erf = erf_maclaurin(z, digits_to_bits(wp));
    Ok(Complex::with_val(bits, 1u32 - erf))
}

/// The scaled function `e^{z^2} erfc z`. For `z = y + i x` in the first
/// quadrant this is `K(x,y) - i L(x,y)`.
pub fn erfcx_complex(z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    check_finite(z)?;
    let bits = ctx.bits();
    if uses_asymptotic(z, ctx) {
        if z.real().is_sign_negative() {
            // e^{z^2} erfc z = 2 e^{z^2} - e^{z^2} erfc(-z)
            let neg = Complex::with_val(bits + 16, -z);
            let r = asymptotic_scaled(&neg, bits + 16);
            let e = Complex::with_val(bits + 16, z * z).exp();
            return Ok(Complex::with_val(bits, 2u32 * e - r));
        }
        return Ok(Complex::with_val(bits, asymptotic_scaled(z, bits + 16)));
    }
    let wp = series_working_digits(z, ctx)?;
    let wbits = digits_to_bits(wp);
    let erf = erf_maclaurin(z, wbits);
    let e = Complex::with_val(wbits, z * z).exp();
    Ok(Complex::with_val(bits, (1u32 - erf) * e))
}

/// Partial sum of the large-argument expansion of `erfc`,
/// `e^{-z^2}/sqrt(pi) * sum_{k<n} (-1)^k (1/2)_k z^{-2k-1}`, at the precision
/// of `z`.
pub fn erfc_asymptotic(z: &Complex, n_terms: u32) -> Result<Complex> {
    check_finite(z)?;
    let prec = z.prec().0;
    let r = abs(z);
    if r < 2 {
        return Err(VoigtError::domain(format!(
            "erfc_asymptotic needs |z| >= 2, got {}",
            r.to_f64()
        )));
    }
    let a = Float::with_val(prec, z.arg_ref()).abs().to_f64();
    if a >= 0.75 * std::f64::consts::PI {
        return Err(VoigtError::domain(format!(
            "erfc_asymptotic needs |arg z| < 3pi/4, got {a}"
        )));
    }
    let inv_z2 = Complex::with_val(prec, z * z).recip();
    let mut term = Complex::with_val(prec, z.recip_ref());
    let mut sum = Complex::with_val(prec, 0);
    for k in 0..n_terms {
        sum += &term;
        // next term: multiply by -(k + 1/2) / z^2
        term *= &inv_z2;
        term *= -(k as f64 + 0.5);
    }
    let e = (-Complex::with_val(prec, z * z)).exp();
    Ok(sum * e / sqrt_pi(prec))
}

fn check_finite(z: &Complex) -> Result<()> {
    if z.real().is_finite() && z.imag().is_finite() {
        Ok(())
    } else {
        Err(VoigtError::domain("erfc of a non-finite argument"))
    }
}

fn uses_asymptotic(z: &Complex, ctx: &PrecisionContext) -> bool {
    let n2 = norm_sqr(z).to_f64();
    let ln10 = std::f64::consts::LN_10;
    n2 > ctx.digits() as f64 * ln10 + 0.5 * n2.max(1.0).ln() + 10.0
}

/// `e^{z^2} erfc z` from the asymptotic series, `Re z >= 0`, summed until the
/// terms stop decreasing or drop below the working precision.
fn asymptotic_scaled(z: &Complex, bits: u32) -> Complex {
    let inv_z2 = Complex::with_val(bits, z * z).recip();
    let mut term = Complex::with_val(bits, z.recip_ref());
    let mut sum = term.clone();
    let kmax = norm_sqr(z).to_f64().floor() as u64;
    let mut prev = abs(&term);
    for k in 0..kmax {
        term *= &inv_z2;
        term *= -(k as f64 + 0.5);
        let mag = abs(&term);
        if mag > prev {
            break;
        }
        sum += &term;
        let scale = Float::with_val(bits, abs(&sum) >> bits);
        if mag < scale {
            break;
        }
        prev = mag;
    }
    sum / sqrt_pi(bits)
}

/// Digits needed so that `1 - erf(z)` survives the series' cancellation.
fn series_working_digits(z: &Complex, ctx: &PrecisionContext) -> Result<u32> {
    let n2 = norm_sqr(z).to_f64();
    let re_z2 = (z.real().clone().square() - z.imag().clone().square()).to_f64();
    let loss = (n2 + re_z2).max(0.0) * LOG10_E + (1.0 + n2.sqrt()).log10();
    let wp = ctx.digits() as f64 + loss.ceil() + 10.0;
    if wp > MAX_WORKING_DIGITS {
        return Err(VoigtError::Precision {
            requested: ctx.digits(),
            attained: (MAX_WORKING_DIGITS - loss).max(0.0),
        });
    }
    Ok(wp as u32)
}

/// `erf z = 2/sqrt(pi) * sum_n (-1)^n z^{2n+1} / (n! (2n+1))` at `bits`.
fn erf_maclaurin(z: &Complex, bits: u32) -> Complex {
    let z = Complex::with_val(bits, z);
    if z.real().is_zero() && z.imag().is_zero() {
        return Complex::with_val(bits, 0);
    }
    let neg_z2 = -Complex::with_val(bits, &z * &z);
    let n2 = norm_sqr(&z).to_f64();
    let mut term = z.clone();
    let mut sum = z.clone();
    let mut n: u64 = 0;
    loop {
        n += 1;
        term *= &neg_z2;
        term /= n;
        let contrib = Complex::with_val(bits, &term / (2 * n + 1));
        sum += &contrib;
        // past n >= 2|z|^2 the terms shrink at least geometrically by 1/2,
        // so the tail is bounded by the last contribution
        if n as f64 >= 2.0 * n2 {
            let tol = Float::with_val(bits, abs(&sum) >> bits);
            if abs(&contrib) <= tol {
                break;
            }
        }
    }
    sum * Float::with_val(bits, 2) / sqrt_pi(bits)
}
