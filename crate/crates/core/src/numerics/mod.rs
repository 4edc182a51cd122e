//! Precision-configurable arithmetic and the special-function primitives
//! (complementary error function, incomplete gamma, double-exponential
//! quadrature) that the oracle and expansion layers are built on.
//!
//! Reals are [`rug::Float`] and complex values are [`rug::Complex`]; every
//! routine takes an immutable [`PrecisionContext`] that fixes the number of
//! decimal digits the caller wants back. Routines that lose digits to
//! cancellation widen their working precision internally and round the
//! result back to the context precision.

mod erfc;
mod gamma;
mod quad;

pub use erfc::{erfc_asymptotic, erfc_complex, erfcx_complex};
pub use gamma::{upper_incomplete_gamma_half, upper_incomplete_gamma_half_from_root, GAMMA_HALF_ORDER_CAP};
pub use quad::{
    integrate_finite, integrate_semi_infinite, integrate_semi_infinite_from, QuadHints,
    QuadratureResult,
};

use rug::float::Constant;
use rug::{Complex, Float, Rational};

use crate::error::{Result, VoigtError};

/// Complex numbers at context precision.
pub type ComplexValue = Complex;

pub const DEFAULT_DIGITS: u32 = 40;
pub const MIN_DIGITS: u32 = 16;

const LOG2_10: f64 = std::f64::consts::LOG2_10;
pub(crate) const LOG10_E: f64 = std::f64::consts::LOG10_E;

/// Requested accuracy for a computation: decimal significant digits and the
/// absolute tolerance handed to the quadrature engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionContext {
    digits: u32,
    quad_tol: f64,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::new(DEFAULT_DIGITS).expect("default digits are valid")
    }
}

impl PrecisionContext {
    /// Context with `digits` significant digits and quadrature tolerance
    /// `10^(6 - digits)`.
    pub fn new(digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(VoigtError::InvalidContext(format!(
                "digits must be at least {MIN_DIGITS}, got {digits}"
            )));
        }
        Ok(Self { digits, quad_tol: 10f64.powi(6 - digits as i32) })
    }

    pub fn with_quad_tol(mut self, quad_tol: f64) -> Result<Self> {
        if !(quad_tol > 0.0 && quad_tol.is_finite()) {
            return Err(VoigtError::InvalidContext(format!("quad_tol must be positive, got {quad_tol}")));
        }
        self.quad_tol = quad_tol;
        Ok(self)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn quad_tol(&self) -> f64 {
        self.quad_tol
    }

    /// Binary precision used for values at this context, including a few
    /// guard bits.
    pub fn bits(&self) -> u32 {
        digits_to_bits(self.digits)
    }

    /// A context carrying `extra` more digits. The quadrature tolerance
    /// tightens accordingly.
    pub fn widened(&self, extra: u32) -> Self {
        let digits = self.digits + extra;
        Self { digits, quad_tol: self.quad_tol * 10f64.powi(-(extra as i32)) }
    }

    /// Relative accuracy promised for well-conditioned results.
    pub fn epsilon(&self) -> f64 {
        10f64.powi(1 - self.digits as i32)
    }

    pub fn real(&self, v: f64) -> Float {
        Float::with_val(self.bits(), v)
    }

    pub fn complex(&self, re: f64, im: f64) -> Complex {
        Complex::with_val(self.bits(), (re, im))
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits(), Constant::Pi)
    }

    /// Rounds a real to this context's precision.
    pub fn round(&self, v: &Float) -> Float {
        Float::with_val(self.bits(), v)
    }

    pub fn round_complex(&self, z: &Complex) -> Complex {
        Complex::with_val(self.bits(), z)
    }
}

pub(crate) fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32 + 8
}

/// Parses a decimal string (or `pi`, `pi/2`-style fractions of pi) at the
/// context's precision.
pub fn parse_real(text: &str, ctx: &PrecisionContext) -> Result<Float> {
    let t = text.trim();
    let lower = t.to_ascii_lowercase();
    if let Some(rest) = lower.strip_prefix("pi") {
        let mut v = ctx.pi();
        if let Some(den) = rest.strip_prefix('/') {
            let d: u32 = den
                .parse()
                .map_err(|_| VoigtError::domain(format!("cannot parse real '{text}'")))?;
            v /= d;
        } else if !rest.is_empty() {
            return Err(VoigtError::domain(format!("cannot parse real '{text}'")));
        }
        return Ok(v);
    }
    let parsed = Float::parse(t).map_err(|_| VoigtError::domain(format!("cannot parse real '{text}'")))?;
    Ok(Float::with_val(ctx.bits(), parsed))
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`; the empty product is 1.
pub fn pochhammer(a: &Float, k: u32) -> Float {
    let mut acc = Float::with_val(a.prec(), 1);
    let mut term = a.clone();
    for _ in 0..k {
        acc *= &term;
        term += 1u32;
    }
    acc
}

/// `(1/2)_k` as an exact rational.
pub fn pochhammer_half(k: u32) -> Rational {
    let mut acc = Rational::from(1);
    for j in 0..k {
        acc *= Rational::from((2 * j + 1, 2));
    }
    acc
}

pub(crate) fn abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

#[allow(dead_code)]
pub(crate) fn arg(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.arg_ref())
}

pub(crate) fn norm_sqr(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.norm_ref())
}

/// log10 |z| as a double, `-inf` for zero.
pub(crate) fn log10_abs(z: &Complex) -> f64 {
    let a = abs(z);
    if a.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = a.to_f64_exp();
    m.abs().log10() + e as f64 * std::f64::consts::LOG10_2
}

#[allow(dead_code)]
pub(crate) fn log10_abs_real(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log10() + e as f64 * std::f64::consts::LOG10_2
}

/// `e^{i t}` at the precision of `t`.
pub(crate) fn cis(t: &Float) -> Complex {
    let prec = t.prec();
    let (s, c) = t.clone().sin_cos(Float::new(prec));
    Complex::with_val(prec, (c, s))
}

pub(crate) fn sqrt_pi(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi).sqrt()
}
