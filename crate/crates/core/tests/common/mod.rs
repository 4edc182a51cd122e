#![allow(dead_code)]

use rug::{Complex, Float};
use voigt::numerics::PrecisionContext;

pub fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

/// `modulus * e^{i pi angle_over_pi}`.
pub fn polar(modulus: f64, angle_over_pi: f64, ctx: &PrecisionContext) -> Complex {
    let t = ctx.pi() * ctx.real(angle_over_pi);
    let (s, c) = t.sin_cos(Float::new(ctx.bits()));
    Complex::with_val(ctx.bits(), (c * modulus, s * modulus))
}

pub fn cabs(z: &Complex) -> f64 {
    z.clone().abs().real().to_f64()
}

pub fn rel_c(a: &Complex, b: &Complex) -> f64 {
    cabs(&Complex::with_val(a.prec().0, a - b)) / cabs(b)
}

pub fn diff(a: &Float, b: &Float) -> f64 {
    Float::with_val(a.prec(), a - b).abs().to_f64()
}
