//! Reference values of the Voigt functions and of their exponentially small
//! remainders, computed to the context precision by routes that share no
//! code with the asymptotic expansions.
//!
//! * `K - iL = e^{w^2} erfc w` with `w = y + ix` ([`voigt_exact_erfc`]);
//! * the Fourier-transform integrals `int_0^inf e^{-yt - t^2/4} (cos, sin)(xt) dt`
//!   and the convolution integrals over the real line ([`voigt_quadrature`],
//!   [`voigt_convolution`]);
//! * the remainder `Khat - i Lhat = 2 e^{w^2} T_{m+1/2}(w^2)` after `m` terms of
//!   the algebraic series, either from the Laplace-type integral of the
//!   terminant (no cancellation) or from the incomplete gamma function at a
//!   widened precision ([`remainder_exact`]).

use rug::{Complex, Float};
use serde::Serialize;

use crate::error::{Result, VoigtError};
use crate::numerics::{
    abs, cis, erfcx_complex, integrate_finite, integrate_semi_infinite, pochhammer_half, sqrt_pi,
    upper_incomplete_gamma_half, upper_incomplete_gamma_half_from_root, PrecisionContext, QuadHints,
};

/// Angular collar (radians of `theta`) below `pi/2` inside which the
/// remainder switches from the terminant integral to the incomplete gamma
/// route: the integrand's pole at `tau = e^{-i phi}` is then within `0.1` of
/// the saddle.
pub const EPS_POLE: f64 = 0.05;

/// A first-quadrant point `(x, y)` with its polar data: `w = y + ix`,
/// `r = |w|`, `theta = arctan(x/y)` and `phi = pi - 2 theta`.
#[derive(Debug, Clone)]
pub struct VoigtArgument {
    x: Float,
    y: Float,
    w: Complex,
    r: Float,
    theta: Float,
    phi: Float,
}

impl VoigtArgument {
    pub fn new(x: &Float, y: &Float, ctx: &PrecisionContext) -> Result<Self> {
        if x.is_sign_negative() && !x.is_zero() || y.is_sign_negative() && !y.is_zero() {
            return Err(VoigtError::domain("VoigtArgument needs x >= 0 and y >= 0; reduce first"));
        }
        let bits = ctx.bits();
        let x = Float::with_val(bits, x);
        let y = Float::with_val(bits, y);
        let theta = Float::with_val(bits, x.atan2_ref(&y));
        Ok(Self::assemble(x, y, theta, ctx))
    }

    pub fn from_f64(x: f64, y: f64, ctx: &PrecisionContext) -> Result<Self> {
        Self::new(&ctx.real(x), &ctx.real(y), ctx)
    }

    /// Point at modulus `r` and angle `theta in [0, pi/2]`; `theta` is kept
    /// exactly as given.
    pub fn from_polar(r: &Float, theta: &Float, ctx: &PrecisionContext) -> Result<Self> {
        let bits = ctx.bits();
        let half_pi = ctx.pi() / 2u32;
        if r.is_sign_negative() && !r.is_zero() || theta.is_sign_negative() && !theta.is_zero() || *theta > half_pi {
            return Err(VoigtError::domain("polar point needs r >= 0 and 0 <= theta <= pi/2"));
        }
        let theta = Float::with_val(bits, theta);
        let (s, c) = theta.clone().sin_cos(Float::new(bits));
        let x = Float::with_val(bits, r * s);
        let y = Float::with_val(bits, r * c);
        Ok(Self::assemble(x, y, theta, ctx))
    }

    /// Point at modulus `r` and angle `theta = fraction * pi`.
    pub fn from_polar_fraction(r: &Float, theta_over_pi: &Float, ctx: &PrecisionContext) -> Result<Self> {
        let theta = Float::with_val(ctx.bits(), theta_over_pi * ctx.pi());
        Self::from_polar(r, &theta, ctx)
    }

    fn assemble(x: Float, y: Float, theta: Float, ctx: &PrecisionContext) -> Self {
        let bits = ctx.bits();
        let w = Complex::with_val(bits, (&y, &x));
        let r = Float::with_val(bits, x.hypot_ref(&y));
        let mut phi = ctx.pi() - Float::with_val(bits, &theta * 2u32);
        // theta = pi/2 built from a rounded fraction of pi
        if phi.is_sign_negative() {
            phi = Float::new(bits);
        }
        Self { x, y, w, r, theta, phi }
    }

    pub fn x(&self) -> &Float {
        &self.x
    }
    pub fn y(&self) -> &Float {
        &self.y
    }
    /// `w = y + ix`.
    pub fn w(&self) -> &Complex {
        &self.w
    }
    pub fn r(&self) -> &Float {
        &self.r
    }
    pub fn theta(&self) -> &Float {
        &self.theta
    }
    pub fn phi(&self) -> &Float {
        &self.phi
    }
    pub fn theta_over_pi(&self) -> f64 {
        (self.theta.clone() / Float::with_val(self.theta.prec(), rug::float::Constant::Pi)).to_f64()
    }
}

/// How a value of `(K, L)` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    OracleErfc,
    OracleQuadrature,
    Algebraic,
    Theorem1,
    Theorem2,
    Leading,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::OracleErfc => "oracle-erfc",
            Method::OracleQuadrature => "oracle-quadrature",
            Method::Algebraic => "algebraic",
            Method::Theorem1 => "theorem1",
            Method::Theorem2 => "theorem2",
            Method::Leading => "leading",
        }
    }
}

/// A value of `(K, L)` with its provenance and an absolute error estimate.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub k: Float,
    pub l: Float,
    pub method: Method,
    pub err_estimate: f64,
}

/// Maps an arbitrary real point to the first quadrant. The returned signs
/// restore the original values: `K(x,y) = sign_k K(|x|,|y|)` and
/// `L(x,y) = sign_l L(|x|,|y|)`.
pub fn reduce_to_first_quadrant(x: &Float, y: &Float, ctx: &PrecisionContext) -> Result<(VoigtArgument, i8, i8)> {
    let sign_k = if y.is_sign_negative() && !y.is_zero() { -1 } else { 1 };
    let sign_l = if x.is_sign_negative() && !x.is_zero() { -1 } else { 1 };
    let ax = Float::with_val(ctx.bits(), x.abs_ref());
    let ay = Float::with_val(ctx.bits(), y.abs_ref());
    Ok((VoigtArgument::new(&ax, &ay, ctx)?, sign_k, sign_l))
}

/// `K(x,y)` and `L(x,y)` anywhere in the real plane through the erfc route.
pub fn voigt(x: &Float, y: &Float, ctx: &PrecisionContext) -> Result<Evaluation> {
    let (arg, sk, sl) = reduce_to_first_quadrant(x, y, ctx)?;
    let mut e = voigt_exact_erfc(&arg, ctx)?;
    if sk < 0 {
        e.k = -e.k;
    }
    if sl < 0 {
        e.l = -e.l;
    }
    Ok(e)
}

/// `K - iL = e^{w^2} erfc w`. The edges use the closed forms
/// `K(x,0) = e^{-x^2}` and `L(0,y) = 0`.
pub fn voigt_exact_erfc(arg: &VoigtArgument, ctx: &PrecisionContext) -> Result<Evaluation> {
    let bits = ctx.bits();
    let value = erfcx_complex(arg.w(), ctx)?;
    let mut k = Float::with_val(bits, value.real());
    let mut l = Float::with_val(bits, -value.imag());
    if arg.y().is_zero() {
        k = Float::with_val(bits, -arg.x().clone().square()).exp();
    }
    if arg.x().is_zero() {
        l = Float::new(bits);
    }
    let err_estimate = ctx.epsilon() * abs(&value).to_f64();
    Ok(Evaluation { k, l, method: Method::OracleErfc, err_estimate })
}

/// `K, L` by numerical integration. For `y > 0` this uses the Fourier pair
/// `(K + iL) = pi^{-1/2} int_0^inf e^{-yt - t^2/4 + ixt} dt`; on `y = 0`
/// it uses the convolution integral for `K` and Dawson's integral
/// `L(x,0) = 2/sqrt(pi) int_0^x e^{t^2 - x^2} dt`.
pub fn voigt_quadrature(arg: &VoigtArgument, ctx: &PrecisionContext) -> Result<Evaluation> {
    if arg.y().is_zero() {
        let k = voigt_convolution(arg, ctx)?;
        let (l, lerr) = dawson_route(arg.x(), ctx)?;
        return Ok(Evaluation { k: k.k, l, method: Method::OracleQuadrature, err_estimate: k.err_estimate + lerr });
    }
    let bits = ctx.bits();
    let x = arg.x().clone();
    let y = arg.y().clone();

    // e^{-T^2/4} 2/T bounds the discarded tail
    let target = (ctx.quad_tol() * 1e-3).ln().abs();
    let mut t_end = 2.0 * target.sqrt();
    while (-t_end * t_end / 4.0) + (2.0 / t_end).ln() > -target {
        t_end += 0.5;
    }
    let xf = x.to_f64();
    let panel = if xf > 0.0 { (std::f64::consts::PI / xf).min(2.0) } else { 2.0 };
    let panels = (t_end / panel).ceil() as usize;
    let sub = ctx.with_quad_tol(ctx.quad_tol() / panels as f64)?;
    let f = |t: &Float| {
        let re = -Float::with_val(bits, &y * t) - Float::with_val(bits, t.clone().square() / 4u32);
        let im = Float::with_val(bits, &x * t);
        Complex::with_val(bits, (re, im)).exp()
    };
    let mut total = Complex::with_val(bits, 0);
    let mut err = 0.0;
    for j in 0..panels {
        let a = Float::with_val(bits, j as f64 * panel);
        let b = Float::with_val(bits, ((j + 1) as f64 * panel).min(t_end.max(panel * panels as f64)));
        let part = integrate_finite(f, &a, &b, &sub)?;
        total += &part.value;
        err += part.err_estimate;
    }
    let sp = sqrt_pi(bits);
    let k = Float::with_val(bits, total.real() / &sp);
    let l = Float::with_val(bits, total.imag() / &sp);
    Ok(Evaluation { k, l, method: Method::OracleQuadrature, err_estimate: err / sp.to_f64() })
}

/// The convolution integrals in the form
/// `K = 1/pi int e^{-(x - yt)^2} dt/(1+t^2)`,
/// `L = 1/pi int e^{-(x - yt)^2} t dt/(1+t^2)` over the real line, folded
/// onto `t >= 0`. `L` needs `y > 0`; on `y = 0` it is reported as NaN.
pub fn voigt_convolution(arg: &VoigtArgument, ctx: &PrecisionContext) -> Result<Evaluation> {
    let bits = ctx.bits();
    let x = arg.x().clone();
    let y = arg.y().clone();
    let yf = y.to_f64();
    let mut breakpoints = vec![1.0];
    let mut tail_scale = 1.0;
    if yf > 0.0 {
        let c = arg.x().to_f64() / yf;
        breakpoints.extend([c, c + 4.0 / yf]);
        tail_scale = (1.0 / yf).min(1.0);
    }
    let hints = QuadHints { breakpoints, poles: vec![(0.0, 1.0)], tail_scale: Some(tail_scale) };
    let gauss = |t: &Float, sign: i32| {
        let d = Float::with_val(bits, &x - Float::with_val(bits, &y * t) * sign);
        (-d.square()).exp()
    };
    let kf = |t: &Float| {
        let den = Float::with_val(bits, t.clone().square() + 1u32);
        Complex::with_val(bits, (gauss(t, 1) + gauss(t, -1)) / den)
    };
    let kr = integrate_semi_infinite(kf, &hints, ctx)?;
    let pi = ctx.pi();
    let k = Float::with_val(bits, kr.value.real() / &pi);
    let (l, lerr) = if yf > 0.0 {
        let lf = |t: &Float| {
            let den = Float::with_val(bits, t.clone().square() + 1u32);
            Complex::with_val(bits, (gauss(t, 1) - gauss(t, -1)) * t / den)
        };
        let lr = integrate_semi_infinite(lf, &hints, ctx)?;
        (Float::with_val(bits, lr.value.real() / &pi), lr.err_estimate)
    } else {
        (Float::with_val(bits, f64::NAN), 0.0)
    };
    let err = (kr.err_estimate + lerr) / std::f64::consts::PI;
    Ok(Evaluation { k, l, method: Method::OracleQuadrature, err_estimate: err })
}

fn dawson_route(x: &Float, ctx: &PrecisionContext) -> Result<(Float, f64)> {
    let bits = ctx.bits();
    let x2 = Float::with_val(bits, x.clone().square());
    let f = |t: &Float| Complex::with_val(bits, (Float::with_val(bits, t.clone().square()) - &x2).exp());
    let r = integrate_finite(f, &Float::new(bits), x, ctx)?;
    let scale = Float::with_val(bits, 2u32) / sqrt_pi(bits);
    let l = Float::with_val(bits, r.value.real() * &scale);
    Ok((l, r.err_estimate * scale.to_f64()))
}

/// Which computation [`remainder_exact_with`] should use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RemainderRoute {
    /// The terminant integral away from `theta = pi/2`, otherwise the
    /// incomplete gamma function.
    Auto,
    Quadrature,
    IncompleteGamma,
}

/// The exponentially small part `(Khat, Lhat)` left after `m` terms of the
/// algebraic expansion.
#[derive(Debug, Clone)]
pub struct Remainder {
    pub k_hat: Float,
    pub l_hat: Float,
    pub route: RemainderRoute,
    pub err_estimate: f64,
}

/// `Khat - i Lhat = 2 e^{w^2} T_{m+1/2}(w^2)`, computed without subtracting
/// the partial sum from `K - iL`.
pub fn remainder_exact(arg: &VoigtArgument, m: u32, ctx: &PrecisionContext) -> Result<Remainder> {
    remainder_exact_with(arg, m, RemainderRoute::Auto, ctx)
}

pub fn remainder_exact_with(
    arg: &VoigtArgument,
    m: u32,
    route: RemainderRoute,
    ctx: &PrecisionContext,
) -> Result<Remainder> {
    if m < 1 {
        return Err(VoigtError::domain("remainder needs m >= 1"));
    }
    if arg.r().is_zero() {
        return Err(VoigtError::Singular("the algebraic series is singular at w = 0".into()));
    }
    let route = match route {
        RemainderRoute::Auto => {
            let collar = std::f64::consts::FRAC_PI_2 - EPS_POLE;
            if arg.theta().to_f64() < collar {
                RemainderRoute::Quadrature
            } else {
                RemainderRoute::IncompleteGamma
            }
        }
        other => other,
    };
    let (value, err) = match route {
        RemainderRoute::Quadrature => terminant_integral_route(arg, m, ctx)?,
        _ => incomplete_gamma_route(arg, m, ctx)?,
    };
    let mut l_hat = -Float::with_val(ctx.bits(), value.imag());
    // L(0, y) = 0 and every sin((2k+1) theta) vanishes on theta = 0
    if arg.x().is_zero() {
        l_hat = Float::new(ctx.bits());
    }
    Ok(Remainder {
        k_hat: Float::with_val(ctx.bits(), value.real()),
        l_hat,
        route,
        err_estimate: err,
    })
}

/// `2 e^{w^2} T_nu(w^2) = e^{i phi nu}/(pi i) int_0^inf e^{-r^2 tau}
/// tau^{nu-1} / (1 - tau e^{i phi}) d tau`, `nu = m + 1/2`.
fn terminant_integral_route(arg: &VoigtArgument, m: u32, ctx: &PrecisionContext) -> Result<(Complex, f64)> {
    let bits = ctx.bits();
    if !arg.phi().is_sign_positive() || arg.phi().is_zero() {
        return Err(VoigtError::domain("the terminant integral needs phi > 0 (pole on the path)"));
    }
    let r2 = Float::with_val(bits, arg.r().clone().square());
    let nu_minus_1 = Float::with_val(bits, m) - 0.5f64;
    // peak of e^{-r^2 tau} tau^{nu-1}
    let peak = Float::with_val(bits, &nu_minus_1 / &r2);
    let log_peak = -Float::with_val(bits, &r2 * &peak) + Float::with_val(bits, peak.ln_ref()) * &nu_minus_1;
    let rot = cis(arg.phi());

    let f = |tau: &Float| {
        if tau.is_zero() {
            return Complex::with_val(bits, 0);
        }
        let lg = Float::with_val(bits, tau.ln_ref()) * &nu_minus_1 - Float::with_val(bits, &r2 * tau) - &log_peak;
        let den = 1u32 - Complex::with_val(bits, &rot * tau);
        Complex::with_val(bits, lg.exp()) / den
    };

    let pf = peak.to_f64();
    let width = nu_minus_1.to_f64().sqrt() / r2.to_f64();
    let mut breakpoints = vec![pf, pf + 4.0 * width];
    if pf - 4.0 * width > 0.0 {
        breakpoints.push(pf - 4.0 * width);
    }
    let (sin_phi, cos_phi) = arg.phi().to_f64().sin_cos();
    let mut poles = Vec::new();
    if sin_phi < 0.5 && cos_phi > 0.0 {
        poles.push((cos_phi, -sin_phi));
    }
    let hints = QuadHints { breakpoints, poles, tail_scale: Some((4.0 * width).max(1e-3)) };
    let q = integrate_semi_infinite(f, &hints, ctx)?;

    // e^{i phi nu} e^{log_peak} / (pi i)
    let nu = Float::with_val(bits, m) + 0.5f64;
    let phase = cis(&Float::with_val(bits, arg.phi() * &nu));
    let scale = Float::with_val(bits, log_peak.exp_ref()) / ctx.pi();
    let prefactor = Complex::with_val(bits, phase * &scale) * Complex::with_val(bits, (0, -1));
    let value = Complex::with_val(bits, &q.value * &prefactor);
    let err = q.err_estimate * scale.to_f64();
    Ok((value, err))
}

/// `e^{w^2} Q(1/2 - m, w^2) = e^{w^2} (-1)^m (1/2)_m Gamma(1/2 - m, w^2) / sqrt(pi)`.
fn incomplete_gamma_route(arg: &VoigtArgument, m: u32, ctx: &PrecisionContext) -> Result<(Complex, f64)> {
    let bits = ctx.bits();
    let g = upper_incomplete_gamma_half_from_root(m, arg.w(), ctx)?;
    let z = Complex::with_val(bits, arg.w().clone().square());
    let poch = Float::with_val(bits, pochhammer_half(m));
    let mut value = Complex::with_val(bits, g * z.exp()) * poch / sqrt_pi(bits);
    if m % 2 == 1 {
        value = -value;
    }
    let err = ctx.epsilon() * abs(&value).to_f64();
    Ok((value, err))
}

/// The terminant `T_{m+1/2}(z) = (-1)^m (1/2)_m Gamma(1/2 - m, z) / (2 sqrt(pi))`
/// with the principal branch.
pub fn terminant_exact(m: u32, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let bits = ctx.bits();
    let g = upper_incomplete_gamma_half(m, z, ctx)?;
    let poch = Float::with_val(bits, pochhammer_half(m));
    let mut value = Complex::with_val(bits, g * poch) / Float::with_val(bits, sqrt_pi(bits) * 2u32);
    if m % 2 == 1 {
        value = -value;
    }
    Ok(value)
}
