//! Coefficients of the exponentially improved expansions and the geometry of
//! the Stokes smoothing.
//!
//! With `u = e^{i phi} / (1 - e^{i phi})`:
//!
//! * `h_k(phi, alpha) = sum_{r=0}^{k} C(alpha, k-r) u^r`;
//! * `A_2k = (-1)^k gamma_k + sum_{j=2}^{2k} c_{j,k} h_j` with the Stirling
//!   coefficients `gamma_k` and the stored `c_{j,k}` table;
//! * `c(phi)` solves `c^2/2 = 1 - i phi - e^{-i phi}` on the branch with
//!   `c ~ phi` at the origin;
//! * `B_2k = e^{i phi alpha} A_2k / (1 - e^{i phi}) - i (-1)^k 2^k (1/2)_k / c^{2k+1}`
//!   and `Bhat_2k = -2i e^{i phi (1/2 - alpha)} B_2k`;
//! * `E(phi) = sqrt(2 pi) e^{zeta^2} erfc zeta`, `zeta = c(phi) r / sqrt 2`.
//!
//! Both terms of `B_2k` blow up like `phi^{-2k-1}` as `phi -> 0` while their
//! difference stays bounded. Below [`PHI_SWITCH`] the coefficients are
//! obtained from Cauchy's integral formula: the closed form is sampled on a
//! circle of radius [`CONTOUR_RADIUS`] in the complex `phi` plane, where it is
//! well conditioned, and the trapezoidal mean converges geometrically.

pub mod reversion;

use rug::{Complex, Float, Rational};

use crate::error::{Result, VoigtError};
use crate::numerics::{cis, erfcx_complex, pochhammer_half, PrecisionContext};

pub use reversion::{regenerate_a_via_reversion, ReversionCheck, ReversionReport, ReversionSeries};

/// Largest coefficient index `k` (as in `A_2k`) available.
pub const K_MAX: usize = 5;

/// Below this `phi` the coefficients `B_2k` come from the contour integral.
pub const PHI_SWITCH: f64 = 0.15;

/// Radius of the circle in the complex `phi` plane used below [`PHI_SWITCH`].
pub const CONTOUR_RADIUS: f64 = 0.6;

const STIRLING: [(i64, i64); K_MAX + 1] =
    [(1, 1), (-1, 12), (1, 288), (139, 51840), (-571, 2488320), (-163879, 209018880)];

/// Row `k` holds `c_{j,k}` for `j = 2..=2k`.
const CJK: [&[(i64, i64)]; K_MAX] = [
    &[(1, 1)],
    &[(1, 12), (2, 1), (3, 1)],
    &[(1, 288), (1, 6), (25, 4), (20, 1), (15, 1)],
    &[(-139, 51840), (1, 144), (49, 96), (77, 3), (525, 4), (210, 1), (105, 1)],
    &[
        (-571, 2488320),
        (-139, 25920),
        (221, 17280),
        (149, 72),
        (12565, 96),
        (1883, 2),
        (9555, 4),
        (2520, 1),
        (945, 1),
    ],
];

/// Stirling coefficient `gamma_k` in `Gamma(z) ~ sqrt(2 pi) z^{z-1/2} e^{-z} sum gamma_k z^{-k}`.
pub fn stirling_gamma(k: usize) -> Result<Rational> {
    STIRLING
        .get(k)
        .map(|&(n, d)| Rational::from((n, d)))
        .ok_or(VoigtError::UnsupportedOrder { order: k, max: K_MAX })
}

/// The coefficient of `h_j` in `A_2k`; zero for `j > 2k`.
pub fn cjk(j: usize, k: usize) -> Result<Rational> {
    if !(1..=K_MAX).contains(&k) || j < 2 {
        return Err(VoigtError::UnsupportedOrder { order: k, max: K_MAX });
    }
    if j > 2 * k {
        return Ok(Rational::new());
    }
    let (n, d) = CJK[k - 1][j - 2];
    Ok(Rational::from((n, d)))
}

/// Generalized binomial coefficient `C(alpha, n)` as a falling-factorial product.
pub fn generalized_binomial(alpha: &Float, n: u32) -> Float {
    let mut acc = Float::with_val(alpha.prec(), 1);
    for i in 0..n {
        acc *= Float::with_val(alpha.prec(), alpha - i);
        acc /= i + 1;
    }
    acc
}

fn check_k(k: usize) -> Result<()> {
    if k > K_MAX {
        return Err(VoigtError::UnsupportedOrder { order: k, max: K_MAX });
    }
    Ok(())
}

fn check_phi_nonzero(phi: &Float) -> Result<()> {
    if phi.is_zero() {
        return Err(VoigtError::Singular("A_2k and h_k are unbounded at phi = 0".into()));
    }
    Ok(())
}

fn cis_complex(phi: &Complex) -> Complex {
    let p = phi.prec().0;
    Complex::with_val(p, phi * Complex::with_val(p, (0, 1))).exp()
}

fn to_complex(phi: &Float, bits: u32) -> Complex {
    Complex::with_val(bits, (phi, 0))
}

/// `h_0 .. h_jmax` at a (possibly complex) angle.
fn h_all(phi: &Complex, alpha: &Float, jmax: usize) -> Vec<Complex> {
    let bits = phi.prec().0;
    let e = cis_complex(phi);
    let u = Complex::with_val(bits, &e / Complex::with_val(bits, 1u32 - &e));
    let binom: Vec<Float> = (0..=jmax as u32).map(|n| generalized_binomial(&Float::with_val(bits, alpha), n)).collect();
    let mut powers = vec![Complex::with_val(bits, 1)];
    for r in 1..=jmax {
        let next = Complex::with_val(bits, &powers[r - 1] * &u);
        powers.push(next);
    }
    (0..=jmax)
        .map(|k| {
            let mut acc = Complex::with_val(bits, 0);
            for r in 0..=k {
                acc += Complex::with_val(bits, &powers[r] * &binom[k - r]);
            }
            acc
        })
        .collect()
}

/// `A_0 .. A_2kmax` at a (possibly complex) angle.
fn a_all(phi: &Complex, alpha: &Float, kmax: usize) -> Vec<Complex> {
    let bits = phi.prec().0;
    let h = h_all(phi, alpha, 2 * kmax);
    (0..=kmax)
        .map(|k| {
            let g = Float::with_val(bits, stirling_gamma(k).expect("k within table"));
            let mut acc = Complex::with_val(bits, if k % 2 == 0 { g } else { -g });
            for (j, hj) in h.iter().enumerate().take(2 * k + 1).skip(2) {
                let c = Float::with_val(bits, cjk(j, k).expect("index within table"));
                acc += Complex::with_val(bits, hj * c);
            }
            acc
        })
        .collect()
}

/// `c(phi) = phi sqrt(g)` with `g = 2 sum_{n>=0} (-i phi)^n / (n+2)!`, free of
/// the cancellation in `1 - i phi - e^{-i phi}` at small `phi`. The principal
/// root is the right branch because `Re g >= 0` on the real line.
fn c_complex(phi: &Complex) -> Complex {
    let bits = phi.prec().0;
    let s = Complex::with_val(bits, phi * Complex::with_val(bits, (0, -1)));
    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32)));
    let mut term = Complex::with_val(bits, 0.5f64); // s^0 / 2!
    let mut sum = Complex::with_val(bits, 0);
    let mut n = 0u32;
    loop {
        sum += &term;
        n += 1;
        term *= &s;
        term /= n + 2;
        if n > 4 && Float::with_val(bits, term.abs_ref()) < eps {
            break;
        }
    }
    let g = Complex::with_val(bits, sum * 2u32);
    Complex::with_val(bits, phi * g.sqrt())
}

/// Closed form of `B_0 .. B_2kmax` at a (possibly complex) nonzero angle.
fn b_closed_all(phi: &Complex, alpha: &Float, kmax: usize) -> Vec<Complex> {
    let bits = phi.prec().0;
    let a = a_all(phi, alpha, kmax);
    let e = cis_complex(phi);
    let lead = Complex::with_val(bits, cis_complex(&Complex::with_val(bits, phi * alpha)) / Complex::with_val(bits, 1u32 - &e));
    let c = c_complex(phi);
    let c2 = Complex::with_val(bits, c.square_ref());
    let mut cpow = c;
    let mut out = Vec::with_capacity(kmax + 1);
    for (k, ak) in a.into_iter().enumerate() {
        let scale = Float::with_val(bits, pochhammer_half(k as u32)) * Float::with_val(bits, Float::i_exp(1, k as i32));
        let mut second = Complex::with_val(bits, (0, 1)) * scale / &cpow;
        if k % 2 == 1 {
            second = -second;
        }
        out.push(Complex::with_val(bits, ak * &lead) - second);
        cpow *= &c2;
    }
    out
}

/// `B_0 .. B_2kmax` at `phi` from the trapezoidal rule on
/// `B(phi) = (1/2 pi i) oint B(zeta) / (zeta - phi) d zeta`.
fn b_contour_all(phi: &Float, alpha: &Float, kmax: usize, ctx: &PrecisionContext) -> Vec<Complex> {
    let work = ctx.widened(10);
    let bits = work.bits();
    let ratio = CONTOUR_RADIUS / phi.to_f64().abs().max(1e-3);
    let n = ((work.digits() as f64 + 5.0) / ratio.log10()).ceil().max(64.0) as usize;
    let phi0 = to_complex(phi, bits);
    let alpha = Float::with_val(bits, alpha);
    let two_pi = work.pi() * 2u32;
    let mut sums = vec![Complex::with_val(bits, 0); kmax + 1];
    for j in 0..n {
        let t = Float::with_val(bits, &two_pi * (2 * j as u32 + 1)) / (2 * n as u32);
        let zeta = Complex::with_val(bits, cis(&t) * CONTOUR_RADIUS);
        let weight = Complex::with_val(bits, &zeta / Complex::with_val(bits, &zeta - &phi0));
        for (acc, b) in sums.iter_mut().zip(b_closed_all(&zeta, &alpha, kmax)) {
            *acc += b * &weight;
        }
    }
    sums.into_iter().map(|s| ctx.round_complex(&Complex::with_val(bits, s / n as u32))).collect()
}

/// `h_k(phi, alpha)`.
pub fn h_k(phi: &Float, alpha: &Float, k: usize, ctx: &PrecisionContext) -> Result<Complex> {
    check_phi_nonzero(phi)?;
    let h = h_all(&to_complex(phi, ctx.bits()), &Float::with_val(ctx.bits(), alpha), k);
    Ok(h[k].clone())
}

/// `A_2k(phi, alpha)` from the Stirling coefficients and the `c_{j,k}` table.
pub fn a2k(phi: &Float, alpha: &Float, k: usize, ctx: &PrecisionContext) -> Result<Complex> {
    check_k(k)?;
    check_phi_nonzero(phi)?;
    Ok(a_all(&to_complex(phi, ctx.bits()), &Float::with_val(ctx.bits(), alpha), k).swap_remove(k))
}

/// `A_0 .. A_2kmax`.
pub fn a2k_all(phi: &Float, alpha: &Float, kmax: usize, ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    check_k(kmax)?;
    check_phi_nonzero(phi)?;
    Ok(a_all(&to_complex(phi, ctx.bits()), &Float::with_val(ctx.bits(), alpha), kmax))
}

/// `c(phi)` for real `phi`; in the closed fourth quadrant for `phi in [0, pi]`.
pub fn c_of_phi(phi: &Float, ctx: &PrecisionContext) -> Complex {
    c_complex(&to_complex(phi, ctx.bits()))
}

/// `B_0 .. B_2kmax` at `phi in [0, 2 pi)`.
pub fn b2k_all(phi: &Float, alpha: &Float, kmax: usize, ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    check_k(kmax)?;
    if phi.is_sign_negative() && !phi.is_zero() {
        return Err(VoigtError::domain("B_2k needs phi >= 0"));
    }
    if phi.to_f64() < PHI_SWITCH {
        return Ok(b_contour_all(phi, alpha, kmax, ctx));
    }
    Ok(b_closed_all(&to_complex(phi, ctx.bits()), &Float::with_val(ctx.bits(), alpha), kmax))
}

pub fn b2k(phi: &Float, alpha: &Float, k: usize, ctx: &PrecisionContext) -> Result<Complex> {
    Ok(b2k_all(phi, alpha, k, ctx)?.swap_remove(k))
}

/// `B_2k` from the closed form alone, without the small-`phi` treatment.
pub fn b2k_closed_form(phi: &Float, alpha: &Float, k: usize, ctx: &PrecisionContext) -> Result<Complex> {
    check_k(k)?;
    check_phi_nonzero(phi)?;
    Ok(b_closed_all(&to_complex(phi, ctx.bits()), &Float::with_val(ctx.bits(), alpha), k).swap_remove(k))
}

/// `-2i e^{i phi (1/2 - alpha)}`, the factor taking `B_2k` to `Bhat_2k`.
fn bhat_factor(phi: &Float, alpha: &Float, bits: u32) -> Complex {
    let angle = Float::with_val(bits, phi * Float::with_val(bits, 0.5f64 - Float::with_val(bits, alpha)));
    cis(&angle) * Complex::with_val(bits, (0, -2))
}

/// `Bhat_0 .. Bhat_2kmax = -2i e^{i phi (1/2 - alpha)} B_2k`.
pub fn bhat2k_all(phi: &Float, alpha: &Float, kmax: usize, ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    let f = bhat_factor(phi, alpha, ctx.bits());
    Ok(b2k_all(phi, alpha, kmax, ctx)?.into_iter().map(|b| Complex::with_val(ctx.bits(), b * &f)).collect())
}

pub fn bhat2k(phi: &Float, alpha: &Float, k: usize, ctx: &PrecisionContext) -> Result<Complex> {
    Ok(bhat2k_all(phi, alpha, k, ctx)?.swap_remove(k))
}

/// `Bhat_2k = A_2k / cos theta - (-1)^k 2^{k+1} (1/2)_k e^{i phi (1/2 - alpha)} / c^{2k+1}`
/// with `cos theta = sin(phi/2)`; needs `phi > 0`.
pub fn bhat2k_direct(phi: &Float, alpha: &Float, k: usize, ctx: &PrecisionContext) -> Result<Complex> {
    check_k(k)?;
    check_phi_nonzero(phi)?;
    let bits = ctx.bits();
    let a = a2k(phi, alpha, k, ctx)?;
    let cos_theta = Float::with_val(bits, phi / 2u32).sin();
    let c = c_of_phi(phi, ctx);
    let cpow = rug::ops::Pow::pow(c, 2 * k as i32 + 1);
    let angle = Float::with_val(bits, phi * Float::with_val(bits, 0.5f64 - Float::with_val(bits, alpha)));
    let scale = Float::with_val(bits, pochhammer_half(k as u32)) * Float::with_val(bits, Float::i_exp(1, k as i32 + 1));
    let mut second = Complex::with_val(bits, cis(&angle) * scale) / cpow;
    if k % 2 == 1 {
        second = -second;
    }
    Ok(Complex::with_val(bits, a / cos_theta) - second)
}

/// `E(phi) = sqrt(2 pi) e^{zeta^2} erfc zeta`, `zeta = c(phi) r / sqrt 2`.
pub fn e_of_phi(phi: &Float, r: &Float, ctx: &PrecisionContext) -> Result<Complex> {
    Ok(StokesGeometry::new(phi, r, ctx)?.e)
}

/// `c(phi)`, `zeta` and the smoothing factor `E(phi)` at modulus `r`.
#[derive(Debug, Clone)]
pub struct StokesGeometry {
    pub phi: Float,
    pub c: Complex,
    pub zeta: Complex,
    pub e: Complex,
}

impl StokesGeometry {
    pub fn new(phi: &Float, r: &Float, ctx: &PrecisionContext) -> Result<Self> {
        let bits = ctx.bits();
        if !(r.is_sign_positive() && !r.is_zero()) {
            return Err(VoigtError::domain("E(phi) needs r > 0"));
        }
        let c = c_of_phi(phi, ctx);
        let root2 = Float::with_val(bits, 2u32).sqrt();
        let zeta = Complex::with_val(bits, &c * r) / root2;
        let two_pi = ctx.pi() * 2u32;
        let e = Complex::with_val(bits, erfcx_complex(&zeta, ctx)? * two_pi.sqrt());
        Ok(Self { phi: Float::with_val(bits, phi), c, zeta, e })
    }
}

/// `A_2k`, `B_2k` and `Bhat_2k` for `k = 0..=k_max` at one `(phi, alpha)`.
/// `A` is `None` at `phi = 0`, where it is unbounded.
#[derive(Debug, Clone)]
pub struct CoefficientSet {
    pub phi: Float,
    pub alpha: Float,
    pub k_max: usize,
    pub a: Option<Vec<Complex>>,
    pub b: Vec<Complex>,
    pub bhat: Vec<Complex>,
}

impl CoefficientSet {
    pub fn new(phi: &Float, alpha: &Float, k_max: usize, ctx: &PrecisionContext) -> Result<Self> {
        check_k(k_max)?;
        let a = if phi.is_zero() { None } else { Some(a2k_all(phi, alpha, k_max, ctx)?) };
        let b = b2k_all(phi, alpha, k_max, ctx)?;
        let f = bhat_factor(phi, alpha, ctx.bits());
        let bhat = b.iter().map(|v| Complex::with_val(ctx.bits(), v * &f)).collect();
        Ok(Self { phi: ctx.round(phi), alpha: ctx.round(alpha), k_max, a, b, bhat })
    }
}

/// Polynomials in `alpha` for `B_0(0, alpha)`, `B_2(0, alpha)` and
/// `B_4(0, alpha)`, lowest degree first.
pub fn b2k_zero_limit_polynomial(k: usize) -> Result<Vec<Rational>> {
    let coeffs: &[(i64, i64)] = match k {
        0 => &[(2, 3), (-1, 1)],
        1 => &[(23, 270), (-5, 12), (1, 2), (-1, 6)],
        2 => &[(23, 3024), (-21, 160), (3, 8), (-7, 18), (1, 6), (-1, 40)],
        _ => return Err(VoigtError::UnsupportedOrder { order: k, max: 2 }),
    };
    Ok(coeffs.iter().map(|&(n, d)| Rational::from((n, d))).collect())
}

/// Coefficient of `phi` in the small-`phi` expansion of `B_0`:
/// `-i (1 - 6 alpha + 6 alpha^2) / 12`.
pub fn b0_linear_coefficient(alpha: &Float, ctx: &PrecisionContext) -> Complex {
    let bits = ctx.bits();
    let a = Float::with_val(bits, alpha);
    let p = Float::with_val(bits, 1u32) - Float::with_val(bits, &a * 6u32) + Float::with_val(bits, a.square_ref()) * 6u32;
    Complex::with_val(bits, (Float::new(bits), -p / 12u32))
}
