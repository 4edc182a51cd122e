//! Double-exponential quadrature in multiple precision.
//!
//! Finite panels use the tanh-sinh map `x = mid + half * tanh(pi/2 sinh u)`;
//! the last panel of a half-line uses the exp-sinh map
//! `x = a + L exp(pi/2 sinh u)`. Each rule halves its step until two successive
//! levels agree to the tolerance; the difference between those levels is
//! reported as the error estimate. Because the rules converge roughly
//! quadratically in the number of digits, that difference overstates the
//! error of the finer level.

use rug::float::Constant;
use rug::{Complex, Float};

use super::{abs, PrecisionContext};
use crate::error::{Result, VoigtError};

const MIN_LEVEL: u32 = 3;
const MAX_LEVEL: u32 = 11;

#[derive(Debug, Clone)]
pub struct QuadratureResult {
    pub value: Complex,
    /// Estimated absolute error of `value`.
    pub err_estimate: f64,
    pub evaluations: usize,
}

/// Extra knowledge about an integrand on a half-line.
#[derive(Debug, Clone, Default)]
pub struct QuadHints {
    /// Points where the integrand changes character (peaks, kinks).
    pub breakpoints: Vec<f64>,
    /// Complex poles `(re, im)` close to the real axis; the real part becomes
    /// a breakpoint so the pole sits next to a panel end, where the nodes
    /// cluster.
    pub poles: Vec<(f64, f64)>,
    /// Length scale for the exp-sinh tail panel (default 1).
    pub tail_scale: Option<f64>,
}

/// Integral of `f` over `[a, b]`, `a <= b`.
pub fn integrate_finite<F>(f: F, a: &Float, b: &Float, ctx: &PrecisionContext) -> Result<QuadratureResult>
where
    F: Fn(&Float) -> Complex,
{
    let bits = ctx.bits();
    if a > b {
        return Err(VoigtError::domain("integrate_finite needs a <= b"));
    }
    if a == b {
        return Ok(QuadratureResult { value: Complex::with_val(bits, 0), err_estimate: 0.0, evaluations: 0 });
    }
    tanh_sinh(&f, a, b, ctx.quad_tol(), bits)
}

/// Integral of `f` over `(0, inf)`.
pub fn integrate_semi_infinite<F>(f: F, hints: &QuadHints, ctx: &PrecisionContext) -> Result<QuadratureResult>
where
    F: Fn(&Float) -> Complex,
{
    integrate_semi_infinite_from(f, &Float::new(ctx.bits()), hints, ctx)
}

/// Integral of `f` over `[a, inf)`, split at the hinted breakpoints.
pub fn integrate_semi_infinite_from<F>(
    f: F,
    a: &Float,
    hints: &QuadHints,
    ctx: &PrecisionContext,
) -> Result<QuadratureResult>
where
    F: Fn(&Float) -> Complex,
{
    let bits = ctx.bits();
    let start = a.to_f64();
    let mut cuts: Vec<f64> = hints
        .breakpoints
        .iter()
        .copied()
        .chain(hints.poles.iter().map(|p| p.0))
        .filter(|&p| p.is_finite() && p > start)
        .collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * y.abs().max(1.0));

    let panels = cuts.len() + 1;
    let tol = ctx.quad_tol() / panels as f64;
    let mut value = Complex::with_val(bits, 0);
    let mut err = 0.0;
    let mut evaluations = 0;
    let mut left = Float::with_val(bits, a);
    for cut in cuts {
        let right = Float::with_val(bits, cut);
        let part = tanh_sinh(&f, &left, &right, tol, bits)?;
        value += &part.value;
        err += part.err_estimate;
        evaluations += part.evaluations;
        left = right;
    }
    let tail = exp_sinh(&f, &left, hints.tail_scale.unwrap_or(1.0), tol, bits)?;
    value += &tail.value;
    err += tail.err_estimate;
    evaluations += tail.evaluations;
    Ok(QuadratureResult { value, err_estimate: err, evaluations })
}

/// One quadrature node: abscissa and weight (including dx/du).
struct Node {
    x: Float,
    w: Float,
}

fn half_pi(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi) / 2u32
}

/// `u` beyond which the tanh-sinh weights drop below `2^-bits`.
fn tanh_sinh_umax(bits: u32) -> f64 {
    ((bits as f64 * std::f64::consts::LN_2 + 4.0) / std::f64::consts::PI).asinh() + 0.25
}

fn tanh_sinh<F>(f: &F, a: &Float, b: &Float, tol: f64, bits: u32) -> Result<QuadratureResult>
where
    F: Fn(&Float) -> Complex,
{
    let hp = half_pi(bits);
    let width = Float::with_val(bits, b - a);
    let half = Float::with_val(bits, &width / 2u32);

    // both mirror nodes for a given u >= 0
    let nodes_at = |u: &Float| -> (Node, Option<Node>) {
        let s = Float::with_val(bits, u.sinh_ref()) * &hp;
        let cs = Float::with_val(bits, s.cosh_ref());
        let w = Float::with_val(bits, u.cosh_ref()) * &hp / cs.square() * &half;
        // distance from the nearer endpoint: width / (1 + e^{2s})
        let e2s = Float::with_val(bits, &s * 2u32).exp();
        let delta = Float::with_val(bits, &width / (e2s + 1u32));
        if u.is_zero() {
            let x = Float::with_val(bits, a + &half);
            (Node { x, w }, None)
        } else {
            let xr = Float::with_val(bits, b - &delta);
            let xl = Float::with_val(bits, a + &delta);
            (Node { x: xr, w: w.clone() }, Some(Node { x: xl, w }))
        }
    };

    // Past the weight cutoff, keep going while an endpoint singularity still
    // contributes (the weights alone decay too early for e.g. x^{-1/2}).
    let mut umax = tanh_sinh_umax(bits);
    let mut quiet = 0;
    let limit = umax + 3.0;
    while umax < limit {
        let (n1, n2) = nodes_at(&Float::with_val(bits, umax));
        let big = [Some(n1), n2].into_iter().flatten().any(|n| {
            let c = abs(&f(&n.x)) * &n.w;
            !c.is_zero() && c.to_f64() >= tol * 1e-3
        });
        if big {
            quiet = 0;
        } else {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        }
        umax += 0.125;
    }

    run_levels(f, tol, bits, |level| {
        // nodes new at this level: u = k h with k odd (or all k at level 0)
        let h = 2f64.powi(-(level as i32));
        let mut out = Vec::new();
        let kmax = (umax / h).ceil() as i64;
        let step = if level == 0 { 1 } else { 2 };
        let k0 = if level == 0 { 0 } else { 1 };
        let mut k = k0;
        while k <= kmax {
            let u = Float::with_val(bits, k) * Float::with_val(bits, h);
            let (n1, n2) = nodes_at(&u);
            out.push(n1);
            if let Some(n) = n2 {
                out.push(n);
            }
            k += step;
        }
        out
    })
}

fn exp_sinh<F>(f: &F, a: &Float, scale: f64, tol: f64, bits: u32) -> Result<QuadratureResult>
where
    F: Fn(&Float) -> Complex,
{
    let hp = half_pi(bits);
    let scale = Float::with_val(bits, scale);
    let node_at = |u: f64| -> Node {
        let u = Float::with_val(bits, u);
        let e = (Float::with_val(bits, u.sinh_ref()) * &hp).exp();
        let dist = Float::with_val(bits, &e * &scale);
        let w = Float::with_val(bits, u.cosh_ref()) * &hp * &dist;
        Node { x: Float::with_val(bits, a + &dist), w }
    };

    // left end: weights vanish double exponentially as u -> -inf
    let mut umin = -((2.0 * (bits as f64 * std::f64::consts::LN_2 + 4.0) / std::f64::consts::PI).asinh() + 0.25);
    // unless the integrand is singular at a
    let limit = umin - 3.0;
    let mut quiet = 0;
    while umin > limit {
        let n = node_at(umin);
        let c = abs(&f(&n.x)) * &n.w;
        if c.is_zero() || c.to_f64() < tol * 1e-3 {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
        umin -= 0.125;
    }
    // right end: walk out until the integrand is negligible
    let mut umax = 0.0;
    let mut quiet = 0;
    while umax < 8.0 {
        umax += 0.125;
        let n = node_at(umax);
        let fx = f(&n.x);
        let c = abs(&fx) * &n.w;
        if c.is_zero() || c.to_f64() < tol * 1e-3 {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }

    run_levels(f, tol, bits, |level| {
        let h = 2f64.powi(-(level as i32));
        let step = if level == 0 { 1 } else { 2 };
        let kmin = (umin / h).floor() as i64;
        let kmax = (umax / h).ceil() as i64;
        let mut out = Vec::new();
        let mut k = kmin;
        if level > 0 && k % 2 == 0 {
            k += 1;
        }
        while k <= kmax {
            out.push(node_at(k as f64 * h));
            k += step;
        }
        out
    })
}

/// Shared refinement loop: level `l` uses step `2^-l`, reusing the sum of
/// the previous level.
fn run_levels<F, G>(f: &F, tol: f64, bits: u32, new_nodes: G) -> Result<QuadratureResult>
where
    F: Fn(&Float) -> Complex,
    G: Fn(u32) -> Vec<Node>,
{
    let eps = 2f64.powi(-(bits as i32) + 4);
    let mut raw = Complex::with_val(bits, 0); // sum of w f over all nodes so far
    let mut mag = 0.0f64; // sum of |w f|
    let mut evaluations = 0;
    let mut prev: Option<Complex> = None;
    let mut last_gap = f64::INFINITY;
    for level in 0..=MAX_LEVEL {
        for node in new_nodes(level) {
            let fx = f(&node.x);
            let c = fx * &node.w;
            mag += abs(&c).to_f64();
            raw += c;
            evaluations += 1;
        }
        let h = Float::with_val(bits, 2f64.powi(-(level as i32)));
        let estimate = Complex::with_val(bits, &raw * &h);
        let rounding = eps * mag * 2f64.powi(-(level as i32));
        if let Some(p) = prev.as_ref() {
            let gap = abs(&Complex::with_val(bits, &estimate - p)).to_f64();
            last_gap = gap;
            if level >= MIN_LEVEL && gap + rounding <= tol {
                return Ok(QuadratureResult { value: estimate, err_estimate: gap + rounding, evaluations });
            }
        }
        prev = Some(estimate);
    }
    let estimate = prev.expect("at least one level evaluated");
    Err(VoigtError::QuadratureNonConvergence { estimate: estimate.to_string_radix(10, Some(20)), gap: last_gap })
}
