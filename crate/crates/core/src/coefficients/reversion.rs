//! Independent regeneration of the `A_2k` structure by Laplace's method.
//!
//! Setting `tau = 1 + t` and `w^2/2 = t - log(1 + t)` gives
//! `w = t sqrt(S(t))` with `S(t) = 2 sum_{n>=0} (-1)^n t^n / (n+2)`. Lagrange
//! inversion yields `[w^n] t = (1/n) [t^{n-1}] S^{-n/2}`; the series `w/t` is
//! the reciprocal of `t/w`. Expanding `(w/t) g(t)` with
//! `g = (1 - e^{i phi})^{-1} sum_j h_j t^j` and integrating term by term
//! against `e^{-|z| w^2 / 2}` gives
//!
//! * constant part of `A_2k`: `2^k (1/2)_k [w^{2k}] (w/t)`, which must be
//!   `(-1)^k gamma_k`;
//! * coefficient of `h_j`: `2^k (1/2)_k [w^{2k-1}] t^{j-1}`, which must be
//!   `c_{j,k}`.
//!
//! All arithmetic is exact.

use std::fmt;

use rug::Rational;

use super::{cjk, stirling_gamma, K_MAX};
use crate::error::{Result, VoigtError};
use crate::numerics::pochhammer_half;

type Series = Vec<Rational>;

fn mul(a: &[Rational], b: &[Rational], n: usize) -> Series {
    let mut out = vec![Rational::new(); n + 1];
    for (i, ai) in a.iter().enumerate().take(n + 1) {
        if *ai == 0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += Rational::from(ai * bj);
        }
    }
    out
}

/// `a^p` for a series with `a_0 = 1`, by `n b_n = sum_{k=1}^n ((p+1)k - n) a_k b_{n-k}`.
fn pow(a: &[Rational], p: &Rational, n: usize) -> Series {
    assert_eq!(a[0], 1, "series power needs unit constant term");
    let mut b = vec![Rational::from(1)];
    for i in 1..=n {
        let mut acc = Rational::new();
        for k in 1..=i.min(a.len() - 1) {
            let factor = Rational::from(p + 1u32) * k as u32 - i as u32;
            acc += factor * &a[k] * &b[i - k];
        }
        b.push(acc / i as u32);
    }
    b
}

/// Reciprocal of a series with `a_0 = 1`.
fn reciprocal(a: &[Rational], n: usize) -> Series {
    pow(a, &Rational::from(-1), n)
}

/// `S(t) = 2 sum_{n>=0} (-1)^n t^n / (n+2)`, so that `t - log(1+t) = t^2 S(t) / 2`.
fn s_series(n: usize) -> Series {
    (0..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { 2 } else { -2 };
            Rational::from((sign, k as i64 + 2))
        })
        .collect()
}

/// The reverted series `t(w)` and `w/t` through `w^order`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReversionSeries {
    pub t_of_w: Vec<Rational>,
    pub w_over_t: Vec<Rational>,
    pub order: usize,
}

impl ReversionSeries {
    pub fn new(order: usize) -> Self {
        let s = s_series(order);
        let mut t_of_w = vec![Rational::new()];
        for n in 1..=order + 1 {
            let p = Rational::from((-(n as i64), 2));
            let sp = pow(&s, &p, n - 1);
            t_of_w.push(Rational::from(&sp[n - 1] / n as u32));
        }
        let t_over_w: Series = t_of_w[1..].to_vec();
        let w_over_t = reciprocal(&t_over_w, order);
        t_of_w.truncate(order + 1);
        Self { t_of_w, w_over_t, order }
    }

    /// Coefficients of `t(w)^j` through `w^order`.
    pub fn t_power(&self, j: usize) -> Vec<Rational> {
        let mut acc = vec![Rational::new(); self.order + 1];
        acc[0] = Rational::from(1);
        for _ in 0..j {
            acc = mul(&acc, &self.t_of_w, self.order);
        }
        acc
    }

    /// `[w^{2k}]` of `(w/t) t^j` for `j = 0..=2k`: the even-power weights that
    /// multiply `h_j` before the Gaussian moments are applied.
    pub fn laplace_weights(&self, k: usize) -> Vec<Rational> {
        (0..=2 * k)
            .map(|j| {
                if j == 0 {
                    self.w_over_t[2 * k].clone()
                } else {
                    // (w/t) t^j = w t^{j-1}
                    self.t_power(j - 1).get(2 * k - 1).cloned().unwrap_or_default()
                }
            })
            .collect()
    }
}

/// `int e^{-w^2/2} w^{2k} dw / sqrt(2 pi) = 2^k (1/2)_k`.
pub fn gaussian_moment(k: usize) -> Rational {
    pochhammer_half(k as u32) * Rational::from(1u64 << k)
}

/// Outcome of regenerating one `A_2k`.
#[derive(Debug, Clone)]
pub struct ReversionCheck {
    pub k: usize,
    pub constant: Rational,
    pub expected_constant: Rational,
    /// `(j, regenerated c_{j,k}, stored c_{j,k})` for `j = 1..=2k`.
    pub coefficients: Vec<(usize, Rational, Rational)>,
}

impl ReversionCheck {
    pub fn passed(&self) -> bool {
        self.constant == self.expected_constant && self.coefficients.iter().all(|(_, a, b)| a == b)
    }
}

impl fmt::Display for ReversionCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok" } else { "MISMATCH" };
        write!(f, "A_{}: {status}", 2 * self.k)?;
        if self.constant != self.expected_constant {
            write!(f, "; constant {} vs stored {}", self.constant, self.expected_constant)?;
        }
        for (j, a, b) in &self.coefficients {
            if a != b {
                write!(f, "; c_{{{j},{}}} {a} vs stored {b}", self.k)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ReversionReport {
    pub series: ReversionSeries,
    pub checks: Vec<ReversionCheck>,
}

impl ReversionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(ReversionCheck::passed)
    }
}

impl fmt::Display for ReversionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Rebuilds `A_0 .. A_{2 order}` from the reverted series and compares them,
/// coefficient by coefficient, with the stored Stirling and `c_{j,k}` tables.
pub fn regenerate_a_via_reversion(order: usize) -> Result<ReversionReport> {
    if order > K_MAX {
        return Err(VoigtError::UnsupportedOrder { order, max: K_MAX });
    }
    let series = ReversionSeries::new(2 * order.max(1) + 1);
    let mut checks = Vec::new();
    for k in 0..=order {
        let moment = gaussian_moment(k);
        let weights = series.laplace_weights(k);
        let constant = Rational::from(&weights[0] * &moment);
        let gamma = stirling_gamma(k)?;
        let expected_constant = if k % 2 == 0 { gamma } else { -gamma };
        let mut coefficients = Vec::new();
        for (j, wj) in weights.iter().enumerate().skip(1) {
            let regenerated = Rational::from(wj * &moment);
            let stored = if j == 1 { Rational::new() } else { cjk(j, k)? };
            coefficients.push((j, regenerated, stored));
        }
        checks.push(ReversionCheck { k, constant, expected_constant, coefficients });
    }
    Ok(ReversionReport { series, checks })
}
