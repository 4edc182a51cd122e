mod common;

use common::{cabs, ctx, diff, polar, rel_c};
use proptest::prelude::*;
use rug::Float;
use voigt::expansions::*;
use voigt::numerics::PrecisionContext;
use voigt::oracle::*;
use voigt::VoigtError;

fn point(r: f64, theta_over_pi: f64, c: &PrecisionContext) -> VoigtArgument {
    VoigtArgument::from_polar_fraction(&c.real(r), &c.real(theta_over_pi), c).unwrap()
}

#[test]
fn truncation_examples() {
    let c = ctx();
    for (r, m, alpha) in [(3.5, 12, 0.25), (6.0, 36, 0.5), (1.0, 1, 0.5)] {
        let p = optimal_truncation(&c.real(r), &c);
        assert_eq!(p.m, m);
        assert!((p.alpha.to_f64() - alpha).abs() < 1e-38);
        assert!((p.nu.to_f64() - (m as f64 + 0.5)).abs() < 1e-38);
        assert!(!p.below_range);
    }
    assert!(optimal_truncation(&c.real(0.5), &c).below_range);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn truncation_offset_in_range(r in 1.0f64..20.0) {
        let c = ctx();
        let p = optimal_truncation(&c.real(r), &c);
        let a = p.alpha.to_f64();
        prop_assert!(a > 0.0 && a <= 1.0);
        prop_assert!((p.nu.to_f64() - (r * r + a)).abs() < 1e-9);
    }

    #[test]
    fn partial_sum_forms_agree(r in 1.0f64..8.0, t in 0.0f64..0.5, m in 1u32..60) {
        let c = ctx();
        let arg = point(r, t, &c);
        let (k1, l1) = algebraic_partial_sums(&arg, m, &c).unwrap();
        let (k2, l2) = algebraic_partial_sums_complex(&arg, m, &c).unwrap();
        let scale = k1.to_f64().abs().max(l1.to_f64().abs()).max(1e-300);
        prop_assert!(diff(&k1, &k2).max(diff(&l1, &l2)) < 1e-33 * scale.max(1.0));
    }
}

#[test]
fn partial_sum_edges() {
    let c = ctx();
    let sqrt_pi = c.pi().sqrt().to_f64();
    let (k, l) = algebraic_partial_sums(&point(2.0, 0.0, &c), 1, &c).unwrap();
    assert!((k.to_f64() - 1.0 / (sqrt_pi * 2.0)).abs() < 1e-15 && l.to_f64().abs() < 1e-38);
    let (k, l) = algebraic_partial_sums(&point(2.0, 0.5, &c), 1, &c).unwrap();
    assert!(k.to_f64().abs() < 1e-38 && (l.to_f64() - 1.0 / (sqrt_pi * 2.0)).abs() < 1e-15);
}

#[test]
fn decomposition_is_independent_of_m() {
    let c = ctx();
    for (r, t) in [(2.5, 0.13), (4.2, 0.41)] {
        let arg = point(r, t, &c);
        let exact = voigt_exact_erfc(&arg, &c).unwrap();
        let top = (2.0 * r * r).ceil() as u32;
        for m in [1, 2, top / 3, top / 2, top] {
            let (km, lm) = algebraic_partial_sums(&arg, m, &c).unwrap();
            let rem = remainder_exact(&arg, m, &c).unwrap();
            let k = Float::with_val(c.bits(), &km + &rem.k_hat);
            let l = Float::with_val(c.bits(), &lm + &rem.l_hat);
            let scale = exact.k.to_f64().abs().max(exact.l.to_f64().abs());
            assert!(diff(&k, &exact.k).max(diff(&l, &exact.l)) < 1e-25 * scale, "r {r} m {m}");
        }
    }
}

#[test]
fn table1_examples() {
    let c = ctx();
    let plan = optimal_truncation(&c.real(3.5), &c);
    let away = point(3.5, 0.1, &c);
    let one = hat_expansion(&away, &plan, HatVariant::Eq41, 1, &c).unwrap();
    let five = hat_expansion(&away, &plan, HatVariant::Eq41, 5, &c).unwrap();
    assert!((one.k_hat.to_f64() / 1.77219153e-7 - 1.0).abs() < 1e-8);
    assert!((five.k_hat.to_f64() / 1.73161147e-7 - 1.0).abs() < 1e-8);
    let near = point(3.5, 0.375, &c);
    let one = hat_expansion(&near, &plan, HatVariant::Eq42, 1, &c).unwrap();
    let five = hat_expansion(&near, &plan, HatVariant::Eq42, 5, &c).unwrap();
    assert!((one.k_hat.to_f64() / -1.30341265e-6 - 1.0).abs() < 1e-8);
    assert!((five.k_hat.to_f64() / -1.30410848e-6 - 1.0).abs() < 1e-8);
    assert_eq!(five.k_used, 5);
}

#[test]
fn theorem_evaluators_add_the_algebraic_sum() {
    let c = ctx();
    let arg = point(3.0, 0.2, &c);
    let plan = optimal_truncation(arg.r(), &c);
    let exact = voigt_exact_erfc(&arg, &c).unwrap();
    for e in [theorem1(&arg, &plan, 5, &c).unwrap(), theorem2(&arg, &plan, 5, &c).unwrap()] {
        let d = diff(&e.k, &exact.k).max(diff(&e.l, &exact.l));
        assert!(d <= e.err_estimate.max(1e-12 * d), "{d:e} vs {:e}", e.err_estimate);
    }
    let alg = algebraic(&arg, plan.m, &c).unwrap();
    assert!(diff(&alg.k, &exact.k) < 1e-3);
}

#[test]
fn optimal_truncation_error_law() {
    let c = ctx();
    let mut last = f64::INFINITY;
    for r in [3.0f64, 4.0, 5.0] {
        let arg = VoigtArgument::from_polar(&c.real(r), &(c.pi() / 6u32), &c).unwrap();
        let plan = optimal_truncation(arg.r(), &c);
        let exact = remainder_exact(&arg, plan.m, &c).unwrap();
        let e = hat_expansion(&arg, &plan, HatVariant::Eq41, 5, &c).unwrap();
        let err = diff(&e.k_hat, &exact.k_hat).max(diff(&e.l_hat, &exact.l_hat));
        let scale = 1.0 / (std::f64::consts::PI / 6.0).cos();
        let bound = (-r * r).exp() / r.powi(7) * scale;
        assert!(err <= bound, "r = {r}: {err:e} > {bound:e}");
        assert!(err <= e.err_estimate, "r = {r}: estimate {:e} below error {err:e}", e.err_estimate);
        let normalized = err * (r * r).exp();
        assert!(normalized < last);
        last = normalized;
    }
}

#[test]
fn theorem2_reduces_to_theorem1_away_from_the_stokes_line() {
    let c = ctx();
    let plan = optimal_truncation(&c.real(6.0), &c);
    for i in 0..=12 {
        let arg = point(6.0, 0.025 * i as f64, &c);
        let t1 = hat_expansion(&arg, &plan, HatVariant::Eq41, DEFAULT_K_TERMS, &c).unwrap();
        let t2 = hat_expansion(&arg, &plan, HatVariant::Eq42, DEFAULT_K_TERMS, &c).unwrap();
        let size = t2.k_hat.to_f64().hypot(t2.l_hat.to_f64());
        let d = diff(&t1.k_hat, &t2.k_hat).max(diff(&t1.l_hat, &t2.l_hat));
        assert!(d < 1e-3 * size, "theta/pi = {}: {d:e}", 0.025 * i as f64);
    }
}

#[test]
fn theorem1_refuses_inside_the_collar() {
    let c = ctx();
    let arg = point(6.0, 0.49, &c);
    let plan = optimal_truncation(arg.r(), &c);
    assert!(matches!(theorem1(&arg, &plan, 3, &c), Err(VoigtError::Domain(_))));
    assert!(theorem2(&arg, &plan, 3, &c).is_ok());
    let edge = point(6.0, 0.5 - DELTA_T1 / std::f64::consts::PI, &c);
    assert!(theorem1(&edge, &plan, 3, &c).is_ok());
    assert!(matches!(
        hat_expansion(&edge, &plan, HatVariant::Eq41, MAX_K_TERMS + 1, &c),
        Err(VoigtError::UnsupportedOrder { .. })
    ));
}

#[test]
fn away_terminant_within_first_omitted_term() {
    let c = ctx();
    let z = polar(12.25, 0.2, &c);
    let nu = c.real(12.5);
    let exact = terminant_exact(12, &z, &c).unwrap();
    for k_terms in 1..MAX_K_TERMS {
        let t = terminant_asymptotic(&z, &nu, Region::Away, k_terms, &c).unwrap();
        let next = terminant_asymptotic(&z, &nu, Region::Away, k_terms + 1, &c).unwrap();
        let omitted = cabs(&(next - &t));
        assert!(cabs(&(t - &exact)) <= omitted, "k_terms = {k_terms}");
    }
}

#[test]
fn uniform_terminant_reduces_to_away_form() {
    let c = ctx();
    let modz = 1000.25;
    let z = polar(modz, 1.0 - 0.3 / std::f64::consts::PI, &c);
    let nu = c.real(modz + 0.25);
    let away = terminant_asymptotic(&z, &nu, Region::Away, MAX_K_TERMS, &c).unwrap();
    let uniform = terminant_asymptotic(&z, &nu, Region::Uniform, MAX_K_TERMS, &c).unwrap();
    assert!(rel_c(&away, &uniform) < 1e-6);
}

#[test]
fn uniform_terminant_matches_exact_across_the_stokes_line() {
    let c = ctx();
    for ang in [0.7, 0.9, 0.97, 1.0] {
        let z = polar(24.25, ang, &c);
        let exact = terminant_exact(24, &z, &c).unwrap();
        let t = terminant_asymptotic(&z, &c.real(24.5), Region::Uniform, 4, &c).unwrap();
        assert!(rel_c(&t, &exact) < 1e-6, "arg z / pi = {ang}");
    }
    let z = polar(12.25, 1.0, &c);
    assert!(terminant_asymptotic(&z, &c.real(12.5), Region::Away, 3, &c).is_err());
}

#[test]
fn leading_order_formulas() {
    let c = ctx();
    let arg = point(3.5, 0.1, &c);
    let plan = optimal_truncation(arg.r(), &c);
    let exact = remainder_exact(&arg, plan.m, &c).unwrap();
    let lead = leading_remainder(&arg, &plan, Regime::Away, &c).unwrap();
    let size = exact.k_hat.to_f64().hypot(exact.l_hat.to_f64());
    assert!(diff(&lead.k_hat, &exact.k_hat).max(diff(&lead.l_hat, &exact.l_hat)) < 0.05 * size);

    // on y = 0 the algebraic K sum vanishes and the near formula gives e^{-x^2}
    let edge = point(4.0, 0.5, &c);
    let plan = optimal_truncation(edge.r(), &c);
    let near = leading_remainder(&edge, &plan, Regime::Near, &c).unwrap();
    assert!((near.k_hat.to_f64() / (-16f64).exp() - 1.0).abs() < 1e-12);
    assert!(leading_remainder(&edge, &plan, Regime::Away, &c).is_err());
    assert!(leading_remainder(&point(4.0, 0.1, &c), &plan, Regime::Near, &c).is_err());

    let axis = point(4.0, 0.0, &c);
    let lead = leading_remainder(&axis, &plan, Regime::Away, &c).unwrap();
    assert!(lead.l_hat.to_f64().abs() < 1e-40);
}

#[test]
fn limits_on_the_axes() {
    let c = ctx();
    for v in [3.0, 5.0] {
        // theta = 0: L vanishes, exactly for the A_2k form and to the
        // accuracy of the truncated expansion for the uniform one
        let arg = point(v, 0.0, &c);
        let plan = optimal_truncation(arg.r(), &c);
        let exact = remainder_exact(&arg, plan.m, &c).unwrap();
        assert!(exact.l_hat.is_zero());
        let e = hat_expansion(&arg, &plan, HatVariant::Eq41, 3, &c).unwrap();
        assert!(e.l_hat.to_f64().abs() < 1e-30 * e.k_hat.to_f64().abs());
        let e = hat_expansion(&arg, &plan, HatVariant::Eq42, 3, &c).unwrap();
        assert!(e.l_hat.to_f64().abs() <= e.err_estimate);
        // theta = pi/2: K from theorem2 is e^{-x^2}, L is Dawson's integral to O(x^-1 e^{-x^2})
        let arg = point(v, 0.5, &c);
        let t2 = theorem2(&arg, &plan, 3, &c).unwrap();
        let exact = voigt_exact_erfc(&arg, &c).unwrap();
        assert!(diff(&t2.k, &Float::with_val(c.bits(), -v * v).exp()) < 1e-30);
        assert!(diff(&t2.l, &exact.l) < 10.0 * (-v * v).exp() / v);
    }
}
