use voigt::cli::{run, OutputRecord, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};

fn voigt(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("voigt").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn record(args: &[&str]) -> OutputRecord {
    let (code, out, err) = voigt(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(out.trim()).unwrap()
}

#[test]
fn eval_oracle_special_values() {
    let r = record(&["eval", "--x", "0", "--y", "1"]);
    assert!((r.k.unwrap() - 0.427_583_576_155_807).abs() < 1e-15);
    assert_eq!(r.l, Some(0.0));
    assert_eq!(r.method, "oracle-erfc");
    assert_eq!(r.precision, 40);
    let r = record(&["eval", "--x", "1", "--y", "0", "--method", "oracle"]);
    assert!((r.k.unwrap() - (-1f64).exp()).abs() < 1e-16);
}

#[test]
fn eval_expansions_agree_with_oracle() {
    let o = record(&["eval", "--x", "2", "--y", "3"]);
    for method in ["theorem1", "theorem2"] {
        let t = record(&["eval", "--x", "2", "--y", "3", "--method", method, "--k-terms", "5"]);
        assert!((t.k.unwrap() - o.k.unwrap()).abs() <= t.err_estimate.max(1e-16), "{method}");
        assert!((t.l.unwrap() - o.l.unwrap()).abs() <= t.err_estimate.max(1e-16), "{method}");
        assert_eq!(t.m, Some(13));
        assert_eq!(t.k_terms, Some(5));
    }
    let q = record(&["eval", "--x", "2", "--y", "3", "--method", "quadrature"]);
    assert!((q.k.unwrap() - o.k.unwrap()).abs() < 1e-14);
}

#[test]
fn eval_hat_values() {
    let r = record(&["eval", "--r", "3.5", "--theta-over-pi", "0.1", "--hat"]);
    assert!((r.k_hat.unwrap() / 1.73161445e-7 - 1.0).abs() < 1e-8);
    assert!((r.l_hat.unwrap() / 5.50694067e-7 - 1.0).abs() < 1e-8);
    assert!(r.k.is_none());
    let t = record(&["eval", "--r", "3.5", "--theta-over-pi", "0.375", "--hat", "--method", "theorem2", "--k-terms", "1"]);
    assert!((t.k_hat.unwrap() / -1.30341265e-6 - 1.0).abs() < 1e-8);
    assert_eq!(t.method, "eq42");
}

#[test]
fn eval_symmetry_and_signs() {
    let a = record(&["eval", "--x", "1.5", "--y", "2"]);
    let b = record(&["eval", "--x", "-1.5", "--y", "2"]);
    let c = record(&["eval", "--x", "1.5", "--y", "-2"]);
    assert_eq!(b.k, a.k);
    assert_eq!(b.l.map(|v| -v), a.l);
    assert_eq!(c.k.map(|v| -v), a.k);
    assert_eq!(c.l, a.l);
    assert_eq!((b.x, c.y), (-1.5, -2.0));
}

#[test]
fn eval_csv() {
    let (code, out, _) = voigt(&["eval", "--x", "1", "--y", "1", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("x,y,r,theta_over_pi,method,K,L"));
    assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());
}

#[test]
fn json_round_trips() {
    let (_, out, _) = voigt(&["eval", "--x", "2", "--y", "1", "--method", "theorem2", "--hat"]);
    let r: OutputRecord = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(serde_json::to_string(&r).unwrap(), out.trim());
    let value: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    for key in ["x", "y", "r", "theta_over_pi", "method", "K_hat", "L_hat", "err_estimate", "k_terms", "m", "alpha", "precision"] {
        assert!(value.get(key).is_some(), "{key}");
    }
    assert!(value.get("K").is_none());
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["eval", "--x", "2", "--y", "3", "--method", "theorem2"][..],
        &["scan", "--r", "4", "--n", "5", "--variant", "eq42"][..],
        &["coeffs", "--phi", "0.1", "--alpha", "0.3", "--format", "json"][..],
    ] {
        assert_eq!(voigt(args), voigt(args));
    }
}

#[test]
fn theorem1_collar_falls_back_with_warning() {
    let (code, out, err) = voigt(&["eval", "--r", "6", "--theta-over-pi", "0.49", "--method", "theorem1"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("warning"));
    let r: OutputRecord = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(r.method, "theorem2");
}

#[test]
fn error_exit_codes() {
    assert_eq!(voigt(&["eval", "--x", "1"]).0, EXIT_USAGE);
    assert_eq!(voigt(&["eval"]).0, EXIT_USAGE);
    assert_eq!(voigt(&["eval", "--x", "1", "--y", "1", "--precision", "10"]).0, EXIT_USAGE);
    assert_eq!(voigt(&["eval", "--x", "1", "--y", "1", "--method", "bogus"]).0, EXIT_USAGE);
    assert_eq!(voigt(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(voigt(&["eval", "--x", "abc", "--y", "1"]).0, EXIT_DOMAIN);
    assert_eq!(voigt(&["eval", "--x", "0", "--y", "0", "--method", "theorem2"]).0, EXIT_DOMAIN);
    assert_eq!(voigt(&["eval", "--x", "1", "--y", "1", "--method", "theorem2", "--k-terms", "9"]).0, EXIT_DOMAIN);
    assert_eq!(voigt(&["coeffs", "--phi", "0.5", "--alpha", "0.5", "--kmax", "6"]).0, EXIT_DOMAIN);
    assert_eq!(voigt(&["scan", "--r", "6", "--n", "1", "--variant", "eq42"]).0, EXIT_DOMAIN);
    let (code, out, _) = voigt(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("eval"));
}

#[test]
fn tables_check_against_reference_values() {
    let (code, out, _) = voigt(&["table1", "--check"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("24 of 24 cells match"));
    assert!(out.contains("+1.73151197(-7)"));
    let (code, out, _) = voigt(&["table2", "--check"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("28 of 28 cells match"));
    assert!(out.contains("2.274(-4)") && out.contains("4.523(-7)"));
    let (code, out, _) = voigt(&["table2", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 7);
}

fn scan(args: &[&str]) -> Vec<(f64, f64, f64)> {
    let (code, out, err) = voigt(args);
    assert_eq!(code, EXIT_OK, "{err}");
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("theta_over_pi,rel_err_K,rel_err_L"));
    lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
            (v[0], v[1], v[2])
        })
        .collect()
}

#[test]
fn scan_rows() {
    let rows = scan(&["scan", "--r", "6", "--variant", "eq42", "--n", "11"]);
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0].0, 0.0);
    assert!((rows[0].1 / 5.785e-7 - 1.0).abs() < 1e-3);
    assert!(rows[0].2.is_nan());
    assert_eq!(rows[10].0, 0.5);

    let rows = scan(&["scan", "--r", "6", "--variant", "eq41", "--n", "11"]);
    assert!((rows[10].0 - 0.48).abs() < 1e-15);
    let tail: Vec<f64> = rows.iter().filter(|r| r.0 >= 0.28).map(|r| r.1).collect();
    assert!(tail.len() >= 4);
    assert!(tail.windows(2).all(|w| w[1] > w[0]), "{tail:?}");

    let rows = scan(&["scan", "--r", "3.5", "--variant", "eq42", "--n", "3"]);
    assert!(rows.iter().all(|r| r.1.is_finite()));
    assert_eq!(rows[2].0, 0.5);
}

#[test]
fn coeffs_listing() {
    let (code, out, _) = voigt(&["coeffs", "--phi", "3.141592653589793238462643383279502884197", "--alpha", "0.25", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let a2 = v["coefficients"][1]["a"][0].as_f64().unwrap();
    assert!((a2 - (1.0 / 12.0 + 0.03125)).abs() < 1e-15);

    let (code, out, _) = voigt(&["coeffs", "--phi", "0", "--alpha", "0.25", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["coefficients"][0]["a"].is_null());
    assert!((v["coefficients"][0]["b"][0].as_f64().unwrap() - (2.0 / 3.0 - 0.25)).abs() < 1e-15);

    let (code, out, _) = voigt(&["coeffs", "--phi", "0", "--alpha", "0.25"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("singular at phi = 0"));
}

#[test]
fn eval_table_format_is_readable_text() {
    let (code, out, _) = voigt(&["eval", "--x", "2", "--y", "3", "--format", "table"]);
    assert_eq!(code, EXIT_OK);
    let json = record(&["eval", "--x", "2", "--y", "3"]);
    let k_line = out.lines().find(|l| l.starts_with("K ")).unwrap();
    let k: f64 = k_line.split('=').nth(1).unwrap().trim().parse().unwrap();
    assert_eq!(k, json.k.unwrap());
    assert!(out.contains("method = oracle-erfc"));
    assert!(serde_json::from_str::<OutputRecord>(out.trim()).is_err());
}
