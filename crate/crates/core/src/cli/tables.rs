//! Regeneration of the two reference tables and their comparison with the
//! embedded reference values.

use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::format::{format_printed, last_digit_distance, Printed};
use crate::error::{Result, VoigtError};
use crate::expansions::{hat_expansion, HatVariant, TruncationPlan};
use crate::numerics::{parse_real, PrecisionContext};
use crate::oracle::{remainder_exact, VoigtArgument};

const REFERENCE_TOML: &str = include_str!("../../data/reference_tables.toml");

#[derive(Debug, Clone, Deserialize)]
pub struct ReferenceTables {
    pub version: u32,
    pub table1: Table1Reference,
    pub table2: Table2Reference,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Table1Reference {
    pub r: String,
    pub m: u32,
    pub alpha: String,
    pub blocks: Vec<Table1BlockReference>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Table1BlockReference {
    pub theta_over_pi: String,
    pub variant: String,
    pub k_hat: Vec<String>,
    pub l_hat: Vec<String>,
    pub exact_k: String,
    pub exact_l: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Table2Reference {
    pub r: String,
    pub m: u32,
    pub alpha: String,
    pub k_terms: usize,
    pub rows: Vec<Table2RowReference>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Table2RowReference {
    pub theta_over_pi: String,
    pub eq41_k: String,
    pub eq41_l: String,
    pub eq42_k: String,
    pub eq42_l: String,
}

/// The embedded reference data.
pub fn reference_tables() -> ReferenceTables {
    toml::from_str(REFERENCE_TOML).expect("embedded reference tables parse")
}

fn parse_variant(s: &str) -> Result<HatVariant> {
    match s {
        "eq41" => Ok(HatVariant::Eq41),
        "eq42" => Ok(HatVariant::Eq42),
        other => Err(VoigtError::domain(format!("unknown variant '{other}'"))),
    }
}

fn polar_point(r: &str, theta_over_pi: &str, ctx: &PrecisionContext) -> Result<VoigtArgument> {
    VoigtArgument::from_polar_fraction(&parse_real(r, ctx)?, &parse_real(theta_over_pi, ctx)?, ctx)
}

/// One `theta` block of the first table: rows `k = 0..` and the exact foot.
#[derive(Debug, Clone, Serialize)]
pub struct Table1Block {
    pub theta_over_pi: String,
    pub variant: HatVariant,
    /// `(Khat, Lhat)` with `k_terms = k + 1`.
    pub rows: Vec<(f64, f64)>,
    pub exact: (f64, f64),
}

/// `Khat, Lhat` at `|w| = 3.5` for both blocks of the first table.
pub fn compute_table1(ctx: &PrecisionContext) -> Result<Vec<Table1Block>> {
    let reference = reference_tables().table1;
    let r = parse_real(&reference.r, ctx)?;
    reference
        .blocks
        .par_iter()
        .map(|b| {
            let arg = polar_point(&reference.r, &b.theta_over_pi, ctx)?;
            let plan = TruncationPlan::with_m(&r, reference.m, ctx)?;
            let variant = parse_variant(&b.variant)?;
            let rows = (1..=b.k_hat.len())
                .map(|k_terms| {
                    let e = hat_expansion(&arg, &plan, variant, k_terms, ctx)?;
                    Ok((e.k_hat.to_f64(), e.l_hat.to_f64()))
                })
                .collect::<Result<Vec<_>>>()?;
            let exact = remainder_exact(&arg, plan.m, ctx)?;
            Ok(Table1Block {
                theta_over_pi: b.theta_over_pi.clone(),
                variant,
                rows,
                exact: (exact.k_hat.to_f64(), exact.l_hat.to_f64()),
            })
        })
        .collect()
}

/// `|expansion - exact| / |exact|`, undefined when the exact value vanishes.
pub fn relative_error(approx: &Float, exact: &Float) -> Option<f64> {
    if exact.is_zero() {
        return None;
    }
    let d = Float::with_val(exact.prec(), approx - exact);
    Some((d / exact).abs().to_f64())
}

/// Relative errors of both expansions at one angle.
#[derive(Debug, Clone, Serialize)]
pub struct Table2Row {
    pub theta_over_pi: String,
    pub eq41_k: Option<f64>,
    pub eq41_l: Option<f64>,
    pub eq42_k: Option<f64>,
    pub eq42_l: Option<f64>,
}

/// Relative errors of `(Khat, Lhat)` from both expansions for one point.
pub fn relative_errors(
    arg: &VoigtArgument,
    plan: &TruncationPlan,
    variant: HatVariant,
    k_terms: usize,
    ctx: &PrecisionContext,
) -> Result<(Option<f64>, Option<f64>)> {
    let exact = remainder_exact(arg, plan.m, ctx)?;
    let e = hat_expansion(arg, plan, variant, k_terms, ctx)?;
    Ok((relative_error(&e.k_hat, &exact.k_hat), relative_error(&e.l_hat, &exact.l_hat)))
}

/// The second table: relative errors at `|w| = 6` with three remainder terms.
pub fn compute_table2(ctx: &PrecisionContext) -> Result<Vec<Table2Row>> {
    let reference = reference_tables().table2;
    let r = parse_real(&reference.r, ctx)?;
    reference
        .rows
        .par_iter()
        .map(|row| {
            let arg = polar_point(&reference.r, &row.theta_over_pi, ctx)?;
            let plan = TruncationPlan::with_m(&r, reference.m, ctx)?;
            let (eq41_k, eq41_l) = relative_errors(&arg, &plan, HatVariant::Eq41, reference.k_terms, ctx)?;
            let (eq42_k, eq42_l) = relative_errors(&arg, &plan, HatVariant::Eq42, reference.k_terms, ctx)?;
            Ok(Table2Row { theta_over_pi: row.theta_over_pi.clone(), eq41_k, eq41_l, eq42_k, eq42_l })
        })
        .collect()
}

/// One compared cell.
#[derive(Debug, Clone, Serialize)]
pub struct CellCheck {
    pub label: String,
    pub computed: String,
    pub expected: String,
    /// Distance in units of the last printed digit.
    pub distance: Option<f64>,
    pub pass: bool,
}

fn check_cell(label: String, computed: Option<f64>, expected: &str, signed: bool) -> CellCheck {
    let printed = Printed::parse(expected).expect("reference cell is well formed");
    let distance = last_digit_distance(computed, &printed);
    let shown = format_printed(computed, printed.decimals(), signed);
    CellCheck {
        label,
        computed: shown.to_string(),
        expected: expected.to_string(),
        distance,
        pass: distance.is_some_and(|d| d <= 1.0),
    }
}

pub fn check_table1(blocks: &[Table1Block]) -> Vec<CellCheck> {
    let reference = reference_tables().table1;
    let mut out = Vec::new();
    for (b, rb) in blocks.iter().zip(&reference.blocks) {
        let head = format!("theta/pi={} {}", rb.theta_over_pi, rb.variant);
        for (k, (row, (ek, el))) in b.rows.iter().zip(rb.k_hat.iter().zip(&rb.l_hat)).enumerate() {
            out.push(check_cell(format!("{head} k={k} Khat"), Some(row.0), ek, true));
            out.push(check_cell(format!("{head} k={k} Lhat"), Some(row.1), el, true));
        }
        out.push(check_cell(format!("{head} exact Khat"), Some(b.exact.0), &rb.exact_k, true));
        out.push(check_cell(format!("{head} exact Lhat"), Some(b.exact.1), &rb.exact_l, true));
    }
    out
}

pub fn check_table2(rows: &[Table2Row]) -> Vec<CellCheck> {
    let reference = reference_tables().table2;
    let mut out = Vec::new();
    for (row, rr) in rows.iter().zip(&reference.rows) {
        let head = format!("theta/pi={}", rr.theta_over_pi);
        out.push(check_cell(format!("{head} eq41 Khat"), row.eq41_k, &rr.eq41_k, false));
        out.push(check_cell(format!("{head} eq41 Lhat"), row.eq41_l, &rr.eq41_l, false));
        out.push(check_cell(format!("{head} eq42 Khat"), row.eq42_k, &rr.eq42_k, false));
        out.push(check_cell(format!("{head} eq42 Lhat"), row.eq42_l, &rr.eq42_l, false));
    }
    out
}

pub fn render_table1(blocks: &[Table1Block]) -> String {
    let reference = reference_tables().table1;
    let mut s = format!("|w| = {}, m = {}, alpha = {}\n", reference.r, reference.m, reference.alpha);
    let mut header = format!("{:>5}", "k");
    for b in blocks {
        let tag = format!("theta/pi={} {:?}", b.theta_over_pi, b.variant).to_lowercase();
        header.push_str(&format!(" | {:>24} | {:>16}", format!("Khat {tag}"), "Lhat"));
    }
    s.push_str(&header);
    s.push('\n');
    let nrows = blocks.iter().map(|b| b.rows.len()).max().unwrap_or(0);
    for k in 0..nrows {
        let mut line = format!("{k:>5}");
        for b in blocks {
            let (kh, lh) = b.rows[k];
            line.push_str(&format!(" | {:>24} | {:>16}", format_printed(Some(kh), 8, true), format_printed(Some(lh), 8, true)));
        }
        s.push_str(&line);
        s.push('\n');
    }
    let mut line = format!("{:>5}", "exact");
    for b in blocks {
        line.push_str(&format!(
            " | {:>24} | {:>16}",
            format_printed(Some(b.exact.0), 8, true),
            format_printed(Some(b.exact.1), 8, true)
        ));
    }
    s.push_str(&line);
    s.push('\n');
    s
}

pub fn render_table2(rows: &[Table2Row]) -> String {
    let reference = reference_tables().table2;
    let mut s = format!(
        "|w| = {}, m = {}, alpha = {}, k_terms = {}\n",
        reference.r, reference.m, reference.alpha, reference.k_terms
    );
    s.push_str(&format!(
        "{:>8} | {:>10} | {:>10} | {:>10} | {:>10}\n",
        "theta/pi", "eq41 Khat", "eq41 Lhat", "eq42 Khat", "eq42 Lhat"
    ));
    for r in rows {
        s.push_str(&format!(
            "{:>8} | {:>10} | {:>10} | {:>10} | {:>10}\n",
            r.theta_over_pi,
            format_printed(r.eq41_k, 3, false),
            format_printed(r.eq41_l, 3, false),
            format_printed(r.eq42_k, 3, false),
            format_printed(r.eq42_l, 3, false)
        ));
    }
    s
}
