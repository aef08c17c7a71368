//! Sweep row assembly and byte-deterministic CSV/JSON encoding.
//!
//! CSV conventions: ',' separator, '.' decimal, empty field = null, LF line
//! endings, floats printed with 17 significant digits.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::config::BaselineFlags;

/// The four columns of one bound family.
#[derive(Debug, Clone, Default)]
pub struct FamilyCols {
    pub lower_plus: Option<f64>,
    pub lower_minus: Option<f64>,
    pub upper_plus: Option<f64>,
    pub upper_minus: Option<f64>,
}

/// One evaluated grid point.
#[derive(Debug, Clone, Default)]
pub struct Row {
    pub theta: f64,
    pub phi: f64,
    pub var_a: f64,
    pub var_b: f64,
    pub sum: f64,
    /// |<psi|psi_perp>| before any repair.
    pub ortho_overlap: f64,
    pub families: BTreeMap<u8, FamilyCols>,
    pub combined_lower: Option<f64>,
    pub combined_upper: Option<f64>,
    pub combined_lower_source: Option<String>,
    pub combined_upper_source: Option<String>,
    pub robertson: Option<f64>,
    pub schrodinger: Option<f64>,
    pub mp_plus: Option<f64>,
    pub mp_minus: Option<f64>,
    pub reverse_cov: Option<f64>,
}

/// 17-significant-digit float encoding used for every CSV number.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn fmt_opt_str(v: &Option<String>) -> String {
    v.clone().unwrap_or_default()
}

/// Header row for the given family/baseline selection.
pub fn csv_header(families: &[u8], baselines: &BaselineFlags) -> String {
    let mut cols = vec![
        "theta".to_string(),
        "phi".to_string(),
        "dA2".to_string(),
        "dB2".to_string(),
        "sum".to_string(),
        "orthoOverlap".to_string(),
    ];
    for f in families {
        cols.push(format!("L{f}+"));
        cols.push(format!("L{f}-"));
        cols.push(format!("U{f}+"));
        cols.push(format!("U{f}-"));
    }
    cols.push("combinedL".to_string());
    cols.push("combinedU".to_string());
    cols.push("combinedLSource".to_string());
    cols.push("combinedUSource".to_string());
    if baselines.robertson {
        cols.push("robertson".to_string());
    }
    if baselines.schrodinger {
        cols.push("schrodinger".to_string());
    }
    if baselines.maccone_pati {
        cols.push("mp+".to_string());
        cols.push("mp-".to_string());
    }
    if baselines.reverse_cov {
        cols.push("reverseCov".to_string());
    }
    cols.join(",")
}

/// One CSV data row matching [`csv_header`]'s column order.
pub fn csv_row(row: &Row, families: &[u8], baselines: &BaselineFlags) -> String {
    let mut cols = vec![
        fmt_f64(row.theta),
        fmt_f64(row.phi),
        fmt_f64(row.var_a),
        fmt_f64(row.var_b),
        fmt_f64(row.sum),
        fmt_f64(row.ortho_overlap),
    ];
    let empty = FamilyCols::default();
    for f in families {
        let cells = row.families.get(f).unwrap_or(&empty);
        cols.push(fmt_opt(cells.lower_plus));
        cols.push(fmt_opt(cells.lower_minus));
        cols.push(fmt_opt(cells.upper_plus));
        cols.push(fmt_opt(cells.upper_minus));
    }
    cols.push(fmt_opt(row.combined_lower));
    cols.push(fmt_opt(row.combined_upper));
    cols.push(fmt_opt_str(&row.combined_lower_source));
    cols.push(fmt_opt_str(&row.combined_upper_source));
    if baselines.robertson {
        cols.push(fmt_opt(row.robertson));
    }
    if baselines.schrodinger {
        cols.push(fmt_opt(row.schrodinger));
    }
    if baselines.maccone_pati {
        cols.push(fmt_opt(row.mp_plus));
        cols.push(fmt_opt(row.mp_minus));
    }
    if baselines.reverse_cov {
        cols.push(fmt_opt(row.reverse_cov));
    }
    cols.join(",")
}

fn opt_value(v: Option<f64>) -> Value {
    v.map_or(Value::Null, |x| json!(x))
}

/// JSON encoding of one row (used by `compute`).
pub fn row_to_json(row: &Row) -> Value {
    let families: serde_json::Map<String, Value> = row
        .families
        .iter()
        .map(|(f, cells)| {
            (
                f.to_string(),
                json!({
                    "L+": opt_value(cells.lower_plus),
                    "L-": opt_value(cells.lower_minus),
                    "U+": opt_value(cells.upper_plus),
                    "U-": opt_value(cells.upper_minus),
                }),
            )
        })
        .collect();
    json!({
        "theta": row.theta,
        "phi": row.phi,
        "dA2": row.var_a,
        "dB2": row.var_b,
        "sum": row.sum,
        "orthoOverlap": row.ortho_overlap,
        "families": families,
        "combinedL": opt_value(row.combined_lower),
        "combinedU": opt_value(row.combined_upper),
        "combinedLSource": row.combined_lower_source,
        "combinedUSource": row.combined_upper_source,
        "robertson": opt_value(row.robertson),
        "schrodinger": opt_value(row.schrodinger),
        "mp+": opt_value(row.mp_plus),
        "mp-": opt_value(row.mp_minus),
        "reverseCov": opt_value(row.reverse_cov),
    })
}
