//! Fit tables in Markdown and CSV.

use serde::{Deserialize, Serialize};

use super::FitResult;
use crate::distributions::Family;
use crate::error::Result;

/// One table row: a fit or the reason it failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub family: Family,
    pub fit: Option<FitResult>,
    pub error: Option<String>,
}

impl FitRow {
    pub fn new(family: Family, result: Result<FitResult>) -> Self {
        match result {
            Ok(fit) => Self {
                family,
                fit: Some(fit),
                error: None,
            },
            Err(e) => Self {
                family,
                fit: None,
                error: Some(e.to_string()),
            },
        }
    }
}

const HEADER: [&str; 5] = ["type", "parameters", "front exp", "tail exp", "KS test"];

fn cells(row: &FitRow, digits: usize) -> [String; 5] {
    let num = |v: Option<f64>| v.map(|x| format!("{x:.digits$}")).unwrap_or_default();
    match &row.fit {
        Some(fit) => {
            let params: Vec<String> = fit.spec.params().iter().map(|v| format!("{v:.digits$}")).collect();
            let exps = fit.exponents.unwrap_or(crate::ExponentReport {
                front_exponent: None,
                tail_exponent: None,
            });
            [
                row.family.label().to_string(),
                format!("{}({})", row.family, params.join(", ")),
                num(exps.front_exponent),
                num(exps.tail_exponent),
                format!("{:.digits$}", fit.ks),
            ]
        }
        None => [
            row.family.label().to_string(),
            format!("failed: {}", row.error.as_deref().unwrap_or("unknown error")),
            String::new(),
            String::new(),
            String::new(),
        ],
    }
}

/// Markdown table with four decimals.
pub fn render_markdown(rows: &[FitRow]) -> String {
    let mut out = format!("| {} |\n|{}\n", HEADER.join(" | "), "---|".repeat(HEADER.len()));
    for row in rows {
        let c = cells(row, 4).map(|s| s.replace('|', "\\|"));
        out.push_str(&format!("| {} |\n", c.join(" | ")));
    }
    out
}

/// CSV table with full precision.
pub fn render_csv(rows: &[FitRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).expect("in-memory write");
    for row in rows {
        let c = match &row.fit {
            Some(fit) => {
                let params: Vec<String> = fit.spec.params().iter().map(|v| format!("{v}")).collect();
                let e = fit.exponents;
                let num = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
                [
                    row.family.label().to_string(),
                    format!("{}({})", row.family, params.join(", ")),
                    num(e.and_then(|e| e.front_exponent)),
                    num(e.and_then(|e| e.tail_exponent)),
                    format!("{}", fit.ks),
                ]
            }
            None => cells(row, 4),
        };
        w.write_record(&c).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}
