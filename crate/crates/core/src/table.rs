//! Bulk classification tables over all of `Lambda^+(2)` up to a degree.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::gl2::{Gl2Engine, DEFAULT_ORACLE_THRESHOLD};
use crate::weights::{partitions, GroupParams, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Parse(format!("unknown format {other:?} (expected text, json or csv)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub lam: Weight,
    pub params: GroupParams,
    pub critical: bool,
    pub divind: i64,
    pub inf_injective: bool,
    /// Largest `m <= gm_max` with `G_m`-injectivity, 0 if none.
    pub gm_injective_up_to: u32,
    pub standard_form: Option<String>,
}

impl TableRow {
    pub fn compute(engine: &Gl2Engine, lambda: &Weight, gm_max: u32) -> Result<TableRow> {
        let c = engine.classify(lambda)?;
        Ok(TableRow {
            lam: c.lam,
            params: c.params,
            critical: c.critical,
            divind: c.divind,
            inf_injective: c.inf_injective,
            gm_injective_up_to: engine.gm_injective_up_to(lambda, gm_max)?,
            standard_form: c.standard_form.map(|f| f.to_string()),
        })
    }

    /// The `G_m` column: `None` where the kernel does not exist
    /// (characteristic 0, `m >= 2`).
    pub fn gm_cell(&self, m: u32) -> Option<bool> {
        if self.params.p() == 0 && m >= 2 {
            return None;
        }
        Some(m <= self.gm_injective_up_to)
    }
}

/// Every `lambda` with `deg lambda <= deg_max`, by degree and then
/// lexicographically descending.
pub fn table_weights(deg_max: i64) -> Vec<Weight> {
    (0..=deg_max).flat_map(|r| partitions(r, 2)).collect()
}

pub fn build_table(params: GroupParams, deg_max: i64, gm_max: u32, exec: Execution) -> Result<Vec<TableRow>> {
    let engine = Gl2Engine::shared(params);
    engine.warm(deg_max.min(DEFAULT_ORACLE_THRESHOLD), exec)?;
    exec.try_map(&table_weights(deg_max), |lam| TableRow::compute(&engine, lam, gm_max))
}

pub fn render_table(rows: &[TableRow], format: Format, gm_max: u32) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(rows)? + "\n"),
        Format::Csv => render_csv(rows, gm_max),
        Format::Text => Ok(render_text(rows, gm_max)),
    }
}

fn bool_cell(b: Option<bool>) -> String {
    b.map(|b| b.to_string()).unwrap_or_default()
}

fn render_csv(rows: &[TableRow], gm_max: u32) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header =
        vec!["degree".to_string(), "weight".into(), "critical".into(), "divind".into(), "inf_injective".into()];
    header.extend((1..=gm_max).map(|m| format!("gm{m}")));
    header.push("standard_form".into());
    w.write_record(&header)?;
    for row in rows {
        let mut rec = vec![
            row.lam.degree().to_string(),
            row.lam.to_string(),
            row.critical.to_string(),
            row.divind.to_string(),
            row.inf_injective.to_string(),
        ];
        rec.extend((1..=gm_max).map(|m| bool_cell(row.gm_cell(m))));
        rec.push(row.standard_form.clone().unwrap_or_default());
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn render_text(rows: &[TableRow], gm_max: u32) -> String {
    let mut out = String::new();
    if let Some(first) = rows.first() {
        writeln!(out, "# {}", first.params).unwrap();
    }
    let mut header =
        format!("{:>3}  {:<10} {:<8} {:>6}  {:<13}", "deg", "weight", "critical", "divind", "inf_injective");
    for m in 1..=gm_max {
        write!(header, " {:<5}", format!("gm{m}")).unwrap();
    }
    header.push_str(" standard_form");
    writeln!(out, "{}", header.trim_end()).unwrap();
    for row in rows {
        let mut line = format!(
            "{:>3}  {:<10} {:<8} {:>6}  {:<13}",
            row.lam.degree(),
            row.lam.to_string(),
            row.critical,
            row.divind,
            row.inf_injective
        );
        for m in 1..=gm_max {
            write!(line, " {:<5}", row.gm_cell(m).map(|b| b.to_string()).unwrap_or_else(|| "-".into())).unwrap();
        }
        write!(line, " {}", row.standard_form.as_deref().unwrap_or("-")).unwrap();
        writeln!(out, "{line}").unwrap();
    }
    out
}
