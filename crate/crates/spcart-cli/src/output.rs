//! Report records and their two serializations: CSV rounded to six
//! significant digits for table diffing, and JSON lines at full precision.

use serde::Serialize;
use spcart::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    JsonLines,
}

impl OutputFormat {
    pub fn parse(token: &str) -> Result<Self> {
        match token {
            "csv" => Ok(OutputFormat::Csv),
            "json-lines" => Ok(OutputFormat::JsonLines),
            other => Err(Error::InvalidArgument(format!(
                "--format: expected csv or json-lines, got {other:?}"
            ))),
        }
    }

    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::JsonLines => "jsonl",
        }
    }
}

/// Rounds to 6 significant digits and prints the shortest representation
/// of the rounded value.
pub fn fmt_sig6(v: f64) -> String {
    if v.is_nan() {
        return String::new();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{v:.5e}").parse().expect("rounded float");
    format!("{rounded}")
}

fn json_f64(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else {
        serde_json::Value::Null
    }
}

/// One fitted run: the record behind both `fit` metrics files and
/// `compare` table rows. `wall_time_s` stays in the last column so
/// deterministic comparisons can strip it.
#[derive(Debug, Clone, Serialize)]
pub struct MetricsRecord {
    pub method: String,
    pub trunc: String,
    pub lambda: Option<f64>,
    pub r: usize,
    pub sp: f64,
    pub std: f64,
    pub sp_worst: f64,
    pub nor: f64,
    pub ev: f64,
    pub cpev: f64,
    pub nz: usize,
    pub cardinalities: Vec<usize>,
    pub cpev_pca: f64,
    pub iterations: usize,
    pub converged: bool,
    pub warnings: usize,
    pub wall_time_s: f64,
}

impl MetricsRecord {
    pub const CSV_HEADER: &'static str = "method,trunc,lambda,r,sp,std,sp_worst,nor,ev,cpev,nz,cardinalities,cpev_pca,iterations,converged,warnings,wall_time_s";

    pub fn csv_row(&self) -> String {
        let cards: Vec<String> = self.cardinalities.iter().map(|c| c.to_string()).collect();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.method,
            self.trunc,
            self.lambda.map(fmt_sig6).unwrap_or_default(),
            self.r,
            fmt_sig6(self.sp),
            fmt_sig6(self.std),
            fmt_sig6(self.sp_worst),
            fmt_sig6(self.nor),
            fmt_sig6(self.ev),
            fmt_sig6(self.cpev),
            self.nz,
            cards.join("|"),
            fmt_sig6(self.cpev_pca),
            self.iterations,
            self.converged,
            self.warnings,
            fmt_sig6(self.wall_time_s),
        )
    }

    pub fn json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

/// One theoretical-vs-empirical bound line.
#[derive(Debug, Clone)]
pub struct BoundRecord {
    pub name: String,
    pub kind: String,
    pub lambda: f64,
    pub p: usize,
    pub r: usize,
    pub lo: f64,
    pub hi: f64,
    pub empirical: f64,
    pub satisfied: bool,
    pub vacuous: bool,
    /// False when the bound's hypotheses do not cover this run; such
    /// lines are informational and `satisfied` is not meaningful.
    pub applicable: bool,
    pub note: String,
}

impl BoundRecord {
    pub const CSV_HEADER: &'static str =
        "name,kind,lambda,p,r,lo,hi,empirical,satisfied,vacuous,applicable,note";

    pub fn from_report(report: &spcart::bounds::BoundReport, applicable: bool) -> Self {
        BoundRecord {
            name: report.name.clone(),
            kind: report.context.kind.clone(),
            lambda: report.context.lambda,
            p: report.context.p,
            r: report.context.r,
            lo: report.theoretical.lo,
            hi: report.theoretical.hi,
            empirical: report.empirical,
            satisfied: report.satisfied,
            vacuous: report.vacuous,
            applicable,
            note: report.note.clone().unwrap_or_default(),
        }
    }

    pub fn inapplicable(name: &str, kind: &str, note: String) -> Self {
        BoundRecord {
            name: name.to_string(),
            kind: kind.to_string(),
            lambda: f64::NAN,
            p: 0,
            r: 0,
            lo: f64::NAN,
            hi: f64::NAN,
            empirical: f64::NAN,
            satisfied: false,
            vacuous: false,
            applicable: false,
            note,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.name,
            self.kind,
            fmt_sig6(self.lambda),
            self.p,
            self.r,
            fmt_sig6(self.lo),
            fmt_sig6(self.hi),
            fmt_sig6(self.empirical),
            self.satisfied,
            self.vacuous,
            self.applicable,
            self.note.replace(',', ";"),
        )
    }

    pub fn json_line(&self) -> String {
        serde_json::json!({
            "name": self.name,
            "kind": self.kind,
            "lambda": json_f64(self.lambda),
            "p": self.p,
            "r": self.r,
            "lo": json_f64(self.lo),
            "hi": json_f64(self.hi),
            "empirical": json_f64(self.empirical),
            "satisfied": self.satisfied,
            "vacuous": self.vacuous,
            "applicable": self.applicable,
            "note": self.note,
        })
        .to_string()
    }
}

/// Writes records as a CSV table or JSON lines.
pub fn write_records<R>(
    path: &std::path::Path,
    format: OutputFormat,
    csv_header: &str,
    records: &[R],
    csv_row: impl Fn(&R) -> String,
    json_line: impl Fn(&R) -> String,
) -> Result<()> {
    let mut text = String::new();
    match format {
        OutputFormat::Csv => {
            text.push_str(csv_header);
            text.push('\n');
            for record in records {
                text.push_str(&csv_row(record));
                text.push('\n');
            }
        }
        OutputFormat::JsonLines => {
            for record in records {
                text.push_str(&json_line(record));
                text.push('\n');
            }
        }
    }
    std::fs::write(path, text)?;
    Ok(())
}
