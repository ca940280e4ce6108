//! Report rows and their TSV / JSON encodings.
//!
//! Both encodings round-trip: `render(parse(render(rows))) == render(rows)` byte for byte.

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

/// Whether the routes in a row agree. `Single` rows used one route only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Agreement {
    Yes,
    No,
    Single,
}

impl Agreement {
    pub fn of(a: &str, b: &str) -> Self {
        if a == b {
            Agreement::Yes
        } else {
            Agreement::No
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Agreement::Yes => "yes",
            Agreement::No => "no",
            Agreement::Single => "single",
        }
    }

    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "yes" => Ok(Agreement::Yes),
            "no" => Ok(Agreement::No),
            "single" => Ok(Agreement::Single),
            _ => Err(CliError::Report(format!("bad agreement flag {s:?}"))),
        }
    }
}

/// One query and its results. `result` comes from the first route in `route`,
/// `check` from the second (empty for single-route rows).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub mode: String,
    pub p: Option<u32>,
    pub e: Option<u32>,
    /// `n` for a single split test, `n_max` for searches.
    pub n: Option<u32>,
    /// Divisor literal or `key=value` parameters.
    pub query: String,
    pub route: String,
    pub result: String,
    pub check: String,
    pub agree: Agreement,
}

const COLUMNS: [&str; 9] = ["mode", "p", "e", "n", "query", "route", "result", "check", "agree"];

impl ReportRow {
    pub fn disagrees(&self) -> bool {
        self.agree == Agreement::No
    }
}

fn opt(v: Option<u32>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn parse_opt(s: &str) -> Result<Option<u32>, CliError> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| CliError::Report(format!("bad integer field {s:?}")))
}

fn check_cell(s: &str) -> Result<(), CliError> {
    if s.contains(['\t', '\n', '\r']) {
        return Err(CliError::Report(format!("cell {s:?} contains a tab or newline")));
    }
    Ok(())
}

pub fn render(rows: &[ReportRow], format: Format) -> Result<String, CliError> {
    match format {
        Format::Tsv => render_tsv(rows),
        Format::Json => render_json(rows),
    }
}

pub fn parse(text: &str, format: Format) -> Result<Vec<ReportRow>, CliError> {
    match format {
        Format::Tsv => parse_tsv(text),
        Format::Json => parse_json(text),
    }
}

pub fn render_tsv(rows: &[ReportRow]) -> Result<String, CliError> {
    let mut out = COLUMNS.join("\t");
    out.push('\n');
    for r in rows {
        let cells = [r.mode.clone(), opt(r.p), opt(r.e), opt(r.n), r.query.clone(), r.route.clone(), r.result.clone(), r.check.clone(), r.agree.as_str().to_string()];
        for c in &cells {
            check_cell(c)?;
        }
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_tsv(text: &str) -> Result<Vec<ReportRow>, CliError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| CliError::Report("empty TSV".into()))?;
    if header.split('\t').ne(COLUMNS) {
        return Err(CliError::Report(format!("unexpected TSV header {header:?}")));
    }
    lines
        .map(|line| {
            let c: Vec<&str> = line.split('\t').collect();
            if c.len() != COLUMNS.len() {
                return Err(CliError::Report(format!("expected {} cells, got {}", COLUMNS.len(), c.len())));
            }
            Ok(ReportRow {
                mode: c[0].into(),
                p: parse_opt(c[1])?,
                e: parse_opt(c[2])?,
                n: parse_opt(c[3])?,
                query: c[4].into(),
                route: c[5].into(),
                result: c[6].into(),
                check: c[7].into(),
                agree: Agreement::parse(c[8])?,
            })
        })
        .collect()
}

/// One JSON object per line, keys in column order.
pub fn render_json(rows: &[ReportRow]) -> Result<String, CliError> {
    let mut out = String::new();
    for r in rows {
        out.push_str(&serde_json::to_string(r).map_err(|e| CliError::Report(e.to_string()))?);
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_json(text: &str) -> Result<Vec<ReportRow>, CliError> {
    text.lines().filter(|l| !l.is_empty()).map(|l| serde_json::from_str(l).map_err(|e| CliError::Report(e.to_string()))).collect()
}
