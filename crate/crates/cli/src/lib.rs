//! Front end for the `qfs` binary: argument parsing, query evaluation and reports.
//!
//! Exit status: 0 when every row succeeded and all routes agree, 2 when some row shows a
//! route disagreement (or an inconclusive direct verdict), 1 on usage errors.

pub mod grid;
pub mod report;

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use qfsplit::dieudonne::{abelian_height, closed_form_height, quasi_fe_height};
use qfsplit::field::is_prime;
use qfsplit::logcy::{classify, height_from_table, height_via_cover, standard_divisor, LogCYClass};
use qfsplit::qfs::{height_search_with, is_n_quasi_fe_split_with, QfsLimits, SplitQuery};
use qfsplit::{Field, FqContext, HeightResult, PointP1, QDivisor, SplitVerdict};

use report::{Agreement, Format, ReportRow};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qfsplit::Error),
    #[error("report: {0}")]
    Report(String),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DISAGREE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qfs", version, about = "Quasi-F-split heights: Dieudonné modules, congruence tables, and a direct verifier on P¹")]
pub struct Cli {
    /// Output encoding.
    #[arg(long, value_enum, global = true, default_value = "tsv")]
    pub format: Format,
    /// Cap on the Laurent span of lifts in the direct verifier.
    #[arg(long, env = "QFS_WINDOW_CAP", global = true)]
    pub window_cap: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Heights from closed forms and tables.
    #[command(subcommand)]
    Height(HeightCmd),
    /// Single split test `(P¹, Δ)` at a fixed `n` with the direct verifier.
    #[command(subcommand)]
    Verify(P1Cmd),
    /// Height search with the direct verifier.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Per-prime tables for log Calabi-Yau cases.
    #[command(subcommand)]
    Table(TableCmd),
    /// Cross-checks over a fixed grid.
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Subcommand, Debug)]
pub enum HeightCmd {
    /// Height of a Calabi-Yau with formal group of height H (engine vs closed form).
    Dieudonne {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        e: u32,
        /// Search bound; defaults to one past the closed form.
        #[arg(long)]
        n_max: Option<u32>,
    },
    /// Height of an abelian variety of dimension G and p-rank F.
    Abelian {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        f: u32,
        #[arg(long)]
        e: u32,
    },
    /// Height of a log Calabi-Yau pair (P¹, Δ).
    Logcy {
        #[command(flatten)]
        div: DivisorArgs,
        #[arg(long)]
        e: u32,
        #[arg(long, value_enum, default_value = "both")]
        route: Route,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Table,
    Cover,
    Both,
}

#[derive(Args, Debug, Clone)]
pub struct DivisorArgs {
    /// Divisor literal, e.g. `2/3:0,2/3:1,2/3:inf`; points are field literals in `z`, `inf` or `@label`.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: String,
    #[arg(long)]
    pub p: u32,
    /// Degree of the point field over F_p; defaults to 2 when the literal mentions `z`, else 1.
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum P1Cmd {
    P1 {
        #[command(flatten)]
        div: DivisorArgs,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        e: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum SearchCmd {
    P1 {
        #[command(flatten)]
        div: DivisorArgs,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        n_max: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Case {
    I,
    Ii,
    Iii,
    Iv,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::I => "i",
            Case::Ii => "ii",
            Case::Iii => "iii",
            Case::Iv => "iv",
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum TableCmd {
    /// Table and cover routes for every prime up to PMAX.
    Logcy {
        #[arg(long, value_enum)]
        case: Case,
        #[arg(long)]
        p_max: u32,
        #[arg(long)]
        e: u32,
        /// Fourth point for case iv, read in F_{p²}; replaced by `z` when it reduces to 0 or 1.
        #[arg(long, default_value = "2")]
        lambda: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GridSize {
    Small,
    Full,
}

#[derive(Subcommand, Debug)]
pub enum CheckCmd {
    /// Every engine against its independent route on a fixed grid.
    All {
        #[arg(long, value_enum, default_value = "small")]
        grid: GridSize,
    },
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn limits(window_cap: Option<usize>) -> QfsLimits {
    let mut l = QfsLimits::default();
    if let Some(c) = window_cap {
        l.window_cap = c;
    }
    l
}

fn check_prime(p: u32) -> Result<(), CliError> {
    if is_prime(p as u64) {
        Ok(())
    } else {
        Err(usage(format!("p = {p} is not prime")))
    }
}

fn check_e(e: u32) -> Result<(), CliError> {
    if e == 0 {
        Err(usage("e must be at least 1"))
    } else {
        Ok(())
    }
}

impl DivisorArgs {
    pub fn parse(&self) -> Result<(Field, QDivisor), CliError> {
        check_prime(self.p)?;
        let m = self.m.unwrap_or(if self.delta.contains('z') { 2 } else { 1 });
        let f = FqContext::new(self.p, m).map_err(|e| usage(e.to_string()))?;
        let d = QDivisor::parse(&self.delta, &f).map_err(|e| usage(format!("malformed divisor literal: {e}")))?;
        Ok((f, d))
    }
}

/// Unsupported parameters and malformed input are usage errors; everything else propagates.
fn as_usage(e: qfsplit::Error) -> CliError {
    match e {
        qfsplit::Error::Unsupported(_) | qfsplit::Error::Invalid(_) | qfsplit::Error::Parse(_) => usage(e.to_string()),
        other => CliError::Core(other),
    }
}

pub fn verdict_str(v: &SplitVerdict) -> String {
    match v {
        SplitVerdict::Split(_) => "split".into(),
        SplitVerdict::NotSplit(_) => "not-split".into(),
        SplitVerdict::Inconclusive(_) => "inconclusive".into(),
    }
}

/// Search verdict as a height: `Split(n)` is `n`; `NotSplit(n)` is `>n`.
pub fn search_str(v: &SplitVerdict) -> String {
    match v {
        SplitVerdict::Split(n) => n.to_string(),
        SplitVerdict::NotSplit(n) => format!(">{n}"),
        SplitVerdict::Inconclusive(_) => "inconclusive".into(),
    }
}

/// Whether a search verdict is consistent with a predicted height at bound `n_max`.
pub fn search_matches(pred: &HeightResult, v: &SplitVerdict, n_max: u32) -> bool {
    match (pred, v) {
        (HeightResult::Finite(h), SplitVerdict::Split(n)) => h == n,
        (HeightResult::Finite(h), SplitVerdict::NotSplit(n)) => *h > *n && *n == n_max,
        (HeightResult::Infinite(_), SplitVerdict::NotSplit(n)) => *n == n_max,
        _ => false,
    }
}

pub fn dieudonne_row(h: usize, p: u32, e: u32, n_max: Option<u32>) -> Result<ReportRow, CliError> {
    check_prime(p)?;
    check_e(e)?;
    if h == 0 {
        return Err(usage("h must be at least 1"));
    }
    let closed = closed_form_height(h as u32, e);
    let n_max = n_max.unwrap_or(closed + 1);
    let got = quasi_fe_height(h, p, e, n_max).map_err(as_usage)?;
    let want = if closed <= n_max { HeightResult::Finite(closed) } else { HeightResult::ExceedsBound(n_max) };
    Ok(ReportRow {
        mode: "height-dieudonne".into(),
        p: Some(p),
        e: Some(e),
        n: Some(n_max),
        query: format!("h={h}"),
        route: "dieudonne+closed-form".into(),
        result: got.to_string(),
        check: want.to_string(),
        agree: Agreement::of(&got.to_string(), &want.to_string()),
    })
}

pub fn abelian_row(g: u32, f: u32, e: u32) -> Result<ReportRow, CliError> {
    check_e(e)?;
    let got = abelian_height(g, f, e).map_err(as_usage)?;
    Ok(ReportRow {
        mode: "height-abelian".into(),
        p: None,
        e: Some(e),
        n: None,
        query: format!("g={g},f={f}"),
        route: "abelian".into(),
        result: got.to_string(),
        check: String::new(),
        agree: Agreement::Single,
    })
}

pub fn logcy_row(field: &Field, delta: &QDivisor, e: u32, route: Route) -> Result<ReportRow, CliError> {
    check_e(e)?;
    let p = field.p();
    let class = classify(delta);
    if let LogCYClass::NotLogCY(why) = &class {
        return Err(usage(format!("not a log Calabi-Yau pair: {why}")));
    }
    let table = || height_from_table(&class, p, e, Some(field)).map_err(as_usage);
    let cover = || height_via_cover(&class, delta, p, e, Some(field)).map_err(as_usage);
    let (route_name, result, check, agree) = match route {
        Route::Table => ("table", table()?.to_string(), String::new(), Agreement::Single),
        Route::Cover => ("cover", cover()?.to_string(), String::new(), Agreement::Single),
        Route::Both => {
            let (a, b) = (table()?.to_string(), cover()?.to_string());
            let agree = Agreement::of(&a, &b);
            ("table+cover", a, b, agree)
        }
    };
    Ok(ReportRow {
        mode: "height-logcy".into(),
        p: Some(p),
        e: Some(e),
        n: None,
        query: delta.format(field),
        route: route_name.into(),
        result,
        check,
        agree,
    })
}

fn direct_query(field: &Field, delta: &QDivisor, e: u32, n: u32) -> Result<SplitQuery, CliError> {
    check_e(e)?;
    if n == 0 {
        return Err(usage("n must be at least 1"));
    }
    Ok(SplitQuery { field: field.clone(), delta: delta.clone(), e, n })
}

pub fn verify_row(field: &Field, delta: &QDivisor, e: u32, n: u32, lim: &QfsLimits) -> Result<ReportRow, CliError> {
    let q = direct_query(field, delta, e, n)?;
    let (v, _) = is_n_quasi_fe_split_with(&q, lim).map_err(as_usage)?;
    Ok(ReportRow {
        mode: "verify-p1".into(),
        p: Some(field.p()),
        e: Some(e),
        n: Some(n),
        query: delta.format(field),
        route: "direct".into(),
        result: verdict_str(&v),
        check: String::new(),
        agree: if matches!(v, SplitVerdict::Inconclusive(_)) { Agreement::No } else { Agreement::Single },
    })
}

/// Direct search; log Calabi-Yau inputs are also checked against the table.
pub fn search_row(field: &Field, delta: &QDivisor, e: u32, n_max: u32, lim: &QfsLimits) -> Result<ReportRow, CliError> {
    direct_query(field, delta, e, n_max)?;
    let trace = height_search_with(field, delta, e, n_max, lim).map_err(as_usage)?;
    let class = classify(delta);
    let pred = if delta.is_zero() {
        Some(HeightResult::Finite(1))
    } else if matches!(class, LogCYClass::NotLogCY(_)) {
        None
    } else {
        height_from_table(&class, field.p(), e, Some(field)).ok()
    };
    let (route, check, agree) = match &pred {
        Some(h) => ("direct+table", h.to_string(), if search_matches(h, &trace.verdict, n_max) { Agreement::Yes } else { Agreement::No }),
        None => ("direct", String::new(), if matches!(trace.verdict, SplitVerdict::Inconclusive(_)) { Agreement::No } else { Agreement::Single }),
    };
    Ok(ReportRow {
        mode: "search-p1".into(),
        p: Some(field.p()),
        e: Some(e),
        n: Some(n_max),
        query: delta.format(field),
        route: route.into(),
        result: search_str(&trace.verdict),
        check,
        agree,
    })
}

/// The case divisor over `F_{p²}` on `0, 1, ∞` (and `λ` for case iv).
pub fn case_divisor(case: Case, p: u32, lambda: &str) -> Result<(Field, QDivisor), CliError> {
    let f = FqContext::new(p, 2).map_err(as_usage)?;
    let lam = if case == Case::Iv {
        let mut l = f.parse(lambda).map_err(|e| usage(format!("bad --lambda: {e}")))?;
        if l.is_zero() || l == f.one() {
            l = f.generator();
        }
        Some(PointP1::Rational(l))
    } else {
        None
    };
    let d = standard_divisor(case.name(), lam, &f).map_err(as_usage)?;
    Ok((f, d))
}

pub fn table_rows(case: Case, p_max: u32, e: u32, lambda: &str) -> Result<Vec<ReportRow>, CliError> {
    check_e(e)?;
    (2..=p_max)
        .filter(|&p| is_prime(p as u64))
        .map(|p| {
            let (f, d) = case_divisor(case, p, lambda)?;
            logcy_row(&f, &d, e, Route::Both).map(|mut r| {
                r.mode = "table-logcy".into();
                r
            })
        })
        .collect()
}

pub fn execute(cli: &Cli) -> Result<Vec<ReportRow>, CliError> {
    let lim = limits(cli.window_cap);
    match &cli.command {
        Command::Height(HeightCmd::Dieudonne { h, p, e, n_max }) => Ok(vec![dieudonne_row(*h, *p, *e, *n_max)?]),
        Command::Height(HeightCmd::Abelian { g, f, e }) => Ok(vec![abelian_row(*g, *f, *e)?]),
        Command::Height(HeightCmd::Logcy { div, e, route }) => {
            let (f, d) = div.parse()?;
            Ok(vec![logcy_row(&f, &d, *e, *route)?])
        }
        Command::Verify(P1Cmd::P1 { div, n, e }) => {
            let (f, d) = div.parse()?;
            Ok(vec![verify_row(&f, &d, *e, *n, &lim)?])
        }
        Command::Search(SearchCmd::P1 { div, e, n_max }) => {
            let (f, d) = div.parse()?;
            Ok(vec![search_row(&f, &d, *e, *n_max, &lim)?])
        }
        Command::Table(TableCmd::Logcy { case, p_max, e, lambda }) => table_rows(*case, *p_max, *e, lambda),
        Command::Check(CheckCmd::All { grid }) => grid::check_all(*grid, &lim),
    }
}

/// 2 if any row disagrees, else 0.
pub fn exit_status(rows: &[ReportRow]) -> i32 {
    if rows.iter().any(ReportRow::disagrees) {
        EXIT_DISAGREE
    } else {
        EXIT_OK
    }
}

/// Parses `argv`, writes the report to `out` and diagnostics to `err`; returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let rows = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    match report::render(&rows, cli.format) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    }
    let code = exit_status(&rows);
    if code == EXIT_DISAGREE {
        let _ = writeln!(err, "route disagreement in {} row(s)", rows.iter().filter(|r| r.disagrees()).count());
    }
    code
}
