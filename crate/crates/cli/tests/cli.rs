use std::process::Command;

use qfsplit_cli::report::{self, Agreement, Format};

fn qfs(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qfs")).args(args).output().expect("spawn qfs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn rows(args: &[&str]) -> (i32, Vec<report::ReportRow>) {
    let (code, out, err) = qfs(args);
    let parsed = report::parse_tsv(&out).unwrap_or_else(|e| panic!("{e}: {out}\n{err}"));
    (code, parsed)
}

#[test]
fn dieudonne_height_agrees_with_closed_form() {
    let (code, r) = rows(&["height", "dieudonne", "--h", "2", "--p", "3", "--e", "3"]);
    assert_eq!(code, 0);
    assert_eq!((r[0].result.as_str(), r[0].check.as_str(), r[0].agree), ("4", "4", Agreement::Yes));
    assert_eq!(r[0].route, "dieudonne+closed-form");
}

#[test]
fn denominator_divisible_by_p_is_never_split() {
    let (code, r) = rows(&["height", "logcy", "--delta", "2/3:0,2/3:1,2/3:inf", "--p", "3", "--e", "1"]);
    assert_eq!(code, 0);
    assert_eq!((r[0].result.as_str(), r[0].check.as_str()), ("inf", "inf"));
}

#[test]
fn case_ii_table_follows_p_mod_4() {
    let (code, r) = rows(&["table", "logcy", "--case", "ii", "--p-max", "20", "--e", "2"]);
    assert_eq!(code, 0);
    let got: Vec<(u32, &str)> = r.iter().map(|x| (x.p.unwrap(), x.result.as_str())).collect();
    let want = [(2, "inf"), (3, "3"), (5, "1"), (7, "3"), (11, "3"), (13, "1"), (17, "1"), (19, "3")];
    assert_eq!(got, want);
    assert!(r.iter().all(|x| x.agree == Agreement::Yes));
}

#[test]
fn direct_search_matches_table_for_legendre_pair() {
    let (code, r) = rows(&["search", "p1", "--delta", "1/2:0,1/2:1,1/2:2,1/2:inf", "--p", "3", "--e", "1", "--n-max", "3"]);
    assert_eq!(code, 0);
    assert_eq!((r[0].result.as_str(), r[0].check.as_str(), r[0].agree), ("2", "2", Agreement::Yes));
}

#[test]
fn verify_reports_split_and_not_split() {
    let base = ["verify", "p1", "--delta", "2/3:0,2/3:1,2/3:inf", "--p", "5", "--e", "1", "--n"];
    let (_, r1) = rows(&[&base[..], &["1"]].concat());
    let (_, r2) = rows(&[&base[..], &["2"]].concat());
    assert_eq!(r1[0].result, "not-split");
    assert_eq!(r2[0].result, "split");
}

#[test]
fn json_output_round_trips() {
    let (code, out, _) = qfs(&["--format", "json", "table", "logcy", "--case", "iv", "--p-max", "13", "--e", "1"]);
    assert_eq!(code, 0);
    let parsed = report::parse(&out, Format::Json).unwrap();
    assert_eq!(parsed.len(), 6);
    assert_eq!(report::render(&parsed, Format::Json).unwrap(), out);
}

#[test]
fn tsv_output_round_trips() {
    let (_, out, _) = qfs(&["table", "logcy", "--case", "iii", "--p-max", "30", "--e", "2"]);
    let parsed = report::parse(&out, Format::Tsv).unwrap();
    assert_eq!(report::render(&parsed, Format::Tsv).unwrap(), out);
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        &["verify", "p1", "--delta", "2/3:0,2/3:q", "--p", "5", "--n", "1", "--e", "1"][..],
        &["height", "dieudonne", "--h", "2", "--p", "4", "--e", "1"],
        &["search", "p1", "--delta", "1/2:0,1/2:inf", "--p", "11", "--e", "1", "--n-max", "2"],
        &["height", "logcy", "--delta", "1/3:0", "--p", "5", "--e", "1"],
        &["frobnicate"],
    ] {
        let (code, _, err) = qfs(args);
        assert_eq!(code, 1, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn help_documents_window_cap() {
    let (code, out, _) = qfs(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("QFS_WINDOW_CAP"));
}

#[test]
fn tiny_window_cap_is_reported() {
    let out = Command::new(env!("CARGO_BIN_EXE_qfs"))
        .args(["search", "p1", "--delta", "1/2:0,3/4:1,3/4:inf", "--p", "7", "--e", "2", "--n-max", "3"])
        .env("QFS_WINDOW_CAP", "8")
        .output()
        .unwrap();
    assert_ne!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("window"));
}

#[test]
fn small_grid_agrees() {
    let (code, r) = rows(&["check", "all", "--grid", "small"]);
    assert_eq!(code, 0);
    assert!(r.iter().all(|x| x.agree != Agreement::No));
    assert!(r.iter().any(|x| x.mode == "search-p1"));
}

#[test]
fn disagreement_sets_exit_two() {
    let (_, mut r) = rows(&["table", "logcy", "--case", "i", "--p-max", "7", "--e", "1"]);
    assert_eq!(qfsplit_cli::exit_status(&r), qfsplit_cli::EXIT_OK);
    r[1].check = "9".into();
    r[1].agree = Agreement::of(&r[1].result, &r[1].check);
    assert_eq!(qfsplit_cli::exit_status(&r), qfsplit_cli::EXIT_DISAGREE);
}

#[test]
fn run_writes_report_to_the_given_stream() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = qfsplit_cli::run(["qfs", "height", "abelian", "--g", "2", "--f", "1", "--e", "3"], &mut out, &mut err);
    assert_eq!(code, 0);
    let r = report::parse_tsv(std::str::from_utf8(&out).unwrap()).unwrap();
    assert_eq!(r[0].result, "4");
}
