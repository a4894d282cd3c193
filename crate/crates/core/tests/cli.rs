//! End-to-end tests of the command-line interface: exit codes, formats and
//! report reproducibility.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_partition-cumulants"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn enumerate_lists_members_in_text_format() {
    let out = run(&["families", "enumerate", "--family", "nc", "--n", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    assert_eq!(lines.len(), 5);
    assert!(lines.contains(&"1,3/2"));
}

#[test]
fn count_cross_checks_closed_forms() {
    let out = run(&[
        "families",
        "count",
        "--family",
        "almost-interval",
        "--n",
        "1..6",
        "--check-closed-form",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("6\t89\t89\tok"));
}

#[test]
fn moebius_table_prints_the_doubling_sequence() {
    let out = run(&["poset", "moebius", "--family", "almost-interval", "--n", "1..6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let values: Vec<&str> = text
        .lines()
        .map(|l| l.split('\t').nth(1).unwrap())
        .collect();
    assert_eq!(values, ["1", "-1", "2", "-4", "8", "-16"]);
}

#[test]
fn si_check_emits_a_json_report_with_the_witness() {
    let out = run(&["poset", "si-check", "--weight", "monotone", "--n-max", "4"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["holds"], serde_json::Value::Bool(false));
    assert_eq!(report["witness"]["inserted"], "1,3/2");
    assert_eq!(report["witness"]["weight_after"], "1/2");
}

#[test]
fn hasse_emits_graphviz() {
    let out = run(&["poset", "hasse", "--family", "ci", "--n", "3", "--dot"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("digraph"));
    assert!(text.contains("\"1/2/3\" -> "));
}

#[test]
fn weight_eval_prints_the_exact_value() {
    let out = run(&[
        "weights",
        "eval",
        "--weight",
        "modified-monotone",
        "--partition",
        "1,3/2",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1");

    let out = run(&["weights", "eval", "--weight", "monotone", "--partition", "1,3/2"]);
    assert_eq!(stdout(&out).trim(), "1/2");
}

#[test]
fn solve_round_trips_a_moment_problem_file() {
    let dir = std::env::temp_dir().join(format!("pc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("problem.json");
    std::fs::write(
        &path,
        r#"{
            "domain": "rational",
            "alphabet": ["x"],
            "weight": "indicator-nc",
            "max_order": 2,
            "moments": [
                {"word": "x", "value": "1/2"},
                {"word": "xx", "value": "2"}
            ]
        }"#,
    )
    .unwrap();
    let out = run(&["cumulants", "solve", "--input", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // c_2 = F(xx) - F(x)^2 = 2 - 1/4 = 7/4
    assert_eq!(table["entries"]["x"], "1/2");
    assert_eq!(table["entries"]["xx"], "7/4");
}

#[test]
fn solve_rejects_unknown_symbols_with_exit_code_two() {
    let dir = std::env::temp_dir().join(format!("pc-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{
            "domain": "rational",
            "alphabet": ["x"],
            "weight": "indicator-nc",
            "max_order": 2,
            "moments": [{"word": "xz", "value": "1"}]
        }"#,
    )
    .unwrap();
    let out = run(&["cumulants", "solve", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains('z'));
}

#[test]
fn usage_errors_exit_with_code_two() {
    let out = run(&["families", "enumerate", "--family", "bogus", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn product_evaluates_boolean_factorizations() {
    let dir = std::env::temp_dir().join(format!("pc-cli-prod-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("marginals.json");
    std::fs::write(
        &path,
        r#"{
            "max_order": 4,
            "marginals": [
                {"alphabet": ["a"], "moments": [
                    {"word": "a", "value": "1"},
                    {"word": "aa", "value": "2"},
                    {"word": "aaa", "value": "3"},
                    {"word": "aaaa", "value": "4"}
                ]},
                {"alphabet": ["b"], "moments": [
                    {"word": "b", "value": "5"},
                    {"word": "bb", "value": "6"},
                    {"word": "bbb", "value": "7"},
                    {"word": "bbbb", "value": "8"}
                ]}
            ]
        }"#,
    )
    .unwrap();
    let out = run(&[
        "cumulants", "product", "--kind", "boolean",
        "--input", path.to_str().unwrap(),
        "--word", "abba",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // F(a) F(bb) F(a) = 1 * 6 * 1
    assert_eq!(stdout(&out).trim(), "abba\t6");
}

#[test]
fn clt_matches_the_fourth_moment_formula() {
    let dir = std::env::temp_dir().join(format!("pc-cli-clt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("marginal.json");
    std::fs::write(
        &path,
        r#"{
            "domain": "rational",
            "alphabet": ["x"],
            "max_order": 4,
            "moments": [
                {"word": "x", "value": "0"},
                {"word": "xx", "value": "1"},
                {"word": "xxx", "value": "0"},
                {"word": "xxxx", "value": "2"}
            ]
        }"#,
    )
    .unwrap();
    let out = run(&[
        "cumulants", "clt", "--kind", "boolean",
        "--input", path.to_str().unwrap(),
        "--n-copies", "100", "--order", "4",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // b_4 = m_4 - 2 m_2^2 + ... = 1 here, so m_4(100) = 1 + 1/100
    let lines: Vec<String> = stdout(&out).lines().map(str::to_owned).collect();
    assert_eq!(lines[3], "4\t101/100");
}

#[test]
fn verify_constants_reports_zero_for_si_weights() {
    let out = run(&[
        "cumulants", "verify-constants",
        "--weight", "modified-monotone",
        "--max-order", "4",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["all_zero"], serde_json::Value::Bool(true));
}

#[test]
fn verify_paper_subset_runs_and_reports_are_reproducible() {
    let args = [
        "verify-paper", "--only", "moebius-almost-interval", "--format", "json",
    ];
    let first = run(&args);
    assert!(first.status.success());
    let second = run(&args);
    assert_eq!(stdout(&first), stdout(&second), "reports must be byte-identical");
    let report: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(report["pass"], serde_json::Value::Bool(true));
    let computed = report["outcomes"][0]["computed"].as_str().unwrap();
    assert!(computed.starts_with("1 -1 2 -4 8 -16"));
}
