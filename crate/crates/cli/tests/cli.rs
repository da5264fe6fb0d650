//! End-to-end tests of the command-line interface: wire formats, exit codes
//! and output determinism.

use std::io::Write;
use std::process::{Command, Output};

fn resurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resurf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_temp(name: &str, contents: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("resurf-test-{}-{name}", std::process::id()));
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    path
}

#[test]
fn classify_weierstrass_base_change_pair() {
    let model = write_temp(
        "model.json",
        r#"{"a1":[],"a2":[],"a3":[],"a4":[],"a6":["0","1"]}"#,
    );
    let out = resurf(&[
        "classify-weierstrass",
        model.to_str().unwrap(),
        "--places",
        "0,inf",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("t=0: II"), "{text}");
    assert!(text.contains("t=inf: II*"), "{text}");
    assert!(text.contains("euler sum 12"), "{text}");

    // unicode alias for the place at infinity
    let out = resurf(&[
        "classify-weierstrass",
        model.to_str().unwrap(),
        "--places",
        "0,\u{221e}",
    ]);
    assert!(out.status.success());
}

#[test]
fn gaps_for_case_43_lists_one_and_four() {
    let out = resurf(&["gaps", "--case", "43", "--max-k", "20"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("k=1 verdict=gap"), "{text}");
    assert!(text.contains("k=4 verdict=gap"), "{text}");
    assert!(
        text.lines()
            .last()
            .unwrap()
            .starts_with("gaps up to 20: 1, 4"),
        "{text}"
    );
}

#[test]
fn json_output_is_deterministic() {
    let a = resurf(&["--json", "gaps", "--case", "53", "--max-k", "6"]);
    let b = resurf(&["--json", "gaps", "--case", "53", "--max-k", "6"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    // well-formed JSON on the last line
    let text = stdout(&a);
    let last = text.lines().last().unwrap();
    let v: serde_json::Value = serde_json::from_str(last).unwrap();
    assert_eq!(v["case"], 53);
}

#[test]
fn case_info_row_59() {
    let out = resurf(&["case-info", "--case", "59"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("A3+A2+A1+A1"), "{text}");
    assert!(text.contains("mu       1/12"), "{text}");
    assert!(text.contains("delta    13/6"), "{text}");
}

#[test]
fn verify_tables_passes() {
    let out = resurf(&["verify-tables"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("0 failed"), "{text}");
}

#[test]
fn one_gap_report_singles_out_case_43() {
    let out = resurf(&["one-gap-report"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.trim_end().ends_with("cases with a 1-gap: 43"),
        "{text}"
    );
    assert!(
        text.contains("case 59: ok      via special witness"),
        "{text}"
    );
}

#[test]
fn conic_commands() {
    let out = resurf(&["conic-admissible", "--fibers", "II*,II", "--rank", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("0, D_m (m>=4)"), "{text}");

    let graph = write_temp(
        "graph.json",
        r#"{"nodes":[{"kind":"section","mult":1},{"kind":"component","mult":1},
            {"kind":"section","mult":1}],
           "edges":[[0,1,1],[1,2,1]]}"#,
    );
    let out = resurf(&["conic-classify", graph.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("type A3"));
}

#[test]
fn exit_codes() {
    // domain error: a singular model
    let model = write_temp(
        "bad-model.json",
        r#"{"a1":[],"a2":[],"a3":[],"a4":[],"a6":[]}"#,
    );
    let out = resurf(&[
        "classify-weierstrass",
        model.to_str().unwrap(),
        "--places",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));

    // data integrity error: broken dataset override
    let data = write_temp(
        "bad-data.json",
        r#"{"version":1,"cases":[{"case":1,"T":["A1"],
            "EK_free":{"gram":[["1"]]},"EK_narrow":{"gram":[["4"]]},
            "torsion":[],"rank":1,"provenance":"OS"}]}"#,
    );
    let out = resurf(&["--data", data.to_str().unwrap(), "case-info", "--case", "1"]);
    assert_eq!(out.status.code(), Some(2));

    // unknown case number is a domain error
    let out = resurf(&["case-info", "--case", "99"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn data_override_round_trips() {
    // the embedded dataset re-serialized through a file behaves identically
    let embedded = include_str!("../../core/data/oguiso_shioda.json");
    let path = write_temp("data-copy.json", embedded);
    let a = resurf(&[
        "--data",
        path.to_str().unwrap(),
        "gaps",
        "--case",
        "46",
        "--max-k",
        "6",
    ]);
    let b = resurf(&["gaps", "--case", "46", "--max-k", "6"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn density_command() {
    let out = resurf(&["density", "--case", "43", "--max-n", "100"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("gap density of case 43"), "{text}");
    // rank > 2 is out of the density statement's scope
    let out = resurf(&["density", "--case", "1", "--max-n", "100"]);
    assert_eq!(out.status.code(), Some(1));
}
