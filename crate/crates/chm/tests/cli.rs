use std::fs;
use std::process::{Command, Output};

use chm::table::read_rows;

fn chm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chm")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn cantor_report_names_the_stable_value() {
    let out = chm(&["--gallery", "cantor-1-3", "--g-max", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("m̃ stabilized at generation 2, value 1.19902"), "{}", stdout(&out));
}

#[test]
fn sym_cantor_rows_are_one() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let report = dir.path().join("report.txt");
    let out = chm(&[
        "--gallery",
        "sym-cantor",
        "--g-max",
        "3",
        "--csv",
        csv.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let rows = read_rows(fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert!((r.m_tilde - 1.0).abs() <= 1e-9, "{r:?}");
    }
    assert!(fs::read_to_string(report).unwrap().contains("strong separation: certified"));
}

#[test]
fn system_file_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("planar4.json");
    fs::write(
        &sys,
        r#"{"dimension": 2, "maps": [
            {"ratio": 0.0025, "translation": [0, 0]},
            {"ratio": 0.05, "orthogonal": [[1, 0], [0, 1]], "translation": [0.95, 0]},
            {"ratio": 0.0025, "translation": [0.9975, 0.9975]},
            {"ratio": 0.05, "translation": [0, 0.95]}]}"#,
    )
    .unwrap();
    let svg = dir.path().join("plot.svg");
    let out = chm(&["--system", sys.to_str().unwrap(), "--g-max", "2", "--svg", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("similarity dimension s = 0.3354"));
    let text = fs::read_to_string(svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("stroke=\"steelblue\"") && text.trim_end().ends_with("</svg>"));
    assert_eq!(text.matches("<circle").count(), 64 + 3);
}

#[test]
fn bad_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("bad.json");
    fs::write(&sys, r#"{"dimension":1,"maps":[{"ratio":1.0,"translation":[0]},{"ratio":0.5,"translation":[1]}]}"#)
        .unwrap();
    let out = chm(&["--system", sys.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("maps[0].ratio"));

    fs::write(
        &sys,
        r#"{"dimension":3,"maps":[{"ratio":0.3,"translation":[0,0,0]},{"ratio":0.3,"translation":[1,0,0]}]}"#,
    )
    .unwrap();
    let svg = dir.path().join("x.svg");
    let out = chm(&["--system", sys.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!svg.exists());

    assert_eq!(chm(&["--gallery", "no-such-set"]).status.code(), Some(2));
    assert_eq!(chm(&["--gallery", "cantor-1-3", "--tie-tol", "-1"]).status.code(), Some(2));
    assert_eq!(chm(&[]).status.code(), Some(2));
}

#[test]
fn ssc_failure_aborts_unless_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("touching.json");
    fs::write(&sys, r#"{"dimension":1,"maps":[{"ratio":0.5,"translation":[0]},{"ratio":0.5,"translation":[0.5]}]}"#)
        .unwrap();
    let out = chm(&["--system", sys.to_str().unwrap(), "--g-max", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--allow-unverified-ssc"));
    let out = chm(&["--system", sys.to_str().unwrap(), "--g-max", "2", "--allow-unverified-ssc"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("strong separation: violated"));
}

#[test]
fn budget_exhaustion_keeps_partial_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let out = chm(&["--gallery", "sierpinski(0.2)", "--g-max", "5", "--budget", "100", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let rows = read_rows(fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(rows.iter().map(|r| r.generation).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    assert!(stdout(&out).contains("aborted: point budget exceeded"));
}

#[test]
fn certify_reports_an_interval() {
    let out = chm(&["--gallery", "cantor-1-3", "--g-max", "3", "--certify", "--budget", "1e4", "--workers", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("certified density interval at generation 3: [1.1990231"), "{}", stdout(&out));
}
