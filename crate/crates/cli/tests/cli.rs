use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn lampharm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lampharm"))
        .args(args)
        .env_remove("LAMPHARM_BUDGET")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn verdict<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["name"] == name)
        .unwrap_or_else(|| panic!("no verdict {name}"))
}

#[test]
fn line_ball_has_eleven_vertices() {
    let out = lampharm(&["build-graph", "--descriptor", r#"{"family":"line"}"#, "--radius", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["details"]["graph"]["vertices"], 11);
    assert_eq!(r["details"]["graph"]["boundary_vertices"], 2);
    assert_eq!(r["manifest"]["command"], "build-graph");
}

#[test]
fn unknown_family_is_a_usage_error() {
    let out = lampharm(&["build-graph", "--descriptor", r#"{"family":"nope"}"#]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "descriptor");
}

#[test]
fn missing_required_flag_is_a_usage_error() {
    assert_eq!(lampharm(&["solve"]).status.code(), Some(2));
}

#[test]
fn equal_boundary_values_solve_to_a_constant() {
    let dir = tempfile::tempdir().unwrap();
    let bfile = dir.path().join("boundary.txt");
    // line ball of radius 2: indices 3 and 4 are -2 and 2
    fs::write(&bfile, "3 0.5\n4 0.5\n").unwrap();
    let out = lampharm(&[
        "solve",
        "--descriptor",
        r#"{"family":"line"}"#,
        "--radius",
        "2",
        "--boundary-file",
        bfile.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["details"]["record"]["energy"], 0.0);
    let sol = r["series"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["name"] == "solution")
        .unwrap();
    for p in sol["points"].as_array().unwrap() {
        assert_eq!(p[1], 0.5);
    }
    assert_eq!(verdict(&r, "maximum_principle")["passed"], true);
}

#[test]
fn star_with_three_leaves_has_no_line_in_its_graph() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("k13.txt");
    fs::write(&edges, "0 1\n0 2\n0 3\n").unwrap();
    let out = lampharm(&[
        "spanline",
        "--edge-list",
        edges.to_str().unwrap(),
        "--exact",
        "--k",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["details"]["status"], "proved-absent");
    assert_eq!(verdict(&r, "line_found")["passed"], false);

    let out = lampharm(&[
        "spanline",
        "--edge-list",
        edges.to_str().unwrap(),
        "--exact",
        "--k",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn caterpillar_builtin_line_passes_the_checker() {
    let out = lampharm(&["spanline", "--descriptor", r#"{"family":"caterpillar","leaves":1}"#]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(verdict(&json(&out), "line_checker")["passed"], true);
}

#[test]
fn search_timeout_is_a_budget_failure() {
    let out = lampharm(&[
        "spanline",
        "--descriptor",
        r#"{"family":"grid","d":2}"#,
        "--radius",
        "4",
        "--timeout",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn budget_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_lampharm"))
        .args([
            "build-graph",
            "--descriptor",
            r#"{"family":"grid","d":2}"#,
            "--radius",
            "4",
        ])
        .env("LAMPHARM_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "budget");
}

#[test]
fn out_dir_reports_are_reproducible() {
    // same directory both times: the manifest echoes --out-dir
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        let out = lampharm(&[
            "liouville",
            "--a",
            r#"{"family":"grid","d":2}"#,
            "--b",
            r#"{"family":"free_group","rank":2}"#,
            "--steps",
            "5,10",
            "--trials",
            "2000",
            "--out-dir",
            dir.path().to_str().unwrap(),
        ]);
        assert!(
            out.status.code().is_some_and(|c| c <= 1),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        (
            fs::read(dir.path().join("report.csv")).unwrap(),
            fs::read(dir.path().join("report.json")).unwrap(),
        )
    };
    let (csv1, json1) = run();
    let (csv2, json2) = run();
    assert_eq!(csv1, csv2);
    assert_eq!(json1, json2);
    assert!(String::from_utf8(csv1)
        .unwrap()
        .starts_with("series,parameter,x,value,y"));
}

#[test]
fn csv_format_on_stdout() {
    let out = lampharm(&[
        "build-graph",
        "--descriptor",
        r#"{"family":"cycle","n":6}"#,
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("series,parameter,x,value,y"));
}

#[test]
fn reproduce_small_suites() {
    for suite in ["spanning-lines", "capacity-decay"] {
        let out = lampharm(&["reproduce", suite]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{suite}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let r = json(&out);
        assert!(r["verdicts"].as_array().unwrap().iter().all(|v| v["passed"] == true));
    }
}
