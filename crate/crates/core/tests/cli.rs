use std::process::{Command, Output};

use serde_json::Value;

fn qcbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcbound")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const REMOVAL_EXAMPLE: &str = "4 3 3\n. . .\n. . 0,1\n0 1 2\n";

#[test]
fn bound_on_bundled_protomatrices() {
    let out = qcbound(&["bound", "--matrix", "builtin:ar4ja_r12", "--puncture", "4", "--theorem", "2", "--max-remove", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["bound_value"], 10);
    assert_eq!(v["manifest"]["command"], "bound");
    assert_eq!(v["manifest"]["inputs"][0]["sha256"].as_str().unwrap().len(), 64);

    let out = qcbound(&["bound", "--matrix", "builtin:row_removal_example", "--theorem", "1"]);
    assert_eq!(json(&out)["result"]["bound_value"], 30);
    let out = qcbound(&["bound", "--matrix", "builtin:row_removal_example", "--theorem", "2", "--max-remove", "1"]);
    assert_eq!(json(&out)["result"]["bound_value"], 10);
}

#[test]
fn vacuous_bound_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero_row.pm");
    std::fs::write(&path, "2 3\n1 1 1\n0 0 0\n").unwrap();
    let out = qcbound(&["bound", "--matrix", path.to_str().unwrap(), "--theorem", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["result"]["bound_value"].is_null());
}

#[test]
fn input_errors_exit_one() {
    assert_eq!(qcbound(&["bound", "--matrix", "/nonexistent/file.pm"]).status.code(), Some(1));
    assert_eq!(qcbound(&["bound", "--matrix", "builtin:nope"]).status.code(), Some(1));
    let out = qcbound(&["bound", "--matrix", "builtin:ar4ja_r12", "--puncture", "0,1,2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn sampled_runs_are_byte_identical_apart_from_wall_time() {
    let args = ["bound", "--matrix", "builtin:ar4ja_r12_x4", "--puncture", "16-19", "--mode", "sample", "--samples", "2000", "--seed", "7"];
    let strip = |mut v: Value| {
        v["manifest"]["wall_time_s"] = Value::Null;
        serde_json::to_string(&v).unwrap()
    };
    let a = strip(json(&qcbound(&args)));
    let b = strip(json(&qcbound(&args)));
    assert_eq!(a, b);
    assert!(a.contains("\"seed\":7"));
}

#[test]
fn json_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = qcbound(&["bound", "--matrix", "builtin:ar4ja_r23", "--puncture", "6", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["result"]["bound_value"], 10);
}

#[test]
fn codeword_double_row_removal() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("removal.qcm");
    std::fs::write(&path, REMOVAL_EXAMPLE).unwrap();
    let m = path.to_str().unwrap();
    let out = qcbound(&["codeword", "--matrix", m, "--rows-removed", "0,1", "--columns", "0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["codeword"]["transmitted_weight"], 2);
    assert_eq!(v["result"]["verified"], true);

    // row 1 is nonzero on column 2
    let out = qcbound(&["codeword", "--matrix", m, "--rows-removed", "1", "--columns", "0,1,2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row"));
}

#[test]
fn codeword_from_bound_witness_and_zero_codeword() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.qcm");
    std::fs::write(&path, "5 2 4\n0 1 . 2\n3 0 4 .\n").unwrap();
    let out = qcbound(&["codeword", "--matrix", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["verified"], true);

    let zero = dir.path().join("zero.qcm");
    std::fs::write(&zero, "5 2 4\n. . . .\n0 1 2 3\n").unwrap();
    let out = qcbound(&["codeword", "--matrix", zero.to_str().unwrap(), "--columns", "0,1,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["result"]["status"], "zero codeword");
}

#[test]
fn expand_reproduces_three_copy_matrix() {
    let out = qcbound(&["expand", "--proto", "builtin:three_copy", "--shifts", "builtin:three_copy.shifts", "--n", "3", "--scalar"]);
    assert_eq!(out.status.code(), Some(0));
    let text = json(&out)["result"]["matrix"].as_str().unwrap().to_string();
    let expected = "6 9\n\
        1 0 1 1 0 0 0 0 0\n\
        1 1 0 0 1 0 0 0 0\n\
        0 1 1 0 0 1 0 0 0\n\
        0 0 0 0 1 0 1 0 0\n\
        0 0 0 0 0 1 0 1 0\n\
        0 0 0 1 0 0 0 0 1\n";
    assert_eq!(text, expected);
}

#[test]
fn expand_to_file_then_validate() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("stage1.pm");
    let out = qcbound(&[
        "expand", "--proto", "builtin:ar4ja_r12", "--shifts", "builtin:ar4ja_r12_x4.shifts", "--n", "4", "--scalar",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["result"]["matrix"].is_null());
    let out = qcbound(&["validate", "--stage1", out_path.to_str().unwrap(), "--proto", "builtin:ar4ja_r12", "--n1", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["ok"], true);
}

#[test]
fn validate_reports_broken_block() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.pm");
    let mut rows: Vec<Vec<u32>> = qcbound::matrix::WeightMatrix::parse(qcbound::data::builtin("ar4ja_r12_x4").unwrap().text)
        .unwrap()
        .to_rows();
    // keep row 4's weight in block (1, 4) but break the circulant pattern
    let zero = (16..20).find(|&c| rows[4][c] == 0).unwrap();
    let one = (16..20).find(|&c| rows[4][c] == 1 && rows[5][c] == 1).unwrap();
    rows[4][zero] = 1;
    rows[4][one] = 0;
    let text = qcbound::matrix::WeightMatrix::new(rows).unwrap().to_text();
    std::fs::write(&path, text).unwrap();
    let out = qcbound(&["validate", "--stage1", path.to_str().unwrap(), "--proto", "builtin:ar4ja_r12", "--n1", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["result"]["ok"], false);
    assert_eq!(v["result"]["issues"][0]["row_block"], 1);
    assert_eq!(v["result"]["issues"][0]["col_block"], 4);
}

#[test]
fn exact_reports_distance_and_cap() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("three.qcm");
    std::fs::write(&path, "3 2 3\n0,1 0 .\n. 2 0\n").unwrap();
    let out = qcbound(&["exact", "--matrix", path.to_str().unwrap(), "--max-dim", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["result"]["min_distance"].as_u64().unwrap() > 0);
    let out = qcbound(&["exact", "--matrix", path.to_str().unwrap(), "--max-dim", "0"]);
    assert_eq!(out.status.code(), Some(3));
}
