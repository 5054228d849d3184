use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

fn sinkhorn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sinkhorn"))
        .args(args)
        .env_remove("SINKHORN_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn matrix_file(contents: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn scale_float_twenty_pairs() {
    let f = matrix_file("3 3\n2 1 1\n1 1 1\n1 1 1\n");
    let o = sinkhorn(&["scale", "--file", path(&f), "--pairs", "20"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("0.4384471872  0.2807764064  0.2807764064\n"), "{text}");
    assert!(text.contains("steps: 40 (20 pairs)"));
}

#[test]
fn scale_rational_json_is_exact() {
    let f = matrix_file("3 3 rational\n2 1 1\n1 1 1\n1 1 1\n");
    let o = sinkhorn(&["scale", "--file", path(&f), "--mode", "rational", "--steps", "2", "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["entries"][0], serde_json::json!(["3/7", "3/11", "3/11"]));
    assert_eq!(v["residual"], "2/77");
    assert_eq!(v["steps"], 2);
}

#[test]
fn scale_output_file_round_trips() {
    let f = matrix_file("3 3 rational\n2 2 1\n2 1 1\n1 1 1\n");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let o = sinkhorn(&[
        "scale",
        "--file",
        path(&f),
        "--mode",
        "rational",
        "--steps",
        "1",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let again = sinkhorn(&["scale", "--file", out.to_str().unwrap(), "--mode", "rational", "--steps", "1", "--json"]);
    assert!(again.status.success(), "{}", String::from_utf8_lossy(&again.stderr));
    // row scaling a row-stochastic matrix changes nothing
    let v: Value = serde_json::from_str(&stdout(&again)).unwrap();
    assert_eq!(v["entries"][0], serde_json::json!(["2/5", "2/5", "1/5"]));
    assert!(Path::new(&out).exists());
}

#[test]
fn limit_a2_prints_surds() {
    let o = sinkhorn(&["limit", "--family", "A2", "--K", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("a = (5 - 1*sqrt(17))/2 = 0.4384471872"), "{text}");
}

#[test]
fn limit_mbn_json() {
    let o = sinkhorn(&["limit", "--family", "MBN", "--k", "1", "--l", "2", "--M", "2", "--B", "5", "--N", "3", "--json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["entries"]["a"]["exact"], "(-37 + 5*sqrt(73))/38");
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_sinkhorn"))
        .args(["limit", "--family", "A1", "--K", "2"])
        .env("SINKHORN_PRECISION", "4")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("a = 1/2 = 0.5000\n"), "{}", stdout(&o));
    let o = sinkhorn(&["limit", "--family", "A1", "--K", "2", "--digits", "3"]);
    assert!(stdout(&o).contains("a = 1/2 = 0.500\n"));
}

#[test]
fn classify_reports_witness() {
    let f = matrix_file("3 3\n1 1 1\n1 2 2\n1 2 2\n");
    let o = sinkhorn(&["classify", "--file", path(&f), "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["family"], "A3");
    assert_eq!(v["limit"][0][0], "0.4384471872");
}

#[test]
fn approx_and_cfrac() {
    let o = sinkhorn(&["approx", "--K", "2", "--steps", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("2183/8434"));
    let o = sinkhorn(&["cfrac", "--cbrt", "2", "--minus-one", "--terms", "14"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("[0, 3, 1, 5, 1, 1, 4, 1, 1, 8, 1, 14, 1, 10, ...]"), "{text}");
    assert!(text.contains("1120/4309  0.2599210954"));
    let o = sinkhorn(&["cfrac", "--poly=-7,3", "--lo", "2", "--hi", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("[2, 3]"));
}

#[test]
fn exit_codes() {
    assert_eq!(sinkhorn(&["limit", "--family", "A6", "--K", "1"]).status.code(), Some(4));
    let f = matrix_file("3 3\n1 2 3\n4 5 6\n7 8 9\n");
    assert_eq!(sinkhorn(&["classify", "--file", path(&f)]).status.code(), Some(5));
    let f = matrix_file("2 2\n1 0\n1 1\n");
    let o = sinkhorn(&["scale", "--file", path(&f), "--pairs", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not strictly positive"));
    let f = matrix_file("2 2\n1 x\n1 1\n");
    assert_eq!(sinkhorn(&["scale", "--file", path(&f)]).status.code(), Some(2));
    assert_eq!(sinkhorn(&["limit"]).status.code(), Some(2));
}
