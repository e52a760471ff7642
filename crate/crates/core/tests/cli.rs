use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const AFF1: &str = "algebra aff1 {\n  basis x y\n  [x,y] = y\n}\n\
                    conn adconn on aff1 {\n  x => matrix [[0, 0], [0, 1]]\n  y => matrix [[0, 0], [-1, 0]]\n}\n";

fn lieforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lieforge"))
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_ms");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let pass = write(
        dir.path(),
        "pass.lie",
        &format!("{AFF1}check teo2(aff1, adconn)\n"),
    );
    let fail = write(
        dir.path(),
        "fail.lie",
        &format!("{AFF1}check torsion_free(aff1, adconn)\n"),
    );
    let syntax = write(dir.path(), "syntax.lie", "algebra a { basis x\n");
    let pre = write(
        dir.path(),
        "pre.lie",
        &format!("{AFF1}endo E on aff1 matrix [[1, 0], [0, 1]]\ncheck integrable(aff1, E)\n"),
    );
    let empty = write(dir.path(), "empty.lie", "");
    assert_eq!(lieforge(&["check", &pass]).status.code(), Some(0));
    assert_eq!(lieforge(&["check", &fail]).status.code(), Some(1));
    assert_eq!(lieforge(&["check", &syntax]).status.code(), Some(2));
    assert_eq!(lieforge(&["check", &pre]).status.code(), Some(2));
    assert_eq!(lieforge(&["check", &empty]).status.code(), Some(0));
    assert_eq!(
        lieforge(&["check", "/nonexistent.lie"]).status.code(),
        Some(2)
    );
}

#[test]
fn parse_error_names_file_and_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "bad.lie",
        "algebra g {\n  basis x y\n  [x,y] = 1 z\n}\n",
    );
    let out = lieforge(&["check", &f]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.lie:3:13: unknown name"), "{err}");
}

#[test]
fn json_report_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let src = format!(
        "{AFF1}check teo2(aff1, adconn)\ncheck torsion_free(aff1, adconn)\ncheck jacobi(aff1)\n"
    );
    let f = write(dir.path(), "a.lie", &src);
    let mut reports = Vec::new();
    for (k, threads) in ["1", "4"].iter().enumerate() {
        let json = dir.path().join(format!("r{k}.json"));
        let out = lieforge(&[
            "check",
            &f,
            "--json",
            json.to_str().unwrap(),
            "--parallel",
            threads,
        ]);
        assert_eq!(out.status.code(), Some(1));
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
        strip_timing(&mut v);
        reports.push(v);
    }
    assert_eq!(reports[0], reports[1]);
    let r = &reports[0];
    assert_eq!(r["schema"], 1);
    assert_eq!(r["all_pass"], false);
    assert_eq!(r["input_hash"].as_str().unwrap().len(), 64);
    let checks: Vec<&str> = r["certificates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    assert_eq!(checks, ["teo2", "torsion_free", "jacobi"]);
    assert_eq!(r["certificates"][0]["witnesses"], Value::Array(Vec::new()));
}

#[test]
fn catalog_dsl_feeds_check() {
    let out = lieforge(&["catalog", "euclid", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap() + "check integrable(euclid_3_J)\n";
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "e3.lie", &text);
    let out = lieforge(&["check", &f]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("PASS integrable euclid_3"));
}

#[test]
fn catalog_json_and_errors() {
    let out = lieforge(&["catalog", "gl", "2", "--emit", "json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dim"], 4);
    assert_eq!(lieforge(&["catalog", "nope"]).status.code(), Some(2));
    assert_eq!(lieforge(&["catalog", "euclid"]).status.code(), Some(2));
}

#[test]
fn tower_reports_rank() {
    let out = lieforge(&["tower", "--base", "gl:2", "--m", "3"]);
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(
        s.contains("dims=[4, 8, 16, 32]") && s.contains("generated_rank=8"),
        "{s}"
    );
    let out = lieforge(&["tower", "--base", "so:3", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
}
