mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::FRAIL_ELDERLY;

fn hibou(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hibou")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> &str {
    std::str::from_utf8(&o.stdout).expect("utf-8")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn recommend_frail_elderly() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "onc.hfs", FRAIL_ELDERLY);
    let out = hibou(&["recommend", "-o", &f, "-i", "i"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), r#"[["GentleChemo"]]"#);

    let out = hibou(&["recommend", "-o", &f, "-i", "i", "--xml"]);
    assert_eq!(
        stdout(&out),
        "<recommendations>\n  <group><treatment class=\"GentleChemo\"/></group>\n</recommendations>\n"
    );

    let out = hibou(&["recommend", "-o", &f, "-i", "ghost"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown individual"));
}

#[test]
fn classify_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.hfs", "Ontology(e)\n");
    let out = hibou(&["classify", "-o", &empty]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "Thing\n");

    let f = write(dir.path(), "onc.hfs", FRAIL_ELDERLY);
    let target = dir.path().join("tax.txt");
    let out = hibou(&["classify", "-o", &f, "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(target).unwrap(), stdout(&hibou(&["classify", "-o", &f])));
}

#[test]
fn validate_reports_one_line_per_problem() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.hfs", FRAIL_ELDERLY);
    let out = hibou(&["validate", "-o", &good]);
    assert_eq!((out.status.code(), stdout(&out)), (Some(0), "OK\n"));

    let bad = write(dir.path(), "bad.hfs", "Class(A)\nSubClassOf(A Missing)\n");
    let out = hibou(&["validate", "-o", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let lines: Vec<&str> = stdout(&out).lines().collect();
    assert_eq!(lines.len(), 1);
    assert!(lines[0].starts_with(&format!("{bad}:2:")), "{}", lines[0]);
    assert!(lines[0].contains("undeclared_name"));

    let cfg = write(dir.path(), "c.uicfg.hfs", "UiConfig(c) Extends(c)\n");
    let out = hibou(&["validate", "--ui-config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("cyclic_extends"));
}

#[test]
fn form_and_query() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "onc.hfs", FRAIL_ELDERLY);
    let out = hibou(&["form", "-o", &f, "-i", "i"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("<form instance=\"i\">\n"));
    assert!(stdout(&out).contains("<treatment class=\"GentleChemo\"/>"));

    let out = hibou(&["query", "-o", &f, "-q", "PropertyValue(?x, reco, ?y)"]);
    assert_eq!((out.status.code(), stdout(&out)), (Some(0), "[]"));
}

#[test]
fn usage_errors() {
    assert_eq!(hibou(&[]).status.code(), Some(1));
    assert_eq!(hibou(&["classify"]).status.code(), Some(1));
    assert_eq!(hibou(&["--help"]).status.code(), Some(0));
    let out = hibou(&["classify", "-o", "/nonexistent/x.hfs"]);
    assert_eq!(out.status.code(), Some(1));
}
