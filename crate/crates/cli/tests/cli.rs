use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperclass"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn tate_values(rep: &Value) -> Vec<(i64, String)> {
    rep["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["location"]["check"] == "tate")
        .map(|r| (r["location"]["degree"].as_i64().unwrap(), r["computed"].as_str().unwrap().to_string()))
        .collect()
}

fn without_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn cyclic_table_on_the_command_line() {
    let out = run(&["--format", "json", "cohomology", "--group", "C2", "--from", "-2", "--to", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json_of(&out);
    let got = tate_values(&rep);
    let want: Vec<(i64, String)> = [(-2, "Z/2"), (-1, "0"), (0, "Z/2"), (1, "0"), (2, "Z/2")].iter().map(|(q, s)| (*q, s.to_string())).collect();
    assert_eq!(got, want);
    let s = &rep["summary"];
    let n = rep["records"].as_array().unwrap().len() as u64;
    assert_eq!(s["total"].as_u64(), Some(n));
    assert_eq!(s["failed"].as_u64(), Some(0));
}

#[test]
fn task_file_with_relative_references() {
    let d = scratch("relative");
    std::fs::write(d.join("sign.json"), r#"{"generators": 1, "action": {"g": [[-1]]}}"#).unwrap();
    std::fs::write(
        d.join("task.json"),
        r#"{"kind": "cohomology", "group": "C2", "module": {"file": "sign.json"}, "q": [-1, 2],
            "expected": {"-1": "Z/2", "0": "0", "1": "Z/2", "2": "0"}}"#,
    )
    .unwrap();
    let out = bin().current_dir("/").args(["run", d.join("task.json").to_str().unwrap()]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("0 failures"));
}

#[test]
fn finite_field_suite_passes() {
    let d = scratch("suite");
    let task = d.join("ff4.json");
    std::fs::write(&task, r#"{"kind": "example-suite", "formation": "finite_field(4)"}"#).unwrap();
    let out = run(&["run", task.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains(", 0 failures"));
    assert!(text.contains("axiom 3"));
    assert!(text.contains("Artin routes agree"));
}

#[test]
fn malformed_json_exits_two_with_position() {
    let d = scratch("malformed");
    let task = d.join("bad.json");
    std::fs::write(&task, "{\"kind\": \"cohomology\",\n \"group\": }").unwrap();
    let out = run(&["run", task.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2 column"), "{err}");
    std::fs::write(&task, r#"{"kind": "cohomology", "grup": "C2"}"#).unwrap();
    let out = run(&["run", task.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("schema error"));
    let out = run(&["run", d.join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn window_too_small_is_a_compute_error() {
    let out = run(&["--window", "2", "cohomology", "--group", "C3", "--from", "-4", "--to", "4"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("window"));
}

#[test]
fn failing_cells_are_listed() {
    let out = run(&["weil", "verify", "--group", "V4", "--class", "1,0"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("(subgroup {0,1,2,3}, degree 2)"), "{text}");
    assert!(text.contains("computed Z/2 + Z/2"));

    let out = run(&["--format", "json", "weil", "verify", "--formation", "finite_field(4)", "--beta-multiple", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let rep = json_of(&out);
    let axiom3 = rep["records"].as_array().unwrap().iter().any(|r| r["location"]["check"] == "axiom 3" && r["pass"] == false);
    assert!(axiom3);
}

#[test]
fn reports_are_deterministic() {
    let d = scratch("determinism");
    let task = d.join("t.json");
    std::fs::write(
        &task,
        r#"{"kind": "example-suite", "formations": ["finite_field(3)", "relation_module(C2)"], "random": 6, "seed": 11}"#,
    )
    .unwrap();
    let a = run(&["--format", "json", "run", task.to_str().unwrap()]);
    let b = run(&["--format", "json", "--parallel", "run", task.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    let (ra, rb) = (json_of(&a), json_of(&b));
    assert_eq!(ra["seed"], 11);
    assert_eq!(without_timings(ra.clone()), without_timings(rb));
    let c = run(&["--format", "json", "--seed", "12", "run", task.to_str().unwrap()]);
    assert_eq!(json_of(&c)["seed"], 12);
    // text output is stable too
    let t1 = run(&["run", task.to_str().unwrap()]).stdout;
    let t2 = run(&["run", task.to_str().unwrap()]).stdout;
    assert_eq!(t1, t2);
}

#[test]
fn json_output_round_trips() {
    let out = run(&["--format", "json", "nakayama", "--formation", "relation_module(C3)", "--from", "-1", "--to", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
    assert!(v["records"].as_array().unwrap().iter().all(|r| r["pass"] == true));
}

#[test]
fn empty_report_is_valid() {
    let d = scratch("empty");
    let task = d.join("t.json");
    std::fs::write(&task, r#"{"kind": "cohomology", "group": "C2", "subgroups": []}"#).unwrap();
    let out = run(&["--format", "json", "run", task.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json_of(&out);
    assert_eq!(rep["summary"]["total"], 0);
    assert_eq!(rep["records"], Value::Array(vec![]));
}

#[test]
fn weil_build_writes_the_group() {
    let d = scratch("build");
    let path = d.join("w.json");
    let out = run(&["--format", "json", "weil", "build", "--formation", "finite_field(3)", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json_of(&out);
    assert_eq!(rep["outputs"]["abelianization"], "Z^1");
    let w: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(w, rep["outputs"]["weil"]);
    assert_eq!(w["group"]["elements"].as_array().unwrap().len(), 3);
}

#[test]
fn shift_and_hyper_agree() {
    let d = scratch("shift");
    let cx = d.join("aug.json");
    // Z[C2] → Z in degrees -1, 0: quasi-isomorphic to the augmentation ideal shifted
    std::fs::write(
        &cx,
        r#"{"terms": {"-1": {"generators": 2, "action": {"g": [[0, 1], [1, 0]]}},
                     "0": {"generators": 1, "action": {"g": [[1]]}}},
            "differentials": {"-1": [[1, 1]]}}"#,
    )
    .unwrap();
    let out = run(&["--format", "json", "hyper", "--group", "C2", "--complex", cx.to_str().unwrap(), "--from", "-2", "--to", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let hyper = tate_values(&json_of(&out));
    let out = run(&["--format", "json", "shift", "--group", "C2", "--complex", cx.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json_of(&out);
    assert_eq!(rep["outputs"]["degree"], 0);
    assert_eq!(hyper.iter().map(|x| x.1.as_str()).collect::<Vec<_>>(), ["Z/2", "0", "Z/2", "0", "Z/2"]);
}
