use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_satake-modp"));
    c.env_remove("SATAKE_FIELD");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const ETA: &str = r#"{"unramified":"1","tame":0}"#;

fn principal_series(n: usize) -> String {
    let blocks = vec![format!(r#"{{"character":{{"eta":{ETA}}}}}"#); n].join(",");
    format!(r#"{{"P":{:?},"q":3,"blocks":[{blocks}]}}"#, vec![1; n])
}

#[test]
fn satake_expand_and_invert_round_trip() {
    let out = run(&["satake", "expand", "--n", "2", "--q", "3", "--nu", "0,0", "--lambda", "-2,0"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["basis"], "tau");
    assert_eq!(v["terms"]["-2,0"], "1");
    assert_eq!(v["terms"]["-1,-1"], "2");
    let terms = serde_json::to_string(&v["terms"]).unwrap();
    let back = run(&["satake", "invert", "--q", "3", "--nu", "0,0", "--terms", &terms]);
    let b = json(&back);
    assert_eq!(b["basis"], "T");
    assert_eq!(b["terms"].as_object().unwrap().len(), 1);
    assert_eq!(b["terms"]["-2,0"], "1");
}

#[test]
fn identical_jobs_give_identical_bytes() {
    let args = ["classify", "constituents", "--datum", &principal_series(3)];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["count"], 4);
}

#[test]
fn classify_example_has_two_constituents() {
    let datum = format!(r#"{{"P":[1,1],"q":3,"blocks":[{{"steinberg":{{"eta":{ETA}}}}},{{"steinberg":{{"eta":{ETA}}}}}]}}"#);
    let out = run(&["classify", "constituents", "--datum", &datum]);
    let v = json(&out);
    assert_eq!(v["count"], 2);
    // each constituent datum is itself a valid input
    for c in v["constituents"].as_array().unwrap() {
        let d = serde_json::to_string(&c["datum"]).unwrap();
        let again = run(&["classify", "validate", "--datum", &d]);
        assert!(again.status.success());
        assert_eq!(json(&again)["canonical"], true);
    }
}

#[test]
fn lattice_dot_output() {
    let dir = std::env::temp_dir().join(format!("satake-modp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("lattice.dot");
    let out = run(&["lattice", "--datum", &principal_series(3), "--dot", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("[label=").count(), 6);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_in_matches_flags() {
    let dir = std::env::temp_dir().join(format!("satake-modp-job-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("job.json");
    std::fs::write(
        &path,
        r#"{"command":"hecke0","params":{"action":"derive","n":2},"scalar_field":{"p":3}}"#,
    )
    .unwrap();
    let from_file = run(&["--json-in", path.to_str().unwrap()]);
    let from_flags = run(&["--field", "3", "hecke0", "derive", "--n", "2"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, from_flags.stdout);
    let v = json(&from_file);
    assert_eq!(v["status"], "proved");
    assert_eq!(v["steps"][0]["trace"][2], "= S_1Πv");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    // domain error: T_lambda needs an antidominant key
    let out = run(&["satake", "expand", "--q", "3", "--nu", "0,0", "--lambda", "0,-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "hecke");
    // schema errors
    assert_eq!(run(&["classify", "constituents", "--datum", "{not json"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--field", "4", "weights", "enumerate", "--n", "2", "--q", "2"]).status.code(), Some(2));
    assert_eq!(run(&["--field", "2:1,0,1", "weights", "enumerate", "--n", "2", "--q", "2"]).status.code(), Some(2));
}

#[test]
fn field_from_environment() {
    let chars = r#"[{"unramified":"0,1","tame":0},{"unramified":"1","tame":0}]"#;
    let args = ["eigen", "eval", "--q", "3", "--levi", "1,1", "--chars", chars, "--lambda", "-1,0"];
    let out = bin().env("SATAKE_FIELD", "3^2").args(args).output().unwrap();
    assert!(out.status.success());
    let v = json(&out);
    assert_ne!(v["value"], "0,0");
    // without it the default field is F_3, which cannot hold the coefficient vector
    assert_eq!(run(&args).status.code(), Some(2));
    let bad = bin().env("SATAKE_FIELD", "3").args(args).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_passes() {
    let out = run(&["verify", "--all", "--max-n", "3", "--max-q", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_u64().unwrap() > 100);
}
