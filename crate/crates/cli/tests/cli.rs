use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_melikyan")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn untimed(mut v: Value) -> Value {
    for c in v["checks"].as_array_mut().unwrap() {
        c["wall_time_ms"] = Value::from(0);
    }
    v
}

fn all_pass(v: &Value) -> bool {
    v["checks"].as_array().unwrap().iter().all(|c| c["verdict"] != "fail")
}

const Z4: &str = r#"{"group":{"rank":0,"torsion":[4]},"images":[{"torsion":[1]},{"torsion":[2]}]}"#;
const Z5: &str = r#"{"group":{"rank":0,"torsion":[5]},"images":[{"torsion":[1]},{"torsion":[2]}]}"#;
const IDENTITY: &str = r#"{"group":{"rank":2,"torsion":[]},"images":[{"free":[1,0]},{"free":[0,1]}]}"#;

#[test]
fn info_reports_dimensions_and_support() {
    let out = run(&["info"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "melikyan.info/1");
    assert_eq!(v["dims"]["M"], 125);
    assert_eq!(v["dims"]["O"], 25);
    assert_eq!(v["canonical_degree_range"], serde_json::json!([-3, 23]));
    assert_eq!(v["gamma_bar_support_index"], 3);
    assert_eq!(v["gamma_m_support"].as_array().unwrap().len(), 93);
    let table = run(&["info", "--format", "table"]);
    assert_eq!(table.status.code(), Some(0));
    assert!(String::from_utf8(table.stdout).unwrap().contains("125"));
}

#[test]
fn verify_suites_pass_and_are_deterministic() {
    for suite in ["jacobi", "grading", "sigma", "duality"] {
        let a = run(&["verify", suite, "--seed", "7"]);
        assert_eq!(a.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&a.stdout));
        let b = run(&["verify", suite, "--seed", "7"]);
        let (a, b) = (json(&a), json(&b));
        assert!(all_pass(&a));
        assert_eq!(a["schema"], "melikyan.certificate/1");
        assert_eq!(untimed(a), untimed(b));
    }
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["verify", "bogus"]).status.code(), Some(2));
    let sigma = run(&["verify", "sigma", "--n", "1,2"]);
    assert_eq!(sigma.status.code(), Some(2));
    assert!(!sigma.stderr.is_empty());
    assert_eq!(run(&["info", "--n", "0,1"]).status.code(), Some(2));
    assert_eq!(run(&["grade", "{not json"]).status.code(), Some(2));
    assert_eq!(run(&["grade", "/nonexistent/spec.json"]).status.code(), Some(2));
}

#[test]
fn grade_builds_standard_gradings() {
    let id = run(&["grade", IDENTITY]);
    assert_eq!(id.status.code(), Some(0));
    let v = json(&id);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["support"].as_array().unwrap().len(), 93);

    let z4 = json(&run(&["grade", Z4]));
    assert_eq!(z4["verdict"], "pass");
    assert_eq!(z4["duality"]["available"], true);

    let z5 = run(&["grade", Z5]);
    assert_eq!(z5.status.code(), Some(0));
    let z5 = json(&z5);
    assert_eq!(z5["verdict"], "pass");
    assert_eq!(z5["duality"]["available"], false);
}

#[test]
fn grade_reads_spec_files_and_writes_out() {
    let dir = std::env::temp_dir().join(format!("melikyan-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spec = dir.join("z4.json");
    let out = dir.join("grade.json");
    std::fs::write(&spec, Z4).unwrap();
    let r = run(&["grade", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    assert!(r.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["verdict"], "pass");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn twist_recover_certificate() {
    let out = run(&["twist-recover", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(all_pass(&v));
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["standard-grading", "twist-automorphism", "twisted-grading", "twisted-eta", "eigenspace-grading", "untwist"]);
    assert!(v["report"]["theta"].is_array());
    let table = run(&["twist-recover", "--seed", "0", "--format", "table"]);
    assert!(String::from_utf8(table.stdout).unwrap().contains("0 failed"));
}
