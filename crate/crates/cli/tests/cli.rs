use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn char3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_char3")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("char3-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn construct_tensor_emits_algebra_with_involution() {
    let o = char3(&["construct", "tensor(8,1)"]);
    assert_eq!(o.status.code(), Some(0));
    let j: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["schema"], "alg/1");
    assert_eq!(j["p"], 3);
    assert_eq!(j["dim"], 8);
    assert_eq!(j["inv"].as_array().unwrap().len(), 8);
    assert!(j.get("triple").is_none());
}

#[test]
fn construct_smirnov_is_35_dimensional() {
    let o = char3(&["construct", "smirnov"]);
    assert_eq!(o.status.code(), Some(0));
    let j: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["dim"], 35);
}

#[test]
fn file_round_trip_gives_the_same_report() {
    let path = scratch("t82.json");
    let p = path.to_str().unwrap();
    assert_eq!(char3(&["construct", "tensor(8,2)", "--out", p]).status.code(), Some(0));
    let from_file = char3(&["check", p, "--suite", "structurable"]);
    let in_memory = char3(&["check", "tensor(8,2)", "--suite", "structurable"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(stdout(&from_file), stdout(&in_memory));
}

#[test]
fn weak_counterexample_fails_cube_with_witness() {
    let o = char3(&["check", "weak-counterexample", "--suite", "super-cube"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL  cube"), "{out}");
    assert!(out.contains("first failure cube at basis (x)"), "{out}");
    let weak = char3(&["check", "weak-counterexample", "--suite", "super"]);
    assert_eq!(weak.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(char3(&["check", "unknown-spec", "--suite", "hein"]).status.code(), Some(2));
    assert_eq!(char3(&["check", "tensor(8,1)"]).status.code(), Some(2));
    assert_eq!(char3(&["construct", "tensor(3,1)"]).status.code(), Some(2));
    assert_eq!(char3(&["construct", "tensor(8,1)", "--p", "4"]).status.code(), Some(2));
    assert_eq!(char3(&["magic-square", "--p", "5"]).status.code(), Some(2));
    assert_eq!(char3(&["check", "weak-counterexample", "--suite", "structurable"]).status.code(), Some(2));
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{\"schema\":\"alg/9\"}").unwrap();
    assert_eq!(char3(&["check", bad.to_str().unwrap(), "--suite", "jacobi"]).status.code(), Some(2));
}

#[test]
fn construction_failure_exits_3() {
    // odd-dimensional symplectic factor
    assert_eq!(char3(&["construct", "proto-osp(1,3)"]).status.code(), Some(3));
}

#[test]
fn thread_cap_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_char3"))
        .args(["check", "tensor(2,1)", "--suite", "structurable"])
        .env("CHAR3_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_char3"))
        .args(["check", "tensor(2,1)", "--suite", "structurable"])
        .env("CHAR3_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn sampled_checks_are_deterministic_per_seed() {
    let args = ["check", "tensor(4,2)", "--suite", "hein", "--mode", "random", "--samples", "500", "--seed", "7"];
    let a = char3(&args);
    let b = char3(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("sampled over 500 tuples"));
}

#[test]
fn kantor_json_carries_grading_and_sl2() {
    let o = char3(&["construct", "kantor", "tensor(4,1)"]);
    assert_eq!(o.status.code(), Some(0));
    let j: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["dim"], 21);
    assert_eq!(j["grading"].as_array().unwrap().len(), 21);
    assert_eq!(j["sl2"].as_array().unwrap().len(), 3);
}

#[test]
fn semisimplify_and_fingerprint_json() {
    let o = char3(&["semisimplify", "weak-counterexample", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let j: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["fingerprint"]["superdim"], serde_json::json!([1, 2]));
    assert_eq!(j["superalgebra"]["parity"], serde_json::json!([0, 1, 1]));

    let o = char3(&["fingerprint", "psl(2|2)", "--format", "json"]);
    let j: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["superdim"], serde_json::json!([6, 8]));
    assert_eq!(j["center"], serde_json::json!([0, 0]));
}

#[test]
fn semisimplify_from_file_with_derivation() {
    // sl2 with δ = ad F: chains of length 3, so the superalgebra is zero
    let path = scratch("sl2.json");
    let src = r#"{"schema":"alg/1","p":3,"dim":3,"basis":["e","h","f"],
        "mul":[[0,1,0,-2],[1,0,0,2],[0,2,1,1],[2,0,1,-1],[1,2,2,-2],[2,1,2,2]],
        "delta":[[0,-1,0],[0,0,2],[0,0,0]]}"#;
    std::fs::write(&path, src).unwrap();
    let o = char3(&["check", path.to_str().unwrap(), "--suite", "jacobi"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = char3(&["semisimplify", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let j: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["fingerprint"]["superdim"], serde_json::json!([0, 0]));
}

#[test]
fn identity_command() {
    let o = char3(&["identity", "--corpus", "hein1", "proto-osp(1,2)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let path = scratch("first.id");
    std::fs::write(&path, "var x, y, z : T;\nT(x, y, z) = x\n").unwrap();
    assert_eq!(char3(&["identity", "--identity", path.to_str().unwrap(), "zero(2)"]).status.code(), Some(2));
    std::fs::write(&path, "var x, y, z : T;\nT(x, y, z) = T(z, y, x)\n").unwrap();
    let o = char3(&["identity", "--identity", path.to_str().unwrap(), "weak-counterexample"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = char3(&["identity", "--identity", path.to_str().unwrap(), "first-argument(2)"]);
    assert_eq!(o.status.code(), Some(1));
}
