use std::path::Path;
use std::process::{Command, Output};

fn schurci(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schurci")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let blocks: Vec<String> = (0..24).map(|i| format!("[{i}]")).collect();
    let discrete = write(dir.path(), "d.json", &format!(r#"{{"group":"Z2^3xZ3","blocks":[{}]}}"#, blocks.join(",")));
    assert_eq!(code(&schurci(&["validate", &discrete])), 0);

    let bad = write(dir.path(), "b.json", r#"{"group":"Z6","blocks":[[0],[1],[2,3,4,5]]}"#);
    let out = schurci(&["validate", &bad]);
    assert_eq!(code(&out), 1);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["violation"]["axiom"], "inverse");

    let junk = write(dir.path(), "j.json", "{ not json");
    assert_eq!(code(&schurci(&["validate", &junk])), 2);
}

#[test]
fn ci_check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let r2 = write(dir.path(), "r2.json", r#"{"group":"Z6","blocks":[[0],[1,2,3,4,5]]}"#);
    let out = schurci(&["ci-check", &r2]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "CI");
    assert_eq!(v["method"], "babai");

    let z8 = write(dir.path(), "z8.json", r#"{"group":"Z8","blocks":[[0],[2],[4],[6],[1,5],[3,7]]}"#);
    let out = schurci(&["ci-check", &z8]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "not-CI");

    let all: Vec<String> = (0..81).map(|i| i.to_string()).collect();
    let big = write(dir.path(), "big.json", &format!(r#"{{"group":"Z3^4","blocks":[[{}]]}}"#, all.join(",")));
    assert_eq!(code(&schurci(&["ci-check", &big])), 3);
}

#[test]
fn decompose_lists_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let wreath = write(dir.path(), "w.json", r#"{"group":"Z4","blocks":[[0],[2],[1,3]]}"#);
    let out = schurci(&["decompose", &wreath]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["gwreath"].as_array().unwrap().len(), 1);

    let discrete = write(dir.path(), "d.json", r#"{"group":"Z4","blocks":[[0],[1],[2],[3]]}"#);
    let v: serde_json::Value = serde_json::from_slice(&schurci(&["decompose", &discrete]).stdout).unwrap();
    assert!(v["gwreath"].as_array().unwrap().is_empty());
}

#[test]
fn verify_theorem_input_errors() {
    assert_eq!(code(&schurci(&["verify-theorem", "3", "3"])), 2);
    assert_eq!(code(&schurci(&["verify-theorem", "4", "3"])), 2);
    assert_eq!(code(&schurci(&["verify-theorem", "3", "5", "--samples", "1"])), 3);
}

#[test]
fn classify_counts() {
    for (group, count) in [("Z5", 3), ("Z7", 4)] {
        let out = schurci(&["classify", "--group", group]);
        assert_eq!(code(&out), 0);
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["count"], count);
    }
    assert_eq!(code(&schurci(&["classify", "--group", "Z2^5"])), 3);
    assert_eq!(code(&schurci(&["classify", "--group", "Z1x"])), 2);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        schurci(&["verify-theorem", "2", "3", "--samples", "40", "--seed", "5", "--out", out.to_str().unwrap()]);
    }
    let names = |d: &Path| {
        let mut v: Vec<_> = std::fs::read_dir(d).unwrap().map(|e| e.unwrap().file_name()).collect();
        v.sort();
        v
    };
    assert_eq!(names(&a), names(&b));
    for name in names(&a) {
        assert_eq!(std::fs::read(a.join(&name)).unwrap(), std::fs::read(b.join(&name)).unwrap());
    }
    let x = schurci(&["verify-theorem", "2", "3", "--samples", "40", "--seed", "5", "--format", "text"]);
    let y = schurci(&["verify-theorem", "2", "3", "--samples", "40", "--seed", "5", "--format", "text", "--workers", "2"]);
    assert_eq!(x.stdout, y.stdout);
    assert!(String::from_utf8_lossy(&x.stdout).starts_with("group Z2^3xZ3 (p=2, q=3) seed 5"));
}
