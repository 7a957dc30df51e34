use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn pilelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pilelab"))
        .args(args)
        .env_remove("PILELAB_CAP_GROUP_ORDER")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn pile_path(name: &str) -> String {
    corpus().join("piles").join(format!("{name}.json")).display().to_string()
}

fn ep_path(name: &str) -> String {
    corpus().join("eps").join(format!("{name}.json")).display().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn analyze_fixed_point_is_projective() {
    let out = pilelab(&["analyze", &pile_path("s3-fixed-point")]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["schema"], "pilelab/1");
    assert_eq!(report["agree"], true);
    for route in ["homological", "dual", "oracle"] {
        assert_eq!(report["verdicts"][route], true, "{route}");
    }
}

#[test]
fn analyze_free_pile_is_not_projective() {
    let out = pilelab(&["analyze", &pile_path("c2-free")]);
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["verdicts"]["homological"], false);
    assert_eq!(report["verdicts"]["oracle"], false);
    assert_eq!(report["first_failure"][0]["p"], 2);
}

#[test]
fn analyze_bare_pile_document_with_routes_and_primes() {
    let dir = tempfile::tempdir().unwrap();
    let pile = write(
        dir.path(),
        "c3.json",
        r#"{"schema":"pilelab/1","group":{"degree":3,"generators":[[2,3,1]]},"points":3,"action":[[2,3,1]]}"#,
    );
    let out = pilelab(&["analyze", &pile, "--routes", "dual", "--primes", "3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["pile"], "c3");
    assert_eq!(report["primes"], serde_json::json!([3]));
    assert_eq!(report["verdicts"]["dual"], false);
    assert!(report["verdicts"]["homological"].is_null());
}

#[test]
fn analyze_writes_json_file_and_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let run = pilelab(&["analyze", &pile_path("s3-cosets-c2-c3"), "--json", out.to_str().unwrap()]);
        assert_eq!(code(&run), 0);
        assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "s3-cosets-c2-c3: not projective");
    }
    let a = std::fs::read(a).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, std::fs::read(b).unwrap());
}

#[test]
fn timings_are_opt_in() {
    let plain = stdout_json(&pilelab(&["analyze", &pile_path("c2-free")]));
    assert!(plain.get("timings_ms").is_none());
    let timed = stdout_json(&pilelab(&["analyze", &pile_path("c2-free"), "--timings"]));
    assert!(timed["timings_ms"].is_object());
}

#[test]
fn malformed_input_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{ not json");
    assert_eq!(code(&pilelab(&["analyze", &bad])), 1);
    let wrong_schema = write(
        dir.path(),
        "old.json",
        r#"{"schema":"pilelab/0","group":{"degree":2,"generators":[[2,1]]},"points":1,"action":[[1]]}"#,
    );
    assert_eq!(code(&pilelab(&["analyze", &wrong_schema])), 1);
    let not_action = write(
        dir.path(),
        "bad-action.json",
        r#"{"schema":"pilelab/1","group":{"degree":3,"generators":[[2,3,1]]},"points":2,"action":[[2,1]]}"#,
    );
    assert_eq!(code(&pilelab(&["analyze", &not_action])), 1);
    assert_eq!(code(&pilelab(&["analyze", "/nonexistent/pile.json"])), 1);
    assert_eq!(code(&pilelab(&["analyze", &pile_path("c2-free"), "--routes", "sideways"])), 1);
    assert_eq!(code(&pilelab(&["frobnicate"])), 1);
}

#[test]
fn group_order_cap_exits_3() {
    let out = Command::new(env!("CARGO_BIN_EXE_pilelab"))
        .args(["analyze", &pile_path("s3-natural")])
        .env("PILELAB_CAP_GROUP_ORDER", "4")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn simples_of_c3_at_2() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "c3.json", r#"{"schema":"pilelab/1","degree":3,"generators":[[2,3,1]]}"#);
    let out = pilelab(&["simples", &g, "-p", "2"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["count"], 2);
    let dims: Vec<u64> = doc["modules"].as_array().unwrap().iter().map(|m| m["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1, 2]);
    assert!(doc["modules"][1]["fingerprint"].is_string());
    assert_eq!(code(&pilelab(&["simples", &g, "-p", "4"])), 1);
}

#[test]
fn homology_of_c2_with_trivial_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "c2.json", r#"{"schema":"pilelab/1","degree":2,"generators":[[2,1]]}"#);
    let m = write(dir.path(), "f2.json", r#"{"schema":"pilelab/1","p":2,"dim":1,"matrices":[[[1]]]}"#);
    for side in ["homology", "cohomology"] {
        let out = pilelab(&["homology", &g, &m, "--degree", "2", "--side", side]);
        assert_eq!(code(&out), 0);
        let doc = stdout_json(&out);
        assert_eq!(doc["dim"], 1);
        assert_eq!(doc["side"], side);
        assert_eq!(doc["representatives"].as_array().unwrap().len(), 1);
    }
    let wrong = write(dir.path(), "bad.json", r#"{"schema":"pilelab/1","p":2,"dim":2,"matrices":[[[1]]]}"#);
    assert_eq!(code(&pilelab(&["homology", &g, &wrong, "--degree", "1"])), 1);
}

#[test]
fn ep_solve_split_and_unsolvable() {
    let out = pilelab(&["ep-solve", &ep_path("s3-to-c2-regular")]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["status"], "solved");
    assert!(doc["solution"]["point_images"].is_array());

    let out = pilelab(&["ep-solve", &ep_path("c8-to-c2-regular")]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["status"], "unsolvable");
    assert_eq!(doc["witness"]["chain_length"], 2);
}

#[test]
fn selftest_passes_on_shipped_corpus() {
    let dir = corpus();
    let a = pilelab(&["selftest", "--corpus", dir.to_str().unwrap(), "--seed", "0"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stdout));
    let b = pilelab(&["selftest", "--corpus", dir.to_str().unwrap(), "--seed", "1"]);
    assert_eq!(code(&b), 0);
    let verdicts = |o: &Output| -> Vec<String> {
        String::from_utf8_lossy(&o.stdout).lines().filter(|l| l.starts_with("corpus")).map(str::to_string).collect()
    };
    assert_eq!(verdicts(&a), verdicts(&b));
    assert_eq!(verdicts(&a).len(), 14);
}

#[test]
fn selftest_names_a_tampered_entry() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir(dir.path().join("piles")).unwrap();
    for name in ["c2-free", "c3-fixed-point"] {
        let text = std::fs::read_to_string(pile_path(name)).unwrap();
        let text = if name == "c2-free" { text.replace("\"expected\": \"no\"", "\"expected\": \"yes\"") } else { text };
        std::fs::write(dir.path().join("piles").join(format!("{name}.json")), text).unwrap();
    }
    let out = pilelab(&["selftest", "--corpus", dir.path().to_str().unwrap()]);
    assert_ne!(code(&out), 0);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("c2-free"), "{err}");
}
