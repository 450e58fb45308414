use std::path::PathBuf;
use std::process::{Command, Output};

fn glcm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glcm")).args(args).output().expect("binary runs")
}

fn instance(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "instances", name].iter().collect();
    p.display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn coset_instance_passes() {
    let o = glcm(&["--instance", &instance("coset.toml")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["schema"], "glcm-certificate/1");
    assert_eq!(doc["summary"]["quotient_order"], 2);
    assert!(doc["checks"].as_array().unwrap().iter().all(|c| c["verdict"] != "fail"));
}

#[test]
fn short_horizon_is_refused() {
    let o = glcm(&["--instance", &instance("short_horizon.toml")]);
    assert_eq!(o.status.code(), Some(2));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["schema"], "glcm-refusal/1");
    assert_eq!(doc["line"], 5);
    assert!(doc["error"].as_str().unwrap().contains("n_max >= 34"));
}

#[test]
fn malformed_file_gets_a_diagnostic() {
    let o = glcm(&["--instance", &instance("malformed.toml")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse error at line"), "{}", stderr(&o));
}

#[test]
fn certificates_are_byte_identical() {
    let dir = std::env::temp_dir().join(format!("glcm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    let path = instance("universal.toml");
    let run = |out: &PathBuf, workers: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_glcm"))
            .args(["--instance", &path, "--seed", "11", "--out", out.to_str().unwrap()])
            .env("GLCM_WORKERS", workers)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    };
    run(&a, "1");
    run(&b, "4");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn check_filter() {
    let o = glcm(&["--instance", &instance("universal.toml"), "--checks", "thm-main-c30,univ-morphism"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ids: Vec<&str> = doc["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["thm-main-c30", "univ-morphism"]);
}

#[test]
fn batch_keeps_file_order() {
    let o = glcm(&["--instance", &instance("s3.toml"), "--instance", &instance("coset.toml")]);
    assert_eq!(o.status.code(), Some(0));
    let docs: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(docs[0]["subject"], "s3");
    assert_eq!(docs[1]["subject"], "coset");
}

#[test]
fn explain_known_ids() {
    let o = glcm(&["explain", "thm-main-c30"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("f⁻¹[C] ⊆ X³⁰"));
    assert!(text.contains("anchor:   Moreover, $f^{-1}[C] \\subseteq X^{30}$"));
    let o = glcm(&["explain", "rem43-k"]);
    assert!(stdout(&o).contains("k = 4k₂ + k₂n_{k₁}"));
}

#[test]
fn explain_unknown_id() {
    let o = glcm(&["explain", "thm-main-c31"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown"));
}

#[test]
fn suites_echo_seed() {
    let o = glcm(&["--suite", "sl2", "--seed", "1", "--samples", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["seed"], 1);
    assert_eq!(doc["summary"]["samples"], 200);
    let o = glcm(&["--suite", "nonstd", "--samples", "20", "--checks", "nonstd-l511-rotation,nonstd-l511-gamma-pos,nonstd-l511-gamma-neg,nonstd-l511-infinitesimal"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn usage_errors() {
    assert_eq!(glcm(&["--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(glcm(&[]).status.code(), Some(2));
    assert_eq!(glcm(&["--frobnicate"]).status.code(), Some(2));
    assert_eq!(glcm(&["--suite", "sl2", "--instance", "x.toml"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_glcm")).args(["explain", "rem43-k"]).env("GLCM_WORKERS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sign_of_circle_relation() {
    let o = glcm(&["sign", "(- (+ (^ (- 1 x) 2) (^ y 2)) 1)"]);
    assert_eq!(stdout(&o), "sign: 0\nleading: 0\n");
    let o = glcm(&["sign", "(- x y)"]);
    assert!(stdout(&o).starts_with("sign: -1"));
}

#[test]
fn failing_check_exits_one() {
    let o = glcm(&["--instance", &instance("bad_morphism.toml")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("FAIL univ-uniqueness-n"));
}
