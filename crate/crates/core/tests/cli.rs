use std::path::PathBuf;
use std::process::{Command, Output};

use polyimage_core::cli::{RunOutcome, EXIT_DISAGREE, EXIT_OK, EXIT_USAGE};
use serde_json::{json, Value};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn polyimage(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyimage"))
        .args(args)
        .env_remove("POLYIMAGE_BUDGET")
        .output()
        .unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn classify_names_the_image() {
    let out = polyimage(&["classify", "--file", &data("ut2_y1z2.poly"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let v = json_of(&out);
    assert_eq!(v["consistent"], json!(true));
    assert_eq!(v["results"][0]["catalog"], json!("K+J"));
}

#[test]
fn classify_text_lists_each_prime() {
    let out = polyimage(&["classify", "--file", &data("gamma23_line.poly"), "--primes", "3,5"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Line(2,3)"), "{text}");
    assert!(text.contains("F_3:") && text.contains("F_5:"));
    assert!(!text.contains("F_7:"));
}

#[test]
fn unsupported_structure_is_a_usage_error() {
    let out = polyimage(&["classify", "--file", &data("ut3_z1z2.poly")]);
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no classification theorem"));
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(polyimage(&["frobnicate"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(polyimage(&["classify"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(polyimage(&["lemmas", "--primes", "4"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(polyimage(&["lemmas", "--primes", "2"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(polyimage(&["lemmas", "--budget", "0"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(polyimage(&["classify", "--file", "/nonexistent.poly"]).status.code(), Some(EXIT_USAGE));
}

#[test]
fn enumerate_reports_a_non_closed_image() {
    let out = polyimage(&["enumerate", "--file", &data("ut4_zn.poly"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let v = json_of(&out);
    let image = &v["results"][0]["images"][0];
    assert_eq!(image["is_vector_space"], json!(false));
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let dir = std::env::temp_dir().join(format!("polyimage-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let p = path.display().to_string();
    let args = ["enumerate", "--file", &data("ut2_y1z2.poly"), "--samples", "20", "--seed", "9", "--format", "json"];
    let first = polyimage(&args);
    let mut with_out = args.to_vec();
    with_out.extend(["--out", &p]);
    let second = polyimage(&with_out);
    assert_eq!(second.status.code(), Some(EXIT_OK));
    assert!(second.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), first.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn budget_comes_from_the_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_polyimage"));
        cmd.args(["enumerate", "--file", &data("ut2_y1z2.poly")]).args(extra);
        match env {
            Some(b) => cmd.env("POLYIMAGE_BUDGET", b),
            None => cmd.env_remove("POLYIMAGE_BUDGET"),
        };
        cmd.output().unwrap()
    };
    let starved = run(Some("10"), &[]);
    assert_eq!(starved.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&starved.stderr).contains("budget"));
    assert_eq!(run(Some("10"), &["--budget", "1000000"]).status.code(), Some(EXIT_OK));
    assert_eq!(run(None, &[]).status.code(), Some(EXIT_OK));
}

#[test]
fn lemmas_and_counterexamples_succeed() {
    let out = polyimage(&["lemmas", "--max-size", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert_eq!(json_of(&out)["suite"]["passed"], json!(true));
    let out = polyimage(&["counterexamples", "--primes", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let v = json_of(&out);
    assert_eq!(v["cases"].as_array().unwrap().len(), 6);
    assert_eq!(v["consistent"], json!(true));
}

#[test]
fn stdin_input() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_polyimage"))
        .args(["classify", "--file", "-", "--format", "json"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"algebra ut2\ninvolution symplectic\npoly z1 z2\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert_eq!(json_of(&out)["results"][0]["catalog"], json!("S+J"));
}

#[test]
fn disagreement_maps_to_exit_two() {
    let outcome = RunOutcome {
        json: json!({}),
        text: String::new(),
        consistent: false,
    };
    assert_eq!(outcome.exit_code(), EXIT_DISAGREE);
}
