use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn cfermat() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cfermat"));
    cmd.env_remove("CFERMAT_CONFIG").env("XDG_CONFIG_HOME", "/nonexistent").env("HOME", "/nonexistent");
    cmd
}

fn run(args: &[&str]) -> Output {
    cfermat().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = cfermat().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn fermat_examples() {
    let out = run(&["fermat", "--q", "5", "--d", "2", "--n", "1", "--format", "json"]);
    let doc = json(&out);
    assert_eq!(code(&out), 0);
    assert_eq!(doc["schema"], "cf/1");
    assert_eq!(doc["solution"], serde_json::json!(["1", "2"]));
    assert_eq!(doc["verified"], true);

    let out = run(&["fermat", "--q", "3", "--d", "2", "--n", "1"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["result"], "no_solution");
}

#[test]
fn kummer_bound_example() {
    let out = run(&["bounds", "kummer", "--d", "2", "--g", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["bound"], "8");
}

#[test]
fn rank_and_residue_documents() {
    let doc = json(&run(&["waring", "rank", "--q", "7", "--d", "2", "--c", "6"]));
    assert_eq!(doc["witnesses"], serde_json::json!(["3", "2"]));
    assert_eq!(doc["rank"], 2);

    let doc = json(&run(&["residue", "--q", "7", "--d", "3"]));
    assert_eq!(doc["class_count"], 3);
    assert_eq!(doc["classes"][0], serde_json::json!(["1", "6"]));

    let out = run(&["waring", "rank", "--q", "4", "--d", "3", "--c", "x"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["result"], "not_representable");
}

#[test]
fn verify_accepts_and_rejects() {
    let emitted = run(&["waring", "rank", "--q", "13", "--d", "4", "--c", "5"]);
    assert_eq!(code(&emitted), 0);
    let text = String::from_utf8(emitted.stdout).unwrap();

    let out = run_stdin(&["verify", "-"], &text);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["valid"], true);

    let mut doc: Value = serde_json::from_str(&text).unwrap();
    let w = doc["witnesses"][0].as_str().unwrap().parse::<u64>().unwrap();
    doc["witnesses"][0] = Value::String(((w + 1) % 13).to_string());
    let out = run_stdin(&["verify", "-"], &doc.to_string());
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["valid"], false);

    let out = run_stdin(&["verify", "-"], "{ not json");
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["result"], "schema_error");

    let out = run_stdin(&["verify", "-"], r#"{"schema":"cf/2","kind":"kummer_bound","d":2,"g":1,"bound":"8"}"#);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_reads_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("solution.json");
    let out = run(&["diagonal", "--q", "5", "--d", "2", "--coeffs", "1,2,3,1,2"]);
    assert_eq!(code(&out), 0);
    std::fs::write(&path, &out.stdout).unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["checked_kind"], "solution");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["fermat", "--d", "2", "--n", "1"])), 2);
    assert_eq!(code(&run(&["fermat", "--q", "5", "--d", "2", "--n", "1", "--bogus"])), 2);
    assert_eq!(code(&run(&["fermat", "--q", "6", "--d", "2", "--n", "1"])), 2);
    assert_eq!(code(&run(&["bounds", "kummer", "--d", "0", "--g", "1"])), 2);
}

#[test]
fn caps_exit_three() {
    let args = ["diagonal", "--q", "31", "--d", "2", "--coeffs", "1,1,1,1,1", "--brute"];
    assert_eq!(code(&run(&args)), 0);
    let out = run(&[&args[..], &["--cap", "1000"]].concat());
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["result"], "resource_cap");
}

#[test]
fn config_file_sets_caps() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("config.toml");
    std::fs::write(&path, "oracle_cap = 1000\n").unwrap();
    let args = ["diagonal", "--q", "31", "--d", "2", "--coeffs", "1,1,1,1,1", "--brute"];

    let out = run(&[&args[..], &["--config", path.to_str().unwrap()]].concat());
    assert_eq!(code(&out), 3);

    let out = cfermat().args(args).env("CFERMAT_CONFIG", &path).output().unwrap();
    assert_eq!(code(&out), 3);

    let out = run(&[&args[..], &["--config", path.to_str().unwrap(), "--cap", "100000000"]].concat());
    assert_eq!(code(&out), 0);

    std::fs::write(&path, "no_such_key = 1\n").unwrap();
    let out = run(&[&args[..], &["--config", path.to_str().unwrap()]].concat());
    assert_eq!(code(&out), 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["sweep", "--q-max", "16", "--d-max", "4", "--seed", "7", "--diagonal-samples", "5"];
    let first = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, run(&args).stdout);
    let doc = json(&first);
    assert_eq!(doc["violations"], serde_json::json!([]));
    let cell = doc["cells"].as_array().unwrap().iter().find(|c| c["q"] == 3 && c["d"] == 2).unwrap();
    assert_eq!(cell["class_count"], 2);
    assert_eq!(cell["oracle_min_fermat_n"], 2);

    let id = ["hilbert", "find", "--n", "2", "--d", "2"];
    assert_eq!(run(&id).stdout, run(&id).stdout);
}

#[test]
fn text_format() {
    let out = run(&["fermat", "--q", "7", "--d", "2", "--n", "2", "--format", "text"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1, 3, 2"), "{text}");
    assert!(serde_json::from_str::<Value>(&text).is_err());
}

#[test]
fn char_zero_commands() {
    let out = run(&["waring", "minus-one", "--field", "Q[x]/(x^2+1)", "--d", "4", "--squares", "x"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["target"], "-1");
    assert_eq!(doc["verified"], true);

    let out = run(&["waring", "minus-one", "--field", "Q", "--d", "2", "--squares", "1"]);
    assert_ne!(code(&out), 0);

    let out = run(&["hilbert", "scale", "--lambda", "2/3", "--base", "3", "--e", "2", "--compact"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["verified"], true);

    let out = run(&["field", "arith", "--field", "Q[x]/(x^3-2)", "--op", "div", "1", "x"]);
    assert_eq!(json(&out)["result"], "1/2*x^2");

    let out = run(&["field", "arith", "--q", "7", "--op", "div", "1", "0"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["result"], "division_by_zero");
}

#[test]
fn schreier_command() {
    let out = run(&["bounds", "schreier", "--degree", "4", "--gens", "(0 1),(0 1 2 3)", "--base", "0"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["index"], 4);
    assert_eq!(doc["stabilizer_order"], 6);
    let count = doc["subgroup_generators"].as_array().unwrap().len() as u64;
    assert!(count <= doc["bound"].as_str().map_or_else(|| doc["bound"].as_u64().unwrap(), |s| s.parse().unwrap()));

    let verdict = run_stdin(&["verify", "-"], &String::from_utf8(out.stdout).unwrap());
    assert_eq!(code(&verdict), 0);
}
