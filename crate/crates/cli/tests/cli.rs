use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn kodaira(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kodaira"))
        .args(args)
        .env_remove("KODAIRA_SEED")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = kodaira(&full);
    (serde_json::from_str(&stdout(&o)).expect("valid json"), code(&o))
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kodaira-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn classify_builtin_case() {
    let (v, c) = json(&["classify", "--case", "1B'", "--m", "2"]);
    assert_eq!(c, 0);
    assert_eq!(v["label"], "1B'");
    assert_eq!(v["splits"], true);
    assert_eq!(v["real_part"], "2T");
    assert!(v["log"].is_array());
}

#[test]
fn classify_from_file_round_trips() {
    let o = kodaira(&["classify", "--case", "1A2aii'", "--m", "4", "--print-input"]);
    assert_eq!(code(&o), 0);
    let p = temp_file("a2.txt", &stdout(&o));
    let (v, c) = json(&["classify", "--input", p.to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(v["label"], "1A2aii'");
}

#[test]
fn case_b_with_mismatched_f_is_inadmissible() {
    let o = kodaira(&["classify", "--case", "1B'", "--m", "1", "--print-input"]);
    let text: String = stdout(&o)
        .lines()
        .map(|l| if l.starts_with("f1 ") { "f1 = 1/3".to_string() } else { l.to_string() })
        .map(|l| l + "\n")
        .collect();
    let p = temp_file("b.txt", &text);
    let o = kodaira(&["classify", "--input", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn malformed_input_is_a_parse_error() {
    let p = temp_file("bad.txt", "case = A\nm = two\n");
    let o = kodaira(&["classify", "--input", p.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(code(&kodaira(&["classify", "--m", "0", "--case", "1B'"])), 1);
    assert_eq!(code(&kodaira(&["table"])), 1);
    assert_eq!(code(&kodaira(&["--help"])), 0);
}

#[test]
fn table_against_published_golden() {
    // The published count for 1A1bi' is one torus too many; every other row agrees.
    for m in [1, 2] {
        let (v, c) = json(&["table", "--m", &m.to_string(), "--golden"]);
        assert_eq!(c, 3);
        let diffs = v["golden"]["diffs"].as_array().unwrap();
        assert_eq!(diffs.len(), 1, "{diffs:?}");
        assert!(diffs[0].as_str().unwrap().starts_with("1A1bi'"));
    }
}

#[test]
fn golden_files() {
    let (v, c) = json(&["table", "--m", "2"]);
    assert_eq!(c, 0);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 17);
    let golden: String = rows
        .iter()
        .map(|r| format!("{} {}\n", r["label"].as_str().unwrap(), r["real_part"].as_str().unwrap()))
        .collect();
    let good = temp_file("good.txt", &format!("# computed\n{golden}"));
    assert_eq!(code(&kodaira(&["table", "--m", "2", "--golden", good.to_str().unwrap()])), 0);
    let bad = temp_file("bad-golden.txt", &golden.replacen("1B' 2T", "1B' T", 1));
    let (v, c) = json(&["table", "--m", "2", "--golden", bad.to_str().unwrap()]);
    assert_eq!(c, 3);
    assert_eq!(v["golden"]["diffs"][0], "1B': computed 2T, golden T");
}

#[test]
fn splitting_agrees_with_search() {
    let (v, c) = json(&["splitting", "--m", "3"]);
    assert_eq!(c, 0);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    assert!(rows.iter().all(|r| r["search_agrees"] == true));
    let (v, _) = json(&["splitting", "--case", "1A1bi''", "--m", "3"]);
    assert_eq!(v["rows"][0]["splits"], false);
}

#[test]
fn selftest_exit_codes() {
    assert_eq!(code(&kodaira(&["selftest"])), 0);
    assert_eq!(code(&kodaira(&["selftest", "--corrupt"])), 4);
    let (v, c) = json(&["selftest", "--only", "moduli"]);
    assert_eq!(c, 0);
    assert_eq!(v["suites"].as_array().unwrap().len(), 1);
    assert_eq!(v["suites"][0]["suite"], "moduli");
    assert_eq!(code(&kodaira(&["selftest", "--only", "nope"])), 1);
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_kodaira"))
            .args(["--format", "json", "selftest", "--only", "collection"])
            .env("KODAIRA_SEED", seed)
            .output()
            .unwrap()
    };
    let o = run("11");
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 11);
    assert_eq!(code(&run("eleven")), 1);
}

#[test]
fn moduli_check_passes() {
    let (v, c) = json(&["moduli-check", "--m", "3"]);
    assert_eq!(c, 0);
    assert_eq!(v["exchange"].as_object().unwrap().len(), 4);
}

#[test]
fn json_is_stable_and_formats_agree() {
    let args = ["table", "--m", "1"];
    let first = stdout(&kodaira(&[&["--format", "json"][..], &args].concat()));
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", first);
    assert_eq!(stdout(&kodaira(&[&["--format", "json"][..], &args].concat())), first);
    let human = stdout(&kodaira(&args));
    for row in v["rows"].as_array().unwrap() {
        assert!(human.contains(&format!("label: {}", row["label"].as_str().unwrap())));
        assert!(human.contains(&format!("real_part: {}", row["real_part"].as_str().unwrap())));
    }
}
