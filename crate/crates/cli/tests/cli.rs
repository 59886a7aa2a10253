use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_betashift"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn expand_examples() {
    let v = json(&["expand", "--x", "0.5", "--beta", "2", "--n", "8"]);
    assert_eq!(v["digits"], "10000000");
    assert_eq!(v["certified"], 8);
    let v = json(&["expand", "--x", "1", "--beta", "@ (110)", "--mode", "quasi", "--n", "9"]);
    assert_eq!(v["digits"], "110110110");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["expand", "--x", "1.5", "--beta", "2", "--n", "4"]), 1);
    assert_eq!(code(&["expand", "--x", "abc", "--beta", "2"]), 2);
    assert_eq!(code(&["expand", "--x", "0.5", "--beta", "golden"]), 2);
    assert_eq!(code(&["expand", "--x", "0.5", "--beta", "2.5"]), 1);
    assert_eq!(code(&["solve-beta", "--alpha", "(01)"]), 1);
    assert_eq!(code(&["solve-beta", "--alpha", "01"]), 2);
    assert_eq!(code(&["atlas", "--max-len", "13"]), 2);
    assert_eq!(code(&["staircase", "--beta", "2", "--samples", "1"]), 2);
    assert_eq!(code(&["staircase", "--beta", "2", "--t-min", "0.5", "--t-max", "0.2"]), 2);
    assert_eq!(code(&["zset", "--word", "1100"]), 1);
    assert_eq!(code(&["factorize", "--word", "0110"]), 1);
    assert_eq!(code(&["no-such-command"]), 2);
    assert_eq!(code(&["farey", "--level", "2"]), 0);
}

#[test]
fn alpha_and_roots() {
    let v = json(&["alpha", "--beta", "1.9", "--n", "20"]);
    assert_eq!(v["prefix"], "11101001101101100010");
    assert_eq!(v["alpha"], Value::Null);
    let v = json(&["alpha", "--beta", "@(10)", "--n", "6"]);
    assert_eq!(v["prefix"], "101010");
    assert_eq!(v["alpha"], "(10)");
    let v = json(&["solve-beta", "--alpha", "(110)"]);
    let b = &v["beta"];
    assert!(num(&b[0]) <= 1.839286755214161 && 1.839286755214161 <= num(&b[1]) + 1e-12);
    let v = json(&["solve-beta", "--alpha", "(1)"]);
    assert_eq!(num(&v["beta"][0]), 2.0);
    assert_eq!(num(&v["beta"][1]), 2.0);
}

#[test]
fn admissibility() {
    let v = json(&["admissible", "--x", "(011)", "--alpha", "(110)"]);
    assert_eq!(v["admissible"], false);
    let v = json(&["admissible", "--x", "(0)", "--beta", "1.3"]);
    assert_eq!(v["admissible"], true);
    let v = json(&["admissible", "--x", "(01)", "--beta", "@(10)"]);
    assert_eq!(v["admissible"], false);
    let v = json(&["admissible", "--x", "(001)", "--beta", "1.7"]);
    assert_eq!(v["admissible"], true);
}

#[test]
fn words() {
    let v = json(&["farey", "--level", "2"]);
    assert_eq!(v["words"], serde_json::json!(["0", "001", "01", "011", "1"]));
    let v = json(&["factorize", "--word", "00101"]);
    assert_eq!((v["u"].as_str(), v["v"].as_str()), (Some("001"), Some("01")));
    assert_eq!(v["palindromic_interior"], true);
    assert_eq!(v["max_rotation"], "10100");
}

#[test]
fn atlas_contents() {
    let v = json(&["atlas", "--max-len", "2"]);
    assert_eq!(v["intervals"][0]["generator"], "10");
    let v = json(&["atlas", "--max-len", "3", "--kind", "farey"]);
    let gens: Vec<&str> = v["intervals"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["generator"].as_str().unwrap())
        .collect();
    assert_eq!(gens, ["100", "10", "110"]);
    let v = json(&["atlas", "--max-len", "6", "--kind", "all"]);
    let nested = v["nesting"].as_array().unwrap();
    let gen_of = |i: &Value| v["intervals"][i.as_u64().unwrap() as usize]["generator"].clone();
    assert!(nested
        .iter()
        .any(|n| gen_of(&n["inner"]) == "1100" && gen_of(&n["outer"]) == "10"));
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn staircase_csv() {
    let args = [
        "staircase", "--beta", "@(10)", "--t-min", "0", "--t-max", "0.4", "--samples", "64",
    ];
    let out = run(&args);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert_eq!(text.lines().next(), Some("t,h_lower,h_upper,dim_lower,dim_upper,method"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 64);
    let f = |s: &str| s.parse::<f64>().unwrap();
    assert!(f(&rows[0][3]) > 1.0 - 1e-6 && f(&rows[0][4]) <= 1.0);
    for r in &rows {
        assert!(f(&r[3]) <= f(&r[4]));
        if f(&r[0]) > 0.382 {
            assert!(f(&r[4]) < 0.02, "{r:?}");
        }
    }
    // Byte-identical on a second run.
    assert_eq!(run(&args).stdout, out.stdout);

    let out = run(&["staircase", "--beta", "2", "--t-min", "0.25", "--t-max", "0.5", "--samples", "2"]);
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(f(&rows[1][0]), 0.5);
    assert!(f(&rows[1][4]) < 0.02);
}

#[test]
fn tau_reports() {
    let v = json(&["tau", "--beta", "2"]);
    assert_eq!(num(&v["tau_exact"]), 0.5);
    assert_eq!(v["certified"], true);
    let v = json(&["tau", "--beta", "@(10)"]);
    assert_eq!(v["regime"], "left_endpoint");
    let target = 1.0 - 1.0 / 1.618033988749895;
    assert!(num(&v["tau_lower"]) <= target + 1e-12 && target - 1e-12 <= num(&v["tau_upper"]));
    let v = json(&["tau", "--beta", "1.7"]);
    assert_eq!(v["generator"], "10");
    assert!(num(&v["tau_upper"]) < 1.0 - 1.0 / 1.7);
    assert!(!v["witness_words"].as_array().unwrap().is_empty());
}

#[test]
fn point_queries() {
    let v = json(&["isolated", "--word", "01", "--beta", "1.7"]);
    assert_eq!(v["status"], "isolated");
    let v = json(&["zset", "--word", "10"]);
    assert_eq!(v["cardinality"], 2);
    assert_eq!(v["members"], serde_json::json!(["(01)", "(10)"]));
    let v = json(&["classify", "--t", "(01)", "--beta", "@(110)"]);
    assert_eq!(v["in_e_plus"], true);
    assert_eq!(v["in_e"], true);
}

#[test]
fn digits_flag_controls_precision() {
    let v = json(&["--digits", "3", "solve-beta", "--alpha", "(10)"]);
    assert_eq!(v["beta"][0].to_string(), "1.618");
    assert_eq!(v["beta"][1].to_string(), "1.619");
}
