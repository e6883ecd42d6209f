use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const GOLDEN: &str = "alphabet 01\na a 0\na b 1\nb a 0\n";
/// Every other symbol is 0: period 2.
const ALTERNATING: &str = "alphabet 01\na b 0\na b 1\nb a 0\n";

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftlab"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_out(dir: &Path, args: &[&str]) -> Value {
    let mut args = args.to_vec();
    args.extend(["--format", "json"]);
    let o = run(dir, &args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn setup() -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("golden.txt"), GOLDEN).unwrap();
    fs::write(dir.path().join("alt.txt"), ALTERNATING).unwrap();
    dir
}

fn verdict(v: &Value) -> &str {
    v["records"][0]["verdict"].as_str().unwrap()
}

fn generator_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn construct_one_step() {
    let dir = setup();
    let o = run(dir.path(), &["construct", "--steps", "1", "--out", "g.txt"]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("g.txt")).unwrap();
    assert_eq!(generator_lines(&text), ["01"]);
    assert!(text.contains("# interpretation=Ln=concat(prev ∪ new)"));
    assert!(dir.path().join("g.txt.manifest.json").exists());
}

#[test]
fn construct_two_and_three_steps() {
    let dir = setup();
    run(dir.path(), &["construct", "--steps", "2", "--out", "g2.txt"]);
    let text = fs::read_to_string(dir.path().join("g2.txt")).unwrap();
    let lines = generator_lines(&text);
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "01");
    assert_eq!(lines[1].len(), 30);

    run(dir.path(), &["construct", "--steps", "3", "--max-word-len", "40", "--out", "g3.txt"]);
    let text = fs::read_to_string(dir.path().join("g3.txt")).unwrap();
    let lines = generator_lines(&text);
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[2].len(), 38);
    assert_eq!(&lines[3..], ["*48", "*82", "*92", "*100", "*136"]);
    assert!(text.contains("# s=0,1,2,8"));
}

#[test]
fn construct_rejects_zero_steps_and_missing_out() {
    let dir = setup();
    assert_eq!(run(dir.path(), &["construct", "--steps", "0", "--out", "g.txt"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["construct", "--steps", "1"]).status.code(), Some(2));
}

#[test]
fn spacing_commands() {
    let dir = setup();
    let v = json_out(dir.path(), &["spacing", "--rule", "pow2", "--check", "1001001"]);
    assert_eq!(verdict(&v), "ALLOWED");
    let v = json_out(dir.path(), &["spacing", "--check", "11"]);
    assert_eq!(verdict(&v), "FORBIDDEN");
    let v = json_out(dir.path(), &["spacing", "--glue", "2", "1001", "0100"]);
    assert_eq!(verdict(&v), "ALLOWED");
    assert_eq!(v["records"][0]["witnesses"]["block"], "1001000000000100");
    let v = json_out(dir.path(), &["spacing", "--obstruction", "6"]);
    assert_eq!(verdict(&v), "EXCLUDED(1,2,4,8,16,32,64)");
    // A part of the wrong length is a usage error.
    assert_eq!(run(dir.path(), &["spacing", "--glue", "1", "100"]).status.code(), Some(2));
    // Exactly one action.
    assert_eq!(run(dir.path(), &["spacing"]).status.code(), Some(2));
}

#[test]
fn graph_checks() {
    let dir = setup();
    let v = json_out(dir.path(), &["check", "mixing", "--graph", "golden.txt"]);
    assert_eq!(verdict(&v), "MIXING");
    assert_eq!(v["records"][0]["exactness"], "EXACT");
    let v = json_out(dir.path(), &["check", "mixing", "--graph", "alt.txt", "--window", "20"]);
    assert_eq!(verdict(&v), "NOT_MIXING");
    let v = json_out(dir.path(), &["check", "tt", "--graph", "alt.txt"]);
    assert_eq!(verdict(&v), "NOT_TOTALLY_TRANSITIVE");
    let v = json_out(dir.path(), &["check", "wm", "--graph", "alt.txt"]);
    assert_eq!(verdict(&v), "LONGEST_RUN(1)");
    let v = json_out(dir.path(), &["check", "decomp", "--graph", "alt.txt"]);
    assert_eq!(verdict(&v), "PERIOD(2)");
    let v = json_out(dir.path(), &["check", "equiv", "--graph", "golden.txt"]);
    assert_eq!(verdict(&v), "MIXING");
    assert_eq!(v["records"][0]["witnesses"]["period"], 1);
}

#[test]
fn frobenius_and_prop_p() {
    let dir = setup();
    for (args, want) in [
        (vec!["frobenius", "3", "5"], "FROBENIUS(7)"),
        (vec!["frobenius", "2", "3"], "FROBENIUS(1)"),
        (vec!["frobenius", "6", "10", "15"], "FROBENIUS(29)"),
        (vec!["frobenius", "1", "4"], "ALL_REPRESENTABLE"),
    ] {
        assert_eq!(verdict(&json_out(dir.path(), &args)), want);
    }
    let v = json_out(dir.path(), &["prop-p", "--graph", "golden.txt", "-p", "2", "-N", "4"]);
    assert_eq!(verdict(&v), "GLUE_LENGTH(1)");
    assert_eq!(v["records"][0]["witnesses"]["interleavings_checked"], 3 + 9 + 27 + 81);
}

#[test]
fn scenarios_report_each_criterion() {
    let dir = setup();
    let v = json_out(dir.path(), &["scenario", "frobenius-demo"]);
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0]["check_id"], "criterion.10");
    assert_eq!(records[0]["verdict"], "PASS");

    let o = run(dir.path(), &["scenario", "spacing-p"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("criterion.7") && text.contains("criterion.11"));
    assert!(!text.contains("FAIL"));

    assert_eq!(run(dir.path(), &["scenario", "nonsense"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let dir = setup();
    for name in ["a.json", "b.json"] {
        let o = run(
            dir.path(),
            &["check", "equiv", "--graph", "alt.txt", "--format", "json", "--out", name],
        );
        assert_eq!(o.status.code(), Some(0));
    }
    let a = fs::read(dir.path().join("a.json")).unwrap();
    let b = fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b);
    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a.json.manifest.json")).unwrap()).unwrap();
    assert!(manifest["input_digests"]["alt.txt"].is_string());
    assert_eq!(manifest["outcomes"][0]["verdict"], "NOT_MIXING");
    assert!(manifest["total_runtime_ms"].is_number());
}

#[test]
fn report_diff_exit_codes() {
    let dir = setup();
    let p = dir.path();
    run(p, &["frobenius", "3", "5", "--format", "json", "--out", "a.json"]);
    run(p, &["frobenius", "3", "5", "--format", "json", "--out", "same.json"]);
    run(p, &["frobenius", "3", "7", "--format", "json", "--out", "other.json"]);

    let o = run(p, &["report-diff", "a.json", "same.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());

    let v: Value = {
        let o = run(p, &["report-diff", "a.json", "other.json", "--format", "json"]);
        assert_eq!(o.status.code(), Some(1));
        serde_json::from_str(&stdout(&o)).unwrap()
    };
    assert_eq!(v["identical"], false);
    assert_eq!(v["records"], serde_json::json!([0]));
    assert!(v["changes"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["field"] == "records[0].verdict"));

    assert_eq!(run(p, &["report-diff", "a.json", "missing.json"]).status.code(), Some(2));
    fs::write(p.join("junk.json"), "not json").unwrap();
    assert_eq!(run(p, &["report-diff", "a.json", "junk.json"]).status.code(), Some(2));
}

#[test]
fn io_and_input_errors_exit_two() {
    let dir = setup();
    assert_eq!(run(dir.path(), &["check", "mixing", "--graph", "nope.txt"]).status.code(), Some(2));
    fs::write(dir.path().join("reducible.txt"), "alphabet 01\na b 0\n").unwrap();
    assert_eq!(run(dir.path(), &["check", "decomp", "--graph", "reducible.txt"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["frobenius", "0", "3"]).status.code(), Some(2));
}
