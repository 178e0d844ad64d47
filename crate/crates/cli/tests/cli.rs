use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_valtree"))
        .args(args)
        .env_remove("VALTREE_MAX_NODES")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

#[test]
fn tree_text_lists_every_node() {
    let out = run(&["tree", "2", "7", "--depth", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 9);
    assert!(text.contains("level 3 | x ≡ 1 (mod 8) | ν = 3"));
    assert!(text.contains("level 3 | x ≡ 5 (mod 8) | ν ≥ 3"));
}

#[test]
fn refined_bounds_change_only_labels() {
    let plain = stdout(&run(&["tree", "2", "7", "--depth", "3"]));
    let refined = stdout(&run(&["tree", "2", "7", "--depth", "3", "--refine-bounds"]));
    assert!(refined.contains("level 3 | x ≡ 5 (mod 8) | ν ≥ 4"));
    assert_eq!(plain.lines().count(), refined.lines().count());
}

#[test]
fn tree_dot_is_a_digraph() {
    let dot = stdout(&run(&["tree", "3", "16", "--format", "dot"]));
    assert!(dot.starts_with("digraph valtree {"));
    assert!(dot.trim_end().ends_with('}'));
    assert_eq!(dot.matches("->").count(), 4);
    assert_eq!(dot.matches("shape=box").count(), 3);
}

#[test]
fn tree_json_has_envelope() {
    let doc = json(&["tree", "3", "16", "--format", "json"]);
    assert_eq!(doc["tool"], "valtree");
    assert_eq!(doc["command"], "tree");
    assert_eq!(doc["parameters"]["constant"], 16);
    assert_eq!(doc["result"]["resolved"], true);
    assert_eq!(doc["result"]["achieved"], serde_json::json!([0, 3, 4]));
}

#[test]
fn node_budget_truncates() {
    let out = Command::new(env!("CARGO_BIN_EXE_valtree"))
        .args(["tree", "2", "7", "--depth", "10"])
        .env("VALTREE_MAX_NODES", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("truncated"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("node budget"));
}

#[test]
fn bad_budget_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_valtree"))
        .args(["tree", "2", "7"])
        .env("VALTREE_MAX_NODES", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_reports_kind_and_range() {
    let doc = json(&["classify", "3", "128", "--format", "json"]);
    let class = &doc["result"]["classification"];
    assert_eq!(class["kind"], "finite");
    assert_eq!(doc["result"]["c_range_display"], "{0, 3, 6, 7}");

    let text = stdout(&run(&["classify", "2", "7"]));
    assert!(text.contains("infinite"));
    assert!(text.contains("{0, 3, 4"));
}

#[test]
fn solve_finds_minimal_witness() {
    let text = stdout(&run(&["solve", "2", "7", "10"]));
    assert!(text.starts_with("(331,107,10)"));
    let doc = json(&["solve", "2", "7", "15", "--format", "json"]);
    assert_eq!(doc["result"]["outcome"]["x"], 181);
    assert_eq!(doc["result"]["outcome"]["y"], 1);
}

#[test]
fn solve_csv() {
    let out = stdout(&run(&["solve", "3", "32", "5", "--format", "csv"]));
    assert_eq!(out, "x,y,c,residue,level\n4,3,5,0,2\n");
}

#[test]
fn absent_exponent_is_not_an_error() {
    let out = run(&["solve", "2", "1", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("proven absent"));
    let doc = json(&["solve", "2", "1", "3", "--format", "json"]);
    assert_eq!(doc["result"]["outcome"]["outcome"], "proven_absent");
}

#[test]
fn small_bound_is_inconclusive() {
    let out = run(&["solve", "2", "7", "15", "--bound", "100"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn table_csv_rows() {
    let out = stdout(&run(&["table", "2", "--d-from", "15", "--d-to", "16"]));
    assert_eq!(out, "D,c,solutions\n16,\"0, 2, 4, 5\",\"(1,17,0) (2,5,2) (8,5,4) (4,1,5)\"\n");
    let with_infinite = stdout(&run(&[
        "table",
        "2",
        "--d-from",
        "15",
        "--d-to",
        "15",
        "--depth",
        "6",
        "--include-infinite",
    ]));
    assert!(with_infinite.contains("15,\"0, 3, 4, 5, 6, ...\""));
}

#[test]
fn recursion_table_json() {
    let doc = json(&["table", "2", "--recursion", "--c-max", "10", "--format", "json"]);
    let rows = doc["result"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[7]["x"], 181);
    assert_eq!(rows[7]["y"], 32);
}

#[test]
fn verify_is_clean() {
    let out = run(&["verify", "3", "--d-max", "16", "--x-max", "1024"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("0 violations"));
}

#[test]
fn out_writes_a_file() {
    let path = std::env::temp_dir().join(format!("valtree-cli-test-{}.dot", std::process::id()));
    let out = run(&["tree", "2", "4", "--format", "dot", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(written.starts_with("digraph"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["tree", "4", "7"][..],
        &["tree", "2", "0"],
        &["tree", "2", "7", "--format", "csv"],
        &["classify", "3", "5", "--format", "dot"],
        &["table", "3", "--recursion"],
        &["table", "2", "--d-from", "9", "--d-to", "3"],
        &["verify", "2"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}
