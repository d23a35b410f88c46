//! End-to-end checks of the `hurwitz` binary: output shapes and exit codes.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurwitz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn hurwitz_all_methods_agree() {
    let out = run(&["hurwitz", "--d", "3", "--profile", "2,1;2,1;3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("trace: 1"));
    assert!(text.contains("oracle: 1"));
    assert!(text.contains("degree: 1"));
    assert!(text.contains("recursive: 1"));
    assert!(text.contains("agreement: yes"));
}

#[test]
fn hurwitz_json_output() {
    let out = run(&[
        "hurwitz",
        "--format",
        "json",
        "--d",
        "2",
        "--profile",
        "2;2;2;2",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["agree"], serde_json::json!(true));
    assert_eq!(value["methods"]["trace"], serde_json::json!("1/2"));
    assert_eq!(value["methods"]["oracle"], serde_json::json!("1/2"));
}

#[test]
fn single_method_and_jobs_flag() {
    let out = run(&[
        "hurwitz",
        "--jobs",
        "2",
        "--d",
        "2",
        "--profile",
        "2;2;2;2",
        "--method",
        "degree",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("degree: 1/2"));
}

#[test]
fn usage_errors_exit_1() {
    // unknown flag
    assert_eq!(run(&["hurwitz", "--bogus"]).status.code(), Some(1));
    // malformed profile
    assert_eq!(
        run(&["hurwitz", "--d", "3", "--profile", "2,1;nope"])
            .status
            .code(),
        Some(1)
    );
    // partition sum mismatch
    assert_eq!(
        run(&["hurwitz", "--d", "2", "--profile", "3;3;3"])
            .status
            .code(),
        Some(1)
    );
    // too few partitions
    assert_eq!(
        run(&["hurwitz", "--d", "2", "--profile", "2;2"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn resource_guard_exits_3() {
    let out = run(&[
        "hurwitz",
        "--d",
        "4",
        "--profile",
        "2,1,1;2,1,1;2,1,1;2,1,1",
        "--method",
        "oracle",
        "--max-work",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn help_exits_0() {
    assert!(run(&["--help"]).status.success());
    assert!(run(&["hurwitz", "--help"]).status.success());
}

#[test]
fn cells_export_roundtrips() {
    let dir = std::env::temp_dir().join("hurwitz-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("complex.json");
    let out = run(&[
        "cells",
        "--d",
        "2",
        "--profile",
        "2;2;2;2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("cells: 3"));
    assert!(text.contains("degree: 1/2"));

    let written: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["format"], serde_json::json!("hurwitz-complex/1"));
    assert_eq!(written["degree"], serde_json::json!("1/2"));
    assert_eq!(written["cells"].as_array().unwrap().len(), 3);

    // the json format prints the same document to stdout
    let out = run(&[
        "cells",
        "--format",
        "json",
        "--d",
        "2",
        "--profile",
        "2;2;2;2",
    ]);
    assert!(out.status.success());
    let printed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(printed, written);
}

#[test]
fn trees_listing() {
    let out = run(&["trees", "--n", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("3 trivalent types"));
    assert!(text.contains("12|34"));
    assert!(text.contains("13|24"));
    assert!(text.contains("14|23"));

    // out-of-range n is a usage error
    assert_eq!(run(&["trees", "--n", "42"]).status.code(), Some(1));
}

#[test]
fn embed_known_coordinates() {
    let out = run(&["embed", "--n", "4", "--tree", "12|34", "--lengths", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("(1,2)(3,4): 0"));
    assert!(text.contains("(1,3)(2,4): 5"));
    assert!(text.contains("(1,4)(2,3): 5"));

    // incompatible bipartitions are rejected
    let out = run(&["embed", "--n", "5", "--tree", "12|345", "--tree", "13|245"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selfcheck_passes() {
    let out = run(&["selfcheck", "--max-d", "3", "--max-n", "4", "--seed", "7"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("[pass]"));
    assert!(!text.contains("FAIL"));
}
