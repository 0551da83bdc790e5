//! End-to-end tests of the command-line binary: exit codes, report
//! formats, schema conformance, cache behavior, and determinism
//! across parallelism degrees.

use std::path::Path;
use std::process::{Command, Output};

fn treelie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treelie"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8 stdout")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn unknown_names_are_usage_errors() {
    for args in [
        vec!["verify", "no-such-check", "--n", "1", "--k", "1"],
        vec!["conjecture", "no-such-conjecture", "--n", "1", "--k", "1"],
        vec!["group", "Zq", "--n", "1", "--k", "1"],
        vec!["nonsense"],
    ] {
        let out = treelie(&args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}: {}", stderr(&out));
    }
}

#[test]
fn missing_or_inconsistent_flags_are_usage_errors() {
    for args in [
        vec!["dims", "--kmax", "3"],
        vec!["verify", "tau", "--n", "1"],
        vec!["verify", "tau", "--n", "1", "--k", "3", "--kmax", "2"],
        vec!["verify", "tau", "--n", "1", "--k", "0"],
        vec!["dims", "--n", "1", "--kmax", "2", "--format", "yaml"],
        vec!["dims", "--n", "1", "--kmax", "2", "--jobs", "0"],
    ] {
        let out = treelie(&args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}: {}", stderr(&out));
    }
}

#[test]
fn oversized_verify_is_refused_with_estimate() {
    let out = treelie(&["verify", "thm-tree", "--n", "2", "--k", "9"]);
    assert_eq!(out.status.code(), Some(3));
    let msg = stderr(&out);
    assert!(msg.contains("estimated"), "no estimate in: {msg}");
    assert!(msg.contains("--limit"), "no remedy hint in: {msg}");
    assert!(stdout(&out).is_empty(), "refusal must not emit a report");
}

#[test]
fn passing_verify_exits_zero() {
    let out = treelie(&["verify", "cor-dd", "--n", "2", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("pass"), "missing verdict in: {text}");
}

#[test]
fn genus_flag_is_twice_rank_and_n_overrides() {
    let by_genus = treelie(&["dims", "--genus", "1", "--kmax", "2", "--format", "json"]);
    let by_rank = treelie(&["dims", "--n", "2", "--kmax", "2", "--format", "json"]);
    assert_eq!(stdout(&by_genus), stdout(&by_rank));
    let overridden = treelie(&[
        "dims", "--genus", "3", "--n", "1", "--kmax", "2", "--format", "json",
    ]);
    let direct = treelie(&["dims", "--n", "1", "--kmax", "2", "--format", "json"]);
    assert_eq!(stdout(&overridden), stdout(&direct));
}

#[test]
fn json_reports_validate_against_shipped_schema() {
    let schema_text = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/report.schema.json"),
    )
    .expect("schema file present in repo");
    let schema: serde_json::Value = serde_json::from_str(&schema_text).expect("schema is JSON");
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");

    let jobs: Vec<Vec<&str>> = vec![
        vec!["dims", "--n", "2", "--kmax", "3", "--format", "json"],
        vec!["dims", "--n", "1", "--kmax", "4", "--format", "json", "--limit", "1"],
        vec!["group", "At", "--n", "1", "--k", "1", "--kmax", "2", "--format", "json"],
        vec!["verify", "thm-tree", "--n", "1", "--kmax", "2", "--format", "json"],
        vec!["verify", "cor-dd", "--n", "2", "--k", "2", "--format", "json"],
        vec!["conjecture", "eta-iso", "--n", "1", "--kmax", "3", "--format", "json"],
        vec![
            "conjecture",
            "square-mono",
            "--n",
            "2",
            "--kmax",
            "3",
            "--format",
            "json",
            "--limit",
            "100",
        ],
    ];
    for args in jobs {
        let out = treelie(&args);
        let report: serde_json::Value =
            serde_json::from_str(&stdout(&out)).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        let errors: Vec<String> = validator
            .iter_errors(&report)
            .map(|e| e.to_string())
            .collect();
        assert!(errors.is_empty(), "{args:?} schema violations: {errors:?}");
    }
}

#[test]
fn csv_rows_carry_the_json_content() {
    let args = ["verify", "lemma-quasi", "--n", "2", "--k", "1", "--kmax", "3"];
    let json_out = treelie(&[&args[..], &["--format", "json"]].concat());
    let csv_out = treelie(&[&args[..], &["--format", "csv"]].concat());
    let report: serde_json::Value = serde_json::from_str(&stdout(&json_out)).expect("json");
    let csv = stdout(&csv_out);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "section,name,n,k,value,witness");
    let groups = report["groups"].as_array().expect("groups");
    let checks = report["checks"].as_array().expect("checks");
    assert_eq!(lines.len(), 1 + groups.len() + checks.len());
    for check in checks {
        let needle = format!(
            "check,{},{},{},{}",
            check["name"].as_str().unwrap(),
            check["n"],
            check["k"],
            check["status"].as_str().unwrap()
        );
        assert!(
            lines.iter().any(|l| l.starts_with(&needle)),
            "csv missing {needle}: {csv}"
        );
    }
    for group in groups {
        let display = group["structure"]["display"].as_str().unwrap();
        let needle = format!(
            "group,{},{},{},{}",
            group["object"].as_str().unwrap(),
            group["n"],
            group["k"],
            display
        );
        assert!(
            lines.iter().any(|l| l.starts_with(&needle)),
            "csv missing {needle}: {csv}"
        );
    }
}

#[test]
fn parallelism_degree_does_not_change_json_bytes() {
    let base = ["verify", "cor-dd", "--n", "2", "--k", "1", "--kmax", "3", "--format", "json"];
    let one = treelie(&[&base[..], &["--jobs", "1"]].concat());
    let eight = treelie(&[&base[..], &["--jobs", "8"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one), stdout(&eight));
}

#[test]
fn cache_round_trip_is_byte_identical_and_survives_corruption() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cache = dir.path().to_str().unwrap();
    let args = ["dims", "--n", "2", "--kmax", "3", "--format", "json", "--cache", cache];
    let cold = treelie(&args);
    let entries: Vec<_> = std::fs::read_dir(dir.path().join("v1"))
        .expect("cache version dir")
        .collect();
    assert!(!entries.is_empty(), "cache stayed empty");
    let warm = treelie(&args);
    assert_eq!(stdout(&cold), stdout(&warm));

    for entry in std::fs::read_dir(dir.path().join("v1")).expect("cache dir") {
        let path = entry.expect("entry").path();
        if path.extension().is_some_and(|e| e == "struct") {
            std::fs::write(&path, "free 99\ntorsion\n").expect("corrupt one entry");
            break;
        }
    }
    let repaired = treelie(&args);
    assert_eq!(stdout(&cold), stdout(&repaired), "digest check failed to reject tampering");
}

#[test]
fn skipped_dims_rows_leave_the_rest_of_the_table_intact() {
    let out = treelie(&["dims", "--n", "2", "--kmax", "6", "--format", "json", "--limit", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    let groups = report["groups"].as_array().expect("groups");
    assert_eq!(groups.len(), 18, "three objects per degree");
    let skipped: Vec<&serde_json::Value> = groups
        .iter()
        .filter(|g| g["structure"].is_null())
        .collect();
    assert!(!skipped.is_empty(), "expected oversized rows at this limit");
    for row in &skipped {
        let note = row["note"].as_str().expect("skip note");
        assert!(note.contains("exceeds limit"), "bad note: {note}");
    }
    let l1 = groups
        .iter()
        .find(|g| g["object"] == "L" && g["k"] == 1)
        .expect("L row at k=1");
    assert_eq!(l1["structure"]["rank"], 2);
}
