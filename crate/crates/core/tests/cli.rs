//! End-to-end runs of the binary: output, exit codes, files, environment.

use std::process::{Command, Output};

use dihedral_isotopy::cli::{ClassifyJson, CountJson, IsotopicJson, VerifyJson};
use dihedral_isotopy::cycle_index::CycleIndexPoly;
use dihedral_isotopy::right_loop::CayleyTable;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dihedral-isotopy"))
        .args(args)
        .env_remove("DIHEDRAL_ISOTOPY_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = bin(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn hypothesis_violations_exit_2_with_message() {
    for args in [
        &["classify", "--n", "8"][..],
        &["count", "--n", "4"],
        &["classify", "--n", "1"],
        &["isotopic", "--n", "6", "--a", "1", "--c", "1"],
    ] {
        let out = bin(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("n must be odd > 1") || err.contains("at least 2"), "{args:?}: {err}");
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(bin(&["classify"]).status.code(), Some(2));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bin(&["classify", "--n", "27"]).status.code(), Some(2));
    assert_eq!(bin(&["classify", "--n", "9", "--classify-bound", "7"]).status.code(), Some(2));
    assert_eq!(bin(&["isotopic", "--n", "5", "--a", "0", "--c", "1"]).status.code(), Some(2));
    assert_eq!(bin(&["cycle-index", "--n", "9", "--compare"]).status.code(), Some(2));
    assert_eq!(bin(&["cycle-index", "--n", "15", "--closed-form", "3"]).status.code(), Some(2));
}

#[test]
fn json_outputs_round_trip_byte_identical() {
    let classify = stdout(&["classify", "--n", "7", "--members", "--format", "json"]);
    let parsed: ClassifyJson = serde_json::from_str(&classify).unwrap();
    assert_eq!(serde_json::to_string(&parsed).unwrap() + "\n", classify);
    assert_eq!(parsed.class_count, 5);

    let count = stdout(&["count", "--n", "49", "--format", "json"]);
    let parsed: CountJson = serde_json::from_str(&count).unwrap();
    assert_eq!(serde_json::to_string(&parsed).unwrap() + "\n", count);

    let poly = stdout(&["cycle-index", "--n", "25", "--format", "json"]);
    assert_eq!(CycleIndexPoly::from_json(poly.trim_end()).unwrap().to_json() + "\n", poly);

    let table = stdout(&["loop-table", "--n", "7", "--a", "1,5", "--format", "json"]);
    assert_eq!(CayleyTable::from_json(table.trim_end()).unwrap().to_json() + "\n", table);

    let iso = stdout(&["isotopic", "--n", "5", "--a", "1", "--c", "2,4", "--oracle", "both", "--format", "json"]);
    let parsed: IsotopicJson = serde_json::from_str(&iso).unwrap();
    assert_eq!(serde_json::to_string(&parsed).unwrap() + "\n", iso);
    assert_eq!(parsed.agree, Some(true));

    let compare = stdout(&["cycle-index", "--n", "49", "--closed-form", "7", "--compare", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&compare).unwrap();
    assert_eq!(value["equal"], serde_json::Value::Bool(true));

    let verify = stdout(&["verify", "--n", "5", "--format", "json"]);
    let parsed: VerifyJson = serde_json::from_str(&verify).unwrap();
    assert!(parsed.passed);
    assert_eq!(serde_json::to_string(&parsed).unwrap() + "\n", verify);
}

#[test]
fn class_ids_reproducible_across_thread_counts() {
    let reference = stdout(&["classify", "--n", "15", "--threads", "1", "--format", "json"]);
    for threads in ["2", "4", "0"] {
        assert_eq!(stdout(&["classify", "--n", "15", "--threads", threads, "--format", "json"]), reference);
    }
    let out = Command::new(env!("CARGO_BIN_EXE_dihedral-isotopy"))
        .args(["classify", "--n", "15", "--format", "json"])
        .env("DIHEDRAL_ISOTOPY_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), reference);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("dihedral-isotopy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("classes.txt");
    let out = bin(&["classify", "--n", "9", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("classes: 11\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn subgroup_k_keeps_class_count() {
    for k in ["1", "2", "8"] {
        assert!(stdout(&["classify", "--n", "9", "--subgroup-k", k]).starts_with("classes: 11\n"));
    }
    let out = stdout(&["verify", "--subgroup-k", "2", "--n", "9"]);
    assert!(out.contains("n=9 k=2: transversal class count = cycle-index count"), "{out}");
}

#[test]
fn verify_composite_modulus() {
    let out = stdout(&["verify", "--n", "15"]);
    assert!(out.contains("sweep count = cycle-index count, n ∈ [15]"), "{out}");
    assert!(out.trim_end().ends_with("0 failed"));
}

#[test]
fn cycle_index_examples() {
    assert_eq!(stdout(&["cycle-index", "--n", "9", "--eval", "2"]), "22\n");
    assert_eq!(stdout(&["cycle-index", "--n", "25", "--eval", "2"]), "67562\n");
    assert_eq!(stdout(&["cycle-index", "--n", "9", "--eval", "1"]), "1\n");
    assert!(stdout(&["cycle-index", "--n", "9", "--closed-form", "3", "--compare"]).ends_with("\nEQUAL\n"));
    assert_eq!(
        stdout(&["cycle-index", "--n", "9", "--closed-form", "3"]),
        stdout(&["cycle-index", "--n", "9"])
    );
}
