use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use serde_json::Value;

fn invar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invar"))
        .args(args)
        .env_remove("INVAR_DB")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

/// Small database (non-duals through 3, duals through 2) shared by the tests.
fn db() -> &'static Path {
    static DB: OnceLock<(tempfile::TempDir, PathBuf)> = OnceLock::new();
    let (_, path) = DB.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("small.db");
        let o = invar(&[
            "build-db",
            "--max-i",
            "3",
            "--max-d",
            "2",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        (dir, path)
    });
    path
}

#[test]
fn counts_match_the_known_transversals() {
    let o = invar(&["counts", "--kind", "I", "--through", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1 4 13");
    let o = invar(&["--json", "counts", "--kind", "D", "--through", "2"]);
    assert_eq!(json(&o), serde_json::json!({"result": [1, 5], "warnings": []}));
}

#[test]
fn enumerate_reports_counts_and_lists() {
    let o = invar(&["--json", "enumerate", "--kind", "I", "--degree", "2"]);
    let v = json(&o);
    assert_eq!(v["result"]["count"], 4);
    assert_eq!(v["result"]["connected"], 3);
    let o = invar(&["enumerate", "--kind", "I", "--degree", "2", "--list"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l.starts_with("I[2,1]")));
}

#[test]
fn simplify_reads_the_database_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_invar"))
        .args(["simplify", "--expr", "1/3*R[a,b,-a,-b]"])
        .env("INVAR_DB", db())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "1/3*R");
}

#[test]
fn simplify_levels_and_forms() {
    let path = db().to_str().unwrap();
    let dual = "epsilon[a,b,c,d]*R[-a,-b,-c,-d]";
    let o = invar(&["simplify", "--db", path, "--level", "1", "--expr", dual]);
    assert_ne!(stdout(&o), "0");
    let o = invar(&["simplify", "--db", path, "--level", "2", "--expr", dual]);
    assert_eq!(stdout(&o), "0");
    let o = invar(&[
        "--json",
        "simplify",
        "--db",
        path,
        "--out",
        "inv",
        "--expr",
        "R[a,b,-a,-b]*R[c,d,-c,-d]",
    ]);
    let v = json(&o);
    assert_eq!(v["result"], "I[1,1]*I[1,1]");
    assert_eq!(v["warnings"], serde_json::json!([]));
}

#[test]
fn out_of_range_input_warns() {
    let path = db().to_str().unwrap();
    let quartic = "R[a,b]*R[-a,-b]*R[c,d]*R[-c,-d]";
    let o = invar(&["--json", "simplify", "--db", path, "--expr", quartic]);
    assert!(o.status.success());
    let v = json(&o);
    assert!(!v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn nk_and_basis_and_certify() {
    let path = db().to_str().unwrap();
    let v = json(&invar(&["--json", "nk", "--db", path, "--name", "I1"]));
    assert_eq!(v["result"]["certified"], true);
    let o = invar(&["basis", "--db", path]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 7);
    let o = invar(&["certify", "--db", path, "--trials", "1"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = invar(&["nk", "--db", path, "--name", "K4"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    assert_eq!(invar(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        invar(&["counts", "--kind", "X", "--through", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(invar(&["simplify", "--expr", "R[a,b,-a,-b]"]).status.code(), Some(2));
    assert_eq!(
        invar(&["--threads", "0", "counts", "--kind", "I", "--through", "1"])
            .status
            .code(),
        Some(2)
    );
    let path = db().to_str().unwrap();
    assert_eq!(
        invar(&["simplify", "--db", path, "--expr", "R[a,b"]).status.code(),
        Some(1)
    );
    assert_eq!(
        invar(&["simplify", "--db", path, "--expr", "R[a,b,c,-c]"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        invar(&["simplify", "--db", path, "--level", "7", "--expr", "R[a,b,-a,-b]"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        invar(&["--threads", "1", "counts", "--kind", "I", "--through", "1"])
            .status
            .code(),
        Some(0)
    );
}
