use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn gt(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_gt"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .env_remove("GT_SEED")
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn example(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_table() {
    let out = gt(&["count"], b"a b a\n");
    assert!(out.status.success());
    assert_eq!(stdout(&out), "k,phi_k\n# n=3\n1,1\n2,1\n");
}

#[test]
fn count_with_delimiter() {
    let out = gt(&["count", "--delimiter", ","], b"x,y,x,,z\n");
    assert_eq!(stdout(&out), "k,phi_k\n# n=4\n1,2\n2,1\n");
}

#[test]
fn empty_input_warns() {
    let out = gt(&["count"], b"");
    assert!(out.status.success());
    assert_eq!(stdout(&out), "k,phi_k\n# n=0\n");
    assert!(!out.stderr.is_empty());
}

#[test]
fn estimate_from_table_and_tokens() {
    let table = gt(&["estimate", "--per-symbol"], b"k,phi_k\n# n=4\n1,2\n2,1\n");
    assert_eq!(
        stdout(&table),
        "k,zeta_k\n0,0.5\n1,0.5\n\nk,per_symbol_prob\n1,0.25\n2,0\n"
    );
    let tokens = gt(&["estimate", "--per-symbol"], b"a b c c\n");
    assert_eq!(stdout(&tokens), stdout(&table));
}

#[test]
fn error_exit_codes() {
    assert_eq!(
        gt(&["count", "/nonexistent/input"], b"").status.code(),
        Some(2)
    );
    assert_eq!(gt(&["count"], b"a\xffb").status.code(), Some(3));
    assert_eq!(
        gt(&["estimate"], b"k,phi_k\n# n=5\n1,2\n2,1\n")
            .status
            .code(),
        Some(4)
    );
    assert_eq!(gt(&["estimate"], b"k,phi_k\n1,x\n").status.code(), Some(4));
    assert_eq!(gt(&["frobnicate"], b"").status.code(), Some(2));
    let utf8 = gt(&["count"], b"ok\nab\xff");
    assert!(String::from_utf8_lossy(&utf8.stderr).contains("offset 5"));
}

#[test]
fn limit_point_mass() {
    let out = gt(&["limit", &example("q_point_one.json"), "--kmax", "2"], b"");
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "k,lambda_k\n0,0.367879441171\n1,0.367879441171\n2,0.183939720586\ntail,0.0803013970714\n"
    );
}

#[test]
fn limit_schema_and_quadrature_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("q.json");
    std::fs::write(&bad, r#"{"atoms": [[1.0, 1.0]], "extra": 1}"#).unwrap();
    assert_eq!(
        gt(&["limit", bad.to_str().unwrap()], b"").status.code(),
        Some(5)
    );
    let q = example("q_triangular.json");
    assert_eq!(
        gt(&["limit", &q, "--max-depth", "0"], b"").status.code(),
        Some(6)
    );
}

#[test]
fn simulate_is_reproducible_and_seed_overridable() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("small.json");
    std::fs::write(
        &config,
        r#"{"family": {"kind": "uniform"}, "n_grid": [50, 500], "trials": 5,
            "kmax": 10, "seed": 3, "epsilon_grid": [0.1]}"#,
    )
    .unwrap();
    let run = |out: &str, seed: Option<&str>| {
        let out_dir = dir.path().join(out);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_gt"));
        cmd.args([
            "simulate",
            config.to_str().unwrap(),
            "--out-dir",
            out_dir.to_str().unwrap(),
        ])
        .env_remove("GT_SEED");
        if let Some(s) = seed {
            cmd.env("GT_SEED", s);
        }
        let status = cmd.output().unwrap();
        assert!(
            status.status.success(),
            "{}",
            String::from_utf8_lossy(&status.stderr)
        );
        std::fs::read_to_string(out_dir.join("report.json")).unwrap()
    };
    let a = run("a", None);
    let b = run("b", None);
    let c = run("c", Some("4"));
    assert_eq!(a, b);
    assert_ne!(a, c);
    let report: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(report["summary"].as_array().unwrap().len(), 2);
    assert_eq!(report["trials"].as_array().unwrap().len(), 10);
}

#[test]
fn simulate_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    std::fs::write(
        &config,
        r#"{"family": {"kind": "uniform"}, "n_grid": [500, 50], "trials": 5,
            "kmax": 10, "seed": 3, "epsilon_grid": []}"#,
    )
    .unwrap();
    let out = gt(&["simulate", config.to_str().unwrap()], b"");
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_grid"));
}
