mod common;

use std::process::Command;

use common::spec_path;

fn gr1report() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gr1report"))
}

#[test]
fn help_and_version_succeed() {
    for flag in ["--help", "--version"] {
        let out = gr1report().arg(flag).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{flag}");
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(gr1report().output().unwrap().status.code(), Some(1));
    assert_eq!(gr1report().args(["x.spec", "--bogus"]).output().unwrap().status.code(), Some(1));
    assert_eq!(gr1report().args(["x.spec", "--semantics", "loose"]).output().unwrap().status.code(), Some(1));
}

#[test]
fn bad_inputs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = gr1report().arg(dir.path().join("absent.spec")).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("absent.spec"));

    let bad = dir.path().join("bad.spec");
    std::fs::write(&bad, "[INPUT]\na\n[SYS_LIVENESS]\nX(X(a))\n").unwrap();
    let out = gr1report().arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));

    let out = gr1report().arg(spec_path("mutex")).args(["--analyses", "positions,nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn writes_both_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (json, html) = (dir.path().join("r.json"), dir.path().join("r.html"));
    let out = gr1report()
        .arg(spec_path("mutex_fixed"))
        .args(["--analyses", "positions,stuckat", "--max-cubes", "3"])
        .arg("--json")
        .arg(&json)
        .arg("--html")
        .arg(&html)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "mutex_fixed.spec: realizable");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["config"]["max_cubes"], 3);
    assert_eq!(v["analyses"].as_array().unwrap().len(), 2);
    assert!(std::fs::read_to_string(&html).unwrap().contains("Stuck-at faults"));
}

#[test]
fn exhaustion_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = gr1report()
        .arg(spec_path("delivery"))
        .args(["--node-budget", "50"])
        .arg("--json")
        .arg(dir.path().join("r.json"))
        .arg("--html")
        .arg(dir.path().join("r.html"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(dir.path().join("r.json").exists());
}

#[test]
fn seed_variable_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str, name: &str| {
        let path = dir.path().join(name);
        let out = gr1report()
            .env("GR1REPORT_SEED", seed)
            .arg(spec_path("doors"))
            .arg("--json")
            .arg(&path)
            .arg("--html")
            .arg(dir.path().join("r.html"))
            .output()
            .unwrap();
        assert!(out.status.success());
        std::fs::read(path).unwrap()
    };
    assert_eq!(run("1", "a.json"), run("2", "b.json"));
}
