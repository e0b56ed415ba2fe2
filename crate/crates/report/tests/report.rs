mod common;

use std::time::Duration;

use common::{assert_valid, render, schema_validator, spec_path, spec_source, SPECS};
use gr1_core::oracle::{random_spec, RandomSpecConfig};
use gr1report::{build_report, compile_source, run_report, AnalysisId, ReportConfig, ReportError, SemanticsChoice};
use serde_json::Value;

fn report(name: &str, cfg: &ReportConfig) -> gr1report::Report {
    build_report(&spec_source(name), &format!("{name}.spec"), cfg).unwrap()
}

fn result(r: &gr1report::Report, id: AnalysisId) -> &Value {
    let s = r.section(id).unwrap();
    assert_eq!(s["status"], "ok", "{id}: {s}");
    &s["result"]
}

#[test]
fn mutex_report_is_realizable() {
    let r = report("mutex", &ReportConfig::default());
    assert_eq!(r.json["baseline"]["realizability"], "realizable");
    assert_eq!(r.exit_code(), 0);
    let pos = result(&r, AnalysisId::Positions);
    assert_eq!(pos["classes"]["all"]["total"], "64");
    assert_eq!(pos["classes"]["all"]["winning"], "64");
    assert_eq!(r.json["spec"]["inputs"], serde_json::json!(["r1", "r2"]));
    assert_eq!(r.json["spec"]["parts"]["SYS_TRANS"], 3);
    assert_eq!(r.json["analyses"].as_array().unwrap().len(), AnalysisId::ALL.len());
}

#[test]
fn every_bundled_report_matches_the_schema() {
    let v = schema_validator();
    for name in SPECS {
        let r = report(name, &ReportConfig::default());
        assert_valid(&v, &r.json);
        for a in r.json["analyses"].as_array().unwrap() {
            let reason = a["reason"].as_str().unwrap_or_default();
            assert!(a["status"] == "ok" || reason.starts_with("precondition not met"), "{name}: {a}");
        }
    }
}

#[test]
fn random_reports_match_the_schema() {
    let v = schema_validator();
    let cfg = RandomSpecConfig { max_bits: 7, ..Default::default() };
    for seed in 0..40 {
        let src = render(&random_spec(seed, &cfg));
        let r = build_report(&src, "random.spec", &ReportConfig::default()).unwrap();
        assert_valid(&v, &r.json);
    }
}

#[test]
fn only_requested_sections_appear() {
    let cfg = ReportConfig { analyses: ReportConfig::parse_analyses("stuckat,positions").unwrap(), ..Default::default() };
    let r = report("mutex_fixed", &cfg);
    let ids: Vec<&str> = r.json["analyses"].as_array().unwrap().iter().map(|a| a["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["positions", "stuckat"]);
    assert_eq!(r.json["config"]["analyses"], serde_json::json!(["positions", "stuckat"]));
}

#[test]
fn skipping_sections_leaves_the_others_unchanged() {
    let full = report("patrol", &ReportConfig::default());
    for id in AnalysisId::ALL {
        let one = report("patrol", &ReportConfig { analyses: vec![id], ..Default::default() });
        assert_eq!(one.section(id), full.section(id), "{id}");
    }
}

#[test]
fn json_is_reproducible() {
    let a = report("two_robots", &ReportConfig::default()).to_json();
    let b = report("two_robots", &ReportConfig::default()).to_json();
    assert_eq!(a, b);
    assert!(a.ends_with("}\n"));
    assert!(!a.contains("elapsed_ms"));
}

#[test]
fn timings_are_opt_in() {
    let cfg = ReportConfig { timings: true, analyses: vec![AnalysisId::Positions], ..Default::default() };
    let r = report("mutex", &cfg);
    assert!(r.section(AnalysisId::Positions).unwrap()["elapsed_ms"].is_u64());
}

#[test]
fn html_shows_the_report_values() {
    let r = report("mutex_fixed", &ReportConfig::default());
    let html = r.to_html();
    assert!(html.starts_with("<!DOCTYPE html>"));
    assert!(html.contains(r.json["spec"]["sha256"].as_str().unwrap()));
    assert!(html.contains("realizable"));
    assert!(html.contains("<code>promise1 &amp; promise2</code>"));
    assert!(html.contains(">48<"));
    for id in AnalysisId::ALL {
        assert!(html.contains(&format!("<section id=\"{id}\">")), "{id}");
    }
    assert!(!html.contains("<script"));
}

#[test]
fn html_renders_the_abstract_table() {
    let r = report("counter", &ReportConfig::default());
    let html = r.to_html();
    assert!(html.contains("\u{2605}"));
    assert!(html.contains("Winner: environment"));
}

#[test]
fn unrealizable_spec_skips_dependent_analyses() {
    let r = report("psi", &ReportConfig::default());
    assert_eq!(r.json["baseline"]["realizability"], "unrealizable");
    assert_eq!(r.exit_code(), 0);
    for id in [AnalysisId::Assumptions, AnalysisId::Resilience, AnalysisId::Precommit, AnalysisId::Trace] {
        let s = r.section(id).unwrap();
        assert_eq!(s["status"], "skipped", "{id}");
        assert!(s["reason"].as_str().unwrap().starts_with("precondition not met: "), "{id}");
    }
    let sem = result(&r, AnalysisId::Semantics);
    assert_eq!(sem["differs"], true);
}

#[test]
fn semantics_choice_limits_the_verdicts() {
    let cfg = ReportConfig { semantics: SemanticsChoice::Nonstrict, ..Default::default() };
    let r = report("psi", &cfg);
    assert_eq!(r.json["baseline"]["realizability"], "realizable");
    assert_eq!(r.json["baseline"]["semantics"], "nonstrict");
    let sem = result(&r, AnalysisId::Semantics);
    assert!(sem["strict"].is_null());
    assert_eq!(sem["nonstrict"], "realizable");
    assert!(sem["differs"].is_null());
}

#[test]
fn exhausted_budget_skips_everything() {
    let cfg = ReportConfig { node_budget: 50, ..Default::default() };
    let r = report("delivery", &cfg);
    assert_eq!(r.exit_code(), 2);
    assert_eq!(r.json["baseline"]["error"], "node budget exceeded");
    assert!(r.json["analyses"].as_array().unwrap().iter().all(|a| a["status"] == "skipped"));
    assert_valid(&schema_validator(), &r.json);
}

#[test]
fn expired_deadline_is_reported_as_timeout() {
    let cfg = ReportConfig { timeout: Some(Duration::from_nanos(1)), ..Default::default() };
    let r = report("delivery", &cfg);
    assert_eq!(r.json["baseline"]["error"], "timeout");
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn invalid_configurations_are_rejected() {
    assert!(matches!(ReportConfig::parse_analyses("positions,nope"), Err(ReportError::Config(_))));
    let cfg = ReportConfig { max_k: 0, ..Default::default() };
    assert!(matches!(build_report(&spec_source("mutex"), "m", &cfg), Err(ReportError::Config(_))));
    let cfg = ReportConfig { timeout: Some(Duration::ZERO), ..Default::default() };
    assert!(matches!(build_report(&spec_source("mutex"), "m", &cfg), Err(ReportError::Config(_))));
}

#[test]
fn shape_violations_name_their_lines() {
    let err = compile_source("[INPUT]\na\n[OUTPUT]\nb\n[SYS_LIVENESS]\nX(X(b))\n").unwrap_err();
    match err {
        ReportError::Shape(msgs) => {
            assert_eq!(msgs.len(), 1);
            assert!(msgs[0].starts_with("line 6:"), "{}", msgs[0]);
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(compile_source("[INPUT]\na &\n"), Err(ReportError::Parse(_))));
}

#[test]
fn run_report_writes_beside_the_spec() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("mutex.spec");
    std::fs::copy(spec_path("mutex"), &spec).unwrap();
    let dot = dir.path().join("win.dot");
    let cfg = ReportConfig { dump_bdd: Some(dot.clone()), ..Default::default() };
    let r = run_report(&spec, &cfg).unwrap();
    let json = std::fs::read_to_string(dir.path().join("mutex.spec.report.json")).unwrap();
    assert_eq!(json, r.to_json());
    assert!(std::fs::read_to_string(dir.path().join("mutex.spec.report.html")).unwrap().contains("mutex.spec"));
    assert!(std::fs::read_to_string(dot).unwrap().starts_with("digraph"));
}

#[test]
fn missing_spec_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = run_report(&dir.path().join("absent.spec"), &ReportConfig::default()).unwrap_err();
    assert!(matches!(err, ReportError::Io { .. }));
}
