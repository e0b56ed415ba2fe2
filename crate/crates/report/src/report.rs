use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use gr1_core::analyses::{
    assumption_falsification, classify_assumptions, error_resilience, position_statistics, precommit_analysis,
    stuck_at_analysis, ClassCount, NamedCube, Resilience, StuckAtDirection, Verdict,
};
use gr1_core::frontend::{validate_gr1_shape, BooleanSpec, PartKind, PartOrigin, VarKind};
use gr1_core::game::{GameContext, GameOptions, Realizability, Semantics};
use gr1_core::traces::{abstract_strategy, nominal_trace, AnnotatedTrace, NominalTrace, Player};
use gr1_core::{compile_to_boolean, parse_spec, Exhaustion, Gr1Error, Limits};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::{AnalysisId, ReportConfig, SemanticsChoice};
use crate::error::ReportError;
use crate::html;

pub const TOOL_NAME: &str = "gr1report";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Result of analyzing one specification.
#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    /// The baseline realizability check ran out of resources.
    pub exhausted: bool,
    /// Graphviz text of the baseline winning region, if requested.
    pub bdd_dot: Option<String>,
}

impl Report {
    /// Pretty-printed JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("report values serialize");
        s.push('\n');
        s
    }

    pub fn to_html(&self) -> String {
        html::render(&self.json)
    }

    pub fn exit_code(&self) -> i32 {
        if self.exhausted {
            2
        } else {
            0
        }
    }

    /// The entry of one analysis, if it was requested.
    pub fn section(&self, id: AnalysisId) -> Option<&Value> {
        self.json["analyses"].as_array()?.iter().find(|a| a["id"] == id.as_str())
    }
}

fn limits(cfg: &ReportConfig) -> Limits {
    let interrupt = cfg.timeout.map(|t| {
        let deadline = Instant::now() + t;
        Arc::new(move || Instant::now() >= deadline) as Arc<dyn Fn() -> bool + Send + Sync>
    });
    Limits { node_budget: cfg.node_budget, interrupt }
}

fn verdict(r: Realizability) -> &'static str {
    match r {
        Realizability::Realizable => "realizable",
        Realizability::Unrealizable => "unrealizable",
    }
}

fn kind_name(k: VarKind) -> &'static str {
    match k {
        VarKind::Input => "input",
        VarKind::Output => "output",
    }
}

fn skip_reason(e: &Gr1Error) -> String {
    match e {
        Gr1Error::ResourceLimit(Exhaustion::Interrupted) => "timeout".into(),
        Gr1Error::ResourceLimit(Exhaustion::NodeBudget) => "node budget exceeded".into(),
        Gr1Error::Precondition(m) => format!("precondition not met: {m}"),
        other => other.to_string(),
    }
}

/// Parses, validates and compiles a specification text.
pub fn compile_source(source: &str) -> Result<BooleanSpec, ReportError> {
    let doc = parse_spec(source)?;
    let violations = validate_gr1_shape(&doc);
    if !violations.is_empty() {
        let msgs = violations
            .iter()
            .map(|v| {
                let line = doc.parts(v.kind)[v.index].line;
                format!("line {line}: [{}] part {}: {}", v.kind.header(), v.index + 1, v.rule)
            })
            .collect();
        return Err(ReportError::Shape(msgs));
    }
    Ok(compile_to_boolean(&doc)?)
}

fn semantics_of(cfg: &ReportConfig) -> Semantics {
    match cfg.semantics {
        SemanticsChoice::Nonstrict => Semantics::NonStrict,
        _ => Semantics::Strict,
    }
}

fn realizability(ctx: &mut GameContext, spec: &BooleanSpec, semantics: Semantics, robotics: bool) -> Result<Realizability, Gr1Error> {
    let opts = GameOptions { robotics, ..GameOptions::new(semantics) };
    let g = ctx.build_game(spec, &opts)?;
    let r = ctx.realizable(&g);
    ctx.release_game(&g);
    r
}

/// Baseline verdict plus the optional dump of the winning region.
fn baseline(spec: &BooleanSpec, cfg: &ReportConfig) -> Result<(Realizability, Option<String>), Gr1Error> {
    let mut ctx = GameContext::with_limits(spec, limits(cfg));
    let opts = GameOptions { robotics: cfg.robotics, ..GameOptions::new(semantics_of(cfg)) };
    let g = ctx.build_game(spec, &opts)?;
    let region = ctx.solve(&g)?;
    let r = ctx.realizability(&g, &region)?;
    let dot = cfg.dump_bdd.as_ref().map(|_| ctx.mgr.to_dot(region.win, "winning region"));
    Ok((r, dot))
}

fn cube_json(c: &NamedCube) -> Value {
    Value::Object(c.literals.iter().map(|(n, b)| (n.clone(), Value::Bool(*b))).collect())
}

fn cubes_json(cs: &[NamedCube]) -> Value {
    Value::Array(cs.iter().map(cube_json).collect())
}

fn class_json(c: &ClassCount) -> Value {
    json!({ "total": c.total.to_string(), "winning": c.winning.to_string() })
}

/// Signal values of one position, split by side.
fn valuation_json(spec: &BooleanSpec, position: &[bool]) -> (Value, Value) {
    let (mut ins, mut outs) = (Map::new(), Map::new());
    for (name, kind, bits) in spec.signals() {
        let v = match spec.ints.iter().find(|e| e.name == name) {
            Some(enc) => enc.decode(|p| position[p.index()]).map_or(Value::Null, Value::from),
            None => Value::Bool(position[bits[0].index()]),
        };
        match kind {
            VarKind::Input => ins.insert(name, v),
            VarKind::Output => outs.insert(name, v),
        };
    }
    (Value::Object(ins), Value::Object(outs))
}

fn trace_json(spec: &BooleanSpec, t: &AnnotatedTrace) -> Value {
    let steps: Vec<Value> = t
        .steps
        .iter()
        .map(|s| {
            let (i, o) = valuation_json(spec, &s.position);
            json!({ "in": i, "out": o, "envGoal": s.env_goal, "sysGoal": s.sys_goal })
        })
        .collect();
    json!({ "status": "trace", "steps": steps, "lassoStart": t.lasso_start })
}

fn run_analysis(id: AnalysisId, spec: &BooleanSpec, cfg: &ReportConfig) -> Result<Value, Gr1Error> {
    let mut ctx = GameContext::with_limits(spec, limits(cfg));
    let ctx = &mut ctx;
    let v = match id {
        AnalysisId::Semantics => {
            let mut out = Map::new();
            out.insert("robotics".into(), Value::Bool(cfg.robotics));
            let strict = matches!(cfg.semantics, SemanticsChoice::Strict | SemanticsChoice::Both)
                .then(|| realizability(ctx, spec, Semantics::Strict, cfg.robotics))
                .transpose()?;
            let nonstrict = matches!(cfg.semantics, SemanticsChoice::Nonstrict | SemanticsChoice::Both)
                .then(|| realizability(ctx, spec, Semantics::NonStrict, cfg.robotics))
                .transpose()?;
            if let Some(r) = strict {
                out.insert("strict".into(), verdict(r).into());
            }
            if let Some(r) = nonstrict {
                out.insert("nonstrict".into(), verdict(r).into());
            }
            if let (Some(a), Some(b)) = (strict, nonstrict) {
                out.insert("differs".into(), Value::Bool(a != b));
            }
            Value::Object(out)
        }
        AnalysisId::Positions => {
            let st = position_statistics(ctx, spec, cfg.max_cubes)?;
            json!({
                "classes": {
                    "all": class_json(&st.all),
                    "init_env": class_json(&st.init_env),
                    "init_sys": class_json(&st.init_sys),
                    "init_both": class_json(&st.init_both),
                },
                "winning_cubes": cubes_json(&st.winning_cubes),
                "losing_cubes": cubes_json(&st.losing_cubes),
            })
        }
        AnalysisId::Falsify => {
            let f = assumption_falsification(ctx, spec, cfg.max_cubes)?;
            json!({ "count": f.count.to_string(), "cubes": cubes_json(&f.cubes) })
        }
        AnalysisId::Assumptions => {
            let vs = classify_assumptions(ctx, spec)?;
            let rows: Vec<Value> = vs
                .iter()
                .map(|v| {
                    json!({
                        "section": v.kind.header(),
                        "index": v.index,
                        "text": v.text,
                        "test_a": v.test_a,
                        "test_b": v.test_b,
                        "test_c": v.test_c,
                        "test_d": v.test_d,
                        "c_goals": v.c_goals,
                        "d_goals": v.d_goals,
                        "verdict": match v.verdict { Verdict::Useful => "useful", Verdict::Superfluous => "superfluous" },
                    })
                })
                .collect();
            json!({
                "assumptions": rows,
                "note": "test d only inspects the canonical extracted strategy",
            })
        }
        AnalysisId::Resilience => {
            let r = error_resilience(ctx, spec, cfg.max_k)?;
            let value = match r {
                Resilience::Level(k) => Value::from(k),
                _ => Value::Null,
            };
            json!({
                "level": r.to_string(),
                "value": value,
                "max_k": cfg.max_k,
                "note": "a glitch violates one safety assumption for one step; liveness assumptions never glitch",
            })
        }
        AnalysisId::Precommit => {
            let p = precommit_analysis(ctx, spec)?;
            let per: Vec<Value> =
                p.per_output.iter().map(|(n, b)| json!({ "output": n, "precommittable": b })).collect();
            json!({
                "per_output": per,
                "maximal_set": p.maximal_set,
                "note": "the joint set is built greedily in declaration order",
            })
        }
        AnalysisId::Stuckat => {
            let t = stuck_at_analysis(ctx, spec)?;
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| json!({ "signal": r.prop, "value": r.value, "realizability": verdict(r.realizability) }))
                .collect();
            let direction = match t.direction {
                StuckAtDirection::Outputs => "outputs",
                StuckAtDirection::Inputs => "inputs",
            };
            json!({ "direction": direction, "rows": rows })
        }
        AnalysisId::Trace => match nominal_trace(ctx, spec, cfg.max_trace_steps)? {
            NominalTrace::Trace(t) => trace_json(spec, &t),
            NominalTrace::NoInitialPosition => json!({
                "status": "no_initial_position",
                "finding": "no winning position satisfies both initialization parts",
            }),
            NominalTrace::EnvironmentCannotWin => json!({
                "status": "environment_cannot_win",
                "finding": "the system can keep the environment from satisfying its liveness assumptions",
            }),
        },
        AnalysisId::Abstract => match abstract_strategy(ctx, spec, cfg.abstract_horizon)? {
            None => json!({
                "winner": null,
                "finding": "neither player can force a safety violation of the other",
            }),
            Some(a) => {
                let rows: Vec<Value> = a
                    .rows
                    .iter()
                    .map(|r| {
                        let cells: Vec<String> = r.cells.iter().map(|c| c.to_string()).collect();
                        json!({ "signal": r.name, "kind": kind_name(r.kind), "cells": cells })
                    })
                    .collect();
                let winner = match a.winner {
                    Player::System => "system",
                    Player::Environment => "environment",
                };
                json!({
                    "winner": winner,
                    "horizon": a.horizon,
                    "rows": rows,
                    "note": "signals are fixed round by round in declaration order to the first value that keeps the win",
                })
            }
        },
    };
    ctx.mgr.check()?;
    Ok(v)
}

/// User-written parts per section.
fn part_counts(spec: &BooleanSpec) -> Value {
    let counts = PartKind::ALL
        .iter()
        .map(|&k| {
            let n = spec.parts(k).iter().filter(|p| p.origin == PartOrigin::User).count();
            (k.header().to_string(), Value::from(n))
        })
        .collect();
    Value::Object(counts)
}

fn config_json(cfg: &ReportConfig) -> Value {
    json!({
        "analyses": cfg.analyses.iter().map(|a| a.as_str()).collect::<Vec<_>>(),
        "semantics": cfg.semantics.as_str(),
        "robotics": cfg.robotics,
        "max_k": cfg.max_k,
        "max_cubes": cfg.max_cubes,
        "max_trace_steps": cfg.max_trace_steps,
        "abstract_horizon": cfg.abstract_horizon,
        "node_budget": cfg.node_budget,
        "timeout_seconds": cfg.timeout.map(|t| t.as_secs_f64()),
    })
}

/// Runs the requested analyses on a specification text.
pub fn build_report(source: &str, file_name: &str, cfg: &ReportConfig) -> Result<Report, ReportError> {
    cfg.validate()?;
    let spec = compile_source(source)?;
    let digest = hex::encode(Sha256::digest(source.as_bytes()));
    let names = |k: VarKind| -> Vec<String> { spec.signals().into_iter().filter(|s| s.1 == k).map(|s| s.0).collect() };

    let semantics = semantics_of(cfg);
    let (base, bdd_dot) = match baseline(&spec, cfg) {
        Ok((r, dot)) => (json!({ "realizability": verdict(r) }), dot),
        Err(e) => (json!({ "realizability": null, "error": skip_reason(&e) }), None),
    };
    let exhausted = base["realizability"].is_null();
    let mut base = base;
    base["semantics"] = Value::from(if semantics == Semantics::Strict { "strict" } else { "nonstrict" });
    base["robotics"] = Value::Bool(cfg.robotics);

    let mut sections = Vec::new();
    for id in AnalysisId::ALL.into_iter().filter(|&a| cfg.wants(a)) {
        let mut entry = Map::new();
        entry.insert("id".into(), id.as_str().into());
        let started = Instant::now();
        if exhausted {
            entry.insert("status".into(), "skipped".into());
            entry.insert("reason".into(), "baseline realizability check ran out of resources".into());
        } else {
            match run_analysis(id, &spec, cfg) {
                Ok(v) => {
                    entry.insert("status".into(), "ok".into());
                    entry.insert("result".into(), v);
                }
                Err(e) => {
                    entry.insert("status".into(), "skipped".into());
                    entry.insert("reason".into(), skip_reason(&e).into());
                }
            }
        }
        if cfg.timings {
            entry.insert("elapsed_ms".into(), Value::from(started.elapsed().as_millis() as u64));
        }
        sections.push(Value::Object(entry));
    }

    let json = json!({
        "tool": { "name": TOOL_NAME, "version": TOOL_VERSION },
        "spec": {
            "file": file_name,
            "sha256": digest,
            "inputs": names(VarKind::Input),
            "outputs": names(VarKind::Output),
            "parts": part_counts(&spec),
        },
        "config": config_json(cfg),
        "baseline": base,
        "analyses": sections,
    });
    Ok(Report { json, exhausted, bdd_dot })
}

fn beside(spec_path: &Path, suffix: &str) -> PathBuf {
    let mut name = spec_path.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    spec_path.with_file_name(name)
}

/// Reads a specification file, analyzes it and writes the JSON and HTML
/// reports (by default `SPEC.report.json` and `SPEC.report.html` beside it).
pub fn run_report(spec_path: &Path, cfg: &ReportConfig) -> Result<Report, ReportError> {
    let source = std::fs::read_to_string(spec_path).map_err(|e| ReportError::io(spec_path, e))?;
    let file_name = spec_path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let report = build_report(&source, &file_name, cfg)?;
    let json_path = cfg.json_path.clone().unwrap_or_else(|| beside(spec_path, ".report.json"));
    let html_path = cfg.html_path.clone().unwrap_or_else(|| beside(spec_path, ".report.html"));
    std::fs::write(&json_path, report.to_json()).map_err(|e| ReportError::io(&json_path, e))?;
    std::fs::write(&html_path, report.to_html()).map_err(|e| ReportError::io(&html_path, e))?;
    if let (Some(path), Some(dot)) = (&cfg.dump_bdd, &report.bdd_dot) {
        std::fs::write(path, dot).map_err(|e| ReportError::io(path, e))?;
    }
    Ok(report)
}
