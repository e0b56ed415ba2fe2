//! Static HTML rendering of a report's JSON value.

use std::fmt::Write;

use serde_json::Value;

const STYLE: &str = "body{font-family:sans-serif;margin:2em;max-width:72em;color:#222}\
h1{font-size:1.5em}h2{font-size:1.2em;border-bottom:1px solid #ccc;margin-top:2em}\
table{border-collapse:collapse;margin:.5em 0}td,th{border:1px solid #bbb;padding:.2em .6em;text-align:left}\
th{background:#f0f0f0}td.c{text-align:center;font-family:monospace}code{font-family:monospace}\
.skip{color:#a40}.note{color:#666;font-size:.9em}.lasso{background:#eef6ff}";

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

/// Scalars as plain text, anything else as compact JSON.
fn text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        Value::Array(items) => items.iter().map(text).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

fn cube(v: &Value) -> String {
    let Some(lits) = v.as_object() else { return text(v) };
    if lits.is_empty() {
        return "TRUE".into();
    }
    lits.iter()
        .map(|(n, b)| if b.as_bool() == Some(true) { n.clone() } else { format!("!{n}") })
        .collect::<Vec<_>>()
        .join(" & ")
}

fn cube_list(out: &mut String, title: &str, v: &Value) {
    let items = v.as_array().map(Vec::as_slice).unwrap_or_default();
    let _ = write!(out, "<p>{} ({} shown)</p>", esc(title), items.len());
    if !items.is_empty() {
        out.push_str("<ul>");
        for c in items {
            let _ = write!(out, "<li><code>{}</code></li>", esc(&cube(c)));
        }
        out.push_str("</ul>");
    }
}

fn kv_table(out: &mut String, rows: &[(&str, String)]) {
    out.push_str("<table>");
    for (k, v) in rows {
        let _ = write!(out, "<tr><th>{}</th><td>{}</td></tr>", esc(k), esc(v));
    }
    out.push_str("</table>");
}

/// Table with one column per key, in the given order.
fn record_table(out: &mut String, rows: &Value, cols: &[&str]) {
    out.push_str("<table><tr>");
    for c in cols {
        let _ = write!(out, "<th>{}</th>", esc(c));
    }
    out.push_str("</tr>");
    for r in rows.as_array().map(Vec::as_slice).unwrap_or_default() {
        out.push_str("<tr>");
        for c in cols {
            let _ = write!(out, "<td>{}</td>", esc(&text(&r[*c])));
        }
        out.push_str("</tr>");
    }
    out.push_str("</table>");
}

fn note(out: &mut String, r: &Value) {
    if let Some(n) = r["note"].as_str() {
        let _ = write!(out, "<p class=\"note\">{}</p>", esc(n));
    }
    if let Some(n) = r["finding"].as_str() {
        let _ = write!(out, "<p><strong>Finding:</strong> {}</p>", esc(n));
    }
}

fn positions(out: &mut String, r: &Value) {
    out.push_str("<table><tr><th>positions</th><th>total</th><th>winning</th></tr>");
    for (key, label) in [("all", "all"), ("init_env", "init assumptions hold"), ("init_sys", "init guarantees hold"), ("init_both", "both hold")] {
        let c = &r["classes"][key];
        let _ = write!(out, "<tr><td>{}</td><td>{}</td><td>{}</td></tr>", esc(label), esc(&text(&c["total"])), esc(&text(&c["winning"])));
    }
    out.push_str("</table>");
    cube_list(out, "Largest winning cubes", &r["winning_cubes"]);
    cube_list(out, "Largest losing cubes", &r["losing_cubes"]);
}

fn trace(out: &mut String, r: &Value) {
    note(out, r);
    let Some(steps) = r["steps"].as_array() else { return };
    let Some(first) = steps.first() else { return };
    let names = |side: &str| first[side].as_object().map(|m| m.keys().cloned().collect::<Vec<_>>()).unwrap_or_default();
    let (ins, outs) = (names("in"), names("out"));
    let lasso = r["lassoStart"].as_u64().map(|k| k as usize);
    out.push_str("<table><tr><th>step</th>");
    for n in ins.iter().chain(&outs) {
        let _ = write!(out, "<th>{}</th>", esc(n));
    }
    out.push_str("<th>env goal</th><th>sys goal</th></tr>");
    for (i, s) in steps.iter().enumerate() {
        let cls = if lasso.is_some_and(|k| i >= k) { " class=\"lasso\"" } else { "" };
        let _ = write!(out, "<tr{cls}><td>{i}</td>");
        for n in &ins {
            let _ = write!(out, "<td class=\"c\">{}</td>", esc(&text(&s["in"][n])));
        }
        for n in &outs {
            let _ = write!(out, "<td class=\"c\">{}</td>", esc(&text(&s["out"][n])));
        }
        let _ = write!(out, "<td>{}</td><td>{}</td></tr>", esc(&text(&s["envGoal"])), esc(&text(&s["sysGoal"])));
    }
    out.push_str("</table>");
    match lasso {
        Some(k) => {
            let _ = write!(out, "<p>The highlighted steps from step {k} on repeat forever.</p>");
        }
        None => out.push_str("<p>No repetition within the step bound.</p>"),
    }
}

fn abstract_table(out: &mut String, r: &Value) {
    if r["winner"].is_null() {
        note(out, r);
        return;
    }
    let _ = write!(
        out,
        "<p>Winner: {}, opponent violation forced in round {}.</p>",
        esc(&text(&r["winner"])),
        esc(&text(&r["horizon"]))
    );
    let rows = r["rows"].as_array().map(Vec::as_slice).unwrap_or_default();
    let rounds = rows.first().and_then(|x| x["cells"].as_array()).map_or(0, Vec::len);
    out.push_str("<table><tr><th>signal</th>");
    for t in 0..rounds {
        let _ = write!(out, "<th>{t}</th>");
    }
    out.push_str("</tr>");
    for row in rows {
        let _ = write!(out, "<tr><th>{} <span class=\"note\">({})</span></th>", esc(&text(&row["signal"])), esc(&text(&row["kind"])));
        for c in row["cells"].as_array().map(Vec::as_slice).unwrap_or_default() {
            let s = text(c);
            let shown = if s == "*" { "\u{2605}".to_string() } else { s };
            let _ = write!(out, "<td class=\"c\">{}</td>", esc(&shown));
        }
        out.push_str("</tr>");
    }
    out.push_str("</table>");
    out.push_str("<p class=\"note\">\u{2605}: depends on the other player's choices. X: the opponent has violated its safety parts.</p>");
    note(out, r);
}

fn title(id: &str) -> &'static str {
    match id {
        "semantics" => "Strict and non-strict realizability",
        "positions" => "Winning positions",
        "falsify" => "Positions from which assumptions can be falsified",
        "assumptions" => "Superfluous assumptions",
        "resilience" => "Error resilience",
        "precommit" => "Precommittable outputs",
        "stuckat" => "Stuck-at faults",
        "trace" => "Nominal trace",
        "abstract" => "Abstract strategy",
        _ => "Analysis",
    }
}

fn section(out: &mut String, a: &Value) {
    let id = a["id"].as_str().unwrap_or_default();
    let _ = write!(out, "<section id=\"{}\"><h2>{}</h2>", esc(id), esc(title(id)));
    if a["status"] != "ok" {
        let _ = write!(out, "<p class=\"skip\">Skipped: {}</p>", esc(&text(&a["reason"])));
    } else {
        let r = &a["result"];
        match id {
            "semantics" => {
                let mut rows = Vec::new();
                for k in ["strict", "nonstrict", "differs", "robotics"] {
                    if !r[k].is_null() {
                        rows.push((k, text(&r[k])));
                    }
                }
                kv_table(out, &rows);
            }
            "positions" => positions(out, r),
            "falsify" => {
                kv_table(out, &[("positions", text(&r["count"]))]);
                cube_list(out, "Largest cubes", &r["cubes"]);
            }
            "assumptions" => {
                record_table(
                    out,
                    &r["assumptions"],
                    &["section", "index", "text", "test_a", "test_b", "test_c", "test_d", "c_goals", "d_goals", "verdict"],
                );
                note(out, r);
            }
            "resilience" => {
                kv_table(out, &[("glitches tolerated", text(&r["level"])), ("search bound", text(&r["max_k"]))]);
                note(out, r);
            }
            "precommit" => {
                record_table(out, &r["per_output"], &["output", "precommittable"]);
                let _ = write!(out, "<p>Jointly precommittable: {}</p>", esc(&text(&r["maximal_set"])));
                note(out, r);
            }
            "stuckat" => {
                let _ = write!(out, "<p>Signals analyzed: {}</p>", esc(&text(&r["direction"])));
                record_table(out, &r["rows"], &["signal", "value", "realizability"]);
            }
            "trace" => trace(out, r),
            "abstract" => abstract_table(out, r),
            _ => {
                let _ = write!(out, "<pre>{}</pre>", esc(&serde_json::to_string_pretty(r).unwrap_or_default()));
            }
        }
    }
    if let Some(ms) = a["elapsed_ms"].as_u64() {
        let _ = write!(out, "<p class=\"note\">{ms} ms</p>");
    }
    out.push_str("</section>");
}

/// A single self-contained page presenting the report.
pub fn render(report: &Value) -> String {
    let mut out = String::new();
    let file = text(&report["spec"]["file"]);
    let _ = write!(
        out,
        "<!DOCTYPE html>\n<html lang=\"en\"><head><meta charset=\"utf-8\"><title>Report: {}</title><style>{STYLE}</style></head><body>",
        esc(&file)
    );
    let _ = write!(out, "<h1>Specification report: {}</h1>", esc(&file));
    let spec = &report["spec"];
    let parts = spec["parts"]
        .as_object()
        .map(|m| m.iter().map(|(k, v)| format!("{k}: {v}")).collect::<Vec<_>>().join(", "))
        .unwrap_or_default();
    kv_table(
        &mut out,
        &[
            ("tool", format!("{} {}", text(&report["tool"]["name"]), text(&report["tool"]["version"]))),
            ("sha256", text(&spec["sha256"])),
            ("inputs", text(&spec["inputs"])),
            ("outputs", text(&spec["outputs"])),
            ("parts", parts),
        ],
    );
    let base = &report["baseline"];
    let verdict = match base["realizability"].as_str() {
        Some(v) => v.to_string(),
        None => format!("not decided ({})", text(&base["error"])),
    };
    let _ = write!(
        out,
        "<p><strong>Realizability</strong> ({} semantics{}): {}</p>",
        esc(&text(&base["semantics"])),
        if base["robotics"] == true { ", robotics" } else { "" },
        esc(&verdict)
    );
    if let Some(cfg) = report["config"].as_object() {
        let rows: Vec<(&str, String)> = cfg.iter().map(|(k, v)| (k.as_str(), text(v))).collect();
        out.push_str("<details><summary>Configuration</summary>");
        kv_table(&mut out, &rows);
        out.push_str("</details>");
    }
    for a in report["analyses"].as_array().map(Vec::as_slice).unwrap_or_default() {
        section(&mut out, a);
    }
    out.push_str("</body></html>\n");
    out
}
