#![allow(dead_code)]

use std::path::PathBuf;

use gr1_core::frontend::{BooleanSpec, PartKind, PartOrigin, VarKind};

pub const SPECS: [&str; 10] = [
    "counter",
    "delivery",
    "delivery_ready",
    "doors",
    "mutex",
    "mutex_fixed",
    "patrol",
    "psi",
    "two_robots",
    "two_robots_weakened",
];

pub fn spec_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs").join(format!("{name}.spec"))
}

pub fn spec_source(name: &str) -> String {
    std::fs::read_to_string(spec_path(name)).unwrap()
}

/// Source text of a boolean specification built in memory.
pub fn render(spec: &BooleanSpec) -> String {
    let mut out = String::new();
    for (header, kind) in [("INPUT", VarKind::Input), ("OUTPUT", VarKind::Output)] {
        out.push_str(&format!("[{header}]\n"));
        for p in spec.props.iter().filter(|p| p.kind == kind) {
            out.push_str(&format!("{}\n", p.name));
        }
    }
    for k in PartKind::ALL {
        let parts: Vec<_> = spec.parts(k).iter().filter(|p| p.origin == PartOrigin::User).collect();
        if !parts.is_empty() {
            out.push_str(&format!("[{}]\n", k.header()));
            for p in parts {
                out.push_str(&format!("{}\n", p.text));
            }
        }
    }
    out
}

pub fn schema_validator() -> jsonschema::Validator {
    let schema: serde_json::Value = serde_json::from_str(gr1report::REPORT_SCHEMA).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

pub fn assert_valid(v: &jsonschema::Validator, report: &serde_json::Value) {
    let errors: Vec<String> = v.iter_errors(report).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
}
