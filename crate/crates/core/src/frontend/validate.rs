use alloc::vec::Vec;
use core::fmt;

use super::ast::{ExprNode, PartKind, SpecDocument, VarKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShapeRule {
    /// Initial parts are free of temporal operators.
    NextInInit,
    NestedNext,
    /// No output proposition in initial assumptions.
    OutputInInitAssumption,
    /// No output proposition in the scope of `X` inside safety assumptions.
    OutputUnderNextInAssumption,
}

impl ShapeRule {
    pub fn name(self) -> &'static str {
        match self {
            ShapeRule::NextInInit => "next in init part",
            ShapeRule::NestedNext => "nested next",
            ShapeRule::OutputInInitAssumption => "output in init assumption",
            ShapeRule::OutputUnderNextInAssumption => "output under next in assumption",
        }
    }
}

impl fmt::Display for ShapeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShapeViolation {
    pub kind: PartKind,
    pub index: usize,
    pub rule: ShapeRule,
}

struct Scan<'a> {
    doc: &'a SpecDocument,
    nested: bool,
    any_next: bool,
    output_anywhere: bool,
    output_under_next: bool,
}

impl Scan<'_> {
    fn visit(&mut self, e: &ExprNode, under_next: bool) {
        match e {
            ExprNode::Bool(_) | ExprNode::Int(_) => {}
            ExprNode::Atom(name) => {
                let is_output = self.doc.var(name).map(|v| v.kind == VarKind::Output).unwrap_or(false);
                if is_output {
                    self.output_anywhere = true;
                    if under_next {
                        self.output_under_next = true;
                    }
                }
            }
            ExprNode::Next(a) => {
                self.any_next = true;
                if under_next {
                    self.nested = true;
                }
                self.visit(a, true);
            }
            ExprNode::Not(a) => self.visit(a, under_next),
            ExprNode::And(a, b)
            | ExprNode::Or(a, b)
            | ExprNode::Implies(a, b)
            | ExprNode::Iff(a, b)
            | ExprNode::Compare(_, a, b)
            | ExprNode::Add(a, b)
            | ExprNode::Sub(a, b) => {
                self.visit(a, under_next);
                self.visit(b, under_next);
            }
        }
    }
}

/// Lists every violation of the GR(1) grammar restrictions, one entry per
/// (part, rule). An empty list means the document has GR(1) shape.
pub fn validate_gr1_shape(doc: &SpecDocument) -> Vec<ShapeViolation> {
    let mut out = Vec::new();
    for kind in PartKind::ALL {
        for part in doc.parts(kind) {
            let mut scan = Scan {
                doc,
                nested: false,
                any_next: false,
                output_anywhere: false,
                output_under_next: false,
            };
            scan.visit(&part.expr, false);
            let mut push = |rule| out.push(ShapeViolation { kind, index: part.index, rule });
            if kind.is_init() && scan.any_next {
                push(ShapeRule::NextInInit);
            }
            if scan.nested {
                push(ShapeRule::NestedNext);
            }
            if kind == PartKind::EnvInit && scan.output_anywhere {
                push(ShapeRule::OutputInInitAssumption);
            }
            if kind == PartKind::EnvTrans && scan.output_under_next {
                push(ShapeRule::OutputUnderNextInAssumption);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_spec;

    fn rules(src: &str) -> Vec<ShapeRule> {
        validate_gr1_shape(&parse_spec(src).unwrap()).into_iter().map(|v| v.rule).collect()
    }

    #[test]
    fn output_under_next_in_assumption() {
        assert_eq!(
            rules("[INPUT]\na\n[OUTPUT]\ng\n[ENV_TRANS]\nX(g)\n"),
            [ShapeRule::OutputUnderNextInAssumption]
        );
        // current-step outputs are fine in safety assumptions
        assert!(rules("[INPUT]\na\n[OUTPUT]\ng\n[ENV_TRANS]\ng -> X(a)\n").is_empty());
    }

    #[test]
    fn nested_next() {
        assert_eq!(rules("[OUTPUT]\na\n[SYS_TRANS]\nX(X(a))\n"), [ShapeRule::NestedNext]);
    }

    #[test]
    fn next_in_liveness_is_allowed() {
        assert!(rules("[OUTPUT]\na\n[SYS_LIVENESS]\nX(a)\n").is_empty());
    }

    #[test]
    fn init_parts() {
        assert_eq!(rules("[INPUT]\na\n[ENV_INIT]\nX(a)\n"), [ShapeRule::NextInInit]);
        assert_eq!(rules("[OUTPUT]\ng\n[ENV_INIT]\ng\n"), [ShapeRule::OutputInInitAssumption]);
        assert!(rules("[INPUT]\na\n[OUTPUT]\ng\n[SYS_INIT]\ng & a\n").is_empty());
    }
}
