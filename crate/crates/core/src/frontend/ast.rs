use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Input,
    Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Boolean,
    /// Inclusive bounds, `lo <= hi`.
    Integer { lo: u64, hi: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub kind: VarKind,
    pub domain: Domain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
    Ne,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
            CmpOp::Ne => "!=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprNode {
    Bool(bool),
    Int(u64),
    Atom(String),
    Not(Box<ExprNode>),
    And(Box<ExprNode>, Box<ExprNode>),
    Or(Box<ExprNode>, Box<ExprNode>),
    Implies(Box<ExprNode>, Box<ExprNode>),
    Iff(Box<ExprNode>, Box<ExprNode>),
    Next(Box<ExprNode>),
    Compare(CmpOp, Box<ExprNode>, Box<ExprNode>),
    Add(Box<ExprNode>, Box<ExprNode>),
    Sub(Box<ExprNode>, Box<ExprNode>),
}

impl ExprNode {
    // Binding strength used by the printer; higher binds tighter.
    fn precedence(&self) -> u8 {
        match self {
            ExprNode::Iff(..) => 1,
            ExprNode::Implies(..) => 2,
            ExprNode::Or(..) => 3,
            ExprNode::And(..) => 4,
            ExprNode::Compare(..) => 5,
            ExprNode::Add(..) | ExprNode::Sub(..) => 6,
            ExprNode::Not(..) => 7,
            _ => 8,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, child: &ExprNode, min: u8) -> fmt::Result {
        let _ = self;
        if child.precedence() < min {
            write!(f, "({child})")
        } else {
            write!(f, "{child}")
        }
    }
}

impl fmt::Display for ExprNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprNode::Bool(true) => f.write_str("TRUE"),
            ExprNode::Bool(false) => f.write_str("FALSE"),
            ExprNode::Int(n) => write!(f, "{n}"),
            ExprNode::Atom(name) => f.write_str(name),
            ExprNode::Not(a) => {
                f.write_str("!")?;
                self.fmt_child(f, a, 7)
            }
            ExprNode::Next(a) => write!(f, "X({a})"),
            // left-associative chains: the right operand must bind strictly tighter
            ExprNode::And(a, b) => {
                self.fmt_child(f, a, 4)?;
                f.write_str(" & ")?;
                self.fmt_child(f, b, 5)
            }
            ExprNode::Or(a, b) => {
                self.fmt_child(f, a, 3)?;
                f.write_str(" | ")?;
                self.fmt_child(f, b, 4)
            }
            ExprNode::Iff(a, b) => {
                self.fmt_child(f, a, 1)?;
                f.write_str(" <-> ")?;
                self.fmt_child(f, b, 2)
            }
            // right-associative
            ExprNode::Implies(a, b) => {
                self.fmt_child(f, a, 3)?;
                f.write_str(" -> ")?;
                self.fmt_child(f, b, 2)
            }
            ExprNode::Compare(op, a, b) => {
                self.fmt_child(f, a, 6)?;
                write!(f, " {} ", op.symbol())?;
                self.fmt_child(f, b, 6)
            }
            ExprNode::Add(a, b) => {
                self.fmt_child(f, a, 6)?;
                f.write_str(" + ")?;
                self.fmt_child(f, b, 7)
            }
            ExprNode::Sub(a, b) => {
                self.fmt_child(f, a, 6)?;
                f.write_str(" - ")?;
                self.fmt_child(f, b, 7)
            }
        }
    }
}

/// The six GR(1) specification part lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartKind {
    EnvInit,
    EnvTrans,
    EnvLiveness,
    SysInit,
    SysTrans,
    SysLiveness,
}

impl PartKind {
    pub const ALL: [PartKind; 6] = [
        PartKind::EnvInit,
        PartKind::EnvTrans,
        PartKind::EnvLiveness,
        PartKind::SysInit,
        PartKind::SysTrans,
        PartKind::SysLiveness,
    ];

    pub fn header(self) -> &'static str {
        match self {
            PartKind::EnvInit => "ENV_INIT",
            PartKind::EnvTrans => "ENV_TRANS",
            PartKind::EnvLiveness => "ENV_LIVENESS",
            PartKind::SysInit => "SYS_INIT",
            PartKind::SysTrans => "SYS_TRANS",
            PartKind::SysLiveness => "SYS_LIVENESS",
        }
    }

    pub fn is_assumption(self) -> bool {
        matches!(self, PartKind::EnvInit | PartKind::EnvTrans | PartKind::EnvLiveness)
    }

    pub fn is_init(self) -> bool {
        matches!(self, PartKind::EnvInit | PartKind::SysInit)
    }

    pub fn slot(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    /// Position within its section, in source order.
    pub index: usize,
    /// Verbatim source line (comments stripped, trimmed).
    pub text: String,
    pub line: usize,
    pub expr: ExprNode,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpecDocument {
    pub vars: Vec<VarDecl>,
    pub parts: [Vec<Part>; 6],
}

impl SpecDocument {
    pub fn parts(&self, kind: PartKind) -> &[Part] {
        &self.parts[kind.slot()]
    }

    pub fn var(&self, name: &str) -> Option<&VarDecl> {
        self.vars.iter().find(|v| v.name == name)
    }

    /// Renders the document back into the textual format.
    pub fn to_source(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        // consecutive runs keep the declaration order intact
        let mut current = None;
        for v in &self.vars {
            if current != Some(v.kind) {
                if current.is_some() {
                    out.push('\n');
                }
                out.push_str(if v.kind == VarKind::Input { "[INPUT]\n" } else { "[OUTPUT]\n" });
                current = Some(v.kind);
            }
            match v.domain {
                Domain::Boolean => writeln!(out, "{}", v.name).unwrap(),
                Domain::Integer { lo, hi } => writeln!(out, "{}: {}...{}", v.name, lo, hi).unwrap(),
            }
        }
        if current.is_some() {
            out.push('\n');
        }
        for kind in PartKind::ALL {
            let parts = self.parts(kind);
            if parts.is_empty() {
                continue;
            }
            writeln!(out, "[{}]", kind.header()).unwrap();
            for p in parts {
                writeln!(out, "{}", p.expr).unwrap();
            }
            out.push('\n');
        }
        out
    }
}
