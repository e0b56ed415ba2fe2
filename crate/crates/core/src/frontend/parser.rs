//! Line-oriented parser for the sectioned specification format.
//!
//! ```text
//! [INPUT]
//! r
//! x: 0...7
//! [OUTPUT]
//! g
//! [SYS_TRANS]
//! X(g) <-> r   # comments run to the end of the line
//! ```

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::ast::{CmpOp, Domain, ExprNode, Part, PartKind, SpecDocument, VarDecl, VarKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownSection(String),
    DuplicateVariable(String),
    UndeclaredVariable(String),
    Type(String),
    OutsideSection,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            ParseErrorKind::UnknownSection(s) => write!(f, "unknown section header [{s}]"),
            ParseErrorKind::DuplicateVariable(v) => write!(f, "duplicate variable '{v}'"),
            ParseErrorKind::UndeclaredVariable(v) => write!(f, "reference to undeclared variable '{v}'"),
            ParseErrorKind::Type(m) => write!(f, "type error: {m}"),
            ParseErrorKind::OutsideSection => f.write_str("content outside of any section"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Plus,
    Minus,
    Cmp(CmpOp),
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>, (usize, String)> {
        let mut lx = Lexer { src: src.as_bytes(), pos: 0 };
        let mut out = Vec::new();
        loop {
            while lx.pos < lx.src.len() && lx.src[lx.pos].is_ascii_whitespace() {
                lx.pos += 1;
            }
            let start = lx.pos;
            if lx.pos >= lx.src.len() {
                out.push((Tok::End, start));
                return Ok(out);
            }
            let rest = &lx.src[lx.pos..];
            let (tok, len) = if rest.starts_with(b"<->") {
                (Tok::Iff, 3)
            } else if rest.starts_with(b"->") {
                (Tok::Implies, 2)
            } else if rest.starts_with(b"<=") {
                (Tok::Cmp(CmpOp::Le), 2)
            } else if rest.starts_with(b">=") {
                (Tok::Cmp(CmpOp::Ge), 2)
            } else if rest.starts_with(b"!=") {
                (Tok::Cmp(CmpOp::Ne), 2)
            } else {
                match rest[0] {
                    b'<' => (Tok::Cmp(CmpOp::Lt), 1),
                    b'>' => (Tok::Cmp(CmpOp::Gt), 1),
                    b'=' => (Tok::Cmp(CmpOp::Eq), 1),
                    b'!' => (Tok::Not, 1),
                    b'&' => (Tok::And, 1),
                    b'|' => (Tok::Or, 1),
                    b'(' => (Tok::LParen, 1),
                    b')' => (Tok::RParen, 1),
                    b'+' => (Tok::Plus, 1),
                    b'-' => (Tok::Minus, 1),
                    c if c.is_ascii_digit() => {
                        let len = rest.iter().take_while(|c| c.is_ascii_digit()).count();
                        let text = core::str::from_utf8(&rest[..len]).unwrap();
                        let n = text
                            .parse::<u64>()
                            .map_err(|_| (start, format!("integer literal '{text}' out of range")))?;
                        (Tok::Int(n), len)
                    }
                    c if c.is_ascii_alphabetic() || c == b'_' => {
                        let len = rest
                            .iter()
                            .take_while(|c| c.is_ascii_alphanumeric() || **c == b'_')
                            .count();
                        let text = core::str::from_utf8(&rest[..len]).unwrap();
                        (Tok::Ident(text.to_string()), len)
                    }
                    _ => {
                        let ch = core::str::from_utf8(rest)
                            .ok()
                            .and_then(|s| s.chars().next())
                            .unwrap_or('?');
                        return Err((start, format!("unexpected character '{ch}'")));
                    }
                }
            };
            lx.pos += len;
            out.push((tok, start));
        }
    }
}

struct ExprParser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

type PResult<T> = Result<T, (usize, String)>;

impl ExprParser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err((self.offset(), format!("expected {what}")))
        }
    }

    fn iff(&mut self) -> PResult<ExprNode> {
        let mut lhs = self.implies()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implies()?;
            lhs = ExprNode::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> PResult<ExprNode> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implies()?;
            return Ok(ExprNode::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> PResult<ExprNode> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = ExprNode::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> PResult<ExprNode> {
        let mut lhs = self.compare()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.compare()?;
            lhs = ExprNode::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn compare(&mut self) -> PResult<ExprNode> {
        let lhs = self.sum()?;
        if let Tok::Cmp(op) = *self.peek() {
            self.bump();
            let rhs = self.sum()?;
            return Ok(ExprNode::Compare(op, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> PResult<ExprNode> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = ExprNode::Add(Box::new(lhs), Box::new(rhs));
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = ExprNode::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> PResult<ExprNode> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(ExprNode::Not(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<ExprNode> {
        let at = self.offset();
        match self.bump() {
            Tok::Int(n) => Ok(ExprNode::Int(n)),
            Tok::LParen => {
                let e = self.iff()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "TRUE" | "true" => Ok(ExprNode::Bool(true)),
                "FALSE" | "false" => Ok(ExprNode::Bool(false)),
                "X" if *self.peek() == Tok::LParen => {
                    self.bump();
                    let e = self.iff()?;
                    self.expect(Tok::RParen, "')' closing X(")?;
                    Ok(ExprNode::Next(Box::new(e)))
                }
                _ => Ok(ExprNode::Atom(name)),
            },
            Tok::End => Err((at, "unexpected end of expression".to_string())),
            t => Err((at, format!("unexpected token {t:?}"))),
        }
    }
}

/// Parses a single expression without resolving names.
pub fn parse_expr(src: &str) -> Result<ExprNode, ParseError> {
    parse_expr_at(src, 1, 1)
}

fn parse_expr_at(src: &str, line: usize, col0: usize) -> Result<ExprNode, ParseError> {
    let err = |(off, msg): (usize, String)| ParseError {
        line,
        column: col0 + off,
        kind: ParseErrorKind::Syntax(msg),
    };
    let toks = Lexer::tokens(src).map_err(err)?;
    let mut p = ExprParser { toks, pos: 0 };
    let e = p.iff().map_err(err)?;
    if *p.peek() != Tok::End {
        return Err(err((p.offset(), "trailing input".to_string())));
    }
    Ok(e)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Ty {
    Bool,
    Int,
}

fn type_of(e: &ExprNode, vars: &[VarDecl]) -> Result<Ty, ParseErrorKind> {
    let want = |e: &ExprNode, ty: Ty, ctx: &str| -> Result<(), ParseErrorKind> {
        let got = type_of(e, vars)?;
        if got != ty {
            let name = if ty == Ty::Bool { "boolean" } else { "integer" };
            return Err(ParseErrorKind::Type(format!("operand of {ctx} must be {name}: {e}")));
        }
        Ok(())
    };
    match e {
        ExprNode::Bool(_) => Ok(Ty::Bool),
        ExprNode::Int(_) => Ok(Ty::Int),
        ExprNode::Atom(name) => match vars.iter().find(|v| &v.name == name) {
            None => Err(ParseErrorKind::UndeclaredVariable(name.clone())),
            Some(v) => Ok(match v.domain {
                Domain::Boolean => Ty::Bool,
                Domain::Integer { .. } => Ty::Int,
            }),
        },
        ExprNode::Not(a) => want(a, Ty::Bool, "'!'").map(|_| Ty::Bool),
        ExprNode::And(a, b) | ExprNode::Or(a, b) | ExprNode::Implies(a, b) | ExprNode::Iff(a, b) => {
            want(a, Ty::Bool, "a boolean connective")?;
            want(b, Ty::Bool, "a boolean connective")?;
            Ok(Ty::Bool)
        }
        ExprNode::Next(a) => type_of(a, vars),
        ExprNode::Compare(_, a, b) => {
            want(a, Ty::Int, "a comparison")?;
            want(b, Ty::Int, "a comparison")?;
            Ok(Ty::Bool)
        }
        ExprNode::Add(a, b) | ExprNode::Sub(a, b) => {
            want(a, Ty::Int, "arithmetic")?;
            want(b, Ty::Int, "arithmetic")?;
            Ok(Ty::Int)
        }
    }
}

enum Section {
    Vars(VarKind),
    Parts(PartKind),
}

fn section(name: &str) -> Option<Section> {
    Some(match name {
        "INPUT" => Section::Vars(VarKind::Input),
        "OUTPUT" => Section::Vars(VarKind::Output),
        "ENV_INIT" => Section::Parts(PartKind::EnvInit),
        "ENV_TRANS" => Section::Parts(PartKind::EnvTrans),
        "ENV_LIVENESS" => Section::Parts(PartKind::EnvLiveness),
        "SYS_INIT" => Section::Parts(PartKind::SysInit),
        "SYS_TRANS" => Section::Parts(PartKind::SysTrans),
        "SYS_LIVENESS" => Section::Parts(PartKind::SysLiveness),
        _ => return None,
    })
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(s, "TRUE" | "FALSE" | "true" | "false" | "X")
}

fn parse_decl(text: &str, kind: VarKind, line: usize, col0: usize) -> Result<VarDecl, ParseError> {
    let syntax = |col: usize, msg: String| ParseError { line, column: col, kind: ParseErrorKind::Syntax(msg) };
    let (name, domain) = match text.split_once(':') {
        None => (text.trim(), Domain::Boolean),
        Some((name, range)) => {
            let range_col = col0 + name.len() + 1;
            let (lo, hi) = range
                .split_once("...")
                .ok_or_else(|| syntax(range_col, "expected integer range 'lo...hi'".to_string()))?;
            let parse_bound = |s: &str| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| syntax(range_col, format!("invalid integer bound '{}'", s.trim())))
            };
            let (lo, hi) = (parse_bound(lo)?, parse_bound(hi)?);
            if hi < lo {
                return Err(syntax(range_col, format!("empty range {lo}...{hi}")));
            }
            (name.trim(), Domain::Integer { lo, hi })
        }
    };
    if !is_ident(name) {
        return Err(syntax(col0, format!("invalid variable name '{name}'")));
    }
    Ok(VarDecl { name: name.to_string(), kind, domain })
}

/// Parses a complete specification document.
pub fn parse_spec(text: &str) -> Result<SpecDocument, ParseError> {
    let mut doc = SpecDocument::default();
    let mut current: Option<Section> = None;
    let mut pending: Vec<(PartKind, String, usize, usize)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col0 = content.len() - content.trim_start().len() + 1;
        if trimmed.starts_with('[') {
            let inner = trimmed
                .strip_prefix('[')
                .and_then(|s| s.split_once(']'))
                .map(|(head, _)| head)
                .ok_or(ParseError {
                    line,
                    column: col0,
                    kind: ParseErrorKind::Syntax("malformed section header".to_string()),
                })?;
            match section(inner.trim()) {
                Some(s) => current = Some(s),
                None => {
                    return Err(ParseError {
                        line,
                        column: col0,
                        kind: ParseErrorKind::UnknownSection(inner.trim().to_string()),
                    })
                }
            }
            // "[INPUT] r" style: the rest of the line is the first entry
            let rest = &trimmed[trimmed.find(']').unwrap() + 1..];
            if rest.trim().is_empty() {
                continue;
            }
        }
        let (entry, entry_col) = if trimmed.starts_with('[') {
            let after = trimmed.find(']').unwrap() + 1;
            let rest = &trimmed[after..];
            (rest.trim(), col0 + after + (rest.len() - rest.trim_start().len()))
        } else {
            (trimmed, col0)
        };
        match &current {
            None => return Err(ParseError { line, column: col0, kind: ParseErrorKind::OutsideSection }),
            Some(Section::Vars(kind)) => {
                let decl = parse_decl(entry, *kind, line, entry_col)?;
                if doc.var(&decl.name).is_some() {
                    return Err(ParseError {
                        line,
                        column: entry_col,
                        kind: ParseErrorKind::DuplicateVariable(decl.name),
                    });
                }
                doc.vars.push(decl);
            }
            Some(Section::Parts(kind)) => pending.push((*kind, entry.to_string(), line, entry_col)),
        }
    }

    // expressions are resolved after all declarations are known
    for (kind, text, line, col) in pending {
        let expr = parse_expr_at(&text, line, col)?;
        let ty = type_of(&expr, &doc.vars).map_err(|kind| ParseError { line, column: col, kind })?;
        if ty != Ty::Bool {
            return Err(ParseError {
                line,
                column: col,
                kind: ParseErrorKind::Type(format!("specification part must be boolean: {text}")),
            });
        }
        let slot = &mut doc.parts[kind.slot()];
        slot.push(Part { index: slot.len(), text, line, expr });
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_section_entry() {
        let doc = parse_spec("[INPUT] r\n[SYS_LIVENESS] r").unwrap();
        assert_eq!(doc.vars.len(), 1);
        assert_eq!(doc.vars[0].kind, VarKind::Input);
        assert_eq!(doc.parts(PartKind::SysLiveness).len(), 1);
        assert_eq!(doc.parts(PartKind::SysLiveness)[0].expr, ExprNode::Atom("r".into()));
    }

    #[test]
    fn integer_declaration() {
        let doc = parse_spec("[INPUT] x: 0...7").unwrap();
        assert_eq!(doc.vars[0].domain, Domain::Integer { lo: 0, hi: 7 });
    }

    #[test]
    fn unknown_header() {
        let e = parse_spec("[BOGUS] r").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownSection("BOGUS".into()));
        assert!(e.to_string().contains("unknown section header"));
    }

    #[test]
    fn precedence() {
        let e = parse_expr("a | b & c -> d -> e <-> f").unwrap();
        let expected = parse_expr("((a | (b & c)) -> (d -> e)) <-> f").unwrap();
        assert_eq!(e, expected);
        let e = parse_expr("!a & x + 1 < 3").unwrap();
        assert_eq!(e, parse_expr("(!a) & ((x + 1) < 3)").unwrap());
    }

    #[test]
    fn errors_have_locations() {
        let e = parse_spec("[INPUT]\na\n[SYS_TRANS]\n  a & (b").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_spec("[INPUT]\na\n[SYS_TRANS]\na & zz\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UndeclaredVariable("zz".into()));
        let e = parse_spec("[INPUT]\na\n[OUTPUT]\na\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateVariable("a".into()));
        assert!(parse_spec("a\n").is_err());
        assert!(matches!(parse_spec("[INPUT]\nx: 5...3").unwrap_err().kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn arithmetic_only_under_comparison() {
        let e = parse_spec("[INPUT]\nx: 0...3\n[ENV_TRANS]\nx + 1\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Type(_)));
        let e = parse_spec("[INPUT]\nx: 0...3\na\n[ENV_TRANS]\na + 1 < 2\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Type(_)));
    }

    #[test]
    fn comments_and_blank_lines() {
        let doc = parse_spec("# header\n[INPUT]\nr # request\n\n[OUTPUT]\ng\n[SYS_TRANS]\nX(g) <-> r # copy\n").unwrap();
        assert_eq!(doc.parts(PartKind::SysTrans)[0].text, "X(g) <-> r");
    }
}
