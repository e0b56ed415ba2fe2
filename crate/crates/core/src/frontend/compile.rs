//! Bit-blasting of bounded integers.
//!
//! An integer `x: lo...hi` is stored as the unsigned binary encoding of
//! `x - lo` in exactly `ceil(log2(hi - lo + 1))` propositions (LSB first).
//! Arithmetic is evaluated over the naturals: every sum gets one more bit
//! than its widest operand, so no sub-expression ever wraps around.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::ast::{CmpOp, Domain, ExprNode, PartKind, SpecDocument, VarKind};
use super::validate::{validate_gr1_shape, ShapeViolation};
use crate::expr::{self, Pred, PropId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proposition {
    pub name: String,
    pub kind: VarKind,
    /// Owning integer variable (index into [`BooleanSpec::ints`]) and bit position.
    pub int_bit: Option<(usize, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntEncoding {
    pub name: String,
    pub kind: VarKind,
    /// LSB first.
    pub bits: Vec<PropId>,
    pub lo: u64,
    pub hi: u64,
}

impl IntEncoding {
    /// Decodes from the bit values, or `None` for an out-of-range encoding.
    pub fn decode(&self, bit_value: impl Fn(PropId) -> bool) -> Option<u64> {
        let enc = self
            .bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, p)| acc | ((bit_value(*p) as u64) << i));
        let v = self.lo + enc;
        (v <= self.hi).then_some(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartOrigin {
    User,
    /// Keeps an integer inside its declared bounds.
    RangeConstraint,
    /// Added by an analysis on a modified copy of the specification.
    Analysis,
}

#[derive(Clone, Debug)]
pub struct SpecPart {
    pub kind: PartKind,
    /// Source index for user parts; running index otherwise.
    pub index: usize,
    pub text: String,
    pub origin: PartOrigin,
    /// Over current propositions and, for safety/liveness parts, next ones.
    pub pred: Pred,
}

/// A specification over boolean propositions only.
#[derive(Clone, Debug, Default)]
pub struct BooleanSpec {
    pub props: Vec<Proposition>,
    pub ints: Vec<IntEncoding>,
    parts: [Vec<SpecPart>; 6],
}

impl BooleanSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_prop(&mut self, name: &str, kind: VarKind) -> PropId {
        let id = PropId(self.props.len() as u32);
        self.props.push(Proposition { name: name.to_string(), kind, int_bit: None });
        id
    }

    pub fn prop(&self, name: &str) -> Option<PropId> {
        self.props.iter().position(|p| p.name == name).map(|i| PropId(i as u32))
    }

    pub fn props_of(&self, kind: VarKind) -> Vec<PropId> {
        (0..self.props.len())
            .filter(|&i| self.props[i].kind == kind)
            .map(|i| PropId(i as u32))
            .collect()
    }

    pub fn inputs(&self) -> Vec<PropId> {
        self.props_of(VarKind::Input)
    }

    pub fn outputs(&self) -> Vec<PropId> {
        self.props_of(VarKind::Output)
    }

    pub fn parts(&self, kind: PartKind) -> &[SpecPart] {
        &self.parts[kind.slot()]
    }

    pub fn all_parts(&self) -> impl Iterator<Item = &SpecPart> {
        self.parts.iter().flatten()
    }

    pub fn push_part(&mut self, kind: PartKind, pred: Pred, text: &str, origin: PartOrigin) {
        let slot = &mut self.parts[kind.slot()];
        let index = slot.iter().map(|p| p.index + 1).max().unwrap_or(0);
        slot.push(SpecPart { kind, index, text: text.to_string(), origin, pred });
    }

    /// A copy with the part at `position` (within its section) removed.
    pub fn without_part(&self, kind: PartKind, position: usize) -> BooleanSpec {
        let mut out = self.clone();
        out.parts[kind.slot()].remove(position);
        out
    }

    pub fn with_part(&self, kind: PartKind, pred: Pred, text: &str) -> BooleanSpec {
        let mut out = self.clone();
        out.push_part(kind, pred, text, PartOrigin::Analysis);
        out
    }

    /// Declared signals: boolean propositions and whole integers, in declaration order.
    pub fn signals(&self) -> Vec<(String, VarKind, Vec<PropId>)> {
        let mut out = Vec::new();
        let mut seen_int = vec![false; self.ints.len()];
        for (i, p) in self.props.iter().enumerate() {
            match p.int_bit {
                None => out.push((p.name.clone(), p.kind, vec![PropId(i as u32)])),
                Some((iv, _)) if !seen_int[iv] => {
                    seen_int[iv] = true;
                    let enc = &self.ints[iv];
                    out.push((enc.name.clone(), enc.kind, enc.bits.clone()));
                }
                Some(_) => {}
            }
        }
        // zero-width integers own no proposition but are still signals
        for (iv, enc) in self.ints.iter().enumerate() {
            if !seen_int[iv] && enc.bits.is_empty() {
                out.push((enc.name.clone(), enc.kind, Vec::new()));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CompileError {
    #[error("specification violates the GR(1) shape ({} violation(s))", .0.len())]
    Shape(Vec<ShapeViolation>),
    #[error("subtraction may become negative in '{0}'")]
    NegativeSubtraction(String),
    #[error("integer expression too wide in '{0}'")]
    TooWide(String),
}

/// A natural-number term: bit vector (LSB first) plus static bounds.
#[derive(Clone)]
struct IntTerm {
    bits: Vec<Pred>,
    lo: u64,
    hi: u64,
}

fn bit_width(v: u64) -> usize {
    (64 - v.leading_zeros() as usize).max(1)
}

/// Bits needed for `n` distinct values.
pub(crate) fn bits_for_values(n: u64) -> usize {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros() as usize
    }
}

fn const_term(v: u64) -> IntTerm {
    let bits = (0..bit_width(v)).map(|i| expr::constant((v >> i) & 1 == 1)).collect();
    IntTerm { bits, lo: v, hi: v }
}

fn extend(bits: &[Pred], width: usize) -> Vec<Pred> {
    let mut out = bits.to_vec();
    out.resize(width, expr::ff());
    out
}

fn add_bits(a: &[Pred], b: &[Pred], carry_in: Pred, width: usize) -> Vec<Pred> {
    let a = extend(a, width);
    let b = extend(b, width);
    let mut carry = carry_in;
    let mut out = Vec::with_capacity(width);
    for i in 0..width {
        let axb = expr::xor(&a[i], &b[i]);
        out.push(expr::xor(&axb, &carry));
        carry = expr::or(&expr::and(&a[i], &b[i]), &expr::and(&carry, &axb));
    }
    out
}

fn less_than(a: &[Pred], b: &[Pred]) -> Pred {
    let w = a.len().max(b.len());
    let a = extend(a, w);
    let b = extend(b, w);
    // LSB upwards: lt_i = (!a_i & b_i) | ((a_i <-> b_i) & lt_{i-1})
    let mut lt = expr::ff();
    for i in 0..w {
        let strictly = expr::and(&expr::not(&a[i]), &b[i]);
        let same = expr::iff(&a[i], &b[i]);
        lt = expr::or(&strictly, &expr::and(&same, &lt));
    }
    lt
}

fn equal(a: &[Pred], b: &[Pred]) -> Pred {
    let w = a.len().max(b.len());
    let a = extend(a, w);
    let b = extend(b, w);
    let eqs: Vec<Pred> = (0..w).map(|i| expr::iff(&a[i], &b[i])).collect();
    expr::and_all(eqs.iter())
}

/// Predicate that the encoding of `enc` lies inside its declared range.
pub(crate) fn range_pred(enc: &IntEncoding, primed: bool) -> Pred {
    let bits: Vec<Pred> = enc.bits.iter().map(|p| expr::var(*p, primed)).collect();
    less_than(&bits, &const_term(enc.hi - enc.lo + 1).bits)
}

struct Compiler<'a> {
    doc: &'a SpecDocument,
    spec: &'a BooleanSpec,
    source: &'a str,
}

impl Compiler<'_> {
    fn boolean(&self, e: &ExprNode, primed: bool) -> Result<Pred, CompileError> {
        Ok(match e {
            ExprNode::Bool(b) => expr::constant(*b),
            ExprNode::Atom(name) => expr::var(self.spec.prop(name).expect("typed boolean atom"), primed),
            ExprNode::Not(a) => expr::not(&self.boolean(a, primed)?),
            ExprNode::And(a, b) => expr::and(&self.boolean(a, primed)?, &self.boolean(b, primed)?),
            ExprNode::Or(a, b) => expr::or(&self.boolean(a, primed)?, &self.boolean(b, primed)?),
            ExprNode::Implies(a, b) => expr::implies(&self.boolean(a, primed)?, &self.boolean(b, primed)?),
            ExprNode::Iff(a, b) => expr::iff(&self.boolean(a, primed)?, &self.boolean(b, primed)?),
            ExprNode::Next(a) => self.boolean(a, true)?,
            ExprNode::Compare(op, a, b) => {
                let l = self.integer(a, primed)?;
                let r = self.integer(b, primed)?;
                match op {
                    CmpOp::Lt => less_than(&l.bits, &r.bits),
                    CmpOp::Gt => less_than(&r.bits, &l.bits),
                    CmpOp::Le => expr::not(&less_than(&r.bits, &l.bits)),
                    CmpOp::Ge => expr::not(&less_than(&l.bits, &r.bits)),
                    CmpOp::Eq => equal(&l.bits, &r.bits),
                    CmpOp::Ne => expr::not(&equal(&l.bits, &r.bits)),
                }
            }
            ExprNode::Int(_) | ExprNode::Add(..) | ExprNode::Sub(..) => {
                unreachable!("integer term in boolean position survives type checking")
            }
        })
    }

    fn integer(&self, e: &ExprNode, primed: bool) -> Result<IntTerm, CompileError> {
        Ok(match e {
            ExprNode::Int(v) => const_term(*v),
            ExprNode::Atom(name) => {
                let enc = self.spec.ints.iter().find(|i| &i.name == name).expect("typed integer atom");
                let bits: Vec<Pred> = enc.bits.iter().map(|p| expr::var(*p, primed)).collect();
                let raw = IntTerm { bits, lo: 0, hi: enc.hi - enc.lo };
                if enc.lo == 0 {
                    raw
                } else {
                    self.add(raw, const_term(enc.lo))?
                }
            }
            ExprNode::Next(a) => self.integer(a, true)?,
            ExprNode::Add(a, b) => {
                let l = self.integer(a, primed)?;
                let r = self.integer(b, primed)?;
                self.add(l, r)?
            }
            ExprNode::Sub(a, b) => {
                let l = self.integer(a, primed)?;
                let r = self.integer(b, primed)?;
                if l.lo < r.hi {
                    return Err(CompileError::NegativeSubtraction(self.source.to_string()));
                }
                // a - b = a + !b + 1 (mod 2^w); the bounds guarantee no underflow
                let w = l.bits.len().max(r.bits.len());
                let nb: Vec<Pred> = extend(&r.bits, w).iter().map(expr::not).collect();
                let bits = add_bits(&l.bits, &nb, expr::tt(), w);
                IntTerm { bits, lo: l.lo - r.hi, hi: l.hi - r.lo }
            }
            _ => unreachable!("boolean term in integer position survives type checking"),
        })
    }

    fn add(&self, l: IntTerm, r: IntTerm) -> Result<IntTerm, CompileError> {
        let w = l.bits.len().max(r.bits.len()) + 1;
        let (Some(lo), Some(hi)) = (l.lo.checked_add(r.lo), l.hi.checked_add(r.hi)) else {
            return Err(CompileError::TooWide(self.source.to_string()));
        };
        if w > 64 {
            return Err(CompileError::TooWide(self.source.to_string()));
        }
        Ok(IntTerm { bits: add_bits(&l.bits, &r.bits, expr::ff(), w), lo, hi })
    }
}

/// Compiles a shape-valid document into a purely boolean specification.
pub fn compile_to_boolean(doc: &SpecDocument) -> Result<BooleanSpec, CompileError> {
    let violations = validate_gr1_shape(doc);
    if !violations.is_empty() {
        return Err(CompileError::Shape(violations));
    }
    let mut spec = BooleanSpec::new();
    for decl in &doc.vars {
        match decl.domain {
            Domain::Boolean => {
                spec.add_prop(&decl.name, decl.kind);
            }
            Domain::Integer { lo, hi } => {
                let iv = spec.ints.len();
                let nbits = bits_for_values(hi - lo + 1);
                let mut bits = Vec::with_capacity(nbits);
                for b in 0..nbits {
                    let id = spec.add_prop(&format!("{}@{}", decl.name, b), decl.kind);
                    spec.props[id.index()].int_bit = Some((iv, b as u32));
                    bits.push(id);
                }
                spec.ints.push(IntEncoding { name: decl.name.clone(), kind: decl.kind, bits, lo, hi });
            }
        }
    }

    for kind in PartKind::ALL {
        for part in doc.parts(kind) {
            let c = Compiler { doc, spec: &spec, source: &part.text };
            let _ = c.doc;
            let pred = c.boolean(&part.expr, false)?;
            spec.parts[kind.slot()].push(SpecPart {
                kind,
                index: part.index,
                text: part.text.clone(),
                origin: PartOrigin::User,
                pred,
            });
        }
    }

    for iv in 0..spec.ints.len() {
        let enc = spec.ints[iv].clone();
        let size = enc.hi - enc.lo + 1;
        if size.is_power_of_two() {
            continue;
        }
        let (init, trans) = match enc.kind {
            VarKind::Input => (PartKind::EnvInit, PartKind::EnvTrans),
            VarKind::Output => (PartKind::SysInit, PartKind::SysTrans),
        };
        let text = format!("{} in {}...{}", enc.name, enc.lo, enc.hi);
        spec.push_part(init, range_pred(&enc, false), &text, PartOrigin::RangeConstraint);
        spec.push_part(trans, range_pred(&enc, true), &text, PartOrigin::RangeConstraint);
    }
    Ok(spec)
}

impl fmt::Display for PartOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartOrigin::User => "user",
            PartOrigin::RangeConstraint => "range",
            PartOrigin::Analysis => "analysis",
        })
    }
}
