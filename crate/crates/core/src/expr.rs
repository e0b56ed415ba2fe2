//! Pure boolean predicates over current and next-step propositions.
//!
//! Predicates are immutable DAGs (`Arc`-shared subterms), which keeps the
//! adder and comparator circuits produced by integer bit-blasting linear in
//! size. Consumers that evaluate a predicate many times should flatten it
//! into a [`Netlist`] first.

use alloc::sync::Arc;
use alloc::vec::Vec;
use crate::FxHashMap as HashMap;

/// Index of a boolean proposition in a [`crate::BooleanSpec`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PropId(pub u32);

impl PropId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    Const(bool),
    /// A proposition, either in the current position or in the next one.
    Var { prop: PropId, primed: bool },
    Not(Pred),
    And(Pred, Pred),
    Or(Pred, Pred),
    Xor(Pred, Pred),
    Iff(Pred, Pred),
}

pub type Pred = Arc<BoolExpr>;

pub fn tt() -> Pred {
    Arc::new(BoolExpr::Const(true))
}

pub fn ff() -> Pred {
    Arc::new(BoolExpr::Const(false))
}

pub fn constant(b: bool) -> Pred {
    Arc::new(BoolExpr::Const(b))
}

pub fn var(prop: PropId, primed: bool) -> Pred {
    Arc::new(BoolExpr::Var { prop, primed })
}

pub fn not(a: &Pred) -> Pred {
    match &**a {
        BoolExpr::Const(b) => constant(!b),
        BoolExpr::Not(inner) => inner.clone(),
        _ => Arc::new(BoolExpr::Not(a.clone())),
    }
}

pub fn and(a: &Pred, b: &Pred) -> Pred {
    match (&**a, &**b) {
        (BoolExpr::Const(false), _) | (_, BoolExpr::Const(false)) => ff(),
        (BoolExpr::Const(true), _) => b.clone(),
        (_, BoolExpr::Const(true)) => a.clone(),
        _ => Arc::new(BoolExpr::And(a.clone(), b.clone())),
    }
}

pub fn or(a: &Pred, b: &Pred) -> Pred {
    match (&**a, &**b) {
        (BoolExpr::Const(true), _) | (_, BoolExpr::Const(true)) => tt(),
        (BoolExpr::Const(false), _) => b.clone(),
        (_, BoolExpr::Const(false)) => a.clone(),
        _ => Arc::new(BoolExpr::Or(a.clone(), b.clone())),
    }
}

pub fn xor(a: &Pred, b: &Pred) -> Pred {
    match (&**a, &**b) {
        (BoolExpr::Const(x), _) => {
            if *x {
                not(b)
            } else {
                b.clone()
            }
        }
        (_, BoolExpr::Const(y)) => {
            if *y {
                not(a)
            } else {
                a.clone()
            }
        }
        _ => Arc::new(BoolExpr::Xor(a.clone(), b.clone())),
    }
}

pub fn iff(a: &Pred, b: &Pred) -> Pred {
    match (&**a, &**b) {
        (BoolExpr::Const(_), _) | (_, BoolExpr::Const(_)) => not(&xor(a, b)),
        _ => Arc::new(BoolExpr::Iff(a.clone(), b.clone())),
    }
}

pub fn implies(a: &Pred, b: &Pred) -> Pred {
    or(&not(a), b)
}

pub fn and_all<'a>(items: impl IntoIterator<Item = &'a Pred>) -> Pred {
    items.into_iter().fold(tt(), |acc, p| and(&acc, p))
}

pub fn or_all<'a>(items: impl IntoIterator<Item = &'a Pred>) -> Pred {
    items.into_iter().fold(ff(), |acc, p| or(&acc, p))
}

/// True if the predicate reads any next-step proposition.
pub fn mentions_primed(p: &Pred) -> bool {
    let mut seen = HashMap::default();
    walk_vars(p, &mut seen, &mut |_, primed| primed)
}

/// Calls `f` on every variable occurrence; returns true if any call did.
pub fn any_var(p: &Pred, f: &mut dyn FnMut(PropId, bool) -> bool) -> bool {
    let mut seen = HashMap::default();
    walk_vars(p, &mut seen, f)
}

fn walk_vars(
    p: &Pred,
    seen: &mut HashMap<*const BoolExpr, bool>,
    f: &mut dyn FnMut(PropId, bool) -> bool,
) -> bool {
    let key = Arc::as_ptr(p);
    if let Some(&r) = seen.get(&key) {
        return r;
    }
    let r = match &**p {
        BoolExpr::Const(_) => false,
        BoolExpr::Var { prop, primed } => f(*prop, *primed),
        BoolExpr::Not(a) => walk_vars(a, seen, f),
        BoolExpr::And(a, b) | BoolExpr::Or(a, b) | BoolExpr::Xor(a, b) | BoolExpr::Iff(a, b) => {
            let ra = walk_vars(a, seen, f);
            let rb = walk_vars(b, seen, f);
            ra || rb
        }
    };
    seen.insert(key, r);
    r
}

#[derive(Clone, Copy, Debug)]
enum Gate {
    Const(bool),
    Var(u32, bool),
    Not(u32),
    And(u32, u32),
    Or(u32, u32),
    Xor(u32, u32),
    Iff(u32, u32),
}

/// A predicate flattened into topologically ordered gates.
#[derive(Clone, Debug)]
pub struct Netlist {
    gates: Vec<Gate>,
}

impl Netlist {
    pub fn new(p: &Pred) -> Self {
        let mut gates = Vec::new();
        let mut ids: HashMap<*const BoolExpr, u32> = HashMap::default();
        Self::flatten(p, &mut gates, &mut ids);
        Netlist { gates }
    }

    fn flatten(p: &Pred, gates: &mut Vec<Gate>, ids: &mut HashMap<*const BoolExpr, u32>) -> u32 {
        let key = Arc::as_ptr(p);
        if let Some(&id) = ids.get(&key) {
            return id;
        }
        let gate = match &**p {
            BoolExpr::Const(b) => Gate::Const(*b),
            BoolExpr::Var { prop, primed } => Gate::Var(prop.0, *primed),
            BoolExpr::Not(a) => Gate::Not(Self::flatten(a, gates, ids)),
            BoolExpr::And(a, b) => Gate::And(Self::flatten(a, gates, ids), Self::flatten(b, gates, ids)),
            BoolExpr::Or(a, b) => Gate::Or(Self::flatten(a, gates, ids), Self::flatten(b, gates, ids)),
            BoolExpr::Xor(a, b) => Gate::Xor(Self::flatten(a, gates, ids), Self::flatten(b, gates, ids)),
            BoolExpr::Iff(a, b) => Gate::Iff(Self::flatten(a, gates, ids), Self::flatten(b, gates, ids)),
        };
        let id = gates.len() as u32;
        gates.push(gate);
        ids.insert(key, id);
        id
    }

    /// Evaluates with `cur` and `next` as bitmasks indexed by proposition.
    pub fn eval(&self, cur: u64, next: u64, scratch: &mut Vec<bool>) -> bool {
        scratch.clear();
        for g in &self.gates {
            let v = match *g {
                Gate::Const(b) => b,
                Gate::Var(p, primed) => {
                    let word = if primed { next } else { cur };
                    (word >> p) & 1 == 1
                }
                Gate::Not(a) => !scratch[a as usize],
                Gate::And(a, b) => scratch[a as usize] && scratch[b as usize],
                Gate::Or(a, b) => scratch[a as usize] || scratch[b as usize],
                Gate::Xor(a, b) => scratch[a as usize] != scratch[b as usize],
                Gate::Iff(a, b) => scratch[a as usize] == scratch[b as usize],
            };
            scratch.push(v);
        }
        *scratch.last().unwrap_or(&true)
    }

    pub fn eval_once(&self, cur: u64, next: u64) -> bool {
        let mut scratch = Vec::with_capacity(self.gates.len());
        self.eval(cur, next, &mut scratch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folding() {
        let a = var(PropId(0), false);
        assert_eq!(*and(&a, &ff()), BoolExpr::Const(false));
        assert!(Arc::ptr_eq(&or(&a, &ff()), &a));
        assert!(Arc::ptr_eq(&not(&not(&a)), &a));
        assert_eq!(*xor(&tt(), &tt()), BoolExpr::Const(false));
    }

    #[test]
    fn netlist_shares_subterms() {
        let a = var(PropId(0), false);
        let b = var(PropId(1), true);
        let mut c = xor(&a, &b);
        for _ in 0..40 {
            c = and(&or(&c, &a), &or(&c, &b));
        }
        let n = Netlist::new(&c);
        assert!(n.gates.len() < 200);
        assert!(n.eval_once(0b1, 0b10));
        assert!(!n.eval_once(0, 0));
    }
}
