//! Reduced ordered binary decision diagrams.
//!
//! Nodes live in one arena per [`BddManager`]; node 0 is FALSE and node 1 is
//! TRUE. There are no complement edges, so two functions are equal exactly
//! when their [`BddRef`]s are equal.
//!
//! Handles are plain `Copy` values. Garbage collection is explicit: only
//! nodes reachable from retained handles or from the roots passed to
//! [`BddManager::collect`] survive it, so call it between computations.

mod cubes;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;
use core::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Exhaustion, Limits};
use crate::FxHashMap;

pub use cubes::{Cube, PrimeCubes};

static NEXT_TAG: AtomicU32 = AtomicU32::new(1);

const TERMINAL: u32 = u32::MAX;
const FREED: u32 = u32::MAX - 1;

/// Handle to a node of a particular manager.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BddRef {
    id: u32,
    tag: u32,
}

impl BddRef {
    pub fn is_false(self) -> bool {
        self.id == 0
    }

    pub fn is_true(self) -> bool {
        self.id == 1
    }

    pub fn is_const(self) -> bool {
        self.id < 2
    }

    /// Arena index; stable until the node is collected.
    pub fn raw(self) -> u32 {
        self.id
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    And,
    Or,
    Xor,
    Implies,
    Iff,
    /// `f & !g`
    Diff,
}

impl BinOp {
    fn code(self) -> u32 {
        self as u32
    }

    fn commutative(self) -> bool {
        matches!(self, BinOp::And | BinOp::Or | BinOp::Xor | BinOp::Iff)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quant {
    Exists,
    Forall,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rename {
    /// Every variable `2p` becomes `2p + 1`.
    Prime,
    /// Every variable `2p + 1` becomes `2p`.
    Unprime,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BddError {
    #[error("BDD handle belongs to a different manager")]
    ManagerMismatch,
    #[error("variable {0} does not belong to the renamed register")]
    WrongRegister(u32),
    #[error("support variable {0} is outside the counted variable set")]
    SupportEscapes(u32),
}

const OP_NOT: u32 = 16;
const OP_ITE: u32 = 17;
const OP_EXISTS: u32 = 18;
const OP_FORALL: u32 = 19;
const OP_AND_EXISTS: u32 = 20;
const OP_PRIME: u32 = 21;
const OP_UNPRIME: u32 = 22;
const OP_RESTRICT: u32 = 23;

#[derive(Clone, Copy)]
struct Node {
    var: u32,
    lo: u32,
    hi: u32,
}

pub struct BddManager {
    tag: u32,
    nodes: Vec<Node>,
    free: Vec<u32>,
    unique: FxHashMap<(u32, u32, u32), u32>,
    cache: FxHashMap<(u32, u32, u32, u32), u32>,
    refs: FxHashMap<u32, u32>,
    names: Vec<String>,
    limits: Limits,
    exhausted: Option<Exhaustion>,
    tick: u32,
    gc_threshold: usize,
    rename_error: Option<u32>,
}

const CACHE_LIMIT: usize = 1 << 22;

impl Default for BddManager {
    fn default() -> Self {
        Self::new()
    }
}

impl BddManager {
    pub const DEFAULT_GC_THRESHOLD: usize = 1 << 20;

    pub fn new() -> Self {
        Self::with_limits(Limits::default())
    }

    pub fn with_limits(limits: Limits) -> Self {
        let t = Node { var: TERMINAL, lo: 0, hi: 0 };
        BddManager {
            tag: NEXT_TAG.fetch_add(1, Ordering::Relaxed),
            nodes: vec![t, Node { hi: 1, lo: 1, ..t }],
            free: Vec::new(),
            unique: FxHashMap::default(),
            cache: FxHashMap::default(),
            refs: FxHashMap::default(),
            names: Vec::new(),
            limits,
            exhausted: None,
            tick: 0,
            gc_threshold: Self::DEFAULT_GC_THRESHOLD,
            rename_error: None,
        }
    }

    pub fn set_limits(&mut self, limits: Limits) {
        self.limits = limits;
    }

    pub fn set_gc_threshold(&mut self, nodes: usize) {
        self.gc_threshold = nodes.max(16);
    }

    /// Appends a variable at the bottom of the order and returns its index.
    pub fn new_var(&mut self, name: &str) -> u32 {
        self.names.push(String::from(name));
        (self.names.len() - 1) as u32
    }

    pub fn var_count(&self) -> u32 {
        self.names.len() as u32
    }

    pub fn var_name(&self, v: u32) -> &str {
        &self.names[v as usize]
    }

    /// Sticky resource failure; once set every further result is meaningless.
    pub fn check(&self) -> Result<(), Exhaustion> {
        match self.exhausted {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    pub fn live_nodes(&self) -> usize {
        self.nodes.len() - self.free.len()
    }

    pub fn ff(&self) -> BddRef {
        self.wrap(0)
    }

    pub fn tt(&self) -> BddRef {
        self.wrap(1)
    }

    pub fn constant(&self, b: bool) -> BddRef {
        self.wrap(b as u32)
    }

    pub fn var(&mut self, v: u32) -> BddRef {
        assert!(v < self.var_count(), "unknown BDD variable {v}");
        let id = self.mk(v, 0, 1);
        self.wrap(id)
    }

    pub fn nvar(&mut self, v: u32) -> BddRef {
        assert!(v < self.var_count(), "unknown BDD variable {v}");
        let id = self.mk(v, 1, 0);
        self.wrap(id)
    }

    pub fn literal(&mut self, v: u32, value: bool) -> BddRef {
        if value {
            self.var(v)
        } else {
            self.nvar(v)
        }
    }

    /// Conjunction of literals.
    pub fn cube(&mut self, lits: &[(u32, bool)]) -> BddRef {
        let mut sorted: Vec<(u32, bool)> = lits.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
            return self.ff();
        }
        let mut r = 1;
        for &(v, b) in sorted.iter().rev() {
            assert!(v < self.var_count(), "unknown BDD variable {v}");
            r = if b { self.mk(v, 0, r) } else { self.mk(v, r, 0) };
        }
        self.wrap(r)
    }

    /// Positive cube used to name a set of variables for quantification.
    pub fn var_set(&mut self, vars: &[u32]) -> BddRef {
        let lits: Vec<(u32, bool)> = vars.iter().map(|&v| (v, true)).collect();
        self.cube(&lits)
    }

    fn wrap(&self, id: u32) -> BddRef {
        BddRef { id, tag: self.tag }
    }

    fn own(&self, f: BddRef) -> u32 {
        assert_eq!(f.tag, self.tag, "BDD handle belongs to a different manager");
        f.id
    }

    fn owns(&self, f: BddRef) -> Result<u32, BddError> {
        if f.tag == self.tag {
            Ok(f.id)
        } else {
            Err(BddError::ManagerMismatch)
        }
    }

    /// Top variable of `f`, or `None` for a constant.
    pub fn top_var(&self, f: BddRef) -> Option<u32> {
        let n = self.nodes[self.own(f) as usize];
        (n.var != TERMINAL).then_some(n.var)
    }

    /// (low, high) children; constants are their own children.
    pub fn children(&self, f: BddRef) -> (BddRef, BddRef) {
        let n = self.nodes[self.own(f) as usize];
        if n.var == TERMINAL {
            (f, f)
        } else {
            (self.wrap(n.lo), self.wrap(n.hi))
        }
    }

    #[inline]
    fn level(&self, id: u32) -> u32 {
        self.nodes[id as usize].var
    }

    fn mk(&mut self, var: u32, lo: u32, hi: u32) -> u32 {
        if lo == hi {
            return lo;
        }
        if self.exhausted.is_some() {
            return 0;
        }
        debug_assert!(var < self.level(lo) && var < self.level(hi));
        if let Some(&id) = self.unique.get(&(var, lo, hi)) {
            return id;
        }
        self.tick = self.tick.wrapping_add(1);
        if self.tick.is_multiple_of(1024) {
            if let Some(cb) = &self.limits.interrupt {
                if cb() {
                    self.exhausted = Some(Exhaustion::Interrupted);
                    return 0;
                }
            }
        }
        if self.live_nodes() >= self.limits.node_budget {
            self.exhausted = Some(Exhaustion::NodeBudget);
            return 0;
        }
        let node = Node { var, lo, hi };
        let id = match self.free.pop() {
            Some(id) => {
                self.nodes[id as usize] = node;
                id
            }
            None => {
                self.nodes.push(node);
                (self.nodes.len() - 1) as u32
            }
        };
        self.unique.insert((var, lo, hi), id);
        id
    }

    fn cached(&self, key: (u32, u32, u32, u32)) -> Option<u32> {
        self.cache.get(&key).copied()
    }

    fn remember(&mut self, key: (u32, u32, u32, u32), r: u32) {
        if self.exhausted.is_some() {
            return;
        }
        if self.cache.len() >= CACHE_LIMIT {
            self.cache.clear();
        }
        self.cache.insert(key, r);
    }

    fn cofactors(&self, id: u32, var: u32) -> (u32, u32) {
        let n = self.nodes[id as usize];
        if n.var == var {
            (n.lo, n.hi)
        } else {
            (id, id)
        }
    }

    // ---- boolean connectives -------------------------------------------

    pub fn not(&mut self, f: BddRef) -> BddRef {
        let f = self.own(f);
        let r = self.not_rec(f);
        self.wrap(r)
    }

    fn not_rec(&mut self, f: u32) -> u32 {
        if f < 2 {
            return 1 - f;
        }
        let key = (OP_NOT, f, 0, 0);
        if let Some(r) = self.cached(key) {
            return r;
        }
        let n = self.nodes[f as usize];
        let lo = self.not_rec(n.lo);
        let hi = self.not_rec(n.hi);
        let r = self.mk(n.var, lo, hi);
        self.remember(key, r);
        r
    }

    pub fn apply(&mut self, op: BinOp, f: BddRef, g: BddRef) -> BddRef {
        let (f, g) = (self.own(f), self.own(g));
        let r = self.apply_rec(op, f, g);
        self.wrap(r)
    }

    pub fn try_apply(&mut self, op: BinOp, f: BddRef, g: BddRef) -> Result<BddRef, BddError> {
        let (f, g) = (self.owns(f)?, self.owns(g)?);
        let r = self.apply_rec(op, f, g);
        Ok(self.wrap(r))
    }

    pub fn and(&mut self, f: BddRef, g: BddRef) -> BddRef {
        self.apply(BinOp::And, f, g)
    }

    pub fn or(&mut self, f: BddRef, g: BddRef) -> BddRef {
        self.apply(BinOp::Or, f, g)
    }

    pub fn xor(&mut self, f: BddRef, g: BddRef) -> BddRef {
        self.apply(BinOp::Xor, f, g)
    }

    pub fn iff(&mut self, f: BddRef, g: BddRef) -> BddRef {
        self.apply(BinOp::Iff, f, g)
    }

    pub fn implies(&mut self, f: BddRef, g: BddRef) -> BddRef {
        self.apply(BinOp::Implies, f, g)
    }

    pub fn diff(&mut self, f: BddRef, g: BddRef) -> BddRef {
        self.apply(BinOp::Diff, f, g)
    }

    /// True iff `f -> g` is valid.
    pub fn leq(&mut self, f: BddRef, g: BddRef) -> bool {
        self.diff(f, g).is_false()
    }

    fn apply_rec(&mut self, op: BinOp, f: u32, g: u32) -> u32 {
        let terminal = match op {
            BinOp::And => match (f, g) {
                (0, _) | (_, 0) => Some(0),
                (1, x) | (x, 1) => Some(x),
                _ if f == g => Some(f),
                _ => None,
            },
            BinOp::Or => match (f, g) {
                (1, _) | (_, 1) => Some(1),
                (0, x) | (x, 0) => Some(x),
                _ if f == g => Some(f),
                _ => None,
            },
            BinOp::Xor => match (f, g) {
                (0, x) | (x, 0) => Some(x),
                _ if f == g => Some(0),
                (1, x) | (x, 1) => Some(self.not_rec(x)),
                _ => None,
            },
            BinOp::Iff => match (f, g) {
                (1, x) | (x, 1) => Some(x),
                _ if f == g => Some(1),
                (0, x) | (x, 0) => Some(self.not_rec(x)),
                _ => None,
            },
            BinOp::Implies => match (f, g) {
                (0, _) | (_, 1) => Some(1),
                (1, x) => Some(x),
                _ if f == g => Some(1),
                (x, 0) => Some(self.not_rec(x)),
                _ => None,
            },
            BinOp::Diff => match (f, g) {
                (0, _) | (_, 1) => Some(0),
                (x, 0) => Some(x),
                _ if f == g => Some(0),
                (1, x) => Some(self.not_rec(x)),
                _ => None,
            },
        };
        if let Some(r) = terminal {
            return r;
        }
        let (f, g) = if op.commutative() && f > g { (g, f) } else { (f, g) };
        let key = (op.code(), f, g, 0);
        if let Some(r) = self.cached(key) {
            return r;
        }
        let v = self.level(f).min(self.level(g));
        let (f0, f1) = self.cofactors(f, v);
        let (g0, g1) = self.cofactors(g, v);
        let lo = self.apply_rec(op, f0, g0);
        let hi = self.apply_rec(op, f1, g1);
        let r = self.mk(v, lo, hi);
        self.remember(key, r);
        r
    }

    pub fn ite(&mut self, c: BddRef, t: BddRef, e: BddRef) -> BddRef {
        let (c, t, e) = (self.own(c), self.own(t), self.own(e));
        let r = self.ite_rec(c, t, e);
        self.wrap(r)
    }

    fn ite_rec(&mut self, c: u32, t: u32, e: u32) -> u32 {
        match (c, t, e) {
            (1, _, _) => return t,
            (0, _, _) => return e,
            _ if t == e => return t,
            (_, 1, 0) => return c,
            (_, 0, 1) => return self.not_rec(c),
            (_, 1, _) => return self.apply_rec(BinOp::Or, c, e),
            (_, 0, _) => return self.apply_rec(BinOp::Diff, e, c),
            (_, _, 0) => return self.apply_rec(BinOp::And, c, t),
            (_, _, 1) => return self.apply_rec(BinOp::Implies, c, t),
            _ => {}
        }
        let key = (OP_ITE, c, t, e);
        if let Some(r) = self.cached(key) {
            return r;
        }
        let v = self.level(c).min(self.level(t)).min(self.level(e));
        let (c0, c1) = self.cofactors(c, v);
        let (t0, t1) = self.cofactors(t, v);
        let (e0, e1) = self.cofactors(e, v);
        let lo = self.ite_rec(c0, t0, e0);
        let hi = self.ite_rec(c1, t1, e1);
        let r = self.mk(v, lo, hi);
        self.remember(key, r);
        r
    }

    pub fn and_all(&mut self, fs: impl IntoIterator<Item = BddRef>) -> BddRef {
        let mut acc = self.tt();
        for f in fs {
            acc = self.and(acc, f);
        }
        acc
    }

    pub fn or_all(&mut self, fs: impl IntoIterator<Item = BddRef>) -> BddRef {
        let mut acc = self.ff();
        for f in fs {
            acc = self.or(acc, f);
        }
        acc
    }

    // ---- quantification ------------------------------------------------

    /// Quantifies the variables of the positive cube `vars` (see [`Self::var_set`]).
    pub fn quantify(&mut self, kind: Quant, vars: BddRef, f: BddRef) -> BddRef {
        let (c, f) = (self.own(vars), self.own(f));
        let r = match kind {
            Quant::Exists => self.exists_rec(f, c),
            Quant::Forall => self.forall_rec(f, c),
        };
        self.wrap(r)
    }

    pub fn exists(&mut self, vars: BddRef, f: BddRef) -> BddRef {
        self.quantify(Quant::Exists, vars, f)
    }

    pub fn forall(&mut self, vars: BddRef, f: BddRef) -> BddRef {
        self.quantify(Quant::Forall, vars, f)
    }

    fn skip_cube(&self, mut c: u32, below: u32) -> u32 {
        while c > 1 && self.level(c) < below {
            c = self.nodes[c as usize].hi;
        }
        c
    }

    fn exists_rec(&mut self, f: u32, c: u32) -> u32 {
        if f < 2 {
            return f;
        }
        let v = self.level(f);
        let c = self.skip_cube(c, v);
        if c < 2 {
            return f;
        }
        let key = (OP_EXISTS, f, c, 0);
        if let Some(r) = self.cached(key) {
            return r;
        }
        let n = self.nodes[f as usize];
        let r = if self.level(c) == v {
            let rest = self.nodes[c as usize].hi;
            let lo = self.exists_rec(n.lo, rest);
            if lo == 1 {
                1
            } else {
                let hi = self.exists_rec(n.hi, rest);
                self.apply_rec(BinOp::Or, lo, hi)
            }
        } else {
            let lo = self.exists_rec(n.lo, c);
            let hi = self.exists_rec(n.hi, c);
            self.mk(v, lo, hi)
        };
        self.remember(key, r);
        r
    }

    fn forall_rec(&mut self, f: u32, c: u32) -> u32 {
        if f < 2 {
            return f;
        }
        let v = self.level(f);
        let c = self.skip_cube(c, v);
        if c < 2 {
            return f;
        }
        let key = (OP_FORALL, f, c, 0);
        if let Some(r) = self.cached(key) {
            return r;
        }
        let n = self.nodes[f as usize];
        let r = if self.level(c) == v {
            let rest = self.nodes[c as usize].hi;
            let lo = self.forall_rec(n.lo, rest);
            if lo == 0 {
                0
            } else {
                let hi = self.forall_rec(n.hi, rest);
                self.apply_rec(BinOp::And, lo, hi)
            }
        } else {
            let lo = self.forall_rec(n.lo, c);
            let hi = self.forall_rec(n.hi, c);
            self.mk(v, lo, hi)
        };
        self.remember(key, r);
        r
    }

    /// `exists vars. f & g` without building the conjunction.
    pub fn and_exists(&mut self, f: BddRef, g: BddRef, vars: BddRef) -> BddRef {
        let (f, g, c) = (self.own(f), self.own(g), self.own(vars));
        let r = self.and_exists_rec(f, g, c);
        self.wrap(r)
    }

    fn and_exists_rec(&mut self, f: u32, g: u32, c: u32) -> u32 {
        if f == 0 || g == 0 {
            return 0;
        }
        if f == 1 && g == 1 {
            return 1;
        }
        if f == 1 || f == g {
            return self.exists_rec(g, c);
        }
        if g == 1 {
            return self.exists_rec(f, c);
        }
        let (f, g) = if f > g { (g, f) } else { (f, g) };
        let v = self.level(f).min(self.level(g));
        let c = self.skip_cube(c, v);
        if c < 2 {
            return self.apply_rec(BinOp::And, f, g);
        }
        let key = (OP_AND_EXISTS, f, g, c);
        if let Some(r) = self.cached(key) {
            return r;
        }
        let (f0, f1) = self.cofactors(f, v);
        let (g0, g1) = self.cofactors(g, v);
        let r = if self.level(c) == v {
            let rest = self.nodes[c as usize].hi;
            let lo = self.and_exists_rec(f0, g0, rest);
            if lo == 1 {
                1
            } else {
                let hi = self.and_exists_rec(f1, g1, rest);
                self.apply_rec(BinOp::Or, lo, hi)
            }
        } else {
            let lo = self.and_exists_rec(f0, g0, c);
            let hi = self.and_exists_rec(f1, g1, c);
            self.mk(v, lo, hi)
        };
        self.remember(key, r);
        r
    }

    /// Cofactor of `f` by the literals of cube `assignment`.
    pub fn restrict(&mut self, f: BddRef, assignment: BddRef) -> BddRef {
        let (f, c) = (self.own(f), self.own(assignment));
        assert!(c != 0, "restricting by an empty assignment");
        let r = self.restrict_rec(f, c);
        self.wrap(r)
    }

    fn restrict_rec(&mut self, f: u32, c: u32) -> u32 {
        if f < 2 || c == 1 {
            return f;
        }
        let v = self.level(f);
        // drop assignment literals above f's top variable
        let mut c = c;
        while c > 1 && self.level(c) < v {
            let n = self.nodes[c as usize];
            c = if n.lo == 0 { n.hi } else { n.lo };
        }
        if c == 1 {
            return f;
        }
        let key = (OP_RESTRICT, f, c, 0);
        if let Some(r) = self.cached(key) {
            return r;
        }
        let n = self.nodes[f as usize];
        let cn = self.nodes[c as usize];
        let r = if cn.var == v {
            if cn.lo == 0 {
                self.restrict_rec(n.hi, cn.hi)
            } else {
                self.restrict_rec(n.lo, cn.lo)
            }
        } else {
            let lo = self.restrict_rec(n.lo, c);
            let hi = self.restrict_rec(n.hi, c);
            self.mk(v, lo, hi)
        };
        self.remember(key, r);
        r
    }

    // ---- renaming ------------------------------------------------------

    /// Moves `f` between the unprimed (even) and primed (odd) variables.
    pub fn rename(&mut self, f: BddRef, direction: Rename) -> Result<BddRef, BddError> {
        let f = self.owns(f)?;
        self.rename_error = None;
        let r = self.rename_rec(f, direction);
        if let Some(v) = self.rename_error.take() {
            return Err(BddError::WrongRegister(v));
        }
        Ok(self.wrap(r))
    }

    /// [`Self::rename`] with [`Rename::Prime`], panicking on a wrong register.
    pub fn prime(&mut self, f: BddRef) -> BddRef {
        self.rename(f, Rename::Prime).expect("prime of a predicate with primed variables")
    }

    pub fn unprime(&mut self, f: BddRef) -> BddRef {
        self.rename(f, Rename::Unprime).expect("unprime of a predicate with unprimed variables")
    }

    fn rename_rec(&mut self, f: u32, dir: Rename) -> u32 {
        if f < 2 || self.rename_error.is_some() {
            return f;
        }
        let op = match dir {
            Rename::Prime => OP_PRIME,
            Rename::Unprime => OP_UNPRIME,
        };
        let key = (op, f, 0, 0);
        if let Some(r) = self.cached(key) {
            return r;
        }
        let n = self.nodes[f as usize];
        let target = match dir {
            Rename::Prime if n.var.is_multiple_of(2) && n.var + 1 < self.var_count() => n.var + 1,
            Rename::Unprime if n.var % 2 == 1 => n.var - 1,
            _ => {
                self.rename_error = Some(n.var);
                return f;
            }
        };
        let lo = self.rename_rec(n.lo, dir);
        let hi = self.rename_rec(n.hi, dir);
        if self.rename_error.is_some() {
            return f;
        }
        // parity-preserving shift keeps the order, so mk is enough
        let r = self.mk(target, lo, hi);
        self.remember(key, r);
        r
    }

    // ---- inspection ----------------------------------------------------

    /// Variables `f` depends on, ascending.
    pub fn support(&self, f: BddRef) -> Vec<u32> {
        let mut seen = crate::FxHashSet::default();
        let mut vars = crate::FxHashSet::default();
        let mut stack = vec![self.own(f)];
        while let Some(id) = stack.pop() {
            if id < 2 || !seen.insert(id) {
                continue;
            }
            let n = self.nodes[id as usize];
            vars.insert(n.var);
            stack.push(n.lo);
            stack.push(n.hi);
        }
        let mut out: Vec<u32> = vars.into_iter().collect();
        out.sort_unstable();
        out
    }

    pub fn node_count(&self, f: BddRef) -> usize {
        let mut seen = crate::FxHashSet::default();
        let mut stack = vec![self.own(f)];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) || id < 2 {
                continue;
            }
            let n = self.nodes[id as usize];
            stack.push(n.lo);
            stack.push(n.hi);
        }
        seen.len()
    }

    pub fn eval(&self, f: BddRef, value: impl Fn(u32) -> bool) -> bool {
        let mut id = self.own(f);
        while id >= 2 {
            let n = self.nodes[id as usize];
            id = if value(n.var) { n.hi } else { n.lo };
        }
        id == 1
    }

    /// Number of assignments to `vars` satisfying `f`.
    pub fn count_models(&self, f: BddRef, vars: &[u32]) -> Result<BigUint, BddError> {
        let f = self.owns(f)?;
        let mut sorted = vars.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for v in self.support(self.wrap(f)) {
            if sorted.binary_search(&v).is_err() {
                return Err(BddError::SupportEscapes(v));
            }
        }
        // position of each node's variable inside `sorted`
        let pos = |mgr: &Self, id: u32| -> usize {
            if id < 2 {
                sorted.len()
            } else {
                sorted.binary_search(&mgr.level(id)).unwrap()
            }
        };
        let mut memo: FxHashMap<u32, BigUint> = FxHashMap::default();
        let mut stack = vec![(f, false)];
        while let Some((id, expanded)) = stack.pop() {
            if id < 2 || memo.contains_key(&id) {
                continue;
            }
            let n = self.nodes[id as usize];
            if !expanded {
                stack.push((id, true));
                stack.push((n.lo, false));
                stack.push((n.hi, false));
                continue;
            }
            let here = pos(self, id);
            let mut total = BigUint::zero();
            for child in [n.lo, n.hi] {
                let base = match child {
                    0 => continue,
                    1 => BigUint::one(),
                    c => memo[&c].clone(),
                };
                total += base << (pos(self, child) - here - 1);
            }
            memo.insert(id, total);
        }
        Ok(match f {
            0 => BigUint::zero(),
            1 => BigUint::one() << sorted.len(),
            _ => memo[&f].clone() << pos(self, f),
        })
    }

    /// Lexicographically smallest assignment to `vars` (false before true, in
    /// variable order) that can be extended to a model of `f`.
    pub fn pick_min(&mut self, f: BddRef, vars: &[u32]) -> Option<Vec<bool>> {
        let mut sorted = vars.to_vec();
        sorted.sort_unstable();
        let others: Vec<u32> = self.support(f).into_iter().filter(|v| sorted.binary_search(v).is_err()).collect();
        let c = self.var_set(&others);
        let g = self.exists(c, f);
        if g.is_false() {
            return None;
        }
        let mut id = g.id;
        let mut values = Vec::with_capacity(sorted.len());
        for &v in &sorted {
            let n = self.nodes[id as usize];
            if n.var == v {
                if n.lo != 0 {
                    values.push(false);
                    id = n.lo;
                } else {
                    values.push(true);
                    id = n.hi;
                }
            } else {
                values.push(false);
            }
        }
        // report in the caller's order
        Some(vars.iter().map(|v| values[sorted.binary_search(v).unwrap()]).collect())
    }

    /// Assignments to `vars` that extend to models of `f`, in the order of
    /// [`Self::pick_min`], stopping after `limit`.
    pub fn models(&mut self, f: BddRef, vars: &[u32], limit: usize) -> Vec<Vec<bool>> {
        let mut sorted = vars.to_vec();
        sorted.sort_unstable();
        let others: Vec<u32> = self.support(f).into_iter().filter(|v| sorted.binary_search(v).is_err()).collect();
        let c = self.var_set(&others);
        let g = self.exists(c, f);
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(sorted.len());
        self.models_rec(g.id, &sorted, 0, &mut current, &mut out, limit);
        let order: Vec<usize> = vars.iter().map(|v| sorted.binary_search(v).unwrap()).collect();
        out.into_iter().map(|m| order.iter().map(|&i| m[i]).collect()).collect()
    }

    fn models_rec(&self, id: u32, vars: &[u32], k: usize, cur: &mut Vec<bool>, out: &mut Vec<Vec<bool>>, limit: usize) {
        if id == 0 || out.len() >= limit {
            return;
        }
        if k == vars.len() {
            out.push(cur.clone());
            return;
        }
        let (lo, hi) = self.cofactors(id, vars[k]);
        for (child, b) in [(lo, false), (hi, true)] {
            cur.push(b);
            self.models_rec(child, vars, k + 1, cur, out, limit);
            cur.pop();
        }
    }

    /// Cube of [`Self::pick_min`].
    pub fn pick_min_cube(&mut self, f: BddRef, vars: &[u32]) -> Option<BddRef> {
        let values = self.pick_min(f, vars)?;
        let lits: Vec<(u32, bool)> = vars.iter().copied().zip(values).collect();
        Some(self.cube(&lits))
    }

    /// Graphviz rendering; solid edges are high, dashed edges are low.
    pub fn to_dot(&self, f: BddRef, title: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", title.replace('"', "'"));
        let _ = writeln!(out, "  n0 [shape=box,label=\"0\"];\n  n1 [shape=box,label=\"1\"];");
        let mut seen = crate::FxHashSet::default();
        let mut stack = vec![self.own(f)];
        let mut lines = Vec::new();
        while let Some(id) = stack.pop() {
            if id < 2 || !seen.insert(id) {
                continue;
            }
            let n = self.nodes[id as usize];
            lines.push((
                id,
                format!(
                    "  n{id} [label=\"{}\"];\n  n{id} -> n{} [style=solid];\n  n{id} -> n{} [style=dashed];",
                    self.names[n.var as usize], n.hi, n.lo
                ),
            ));
            stack.push(n.lo);
            stack.push(n.hi);
        }
        lines.sort_by_key(|(id, _)| *id);
        for (_, l) in lines {
            let _ = writeln!(out, "{l}");
        }
        out.push_str("}\n");
        out
    }

    // ---- memory --------------------------------------------------------

    /// Keeps `f` alive across collections until a matching [`Self::release`].
    pub fn retain(&mut self, f: BddRef) {
        let id = self.own(f);
        if id >= 2 {
            *self.refs.entry(id).or_insert(0) += 1;
        }
    }

    pub fn release(&mut self, f: BddRef) {
        let id = self.own(f);
        if let Some(c) = self.refs.get_mut(&id) {
            *c -= 1;
            if *c == 0 {
                self.refs.remove(&id);
            }
        }
    }

    /// Mark-and-sweep; `roots` and retained handles survive. Returns the number of freed nodes.
    pub fn collect(&mut self, roots: &[BddRef]) -> usize {
        let mut marked = vec![false; self.nodes.len()];
        marked[0] = true;
        marked[1] = true;
        let mut stack: Vec<u32> = self.refs.keys().copied().collect();
        stack.extend(roots.iter().map(|r| self.own(*r)));
        while let Some(id) = stack.pop() {
            if marked[id as usize] {
                continue;
            }
            marked[id as usize] = true;
            let n = self.nodes[id as usize];
            stack.push(n.lo);
            stack.push(n.hi);
        }
        let mut freed = 0;
        for (id, m) in marked.iter().enumerate().skip(2) {
            let n = self.nodes[id];
            if *m || n.var == FREED {
                continue;
            }
            self.unique.remove(&(n.var, n.lo, n.hi));
            self.nodes[id] = Node { var: FREED, lo: 0, hi: 0 };
            self.free.push(id as u32);
            freed += 1;
        }
        self.cache.clear();
        freed
    }

    /// Collects when the live node count passed the threshold.
    pub fn maybe_collect(&mut self, roots: &[BddRef]) -> bool {
        if self.live_nodes() < self.gc_threshold {
            return false;
        }
        self.collect(roots);
        if self.live_nodes() * 4 > self.gc_threshold * 3 {
            self.gc_threshold *= 2;
        }
        true
    }
}
