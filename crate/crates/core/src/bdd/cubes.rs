//! Prime implicant enumeration through the meta-product representation.
//!
//! A set of cubes over variables `x_0..x_{n-1}` is stored as a BDD over pairs
//! `(o_i, s_i)` in a private manager: `o_i` says whether `x_i` occurs in the
//! cube and `s_i` gives its sign. Absent variables are normalized to
//! `s_i = 0`, so every cube has exactly one encoding.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{BddError, BddManager, BddRef, BinOp};
use crate::FxHashMap;

/// A partial assignment; unmentioned variables are don't-cares.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    /// (variable, value), ascending by variable.
    pub lits: Vec<(u32, bool)>,
}

impl Cube {
    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn to_bdd(&self, mgr: &mut BddManager) -> BddRef {
        mgr.cube(&self.lits)
    }

    /// True if every model of `self` is a model of `other` (other has a subset of the literals).
    pub fn within(&self, other: &Cube) -> bool {
        other.lits.iter().all(|l| self.lits.contains(l))
    }
}

struct Builder<'a> {
    main: &'a mut BddManager,
    meta: BddManager,
    vars: &'a [u32],
    memo: FxHashMap<(u32, usize), u32>,
    blanks: Vec<u32>,
}

impl Builder<'_> {
    fn o(k: usize) -> u32 {
        2 * k as u32
    }

    fn s(k: usize) -> u32 {
        2 * k as u32 + 1
    }

    fn primes(&mut self, f: u32, k: usize) -> u32 {
        match f {
            0 => return 0,
            1 => return self.blanks[k],
            _ => {}
        }
        if let Some(&r) = self.memo.get(&(f, k)) {
            return r;
        }
        let v = self.vars[k];
        let r = if self.main.level(f) != v {
            let rest = self.primes(f, k + 1);
            let s = self.meta.mk(Self::s(k), rest, 0);
            self.meta.mk(Self::o(k), s, 0)
        } else {
            let n = self.main.nodes[f as usize];
            let both = self.main.apply_rec(BinOp::And, n.lo, n.hi);
            let p = self.primes(both, k + 1);
            let p0 = self.primes(n.lo, k + 1);
            let p1 = self.primes(n.hi, k + 1);
            let neg = self.meta.apply_rec(BinOp::Diff, p0, p);
            let pos = self.meta.apply_rec(BinOp::Diff, p1, p);
            let absent = self.meta.mk(Self::s(k), p, 0);
            let present = self.meta.mk(Self::s(k), neg, pos);
            self.meta.mk(Self::o(k), absent, present)
        };
        self.memo.insert((f, k), r);
        r
    }
}

impl BddManager {
    /// Prime implicants of `f` over `vars`, fewest literals first.
    pub fn prime_cubes(&mut self, f: BddRef, vars: &[u32]) -> Result<PrimeCubes, BddError> {
        let f = self.owns(f)?;
        let mut sorted = vars.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for v in self.support(self.wrap(f)) {
            if sorted.binary_search(&v).is_err() {
                return Err(BddError::SupportEscapes(v));
            }
        }
        let n = sorted.len();
        let mut meta = BddManager::with_limits(self.limits.clone());
        for &v in &sorted {
            let name = self.var_name(v);
            meta.new_var(&format!("o:{name}"));
            meta.new_var(&format!("s:{name}"));
        }
        let mut blanks = vec![0u32; n + 1];
        blanks[n] = 1;
        for k in (0..n).rev() {
            let s = meta.mk(Builder::s(k), blanks[k + 1], 0);
            blanks[k] = meta.mk(Builder::o(k), s, 0);
        }
        let mut b = Builder { main: self, meta, vars: &sorted, memo: FxHashMap::default(), blanks };
        let root = b.primes(f, 0);
        let meta = b.meta;
        Ok(PrimeCubes::new(meta, root, sorted))
    }
}

struct Frame {
    node: u32,
    pair: usize,
    lits: Vec<(u32, bool)>,
}

/// Lazy enumeration produced by [`BddManager::prime_cubes`].
pub struct PrimeCubes {
    meta: BddManager,
    root: u32,
    vars: Vec<u32>,
    k: usize,
    stack: Vec<Frame>,
    bounds: FxHashMap<u32, (i64, i64)>,
}

const NONE: i64 = i64::MIN / 4;

impl PrimeCubes {
    fn new(meta: BddManager, root: u32, vars: Vec<u32>) -> Self {
        let mut it = PrimeCubes { meta, root, vars, k: 0, stack: Vec::new(), bounds: FxHashMap::default() };
        it.restart();
        it
    }

    /// Exhaustion of the private meta manager during construction.
    pub fn check(&self) -> Result<(), crate::Exhaustion> {
        self.meta.check()
    }

    fn level(&self, id: u32) -> u32 {
        if id < 2 {
            2 * self.vars.len() as u32
        } else {
            self.meta.level(id)
        }
    }

    /// Number of occurrence levels in `[from, to)`.
    fn gap(from: u32, to: u32) -> i64 {
        to.div_ceil(2) as i64 - from.div_ceil(2) as i64
    }

    /// (fewest, most) literals over paths from `id`, not counting skipped levels above it.
    fn bounds(&mut self, id: u32) -> (i64, i64) {
        match id {
            0 => return (i64::MAX / 4, NONE),
            1 => return (0, 0),
            _ => {}
        }
        if let Some(&b) = self.bounds.get(&id) {
            return b;
        }
        let n = self.meta.nodes[id as usize];
        let (lmin, lmax) = self.bounds(n.lo);
        let (hmin, hmax) = self.bounds(n.hi);
        let lmax = lmax + Self::gap(n.var + 1, self.level(n.lo));
        let hmax = hmax + Self::gap(n.var + 1, self.level(n.hi));
        let b = if n.var.is_multiple_of(2) {
            (lmin.min(hmin + 1), lmax.max(hmax + 1))
        } else {
            (lmin.min(hmin), lmax.max(hmax))
        };
        self.bounds.insert(id, b);
        b
    }

    fn fits(&mut self, node: u32, pair: usize, used: usize) -> bool {
        if node == 0 {
            return false;
        }
        let (lo, hi) = self.bounds(node);
        let hi = hi + Self::gap(2 * pair as u32, self.level(node));
        let need = self.k as i64 - used as i64;
        lo <= need && need <= hi
    }

    fn restart(&mut self) {
        if self.fits(self.root, 0, 0) {
            self.stack.push(Frame { node: self.root, pair: 0, lits: Vec::new() });
        }
    }

    fn cof(&self, id: u32, var: u32) -> (u32, u32) {
        if id >= 2 && self.meta.level(id) == var {
            let n = self.meta.nodes[id as usize];
            (n.lo, n.hi)
        } else {
            (id, id)
        }
    }
}

impl Iterator for PrimeCubes {
    type Item = Cube;

    fn next(&mut self) -> Option<Cube> {
        loop {
            let Some(frame) = self.stack.pop() else {
                if self.root == 0 || self.k >= self.vars.len() {
                    return None;
                }
                self.k += 1;
                self.restart();
                continue;
            };
            let i = frame.pair;
            if i == self.vars.len() {
                if frame.node == 1 && frame.lits.len() == self.k {
                    return Some(Cube { lits: frame.lits });
                }
                continue;
            }
            let (o0, o1) = self.cof(frame.node, 2 * i as u32);
            let (absent, _) = self.cof(o0, 2 * i as u32 + 1);
            let (neg, pos) = self.cof(o1, 2 * i as u32 + 1);
            let used = frame.lits.len();
            let v = self.vars[i];
            for (child, lit) in [(pos, Some(true)), (neg, Some(false)), (absent, None)] {
                let extra = lit.is_some() as usize;
                if !self.fits(child, i + 1, used + extra) {
                    continue;
                }
                let mut lits = frame.lits.clone();
                if let Some(b) = lit {
                    lits.push((v, b));
                }
                self.stack.push(Frame { node: child, pair: i + 1, lits });
            }
        }
    }
}
