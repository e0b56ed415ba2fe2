//! The symbolic GR(1) game.
//!
//! Every proposition `p` of a [`GameContext`] owns BDD variable `2p`
//! (current value) and `2p + 1` (next value). A context starts with the
//! propositions of a [`BooleanSpec`] and can grow auxiliary propositions
//! (violation trackers, glitch counters) by name, so winning sets of
//! different game variants over the same specification live in one manager
//! and can be compared directly.

mod solve;
mod strategy;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::bdd::{BddManager, BddRef};
use crate::error::{Gr1Error, Limits};
use crate::expr::{BoolExpr, Pred};
use crate::frontend::{BooleanSpec, PartKind, PartOrigin, VarKind};
use crate::FxHashMap;

pub use solve::WinningRegion;
pub use strategy::{MealyMachine, MealyState, MealyTransition, StrategyChooser};

/// How the implication between assumptions and guarantees is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    /// Guarantees may only be violated after an assumption was violated.
    Strict,
    /// Plain (classical) implication.
    NonStrict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Realizability {
    Realizable,
    Unrealizable,
}

impl Realizability {
    pub fn is_realizable(self) -> bool {
        self == Realizability::Realizable
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Realizability::Realizable
        } else {
            Realizability::Unrealizable
        }
    }
}

/// Environment safety violations the game tolerates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Glitches {
    /// At most `budget` glitching steps over the whole play; the counter is sized for `max`.
    Budget { budget: u32, max: u32 },
    /// Any number of glitching steps.
    Unlimited,
}

#[derive(Clone, Debug)]
pub struct GameOptions {
    pub semantics: Semantics,
    /// Start condition in which every admissible output valuation must be winning.
    pub robotics: bool,
    /// Propositions whose next value is fixed before the next input is seen.
    pub precommit: Vec<u32>,
    pub glitches: Option<Glitches>,
}

impl GameOptions {
    pub fn new(semantics: Semantics) -> Self {
        GameOptions { semantics, robotics: false, precommit: Vec::new(), glitches: None }
    }

    pub fn strict() -> Self {
        Self::new(Semantics::Strict)
    }
}

/// A game bound to the manager of the [`GameContext`] that built it.
#[derive(Clone, Debug)]
pub struct SymbolicGame {
    pub inputs: Vec<u32>,
    pub outputs: Vec<u32>,
    pub init_env: BddRef,
    pub init_sys: BddRef,
    pub trans_env: BddRef,
    pub trans_sys: BddRef,
    pub live_env: Vec<BddRef>,
    pub live_sys: Vec<BddRef>,
    pub semantics: Semantics,
    pub robotics: bool,
    /// Start positions that must all be winning under the robotics reading.
    pub robotics_start: BddRef,
    pub precommit: Vec<u32>,
    pub(crate) cube_in: BddRef,
    pub(crate) cube_out: BddRef,
    pub(crate) cube_in_next: BddRef,
    pub(crate) cube_out_next: BddRef,
    pub(crate) cube_pre_next: BddRef,
    pub(crate) cube_rest_next: BddRef,
    pub(crate) cube_pre: BddRef,
    pub(crate) cube_rest: BddRef,
}

impl SymbolicGame {
    pub fn props(&self) -> Vec<u32> {
        let mut all: Vec<u32> = self.inputs.iter().chain(&self.outputs).copied().collect();
        all.sort_unstable();
        all
    }

    fn handles(&self) -> Vec<BddRef> {
        let mut h = alloc::vec![
            self.init_env,
            self.init_sys,
            self.trans_env,
            self.trans_sys,
            self.robotics_start,
            self.cube_in,
            self.cube_out,
            self.cube_in_next,
            self.cube_out_next,
            self.cube_pre_next,
            self.cube_rest_next,
            self.cube_pre,
            self.cube_rest,
        ];
        h.extend(&self.live_env);
        h.extend(&self.live_sys);
        h
    }
}

pub const ENV_VIOLATED: &str = "$env_violated";
pub const SYS_VIOLATED: &str = "$sys_violated";
pub const GLITCH_COUNTER: &str = "$glitches";

pub struct GameContext {
    pub mgr: BddManager,
    names: Vec<String>,
    kinds: Vec<VarKind>,
    spec_props: usize,
}

impl GameContext {
    pub fn new(spec: &BooleanSpec) -> Self {
        Self::with_limits(spec, Limits::default())
    }

    pub fn with_limits(spec: &BooleanSpec, limits: Limits) -> Self {
        let mut ctx = GameContext {
            mgr: BddManager::with_limits(limits),
            names: Vec::new(),
            kinds: Vec::new(),
            spec_props: spec.props.len(),
        };
        for p in &spec.props {
            ctx.add_prop(&p.name, p.kind);
        }
        ctx
    }

    fn add_prop(&mut self, name: &str, kind: VarKind) -> u32 {
        self.mgr.new_var(name);
        self.mgr.new_var(&format!("{name}'"));
        self.names.push(name.to_string());
        self.kinds.push(kind);
        (self.names.len() - 1) as u32
    }

    /// Looks up or creates an auxiliary proposition.
    pub fn aux_prop(&mut self, name: &str, kind: VarKind) -> u32 {
        match self.prop_named(name) {
            Some(p) => p,
            None => self.add_prop(name, kind),
        }
    }

    pub fn prop_named(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|p| p as u32)
    }

    pub fn prop_count(&self) -> usize {
        self.names.len()
    }

    pub fn spec_prop_count(&self) -> usize {
        self.spec_props
    }

    pub fn prop_name(&self, p: u32) -> &str {
        &self.names[p as usize]
    }

    pub fn prop_kind(&self, p: u32) -> VarKind {
        self.kinds[p as usize]
    }

    pub fn cur(p: u32) -> u32 {
        2 * p
    }

    pub fn next(p: u32) -> u32 {
        2 * p + 1
    }

    pub fn cur_vars(props: &[u32]) -> Vec<u32> {
        props.iter().map(|&p| Self::cur(p)).collect()
    }

    pub fn next_vars(props: &[u32]) -> Vec<u32> {
        props.iter().map(|&p| Self::next(p)).collect()
    }

    /// BDD of a predicate over the specification's propositions.
    pub fn pred(&mut self, p: &Pred) -> BddRef {
        let mut memo: FxHashMap<*const BoolExpr, BddRef> = FxHashMap::default();
        self.pred_rec(p, &mut memo)
    }

    fn pred_rec(&mut self, p: &Pred, memo: &mut FxHashMap<*const BoolExpr, BddRef>) -> BddRef {
        let key = alloc::sync::Arc::as_ptr(p);
        if let Some(&r) = memo.get(&key) {
            return r;
        }
        let r = match &**p {
            BoolExpr::Const(b) => self.mgr.constant(*b),
            BoolExpr::Var { prop, primed } => {
                let v = if *primed { Self::next(prop.0) } else { Self::cur(prop.0) };
                self.mgr.var(v)
            }
            BoolExpr::Not(a) => {
                let a = self.pred_rec(a, memo);
                self.mgr.not(a)
            }
            BoolExpr::And(a, b) => {
                let (a, b) = (self.pred_rec(a, memo), self.pred_rec(b, memo));
                self.mgr.and(a, b)
            }
            BoolExpr::Or(a, b) => {
                let (a, b) = (self.pred_rec(a, memo), self.pred_rec(b, memo));
                self.mgr.or(a, b)
            }
            BoolExpr::Xor(a, b) => {
                let (a, b) = (self.pred_rec(a, memo), self.pred_rec(b, memo));
                self.mgr.xor(a, b)
            }
            BoolExpr::Iff(a, b) => {
                let (a, b) = (self.pred_rec(a, memo), self.pred_rec(b, memo));
                self.mgr.iff(a, b)
            }
        };
        memo.insert(key, r);
        r
    }

    /// Cube fixing the given propositions (current copy) to `values`.
    pub fn valuation(&mut self, props: &[u32], values: &[bool], primed: bool) -> BddRef {
        let lits: Vec<(u32, bool)> = props
            .iter()
            .zip(values)
            .map(|(&p, &b)| (if primed { Self::next(p) } else { Self::cur(p) }, b))
            .collect();
        self.mgr.cube(&lits)
    }

    fn conj_parts(&mut self, spec: &BooleanSpec, kind: PartKind) -> BddRef {
        let mut acc = self.mgr.tt();
        for part in spec.parts(kind) {
            let b = self.pred(&part.pred);
            acc = self.mgr.and(acc, b);
        }
        acc
    }

    fn live_parts(&mut self, spec: &BooleanSpec, kind: PartKind) -> Vec<BddRef> {
        let mut out = Vec::new();
        for part in spec.parts(kind) {
            out.push(self.pred(&part.pred));
        }
        if out.is_empty() {
            out.push(self.mgr.tt());
        }
        out
    }

    /// Builds the game of `spec` (which must declare the same propositions this context was created with).
    pub fn build_game(&mut self, spec: &BooleanSpec, opts: &GameOptions) -> Result<SymbolicGame, Gr1Error> {
        if spec.props.len() != self.spec_props
            || spec.props.iter().enumerate().any(|(i, p)| p.name != self.names[i])
        {
            return Err(Gr1Error::Precondition("specification does not match the game context"));
        }
        let mut inputs: Vec<u32> = spec.inputs().iter().map(|p| p.0).collect();
        let mut outputs: Vec<u32> = spec.outputs().iter().map(|p| p.0).collect();

        let mut init_env = self.conj_parts(spec, PartKind::EnvInit);
        let mut init_sys = self.conj_parts(spec, PartKind::SysInit);
        let mut trans_env = self.conj_parts(spec, PartKind::EnvTrans);
        let mut trans_sys = self.conj_parts(spec, PartKind::SysTrans);
        let mut live_env = self.live_parts(spec, PartKind::EnvLiveness);
        let mut live_sys = self.live_parts(spec, PartKind::SysLiveness);

        if let Some(gl) = opts.glitches {
            let mut normal = self.mgr.tt();
            let mut fixed = self.mgr.tt();
            let mut soft = Vec::new();
            for part in spec.parts(PartKind::EnvTrans) {
                let b = self.pred(&part.pred);
                if part.origin == PartOrigin::RangeConstraint {
                    fixed = self.mgr.and(fixed, b);
                } else {
                    soft.push(b);
                }
                normal = self.mgr.and(normal, b);
            }
            // exactly one glitchable part violated, everything else intact
            let mut one = self.mgr.ff();
            for i in 0..soft.len() {
                let mut t = self.mgr.not(soft[i]);
                for (l, &s) in soft.iter().enumerate() {
                    if l != i {
                        t = self.mgr.and(t, s);
                    }
                }
                one = self.mgr.or(one, t);
            }
            let glitch = self.mgr.and(one, fixed);
            match gl {
                Glitches::Unlimited => trans_env = self.mgr.or(normal, glitch),
                Glitches::Budget { budget, max } => {
                    let width = 32 - max.leading_zeros();
                    let bits: Vec<u32> = (0..width)
                        .map(|b| self.aux_prop(&format!("{GLITCH_COUNTER}@{b}"), VarKind::Output))
                        .collect();
                    let below = self.counter_below(&bits, budget);
                    let allowed = self.mgr.and(below, glitch);
                    trans_env = self.mgr.or(normal, allowed);
                    // c' = c + (step was not normal)
                    let mut carry = self.mgr.not(normal);
                    let mut update = self.mgr.tt();
                    for &b in &bits {
                        let c = self.mgr.var(Self::cur(b));
                        let cn = self.mgr.var(Self::next(b));
                        let sum = self.mgr.xor(c, carry);
                        let eq = self.mgr.iff(cn, sum);
                        update = self.mgr.and(update, eq);
                        carry = self.mgr.and(c, carry);
                    }
                    trans_sys = self.mgr.and(trans_sys, update);
                    for &b in &bits {
                        let z = self.mgr.nvar(Self::cur(b));
                        init_sys = self.mgr.and(init_sys, z);
                    }
                    outputs.extend(&bits);
                }
            }
        }

        let mut robotics_start = self.mgr.and(init_env, init_sys);
        if opts.semantics == Semantics::NonStrict {
            let ev = self.aux_prop(ENV_VIOLATED, VarKind::Output);
            let sv = self.aux_prop(SYS_VIOLATED, VarKind::Output);
            let (ev0, ev1) = (self.mgr.var(Self::cur(ev)), self.mgr.var(Self::next(ev)));
            let (sv0, sv1) = (self.mgr.var(Self::cur(sv)), self.mgr.var(Self::next(sv)));
            let bad_env = self.mgr.not(trans_env);
            let bad_sys = self.mgr.not(trans_sys);
            let ev_next = self.mgr.or(ev0, bad_env);
            let sv_next = self.mgr.or(sv0, bad_sys);
            let t1 = self.mgr.iff(ev1, ev_next);
            let t2 = self.mgr.iff(sv1, sv_next);
            trans_sys = self.mgr.and(t1, t2);
            trans_env = self.mgr.tt();
            let nie = self.mgr.not(init_env);
            let nis = self.mgr.not(init_sys);
            let i1 = self.mgr.iff(ev0, nie);
            let i2 = self.mgr.iff(sv0, nis);
            init_sys = self.mgr.and(i1, i2);
            init_env = self.mgr.tt();
            let nev1 = self.mgr.not(ev1);
            let nsv1 = self.mgr.not(sv1);
            for a in live_env.iter_mut() {
                *a = self.mgr.and(*a, nev1);
            }
            for g in live_sys.iter_mut() {
                *g = self.mgr.and(*g, nsv1);
            }
            let nev0 = self.mgr.not(ev0);
            let nsv0 = self.mgr.not(sv0);
            robotics_start = self.mgr.and(robotics_start, nev0);
            robotics_start = self.mgr.and(robotics_start, nsv0);
            outputs.push(ev);
            outputs.push(sv);
        }
        inputs.sort_unstable();
        outputs.sort_unstable();

        let pre: Vec<u32> = opts.precommit.clone();
        if pre.iter().any(|p| !outputs.contains(p)) {
            return Err(Gr1Error::Precondition("only outputs can be precommitted"));
        }
        let rest: Vec<u32> = outputs.iter().copied().filter(|p| !pre.contains(p)).collect();
        let cube_in = self.mgr.var_set(&Self::cur_vars(&inputs));
        let cube_out = self.mgr.var_set(&Self::cur_vars(&outputs));
        let cube_in_next = self.mgr.var_set(&Self::next_vars(&inputs));
        let cube_out_next = self.mgr.var_set(&Self::next_vars(&outputs));
        let cube_pre_next = self.mgr.var_set(&Self::next_vars(&pre));
        let cube_rest_next = self.mgr.var_set(&Self::next_vars(&rest));
        let cube_pre = self.mgr.var_set(&Self::cur_vars(&pre));
        let cube_rest = self.mgr.var_set(&Self::cur_vars(&rest));
        let game = SymbolicGame {
            inputs,
            outputs,
            init_env,
            init_sys,
            trans_env,
            trans_sys,
            live_env,
            live_sys,
            semantics: opts.semantics,
            robotics: opts.robotics,
            robotics_start,
            precommit: pre,
            cube_in,
            cube_out,
            cube_in_next,
            cube_out_next,
            cube_pre_next,
            cube_rest_next,
            cube_pre,
            cube_rest,
        };
        self.mgr.check()?;
        for h in game.handles() {
            self.mgr.retain(h);
        }
        Ok(game)
    }

    /// Drops the collection roots held for `game`.
    pub fn release_game(&mut self, game: &SymbolicGame) {
        for h in game.handles() {
            self.mgr.release(h);
        }
    }

    fn counter_below(&mut self, bits: &[u32], bound: u32) -> BddRef {
        let mut acc = self.mgr.ff();
        for v in 0..bound {
            let lits: Vec<(u32, bool)> =
                bits.iter().enumerate().map(|(i, &b)| (Self::cur(b), (v >> i) & 1 == 1)).collect();
            let c = self.mgr.cube(&lits);
            acc = self.mgr.or(acc, c);
        }
        acc
    }

    /// Positions from which the system can force the next transition into `target`
    /// (a predicate over current and next propositions).
    pub fn cpre(&mut self, g: &SymbolicGame, target: BddRef) -> BddRef {
        let m = &mut self.mgr;
        if g.precommit.is_empty() {
            let inner = m.and_exists(g.trans_sys, target, g.cube_out_next);
            let bad = m.not(inner);
            let lose = m.and_exists(g.trans_env, bad, g.cube_in_next);
            m.not(lose)
        } else {
            let inner = m.and_exists(g.trans_sys, target, g.cube_rest_next);
            let bad = m.not(inner);
            let lose = m.and_exists(g.trans_env, bad, g.cube_in_next);
            let good = m.not(lose);
            m.exists(g.cube_pre_next, good)
        }
    }

    /// Positions from which the environment can force the next transition into
    /// `target` while respecting its own safety.
    pub fn epre(&mut self, g: &SymbolicGame, target: BddRef) -> BddRef {
        let m = &mut self.mgr;
        let bad = m.not(target);
        let escape = m.and_exists(g.trans_sys, bad, g.cube_out_next);
        let forced = m.not(escape);
        m.and_exists(g.trans_env, forced, g.cube_in_next)
    }

    /// The primed copy of a position set.
    pub fn prime(&mut self, f: BddRef) -> BddRef {
        self.mgr.prime(f)
    }
}
