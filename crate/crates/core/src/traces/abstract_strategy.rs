use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::bdd::BddRef;
use crate::error::Gr1Error;
use crate::frontend::{BooleanSpec, VarKind};
use crate::game::{GameContext, GameOptions, SymbolicGame};

pub const DEFAULT_HORIZON: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Player {
    System,
    Environment,
}

impl Player {
    fn kind(self) -> VarKind {
        match self {
            Player::System => VarKind::Output,
            Player::Environment => VarKind::Input,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell {
    /// Boolean (0 or 1) or integer value.
    Value(u64),
    /// Depends on the other player's choices.
    Star,
    /// The opponent has already violated its safety parts.
    X,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Value(v) => write!(f, "{v}"),
            Cell::Star => f.write_str("*"),
            Cell::X => f.write_str("X"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyRow {
    pub name: String,
    pub kind: VarKind,
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractStrategy {
    pub winner: Player,
    /// Round in which the opponent's violation has happened; the last column.
    pub horizon: usize,
    /// One row per declared signal, in declaration order.
    pub rows: Vec<StrategyRow>,
}

struct Signal {
    name: String,
    kind: VarKind,
    bits: Vec<u32>,
    lo: u64,
    hi: u64,
}

fn signals(spec: &BooleanSpec) -> Vec<Signal> {
    spec.signals()
        .into_iter()
        .map(|(name, kind, bits)| {
            let (lo, hi) = match spec.ints.iter().find(|e| e.name == name) {
                Some(e) => (e.lo, e.hi),
                None => (0, 1),
            };
            Signal { name, kind, bits: bits.iter().map(|p| p.0).collect(), lo, hi }
        })
        .collect()
}

/// Finite-horizon safety game of one player with per-round constraints on
/// the winner's propositions.
struct Horizon<'a> {
    g: &'a SymbolicGame,
    winner: Player,
    n: usize,
    /// `constraint[t]`: restriction of the winner's values in round `t`.
    constraint: Vec<BddRef>,
}

impl Horizon<'_> {
    /// Next-step moves of the winner from round `t` into round `t + 1` that
    /// keep the play inside `good` (positions winning at round `t + 1`).
    fn step_moves(&self, ctx: &mut GameContext, t: usize, good: BddRef) -> BddRef {
        let g = self.g;
        let gp = ctx.mgr.prime(good);
        let c = ctx.mgr.prime(self.constraint[t + 1]);
        match self.winner {
            Player::Environment => {
                let bad = ctx.mgr.not(gp);
                let escape = ctx.mgr.and_exists(g.trans_sys, bad, g.cube_out_next);
                let forced = ctx.mgr.not(escape);
                let te = ctx.mgr.and(g.trans_env, c);
                ctx.mgr.and(te, forced)
            }
            Player::System => {
                let ts = ctx.mgr.and(g.trans_sys, c);
                ctx.mgr.and(ts, gp)
            }
        }
    }

    fn pre(&self, ctx: &mut GameContext, t: usize, good: BddRef) -> BddRef {
        let g = self.g;
        let moves = self.step_moves(ctx, t, good);
        match self.winner {
            Player::Environment => ctx.mgr.exists(g.cube_in_next, moves),
            Player::System => {
                let ok = ctx.mgr.exists(g.cube_out_next, moves);
                let bad = ctx.mgr.not(ok);
                let lose = ctx.mgr.and_exists(g.trans_env, bad, g.cube_in_next);
                ctx.mgr.not(lose)
            }
        }
    }

    /// `good[t]` for `t` in `0..=n`.
    fn good_sets(&self, ctx: &mut GameContext) -> Vec<BddRef> {
        let mut good = alloc::vec![ctx.mgr.ff(); self.n + 1];
        for t in (0..self.n).rev() {
            good[t] = self.pre(ctx, t, good[t + 1]);
        }
        good
    }

    /// Admissible starting positions for the winner, given `good[0]`.
    fn start(&self, ctx: &mut GameContext, good0: BddRef) -> BddRef {
        let g = self.g;
        let c0 = self.constraint[0];
        match self.winner {
            Player::Environment => {
                let bad = ctx.mgr.diff(g.init_sys, good0);
                let escape = ctx.mgr.exists(g.cube_out, bad);
                let ok = ctx.mgr.diff(g.init_env, escape);
                let ok = ctx.mgr.and(ok, c0);
                ctx.mgr.and(ok, g.init_sys)
            }
            Player::System => {
                let ok = ctx.mgr.and(g.init_sys, c0);
                let ok = ctx.mgr.and(ok, good0);
                ctx.mgr.and(ok, g.init_env)
            }
        }
    }

    fn wins(&self, ctx: &mut GameContext) -> bool {
        let good = self.good_sets(ctx);
        let g = self.g;
        match self.winner {
            Player::Environment => !self.start(ctx, good[0]).is_false() || {
                // no admissible system start at all
                let c0 = ctx.mgr.and(g.init_env, self.constraint[0]);
                let sys = ctx.mgr.exists(g.cube_out, g.init_sys);
                !ctx.mgr.diff(c0, sys).is_false()
            },
            Player::System => {
                let ok = ctx.mgr.and(g.init_sys, self.constraint[0]);
                let ok = ctx.mgr.and(ok, good[0]);
                let ok = ctx.mgr.exists(g.cube_out, ok);
                ctx.mgr.leq(g.init_env, ok)
            }
        }
    }
}

fn env_wins_at(ctx: &mut GameContext, g: &SymbolicGame, e: BddRef) -> bool {
    let bad = ctx.mgr.diff(g.init_sys, e);
    let escape = ctx.mgr.exists(g.cube_out, bad);
    !ctx.mgr.diff(g.init_env, escape).is_false()
}

fn sys_wins_at(ctx: &mut GameContext, g: &SymbolicGame, s: BddRef) -> bool {
    let ok = ctx.mgr.and(g.init_sys, s);
    let ok = ctx.mgr.exists(g.cube_out, ok);
    ctx.mgr.leq(g.init_env, ok)
}

/// Strategy or counter-strategy that wins on safety parts alone, as a table
/// of per-round values; `None` if neither player can force a safety
/// violation of the other.
pub fn abstract_strategy(ctx: &mut GameContext, spec: &BooleanSpec, max_horizon: usize) -> Result<Option<AbstractStrategy>, Gr1Error> {
    let g = ctx.build_game(spec, &GameOptions::strict())?;
    let r = run(ctx, spec, &g, max_horizon);
    ctx.release_game(&g);
    r
}

fn run(ctx: &mut GameContext, spec: &BooleanSpec, g: &SymbolicGame, max_horizon: usize) -> Result<Option<AbstractStrategy>, Gr1Error> {
    // attractors of both players, grown in lockstep
    let (mut e, mut s) = (ctx.mgr.ff(), ctx.mgr.ff());
    let mut n = 0;
    let winner = loop {
        if sys_wins_at(ctx, g, s) {
            break Player::System;
        }
        if env_wins_at(ctx, g, e) {
            break Player::Environment;
        }
        if n >= max_horizon {
            return Err(Gr1Error::Horizon(max_horizon));
        }
        let ep = ctx.mgr.prime(e);
        let sp = ctx.mgr.prime(s);
        let ne = ctx.epre(g, ep);
        let ns = ctx.cpre(g, sp);
        let ne = ctx.mgr.or(e, ne);
        let ns = ctx.mgr.or(s, ns);
        ctx.mgr.check()?;
        if ne == e && ns == s {
            return Ok(None);
        }
        e = ne;
        s = ns;
        n += 1;
    };

    let sigs = signals(spec);
    let tt = ctx.mgr.tt();
    let mut h = Horizon { g, winner, n, constraint: alloc::vec![tt; n + 1] };
    let mut rows: Vec<StrategyRow> =
        sigs.iter().map(|s| StrategyRow { name: s.name.clone(), kind: s.kind, cells: Vec::new() }).collect();

    for t in 0..n {
        for (k, sig) in sigs.iter().enumerate() {
            if sig.kind != winner.kind() {
                continue;
            }
            let before = h.constraint[t];
            let mut chosen = None;
            for value in sig.lo..=sig.hi {
                let lit = encode(ctx, sig, value);
                h.constraint[t] = ctx.mgr.and(before, lit);
                if h.wins(ctx) {
                    chosen = Some(value);
                    break;
                }
            }
            ctx.mgr.check()?;
            match chosen {
                Some(v) => rows[k].cells.push(Cell::Value(v)),
                None => {
                    h.constraint[t] = before;
                    rows[k].cells.push(Cell::Star);
                }
            }
        }
    }

    // opponent values along every play consistent with the table
    let good = h.good_sets(ctx);
    let mut reach = h.start(ctx, good[0]);
    let cur_all = ctx.mgr.var_set(&GameContext::cur_vars(&g.props()));
    for t in 0..n {
        for (k, sig) in sigs.iter().enumerate() {
            if sig.kind == winner.kind() {
                continue;
            }
            let cell = constant_value(ctx, reach, sig);
            rows[k].cells.push(cell);
        }
        if t + 1 < n {
            let moves = h.step_moves(ctx, t, good[t + 1]);
            let moves = match winner {
                Player::Environment => ctx.mgr.and(moves, g.trans_sys),
                Player::System => ctx.mgr.and(moves, g.trans_env),
            };
            let img = ctx.mgr.and_exists(reach, moves, cur_all);
            reach = ctx.mgr.unprime(img);
            ctx.mgr.check()?;
        }
    }
    for row in &mut rows {
        row.cells.push(Cell::X);
    }
    Ok(Some(AbstractStrategy { winner, horizon: n, rows }))
}

fn encode(ctx: &mut GameContext, sig: &Signal, value: u64) -> BddRef {
    let enc = value - sig.lo;
    let lits: Vec<(u32, bool)> =
        sig.bits.iter().enumerate().map(|(i, &b)| (GameContext::cur(b), (enc >> i) & 1 == 1)).collect();
    ctx.mgr.cube(&lits)
}

fn constant_value(ctx: &mut GameContext, reach: BddRef, sig: &Signal) -> Cell {
    let mut found = None;
    for value in sig.lo..=sig.hi {
        let lit = encode(ctx, sig, value);
        if !ctx.mgr.and(reach, lit).is_false() {
            if found.is_some() {
                return Cell::Star;
            }
            found = Some(value);
        }
    }
    found.map_or(Cell::Star, Cell::Value)
}
