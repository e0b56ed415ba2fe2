//! Explanatory traces: a nominal run of a realizable specification and
//! abstract strategies for games decided by their safety parts.

mod abstract_strategy;

pub use abstract_strategy::{abstract_strategy, AbstractStrategy, Cell, Player, StrategyRow, DEFAULT_HORIZON};

use alloc::string::String;
use alloc::vec::Vec;

use crate::bdd::BddRef;
use crate::error::Gr1Error;
use crate::frontend::BooleanSpec;
use crate::game::{GameContext, GameOptions, SymbolicGame};
use crate::FxHashMap;

pub const DEFAULT_MAX_TRACE_STEPS: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    /// Values of all propositions, indexed by proposition.
    pub position: Vec<bool>,
    /// Liveness assumption the environment is working towards.
    pub env_goal: usize,
    /// Liveness guarantee the system is working towards.
    pub sys_goal: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedTrace {
    pub names: Vec<String>,
    pub steps: Vec<TraceStep>,
    /// First step of the repeated cycle; `None` if the step bound was hit first.
    pub lasso_start: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NominalTrace {
    Trace(AnnotatedTrace),
    /// No position satisfies both initialization parts and is winning.
    NoInitialPosition,
    /// From every admissible start the system can keep the environment
    /// from meeting its liveness assumptions.
    EnvironmentCannotWin,
}

/// Generalized Büchi game of the environment over the liveness assumptions.
struct EnvBuchi {
    win: BddRef,
    /// `layers[i][r]`: positions from which assumption `i` is met within `r + 1` steps.
    layers: Vec<Vec<BddRef>>,
}

impl EnvBuchi {
    fn handles(&self) -> Vec<BddRef> {
        let mut h = alloc::vec![self.win];
        self.layers.iter().for_each(|l| h.extend(l));
        h
    }
}

fn env_buchi(ctx: &mut GameContext, g: &SymbolicGame, keep: &[BddRef]) -> Result<EnvBuchi, Gr1Error> {
    let mut z = ctx.mgr.tt();
    loop {
        let zp = ctx.mgr.prime(z);
        let mut next = ctx.mgr.tt();
        let mut layers = Vec::new();
        for &a in &g.live_env {
            let goal = ctx.mgr.and(a, zp);
            let mut y = ctx.mgr.ff();
            let mut ys = Vec::new();
            loop {
                let yp = ctx.mgr.prime(y);
                let target = ctx.mgr.or(goal, yp);
                let pre = ctx.epre(g, target);
                let ny = ctx.mgr.or(y, pre);
                ctx.mgr.check()?;
                if ny == y {
                    break;
                }
                y = ny;
                ys.push(y);
                let mut roots = alloc::vec![z, zp, goal, y, next];
                roots.extend(keep);
                roots.extend(&ys);
                layers.iter().for_each(|l: &Vec<BddRef>| roots.extend(l));
                ctx.mgr.maybe_collect(&roots);
            }
            next = ctx.mgr.and(next, y);
            layers.push(ys);
        }
        if next == z {
            let b = EnvBuchi { win: z, layers };
            for h in b.handles() {
                ctx.mgr.retain(h);
            }
            return Ok(b);
        }
        z = next;
    }
}

/// A run in which the environment pursues its liveness assumptions and the
/// system answers with its extracted strategy, until a state repeats.
pub fn nominal_trace(ctx: &mut GameContext, spec: &BooleanSpec, max_steps: usize) -> Result<NominalTrace, Gr1Error> {
    let g = ctx.build_game(spec, &GameOptions::strict())?;
    let region = match ctx.solve(&g) {
        Ok(r) => r,
        Err(e) => {
            ctx.release_game(&g);
            return Err(e);
        }
    };
    let r = (|| {
        if !ctx.realizability(&g, &region)?.is_realizable() {
            return Err(Gr1Error::Precondition("a nominal trace needs a realizable specification"));
        }
        let buchi = env_buchi(ctx, &g, &[])?;
        let chooser = ctx.strategy_chooser(&g, &region);
        let r = run_trace(ctx, &g, &region.win, &buchi, &chooser, max_steps);
        ctx.release_chooser(&chooser);
        for h in buchi.handles() {
            ctx.mgr.release(h);
        }
        r
    })();
    ctx.release_region(&region);
    ctx.release_game(&g);
    r
}

fn run_trace(
    ctx: &mut GameContext,
    g: &SymbolicGame,
    win: &BddRef,
    buchi: &EnvBuchi,
    chooser: &crate::game::StrategyChooser,
    max_steps: usize,
) -> Result<NominalTrace, Gr1Error> {
    let props = g.props();
    let cur = GameContext::cur_vars(&props);
    let in_next = GameContext::next_vars(&g.inputs);
    let start = ctx.mgr.and(g.init_env, g.init_sys);
    let start = ctx.mgr.and(start, *win);
    if start.is_false() {
        return Ok(NominalTrace::NoInitialPosition);
    }
    let start = ctx.mgr.and(start, buchi.win);
    let Some(mut pos) = ctx.mgr.pick_min(start, &cur) else {
        return Ok(NominalTrace::EnvironmentCannotWin);
    };
    let idx = |p: u32| props.binary_search(&p).unwrap();
    let (mut ig, mut jg) = (0usize, 0usize);
    let mut seen: FxHashMap<(Vec<bool>, usize, usize), usize> = FxHashMap::default();
    let mut steps = Vec::new();
    let mut lasso_start = None;
    loop {
        if let Some(&k) = seen.get(&(pos.clone(), ig, jg)) {
            lasso_start = Some(k);
            break;
        }
        if steps.len() >= max_steps {
            break;
        }
        seen.insert((pos.clone(), ig, jg), steps.len());
        steps.push(TraceStep { position: pos.clone(), env_goal: ig, sys_goal: jg });

        let at = |v: u32| v.is_multiple_of(2) && pos[idx(v / 2)];
        let rank = buchi.layers[ig].iter().position(|&l| ctx.mgr.eval(l, at)).expect("position in the environment's region");
        let wp = ctx.mgr.prime(buchi.win);
        let mut target = ctx.mgr.and(g.live_env[ig], wp);
        if rank > 0 {
            let closer = ctx.mgr.prime(buchi.layers[ig][rank - 1]);
            target = ctx.mgr.or(target, closer);
        }
        let here = ctx.valuation(&props, &pos, false);
        let miss = ctx.mgr.not(target);
        let escape = ctx.mgr.and_exists(g.trans_sys, miss, g.cube_out_next);
        let forced = ctx.mgr.not(escape);
        let moves = ctx.mgr.and(g.trans_env, forced);
        let moves = ctx.mgr.restrict(moves, here);
        let x = ctx.mgr.pick_min(moves, &in_next).expect("environment move");
        let (next, next_goal) = chooser.step(ctx, &pos, jg, &x).expect("system move");
        let met = {
            let a = g.live_env[ig];
            ctx.mgr.eval(a, |v| if v % 2 == 0 { pos[idx(v / 2)] } else { next[idx(v / 2)] })
        };
        if met {
            ig = (ig + 1) % g.live_env.len();
        }
        jg = next_goal;
        pos = next;
        ctx.mgr.check()?;
    }
    let names = props.iter().map(|&p| String::from(ctx.prop_name(p))).collect();
    Ok(NominalTrace::Trace(AnnotatedTrace { names, steps, lasso_start }))
}
