//! Report analyses over a compiled specification.
//!
//! Every analysis takes a [`GameContext`] built from the specification it is
//! given and works on the strict game. Handles are released before
//! returning, except the regions handed back to the caller.

mod assumptions;
mod resilience;
mod signals;

pub use assumptions::{classify_assumptions, AssumptionVerdict, Verdict};
pub use resilience::{error_resilience, glitch_realizable, Resilience, DEFAULT_MAX_K};
pub use signals::{precommit_analysis, stuck_at_analysis, PrecommitResult, StuckAtDirection, StuckAtRow, StuckAtTable};

use alloc::string::String;
use alloc::vec::Vec;
use num_bigint::BigUint;

use crate::bdd::BddRef;
use crate::error::Gr1Error;
use crate::frontend::{BooleanSpec, PartKind};
use crate::game::{GameContext, GameOptions, Realizability, Semantics};

pub const DEFAULT_MAX_CUBES: usize = 10;

/// A conjunction of proposition literals, named for display.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedCube {
    pub literals: Vec<(String, bool)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemanticsComparison {
    pub strict: Realizability,
    pub nonstrict: Realizability,
    pub differs: bool,
}

pub fn semantics_comparison(ctx: &mut GameContext, spec: &BooleanSpec, robotics: bool) -> Result<SemanticsComparison, Gr1Error> {
    let mut verdict = |sem| -> Result<Realizability, Gr1Error> {
        let opts = GameOptions { robotics, ..GameOptions::new(sem) };
        let g = ctx.build_game(spec, &opts)?;
        let r = ctx.realizable(&g);
        ctx.release_game(&g);
        r
    };
    let strict = verdict(Semantics::Strict)?;
    let nonstrict = verdict(Semantics::NonStrict)?;
    Ok(SemanticsComparison { strict, nonstrict, differs: strict != nonstrict })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCount {
    pub total: BigUint,
    pub winning: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionStats {
    pub all: ClassCount,
    pub init_env: ClassCount,
    pub init_sys: ClassCount,
    pub init_both: ClassCount,
    pub winning_cubes: Vec<NamedCube>,
    pub losing_cubes: Vec<NamedCube>,
}

fn spec_props(ctx: &GameContext) -> Vec<u32> {
    (0..ctx.spec_prop_count() as u32).collect()
}

/// Up to `k` prime cubes of `f` over the specification's current-state
/// propositions, fewest literals first.
pub fn largest_cubes(ctx: &mut GameContext, f: BddRef, k: usize) -> Result<Vec<NamedCube>, Gr1Error> {
    let vars = GameContext::cur_vars(&spec_props(ctx));
    let mut it = ctx.mgr.prime_cubes(f, &vars).map_err(|_| Gr1Error::Precondition("cube support escapes the positions"))?;
    it.check()?;
    let mut out = Vec::new();
    for cube in it.by_ref().take(k) {
        let c = cube.to_bdd(&mut ctx.mgr);
        debug_assert!(ctx.mgr.leq(c, f));
        out.push(NamedCube {
            literals: cube.lits.iter().map(|&(v, b)| (String::from(ctx.prop_name(v / 2)), b)).collect(),
        });
    }
    Ok(out)
}

fn count(ctx: &GameContext, f: BddRef) -> Result<BigUint, Gr1Error> {
    let vars = GameContext::cur_vars(&spec_props(ctx));
    ctx.mgr.count_models(f, &vars).map_err(|_| Gr1Error::Precondition("count support escapes the positions"))
}

pub fn position_statistics(ctx: &mut GameContext, spec: &BooleanSpec, max_cubes: usize) -> Result<PositionStats, Gr1Error> {
    let g = ctx.build_game(spec, &GameOptions::strict())?;
    let region = ctx.solve(&g)?;
    let win = region.win;
    let both = ctx.mgr.and(g.init_env, g.init_sys);
    let class = |ctx: &mut GameContext, f: BddRef| -> Result<ClassCount, Gr1Error> {
        let w = ctx.mgr.and(f, win);
        Ok(ClassCount { total: count(ctx, f)?, winning: count(ctx, w)? })
    };
    let tt = ctx.mgr.tt();
    let all = class(ctx, tt)?;
    let init_env = class(ctx, g.init_env)?;
    let init_sys = class(ctx, g.init_sys)?;
    let init_both = class(ctx, both)?;
    let lose = ctx.mgr.not(win);
    let winning_cubes = largest_cubes(ctx, win, max_cubes)?;
    let losing_cubes = largest_cubes(ctx, lose, max_cubes)?;
    ctx.mgr.check()?;
    ctx.release_region(&region);
    ctx.release_game(&g);
    Ok(PositionStats { all, init_env, init_sys, init_both, winning_cubes, losing_cubes })
}

#[derive(Clone, Debug)]
pub struct Falsification {
    /// Retained in the context; release with `ctx.mgr.release`.
    pub region: BddRef,
    pub count: BigUint,
    pub cubes: Vec<NamedCube>,
}

/// Positions from which the system can force the environment to violate
/// its assumptions: the winning region once `GF FALSE` is required.
pub fn assumption_falsification(ctx: &mut GameContext, spec: &BooleanSpec, max_cubes: usize) -> Result<Falsification, Gr1Error> {
    let forced = spec.with_part(PartKind::SysLiveness, crate::expr::ff(), "FALSE");
    let g = ctx.build_game(&forced, &GameOptions::strict())?;
    let region = ctx.solve(&g)?;
    let win = region.win;
    ctx.mgr.retain(win);
    ctx.release_region(&region);
    ctx.release_game(&g);
    let count = count(ctx, win)?;
    let cubes = largest_cubes(ctx, win, max_cubes)?;
    Ok(Falsification { region: win, count, cubes })
}
