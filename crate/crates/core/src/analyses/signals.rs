use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Gr1Error;
use crate::expr;
use crate::frontend::{BooleanSpec, PartKind, VarKind};
use crate::game::{GameContext, GameOptions, Realizability};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecommitResult {
    /// Output signals in declaration order, with whether each alone can be
    /// chosen before the step's inputs are known.
    pub per_output: Vec<(String, bool)>,
    /// Greedy jointly precommittable set, in declaration order.
    pub maximal_set: Vec<String>,
}

fn precommit_realizable(ctx: &mut GameContext, spec: &BooleanSpec, props: &[u32]) -> Result<bool, Gr1Error> {
    let opts = GameOptions { precommit: props.to_vec(), ..GameOptions::strict() };
    let g = ctx.build_game(spec, &opts)?;
    let r = ctx.realizable(&g);
    ctx.release_game(&g);
    Ok(r?.is_realizable())
}

pub fn precommit_analysis(ctx: &mut GameContext, spec: &BooleanSpec) -> Result<PrecommitResult, Gr1Error> {
    if !precommit_realizable(ctx, spec, &[])? {
        return Err(Gr1Error::Precondition("precommitment analysis needs a realizable specification"));
    }
    let outputs: Vec<(String, Vec<u32>)> = spec
        .signals()
        .into_iter()
        .filter(|s| s.1 == VarKind::Output)
        .map(|(name, _, bits)| (name, bits.iter().map(|p| p.0).collect()))
        .collect();
    let mut per_output = Vec::new();
    for (name, bits) in &outputs {
        per_output.push((name.clone(), precommit_realizable(ctx, spec, bits)?));
    }
    let mut joint: Vec<u32> = Vec::new();
    let mut maximal_set = Vec::new();
    for ((name, bits), (_, alone)) in outputs.iter().zip(&per_output) {
        if !alone {
            continue;
        }
        let mut trial = joint.clone();
        trial.extend(bits);
        if precommit_realizable(ctx, spec, &trial)? {
            joint = trial;
            maximal_set.push(name.clone());
        }
    }
    Ok(PrecommitResult { per_output, maximal_set })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StuckAtDirection {
    /// The specification is realizable; outputs are stuck as guarantees.
    Outputs,
    /// The specification is unrealizable; inputs are stuck as assumptions.
    Inputs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StuckAtRow {
    pub prop: String,
    pub value: bool,
    pub realizability: Realizability,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StuckAtTable {
    pub direction: StuckAtDirection,
    pub rows: Vec<StuckAtRow>,
}

fn verdict(ctx: &mut GameContext, spec: &BooleanSpec) -> Result<Realizability, Gr1Error> {
    let g = ctx.build_game(spec, &GameOptions::strict())?;
    let r = ctx.realizable(&g);
    ctx.release_game(&g);
    r
}

/// Fixes each proposition of one side to a constant, from the first
/// position on, and reports the resulting realizability.
pub fn stuck_at_analysis(ctx: &mut GameContext, spec: &BooleanSpec) -> Result<StuckAtTable, Gr1Error> {
    let (direction, kind, init, trans) = if verdict(ctx, spec)?.is_realizable() {
        (StuckAtDirection::Outputs, VarKind::Output, PartKind::SysInit, PartKind::SysTrans)
    } else {
        (StuckAtDirection::Inputs, VarKind::Input, PartKind::EnvInit, PartKind::EnvTrans)
    };
    let mut rows = Vec::new();
    for p in spec.props_of(kind) {
        let name = &spec.props[p.index()].name;
        for value in [false, true] {
            let now = expr::iff(&expr::var(p, false), &expr::constant(value));
            let next = expr::iff(&expr::var(p, true), &expr::constant(value));
            let lit = if value { "1" } else { "0" };
            let mut stuck = spec.with_part(init, now, &format!("{name} = {lit}"));
            stuck = stuck.with_part(trans, next, &format!("X({name}) = {lit}"));
            rows.push(StuckAtRow { prop: name.clone(), value, realizability: verdict(ctx, &stuck)? });
        }
    }
    Ok(StuckAtTable { direction, rows })
}
