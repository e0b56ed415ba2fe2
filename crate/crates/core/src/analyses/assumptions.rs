use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Gr1Error;
use crate::frontend::{BooleanSpec, PartKind, PartOrigin};
use crate::game::{GameContext, GameOptions, MealyMachine, WinningRegion};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Superfluous,
    Useful,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssumptionVerdict {
    pub kind: PartKind,
    pub index: usize,
    pub text: String,
    /// Removing the assumption changes realizability.
    pub test_a: bool,
    /// The assumption makes more positions winning.
    pub test_b: bool,
    /// The assumption shortens the reactive distance to some goal somewhere.
    pub test_c: bool,
    /// As `test_c`, restricted to states reachable in the extracted strategy.
    pub test_d: bool,
    /// Goals for which `test_c` (resp. `test_d`) found a shorter distance.
    pub c_goals: Vec<usize>,
    pub d_goals: Vec<usize>,
    pub verdict: Verdict,
}

/// Tests every user-written assumption of a realizable specification for
/// superfluity.
pub fn classify_assumptions(ctx: &mut GameContext, spec: &BooleanSpec) -> Result<Vec<AssumptionVerdict>, Gr1Error> {
    let g = ctx.build_game(spec, &GameOptions::strict())?;
    let full = ctx.solve(&g)?;
    let realizable = ctx.realizability(&g, &full)?;
    if !realizable.is_realizable() {
        ctx.release_region(&full);
        ctx.release_game(&g);
        return Err(Gr1Error::Precondition("assumption classification needs a realizable specification"));
    }
    let machine = ctx.extract_strategy(&g, &full);
    ctx.release_game(&g);
    let machine = match machine {
        Ok(m) => m,
        Err(e) => {
            ctx.release_region(&full);
            return Err(e);
        }
    };

    let mut out = Vec::new();
    let mut result = Ok(());
    for kind in [PartKind::EnvInit, PartKind::EnvTrans, PartKind::EnvLiveness] {
        for (pos, part) in spec.parts(kind).iter().enumerate() {
            if part.origin != PartOrigin::User {
                continue;
            }
            match compare(ctx, spec.without_part(kind, pos), &full, &machine) {
                Ok((test_a, test_b, c_goals, d_goals)) => {
                    let (test_c, test_d) = (!c_goals.is_empty(), !d_goals.is_empty());
                    let useful = test_a || test_b || test_c || test_d;
                    out.push(AssumptionVerdict {
                        kind,
                        index: part.index,
                        text: part.text.clone(),
                        test_a,
                        test_b,
                        test_c,
                        test_d,
                        c_goals,
                        d_goals,
                        verdict: if useful { Verdict::Useful } else { Verdict::Superfluous },
                    });
                }
                Err(e) => {
                    result = Err(e);
                    break;
                }
            }
        }
    }
    ctx.release_region(&full);
    result.map(|_| out)
}

type Comparison = (bool, bool, Vec<usize>, Vec<usize>);

fn compare(ctx: &mut GameContext, reduced: BooleanSpec, full: &WinningRegion, machine: &MealyMachine) -> Result<Comparison, Gr1Error> {
    let g = ctx.build_game(&reduced, &GameOptions::strict())?;
    let region = match ctx.solve(&g) {
        Ok(r) => r,
        Err(e) => {
            ctx.release_game(&g);
            return Err(e);
        }
    };
    let r = (|| {
        let test_a = !ctx.realizability(&g, &region)?.is_realizable();
        let test_b = full.win != region.win;
        let both = region.win;

        let mut c_goals = Vec::new();
        for j in 0..full.strata.len() {
            let without = &region.strata[j];
            let hit = full.strata[j].iter().enumerate().any(|(d, &s)| {
                let other = without.get(d).or(without.last()).copied().unwrap_or(ctx.mgr.ff());
                let diff = ctx.mgr.diff(s, other);
                !ctx.mgr.and(diff, both).is_false()
            });
            if hit {
                c_goals.push(j);
            }
        }
        ctx.mgr.check()?;

        let mut d_goals = Vec::new();
        for st in &machine.states {
            if d_goals.contains(&st.goal) {
                continue;
            }
            let at = |p: u32| st.position[p as usize];
            let (Some(df), Some(dw)) =
                (ctx.reactive_distance(full, at, st.goal), ctx.reactive_distance(&region, at, st.goal))
            else {
                continue;
            };
            if df < dw {
                d_goals.push(st.goal);
            }
        }
        d_goals.sort_unstable();
        Ok((test_a, test_b, c_goals, d_goals))
    })();
    ctx.release_region(&region);
    ctx.release_game(&g);
    r
}
