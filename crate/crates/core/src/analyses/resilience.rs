use core::fmt;

use crate::error::Gr1Error;
use crate::frontend::{BooleanSpec, PartKind, PartOrigin};
use crate::game::{GameContext, GameOptions, Glitches};

pub const DEFAULT_MAX_K: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resilience {
    /// Exactly this many glitches are tolerated, one more is not.
    Level(u32),
    /// Any number of glitches is tolerated.
    Infinite,
    /// The search stopped at the configured maximum while still realizable.
    AtLeast(u32),
}

impl fmt::Display for Resilience {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resilience::Level(k) => write!(f, "{k}"),
            Resilience::Infinite => f.write_str("infinite"),
            Resilience::AtLeast(k) => write!(f, ">= {k}"),
        }
    }
}

/// Realizability of the strict game in which the environment may violate
/// one of its non-range safety assumptions per glitch.
pub fn glitch_realizable(ctx: &mut GameContext, spec: &BooleanSpec, glitches: Glitches) -> Result<bool, Gr1Error> {
    let opts = GameOptions { glitches: Some(glitches), ..GameOptions::strict() };
    let g = ctx.build_game(spec, &opts)?;
    let r = ctx.realizable(&g);
    ctx.release_game(&g);
    Ok(r?.is_realizable())
}

pub fn error_resilience(ctx: &mut GameContext, spec: &BooleanSpec, max_k: u32) -> Result<Resilience, Gr1Error> {
    if max_k == 0 {
        return Err(Gr1Error::Precondition("the glitch search bound must be positive"));
    }
    let g = ctx.build_game(spec, &GameOptions::strict())?;
    let base = ctx.realizable(&g);
    ctx.release_game(&g);
    if !base?.is_realizable() {
        return Err(Gr1Error::Precondition("error resilience needs a realizable specification"));
    }
    if spec.parts(PartKind::EnvTrans).iter().all(|p| p.origin == PartOrigin::RangeConstraint) {
        return Ok(Resilience::Infinite);
    }
    if glitch_realizable(ctx, spec, Glitches::Unlimited)? {
        return Ok(Resilience::Infinite);
    }
    for k in 1..=max_k {
        if !glitch_realizable(ctx, spec, Glitches::Budget { budget: k, max: max_k })? {
            return Ok(Resilience::Level(k - 1));
        }
    }
    Ok(Resilience::AtLeast(max_k))
}
