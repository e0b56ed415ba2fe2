//! Explicit-state reference implementations.
//!
//! Positions are bitmasks (bit `p` = proposition `p`); every transition of
//! the game is enumerated and evaluated on flattened predicates. Nothing here
//! touches BDDs, which makes it an independent check of the symbolic engine.

mod check;
mod random;

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Gr1Error;
use crate::expr::Netlist;
use crate::frontend::{BooleanSpec, PartKind, PartOrigin};
use crate::game::Semantics;

pub use check::{model_check, Counterexample, ViolationKind};
pub use random::{random_spec, RandomSpecConfig};

pub const DEFAULT_BIT_BOUND: usize = 14;

/// Which game to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Strict,
    /// Two extra bits above the specification's propositions: environment
    /// violated (bit `n`) and system violated (bit `n + 1`).
    NonStrict,
    /// Glitch counter `c` in `0..=budget`; position index is `mask + c * 2^n`.
    Glitch { budget: u32 },
}

#[derive(Clone, Copy, Debug)]
struct SysMove {
    to: u32,
    goals: u32,
    env_goals: u32,
}

/// Fully enumerated game graph.
pub struct ExplicitGame {
    pub nbits: usize,
    pub positions: usize,
    pub sys_goals: usize,
    pub env_goals: usize,
    /// Per position, range into `env_moves`.
    env_index: Vec<(u32, u32)>,
    /// Per admissible environment move, range into `sys_moves`.
    env_moves: Vec<(u32, u32)>,
    sys_moves: Vec<SysMove>,
    /// One group per admissible initial input: the start positions the system may pick.
    pub init_groups: Vec<Vec<u32>>,
}

struct Parts {
    init_env: Vec<Netlist>,
    init_sys: Vec<Netlist>,
    trans_env: Vec<(Netlist, bool)>,
    trans_sys: Vec<Netlist>,
    live_env: Vec<Netlist>,
    live_sys: Vec<Netlist>,
}

fn all(ns: &[Netlist], cur: u64, next: u64, s: &mut Vec<bool>) -> bool {
    ns.iter().all(|n| n.eval(cur, next, s))
}

fn goal_mask(ns: &[Netlist], cur: u64, next: u64, s: &mut Vec<bool>) -> u32 {
    if ns.is_empty() {
        return 1;
    }
    ns.iter().enumerate().fold(0, |m, (i, n)| m | ((n.eval(cur, next, s) as u32) << i))
}

/// Spreads the low bits of `k` over the positions set in `mask`.
fn deposit(k: u64, mask: u64) -> u64 {
    let mut out = 0;
    let mut bit = 0;
    let mut m = mask;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if (k >> bit) & 1 == 1 {
            out |= low;
        }
        bit += 1;
        m &= m - 1;
    }
    out
}

impl ExplicitGame {
    pub fn new(spec: &BooleanSpec, variant: Variant, bound: usize) -> Result<Self, Gr1Error> {
        let n = spec.props.len();
        let extra = match variant {
            Variant::Strict => 0,
            Variant::NonStrict => 2,
            Variant::Glitch { budget } => 64 - (budget as u64).leading_zeros() as usize,
        };
        if n + extra > bound || n + extra > 30 {
            return Err(Gr1Error::BitBound { bits: n + extra, bound });
        }
        let nets = |k: PartKind| spec.parts(k).iter().map(|p| Netlist::new(&p.pred)).collect::<Vec<_>>();
        let parts = Parts {
            init_env: nets(PartKind::EnvInit),
            init_sys: nets(PartKind::SysInit),
            trans_env: spec
                .parts(PartKind::EnvTrans)
                .iter()
                .map(|p| (Netlist::new(&p.pred), p.origin == PartOrigin::RangeConstraint))
                .collect(),
            trans_sys: nets(PartKind::SysTrans),
            live_env: nets(PartKind::EnvLiveness),
            live_sys: nets(PartKind::SysLiveness),
        };
        let in_mask: u64 = spec.inputs().iter().fold(0, |m, p| m | 1 << p.0);
        let out_mask: u64 = spec.outputs().iter().fold(0, |m, p| m | 1 << p.0);
        let n_in = in_mask.count_ones();
        let n_out = out_mask.count_ones();
        let base = 1usize << n;
        let layers = match variant {
            Variant::Strict => 1,
            Variant::NonStrict => 4,
            Variant::Glitch { budget } => budget as usize + 1,
        };
        let positions = base * layers;
        let mut g = ExplicitGame {
            nbits: n,
            positions,
            sys_goals: parts.live_sys.len().max(1),
            env_goals: parts.live_env.len().max(1),
            env_index: Vec::with_capacity(positions),
            env_moves: Vec::new(),
            sys_moves: Vec::new(),
            init_groups: Vec::new(),
        };
        let s = &mut Vec::new();
        for pos in 0..positions {
            let v = (pos % base) as u64;
            let layer = pos / base;
            let first = g.env_moves.len() as u32;
            for xi in 0..1u64 << n_in {
                let x = deposit(xi, in_mask);
                let te_parts: Vec<bool> = parts.trans_env.iter().map(|(nl, _)| nl.eval(v, x, s)).collect();
                let te = te_parts.iter().all(|&b| b);
                // environment admissibility and the auxiliary successor layer
                let (admissible, glitched) = match variant {
                    Variant::Strict => (te, false),
                    Variant::NonStrict => (true, !te),
                    Variant::Glitch { budget } => {
                        let ranges_ok = parts.trans_env.iter().zip(&te_parts).all(|((_, range), &b)| !range || b);
                        let broken = parts.trans_env.iter().zip(&te_parts).filter(|((_, range), b)| !range && !**b).count();
                        if te {
                            (true, false)
                        } else {
                            ((layer as u32) < budget && ranges_ok && broken == 1, true)
                        }
                    }
                };
                if !admissible {
                    continue;
                }
                let sfirst = g.sys_moves.len() as u32;
                for yi in 0..1u64 << n_out {
                    let w = x | deposit(yi, out_mask);
                    let ts = all(&parts.trans_sys, v, w, s);
                    let jm = goal_mask(&parts.live_sys, v, w, s);
                    let am = goal_mask(&parts.live_env, v, w, s);
                    let mv = match variant {
                        Variant::Strict => {
                            if !ts {
                                continue;
                            }
                            SysMove { to: w as u32, goals: jm, env_goals: am }
                        }
                        Variant::NonStrict => {
                            let ev = layer & 1 == 1 || glitched;
                            let sv = layer & 2 == 2 || !ts;
                            let to = w as usize + base * (ev as usize + 2 * sv as usize);
                            SysMove {
                                to: to as u32,
                                goals: if sv { 0 } else { jm },
                                env_goals: if ev { 0 } else { am },
                            }
                        }
                        Variant::Glitch { .. } => {
                            if !ts {
                                continue;
                            }
                            let to = w as usize + base * (layer + glitched as usize);
                            SysMove { to: to as u32, goals: jm, env_goals: am }
                        }
                    };
                    g.sys_moves.push(mv);
                }
                g.env_moves.push((sfirst, g.sys_moves.len() as u32));
            }
            g.env_index.push((first, g.env_moves.len() as u32));
        }

        for xi in 0..1u64 << n_in {
            let x = deposit(xi, in_mask);
            let ie = all(&parts.init_env, x, 0, s);
            let mut group = Vec::new();
            match variant {
                Variant::NonStrict => {
                    for yi in 0..1u64 << n_out {
                        let v = x | deposit(yi, out_mask);
                        let is = all(&parts.init_sys, v, 0, s);
                        group.push((v as usize + base * (!ie as usize + 2 * !is as usize)) as u32);
                    }
                }
                _ => {
                    if !ie {
                        continue;
                    }
                    for yi in 0..1u64 << n_out {
                        let v = x | deposit(yi, out_mask);
                        if all(&parts.init_sys, v, 0, s) {
                            group.push(v as u32);
                        }
                    }
                }
            }
            g.init_groups.push(group);
        }
        Ok(g)
    }

    fn cpre(&self, target: impl Fn(usize, &SysMove) -> bool) -> Vec<bool> {
        (0..self.positions)
            .map(|v| {
                let (a, b) = self.env_index[v];
                self.env_moves[a as usize..b as usize].iter().all(|&(s0, s1)| {
                    self.sys_moves[s0 as usize..s1 as usize].iter().any(|m| target(v, m))
                })
            })
            .collect()
    }

    /// GR(1) winning region with per-goal distances.
    pub fn solve(&self) -> ExplicitSolution {
        let mut z = vec![true; self.positions];
        loop {
            let mut next_z = vec![true; self.positions];
            let mut dist = Vec::new();
            for j in 0..self.sys_goals {
                let mut y = vec![false; self.positions];
                let mut d = vec![None; self.positions];
                let mut round = 0;
                loop {
                    let mut ys = vec![false; self.positions];
                    for i in 0..self.env_goals {
                        let mut x = vec![true; self.positions];
                        loop {
                            let nx = self.cpre(|_, m| {
                                let w = m.to as usize;
                                (m.goals >> j & 1 == 1 && z[w]) || y[w] || (m.env_goals >> i & 1 == 0 && x[w])
                            });
                            if nx == x {
                                break;
                            }
                            x = nx;
                        }
                        for v in 0..self.positions {
                            ys[v] |= x[v];
                        }
                    }
                    if ys == y {
                        break;
                    }
                    for v in 0..self.positions {
                        if ys[v] && d[v].is_none() {
                            d[v] = Some(round);
                        }
                    }
                    y = ys;
                    round += 1;
                }
                for v in 0..self.positions {
                    next_z[v] &= y[v];
                }
                dist.push(d);
            }
            if next_z == z {
                let realizable = self.init_groups.iter().all(|g| g.iter().any(|&v| z[v as usize]));
                let realizable_robotics = self.init_groups.iter().all(|g| g.iter().all(|&v| z[v as usize]));
                return ExplicitSolution { win: z, dist, realizable, realizable_robotics };
            }
            z = next_z;
        }
    }

    /// Positions from which the system can keep the play inside its own
    /// safety parts forever (or the environment must break its own).
    pub fn safety_win(&self) -> Vec<bool> {
        let mut z = vec![true; self.positions];
        loop {
            let nz = self.cpre(|_, m| z[m.to as usize]);
            let nz: Vec<bool> = nz.iter().zip(&z).map(|(a, b)| *a && *b).collect();
            if nz == z {
                return z;
            }
            z = nz;
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExplicitSolution {
    pub win: Vec<bool>,
    /// `dist[j][v]`: reactive distance of position `v` to system goal `j`.
    pub dist: Vec<Vec<Option<usize>>>,
    pub realizable: bool,
    pub realizable_robotics: bool,
}

/// Explicit GR(1) solution of the specification's strict game.
pub fn explicit_solve(spec: &BooleanSpec) -> Result<ExplicitSolution, Gr1Error> {
    explicit_solve_variant(spec, Variant::Strict, DEFAULT_BIT_BOUND)
}

pub fn explicit_solve_variant(spec: &BooleanSpec, variant: Variant, bound: usize) -> Result<ExplicitSolution, Gr1Error> {
    Ok(ExplicitGame::new(spec, variant, bound)?.solve())
}

/// Realizability under the given semantics.
pub fn explicit_realizable(spec: &BooleanSpec, semantics: Semantics) -> Result<bool, Gr1Error> {
    let variant = match semantics {
        Semantics::Strict => Variant::Strict,
        Semantics::NonStrict => Variant::NonStrict,
    };
    Ok(explicit_solve_variant(spec, variant, DEFAULT_BIT_BOUND)?.realizable)
}

/// Largest glitch budget in `0..=max` for which the spec stays realizable,
/// `None` if it is unrealizable even without glitches.
pub fn explicit_resilience(spec: &BooleanSpec, max: u32) -> Result<Option<u32>, Gr1Error> {
    let mut best = None;
    for budget in 0..=max {
        if !explicit_solve_variant(spec, Variant::Glitch { budget }, DEFAULT_BIT_BOUND + 4)?.realizable {
            break;
        }
        best = Some(budget);
    }
    Ok(best)
}
