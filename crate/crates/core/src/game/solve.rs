use alloc::vec::Vec;

use super::{GameContext, Realizability, SymbolicGame};
use crate::bdd::BddRef;
use crate::error::Gr1Error;

/// Solution of the GR(1) fixpoint.
#[derive(Clone, Debug)]
pub struct WinningRegion {
    pub win: BddRef,
    /// `strata[j][d]`: positions that reach goal `j` within reactive distance `d`.
    pub strata: Vec<Vec<BddRef>>,
    /// `xsets[j][d][i]`: positions of stratum `d` that progress while
    /// environment goal `i` is not met (the innermost fixpoints).
    pub xsets: Vec<Vec<Vec<BddRef>>>,
}

impl WinningRegion {
    fn handles(&self) -> Vec<BddRef> {
        let mut h = alloc::vec![self.win];
        for layer in &self.strata {
            h.extend(layer);
        }
        for layer in &self.xsets {
            for row in layer {
                h.extend(row);
            }
        }
        h
    }
}

struct Reach {
    y: BddRef,
    layers: Vec<BddRef>,
    xs: Vec<Vec<BddRef>>,
}

impl GameContext {
    /// Solves the game. Resource exhaustion is reported as an error, never as a verdict.
    pub fn solve(&mut self, g: &SymbolicGame) -> Result<WinningRegion, Gr1Error> {
        let mut z = self.mgr.tt();
        loop {
            let before = z;
            let mut strata = Vec::with_capacity(g.live_sys.len());
            let mut xsets = Vec::with_capacity(g.live_sys.len());
            for j in 0..g.live_sys.len() {
                let r = self.reach_goal(g, j, z, &strata, &xsets)?;
                z = r.y;
                strata.push(r.layers);
                xsets.push(r.xs);
            }
            if z == before {
                let region = WinningRegion { win: z, strata, xsets };
                for h in region.handles() {
                    self.mgr.retain(h);
                }
                return Ok(region);
            }
        }
    }

    pub fn release_region(&mut self, region: &WinningRegion) {
        for h in region.handles() {
            self.mgr.release(h);
        }
    }

    /// Least fixpoint for system goal `j` inside `z`.
    fn reach_goal(
        &mut self,
        g: &SymbolicGame,
        j: usize,
        z: BddRef,
        done: &[Vec<BddRef>],
        done_x: &[Vec<Vec<BddRef>>],
    ) -> Result<Reach, Gr1Error> {
        let zp = self.mgr.prime(z);
        let goal = self.mgr.and(g.live_sys[j], zp);
        let not_a: Vec<BddRef> = g.live_env.iter().map(|&a| self.mgr.not(a)).collect();
        let mut y = self.mgr.ff();
        let mut layers = Vec::new();
        let mut xs = Vec::new();
        loop {
            let yp = self.mgr.prime(y);
            let start = self.mgr.or(goal, yp);
            let mut ys = self.mgr.ff();
            let mut row = Vec::with_capacity(not_a.len());
            for &na in &not_a {
                let mut x = z;
                loop {
                    let xp = self.mgr.prime(x);
                    let stay = self.mgr.and(na, xp);
                    let target = self.mgr.or(start, stay);
                    let pre = self.cpre(g, target);
                    let next = self.mgr.and(pre, z);
                    self.mgr.check()?;
                    if next == x {
                        break;
                    }
                    x = next;
                    let mut roots = alloc::vec![z, zp, goal, y, start, ys, x];
                    roots.extend(&not_a);
                    roots.extend(&row);
                    roots.extend(&layers);
                    xs.iter().for_each(|r: &Vec<BddRef>| roots.extend(r));
                    done.iter().for_each(|l| roots.extend(l));
                    done_x.iter().flatten().for_each(|r| roots.extend(r));
                    self.mgr.maybe_collect(&roots);
                }
                ys = self.mgr.or(ys, x);
                row.push(x);
            }
            if ys == y {
                return Ok(Reach { y, layers, xs });
            }
            y = ys;
            layers.push(y);
            xs.push(row);
        }
    }

    /// Realizability verdict for a solved game.
    pub fn realizability(&mut self, g: &SymbolicGame, region: &WinningRegion) -> Result<Realizability, Gr1Error> {
        let win = region.win;
        let ok = if g.robotics {
            self.mgr.leq(g.robotics_start, win)
        } else if g.precommit.is_empty() {
            // forall inputs. init_env -> exists outputs. init_sys & win
            let inner = self.mgr.and_exists(g.init_sys, win, g.cube_out);
            let bad = self.mgr.not(inner);
            let lose = self.mgr.and_exists(g.init_env, bad, g.cube_in);
            lose.is_false()
        } else {
            let inner = self.mgr.and_exists(g.init_sys, win, g.cube_rest);
            let bad = self.mgr.not(inner);
            let lose = self.mgr.and_exists(g.init_env, bad, g.cube_in);
            let good = self.mgr.not(lose);
            self.mgr.exists(g.cube_pre, good).is_true()
        };
        self.mgr.check()?;
        Ok(Realizability::from_bool(ok))
    }

    /// Solves and checks realizability, releasing the solution afterwards.
    pub fn realizable(&mut self, g: &SymbolicGame) -> Result<Realizability, Gr1Error> {
        let region = self.solve(g)?;
        let r = self.realizability(g, &region);
        self.release_region(&region);
        r
    }

    /// Smallest `d` with the position in `strata[goal][d]`; `None` if losing.
    pub fn reactive_distance(&self, region: &WinningRegion, position: impl Fn(u32) -> bool, goal: usize) -> Option<usize> {
        let val = |v: u32| v.is_multiple_of(2) && position(v / 2);
        region.strata[goal].iter().position(|&s| self.mgr.eval(s, val))
    }

    /// Minimal stratum containing a position set's member, as a BDD per distance.
    pub fn distance_layers(&mut self, region: &WinningRegion, goal: usize) -> Vec<BddRef> {
        let mut out = Vec::new();
        let mut prev = self.mgr.ff();
        for &s in &region.strata[goal] {
            out.push(self.mgr.diff(s, prev));
            prev = s;
        }
        out
    }
}
