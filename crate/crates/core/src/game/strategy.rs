use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec::Vec;

use super::{GameContext, SymbolicGame, WinningRegion};
use crate::bdd::BddRef;
use crate::error::Gr1Error;
use crate::FxHashMap;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MealyState {
    /// Values of [`MealyMachine::props`].
    pub position: Vec<bool>,
    /// Index of the system goal being pursued.
    pub goal: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MealyTransition {
    pub from: usize,
    /// Values of [`MealyMachine::inputs`].
    pub input: Vec<bool>,
    pub to: usize,
    /// Goal the step was taken for (the source state's goal).
    pub goal: usize,
}

/// A finite-state implementation whose states are labelled by position and goal.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MealyMachine {
    /// All propositions of a position, ascending.
    pub props: Vec<u32>,
    pub names: Vec<String>,
    pub inputs: Vec<u32>,
    pub outputs: Vec<u32>,
    pub states: Vec<MealyState>,
    pub initial: Vec<usize>,
    pub transitions: Vec<MealyTransition>,
}

impl MealyMachine {
    pub fn successors(&self, state: usize) -> impl Iterator<Item = &MealyTransition> {
        self.transitions.iter().filter(move |t| t.from == state)
    }

    /// Value of proposition `p` in a state.
    pub fn value(&self, state: usize, p: u32) -> bool {
        let i = self.props.binary_search(&p).expect("proposition of the machine");
        self.states[state].position[i]
    }
}

/// Upper bound on extracted machine states.
pub const MAX_MACHINE_STATES: usize = 200_000;

/// Precomputed move preferences of the canonical strategy.
pub struct StrategyChooser {
    goal_moves: Vec<BddRef>,
    closer: Vec<Vec<BddRef>>,
    stay: Vec<Vec<Vec<BddRef>>>,
    strata: Vec<Vec<BddRef>>,
    xsets: Vec<Vec<Vec<BddRef>>>,
    props: Vec<u32>,
    inputs: Vec<u32>,
    outputs: Vec<u32>,
    trans_sys: BddRef,
    goals: usize,
}

impl StrategyChooser {
    pub fn props(&self) -> &[u32] {
        &self.props
    }

    fn idx(&self, p: u32) -> usize {
        self.props.binary_search(&p).unwrap()
    }

    /// The next position and goal when the system at `position` pursuing
    /// `goal` sees next inputs `input` (values of the game's inputs).
    /// `None` if the position is not winning or the input is not admissible.
    pub fn step(&self, ctx: &mut GameContext, position: &[bool], goal: usize, input: &[bool]) -> Option<(Vec<bool>, usize)> {
        let at = |v: u32| v.is_multiple_of(2) && position[self.idx(v / 2)];
        let rank = self.strata[goal].iter().position(|&s| ctx.mgr.eval(s, at))?;
        let env_i = self.xsets[goal][rank].iter().position(|&x| ctx.mgr.eval(x, at))?;
        let vcube = ctx.valuation(&self.props, position, false);
        let xc = ctx.valuation(&self.inputs, input, true);
        let here = ctx.mgr.and(vcube, xc);
        let ts = ctx.mgr.restrict(self.trans_sys, here);
        let mut options = alloc::vec![(self.goal_moves[goal], (goal + 1) % self.goals)];
        if rank > 0 {
            options.push((self.closer[goal][rank - 1], goal));
        }
        options.push((self.stay[goal][rank][env_i], goal));
        let out_next = GameContext::next_vars(&self.outputs);
        for (o, next_goal) in options {
            let o = ctx.mgr.restrict(o, here);
            let c = ctx.mgr.and(ts, o);
            if let Some(y) = ctx.mgr.pick_min(c, &out_next) {
                let mut pos = alloc::vec![false; self.props.len()];
                for (k, &p) in self.inputs.iter().enumerate() {
                    pos[self.idx(p)] = input[k];
                }
                for (k, &p) in self.outputs.iter().enumerate() {
                    pos[self.idx(p)] = y[k];
                }
                return Some((pos, next_goal));
            }
        }
        None
    }
}

impl GameContext {
    pub fn strategy_chooser(&mut self, g: &SymbolicGame, region: &WinningRegion) -> StrategyChooser {
        let zp = self.mgr.prime(region.win);
        let goal_moves: Vec<BddRef> = g.live_sys.iter().map(|&j| self.mgr.and(j, zp)).collect();
        let mut closer: Vec<Vec<BddRef>> = Vec::new();
        let mut stay: Vec<Vec<Vec<BddRef>>> = Vec::new();
        for j in 0..g.live_sys.len() {
            closer.push(region.strata[j].iter().map(|&s| self.mgr.prime(s)).collect());
            let mut per_rank = Vec::new();
            for row in &region.xsets[j] {
                let mut per_env = Vec::new();
                for (i, &x) in row.iter().enumerate() {
                    let xp = self.mgr.prime(x);
                    let na = self.mgr.not(g.live_env[i]);
                    per_env.push(self.mgr.and(na, xp));
                }
                per_rank.push(per_env);
            }
            stay.push(per_rank);
        }
        let c = StrategyChooser {
            goal_moves,
            closer,
            stay,
            strata: region.strata.clone(),
            xsets: region.xsets.clone(),
            props: g.props(),
            inputs: g.inputs.clone(),
            outputs: g.outputs.clone(),
            trans_sys: g.trans_sys,
            goals: g.live_sys.len(),
        };
        for h in c.handles() {
            self.mgr.retain(h);
        }
        c
    }

    pub fn release_chooser(&mut self, c: &StrategyChooser) {
        for h in c.handles() {
            self.mgr.release(h);
        }
    }

    /// Extracts the canonical strategy of a realizable (non-precommitted) game.
    ///
    /// From a state pursuing goal `j` the system prefers, in this order: a
    /// transition satisfying goal `j` (then pursues `j + 1`), a transition
    /// into a lower stratum of goal `j`, a transition that stays in the
    /// current stratum while an environment goal is not met. Ties go to the
    /// smallest next output valuation, false before true in variable order.
    pub fn extract_strategy(&mut self, g: &SymbolicGame, region: &WinningRegion) -> Result<MealyMachine, Gr1Error> {
        if !self.realizability(g, region)?.is_realizable() {
            return Err(Gr1Error::Precondition("strategy extraction needs a realizable game"));
        }
        if !g.precommit.is_empty() {
            return Err(Gr1Error::Precondition("strategy extraction of precommitted games is unsupported"));
        }
        let chooser = self.strategy_chooser(g, region);
        let r = self.extract_with(g, region, &chooser);
        self.release_chooser(&chooser);
        r
    }

    fn extract_with(&mut self, g: &SymbolicGame, region: &WinningRegion, chooser: &StrategyChooser) -> Result<MealyMachine, Gr1Error> {
        let props = g.props();
        let in_next = Self::next_vars(&g.inputs);
        let cur_all = Self::cur_vars(&props);
        let idx_of = |p: u32| props.binary_search(&p).unwrap();

        let mut machine = MealyMachine {
            props: props.clone(),
            names: props.iter().map(|&p| String::from(self.prop_name(p))).collect(),
            inputs: g.inputs.clone(),
            outputs: g.outputs.clone(),
            ..Default::default()
        };
        let mut ids: FxHashMap<(Vec<bool>, usize), usize> = FxHashMap::default();
        let mut queue = VecDeque::new();
        let mut add = |m: &mut MealyMachine, q: &mut VecDeque<usize>, pos: Vec<bool>, goal: usize| -> usize {
            *ids.entry((pos.clone(), goal)).or_insert_with(|| {
                m.states.push(MealyState { position: pos, goal });
                q.push_back(m.states.len() - 1);
                m.states.len() - 1
            })
        };

        let starts: Vec<Vec<bool>> = if g.robotics {
            self.mgr.models(g.robotics_start, &cur_all, usize::MAX)
        } else {
            let cur_in = Self::cur_vars(&g.inputs);
            let cur_out = Self::cur_vars(&g.outputs);
            let mut v = Vec::new();
            for x in self.mgr.models(g.init_env, &cur_in, usize::MAX) {
                let xc = self.valuation(&g.inputs, &x, false);
                let ok = self.mgr.and(g.init_sys, region.win);
                let ok = self.mgr.and(ok, xc);
                let y = self.mgr.pick_min(ok, &cur_out).expect("realizable start");
                let mut pos = alloc::vec![false; props.len()];
                for (k, &p) in g.inputs.iter().enumerate() {
                    pos[idx_of(p)] = x[k];
                }
                for (k, &p) in g.outputs.iter().enumerate() {
                    pos[idx_of(p)] = y[k];
                }
                v.push(pos);
            }
            v
        };
        for pos in starts {
            let id = add(&mut machine, &mut queue, pos, 0);
            if !machine.initial.contains(&id) {
                machine.initial.push(id);
            }
        }

        while let Some(sid) = queue.pop_front() {
            if machine.states.len() > MAX_MACHINE_STATES {
                return Err(Gr1Error::TooLarge("extracted strategy"));
            }
            let MealyState { position, goal: j } = machine.states[sid].clone();
            let vcube = self.valuation(&props, &position, false);
            let te = self.mgr.restrict(g.trans_env, vcube);
            for x in self.mgr.models(te, &in_next, usize::MAX) {
                let (pos, next_goal) =
                    chooser.step(self, &position, j, &x).expect("winning position has a winning move");
                let to = add(&mut machine, &mut queue, pos, next_goal);
                machine.transitions.push(MealyTransition { from: sid, input: x, to, goal: j });
            }
            self.mgr.check()?;
        }
        Ok(machine)
    }
}

impl StrategyChooser {
    fn handles(&self) -> Vec<BddRef> {
        let mut h: Vec<BddRef> = self.goal_moves.clone();
        h.push(self.trans_sys);
        self.closer.iter().for_each(|r| h.extend(r));
        self.stay.iter().flatten().for_each(|r| h.extend(r));
        self.strata.iter().for_each(|r| h.extend(r));
        self.xsets.iter().flatten().for_each(|r| h.extend(r));
        h
    }
}
