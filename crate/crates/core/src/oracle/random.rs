//! Seeded random specifications for differential testing.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::expr::{self, BoolExpr, Pred, PropId};
use crate::frontend::{BooleanSpec, PartKind, PartOrigin, VarKind};

#[derive(Clone, Copy, Debug)]
pub struct RandomSpecConfig {
    pub min_bits: usize,
    pub max_bits: usize,
    pub max_goals: usize,
    pub max_safety: usize,
}

impl Default for RandomSpecConfig {
    fn default() -> Self {
        RandomSpecConfig { min_bits: 2, max_bits: 10, max_goals: 3, max_safety: 3 }
    }
}

fn render(p: &Pred, spec: &BooleanSpec) -> String {
    match &**p {
        BoolExpr::Const(true) => "TRUE".into(),
        BoolExpr::Const(false) => "FALSE".into(),
        BoolExpr::Var { prop, primed: false } => spec.props[prop.index()].name.clone(),
        BoolExpr::Var { prop, primed: true } => format!("X({})", spec.props[prop.index()].name),
        BoolExpr::Not(a) => format!("!{}", render(a, spec)),
        BoolExpr::And(a, b) => format!("({} & {})", render(a, spec), render(b, spec)),
        BoolExpr::Or(a, b) => format!("({} | {})", render(a, spec), render(b, spec)),
        BoolExpr::Xor(a, b) => format!("!({} <-> {})", render(a, spec), render(b, spec)),
        BoolExpr::Iff(a, b) => format!("({} <-> {})", render(a, spec), render(b, spec)),
    }
}

fn formula(rng: &mut ChaCha8Rng, atoms: &[(PropId, bool)], depth: u32) -> Pred {
    if depth == 0 || rng.gen_bool(0.3) {
        let (p, primed) = atoms[rng.gen_range(0..atoms.len())];
        let v = expr::var(p, primed);
        return if rng.gen_bool(0.5) { expr::not(&v) } else { v };
    }
    let a = formula(rng, atoms, depth - 1);
    let b = formula(rng, atoms, depth - 1);
    match rng.gen_range(0..10) {
        0..=3 => expr::or(&a, &b),
        4..=6 => expr::and(&a, &b),
        7 | 8 => expr::implies(&a, &b),
        _ => expr::iff(&a, &b),
    }
}

/// A random boolean specification; the same seed always gives the same spec.
pub fn random_spec(seed: u64, cfg: &RandomSpecConfig) -> BooleanSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(cfg.min_bits.max(2)..=cfg.max_bits.max(2));
    let n_in = rng.gen_range(1..n);
    let mut kinds: Vec<VarKind> = (0..n).map(|i| if i < n_in { VarKind::Input } else { VarKind::Output }).collect();
    // shuffle so inputs and outputs interleave in the variable order
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        kinds.swap(i, j);
    }
    let mut spec = BooleanSpec::new();
    let (mut ni, mut no) = (0, 0);
    for k in kinds {
        let name = match k {
            VarKind::Input => {
                ni += 1;
                format!("i{}", ni - 1)
            }
            VarKind::Output => {
                no += 1;
                format!("o{}", no - 1)
            }
        };
        spec.add_prop(&name, k);
    }
    let cur_in: Vec<(PropId, bool)> = spec.inputs().into_iter().map(|p| (p, false)).collect();
    let cur_all: Vec<(PropId, bool)> = (0..n as u32).map(|p| (PropId(p), false)).collect();
    let mut env_next = cur_all.clone();
    env_next.extend(spec.inputs().into_iter().map(|p| (p, true)));
    let mut all_next = cur_all.clone();
    all_next.extend((0..n as u32).map(|p| (PropId(p), true)));

    let add = |spec: &mut BooleanSpec, rng: &mut ChaCha8Rng, kind: PartKind, atoms: &[(PropId, bool)], count: usize| {
        for _ in 0..count {
            let f = formula(rng, atoms, 2);
            let text = render(&f, spec);
            spec.push_part(kind, f, &text, PartOrigin::User);
        }
    };
    let c = rng.gen_range(0..=1);
    add(&mut spec, &mut rng, PartKind::EnvInit, &cur_in, c);
    let c = rng.gen_range(0..=1);
    add(&mut spec, &mut rng, PartKind::SysInit, &cur_all, c);
    let c = rng.gen_range(0..=cfg.max_safety);
    add(&mut spec, &mut rng, PartKind::EnvTrans, &env_next, c);
    let c = rng.gen_range(0..=cfg.max_safety);
    add(&mut spec, &mut rng, PartKind::SysTrans, &all_next, c);
    // outputs that can only rise once a neighbour is set make goals several steps away
    let outs = spec.outputs();
    let chain = rng.gen_bool(0.5);
    for (k, &o) in outs.iter().enumerate() {
        if chain || rng.gen_bool(0.25) {
            let prev = if k > 0 && chain { outs[k - 1] } else { cur_all[rng.gen_range(0..cur_all.len())].0 };
            let f = expr::implies(&expr::var(o, true), &expr::or(&expr::var(o, false), &expr::var(prev, false)));
            let text = render(&f, &spec);
            spec.push_part(PartKind::SysTrans, f, &text, PartOrigin::User);
        }
    }
    let c = rng.gen_range(0..=cfg.max_goals);
    add(&mut spec, &mut rng, PartKind::EnvLiveness, &all_next, c);
    for _ in 0..rng.gen_range(0..=cfg.max_goals) {
        let lits = rng.gen_range(1..=3usize);
        let mut f = expr::tt();
        for _ in 0..lits {
            let (p, primed) = all_next[rng.gen_range(0..all_next.len())];
            let v = expr::var(p, primed);
            f = expr::and(&f, &if rng.gen_bool(0.3) { expr::not(&v) } else { v });
        }
        let text = render(&f, &spec);
        spec.push_part(PartKind::SysLiveness, f, &text, PartOrigin::User);
    }
    spec
}
