use std::collections::HashMap;

use gr1_core::expr::Netlist;
use gr1_core::frontend::{compile_to_boolean, parse_spec, BooleanSpec, PartKind, VarKind};
use gr1_core::game::{GameContext, GameOptions};
use gr1_core::oracle::{random_spec, RandomSpecConfig};
use gr1_core::traces::{abstract_strategy, nominal_trace, AbstractStrategy, AnnotatedTrace, Cell, NominalTrace, Player};

fn compile(src: &str) -> BooleanSpec {
    compile_to_boolean(&parse_spec(src).unwrap()).unwrap()
}

fn nets(spec: &BooleanSpec, kind: PartKind) -> Vec<Netlist> {
    spec.parts(kind).iter().map(|p| Netlist::new(&p.pred)).collect()
}

fn all(ns: &[Netlist], cur: u64, next: u64) -> bool {
    ns.iter().all(|n| n.eval_once(cur, next))
}

fn mask(position: &[bool]) -> u64 {
    position.iter().enumerate().fold(0, |m, (i, &b)| if b { m | 1 << i } else { m })
}

fn trace_of(spec: &BooleanSpec) -> Option<AnnotatedTrace> {
    let mut ctx = GameContext::new(spec);
    match nominal_trace(&mut ctx, spec, 200).unwrap() {
        NominalTrace::Trace(t) => Some(t),
        _ => None,
    }
}

/// Replays a trace against the parts of the specification alone.
fn check_trace(spec: &BooleanSpec, t: &AnnotatedTrace) {
    let masks: Vec<u64> = t.steps.iter().map(|s| mask(&s.position)).collect();
    assert!(all(&nets(spec, PartKind::EnvInit), masks[0], 0));
    assert!(all(&nets(spec, PartKind::SysInit), masks[0], 0));
    let (te, ts) = (nets(spec, PartKind::EnvTrans), nets(spec, PartKind::SysTrans));
    let mut edges: Vec<(u64, u64)> = masks.windows(2).map(|w| (w[0], w[1])).collect();
    if let Some(k) = t.lasso_start {
        edges.push((*masks.last().unwrap(), masks[k]));
    }
    for &(a, b) in &edges {
        assert!(all(&te, a, b) && all(&ts, a, b), "transition {a:b} -> {b:b}");
    }
    if let Some(k) = t.lasso_start {
        let cycle = &edges[k..];
        for kind in [PartKind::EnvLiveness, PartKind::SysLiveness] {
            for n in nets(spec, kind) {
                assert!(cycle.iter().any(|&(a, b)| n.eval_once(a, b)), "{kind:?} goal missed on the cycle");
            }
        }
    }
}

const MUTEX: &str = "[INPUT]\nr1\nr2\n[OUTPUT]\ng1\ng2\n[SYS_TRANS]\n!X(g1) | !X(g2)\n[SYS_LIVENESS]\nr1 -> g1\nr2 -> g2\n";

#[test]
fn mutex_trace_replays() {
    let s = compile(MUTEX);
    let t = trace_of(&s).unwrap();
    assert!(t.lasso_start.is_some());
    assert_eq!(t.names, vec!["r1", "r2", "g1", "g2"]);
    check_trace(&s, &t);
}

#[test]
fn environment_liveness_shows_up_in_the_cycle() {
    let s = compile("[INPUT]\nr\n[OUTPUT]\ng\n[ENV_LIVENESS]\nr\n[SYS_TRANS]\nX(g) <-> r\n[SYS_LIVENESS]\ng\n");
    let t = trace_of(&s).unwrap();
    check_trace(&s, &t);
    let k = t.lasso_start.unwrap();
    assert!(t.steps[k..].iter().any(|st| st.position[0]));
}

#[test]
fn goals_rotate_along_the_trace() {
    let s = compile("[INPUT]\na\nb\n[OUTPUT]\ng\n[ENV_LIVENESS]\na\nb\n[SYS_LIVENESS]\ng\n!g\n");
    let t = trace_of(&s).unwrap();
    check_trace(&s, &t);
    let k = t.lasso_start.unwrap();
    let cyc = &t.steps[k..];
    for i in 0..2 {
        assert!(cyc.iter().any(|st| st.env_goal == i));
        assert!(cyc.iter().any(|st| st.sys_goal == i));
    }
}

#[test]
fn unrealizable_spec_has_no_trace() {
    let s = compile("[INPUT]\nr\n[OUTPUT]\ng\n[SYS_LIVENESS]\nr & g\n");
    let mut ctx = GameContext::new(&s);
    assert!(nominal_trace(&mut ctx, &s, 50).is_err());
}

#[test]
fn blocked_environment_is_reported() {
    // the system can pin q low, so the liveness assumption never holds
    let s = compile("[INPUT]\nq\n[OUTPUT]\ng\n[ENV_TRANS]\nX(q) -> g\n[ENV_LIVENESS]\nq\n[SYS_INIT]\n!g\n[SYS_TRANS]\n!X(g)\n");
    let mut ctx = GameContext::new(&s);
    assert_eq!(nominal_trace(&mut ctx, &s, 50).unwrap(), NominalTrace::EnvironmentCannotWin);
}

#[test]
fn random_traces_replay() {
    let cfg = RandomSpecConfig { max_bits: 8, ..Default::default() };
    let mut checked = 0;
    for seed in 0..1000 {
        let s = random_spec(seed, &cfg);
        let mut ctx = GameContext::new(&s);
        let g = ctx.build_game(&s, &GameOptions::strict()).unwrap();
        if !ctx.realizable(&g).unwrap().is_realizable() {
            continue;
        }
        if let Some(t) = trace_of(&s) {
            check_trace(&s, &t);
            checked += 1;
        }
    }
    assert!(checked > 40, "only {checked} traces");
}

/// Per-signal decoding of a position mask.
struct Signals {
    sigs: Vec<(String, VarKind, Vec<u32>, u64)>,
}

impl Signals {
    fn new(spec: &BooleanSpec) -> Self {
        let sigs = spec
            .signals()
            .into_iter()
            .map(|(name, kind, bits)| {
                let lo = spec.ints.iter().find(|e| e.name == name).map_or(0, |e| e.lo);
                (name, kind, bits.iter().map(|p| p.0).collect(), lo)
            })
            .collect();
        Signals { sigs }
    }

    /// True if the winner's part of `pos` matches every constant cell of round `t`.
    fn matches(&self, table: &AbstractStrategy, pos: u64, t: usize, kind: VarKind) -> bool {
        table.rows.iter().zip(&self.sigs).all(|(row, (name, k, bits, lo))| {
            assert_eq!(&row.name, name);
            if *k != kind {
                return true;
            }
            match row.cells[t] {
                Cell::Value(v) => {
                    let enc = bits.iter().enumerate().fold(0u64, |m, (i, &b)| m | ((pos >> b) & 1) << i);
                    enc + lo == v
                }
                Cell::Star => true,
                Cell::X => panic!("X before the last round"),
            }
        })
    }
}

/// Exhaustively plays the table against every opponent behaviour.
fn sound(spec: &BooleanSpec, table: &AbstractStrategy) -> bool {
    let n = spec.props.len();
    let sig = Signals::new(spec);
    let (ie, is) = (nets(spec, PartKind::EnvInit), nets(spec, PartKind::SysInit));
    let (te, ts) = (nets(spec, PartKind::EnvTrans), nets(spec, PartKind::SysTrans));
    let in_mask: u64 = spec.inputs().iter().fold(0, |m, p| m | 1 << p.0);
    let vals = |side: u64| (0..1u64 << n).filter(move |v| v & !side == 0);
    let ins: Vec<u64> = vals(in_mask).collect();
    let outs: Vec<u64> = vals(!in_mask & ((1 << n) - 1)).collect();
    let h = table.horizon;
    let winner_kind = match table.winner {
        Player::System => VarKind::Output,
        Player::Environment => VarKind::Input,
    };
    let mut memo: HashMap<(u64, usize), bool> = HashMap::new();

    struct Play<'a> {
        ins: &'a [u64],
        outs: &'a [u64],
        te: &'a [Netlist],
        ts: &'a [Netlist],
        sig: &'a Signals,
        table: &'a AbstractStrategy,
        h: usize,
        wk: VarKind,
    }

    fn go(pos: u64, t: usize, ctx: &Play, memo: &mut HashMap<(u64, usize), bool>) -> bool {
        let Play { ins, outs, te, ts, sig, table, h, wk } = *ctx;
        if t == h {
            return false;
        }
        if let Some(&r) = memo.get(&(pos, t)) {
            return r;
        }
        let ok = |v: u64| t + 1 == h || sig.matches(table, v, t + 1, wk);
        let r = match table.winner {
            Player::Environment => ins.iter().any(|&x| {
                all(te, pos, x) && {
                    let nexts: Vec<u64> = outs.iter().map(|&y| x | y).filter(|&v| all(ts, pos, v)).collect();
                    ok(x) && (nexts.is_empty() || nexts.iter().all(|&v| go(v, t + 1, ctx, memo)))
                }
            }),
            Player::System => ins.iter().all(|&x| {
                !all(te, pos, x)
                    || outs.iter().map(|&y| x | y).any(|v| all(ts, pos, v) && ok(v) && go(v, t + 1, ctx, memo))
            }),
        };
        memo.insert((pos, t), r);
        r
    }

    let ctx = Play { ins: &ins, outs: &outs, te: &te, ts: &ts, sig: &sig, table, h, wk: winner_kind };
    let start_ok = |v: u64| h == 0 || sig.matches(table, v, 0, winner_kind);
    match table.winner {
        Player::Environment => ins.iter().any(|&x| {
            all(&ie, x, 0) && start_ok(x) && {
                let starts: Vec<u64> = outs.iter().map(|&y| x | y).filter(|&v| all(&is, v, 0)).collect();
                starts.iter().all(|&v| go(v, 0, &ctx, &mut memo))
            }
        }),
        Player::System => ins.iter().all(|&x| {
            !all(&ie, x, 0)
                || outs.iter().map(|&y| x | y).any(|v| all(&is, v, 0) && start_ok(v) && go(v, 0, &ctx, &mut memo))
        }),
    }
}

fn table_of(spec: &BooleanSpec) -> Option<AbstractStrategy> {
    let mut ctx = GameContext::new(spec);
    abstract_strategy(&mut ctx, spec, 64).unwrap()
}

#[test]
fn liveness_only_games_have_no_table() {
    let s = compile("[INPUT]\nr\n[OUTPUT]\ng\n[ENV_LIVENESS]\nr\n[SYS_LIVENESS]\ng\n");
    assert_eq!(table_of(&s), None);
}

#[test]
fn oscillation_counter_strategy_is_short() {
    let s = compile("[OUTPUT]\ng\n[SYS_INIT]\ng\n[SYS_TRANS]\ng -> !X(g)\n!g -> X(g)\nX(g)\n");
    let t = table_of(&s).unwrap();
    assert_eq!(t.winner, Player::Environment);
    assert!(t.horizon <= 2);
    assert_eq!(t.horizon, 1);
    assert_eq!(t.rows[0].cells, vec![Cell::Value(1), Cell::X]);
    assert!(sound(&s, &t));
}

#[test]
fn system_table_for_a_forced_environment() {
    // the environment must raise r forever once g is up; r & X(r) is forbidden
    let s = compile("[INPUT]\nr\n[OUTPUT]\ng\n[ENV_TRANS]\ng -> X(r)\n!(r & X(r))\n[SYS_LIVENESS]\nFALSE\n");
    let t = table_of(&s).unwrap();
    assert_eq!(t.winner, Player::System);
    assert!(sound(&s, &t));
    let last = t.rows.iter().map(|r| *r.cells.last().unwrap()).collect::<Vec<_>>();
    assert!(last.iter().all(|&c| c == Cell::X));
}

#[test]
fn random_tables_are_sound() {
    let cfg = RandomSpecConfig { max_bits: 7, ..Default::default() };
    let mut found = [0usize; 2];
    for seed in 0..300 {
        let s = random_spec(seed, &cfg);
        let Some(t) = table_of(&s) else { continue };
        assert!(sound(&s, &t), "seed {seed}: {t:?}");
        for row in &t.rows {
            assert_eq!(row.cells.len(), t.horizon + 1);
            assert_eq!(*row.cells.last().unwrap(), Cell::X);
            assert!(row.cells[..t.horizon].iter().all(|&c| c != Cell::X));
        }
        found[(t.winner == Player::System) as usize] += 1;
    }
    assert!(found[0] > 5 && found[1] > 5, "{found:?}");
}
