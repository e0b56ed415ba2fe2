//! Model checking of extracted machines against the strict GR(1) reading.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Gr1Error;
use crate::expr::Netlist;
use crate::frontend::{BooleanSpec, PartKind};
use crate::game::MealyMachine;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// An admissible initial input has no start state, or a start state breaks the initial guarantees.
    Init,
    /// A reachable transition breaks a safety guarantee while the assumptions still hold.
    Safety,
    /// A reachable state has no reaction to an admissible input.
    Incomplete,
    /// A cycle meets every liveness assumption but misses a liveness guarantee.
    Liveness,
}

/// Machine states leading to the violation; `cycle` is empty unless the violation is a lasso.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub kind: ViolationKind,
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

fn mask(m: &MealyMachine, state: usize) -> u64 {
    m.props
        .iter()
        .zip(&m.states[state].position)
        .fold(0, |acc, (&p, &b)| if b { acc | 1 << p } else { acc })
}

fn input_mask(m: &MealyMachine, input: &[bool]) -> u64 {
    m.inputs.iter().zip(input).fold(0, |acc, (&p, &b)| if b { acc | 1 << p } else { acc })
}

/// Checks every behaviour of `machine` against `spec`.
///
/// A run may only break a guarantee after an assumption broke; since the
/// machine only reacts to admissible inputs, every run it produces satisfies
/// the initial and safety assumptions.
pub fn model_check(machine: &MealyMachine, spec: &BooleanSpec) -> Result<Result<(), Counterexample>, Gr1Error> {
    let n = spec.props.len();
    if machine.props.len() != n || machine.props.iter().enumerate().any(|(i, &p)| p as usize != i) {
        return Err(Gr1Error::Precondition("machine signature does not match the specification"));
    }
    let nets = |k: PartKind| spec.parts(k).iter().map(|p| Netlist::new(&p.pred)).collect::<Vec<_>>();
    let (ie, is, te, ts) = (nets(PartKind::EnvInit), nets(PartKind::SysInit), nets(PartKind::EnvTrans), nets(PartKind::SysTrans));
    let (le, ls) = (nets(PartKind::EnvLiveness), nets(PartKind::SysLiveness));
    let s = &mut Vec::new();
    let holds = |ns: &[Netlist], cur: u64, next: u64, s: &mut Vec<bool>| ns.iter().all(|x| x.eval(cur, next, s));

    let in_mask: u64 = spec.inputs().iter().fold(0, |m, p| m | 1 << p.0);
    let n_in = in_mask.count_ones();
    let deposit = |k: u64| -> u64 {
        let (mut out, mut bit, mut m) = (0u64, 0, in_mask);
        while m != 0 {
            let low = m & m.wrapping_neg();
            if (k >> bit) & 1 == 1 {
                out |= low;
            }
            bit += 1;
            m &= m - 1;
        }
        out
    };

    // initial condition
    for xi in 0..1u64 << n_in {
        let x = deposit(xi);
        if !holds(&ie, x, 0, s) {
            continue;
        }
        let starts: Vec<usize> = machine.initial.iter().copied().filter(|&q| mask(machine, q) & in_mask == x).collect();
        if starts.is_empty() {
            return Ok(Err(Counterexample { kind: ViolationKind::Init, prefix: vec![], cycle: vec![] }));
        }
        if let Some(&bad) = starts.iter().find(|&&q| !holds(&is, mask(machine, q), 0, s)) {
            return Ok(Err(Counterexample { kind: ViolationKind::Init, prefix: vec![bad], cycle: vec![] }));
        }
    }

    // reachable part, with BFS parents for counterexamples
    let ns = machine.states.len();
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); ns];
    for (k, t) in machine.transitions.iter().enumerate() {
        out_edges[t.from].push(k);
    }
    let mut parent: Vec<Option<usize>> = vec![None; ns];
    let mut seen = vec![false; ns];
    let mut queue = VecDeque::new();
    for &q in &machine.initial {
        let v = mask(machine, q);
        if holds(&ie, v, 0, s) && holds(&is, v, 0, s) && !seen[q] {
            seen[q] = true;
            queue.push_back(q);
        }
    }
    let path_to = |parent: &[Option<usize>], mut q: usize| {
        let mut p = vec![q];
        while let Some(r) = parent[q] {
            p.push(r);
            q = r;
        }
        p.reverse();
        p
    };
    while let Some(q) = queue.pop_front() {
        let v = mask(machine, q);
        let mut answered = vec![false; 1 << n_in];
        for &k in &out_edges[q] {
            let t = &machine.transitions[k];
            let w = mask(machine, t.to);
            let x = input_mask(machine, &t.input);
            if w & in_mask != x {
                return Err(Gr1Error::Precondition("transition target disagrees with its input"));
            }
            if !holds(&te, v, w, s) {
                continue;
            }
            let xi = (0..n_in).fold(0usize, |acc, b| {
                let bit = deposit(1 << b);
                acc | (((x & bit) != 0) as usize) << b
            });
            answered[xi] = true;
            if !holds(&ts, v, w, s) {
                let mut prefix = path_to(&parent, q);
                prefix.push(t.to);
                return Ok(Err(Counterexample { kind: ViolationKind::Safety, prefix, cycle: vec![] }));
            }
            if !seen[t.to] {
                seen[t.to] = true;
                parent[t.to] = Some(q);
                queue.push_back(t.to);
            }
        }
        for xi in 0..1u64 << n_in {
            if !answered[xi as usize] && holds(&te, v, deposit(xi), s) {
                return Ok(Err(Counterexample { kind: ViolationKind::Incomplete, prefix: path_to(&parent, q), cycle: vec![] }));
            }
        }
    }

    // admissible reachable edges with their goal labels
    let edges: Vec<(usize, usize, Vec<bool>, Vec<bool>)> = machine
        .transitions
        .iter()
        .filter(|t| seen[t.from])
        .filter_map(|t| {
            let (v, w) = (mask(machine, t.from), mask(machine, t.to));
            if !holds(&te, v, w, s) {
                return None;
            }
            let a: Vec<bool> = le.iter().map(|x| x.eval(v, w, s)).collect();
            let j: Vec<bool> = ls.iter().map(|x| x.eval(v, w, s)).collect();
            Some((t.from, t.to, a, j))
        })
        .collect();

    // a bad cycle avoids some guarantee j and still meets every assumption:
    // look for a strongly connected component without j-edges that contains all of them
    for j in 0..ls.len() {
        let kept: Vec<&(usize, usize, Vec<bool>, Vec<bool>)> = edges.iter().filter(|e| !e.3[j]).collect();
        let comp = scc(ns, kept.iter().map(|e| (e.0, e.1)));
        for c in 0..ns {
            let inner: Vec<&&(usize, usize, Vec<bool>, Vec<bool>)> =
                kept.iter().filter(|e| comp[e.0] == c && comp[e.1] == c).collect();
            if inner.is_empty() {
                continue;
            }
            if (0..le.len()).all(|i| inner.iter().any(|e| e.2[i])) {
                let start = inner[0].0;
                let mut cycle = vec![start];
                let mut at = start;
                let mut need: Vec<(usize, usize)> = (0..le.len())
                    .map(|i| inner.iter().find(|e| e.2[i]).map(|e| (e.0, e.1)).unwrap())
                    .collect();
                if need.is_empty() {
                    need.push((inner[0].0, inner[0].1));
                }
                let local: Vec<(usize, usize)> = inner.iter().map(|e| (e.0, e.1)).collect();
                for (a, b) in need {
                    cycle.extend(path_within(&local, at, a).into_iter().skip(1));
                    cycle.push(b);
                    at = b;
                }
                cycle.extend(path_within(&local, at, start).into_iter().skip(1));
                cycle.pop();
                return Ok(Err(Counterexample { kind: ViolationKind::Liveness, prefix: path_to(&parent, start), cycle }));
            }
        }
    }
    Ok(Ok(()))
}

fn path_within(edges: &[(usize, usize)], from: usize, to: usize) -> Vec<usize> {
    if from == to {
        return vec![from];
    }
    let mut parent: alloc::collections::BTreeMap<usize, usize> = Default::default();
    let mut queue = VecDeque::from([from]);
    while let Some(q) = queue.pop_front() {
        for &(a, b) in edges {
            if a == q && b != from && !parent.contains_key(&b) {
                parent.insert(b, a);
                if b == to {
                    let mut p = vec![to];
                    let mut c = to;
                    while c != from {
                        c = parent[&c];
                        p.push(c);
                    }
                    p.reverse();
                    return p;
                }
                queue.push_back(b);
            }
        }
    }
    unreachable!("states of one component are mutually reachable")
}

/// Tarjan's algorithm; returns a component id per node.
fn scc(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for (a, b) in edges {
        adj[a].push(b);
    }
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // iterative DFS: (node, next child position)
        let mut work = vec![(root, 0usize)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut ci)) = work.last_mut() {
            if *ci < adj[v].len() {
                let w = adj[v][*ci];
                *ci += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(u, _)) = work.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = v;
                        if w == v {
                            break;
                        }
                    }
                }
            }
        }
    }
    comp
}
