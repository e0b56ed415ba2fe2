//! Truth-table oracles over at most 16 variables.

/// Random-expression AST used to drive property tests.
#[derive(Clone, Debug)]
pub enum E {
    V(u32),
    C(bool),
    Not(Box<E>),
    And(Box<E>, Box<E>),
    Or(Box<E>, Box<E>),
    Xor(Box<E>, Box<E>),
}

impl E {
    pub fn eval(&self, a: u64) -> bool {
        match self {
            E::V(v) => a >> v & 1 == 1,
            E::C(b) => *b,
            E::Not(x) => !x.eval(a),
            E::And(x, y) => x.eval(a) && y.eval(a),
            E::Or(x, y) => x.eval(a) || y.eval(a),
            E::Xor(x, y) => x.eval(a) ^ y.eval(a),
        }
    }

    pub fn build(&self, m: &mut gr1_core::bdd::BddManager) -> gr1_core::bdd::BddRef {
        match self {
            E::V(v) => m.var(*v),
            E::C(b) => m.constant(*b),
            E::Not(x) => {
                let x = x.build(m);
                m.not(x)
            }
            E::And(x, y) => {
                let (x, y) = (x.build(m), y.build(m));
                m.and(x, y)
            }
            E::Or(x, y) => {
                let (x, y) = (x.build(m), y.build(m));
                m.or(x, y)
            }
            E::Xor(x, y) => {
                let (x, y) = (x.build(m), y.build(m));
                m.xor(x, y)
            }
        }
    }
}

pub fn arb_expr(nvars: u32, depth: u32) -> impl proptest::strategy::Strategy<Value = E> {
    use proptest::prelude::*;
    let leaf = prop_oneof![(0..nvars).prop_map(E::V), any::<bool>().prop_map(E::C)];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|x| E::Not(Box::new(x))),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| E::And(Box::new(x), Box::new(y))),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| E::Or(Box::new(x), Box::new(y))),
            (inner.clone(), inner).prop_map(|(x, y)| E::Xor(Box::new(x), Box::new(y))),
        ]
    })
}

/// Prime implicants of the function with truth table `table` (index = assignment bits).
///
/// Cubes are indexed in base 3 (digit 0 = false, 1 = true, 2 = absent); an
/// absent digit is an implicant iff both of its completions are.
pub fn prime_implicants(n: usize, table: &[bool]) -> Vec<Vec<(u32, bool)>> {
    assert!(n <= 16 && table.len() == 1 << n);
    let total = 3usize.pow(n as u32);
    let mut imp = vec![false; total];
    let pow3: Vec<usize> = (0..n).map(|i| 3usize.pow(i as u32)).collect();
    for c in 0..total {
        let mut rest = c;
        let mut assign = 0usize;
        let mut free = None;
        for i in 0..n {
            let d = rest % 3;
            rest /= 3;
            match d {
                1 => assign |= 1 << i,
                2 => {
                    free = Some(i);
                    break;
                }
                _ => {}
            }
        }
        imp[c] = match free {
            None => table[assign],
            Some(i) => imp[c - 2 * pow3[i]] && imp[c - pow3[i]],
        };
    }
    let mut out = Vec::new();
    for c in 0..total {
        if !imp[c] {
            continue;
        }
        let mut lits = Vec::new();
        let mut prime = true;
        let mut rest = c;
        for i in 0..n {
            let d = rest % 3;
            rest /= 3;
            if d != 2 {
                lits.push((i as u32, d == 1));
                if imp[c + (2 - d) * pow3[i]] {
                    prime = false;
                }
            }
        }
        if prime {
            out.push(lits);
        }
    }
    out
}
