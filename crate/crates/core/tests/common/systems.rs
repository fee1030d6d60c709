//! Random graphs and transition systems with boolean-matrix oracles.

use fpc_checker::encode::{Graph, Lts};
use fpc_checker::fpc::{Assertion, DiaItem};
use rand::Rng;

pub fn random_graph(rng: &mut impl Rng) -> Graph {
    let n = rng.gen_range(1..=8);
    let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let density = rng.gen_range(0.05..0.4);
    let mut g = Graph::new();
    for a in &names {
        g.add_node(a);
    }
    for a in &names {
        for b in &names {
            if rng.gen_bool(density) {
                g.add_edge(a, b);
            }
        }
    }
    g
}

pub fn random_lts(rng: &mut impl Rng) -> Lts {
    let n = rng.gen_range(1..=8);
    let labels = ["a", "b", "c"];
    let k = rng.gen_range(1..=3);
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let density = rng.gen_range(0.03..0.25);
    let mut l = Lts::new();
    for s in &names {
        l.add_state(s);
    }
    for p in &names {
        for a in &labels[..k] {
            for q in &names {
                if rng.gen_bool(density) {
                    l.add_trans(p, a, q);
                }
            }
        }
    }
    l
}

fn index(names: &[std::sync::Arc<str>], s: &str) -> usize {
    names.iter().position(|x| &**x == s).unwrap()
}

/// Floyd-Warshall: `r[i][j]` iff there is a path of at least one edge.
pub fn closure(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.nodes.len();
    let mut r = vec![vec![false; n]; n];
    for (a, b) in &g.edges {
        r[index(&g.nodes, a)][index(&g.nodes, b)] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

pub fn reaches(g: &Graph, x: &str, y: &str) -> bool {
    closure(g)[index(&g.nodes, x)][index(&g.nodes, y)]
}

fn moves(l: &Lts) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![Vec::new(); l.states.len()];
    for (p, a, q) in &l.trans {
        out[index(&l.states, p)].push((index(&l.labels, a), index(&l.states, q)));
    }
    out
}

/// Greatest fixed point of the (bi)simulation condition over state pairs.
pub fn similarity(l: &Lts, both_ways: bool) -> Vec<Vec<bool>> {
    let n = l.states.len();
    let m = moves(l);
    let mut r = vec![vec![true; n]; n];
    let answered = |r: &Vec<Vec<bool>>, i: usize, j: usize| {
        m[i].iter().all(|&(a, i1)| m[j].iter().any(|&(b, j1)| a == b && r[i1][j1]))
    };
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if r[i][j] && (!answered(&r, i, j) || (both_ways && !answered(&r, j, i))) {
                    r[i][j] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return r;
        }
    }
}

pub fn simulates(l: &Lts, p: &str, q: &str, both_ways: bool) -> bool {
    similarity(l, both_ways)[index(&l.states, p)][index(&l.states, q)]
}

/// Whether `pairs` contains `(p, q)` and satisfies the coinduction closure
/// of the simulation encoding, or of the bisimulation one (whose second
/// clause answers with swapped pairs).
pub fn is_coinvariant(l: &Lts, pairs: &[(String, String)], p: &str, q: &str, bisim: bool) -> bool {
    let has = |x: &str, y: &str| pairs.iter().any(|(a, b)| a == x && b == y);
    // Moves of `x` answered by `y`; the recorded pair is always (move, answer),
    // which for the second bisimulation clause is the swapped orientation.
    let answered = |x: &str, y: &str| {
        l.trans.iter().filter(|(s, _, _)| &**s == x).all(|(_, a, x1)| {
            l.successors(y, a).any(|y1| has(x1, y1))
        })
    };
    has(p, q)
        && pairs
            .iter()
            .all(|(x, y)| answered(x, y) && (!bisim || answered(y, x)))
}

/// Whether `a` is a winning refutation strategy for `(p, q)`: some item
/// names a move of `p` (or, negated, of `q`) none of whose answers survive
/// the item's body. This is how the non-(bi)simulation certificates are read.
pub fn refutes(l: &Lts, p: &str, q: &str, a: &Assertion, bisim: bool) -> bool {
    a.0.iter().any(|item| match item {
        DiaItem::Dia(lab, b) => l.successors(p, lab).any(|p1| {
            l.successors(q, lab).all(|q1| refutes(l, p1, q1, b, bisim))
        }),
        DiaItem::NegDia(lab, b) => {
            bisim
                && l.successors(q, lab)
                    .any(|q1| l.successors(p, lab).all(|p1| refutes(l, q1, p1, b, bisim)))
        }
    })
}
