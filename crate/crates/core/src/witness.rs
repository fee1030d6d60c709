//! Certificate generators and semantic oracles. Nothing here is trusted: every
//! certificate produced is meant to be re-checked by the kernel.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::encode::{Claim, ClaimKind, Graph, Lts, Problem};
use crate::fpc::{Assertion, Cert, DiaItem};
use crate::terms::{Formula, PredExpr, Symbol, Term};

/// A binary relation on states, ordered for stable printing.
pub type PairSet = BTreeSet<(Symbol, Symbol)>;

/// Intermediate nodes of a shortest path of at least one edge from `x` to
/// `y`.
pub fn find_path(g: &Graph, x: &str, y: &str) -> Option<Vec<Symbol>> {
    let mut parent: HashMap<Symbol, Option<Symbol>> = HashMap::new();
    let mut queue = VecDeque::new();
    for s in g.successors(x) {
        if !parent.contains_key(s) {
            parent.insert(s.clone(), None);
            queue.push_back(s.clone());
        }
    }
    while let Some(n) = queue.pop_front() {
        if &*n == y {
            let mut path = Vec::new();
            let mut cur = parent[&n].clone();
            while let Some(p) = cur {
                cur = parent[&p].clone();
                path.push(p);
            }
            path.reverse();
            return Some(path);
        }
        for s in g.successors(&n) {
            if !parent.contains_key(s) {
                parent.insert(s.clone(), Some(n.clone()));
                queue.push_back(s.clone());
            }
        }
    }
    None
}

/// Nodes reachable from `t` in zero or more steps, in breadth-first order.
pub fn reachable_from(g: &Graph, t: &str) -> Vec<Symbol> {
    let start: Symbol = t.into();
    let mut seen = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(n) = queue.pop_front() {
        for s in g.successors(&n) {
            if !seen.contains(s) {
                seen.push(s.clone());
                queue.push_back(s.clone());
            }
        }
    }
    seen
}

fn pairs_formula<'a>(pairs: impl IntoIterator<Item = (&'a Symbol, &'a Symbol)>) -> Formula {
    let c = |s: &Symbol| Term::Const(s.clone(), Vec::new());
    Formula::disjunction(
        pairs
            .into_iter()
            .map(|(p, q)| {
                Formula::and_pos(Formula::Eq(Term::Bound(1), c(p)), Formula::Eq(Term::Bound(0), c(q)))
            })
            .collect(),
    )
}

/// `λxλy. ⋁ (x = p ∧⁺ y = q)` over the pairs of `s`.
pub fn hat(s: &PairSet) -> PredExpr {
    PredExpr::new(2, pairs_formula(s.iter().map(|(p, q)| (p, q)))).expect("closed")
}

/// `λxλy. (⋁_{a ∈ R*(t)} x = a ∧⁺ y = u) ⊃ ⊥⁻`: the pairs outside
/// `R*(t) × {u}`. An invariant for `¬ path t u` whenever `u` is not
/// reachable from `t`.
pub fn unreach_invariant(g: &Graph, t: &str, u: &str) -> PredExpr {
    let reach = reachable_from(g, t);
    let u: Symbol = u.into();
    let body = pairs_formula(reach.iter().map(|a| (a, &u)));
    PredExpr::new(2, Formula::negate(body)).expect("closed")
}

/// The largest simulation contained in `l1.states × l2.states`.
pub fn max_simulation(l1: &Lts, l2: &Lts) -> PairSet {
    let mut rel: PairSet = l1
        .states
        .iter()
        .flat_map(|p| l2.states.iter().map(move |q| (p.clone(), q.clone())))
        .collect();
    loop {
        let bad: Vec<_> = rel
            .iter()
            .filter(|(p, q)| {
                l1.trans.iter().filter(|(x, _, _)| x == p).any(|(_, a, p1)| {
                    !l2.successors(q, a).any(|q1| rel.contains(&(p1.clone(), q1.clone())))
                })
            })
            .cloned()
            .collect();
        if bad.is_empty() {
            return rel;
        }
        for pair in bad {
            rel.remove(&pair);
        }
    }
}

/// The largest bisimulation between the two systems, by partition
/// refinement of their disjoint union.
/// A state's block and its (label, target block) moves.
type Signature = (usize, BTreeSet<(Symbol, usize)>);

pub fn max_bisimulation(l1: &Lts, l2: &Lts) -> PairSet {
    let game = Game::new(l1, l2);
    let n = game.names.len();
    let mut block = vec![0usize; n];
    loop {
        // A state's signature: its block and the set of (label, block) moves.
        let mut sigs: Vec<Signature> = Vec::with_capacity(n);
        for i in 0..n {
            let moves = game.succ[i].iter().map(|(a, j)| (a.clone(), block[*j])).collect();
            sigs.push((block[i], moves));
        }
        let mut ids: HashMap<&Signature, usize> = HashMap::new();
        let next: Vec<usize> = sigs
            .iter()
            .map(|s| {
                let k = ids.len();
                *ids.entry(s).or_insert(k)
            })
            .collect();
        let stable = ids.len() == block.iter().collect::<BTreeSet<_>>().len();
        block = next;
        if stable {
            break;
        }
    }
    let mut rel = PairSet::new();
    for i in 0..game.split {
        for j in game.split..n {
            if block[i] == block[j] {
                rel.insert((game.names[i].clone(), game.names[j].clone()));
            }
        }
    }
    rel
}

/// The pairs of the largest simulation reachable from `(p, q)` by matching
/// moves: a finite simulation containing `(p, q)`, if there is one.
pub fn sim_coinvariant(l: &Lts, p: &str, q: &str) -> Option<PairSet> {
    let max = max_simulation(l, l);
    let start = (Symbol::from(p), Symbol::from(q));
    if !max.contains(&start) {
        return None;
    }
    Some(close(start, |(p, q), out| {
        for (x, a, p1) in &l.trans {
            if x == p {
                for q1 in l.successors(q, a) {
                    if max.contains(&(p1.clone(), q1.clone())) {
                        out.push((p1.clone(), q1.clone()));
                    }
                }
            }
        }
    }))
}

/// Like [`sim_coinvariant`] for bisimulation; answers to moves of `q` are
/// recorded as swapped pairs, as the second clause of the encoding expects.
pub fn bisim_coinvariant(l: &Lts, p: &str, q: &str) -> Option<PairSet> {
    let max = max_bisimulation(l, l);
    let start = (Symbol::from(p), Symbol::from(q));
    if !max.contains(&start) {
        return None;
    }
    Some(close(start, |(p, q), out| {
        for (x, a, y) in &l.trans {
            if x == p {
                for q1 in l.successors(q, a) {
                    if max.contains(&(y.clone(), q1.clone())) {
                        out.push((y.clone(), q1.clone()));
                    }
                }
            }
            if x == q {
                for p1 in l.successors(p, a) {
                    if max.contains(&(y.clone(), p1.clone())) {
                        out.push((y.clone(), p1.clone()));
                    }
                }
            }
        }
    }))
}

fn close(
    start: (Symbol, Symbol),
    step: impl Fn(&(Symbol, Symbol), &mut Vec<(Symbol, Symbol)>),
) -> PairSet {
    let mut seen = PairSet::new();
    let mut todo = vec![start];
    while let Some(pair) = todo.pop() {
        if seen.insert(pair.clone()) {
            step(&pair, &mut todo);
        }
    }
    seen
}

/// The disjoint union of two systems; states of `l2` start at `split`.
struct Game {
    names: Vec<Symbol>,
    succ: Vec<Vec<(Symbol, usize)>>,
    split: usize,
}

impl Game {
    fn new(l1: &Lts, l2: &Lts) -> Game {
        let split = l1.states.len();
        let mut names = l1.states.clone();
        names.extend(l2.states.iter().cloned());
        let mut succ = vec![Vec::new(); names.len()];
        for (offset, l) in [(0, l1), (split, l2)] {
            let index = |s: &Symbol| offset + l.states.iter().position(|x| x == s).unwrap();
            for (p, a, q) in &l.trans {
                succ[index(p)].push((a.clone(), index(q)));
            }
        }
        Game { names, succ, split }
    }

    fn index(&self, side: usize, s: &str) -> Option<usize> {
        let range = if side == 0 {
            0..self.split
        } else {
            self.split..self.names.len()
        };
        range.into_iter().find(|&i| &*self.names[i] == s)
    }

    fn moves<'a>(&'a self, i: usize, a: &'a Symbol) -> impl Iterator<Item = usize> + 'a {
        self.succ[i].iter().filter(move |(b, _)| b == a).map(|(_, j)| *j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HmlMode {
    Sim,
    Bisim,
}

#[derive(Clone, Debug)]
enum Reason {
    /// The left state has this move and no answer survives.
    Left(Symbol, usize),
    /// The right state has this move and no answer survives.
    Right(Symbol, usize),
}

/// The round of the refinement at which each pair was removed, with the move
/// that removed it.
fn removal_stages(game: &Game, mode: HmlMode) -> HashMap<(usize, usize), Reason> {
    let n = game.names.len();
    let domain = |i: usize, j: usize| match mode {
        HmlMode::Sim => i < game.split && j >= game.split,
        HmlMode::Bisim => true,
    };
    let mut removed: HashMap<(usize, usize), Reason> = HashMap::new();
    loop {
        let alive = |i, j, removed: &HashMap<_, _>| domain(i, j) && !removed.contains_key(&(i, j));
        let mut round = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !alive(i, j, &removed) {
                    continue;
                }
                let left = game.succ[i]
                    .iter()
                    .find(|(a, i1)| !game.moves(j, a).any(|j1| alive(*i1, j1, &removed)));
                if let Some((a, i1)) = left {
                    round.push(((i, j), Reason::Left(a.clone(), *i1)));
                    continue;
                }
                if mode == HmlMode::Bisim {
                    let right = game.succ[j]
                        .iter()
                        .find(|(a, j1)| !game.moves(i, a).any(|i1| alive(i1, *j1, &removed)));
                    if let Some((a, j1)) = right {
                        round.push(((i, j), Reason::Right(a.clone(), *j1)));
                    }
                }
            }
        }
        if round.is_empty() {
            return removed;
        }
        removed.extend(round);
    }
}

fn assertion_for(
    game: &Game,
    removed: &HashMap<(usize, usize), Reason>,
    memo: &mut HashMap<(usize, usize), Assertion>,
    i: usize,
    j: usize,
) -> Assertion {
    if let Some(a) = memo.get(&(i, j)) {
        return a.clone();
    }
    let item = match &removed[&(i, j)] {
        Reason::Left(a, i1) => {
            let answers: Vec<usize> = game.moves(j, a).collect();
            let parts = answers
                .into_iter()
                .map(|j1| assertion_for(game, removed, memo, *i1, j1))
                .collect();
            DiaItem::Dia(a.clone(), conjoin(parts))
        }
        Reason::Right(a, j1) => {
            let answers: Vec<usize> = game.moves(i, a).collect();
            let parts = answers
                .into_iter()
                .map(|i1| assertion_for(game, removed, memo, *j1, i1))
                .collect();
            DiaItem::NegDia(a.clone(), conjoin(parts))
        }
    };
    let out = Assertion(vec![item]);
    memo.insert((i, j), out.clone());
    out
}

fn conjoin(parts: Vec<Assertion>) -> Assertion {
    let mut items: Vec<DiaItem> = Vec::new();
    for item in Assertion::and(parts).0 {
        if !items.contains(&item) {
            items.push(item);
        }
    }
    Assertion(items)
}

/// An assertion that `p` (in `l1`) satisfies and `q` (in `l2`) does not, or
/// `None` when `q` simulates `p` (`Sim`) or is bisimilar to it (`Bisim`).
/// Negated diamonds appear only in `Bisim` mode.
pub fn distinguishing_assertion(
    l1: &Lts,
    p: &str,
    l2: &Lts,
    q: &str,
    mode: HmlMode,
) -> Option<Assertion> {
    let game = Game::new(l1, l2);
    let (i, j) = (game.index(0, p)?, game.index(1, q)?);
    let removed = removal_stages(&game, mode);
    if !removed.contains_key(&(i, j)) {
        return None;
    }
    Some(assertion_for(&game, &removed, &mut HashMap::new(), i, j))
}

/// Whether state `s` of `l` satisfies `a`.
pub fn hml_eval(l: &Lts, s: &str, a: &Assertion) -> bool {
    a.0.iter().all(|item| {
        let holds = l
            .successors(s, item.label())
            .any(|t| hml_eval(l, t, item.body()));
        match item {
            DiaItem::Dia(..) => holds,
            DiaItem::NegDia(..) => !holds,
        }
    })
}

/// A certificate for `claim`, or `None` when the claim is false.
pub fn certificate(claim: &Claim, problem: &Problem) -> Option<Cert> {
    let (x, y) = (&*claim.left, &*claim.right);
    match (claim.kind, problem) {
        (ClaimKind::Reach, Problem::Graph(g)) => find_path(g, x, y).map(Cert::Path),
        (ClaimKind::Unreach, Problem::Graph(g)) => match find_path(g, x, y) {
            Some(_) => None,
            None => Some(Cert::inv(unreach_invariant(g, x, y), Cert::bipole(1))),
        },
        (ClaimKind::Sim, Problem::Lts(l)) => {
            sim_coinvariant(l, x, y).map(|s| Cert::coinv(hat(&s), Cert::bipole(1)))
        }
        (ClaimKind::Bisim, Problem::Lts(l)) => {
            bisim_coinvariant(l, x, y).map(|s| Cert::coinv(hat(&s), Cert::bipole(1)))
        }
        (ClaimKind::Unsim, Problem::Lts(l)) => {
            distinguishing_assertion(l, x, l, y, HmlMode::Sim).map(Cert::Hml)
        }
        (ClaimKind::Unbisim, Problem::Lts(l)) => {
            distinguishing_assertion(l, x, l, y, HmlMode::Bisim).map(Cert::Hml)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::{goal, parse_problem};
    use crate::fpc::{parse_assertion, CertMode};
    use crate::kernel::{check, CheckConfig};

    fn problem(src: &str) -> Problem {
        parse_problem(src).unwrap().problem
    }

    fn lts(src: &str) -> Lts {
        match problem(src) {
            Problem::Lts(l) => l,
            Problem::Graph(_) => unreachable!(),
        }
    }

    const SMALL: &str = include_str!("../data/small.graph");
    const BRANCHING: &str = include_str!("../data/branching.lts");
    const CYCLES: &str = include_str!("../data/cycles.lts");

    #[test]
    fn paths() {
        let Problem::Graph(g) = problem(SMALL) else { unreachable!() };
        assert_eq!(find_path(&g, "a", "c"), Some(vec![Symbol::from("b")]));
        assert_eq!(find_path(&g, "a", "b"), Some(vec![]));
        assert_eq!(find_path(&g, "a", "a"), None);
        assert_eq!(find_path(&g, "b", "b"), Some(vec![Symbol::from("c")]));
        assert_eq!(find_path(&g, "b", "d"), None);
    }

    #[test]
    fn unreach_certificate_text() {
        let c = certificate(&Claim::parse("unreach b d").unwrap(), &problem(SMALL)).unwrap();
        assert_eq!(
            c.to_string(),
            "(inv (lam (x y) (imp (or (and+ (= x b) (= y d)) (and+ (= x c) (= y d))) false-)) (bipole 1))"
        );
        assert!(certificate(&Claim::parse("unreach a c").unwrap(), &problem(SMALL)).is_none());
    }

    #[test]
    fn coinvariants() {
        let l = lts(CYCLES);
        let s = sim_coinvariant(&l, "21", "23").unwrap();
        let want: PairSet = [("21", "23"), ("22", "24")]
            .into_iter()
            .map(|(a, b)| (a.into(), b.into()))
            .collect();
        assert_eq!(s, want);
        assert!(sim_coinvariant(&l, "23", "21").is_none());
        let l = lts(BRANCHING);
        assert!(max_simulation(&l, &l).contains(&("6".into(), "10".into())));
        assert!(!max_bisimulation(&l, &l).contains(&("6".into(), "10".into())));
        assert!(bisim_coinvariant(&l, "6", "6").is_some());
    }

    #[test]
    fn no_transitions_everything_related() {
        let l = Lts::from_trans(&["x", "y"], &[]);
        assert_eq!(max_simulation(&l, &l).len(), 4);
        assert_eq!(max_bisimulation(&l, &l).len(), 4);
    }

    #[test]
    fn hml() {
        let l = lts(BRANCHING);
        let xi = parse_assertion("(dia a (not (dia b tt)))", CertMode::General).unwrap();
        assert!(hml_eval(&l, "10", &xi));
        assert!(!hml_eval(&l, "6", &xi));
        assert!(hml_eval(&l, "4", &Assertion::tt()));
        let xi = parse_assertion("(dia a (and (dia b tt) (dia c tt)))", CertMode::General).unwrap();
        assert!(hml_eval(&l, "6", &xi) && !hml_eval(&l, "1", &xi));
    }

    #[test]
    fn distinguishing() {
        let l = lts(BRANCHING);
        for mode in [HmlMode::Sim, HmlMode::Bisim] {
            assert!(distinguishing_assertion(&l, "6", &l, "6", mode).is_none());
        }
        let a = distinguishing_assertion(&l, "6", &l, "1", HmlMode::Sim).unwrap();
        assert!(hml_eval(&l, "6", &a) && !hml_eval(&l, "1", &a));
        assert!(!a.has_neg_dia());
        assert!(distinguishing_assertion(&l, "1", &l, "6", HmlMode::Sim).is_none());
        let a = distinguishing_assertion(&l, "6", &l, "10", HmlMode::Bisim).unwrap();
        assert!(hml_eval(&l, "6", &a) && !hml_eval(&l, "10", &a));
    }

    #[test]
    fn generated_certificates_check() {
        let cases = [
            (SMALL, "reach a c"),
            (SMALL, "reach b b"),
            (SMALL, "unreach b d"),
            (SMALL, "unreach d a"),
            (BRANCHING, "sim 1 6"),
            (BRANCHING, "sim 6 10"),
            (BRANCHING, "bisim 6 6"),
            (BRANCHING, "unsim 6 1"),
            (BRANCHING, "unbisim 6 10"),
            (BRANCHING, "unbisim 10 6"),
            (CYCLES, "sim 21 23"),
        ];
        for (src, claim) in cases {
            let p = problem(src);
            let claim = Claim::parse(claim).unwrap();
            let cert = certificate(&claim, &p).unwrap_or_else(|| panic!("{claim}: no certificate"));
            let g = goal(&claim, &p).unwrap();
            let v = check(claim.kind.table().as_ref(), &cert, &g, &CheckConfig::default());
            assert!(
                matches!(&v, Ok(v) if v.is_accepted()),
                "{claim} with {cert}: {v:?}"
            );
        }
    }
}
