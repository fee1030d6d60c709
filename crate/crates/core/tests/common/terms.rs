//! Random first-order terms and a textbook unifier to compare against.

use std::collections::HashMap;

use fpc_checker::terms::{Term, Var};
use fpc_checker::unify::{BindingStore, Unification};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// `a`, `b`, `f/1`, `g/2`, `h/2`.
pub const SIGNATURE: [(&str, usize); 5] = [("a", 0), ("b", 0), ("f", 1), ("g", 2), ("h", 2)];

pub fn random_term(rng: &mut impl Rng, vars: &[Var], depth: u32) -> Term {
    if depth == 0 || rng.gen_bool(0.3) {
        if !vars.is_empty() && rng.gen_bool(0.5) {
            return Term::Var(vars[rng.gen_range(0..vars.len())]);
        }
        let (c, _) = SIGNATURE[rng.gen_range(0..2)];
        return Term::constant(c);
    }
    let (f, n) = SIGNATURE[rng.gen_range(0..SIGNATURE.len())];
    let args = (0..n).map(|_| random_term(rng, vars, depth - 1)).collect();
    Term::app(f, args)
}

pub type Subst = HashMap<Var, Term>;

pub fn apply(t: &Term, s: &Subst) -> Term {
    match t {
        Term::Var(v) => match s.get(v) {
            Some(u) => apply(u, s),
            None => t.clone(),
        },
        Term::Const(f, args) => Term::Const(f.clone(), args.iter().map(|a| apply(a, s)).collect()),
        other => other.clone(),
    }
}

fn occurs(v: Var, t: &Term) -> bool {
    match t {
        Term::Var(w) => *w == v,
        Term::Const(_, args) => args.iter().any(|a| occurs(v, a)),
        _ => false,
    }
}

/// Robinson's algorithm on terms without eigenvariables.
pub fn robinson(s: &Term, t: &Term) -> Option<Subst> {
    let mut sub = Subst::new();
    let mut work = vec![(s.clone(), t.clone())];
    while let Some((x, y)) = work.pop() {
        let (x, y) = (apply(&x, &sub), apply(&y, &sub));
        match (&x, &y) {
            _ if x == y => {}
            (Term::Var(v), u) | (u, Term::Var(v)) => {
                if occurs(*v, u) {
                    return None;
                }
                sub.insert(*v, u.clone());
            }
            (Term::Const(f, xs), Term::Const(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                work.extend(xs.iter().cloned().zip(ys.iter().cloned()));
            }
            _ => return None,
        }
    }
    Some(sub)
}

/// Whether `s` and `t` are equal up to a bijective renaming of variables.
pub fn is_variant(s: &Term, t: &Term) -> bool {
    fn go(s: &Term, t: &Term, fwd: &mut HashMap<Var, Var>, back: &mut HashMap<Var, Var>) -> bool {
        match (s, t) {
            (Term::Var(x), Term::Var(y)) => {
                *fwd.entry(*x).or_insert(*y) == *y && *back.entry(*y).or_insert(*x) == *x
            }
            (Term::Const(f, xs), Term::Const(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(a, b)| go(a, b, fwd, back))
            }
            _ => s == t,
        }
    }
    go(s, t, &mut HashMap::new(), &mut HashMap::new())
}

/// Every assignment of the given variables to a small set of ground terms.
pub fn groundings(vars: &[Var]) -> Vec<Subst> {
    let pool = [
        Term::constant("a"),
        Term::constant("b"),
        Term::app("f", vec![Term::constant("a")]),
        Term::app("f", vec![Term::constant("b")]),
        Term::app("g", vec![Term::constant("a"), Term::constant("b")]),
    ];
    let mut out = vec![Subst::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|s| {
                pool.iter().map(move |g| {
                    let mut s = s.clone();
                    s.insert(*v, g.clone());
                    s
                })
            })
            .collect();
    }
    out
}

/// Returns the number of pairs that unified.
pub fn check_against_robinson(seed: u64, pairs: usize) -> usize {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut unified = 0;
    for _ in 0..pairs {
        let mut store = BindingStore::new();
        let vars: Vec<_> = (0..3).map(|_| store.fresh_var(0)).collect();
        let s = random_term(&mut rng, &vars, 3);
        let t = random_term(&mut rng, &vars, 3);
        let oracle = robinson(&s, &t);
        let got = store.unify(&s, &t);
        assert_eq!(got == Unification::Unified, oracle.is_some(), "{s:?} vs {t:?}");
        let tuple = |f: &dyn Fn(&Term) -> Term| Term::app("tuple", vars.iter().map(|v| f(&Term::Var(*v))).collect());
        match oracle {
            Some(sigma) => {
                unified += 1;
                assert_eq!(store.resolve(&s), store.resolve(&t));
                // Both are most general, so they agree up to renaming.
                let mine = tuple(&|x| store.resolve(x));
                let theirs = tuple(&|x| apply(x, &sigma));
                assert!(is_variant(&mine, &theirs), "{mine:?} vs {theirs:?}");
            }
            None => {
                assert!(store.is_empty());
                for g in groundings(&vars) {
                    assert_ne!(apply(&s, &g), apply(&t, &g), "clash on unifiable {s:?} {t:?}");
                }
            }
        }
    }
    unified
}

/// Binds a variable to a term holding an eigenvariable at a random level and
/// asserts the outcome follows the level order. Returns (clashes, binds).
pub fn check_levels(seed: u64, trials: usize) -> (usize, usize) {
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut clashes, mut binds) = (0, 0);
    for _ in 0..trials {
        let mut store = BindingStore::new();
        let x = store.fresh_var(rng.gen_range(0..4));
        let e = store.fresh_eigen(rng.gen_range(0..4));
        let t = Term::app("f", vec![Term::constant("a"), Term::Eigen(e)]);
        let got = store.unify(&Term::Var(x), &t);
        if e.level > x.level {
            assert_eq!(got, Unification::Clash);
            assert!(store.is_empty());
            clashes += 1;
        } else {
            assert_eq!(got, Unification::Unified);
            binds += 1;
        }
    }
    (clashes, binds)
}
