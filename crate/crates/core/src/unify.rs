//! First-order unification with a backtrackable trail.
//!
//! Logic variables carry a level; they may only be bound to terms whose
//! eigenvariables have a level no greater than theirs. Two modes exist:
//! [`BindingStore::unify`] binds logic variables and treats eigenvariables as
//! constants (right-hand equality), while [`unify_eigens`] computes a local
//! substitution for eigenvariables (left-hand equality) without touching the
//! store.

use std::collections::HashMap;

use thiserror::Error;

use crate::terms::{Eigen, Term, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unification {
    Unified,
    Clash,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("checkpoint was already released or rolled past")]
    StaleCheckpoint,
}

/// Marks a trail depth; see [`BindingStore::rollback`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    id: u64,
}

#[derive(Clone, Debug, Default)]
pub struct BindingStore {
    bindings: HashMap<u32, Term>,
    trail: Vec<u32>,
    marks: Vec<(u64, usize)>,
    next_mark: u64,
    next_id: u32,
}

impl BindingStore {
    pub fn new() -> BindingStore {
        BindingStore::default()
    }

    pub fn fresh_var(&mut self, level: u32) -> Var {
        self.next_id += 1;
        Var {
            id: self.next_id,
            level,
        }
    }

    pub fn fresh_eigen(&mut self, level: u32) -> Eigen {
        self.next_id += 1;
        Eigen {
            id: self.next_id,
            level,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn lookup(&self, v: Var) -> Option<&Term> {
        self.bindings.get(&v.id)
    }

    pub fn checkpoint(&mut self) -> Checkpoint {
        self.next_mark += 1;
        self.marks.push((self.next_mark, self.trail.len()));
        Checkpoint { id: self.next_mark }
    }

    /// Undoes every binding made since `cp`. The checkpoint stays live, so
    /// rolling back to it again is a no-op; later checkpoints are released.
    pub fn rollback(&mut self, cp: Checkpoint) -> Result<(), UnifyError> {
        let pos = self
            .marks
            .iter()
            .rposition(|(id, _)| *id == cp.id)
            .ok_or(UnifyError::StaleCheckpoint)?;
        let depth = self.marks[pos].1;
        self.undo_to(depth);
        self.marks.truncate(pos + 1);
        Ok(())
    }

    /// Forgets `cp` (and any later checkpoint), keeping the bindings.
    pub fn release(&mut self, cp: Checkpoint) -> Result<(), UnifyError> {
        let pos = self
            .marks
            .iter()
            .rposition(|(id, _)| *id == cp.id)
            .ok_or(UnifyError::StaleCheckpoint)?;
        self.marks.truncate(pos);
        Ok(())
    }

    fn undo_to(&mut self, depth: usize) {
        while self.trail.len() > depth {
            let id = self.trail.pop().unwrap();
            self.bindings.remove(&id);
        }
    }

    fn bind(&mut self, v: Var, t: Term) {
        self.bindings.insert(v.id, t);
        self.trail.push(v.id);
    }

    fn deref<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.bindings.get(&v.id) {
                Some(next) => t = next,
                None => break,
            }
        }
        t
    }

    /// Replaces bound variables transitively.
    pub fn resolve(&self, t: &Term) -> Term {
        match self.deref(t) {
            Term::Const(name, args) if !args.is_empty() => {
                Term::Const(name.clone(), args.iter().map(|a| self.resolve(a)).collect())
            }
            other => other.clone(),
        }
    }

    /// Unifies `s` and `t`, binding logic variables only. On `Clash` the
    /// store is left exactly as it was.
    pub fn unify(&mut self, s: &Term, t: &Term) -> Unification {
        let depth = self.trail.len();
        if self.unify_all(s.clone(), t.clone()) {
            Unification::Unified
        } else {
            self.undo_to(depth);
            Unification::Clash
        }
    }

    fn unify_all(&mut self, s: Term, t: Term) -> bool {
        let mut work = vec![(s, t)];
        while let Some((a, b)) = work.pop() {
            let a = self.deref(&a).clone();
            let b = self.deref(&b).clone();
            match (a, b) {
                (Term::Var(x), Term::Var(y)) if x.id == y.id => {}
                (Term::Var(x), Term::Var(y)) => {
                    // the more permissive variable points at the stricter one
                    if x.level >= y.level {
                        self.bind(x, Term::Var(y));
                    } else {
                        self.bind(y, Term::Var(x));
                    }
                }
                (Term::Var(x), other) | (other, Term::Var(x)) => {
                    if !self.bind_checked(x, other) {
                        return false;
                    }
                }
                (Term::Eigen(e), Term::Eigen(f)) => {
                    if e.id != f.id {
                        return false;
                    }
                }
                (Term::Const(f, xs), Term::Const(g, ys)) => {
                    if f != g || xs.len() != ys.len() {
                        return false;
                    }
                    work.extend(xs.into_iter().zip(ys));
                }
                _ => return false,
            }
        }
        true
    }

    // occurs check, eigenvariable level check, and level lowering of the
    // unbound variables of `t`
    fn bind_checked(&mut self, x: Var, t: Term) -> bool {
        let resolved = self.resolve(&t);
        let mut ok = true;
        let mut to_lower = Vec::new();
        resolved.for_each_var(&mut |y| {
            if y.id == x.id {
                ok = false;
            } else if y.level > x.level {
                to_lower.push(y);
            }
        });
        resolved.for_each_eigen(&mut |e| {
            if e.level > x.level {
                ok = false;
            }
        });
        if !ok {
            return false;
        }
        to_lower.sort();
        to_lower.dedup();
        for y in to_lower {
            let z = self.fresh_var(x.level);
            self.bind(y, Term::Var(z));
        }
        self.bind(x, resolved);
        true
    }
}

/// Outcome of unifying two terms over their eigenvariables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EigenUnification {
    /// An idempotent most general substitution for eigenvariables.
    Unified(Vec<(Eigen, Term)>),
    /// No instantiation of the eigenvariables (or of any logic variable)
    /// makes the terms equal.
    Clash,
    /// Undecided: an unbound logic variable, or a binding that would let an
    /// eigenvariable capture a younger one.
    Stuck,
}

/// Left-hand equality: eigenvariables are the unknowns. Logic variables are
/// resolved through `store`; any still unbound make the problem `Stuck`
/// unless a rigid clash exists elsewhere.
pub fn unify_eigens(s: &Term, t: &Term, store: &BindingStore) -> EigenUnification {
    let mut local: HashMap<u32, (Eigen, Term)> = HashMap::new();
    let mut stuck = false;
    let mut work = vec![(store.resolve(s), store.resolve(t))];

    fn walk(t: &Term, local: &HashMap<u32, (Eigen, Term)>) -> Term {
        match t {
            Term::Eigen(e) => match local.get(&e.id) {
                Some((_, u)) => walk(u, local),
                None => t.clone(),
            },
            Term::Const(name, args) if !args.is_empty() => {
                Term::Const(name.clone(), args.iter().map(|a| walk(a, local)).collect())
            }
            other => other.clone(),
        }
    }

    while let Some((a, b)) = work.pop() {
        let a = walk(&a, &local);
        let b = walk(&b, &local);
        match (a, b) {
            (Term::Var(x), Term::Var(y)) if x.id == y.id => {}
            (Term::Var(_), _) | (_, Term::Var(_)) => stuck = true,
            (Term::Eigen(e), Term::Eigen(f)) if e.id == f.id => {}
            (Term::Eigen(e), Term::Eigen(f)) => {
                let (young, old) = if (e.level, e.id) > (f.level, f.id) {
                    (e, f)
                } else {
                    (f, e)
                };
                local.insert(young.id, (young, Term::Eigen(old)));
            }
            (Term::Eigen(e), other) | (other, Term::Eigen(e)) => {
                if other.mentions_eigen(e.id) {
                    return EigenUnification::Clash;
                }
                let mut has_var = false;
                let mut too_young = false;
                other.for_each_var(&mut |_| has_var = true);
                other.for_each_eigen(&mut |f| too_young |= f.level > e.level);
                if has_var || too_young {
                    stuck = true;
                } else {
                    local.insert(e.id, (e, other));
                }
            }
            (Term::Const(f, xs), Term::Const(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return EigenUnification::Clash;
                }
                work.extend(xs.into_iter().zip(ys));
            }
            _ => return EigenUnification::Clash,
        }
    }
    if stuck {
        return EigenUnification::Stuck;
    }
    let mut theta: Vec<(Eigen, Term)> = local
        .values()
        .map(|(e, t)| (*e, walk(t, &local)))
        .collect();
    theta.sort_by_key(|(e, _)| e.id);
    EigenUnification::Unified(theta)
}

/// Applies an eigenvariable substitution to a term.
pub fn apply_eigen_subst(t: &Term, theta: &[(Eigen, Term)]) -> Term {
    t.map_leaves(&|leaf| match leaf {
        Term::Eigen(e) => theta
            .iter()
            .find(|(f, _)| f.id == e.id)
            .map(|(_, u)| u.clone()),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: &str) -> Term {
        Term::constant(n)
    }

    #[test]
    fn binds_variable_to_constant() {
        let mut st = BindingStore::new();
        let x = st.fresh_var(0);
        assert_eq!(st.unify(&Term::Var(x), &c("b")), Unification::Unified);
        assert_eq!(st.resolve(&Term::Var(x)), c("b"));
    }

    #[test]
    fn distinct_constants_clash() {
        let mut st = BindingStore::new();
        assert_eq!(st.unify(&c("b"), &c("c")), Unification::Clash);
        assert!(st.is_empty());
    }

    #[test]
    fn independent_subterms() {
        let mut st = BindingStore::new();
        let e1 = st.fresh_eigen(1);
        let e2 = st.fresh_eigen(1);
        let x = st.fresh_var(2);
        let y = st.fresh_var(2);
        let s = Term::app("f", vec![Term::Var(x), Term::Eigen(e2)]);
        let t = Term::app("f", vec![Term::Eigen(e1), Term::Var(y)]);
        assert_eq!(st.unify(&s, &t), Unification::Unified);
        assert_eq!(st.resolve(&Term::Var(x)), Term::Eigen(e1));
        assert_eq!(st.resolve(&Term::Var(y)), Term::Eigen(e2));
    }

    #[test]
    fn level_violation_clashes() {
        let mut st = BindingStore::new();
        let x = st.fresh_var(0);
        let e = st.fresh_eigen(1);
        assert_eq!(st.unify(&Term::Var(x), &Term::Eigen(e)), Unification::Clash);
        assert!(st.is_empty());
    }

    #[test]
    fn occurs_check() {
        let mut st = BindingStore::new();
        let x = st.fresh_var(0);
        let fx = Term::app("f", vec![Term::Var(x)]);
        assert_eq!(st.unify(&Term::Var(x), &fx), Unification::Clash);
    }

    #[test]
    fn clash_leaves_no_partial_bindings() {
        let mut st = BindingStore::new();
        let x = st.fresh_var(0);
        let s = Term::app("g", vec![Term::Var(x), c("a")]);
        let t = Term::app("g", vec![c("b"), c("c")]);
        assert_eq!(st.unify(&s, &t), Unification::Clash);
        assert!(st.is_empty());
        assert_eq!(st.resolve(&Term::Var(x)), Term::Var(x));
    }

    #[test]
    fn lowering_keeps_levels_sound() {
        let mut st = BindingStore::new();
        let x = st.fresh_var(0);
        let y = st.fresh_var(5);
        let e = st.fresh_eigen(3);
        let fy = Term::app("f", vec![Term::Var(y)]);
        assert_eq!(st.unify(&Term::Var(x), &fy), Unification::Unified);
        // y now lives at level 0 and cannot see e
        assert_eq!(st.unify(&Term::Var(y), &Term::Eigen(e)), Unification::Clash);
    }

    #[test]
    fn rollback_restores_store() {
        let mut st = BindingStore::new();
        let x = st.fresh_var(0);
        let y = st.fresh_var(0);
        let cp = st.checkpoint();
        st.unify(&Term::Var(x), &c("a"));
        let inner = st.checkpoint();
        st.unify(&Term::Var(y), &c("b"));
        st.rollback(inner).unwrap();
        assert_eq!(st.resolve(&Term::Var(y)), Term::Var(y));
        assert_eq!(st.resolve(&Term::Var(x)), c("a"));
        st.rollback(cp).unwrap();
        st.rollback(cp).unwrap();
        assert!(st.is_empty());
        assert_eq!(st.rollback(inner), Err(UnifyError::StaleCheckpoint));
        st.release(cp).unwrap();
        assert_eq!(st.rollback(cp), Err(UnifyError::StaleCheckpoint));
    }

    #[test]
    fn resolve_is_transitive() {
        let mut st = BindingStore::new();
        let x = st.fresh_var(0);
        let y = st.fresh_var(0);
        st.unify(&Term::Var(x), &Term::app("g", vec![Term::Var(y)]));
        let fx = Term::app("f", vec![Term::Var(x)]);
        assert_eq!(
            st.resolve(&fx),
            Term::app("f", vec![Term::app("g", vec![Term::Var(y)])])
        );
    }

    #[test]
    fn eigen_mode() {
        let st = BindingStore::new();
        let mut st2 = BindingStore::new();
        let y = st2.fresh_eigen(1);
        let z = st2.fresh_eigen(2);
        assert_eq!(
            unify_eigens(&Term::Eigen(y), &c("b"), &st),
            EigenUnification::Unified(vec![(y, c("b"))])
        );
        assert_eq!(
            unify_eigens(&Term::Eigen(z), &Term::Eigen(y), &st),
            EigenUnification::Unified(vec![(z, Term::Eigen(y))])
        );
        assert_eq!(unify_eigens(&c("a"), &c("b"), &st), EigenUnification::Clash);
        let fy = Term::app("f", vec![Term::Eigen(y)]);
        assert_eq!(unify_eigens(&Term::Eigen(y), &fy, &st), EigenUnification::Clash);
        let x = st2.fresh_var(0);
        assert_eq!(
            unify_eigens(&Term::Var(x), &c("a"), &st2),
            EigenUnification::Stuck
        );
        let s = Term::app("g", vec![Term::Var(x), c("a")]);
        let t = Term::app("g", vec![c("b"), c("c")]);
        assert_eq!(unify_eigens(&s, &t, &st2), EigenUnification::Clash);
    }
}
