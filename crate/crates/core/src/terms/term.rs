use std::fmt;
use std::sync::Arc;

pub type Symbol = Arc<str>;

/// A unification variable. `level` bounds which eigenvariables it may be
/// bound to: only those whose level is at most its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub id: u32,
    pub level: u32,
}

/// A fresh parameter introduced by an eigenvariable rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Eigen {
    pub id: u32,
    pub level: u32,
}

/// First-order terms. `Bound` is a de Bruijn index pointing at an enclosing
/// quantifier or fixed-point parameter; it never appears in a sequent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(Symbol, Vec<Term>),
    Var(Var),
    Eigen(Eigen),
    Bound(u32),
}

impl Term {
    pub fn constant(name: &str) -> Term {
        Term::Const(Arc::from(name), Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::Const(Arc::from(name), args)
    }

    /// The symbol of a 0-ary constant.
    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Term::Const(name, args) if args.is_empty() => Some(name),
            _ => None,
        }
    }

    /// True when no de Bruijn index occurs.
    pub fn is_closed(&self) -> bool {
        match self {
            Term::Bound(_) => false,
            Term::Const(_, args) => args.iter().all(Term::is_closed),
            _ => true,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Const(_, args) => args.iter().all(Term::is_ground),
            _ => false,
        }
    }

    /// Largest index `k - depth` of a `Bound(k)` with `k >= depth`, plus one.
    pub(crate) fn free_extent(&self, depth: u32) -> u32 {
        match self {
            Term::Bound(k) if *k >= depth => k - depth + 1,
            Term::Const(_, args) => args.iter().map(|a| a.free_extent(depth)).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn for_each_eigen(&self, f: &mut impl FnMut(Eigen)) {
        match self {
            Term::Eigen(e) => f(*e),
            Term::Const(_, args) => args.iter().for_each(|a| a.for_each_eigen(f)),
            _ => {}
        }
    }

    pub fn for_each_var(&self, f: &mut impl FnMut(Var)) {
        match self {
            Term::Var(v) => f(*v),
            Term::Const(_, args) => args.iter().for_each(|a| a.for_each_var(f)),
            _ => {}
        }
    }

    pub fn mentions_eigen(&self, id: u32) -> bool {
        match self {
            Term::Eigen(e) => e.id == id,
            Term::Const(_, args) => args.iter().any(|a| a.mentions_eigen(id)),
            _ => false,
        }
    }

    /// Rebuilds the term bottom-up, letting `f` replace variable leaves.
    pub fn map_leaves(&self, f: &impl Fn(&Term) -> Option<Term>) -> Term {
        match self {
            Term::Const(name, args) => {
                Term::Const(name.clone(), args.iter().map(|a| a.map_leaves(f)).collect())
            }
            leaf => f(leaf).unwrap_or_else(|| leaf.clone()),
        }
    }

    pub fn for_each_const(&self, f: &mut impl FnMut(&str)) {
        if let Term::Const(name, args) = self {
            f(name);
            args.iter().for_each(|a| a.for_each_const(f));
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(name, args) if args.is_empty() => write!(f, "{name}"),
            Term::Const(name, args) => {
                write!(f, "({name}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
            Term::Var(v) => write!(f, "_X{}", v.id),
            Term::Eigen(e) => write!(f, "_e{}", e.id),
            Term::Bound(k) => write!(f, "#{k}"),
        }
    }
}
