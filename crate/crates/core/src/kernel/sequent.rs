use std::fmt;

use crate::terms::{Eigen, Formula, Term, Var};
use crate::unify::BindingStore;

/// The three sequent shapes. In `Async`, `n` and `p` are the stores of
/// negative (left) and positive (right) formulas; `gamma` and `delta` are
/// the formulas still to be decomposed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sequent {
    Async {
        n: Vec<Formula>,
        gamma: Vec<Formula>,
        delta: Vec<Formula>,
        p: Vec<Formula>,
    },
    FocusL(Formula),
    FocusR(Formula),
}

impl Sequent {
    pub fn goal(f: Formula) -> Sequent {
        Sequent::Async {
            n: Vec::new(),
            gamma: Vec::new(),
            delta: vec![f],
            p: Vec::new(),
        }
    }

    pub fn formula_count(&self) -> usize {
        match self {
            Sequent::Async { n, gamma, delta, p } => n.len() + gamma.len() + delta.len() + p.len(),
            Sequent::FocusL(_) | Sequent::FocusR(_) => 1,
        }
    }

    pub fn formulas(&self) -> Vec<&Formula> {
        match self {
            Sequent::Async { n, gamma, delta, p } => {
                n.iter().chain(gamma).chain(delta).chain(p).collect()
            }
            Sequent::FocusL(f) | Sequent::FocusR(f) => vec![f],
        }
    }

    pub fn map_terms(&self, f: &impl Fn(&Term) -> Option<Term>) -> Sequent {
        let all = |fs: &[Formula]| fs.iter().map(|x| x.map_terms(f)).collect();
        match self {
            Sequent::Async { n, gamma, delta, p } => Sequent::Async {
                n: all(n),
                gamma: all(gamma),
                delta: all(delta),
                p: all(p),
            },
            Sequent::FocusL(x) => Sequent::FocusL(x.map_terms(f)),
            Sequent::FocusR(x) => Sequent::FocusR(x.map_terms(f)),
        }
    }

    pub fn resolve(&self, store: &BindingStore) -> Sequent {
        self.map_terms(&|t| match t {
            Term::Var(_) => Some(store.resolve(t)),
            _ => None,
        })
    }

    pub fn apply_eigens(&self, theta: &[(Eigen, Term)]) -> Sequent {
        if theta.is_empty() {
            return self.clone();
        }
        self.map_terms(&|t| match t {
            Term::Eigen(e) => theta.iter().find(|(x, _)| x.id == e.id).map(|(_, u)| u.clone()),
            _ => None,
        })
    }

    pub fn mentions_eigen(&self, id: u32) -> bool {
        self.formulas().iter().any(|f| f.mentions_eigen(id))
    }

    pub fn for_each_var(&self, f: &mut impl FnMut(Var)) {
        for x in self.formulas() {
            x.for_each_term(&mut |t| t.for_each_var(f));
        }
    }
}

fn list(f: &mut fmt::Formatter<'_>, items: &[Formula]) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sequent::Async { n, gamma, delta, p } => {
                write!(f, "[")?;
                list(f, n)?;
                write!(f, "] ")?;
                list(f, gamma)?;
                write!(f, " |- ")?;
                list(f, delta)?;
                write!(f, " [")?;
                list(f, p)?;
                write!(f, "]")
            }
            Sequent::FocusL(x) => write!(f, "<{x}> |-"),
            Sequent::FocusR(x) => write!(f, "|- <{x}>"),
        }
    }
}
